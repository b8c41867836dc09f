import logging
import sys

from pydantic import BaseModel, ConfigDict

from config import CliConfig, Command, OutputFormat, parse_cli_args
from src.kb_model import Knowledge, KnowledgeBase, PropertyPolarity, polarity_profile
from src.kb_parser import KnowledgeBaseParseError, parse_knowledge_base
from src.reporting import (
    CategoryPayload,
    PairPayload,
    Report,
    ReportMetadata,
    SpacePayload,
    render_csv,
    render_json,
    render_space_csv,
    render_text,
)
from src.similarity import (
    Direction,
    PairComparison,
    cardinality_signature,
    category_configuration,
    is_identifiable,
    space_summary,
    super_category,
)
from src.similarity import knowledge_space as core_knowledge_space
from src.similarity import property_space as core_property_space
from src.similarity import source_information as core_source_information
from src.utils import (
    InputFileError,
    KbsimError,
    UnknownKnowledgeError,
    UsageError,
    handle_input_file,
    is_file_writeable,
    make_error,
    read_input_file,
    suggest_names,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3


class CommandResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: int
    stdout: str = ""
    stderr: str = ""


def resolve_knowledge(kb: KnowledgeBase, name: str) -> Knowledge:
    """Look a knowledge up by its exact (case-sensitive) name."""
    knowledge = kb.get(name)
    if knowledge is None:
        suggestions = suggest_names(name, kb.names)
        message = f"Unknown knowledge '{name}'"
        if suggestions:
            message += f". Did you mean: {', '.join(suggestions)}?"
        raise UnknownKnowledgeError(message, suggestions)
    return knowledge


def _plural(count: int, singular: str, plural: str | None = None) -> str:
    return f"{count} {singular if count == 1 else plural or singular + 's'}"


def _metadata(config: CliConfig) -> ReportMetadata:
    return ReportMetadata(
        mode=config.comparison_mode,
        input=config.input_path.name,
        strict_identifiability=config.strict_identifiability,
    )


def _render(report: Report, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return render_json(report)
    return render_text(report)


def validate(config: CliConfig, kb: KnowledgeBase) -> str:
    lines = [f"{config.input_path.name}: {_plural(len(kb.knowledges), 'knowledge')}"]
    for knowledge in kb.knowledges:
        profile = polarity_profile(knowledge)
        lines.append(
            f"  {knowledge.name}: {_plural(len(knowledge.properties), 'property', 'properties')} "
            f"({profile[PropertyPolarity.ATTRACTION]} attraction, "
            f"{profile[PropertyPolarity.REPULSION]} repulsion)"
        )
    return "\n".join(lines) + "\n"


def compare(config: CliConfig, kb: KnowledgeBase) -> str:
    left = resolve_knowledge(kb, config.left)
    right = resolve_knowledge(kb, config.right)
    grid = core_property_space(left, right, config.comparison_mode)
    if config.format is OutputFormat.CSV:
        return render_csv(grid)
    comparison = PairComparison(matrix=grid, signature=cardinality_signature(grid))
    report = Report(metadata=_metadata(config), payload=PairPayload(comparison=comparison))
    return _render(report, config.format)


def matrix(config: CliConfig, kb: KnowledgeBase) -> str:
    space = core_knowledge_space(kb, config.comparison_mode)
    if config.format is OutputFormat.CSV:
        return render_space_csv(space)
    source = None
    if space.mode.direction is Direction.SYMMETRIC:
        source = core_source_information(space)
    else:
        logger.info("directional space: source information is not extracted")
    payload = SpacePayload(space=space, source_information=source, summary=space_summary(space))
    return _render(Report(metadata=_metadata(config), payload=payload), config.format)


def categorize(config: CliConfig, kb: KnowledgeBase) -> str:
    left = resolve_knowledge(kb, config.left)
    right = resolve_knowledge(kb, config.right)
    signature = cardinality_signature(core_property_space(left, right, config.comparison_mode))
    configuration = category_configuration(signature)
    identifiable = is_identifiable(configuration, strict=config.strict_identifiability)
    payload = CategoryPayload(
        left=left.name,
        right=right.name,
        signature=signature,
        configuration=configuration,
        identifiable=identifiable,
        super_category=super_category(configuration) if identifiable else None,
    )
    return _render(Report(metadata=_metadata(config), payload=payload), config.format)


COMMANDS = {
    Command.VALIDATE: validate,
    Command.COMPARE: compare,
    Command.MATRIX: matrix,
    Command.CATEGORIZE: categorize,
}


def run(config: CliConfig, text: str) -> CommandResult:
    """
    Parse the knowledge base text and execute one command.

    Args:
        config: Validated command-line configuration
        text: Contents of the input file

    Returns:
        Exit status plus the text destined for standard output and standard error
    """
    try:
        kb = parse_knowledge_base(text)
    except KnowledgeBaseParseError as e:
        stderr = "".join(f"{config.input_path}:{error}\n" for error in e.errors)
        return CommandResult(status=EXIT_PARSE, stderr=stderr)

    try:
        output = COMMANDS[config.command](config, kb)
    except KbsimError as e:
        return CommandResult(status=EXIT_SEMANTIC, stderr=f"Error: {e}\n")
    return CommandResult(status=EXIT_OK, stdout=output)


def _write_output(config: CliConfig, output: str) -> None:
    if config.output is None:
        sys.stdout.write(output)
        return
    if not is_file_writeable(config.output):
        make_error(f"Output file ({config.output}) is not writeable", UsageError)
    try:
        config.output.write_text(output, encoding="utf-8", newline="")
    except OSError as e:
        make_error(f"Error writing output file ({config.output}): {e}", UsageError)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = parse_cli_args(argv)
        text = read_input_file(handle_input_file(str(config.input_path)))
    except (UsageError, InputFileError) as e:
        sys.stderr.write(f"Error: {e}\n")
        return EXIT_USAGE

    result = run(config, text)
    if result.stderr:
        sys.stderr.write(result.stderr)
    if result.status == EXIT_OK:
        try:
            _write_output(config, result.stdout)
        except UsageError as e:
            sys.stderr.write(f"Error: {e}\n")
            return EXIT_USAGE
    return result.status


if __name__ == "__main__":
    sys.exit(main())
