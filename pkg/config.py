import argparse
from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from src.kb_model import MatchMode
from src.similarity import ComparisonMode, Direction
from src.utils import UsageError, make_error


class Command(StrEnum):
    VALIDATE = "validate"
    COMPARE = "compare"
    MATRIX = "matrix"
    CATEGORIZE = "categorize"


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


PAIR_COMMANDS = {Command.COMPARE, Command.CATEGORIZE}
CSV_COMMANDS = {Command.COMPARE, Command.MATRIX}


class CliConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    input_path: Path
    left: str | None = None
    right: str | None = None
    format: OutputFormat = OutputFormat.TEXT
    directional: bool = False
    alpha: bool = False
    strict_identifiability: bool = False
    output: Path | None = None

    @model_validator(mode="after")
    def _check_flags(self) -> "CliConfig":
        has_pair = self.left is not None or self.right is not None
        if self.command in PAIR_COMMANDS and (self.left is None or self.right is None):
            raise ValueError(f"{self.command.value} requires both --left and --right")
        if self.command not in PAIR_COMMANDS and has_pair:
            raise ValueError(f"{self.command.value} does not accept --left or --right")
        if self.format is OutputFormat.CSV and self.command not in CSV_COMMANDS:
            raise ValueError(f"{self.command.value} has no csv output")
        if self.format is OutputFormat.JSON and self.command is Command.VALIDATE:
            raise ValueError("validate has no json output")
        return self

    @property
    def comparison_mode(self) -> ComparisonMode:
        """Pair commands default to directional, matrix to symmetric."""
        directional = self.directional or self.command in PAIR_COMMANDS
        return ComparisonMode(
            match=MatchMode.ALPHA if self.alpha else MatchMode.EXACT,
            direction=Direction.DIRECTIONAL if directional else Direction.SYMMETRIC,
        )


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        make_error(f"{self.prog}: {message}", UsageError)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="kbsim",
        description="Qualitative similarity analysis of declarative knowledge bases",
    )
    parser.add_argument(
        "command",
        choices=[command.value for command in Command],
        help="What to do with the knowledge base file",
    )
    parser.add_argument("file", type=Path, help="Knowledge base file (.kb, UTF-8)")
    parser.add_argument("--left", help="Left knowledge name (compare/categorize)")
    parser.add_argument("--right", help="Right knowledge name (compare/categorize)")
    parser.add_argument(
        "--format",
        choices=[fmt.value for fmt in OutputFormat],
        default=OutputFormat.TEXT.value,
        help="Output format (default: text)",
    )
    parser.add_argument(
        "--directional",
        action="store_true",
        help="Use one-sided containment (default for compare and categorize)",
    )
    parser.add_argument(
        "--alpha",
        action="store_true",
        help="Match literals up to a consistent renaming of variables",
    )
    parser.add_argument(
        "--strict-identifiability",
        action="store_true",
        help="Only treat a pair as identifiable when all three classes are non-empty",
    )
    parser.add_argument(
        "--output",
        type=Path,
        help="Write the report to this file instead of standard output",
    )
    return parser


def parse_cli_args(argv: list[str] | None = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    try:
        return CliConfig(
            command=args.command,
            input_path=args.file,
            left=args.left,
            right=args.right,
            format=args.format,
            directional=args.directional,
            alpha=args.alpha,
            strict_identifiability=args.strict_identifiability,
            output=args.output,
        )
    except ValidationError as e:
        message = e.errors()[0]["msg"].removeprefix("Value error, ")
        make_error(f"kbsim: {message}", UsageError)
