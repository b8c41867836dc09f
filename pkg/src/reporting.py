"""
Reporting Module

Renders comparison results as JSON (versioned schema), CSV (one row per
matrix cell) or aligned text tables. Text output uses `=`, `~` and `#` for
equal, similar and different; JSON and CSV carry the class names.
"""

import csv
import io
import json
import logging
from enum import StrEnum
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field

from src import __version__
from src.similarity import (
    CardinalitySignature,
    CategoryConfiguration,
    ComparisonMode,
    KnowledgeSimilaritySpace,
    PairComparison,
    PropertyComparisonMatrix,
    SourceInformation,
    SpaceSummary,
    SuperCategory,
    category_configuration,
    is_identifiable,
    super_category,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_HEADER = ["left_knowledge", "left_property", "right_knowledge", "right_property", "class"]


class ReportKind(StrEnum):
    PAIR = "pair-report"
    SPACE = "space-report"
    CATEGORY = "category-report"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)


class ReportMetadata(_Frozen):
    mode: ComparisonMode
    input: str | None = None
    tool_version: str = __version__
    strict_identifiability: bool = False


class PairPayload(_Frozen):
    kind: Literal["pair-report"] = "pair-report"
    comparison: PairComparison


class SpacePayload(_Frozen):
    kind: Literal["space-report"] = "space-report"
    space: KnowledgeSimilaritySpace
    source_information: SourceInformation | None = None
    summary: SpaceSummary


class CategoryPayload(_Frozen):
    kind: Literal["category-report"] = "category-report"
    left: str
    right: str
    signature: CardinalitySignature
    configuration: CategoryConfiguration
    identifiable: bool
    super_category: SuperCategory | None = None


Payload = Annotated[PairPayload | SpacePayload | CategoryPayload, Field(discriminator="kind")]


class Report(_Frozen):
    schema_version: Literal[1] = SCHEMA_VERSION
    metadata: ReportMetadata
    payload: Payload

    @computed_field
    @property
    def kind(self) -> ReportKind:
        return ReportKind(self.payload.kind)


# JSON


def render_json(r: Report) -> str:
    document = r.model_dump(mode="json", by_alias=True)
    output = json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    logger.debug("JSON %s: %d bytes", r.kind.value, len(output))
    return output


def parse_report_json(text: str) -> Report:
    return Report.model_validate(json.loads(text))


# CSV


def _write_matrix_rows(writer, m: PropertyComparisonMatrix) -> None:
    for i, row in enumerate(m.cells, start=1):
        for j, cls in enumerate(row, start=1):
            writer.writerow([m.left, j, m.right, i, cls.value])


def render_csv(m: PropertyComparisonMatrix) -> str:
    """One row per cell, ordered by right property then left property."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    _write_matrix_rows(writer, m)
    return buffer.getvalue()


def render_space_csv(space: KnowledgeSimilaritySpace) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for entry in space.entries:
        _write_matrix_rows(writer, entry.matrix)
    return buffer.getvalue()


# Text


def _signature_line(sig: CardinalitySignature) -> str:
    return f"equal: {sig.n_equal}  similar: {sig.n_similar}  different: {sig.n_different}"


def _super_category_line(category: SuperCategory | None) -> str:
    if category is None:
        return "super-category: none"
    glyphs = ", ".join(member.glyph for member in category.members)
    return f"super-category: case {int(category.case)} ({glyphs})"


def _entry_super_category(entry: PairComparison) -> SuperCategory | None:
    configuration = category_configuration(entry.signature)
    return super_category(configuration) if is_identifiable(configuration) else None


def _pair_header(left: str, right: str, mode: ComparisonMode) -> str:
    return f"{left} / {right}  [{mode}]"


def _matrix_lines(m: PropertyComparisonMatrix) -> list[str]:
    if m.is_empty:
        return ["no comparisons"]
    col_labels = [f"{m.left}.P{j}" for j in range(1, m.cols + 1)]
    row_labels = [f"{m.right}.P{i}" for i in range(1, m.rows + 1)]
    label_width = max(len(label) for label in row_labels)
    widths = [len(label) for label in col_labels]

    lines = [(" " * label_width + "  " + "  ".join(col_labels)).rstrip()]
    for label, row in zip(row_labels, m.cells):
        cells = "  ".join(cls.glyph.ljust(width) for cls, width in zip(row, widths))
        lines.append(f"{label.ljust(label_width)}  {cells}".rstrip())
    return lines


def _pair_lines(comparison: PairComparison, mode: ComparisonMode) -> list[str]:
    return [
        _pair_header(comparison.left, comparison.right, mode),
        *_matrix_lines(comparison.matrix),
        _signature_line(comparison.signature),
    ]


def _space_lines(payload: SpacePayload) -> list[str]:
    space = payload.space
    lines = [
        f"knowledge similarity space: {len(space.names)} knowledges, "
        f"{len(space.entries)} ordered pairs  [{space.mode}]"
    ]
    if not space.entries:
        lines.append("no comparisons")
        return lines
    for entry in space.entries:
        lines.append("")
        lines.extend(_pair_lines(entry, space.mode))
        lines.append(_super_category_line(_entry_super_category(entry)))

    lines.append("")
    if payload.source_information is None:
        lines.append("source information: unavailable for a directional space")
    else:
        pairs = payload.source_information.entries
        lines.append(f"source information: {len(pairs)} pairs")
        width = max((len(f"{e.left} / {e.right}") for e in pairs), default=0)
        for entry in pairs:
            label = f"{entry.left} / {entry.right}".ljust(width)
            lines.append(f"  {label}  {_signature_line(entry.signature)}")

    lines.append("")
    lines.append(f"overall: {_signature_line(payload.summary.signature)}")
    lines.append(_super_category_line(payload.summary.super_category))
    return lines


def _category_lines(payload: CategoryPayload, metadata: ReportMetadata) -> list[str]:
    cfg = payload.configuration
    flags = "  ".join(
        f"{name}={'yes' if flag else 'no'}"
        for name, flag in (
            ("equal", cfg.equal_nonempty),
            ("similar", cfg.similar_nonempty),
            ("different", cfg.different_nonempty),
        )
    )
    reading = "strict" if metadata.strict_identifiability else "union"
    return [
        _pair_header(payload.left, payload.right, metadata.mode),
        _signature_line(payload.signature),
        f"configuration: {flags}",
        f"identifiable: {'yes' if payload.identifiable else 'no'} (reading: {reading})",
        _super_category_line(payload.super_category),
    ]


def render_text(r: Report) -> str:
    payload = r.payload
    if isinstance(payload, PairPayload):
        lines = _pair_lines(payload.comparison, r.metadata.mode)
    elif isinstance(payload, SpacePayload):
        lines = _space_lines(payload)
    else:
        lines = _category_lines(payload, r.metadata)
    return "\n".join(lines) + "\n"
