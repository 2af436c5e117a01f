"""Observed-data representation for the paired 2x2x2 design.

Two binary tests and a reference (gold) standard are applied to every
subject; the data reduce to eight cell counts, s_ij for diseased subjects
and r_ij for healthy ones, where i is the result of test 1 and j the
result of test 2.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

from .errors import DomainError, IngestionError

__all__ = [
    "PairedCounts",
    "SubjectRecord",
    "CountsValidation",
    "counts_from_records",
    "validate_counts",
    "apply_continuity_correction",
    "read_records",
]

CELL_NAMES = ("s11", "s10", "s01", "s00", "r11", "r10", "r01", "r00")
MARGIN_NAMES = ("11", "10", "01", "00")

RECORD_HEADER = "d,t1,t2"


@dataclass(frozen=True)
class SubjectRecord:
    """One subject: gold-standard status and the two test results, all 0/1."""

    d: int
    t1: int
    t2: int

    def __post_init__(self):
        for name in ("d", "t1", "t2"):
            value = getattr(self, name)
            if value not in (0, 1):
                raise DomainError(f"record field {name} must be 0 or 1, got {value!r}")


@dataclass(frozen=True)
class PairedCounts:
    """The eight observed cell counts of the paired design.

    Cells are stored as reals so that continuity-corrected counts (+0.5)
    flow through every downstream formula unchanged; integer-ness is a
    property of ingestion, not of the type.
    """

    s11: float
    s10: float
    s01: float
    s00: float
    r11: float
    r10: float
    r01: float
    r00: float

    def __post_init__(self):
        for name in CELL_NAMES:
            value = getattr(self, name)
            if not value >= 0:
                raise DomainError(f"cell {name} must be non-negative, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def s(self) -> float:
        """Number of diseased subjects."""
        return self.s11 + self.s10 + self.s01 + self.s00

    @property
    def r(self) -> float:
        """Number of healthy subjects."""
        return self.r11 + self.r10 + self.r01 + self.r00

    @property
    def n(self) -> float:
        """Total sample size."""
        return self.s + self.r

    def cells(self) -> tuple[float, ...]:
        """Cells in canonical order (s11, s10, s01, s00, r11, r10, r01, r00)."""
        return (self.s11, self.s10, self.s01, self.s00,
                self.r11, self.r10, self.r01, self.r00)

    def margins(self) -> tuple[float, ...]:
        """Test-pattern margins s_ij + r_ij in order (11, 10, 01, 00)."""
        return (self.s11 + self.r11, self.s10 + self.r10,
                self.s01 + self.r01, self.s00 + self.r00)

    def swap_tests(self) -> "PairedCounts":
        """Relabel test 1 as test 2 and vice versa (transpose i and j)."""
        return PairedCounts(self.s11, self.s01, self.s10, self.s00,
                            self.r11, self.r01, self.r10, self.r00)


@dataclass(frozen=True)
class CountsValidation:
    """Advisory validation outcome; downstream operations re-check and raise."""

    estimable: bool
    degenerate_margins: tuple[str, ...]
    correction_required: bool


def counts_from_records(records) -> PairedCounts:
    """Tabulate per-subject records into the eight cell counts.

    Accepts SubjectRecord instances or (d, t1, t2) triples. A non-binary
    field raises IngestionError naming the offending row (0-based).
    """
    cells = {name: 0 for name in CELL_NAMES}
    for i, rec in enumerate(records):
        if isinstance(rec, SubjectRecord):
            d, t1, t2 = rec.d, rec.t1, rec.t2
        else:
            try:
                d, t1, t2 = rec
            except (TypeError, ValueError):
                raise IngestionError(f"record {i}: expected (d, t1, t2), got {rec!r}") from None
        if d not in (0, 1) or t1 not in (0, 1) or t2 not in (0, 1):
            raise IngestionError(f"record {i}: fields must be 0 or 1, got {(d, t1, t2)!r}")
        prefix = "s" if d == 1 else "r"
        cells[f"{prefix}{t1}{t2}"] += 1
    return PairedCounts(**cells)


def validate_counts(counts: PairedCounts) -> CountsValidation:
    """Report degenerate configurations; never raises.

    The kappas are estimable only when both strata are non-empty; when two
    or more of the four test-pattern margins are zero the frequentist
    variances collapse and the +0.5 correction is required.
    """
    degenerate = tuple(name for name, margin in zip(MARGIN_NAMES, counts.margins())
                       if margin == 0)
    return CountsValidation(
        estimable=counts.s > 0 and counts.r > 0,
        degenerate_margins=degenerate,
        correction_required=len(degenerate) >= 2,
    )


def apply_continuity_correction(counts: PairedCounts) -> PairedCounts:
    """Return a new table with 0.5 added to every cell (n grows by 4)."""
    return PairedCounts(*(cell + 0.5 for cell in counts.cells()))


def _parse_record_lines(lines, source: str) -> list[SubjectRecord]:
    records = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if line != RECORD_HEADER:
                raise IngestionError(
                    f"{source}:{lineno}: expected header {RECORD_HEADER!r}, got {line!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise IngestionError(f"{source}:{lineno}: expected 3 comma-separated values")
        values = []
        for part in parts:
            part = part.strip()
            if part not in ("0", "1"):
                raise IngestionError(f"{source}:{lineno}: values must be 0 or 1, got {part!r}")
            values.append(int(part))
        records.append(SubjectRecord(*values))
    if not header_seen:
        raise IngestionError(f"{source}: empty file, expected header {RECORD_HEADER!r}")
    return records


def read_records(path_or_file) -> list[SubjectRecord]:
    """Read subject records from a delimited text file (header ``d,t1,t2``)."""
    if isinstance(path_or_file, (str, os.PathLike)):
        with io.open(path_or_file, "r", encoding="utf-8") as fh:
            return _parse_record_lines(fh, str(path_or_file))
    return _parse_record_lines(path_or_file, "<stream>")
