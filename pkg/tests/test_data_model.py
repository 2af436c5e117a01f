import numpy as np
import pytest

from kappacmp.data_model import (
    PairedCounts,
    SubjectRecord,
    apply_continuity_correction,
    counts_from_records,
    read_records,
    validate_counts,
)
from kappacmp.errors import DomainError, IngestionError


def table8_records():
    """Per-subject records that tabulate back to the n=300 worked example."""
    cells = {("s", 1, 1): 41, ("s", 1, 0): 0, ("s", 0, 1): 40, ("s", 0, 0): 8,
             ("r", 1, 1): 5, ("r", 1, 0): 1, ("r", 0, 1): 24, ("r", 0, 0): 181}
    records = []
    for (stratum, t1, t2), count in cells.items():
        d = 1 if stratum == "s" else 0
        records.extend([SubjectRecord(d, t1, t2)] * count)
    return records


class TestPairedCounts:
    def test_derived_totals(self, table8):
        assert table8.s == 89
        assert table8.r == 211
        assert table8.n == 300

    def test_negative_cell_rejected(self):
        with pytest.raises(DomainError):
            PairedCounts(1, 2, 3, -1, 0, 0, 0, 0)

    def test_swap_tests_transposes(self, table8):
        swapped = table8.swap_tests()
        assert swapped.s10 == table8.s01
        assert swapped.r01 == table8.r10
        assert swapped.swap_tests() == table8


class TestCountsFromRecords:
    def test_empty_sequence(self):
        counts = counts_from_records([])
        assert counts.cells() == (0,) * 8
        assert counts.n == 0

    def test_table8_reconstruction(self, table8):
        assert counts_from_records(table8_records()) == table8

    def test_single_record(self):
        counts = counts_from_records([SubjectRecord(1, 1, 0)])
        assert counts.s10 == 1
        assert sum(counts.cells()) == 1

    def test_permutation_invariant(self):
        records = table8_records()
        rng = np.random.RandomState(0)
        shuffled = list(records)
        rng.shuffle(shuffled)
        assert counts_from_records(shuffled) == counts_from_records(records)

    def test_tuples_accepted(self):
        assert counts_from_records([(1, 1, 1), (0, 0, 0)]) == \
            PairedCounts(1, 0, 0, 0, 0, 0, 0, 1)

    def test_bad_row_named(self):
        with pytest.raises(IngestionError, match="record 2"):
            counts_from_records([(1, 1, 1), (0, 0, 0), (1, 2, 0)])

    def test_record_construction_rejects_non_binary(self):
        with pytest.raises(DomainError):
            SubjectRecord(1, 1, 3)


class TestValidateCounts:
    def test_table8_is_clean(self, table8):
        v = validate_counts(table8)
        assert v.estimable
        assert v.degenerate_margins == ()
        assert not v.correction_required

    def test_all_diseased_not_estimable(self):
        v = validate_counts(PairedCounts(3, 2, 1, 4, 0, 0, 0, 0))
        assert not v.estimable

    def test_two_zero_margins_need_correction(self):
        # s10+r10 = s01+r01 = 0 with both strata populated
        v = validate_counts(PairedCounts(5, 0, 0, 3, 2, 0, 0, 7))
        assert v.estimable
        assert v.degenerate_margins == ("10", "01")
        assert v.correction_required

    def test_single_zero_margin_is_fine(self):
        v = validate_counts(PairedCounts(5, 0, 1, 3, 2, 0, 3, 7))
        assert v.degenerate_margins == ("10",)
        assert not v.correction_required

    def test_corrected_counts_always_estimable(self):
        for cells in [(0,) * 8, (3, 0, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 2, 0, 0, 0)]:
            corrected = apply_continuity_correction(PairedCounts(*cells))
            assert validate_counts(corrected).estimable


class TestContinuityCorrection:
    def test_zero_counts(self):
        corrected = apply_continuity_correction(PairedCounts(*(0,) * 8))
        assert corrected.cells() == (0.5,) * 8
        assert corrected.n == 4

    def test_table8(self, table8):
        corrected = apply_continuity_correction(table8)
        assert corrected.s11 == 41.5
        assert corrected.r00 == 181.5
        assert corrected.n == 304
        assert table8.s11 == 41  # value semantics: original untouched

    def test_twice_adds_one(self, table8):
        twice = apply_continuity_correction(apply_continuity_correction(table8))
        assert twice.cells() == tuple(c + 1.0 for c in table8.cells())

    def test_preserves_cell_differences(self, table8):
        corrected = apply_continuity_correction(table8)
        base = table8.cells()
        fixed = corrected.cells()
        for i in range(8):
            for j in range(8):
                assert fixed[i] - fixed[j] == pytest.approx(base[i] - base[j])


class TestRecordFile:
    def test_round_trip(self, tmp_path, table8):
        path = tmp_path / "records.csv"
        lines = ["d,t1,t2"]
        lines += [f"{r.d},{r.t1},{r.t2}" for r in table8_records()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert counts_from_records(read_records(path)) == table8

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t1,t2,d\n1,1,1\n", encoding="utf-8")
        with pytest.raises(IngestionError, match="header"):
            read_records(path)

    def test_bad_value_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("d,t1,t2\n1,1,1\n0,2,0\n", encoding="utf-8")
        with pytest.raises(IngestionError, match=":3"):
            read_records(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(IngestionError):
            read_records(path)
