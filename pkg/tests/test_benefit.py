import math
import random

import pytest

from cleanroutes import (
    BenefitReport,
    ExposureCategory,
    ExposureSummary,
    InvalidDataError,
    RiskModel,
    categorize,
    cohort_stats,
    compare,
    load_risk_models,
    relative_risk,
    render_shift_matrix,
    shift_matrix,
)
from cleanroutes.benefit import ShiftMatrix

LOW, MOD, HIGH = ExposureCategory.LOW, ExposureCategory.MODERATE, ExposureCategory.HIGH


def _summary(mean):
    return ExposureSummary(mean_concentration=float(mean), category=categorize(mean),
                           sample_count=10, missing_count=0)


def _models():
    return {m.id: m for m in load_risk_models()}


def test_builtin_catalog_anchors():
    models = _models()
    assert models["hrapie-bronchitis"].rr_per_unit == 1.021
    assert models["hrapie-bronchitis"].unit_delta_ugm3 == 1.0
    assert models["hrapie-mortality"].rr_per_unit == 1.055
    assert models["hrapie-mortality"].unit_delta_ugm3 == 10.0
    assert (models["hrapie-mortality"].ci_low, models["hrapie-mortality"].ci_high) == (1.031, 1.08)
    assert models["atkinson-all-cause"].rr_per_unit == 1.02
    assert models["atkinson-cardiovascular"].rr_per_unit == 1.03
    assert models["atkinson-respiratory"].rr_per_unit == 1.03
    assert models["atkinson-lung-cancer"].rr_per_unit == 1.05


def test_relative_risk_quoted_increments():
    models = _models()
    assert relative_risk(10.0, models["hrapie-mortality"]) == 1.055
    assert relative_risk(1.0, models["hrapie-bronchitis"]) == 1.021
    assert relative_risk(10.0, models["atkinson-all-cause"]) == 1.02
    assert relative_risk(0.0, models["atkinson-all-cause"]) == 1.0


def test_relative_risk_power_law():
    model = _models()["atkinson-all-cause"]
    assert relative_risk(20.0, model) == pytest.approx(1.02**2, abs=1e-15)
    assert relative_risk(20.0, model) == pytest.approx(1.0404, abs=1e-12)


def test_relative_risk_multiplicative_and_increasing():
    model = _models()["hrapie-mortality"]
    rng = random.Random(17)
    for _ in range(100):
        a = rng.uniform(-25, 25)
        b = rng.uniform(-25, 25)
        assert relative_risk(a + b, model) == pytest.approx(
            relative_risk(a, model) * relative_risk(b, model), rel=1e-12
        )
    deltas = sorted(rng.uniform(-30, 30) for _ in range(50))
    factors = [relative_risk(d, model) for d in deltas]
    assert factors == sorted(factors)


def test_invalid_model_rejected():
    with pytest.raises(InvalidDataError):
        RiskModel(id="x", endpoint="x", rr_per_unit=0.0, unit_delta_ugm3=10.0)
    with pytest.raises(InvalidDataError):
        RiskModel(id="x", endpoint="x", rr_per_unit=1.02, unit_delta_ugm3=0.0)


def test_compare_moderate_to_low():
    report = compare(_summary(48.0), [_summary(39.0)])
    assert report.delta == 9.0
    assert report.category_shift == (MOD, LOW)
    assert report.best_alternative.mean_concentration == 39.0


def test_compare_empty_alternatives():
    report = compare(_summary(48.0), [])
    assert report.best_alternative is None
    assert report.delta is None
    assert report.category_shift is None
    assert report.risk_ratios == ()


def test_compare_high_to_moderate_with_rr():
    models = [_models()["hrapie-mortality"]]
    report = compare(_summary(52.0), [_summary(41.0)], models)
    assert report.delta == 11.0
    assert report.category_shift == (HIGH, MOD)
    assert dict(report.risk_ratios)["hrapie-mortality"] == pytest.approx(1.055 ** (11.0 / 10.0), abs=1e-15)


def test_compare_takes_rank_one_even_if_worse():
    # the ranked list's first entry is definitional, negative delta preserved
    report = compare(_summary(30.0), [_summary(31.0), _summary(29.0)])
    assert report.delta == pytest.approx(-1.0)
    assert report.best_alternative.mean_concentration == 31.0


def _report(cur, alt):
    current = _summary(cur)
    if alt is None:
        return BenefitReport(current=current, best_alternative=None, delta=None,
                             category_shift=None, risk_ratios=())
    best = _summary(alt)
    return BenefitReport(current=current, best_alternative=best, delta=cur - alt,
                         category_shift=(current.category, best.category), risk_ratios=())


def test_shift_matrix_three_reports():
    reports = [_report(45.0, 38.0), _report(60.0, 55.0), _report(30.0, 28.0)]
    m = shift_matrix(reports)
    assert m.cells[int(LOW)][int(MOD)] == 33.3
    assert m.cells[int(HIGH)][int(HIGH)] == 33.3
    assert m.cells[int(LOW)][int(LOW)] == 33.3
    assert m.column_totals == (33.3, 33.3, 33.3)
    assert abs(m.grand_total - 100.0) <= 0.5


def test_shift_matrix_all_identical():
    m = shift_matrix([_report(30.0, 29.0)] * 7)
    assert m.cells[int(LOW)][int(LOW)] == 100.0
    assert m.grand_total == 100.0


def test_shift_matrix_missing_alternative_counts_on_diagonal():
    m = shift_matrix([_report(45.0, None), _report(45.0, 44.0)])
    assert m.cells[int(MOD)][int(MOD)] == 100.0


def test_shift_matrix_empty_errors():
    with pytest.raises(InvalidDataError):
        shift_matrix([])


def test_shift_matrix_permutation_invariant():
    rng = random.Random(41)
    reports = [_report(rng.uniform(20, 70), rng.choice([None, rng.uniform(20, 70)])) for _ in range(40)]
    m1 = shift_matrix(reports)
    shuffled = reports[:]
    rng.shuffle(shuffled)
    m2 = shift_matrix(shuffled)
    assert m1.cells == m2.cells
    assert m1.column_totals == m2.column_totals


def test_reference_table_rendering():
    m = ShiftMatrix.from_cells([[30, 17, 7], [3, 20, 10], [0, 0, 13]])
    assert m.column_totals == (33.0, 37.0, 30.0)
    text = render_shift_matrix(m)
    lines = text.splitlines()
    assert len(lines) == 5  # header + 3 category rows + grand total
    assert lines[1].split()[-3:] == ["30", "17", "7"]
    assert lines[4].startswith("Grand Total")
    assert lines[4].split()[-3:] == ["33", "37", "30"]


def test_cohort_stats_single_report():
    stats = cohort_stats([_report(30.0, 28.0)])
    assert stats.distribution[LOW] == 100.0
    entry = stats.within_category[LOW]
    assert (entry.mean, entry.min, entry.max) == (2.0, 2.0, 2.0)
    assert stats.within_category[MOD] is None


def test_cohort_stats_low_extremes():
    stats = cohort_stats([_report(30.0, 31.0), _report(35.0, 30.0)])
    entry = stats.within_category[LOW]
    assert entry.mean == 2.0
    assert entry.min == -1.0
    assert entry.max == 5.0


def test_cohort_stats_matches_recomputation():
    rng = random.Random(59)
    reports = []
    for _ in range(10):
        cur = rng.uniform(20, 70)
        alt = rng.choice([None, cur - rng.uniform(-4, 12)])
        reports.append(_report(cur, max(alt, 0.0) if alt is not None else None))
    stats = cohort_stats(reports)
    for cat in (LOW, MOD, HIGH):
        expected = [r for r in reports if r.current.category is cat]
        assert stats.distribution[cat] == round(100.0 * len(expected) / len(reports), 1)
        unchanged = [r.delta for r in expected if r.delta is not None and r.best_alternative.category is cat]
        entry = stats.within_category[cat]
        if unchanged:
            assert entry.mean == pytest.approx(sum(unchanged) / len(unchanged))
            assert entry.min == min(unchanged)
            assert entry.max == max(unchanged)
            assert entry.min <= entry.mean <= entry.max
        else:
            assert entry is None
    assert abs(sum(stats.distribution.values()) - 100.0) <= 0.5


def test_cohort_stats_empty_errors():
    with pytest.raises(InvalidDataError):
        cohort_stats([])
