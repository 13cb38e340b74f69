import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import VOICE_D, VOICE_IDS, VOICE_W
from oracles import saw_oracle, topsis_oracle
from vhdsim import madm
from vhdsim.errors import (
    DegenerateAlternative,
    DimensionMismatch,
    EmptyColumn,
    NonPositiveValue,
    NonPositiveWeight,
    WeightSumViolation,
)
from vhdsim.madm import CriterionSpec, DecisionMatrix, Direction, Normalization, NormalizedMatrix

B, C = Direction.BENEFIT, Direction.COST


def specs_for(weights, directions=None, norms=None):
    directions = directions or [B] * len(weights)
    norms = norms or [None] * len(weights)
    return [CriterionSpec(f"c{j}", d, w, n) for j, (w, d, n) in enumerate(zip(weights, directions, norms))]


# --- validate_weights ------------------------------------------------------

def test_voice_weights_valid():
    madm.validate_weights(specs_for([0.3, 0.2, 0.2, 0.3]))


def test_single_unit_weight_valid():
    madm.validate_weights(specs_for([1.0]))


def test_weight_sum_violation_reports_sum():
    with pytest.raises(WeightSumViolation) as exc:
        madm.validate_weights(specs_for([0.5, 0.6]))
    assert exc.value.actual == pytest.approx(1.1)


@pytest.mark.parametrize("weights", [[0.0, 1.0], [-0.5, 1.5]])
def test_non_positive_weight(weights):
    with pytest.raises(NonPositiveWeight):
        madm.validate_weights(specs_for(weights))


def test_weight_sum_tolerance_edge():
    madm.validate_weights(specs_for([0.5, 0.5 + 5e-10]))
    with pytest.raises(WeightSumViolation):
        madm.validate_weights(specs_for([0.5, 0.5 + 5e-9]))


def test_default_normalization_follows_direction():
    assert CriterionSpec("x", B, 1).normalization is Normalization.MAX_RATIO
    assert CriterionSpec("x", C, 1).normalization is Normalization.MIN_RATIO


# --- normalize_column -----------------------------------------------------

BANDWIDTH = [8, 1.5, 15, 7, 11, 1]
COST = [9, 8, 12, 6, 10, 9]


def test_max_ratio_bandwidth_column():
    got = madm.normalize_column(BANDWIDTH, Normalization.MAX_RATIO)
    np.testing.assert_allclose(got, [0.533, 0.1, 1.0, 0.467, 0.733, 0.067], atol=5e-4)


def test_inverse_min_ratio_cost_column():
    got = madm.normalize_column(COST, Normalization.INVERSE_MIN_RATIO)
    np.testing.assert_allclose(got, [1.5, 1.33, 2.0, 1.0, 1.67, 1.5], atol=5e-3)


def test_vector_norm_bandwidth_column():
    # sum of squares 462.25, norm 21.5
    expected = [x / 21.5 for x in BANDWIDTH]
    got = madm.normalize_column(BANDWIDTH, Normalization.VECTOR)
    np.testing.assert_allclose(got, expected, rtol=1e-15)
    np.testing.assert_allclose(got, [0.372, 0.069, 0.698, 0.326, 0.512, 0.047], atol=1e-3)


def test_min_ratio_constant_column():
    np.testing.assert_array_equal(madm.normalize_column([3.0, 3.0, 3.0], Normalization.MIN_RATIO), [1, 1, 1])


def test_normalize_column_accepts_spec():
    spec = CriterionSpec("bw", B, 1.0)
    np.testing.assert_array_equal(madm.normalize_column([1, 2, 4], spec), [0.25, 0.5, 1.0])


def test_normalize_column_errors():
    with pytest.raises(EmptyColumn):
        madm.normalize_column([], Normalization.MAX_RATIO)
    with pytest.raises(NonPositiveValue):
        madm.normalize_column([1.0, 0.0], Normalization.MIN_RATIO)
    with pytest.raises(NonPositiveValue):
        madm.normalize_column([1.0, -2.0], Normalization.VECTOR)


def test_printed_normalized_matrix_columns(voice_matrix):
    # printed normalized values for delay and jitter (x / x_max); the printed
    # A5 jitter 0.119 and A6 bandwidth 0.667 are typos for 0.110 and 0.067
    delay = madm.normalize_column(voice_matrix.column(0), Normalization.MAX_RATIO)
    np.testing.assert_allclose(delay, [0.984, 1, 0.984, 1, 0.984, 0.968], atol=5e-4)
    jitter = madm.normalize_column(voice_matrix.column(3), Normalization.MAX_RATIO)
    np.testing.assert_allclose(jitter[[0, 1, 2, 3, 5]], [0.438, 0.812, 0.061, 1, 0.263], atol=5e-4)


# --- DecisionMatrix -------------------------------------------------------

def test_matrix_rejects_non_positive():
    with pytest.raises(NonPositiveValue):
        DecisionMatrix(["a", "b"], [[1.0, 2.0], [0.0, 1.0]])


def test_matrix_rejects_infinite():
    with pytest.raises(NonPositiveValue):
        DecisionMatrix(["a", "b"], [[1.0, math.inf], [1.0, 1.0]])


def test_matrix_rejects_ragged():
    with pytest.raises(DimensionMismatch):
        DecisionMatrix(["a", "b"], [[1.0, 2.0], [1.0]])


def test_matrix_rejects_id_count_mismatch():
    with pytest.raises(DimensionMismatch):
        DecisionMatrix(["a"], [[1.0], [2.0]])


def test_matrix_is_read_only():
    m = DecisionMatrix(["a", "b"], [[1.0], [2.0]])
    with pytest.raises(ValueError):
        m.values[0, 0] = 5.0


# --- SAW ------------------------------------------------------------------

def test_saw_identity_single_alternative():
    got = madm.saw_scores(NormalizedMatrix(["a"], [[0.42]]), specs_for([1.0]))
    assert got.tolist() == [0.42]


def test_saw_matches_oracle_3x3():
    rng = np.random.default_rng(3)
    rows = rng.uniform(0.5, 20, size=(3, 3))
    dirs = [B, C, B]
    specs = specs_for([0.5, 0.3, 0.2], dirs)
    got = madm.saw_scores(madm.normalize(DecisionMatrix("xyz", rows), specs), specs)
    np.testing.assert_allclose(got, saw_oracle(rows.tolist(), [d is B for d in dirs], [0.5, 0.3, 0.2]), atol=1e-12)


def test_saw_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        madm.saw_scores(NormalizedMatrix(["a"], [[0.4, 0.6]]), specs_for([1.0]))


PRINTED_SAW_NORMALIZED = [
    [0.984, 0.533, 1.5, 0.438],
    [1, 0.1, 1.33, 0.812],
    [0.984, 1, 2, 0.061],
    [1, 0.467, 1, 1],
    [0.984, 0.733, 1.67, 0.119],
    [0.968, 0.667, 1.5, 0.263],
]


def test_saw_on_printed_normalized_matrix():
    # Five of the six printed scores follow from the printed normalized rows;
    # A3's printed 0.813 does not (its row sums to 0.9135).
    scores = madm.saw_scores(NormalizedMatrix(VOICE_IDS, PRINTED_SAW_NORMALIZED), specs_for(VOICE_W))
    printed = [0.833, 0.830, 0.813, 0.893, 0.809, 0.802]
    for i in (0, 1, 3, 4, 5):
        assert scores[i] == pytest.approx(printed[i], abs=0.005)
    assert scores[2] == pytest.approx(0.9135, abs=1e-3)


# --- TOPSIS stages ----------------------------------------------------------

def test_topsis_weighted_printed_cell():
    w = madm.topsis_weighted(NormalizedMatrix(["A1"], [[0.372]]), specs_for([0.2]))
    assert w.values[0, 0] == pytest.approx(0.074, abs=5e-4)


def test_topsis_weighted_unit_weight_unchanged():
    m = NormalizedMatrix(["a", "b"], [[0.6], [0.8]])
    np.testing.assert_array_equal(madm.topsis_weighted(m, specs_for([1.0])).values, m.values)


def test_topsis_weighted_matches_elementwise():
    rng = np.random.default_rng(5)
    vals = rng.uniform(0, 1, size=(4, 3))
    w = [0.2, 0.5, 0.3]
    got = madm.topsis_weighted(NormalizedMatrix("abcd", vals), specs_for(w)).values
    for i in range(4):
        for j in range(3):
            assert got[i, j] == vals[i, j] * w[j]


def test_topsis_ideals_single_benefit_column():
    pos, neg = madm.topsis_ideals(NormalizedMatrix("abc", [[1.0], [2.0], [3.0]]), specs_for([1.0]))
    assert pos.tolist() == [3.0] and neg.tolist() == [1.0]


def test_topsis_ideals_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        vals = rng.uniform(0, 1, size=(5, 4))
        dirs = [B if b else C for b in rng.integers(0, 2, size=4)]
        pos, neg = madm.topsis_ideals(NormalizedMatrix("abcde", vals), specs_for([0.25] * 4, dirs))
        for j in range(4):
            col = [vals[i][j] for i in range(5)]
            hi = lo = col[0]
            for v in col[1:]:
                hi = v if v > hi else hi
                lo = v if v < lo else lo
            assert (pos[j], neg[j]) == ((hi, lo) if dirs[j] is B else (lo, hi))


PRINTED_WEIGHTED = [
    [0.124, 0.074, 0.08, 0.094],
    [0.126, 0.014, 0.07, 0.175],
    [0.124, 0.136, 0.11, 0.131],
    [0.126, 0.098, 0.05, 0.215],
    [0.124, 0.102, 0.09, 0.024],
    [0.122, 0.009, 0.08, 0.057],
]


def test_topsis_stages_on_printed_weighted_matrix(voice_topsis_specs):
    # Ideals, separations and closeness printed for the voice example all
    # follow from the printed weighted matrix.
    weighted = NormalizedMatrix(VOICE_IDS, PRINTED_WEIGHTED)
    pos, neg = madm.topsis_ideals(weighted, voice_topsis_specs)
    np.testing.assert_allclose(pos, [0.126, 0.136, 0.05, 0.215], atol=1e-12)
    np.testing.assert_allclose(neg, [0.122, 0.009, 0.11, 0.024], atol=1e-12)
    sp, sn = madm.topsis_separations(weighted, (pos, neg))
    np.testing.assert_allclose(sp, [0.139, 0.129, 0.103, 0.038, 0.198, 0.205], atol=5e-3)
    np.testing.assert_allclose(sn, [0.100, 0.156, 0.166, 0.219, 0.095, 0.045], atol=5e-3)
    closeness = madm.topsis_closeness(sp, sn)
    np.testing.assert_allclose(closeness, [0.42, 0.55, 0.62, 0.85, 0.32, 0.18], atol=0.01)
    assert madm.rank_alternatives(closeness, VOICE_IDS).ids == ["A4", "A3", "A2", "A1", "A5", "A6"]


def test_topsis_ideals_from_matrix_d(voice_matrix, voice_topsis_specs):
    # Positive ideal agrees with the printed one (third entry read as 0.05).
    res = madm.topsis(voice_matrix, voice_topsis_specs)
    np.testing.assert_allclose(res.positive_ideal, [0.126, 0.136, 0.05, 0.215], atol=5e-3)


def test_separation_zero_at_positive_ideal():
    m = NormalizedMatrix(["a", "b"], [[0.3, 0.1], [0.1, 0.2]])
    sp, sn = madm.topsis_separations(m, (np.array([0.3, 0.1]), np.array([0.1, 0.2])))
    assert sp[0] == 0.0 and sn[1] == 0.0


def test_separations_match_oracle():
    rng = np.random.default_rng(2)
    vals = rng.uniform(0, 1, size=(6, 3))
    a, b = rng.uniform(0, 1, 3), rng.uniform(0, 1, 3)
    sp, sn = madm.topsis_separations(NormalizedMatrix("abcdef", vals), (a, b))
    for i in range(6):
        assert sp[i] == pytest.approx(math.sqrt(sum((a[j] - vals[i][j]) ** 2 for j in range(3))), abs=1e-15)
        assert sn[i] == pytest.approx(math.sqrt(sum((b[j] - vals[i][j]) ** 2 for j in range(3))), abs=1e-15)


def test_separations_shape_check():
    with pytest.raises(DimensionMismatch):
        madm.topsis_separations(NormalizedMatrix(["a"], [[0.1, 0.2]]), (np.zeros(3), np.zeros(3)))


def test_closeness_at_positive_ideal_is_one():
    assert madm.topsis_closeness([0.0], [0.3]).tolist() == [1.0]


def test_closeness_formula():
    rng = np.random.default_rng(8)
    sp, sn = rng.uniform(0.01, 1, 10), rng.uniform(0.01, 1, 10)
    got = madm.topsis_closeness(sp, sn)
    for i in range(10):
        assert got[i] == sn[i] / (sn[i] + sp[i])


def test_closeness_degenerate():
    with pytest.raises(DegenerateAlternative):
        madm.topsis_closeness([0.0, 0.0], [0.0, 0.0])


def test_topsis_identical_alternatives_degenerate():
    with pytest.raises(DegenerateAlternative):
        madm.topsis(DecisionMatrix(["a", "b"], [[1, 2], [1, 2]]), specs_for([0.5, 0.5]))


# --- ranking ---------------------------------------------------------------

def test_rank_printed_saw_scores():
    r = madm.rank_alternatives([0.833, 0.830, 0.813, 0.893, 0.809, 0.802], VOICE_IDS)
    assert r.ids == ["A4", "A1", "A2", "A3", "A5", "A6"]


def test_rank_printed_closeness():
    r = madm.rank_alternatives([0.42, 0.55, 0.62, 0.85, 0.32, 0.18], VOICE_IDS, "topsis")
    assert r.ids == ["A4", "A3", "A2", "A1", "A5", "A6"]
    assert r.method is madm.Method.TOPSIS


def test_rank_tie_break_by_id():
    assert madm.rank_alternatives([0.5, 0.5], ["B", "A"]).ids == ["A", "B"]


def test_rank_float_noise_is_a_tie():
    assert madm.rank_alternatives([0.3, 0.1 + 0.2], ["B", "A"]).ids == ["A", "B"]


def test_rank_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        madm.rank_alternatives([1.0], ["a", "b"])


# --- properties -------------------------------------------------------------

GRID = st.sampled_from([0.5, 1.0, 2.0, 3.0, 5.0, 8.0])


@st.composite
def problems(draw, min_rows=1):
    n = draw(st.integers(min_rows, 6))
    m = draw(st.integers(1, 4))
    rows = draw(st.lists(st.lists(GRID, min_size=m, max_size=m), min_size=n, max_size=n))
    raw_w = draw(st.lists(st.integers(1, 9), min_size=m, max_size=m))
    weights = [w / sum(raw_w) for w in raw_w]
    weights[-1] = 1.0 - math.fsum(weights[:-1])
    benefit = draw(st.lists(st.booleans(), min_size=m, max_size=m))
    return rows, weights, benefit


def _specs(weights, benefit):
    return specs_for(weights, [B if b else C for b in benefit])


def _ids(n):
    return [f"a{i}" for i in range(n)]


@given(problems())
@settings(max_examples=200, deadline=None)
def test_saw_oracle_equivalence_on_grid(problem):
    rows, weights, benefit = problem
    specs = _specs(weights, benefit)
    got = madm.saw_scores(madm.normalize(DecisionMatrix(_ids(len(rows)), rows), specs), specs)
    np.testing.assert_allclose(got, saw_oracle(rows, benefit, weights), rtol=0, atol=1e-12)


@given(problems(min_rows=2))
@settings(max_examples=200, deadline=None)
def test_topsis_oracle_equivalence_on_grid(problem):
    rows, weights, benefit = problem
    matrix = DecisionMatrix(_ids(len(rows)), rows)
    try:
        got = madm.topsis(matrix, _specs(weights, benefit)).closeness
    except DegenerateAlternative:
        assert all(r == rows[0] for r in rows)
        return
    np.testing.assert_allclose(got, topsis_oracle(rows, benefit, weights), rtol=0, atol=1e-12)
    assert np.all((got >= 0) & (got <= 1))


@given(problems(min_rows=2))
@settings(max_examples=100, deadline=None)
def test_vector_norm_columns_unit_length(problem):
    rows, _, _ = problem
    vn = madm.vector_normalize(DecisionMatrix(_ids(len(rows)), rows)).values
    np.testing.assert_allclose(np.sqrt((vn ** 2).sum(axis=0)), 1.0, atol=1e-9)
    assert np.all(vn > 0) and np.all(vn <= 1)


@given(problems(), st.sampled_from(list(Normalization)[:2]))
@settings(max_examples=100, deadline=None)
def test_ratio_normalizations_in_unit_interval(problem, norm):
    rows, _, _ = problem
    for j in range(len(rows[0])):
        col = madm.normalize_column([r[j] for r in rows], norm)
        assert np.all(col > 0) and np.all(col <= 1)


@given(problems(min_rows=2), st.data())
@settings(max_examples=100, deadline=None)
def test_column_scale_invariance(problem, data):
    rows, weights, benefit = problem
    j = data.draw(st.integers(0, len(weights) - 1))
    factor = data.draw(st.sampled_from([1e-3, 0.5, 2.0, 1e3]))
    specs = _specs(weights, benefit)
    scaled = [list(r) for r in rows]
    for r in scaled:
        r[j] *= factor
    a, b = DecisionMatrix(_ids(len(rows)), rows), DecisionMatrix(_ids(len(rows)), scaled)
    assert madm.saw(a, specs).ids == madm.saw(b, specs).ids
    try:
        ta = madm.topsis(a, specs).ranking.ids
    except DegenerateAlternative:
        return
    assert ta == madm.topsis(b, specs).ranking.ids


@given(problems(min_rows=2), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_permutation_equivariance(problem, rnd):
    rows, weights, benefit = problem
    n, m = len(rows), len(weights)
    specs = _specs(weights, benefit)
    ids = _ids(n)
    perm = list(range(n))
    rnd.shuffle(perm)
    cols = list(range(m))
    rnd.shuffle(cols)

    base = madm.saw_scores(madm.normalize(DecisionMatrix(ids, rows), specs), specs)
    row_perm = madm.saw_scores(madm.normalize(DecisionMatrix([ids[p] for p in perm], [rows[p] for p in perm]), specs), specs)
    np.testing.assert_allclose(row_perm, base[perm], atol=1e-12)
    col_specs = [specs[c] for c in cols]
    col_rows = [[r[c] for c in cols] for r in rows]
    col_perm = madm.saw_scores(madm.normalize(DecisionMatrix(ids, col_rows), col_specs), col_specs)
    np.testing.assert_allclose(col_perm, base, atol=1e-12)

    try:
        tbase = madm.topsis(DecisionMatrix(ids, rows), specs).closeness
    except DegenerateAlternative:
        return
    trow = madm.topsis(DecisionMatrix([ids[p] for p in perm], [rows[p] for p in perm]), specs).closeness
    np.testing.assert_allclose(trow, tbase[perm], atol=1e-12)
    tcol = madm.topsis(DecisionMatrix(ids, col_rows), col_specs).closeness
    np.testing.assert_allclose(tcol, tbase, atol=1e-12)


@given(problems(min_rows=1), st.data())
@settings(max_examples=100, deadline=None)
def test_saw_dominated_alternative_stability(problem, data):
    rows, weights, benefit = problem
    specs = _specs(weights, benefit)
    ids = _ids(len(rows))
    base = madm.saw(DecisionMatrix(ids, rows), specs)
    # weakly worse than every existing row on every criterion
    worse = []
    for j, b in enumerate(benefit):
        col = [r[j] for r in rows]
        shrink = data.draw(st.sampled_from([1.0, 0.5, 0.25]))
        worse.append(min(col) * shrink if b else max(col) / shrink)
    extended = madm.saw(DecisionMatrix(ids + ["zz"], rows + [worse]), specs)
    old = dict(base.entries)
    new = dict(extended.entries)
    for i in ids:
        assert new[i] == pytest.approx(old[i], abs=1e-12)
    assert extended.best == base.best
