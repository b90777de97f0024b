import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from wsauc.errors import DegenerateInputError, InputError
from wsauc.metrics import (
    ScorePair,
    auc_exact,
    opauc_eval,
    rpauc_eval,
    rpauc_trim_indices,
    tpauc_eval,
)
from wsauc.oracle import naive_auc, naive_opauc, naive_rpauc, naive_tpauc

scores_list = st.lists(
    st.floats(min_value=-100.0, max_value=100.0, allow_nan=False), min_size=1, max_size=25
)


def test_auc_reference_cases():
    assert auc_exact(ScorePair([2.0, 3.0], [1.0])) == 1.0
    assert auc_exact(ScorePair([1.0], [1.0])) == 0.5
    assert auc_exact(ScorePair([0.9, 0.2], [0.5, 0.1])) == 0.75


def test_auc_rejects_empty_side():
    with pytest.raises(InputError):
        ScorePair([], [1.0])
    with pytest.raises(InputError):
        ScorePair([1.0], [float("nan")])


def test_opauc_reference_cases():
    sp = ScorePair([0.9, 0.2], [0.5, 0.1])
    # hand ROC: (0,0) -> (0,.5) -> (.5,.5) -> (.5,1) -> (1,1)
    assert opauc_eval(sp, 0.0, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert opauc_eval(sp, 0.0, 1.0) == pytest.approx(auc_exact(sp), abs=1e-12)
    perfect = ScorePair([3.0, 2.0], [1.0, 0.0])
    assert opauc_eval(perfect, 0.1, 0.7) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InputError):
        opauc_eval(sp, 0.5, 0.5)
    with pytest.raises(InputError):
        opauc_eval(sp, -0.1, 0.5)


def test_tpauc_reference_cases():
    sp = ScorePair([0.9, 0.2], [0.5, 0.1])
    assert tpauc_eval(sp, 1.0, 0.0) == auc_exact(sp)
    # keep bottom positive {0.2} and top negative {0.5}: reversed pair
    assert tpauc_eval(sp, 0.5, 0.5) == 0.0
    perfect = ScorePair([3.0, 2.0], [1.0, 0.0])
    assert tpauc_eval(perfect, 0.5, 0.5) == 1.0
    with pytest.raises(InputError):
        tpauc_eval(sp, 0.0, 0.5)
    with pytest.raises(DegenerateInputError):
        tpauc_eval(sp, 0.2, 0.0)  # floor(0.2 * 2) = 0 negatives kept


def test_rpauc_reference_cases():
    sp = ScorePair([0.9, 0.2, 0.8], [0.5, 0.1, 0.6])
    # alpha = beta = 1/3 keeps positives {0.9, 0.8} and negatives {0.5, 0.1}
    assert rpauc_eval(sp, 1.0 / 3.0, 1.0 / 3.0) == 1.0
    perfect = ScorePair([3.0, 2.0, 1.5], [1.0, 0.0, -1.0])
    assert rpauc_eval(perfect, 0.4, 0.4) == 1.0
    with pytest.raises(DegenerateInputError):
        rpauc_eval(ScorePair([1.0], [0.0]), 0.99, 0.0)


def test_rpauc_zero_trim_is_auc_bitwise(rng):
    for _ in range(25):
        sp = ScorePair(rng.normal(size=rng.integers(1, 20)),
                       rng.normal(size=rng.integers(1, 20)))
        assert rpauc_eval(sp, 0.0, 0.0) == auc_exact(sp)


def test_trim_count_uses_exact_thirds():
    # floor((1 - 1/3) * 3) must be 2 despite 0.666... * 3 = 1.9999999999999998
    ip, im = rpauc_trim_indices([3.0, 2.0, 1.0], [1.0, 2.0, 3.0], 1.0 / 3.0, 1.0 / 3.0)
    assert len(ip) == 2 and len(im) == 2


def test_trim_boundary_ties_stable():
    # boundary tie between indices 1 and 2 resolves to the earlier index
    ip, _ = rpauc_trim_indices([5.0, 1.0, 1.0], [0.0], 0.0, 1.0 / 3.0)
    assert ip.tolist() == [0, 1]


def test_metrics_against_bruteforce(rng):
    for case in range(200):
        m = int(rng.integers(1, 31))
        n = int(rng.integers(1, 31))
        pos = rng.normal(size=m)
        neg = rng.normal(size=n)
        if case % 3 == 0:  # force ties
            pos = np.round(pos)
            neg = np.round(neg)
        sp = ScorePair(pos, neg)
        assert auc_exact(sp) == pytest.approx(naive_auc(pos, neg), abs=1e-12)

        a = float(rng.uniform(0.05, 1.0))
        b = float(rng.uniform(0.0, a - 0.01))
        assert opauc_eval(sp, b, a) == pytest.approx(naive_opauc(pos, neg, b, a), abs=1e-12)

        alpha = float(rng.uniform(1.0 / n if n > 1 else 1.0, 1.0))
        beta = float(rng.uniform(0.0, (m - 1) / m))
        assert tpauc_eval(sp, alpha, beta) == pytest.approx(
            naive_tpauc(pos, neg, alpha, beta), abs=1e-12)

        alpha_r = float(rng.uniform(0.0, (n - 1) / n))
        beta_r = float(rng.uniform(0.0, (m - 1) / m))
        assert rpauc_eval(sp, alpha_r, beta_r) == pytest.approx(
            naive_rpauc(pos, neg, alpha_r, beta_r), abs=1e-12)


@given(scores_list, scores_list)
def test_auc_antisymmetry_tie_free(pos, neg):
    assume(len(set(pos + neg)) == len(pos) + len(neg))
    sp = ScorePair(pos, neg)
    assert auc_exact(sp) + auc_exact(sp.swapped()) == pytest.approx(1.0, abs=1e-12)


@given(scores_list, scores_list, st.sampled_from([0.25, 0.5, 2.0, 8.0]))
def test_auc_rank_invariance(pos, neg, scale):
    # power-of-two scaling is exact in binary floating point, so it is a
    # strictly increasing transform that cannot merge distinct scores
    sp = ScorePair(pos, neg)
    transformed = ScorePair(scale * np.asarray(pos), scale * np.asarray(neg))
    assert auc_exact(transformed) == pytest.approx(auc_exact(sp), abs=1e-12)


int_scores = st.lists(st.integers(min_value=-50, max_value=50), min_size=1, max_size=25)


@given(int_scores, int_scores)
def test_auc_rank_invariance_cubic_on_lattice(pos, neg):
    sp = ScorePair([float(v) for v in pos], [float(v) for v in neg])
    cubed = ScorePair([float(v) ** 3 for v in pos], [float(v) ** 3 for v in neg])
    assert auc_exact(cubed) == pytest.approx(auc_exact(sp), abs=1e-12)


@given(int_scores, int_scores)
def test_rpauc_rank_invariance_cubic(pos, neg):
    # cubic on small integers is strictly increasing, exact, and tie-preserving
    alpha = 0.0 if len(neg) == 1 else 0.3
    beta = 0.0 if len(pos) == 1 else 0.3
    fpos = [float(v) for v in pos]
    fneg = [float(v) for v in neg]
    ip1, in1 = rpauc_trim_indices(fpos, fneg, alpha, beta)
    ip2, in2 = rpauc_trim_indices([v ** 3 for v in fpos], [v ** 3 for v in fneg],
                                  alpha, beta)
    assert ip1.tolist() == ip2.tolist()
    assert in1.tolist() == in2.tolist()


@given(scores_list, scores_list)
def test_opauc_tpauc_full_range_equal_auc(pos, neg):
    sp = ScorePair(pos, neg)
    assert opauc_eval(sp, 0.0, 1.0) == pytest.approx(auc_exact(sp), abs=1e-12)
    assert tpauc_eval(sp, 1.0, 0.0) == auc_exact(sp)
