import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pottssos.chain import build_kernel, spectrum
from pottssos.extremality import (
    ALIASES,
    EXTREME,
    NON_EXTREME,
    UNDETERMINED,
    U_closed_form,
    cardano_y1,
    eta_on_line,
    extremality_verdict,
    find_threshold,
    gamma_of_kernel,
    kappa_closed_form,
    kappa_of_kernel,
    kesten_stigum,
    line_measure,
    row_pair_distances,
    square_line_roots,
    verdicts,
)
from pottssos.model import DomainError
from pottssos.polyroot import BracketError, oracle_real_roots
from pottssos.tisgm import CUBIC_X1, FixedPoint

THETA_C = 7.729813674618526
KS1, KS2 = 0.16669933109442353, 9.706301627792527


def kern(theta, i):
    return build_kernel(line_measure(theta, i), theta, theta * theta)


def n_measures(theta):
    return len(square_line_roots(theta))


def test_ks_examples():
    u = build_kernel(FixedPoint(1.0, 1.0, CUBIC_X1, 0.0), 1.0, 1.0)
    assert kesten_stigum(spectrum(u)) == (-1.0, False)
    assert kesten_stigum(spectrum(kern(0.1, 1)))[1]
    assert kesten_stigum(spectrum(kern(10.0, 2)))[1]


def test_kappa_gamma_examples():
    u = build_kernel(FixedPoint(1.0, 1.0, CUBIC_X1, 0.0), 1.0, 1.0)
    assert kappa_of_kernel(u) == 0.0 and gamma_of_kernel(u) == 0.0
    k = kern(8.0, 2)
    assert gamma_of_kernel(k) == pytest.approx(kappa_of_kernel(k), abs=1e-12)
    for theta in (0.1, 0.5, 0.9):
        y = line_measure(theta, 1).y
        want = (y ** 3 - theta * y * y - 2 * theta * y + 2) / (2 * y * (2 * theta + y * y))
        assert kappa_of_kernel(kern(theta, 1)) == pytest.approx(want, abs=1e-12)
        assert kappa_closed_form(theta, y) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("theta", [0.1, 1.0, 5.0, 9.0, 15.0])
def test_row_pair_structure_on_square_line(theta):
    for i in range(1, n_measures(theta) + 1):
        d = row_pair_distances(kern(theta, i))
        assert d[(0, 2)] <= 1e-15
        assert d[(0, 1)] == pytest.approx(d[(1, 2)], abs=1e-15)
        assert gamma_of_kernel(kern(theta, i)) == pytest.approx(d[(0, 1)], abs=1e-15)


def test_verdict_examples():
    v = extremality_verdict(FixedPoint(1.0, 1.0, CUBIC_X1, 0.0), 1.0, 1.0)
    assert v.status == EXTREME and v.kappa == 0.0 and v.gamma == 0.0
    assert extremality_verdict(line_measure(9.0, 3), 9.0, 81.0).status == EXTREME
    assert extremality_verdict(line_measure(8.5, 2), 8.5, 72.25).status == EXTREME
    assert extremality_verdict(line_measure(0.1, 1), 0.1, 0.01).status == NON_EXTREME
    assert not extremality_verdict(line_measure(0.1, 1), 0.1, 0.01).heuristic


def test_verdict_off_line_is_heuristic():
    vs = verdicts(1.0, 5.0)
    assert len(vs) == 7 and all(v.heuristic for v in vs)
    assert [v.measure_index for v in vs] == list(range(1, 8))
    with pytest.raises(DomainError):
        extremality_verdict(FixedPoint(1.0, 1.0, CUBIC_X1, 0.0), 1.0, 1.0, k=3)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.05, 10), st.floats(0.05, 10))
def test_status_definition_and_ranges(theta, r):
    for v in verdicts(theta, r):
        assert 0.0 <= v.kappa <= 1.0 and 0.0 <= v.gamma <= 1.0
        if v.eta > 0:
            assert v.status == NON_EXTREME
        elif v.two_kappa_gamma < 1:
            assert v.status == EXTREME
        else:
            assert v.status == UNDETERMINED


def test_thresholds():
    assert find_threshold("theta_c").value == pytest.approx(7.729814, abs=1e-5)
    assert find_threshold("r_c").value == pytest.approx(4.221293186, abs=1e-6)
    assert find_threshold("theta_ks1").value == pytest.approx(0.1666993311, abs=1e-6)
    assert find_threshold("theta_ks2").value == pytest.approx(9.706301628, abs=1e-6)
    for name in ("theta_c", "r_c_at_theta1", "theta_ks1", "theta_ks2", *ALIASES):
        rep = find_threshold(name)
        lo, hi = rep.bracket
        assert lo <= rep.value <= hi
    with pytest.raises(KeyError):
        find_threshold("theta_9")


def test_bracket_failure_names_function():
    from pottssos.polyroot import bisect_root

    def eta_wrong_side(t):
        return 1.0

    with pytest.raises(BracketError, match="eta_wrong_side"):
        bisect_root(eta_wrong_side, 0.0, 1.0)


def test_cardano_examples():
    assert cardano_y1(1.0) == pytest.approx(1.0, abs=1e-12)
    assert cardano_y1(5.0) == pytest.approx(oracle_real_roots((1, -5, 10, -2)).roots[0], abs=1e-10)
    assert cardano_y1(1e-6) == pytest.approx(2 ** (1 / 3), abs=1e-5)
    with pytest.raises(DomainError):
        cardano_y1(8.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 7.7))
def test_cardano_matches_enumeration(theta):
    assert cardano_y1(theta) == pytest.approx(square_line_roots(theta)[0], rel=1e-9)


def test_exclusivity_on_square_line():
    for theta in np.linspace(0.02, 20.0, 1000):
        for i in range(1, n_measures(theta) + 1):
            v = extremality_verdict(line_measure(theta, i), theta, theta * theta)
            assert not (v.eta > 0 and v.two_kappa_gamma < 1)


def _expected(i, theta):
    if i == 1:
        return NON_EXTREME if theta < KS1 else EXTREME
    if i == 2:
        return EXTREME if theta < KS2 else NON_EXTREME
    return EXTREME


def test_verdict_table_grid():
    margin = 1e-4
    edges = (KS1, KS2, THETA_C)
    for theta in np.linspace(0.01, 25.0, 1200):
        if any(abs(theta - e) < margin for e in edges):
            continue
        for i in range(1, n_measures(theta) + 1):
            v = extremality_verdict(line_measure(theta, i), theta, theta * theta)
            assert v.status == _expected(i, theta), (i, theta)


def test_closed_form_U_and_eta_agree():
    for theta in np.linspace(0.02, 20.0, 200):
        for i in range(1, n_measures(theta) + 1):
            m = line_measure(theta, i)
            v = extremality_verdict(m, theta, theta * theta)
            assert v.two_kappa_gamma - 1 == pytest.approx(U_closed_form(theta, m.y), abs=1e-10)
            assert v.kappa == pytest.approx(kappa_closed_form(theta, m.y), abs=1e-12)
            # on this line the nonzero eigenvalue and kappa coincide, so eta equals U
            assert v.eta == pytest.approx(U_closed_form(theta, m.y), abs=1e-10)


def test_mu1_signs_below_one():
    for theta in np.linspace(0.01, 0.99, 200):
        y = line_measure(theta, 1).y
        Z = 2 * theta * theta + theta * y * y
        assert 1 - theta * y > 0 and y - theta > 0
        assert 1 - theta * y == pytest.approx(theta * (1 - theta ** 2) * y * y / Z, rel=1e-9)
        assert y - theta == pytest.approx(2 * theta * (1 - theta ** 2) / Z, rel=1e-9)


def test_eta_changes_sign_across_ks_thresholds():
    assert eta_on_line(KS1 - 1e-3, 1) > 0 > eta_on_line(KS1 + 1e-3, 1)
    assert eta_on_line(KS2 - 1e-3, 2) < 0 < eta_on_line(KS2 + 1e-3, 2)
    with pytest.raises(DomainError):
        line_measure(5.0, 2)


def test_coalesced_measure_at_double_root():
    ys = square_line_roots(THETA_C)
    assert len(ys) == 2
