import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmmstab.errors import NotWeaklyStable, UsageError
from lmmstab.methods import get_method, make_method
from lmmstab.norms import INF_SPIJKER, norm_kinf, norm_kspijker, spijker_seminorm, stability_constant
from lmmstab.operators import apply_A, apply_F, apply_H, dense_A, make_bundle
from lmmstab.roots import find_roots
from lmmstab.witness import (
    closed_form_partial_sums,
    ratio_sweep,
    select_boundary_root,
    spijker_witness,
    weak_witness,
    witness_diagnostics,
    witness_trajectory,
)

from conftest import STRONG_NAMES, WEAK_NAMES


def test_spijker_witness_values():
    assert np.array_equal(spijker_witness(4).values, [0, 0, 1, -2, 3, -4])
    with pytest.raises(UsageError):
        spijker_witness(1)


@pytest.mark.parametrize("n", [4, 50, 500])
def test_spijker_golden_values(midpoint, n):
    b = make_bundle(midpoint, n)
    u = spijker_witness(n)
    assert norm_kinf(u) == n
    diff = apply_F(b, lambda v: 0.0, u).values - apply_F(b, lambda v: 0.0, np.zeros(b.size)).values
    assert abs(norm_kspijker(diff, b.h, 2) - 0.5) <= 1e-12


@pytest.mark.parametrize("n", [10, 100, 256])
def test_midpoint_weak_ratio_is_n(midpoint, n):
    rep = weak_witness(midpoint, find_roots(midpoint), n)
    assert rep.case == "real" and rep.xi2 == -1
    # independent path: dense A_N on the full trajectory
    b = make_bundle(midpoint, n)
    x = witness_trajectory(rep, 2).values
    image = dense_A(b) @ x
    ratio = norm_kinf(x, 2) / norm_kspijker(image, b.h, 2)
    assert rep.ratio == pytest.approx(ratio, rel=1e-12)
    assert rep.ratio == pytest.approx(n, rel=1e-9 if n % 2 == 0 else 0.05)


def test_milne_ratio_doubles(milne):
    rs = find_roots(milne)
    r = [weak_witness(milne, rs, n).ratio for n in (64, 128, 256)]
    for a, b in zip(r, r[1:]):
        assert b / a >= 2 * 0.9


@pytest.mark.parametrize("name", STRONG_NAMES)
def test_strongly_stable_rejected(name):
    m = get_method(name)
    with pytest.raises(NotWeaklyStable):
        weak_witness(m, find_roots(m), 16)
    with pytest.raises(NotWeaklyStable):
        witness_diagnostics(m, find_roots(m), 16)


def test_violating_method_rejected():
    m = make_method("double", [1, -2, 1], [0, 0, 1])
    with pytest.raises(NotWeaklyStable):
        weak_witness(m, find_roots(m), 16)


def test_boundary_root_selection(midpoint, quarter_turn):
    assert select_boundary_root(find_roots(midpoint)) == (-1, "real")
    xi, case = select_boundary_root(find_roots(quarter_turn))
    assert case == "complex"
    assert xi == pytest.approx(1j, abs=1e-12)


def test_real_case_diagnostics(midpoint):
    d = witness_diagnostics(midpoint, find_roots(midpoint), 50)
    assert d.image_vector_check <= 1e-13
    assert d.closed_form_check <= 1e-10
    assert d.closed_form_entry_check <= 1e-12
    assert d.reduced_image_norm <= d.h
    assert d.w_spijker_norm >= d.lower_bound


@pytest.mark.parametrize("n", [3, 51, 400])
def test_milne_lower_bound(milne, n):
    d = witness_diagnostics(milne, find_roots(milne), n)
    assert d.case == "real"
    assert d.w_spijker_norm >= d.h * (n - 1) / 2
    assert d.closed_form_check <= 1e-10


def test_complex_case_diagnostics(quarter_turn):
    rs = find_roots(quarter_turn)
    d = witness_diagnostics(quarter_turn, rs, 60)
    assert d.case == "complex"
    assert d.image_vector_check <= 1e-12
    assert d.closed_form_check <= 1e-10
    assert d.reduced_image_norm <= 3 * d.h
    assert d.lower_bound is None
    # direct band multiplication: (I - 2cos(phi) H + H^2) = I + H^2 for phi = pi/2
    w = np.arange(1, 61) * np.cos(np.arange(1, 61) * math.pi / 2)
    direct = w + apply_H(apply_H(w))
    expected = np.cos(np.arange(1, 61) * math.pi / 2) - np.cos((np.arange(1, 61) - 2) * math.pi / 2)
    expected[0] = 0.0
    assert np.max(np.abs(direct - expected)) <= 1e-12


def test_closed_form_against_brute_force():
    for xi in (complex(-1), np.exp(0.7j), np.exp(2.1j)):
        case = "real" if xi == -1 else "complex"
        l = np.arange(1, 41)
        brute = np.cumsum(l * xi ** l).real
        assert np.allclose(closed_form_partial_sums(xi, case, 40), brute, atol=1e-10)


def test_complex_witness_grows(quarter_turn):
    rep = ratio_sweep(quarter_turn, find_roots(quarter_turn), [16, 32, 64, 128])
    assert rep.case == "complex"
    assert rep.monotone
    assert rep.min_w_spijker > 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 80), st.floats(0, 2 * math.pi), st.integers(0, 2**32 - 1))
def test_shift_factor_bound(n, theta, seed):
    rng = np.random.default_rng(seed)
    h = 1.0 / (n + 1)
    xi = complex(math.cos(theta), math.sin(theta))
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    u /= spijker_seminorm(u, h)
    assert spijker_seminorm(u - xi * apply_H(u), h) <= 2 + 1e-9


@pytest.mark.parametrize("name", WEAK_NAMES)
@pytest.mark.parametrize("n", [8, 32, 128, 256])
def test_witness_below_oracle(name, n):
    m = get_method(name)
    rep = weak_witness(m, find_roots(m), n)
    assert rep.ratio <= stability_constant(make_bundle(m, n), INF_SPIJKER) + 1e-9


def test_witness_ratio_matches_apply_A(milne):
    rep = weak_witness(milne, find_roots(milne), 40)
    b = make_bundle(milne, 40)
    x = witness_trajectory(rep, 2).values
    y = apply_A(b, x)
    assert np.all(y[:2] == 0)
    assert rep.image_spijker_norm == pytest.approx(spijker_seminorm(y[2:], b.h), rel=1e-13)


def test_sweep_strictly_increasing(midpoint):
    rep = ratio_sweep(midpoint, find_roots(midpoint), [64, 128, 256, 512])
    assert rep.monotone
    assert [n for n, _ in rep.rows] == [64, 128, 256, 512]
    s = rep.summary()
    assert s["case"] == "real" and s["monotone"] is True


def test_sweep_rejects_bdf2():
    m = get_method("BDF2")
    with pytest.raises(NotWeaklyStable):
        ratio_sweep(m, find_roots(m), [8, 16])


def test_milne_long_range_growth(milne):
    rs = find_roots(milne)
    assert weak_witness(milne, rs, 4096).ratio / weak_witness(milne, rs, 64).ratio >= 32


def test_cos_multiples_accuracy():
    from lmmstab.witness import cos_multiples

    phi = 1.0
    m = np.arange(0, 5000)
    # the three-term recurrence must hold at the stored phi to rounding, for all m
    c = cos_multiples(phi, m)
    assert np.max(np.abs(c[2:] - 2 * math.cos(phi) * c[1:-1] + c[:-2])) <= 1e-14
    assert np.allclose(cos_multiples(math.pi / 2, [0, 1, 2, 3, 4]), [1, 0, -1, 0, 1], atol=1e-15)


def test_generic_angle_diagnostics():
    xi = np.exp(1j)
    alpha = np.poly([1.0, xi, np.conj(xi)]).real
    m = make_method("one-radian", alpha, [0.0, 1.0, 0.0, 0.0])
    d = witness_diagnostics(m, find_roots(m), 500)
    assert d.case == "complex"
    assert d.xi2 == pytest.approx(xi, abs=1e-12)
    assert d.image_vector_check <= 1e-12
    assert d.closed_form_check <= 1e-10
    assert d.reduced_image_norm <= d.reduced_image_bound
