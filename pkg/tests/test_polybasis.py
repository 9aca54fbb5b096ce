import math

import numpy as np
import pytest

from segfek.polybasis import (
    BasisKind,
    Polynomial,
    basis_matrix,
    eval_basis,
    integrate_basis,
    integrate_basis_all,
    legendre_deriv,
)

ALL_KINDS = list(BasisKind)


def gauss_integral(kind, j, a, b):
    # independent quadrature oracle: 32-point Gauss-Legendre mapped to [a, b]
    x, w = np.polynomial.legendre.leggauss(32)
    t = 0.5 * (b - a) * x + 0.5 * (a + b)
    return 0.5 * (b - a) * float(w @ basis_matrix(kind, j, t)[:, j - 1])


def bisect_root(fun, lo, hi, tol=1e-14):
    flo = fun(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flo * fun(mid) <= 0:
            hi = mid
        else:
            lo, flo = mid, fun(mid)
    return 0.5 * (lo + hi)


def test_eval_examples():
    assert eval_basis(BasisKind.MONOMIAL, 3, 0.5) == pytest.approx(0.25)
    assert eval_basis(BasisKind.CHEBYSHEV_U, 2, 0.5) == pytest.approx(1.0)  # U_1 = 2x
    assert eval_basis(BasisKind.LEGENDRE, 3, 1.0) == pytest.approx(1.0)  # P_n(1) = 1


def test_eval_rejects_bad_index():
    with pytest.raises(ValueError):
        eval_basis(BasisKind.MONOMIAL, 0, 0.5)


def test_chebu_recurrence_matches_trig_quotient():
    rng = np.random.default_rng(1)
    x = rng.uniform(-0.999, 0.999, 1000)
    theta = np.arccos(x)
    for j in range(1, 21):
        ref = np.sin(j * theta) / np.sin(theta)
        got = basis_matrix(BasisKind.CHEBYSHEV_U, j, x)[:, j - 1]
        assert np.max(np.abs(got - ref)) <= 1e-10


def test_integrate_examples():
    assert integrate_basis(BasisKind.MONOMIAL, 1, -1, 1) == pytest.approx(2.0)
    assert integrate_basis(BasisKind.CHEBYSHEV_U, 2, -1, 1) == pytest.approx(0.0, abs=1e-15)


def test_integrate_chebu_arc_closed_form():
    # integral over [cos(tau+rho), cos(tau-rho)] equals (2/j) sin(j tau) sin(j rho)
    rng = np.random.default_rng(2)
    for _ in range(50):
        tau = rng.uniform(0.3, math.pi - 0.3)
        rho = rng.uniform(0.01, 0.25)
        for j in (1, 2, 3, 7, 12):
            got = integrate_basis(BasisKind.CHEBYSHEV_U, j, math.cos(tau + rho), math.cos(tau - rho))
            assert got == pytest.approx(2.0 * math.sin(j * tau) * math.sin(j * rho) / j, abs=1e-13)


def test_integrate_matches_gauss_quadrature():
    rng = np.random.default_rng(3)
    for kind in ALL_KINDS:
        for _ in range(100):
            a, b = np.sort(rng.uniform(-1, 1, 2))
            for j in range(1, 21):
                assert integrate_basis(kind, j, a, b) == pytest.approx(
                    gauss_integral(kind, j, a, b), abs=1e-12
                )


def test_integrate_additivity():
    rng = np.random.default_rng(4)
    for kind in ALL_KINDS:
        for _ in range(50):
            a, b, c = np.sort(rng.uniform(-1, 1, 3))
            whole = integrate_basis_all(kind, 20, a, c)
            split = integrate_basis_all(kind, 20, a, b) + integrate_basis_all(kind, 20, b, c)
            assert np.max(np.abs(whole - split)) <= 1e-14


def test_legendre_deriv_examples():
    assert legendre_deriv(2, 0.0) == pytest.approx(0.0)
    assert legendre_deriv(2, 1.0) == pytest.approx(3.0)


def test_legendre_deriv_root():
    # brute-force root isolation of P_4' on [0, 1]: scan for the sign change, bisect
    xs = np.linspace(0.05, 0.99, 200)
    vals = legendre_deriv(4, xs)
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    assert idx.size == 1
    root = bisect_root(lambda x: legendre_deriv(4, x), xs[idx[0]], xs[idx[0] + 1])
    assert root == pytest.approx(math.sqrt(3.0 / 7.0), abs=1e-12)
    assert abs(legendre_deriv(4, 0.654653670707977)) <= 1e-9


def test_polynomial_evaluation_linear_in_coeffs():
    rng = np.random.default_rng(5)
    x = rng.uniform(-1, 1, 17)
    c1, c2 = rng.uniform(-1, 1, (2, 9))
    for kind in ALL_KINDS:
        lhs = Polynomial(kind, c1 + 2.5 * c2)(x)
        rhs = Polynomial(kind, c1)(x) + 2.5 * Polynomial(kind, c2)(x)
        assert np.max(np.abs(lhs - rhs)) <= 1e-13


def test_conversion_round_trip_well_conditioned_pairs():
    # chebU <-> Legendre round-trips stay exact to 1e-12 up to r = 30
    rng = np.random.default_rng(6)
    for r in (5, 18, 30):
        c = rng.uniform(-1, 1, r)
        for src, dst in [(BasisKind.CHEBYSHEV_U, BasisKind.LEGENDRE),
                         (BasisKind.LEGENDRE, BasisKind.CHEBYSHEV_U)]:
            back = Polynomial(src, c).convert(dst).convert(src)
            assert np.max(np.abs(back.coeffs - c)) <= 1e-12


def test_conversion_round_trip_monomial_small_r():
    # the monomial change of basis is exponentially ill-conditioned; at r = 10
    # the round trip is still clean
    rng = np.random.default_rng(7)
    c = rng.uniform(-1, 1, 10)
    for dst in (BasisKind.CHEBYSHEV_U, BasisKind.LEGENDRE):
        back = Polynomial(BasisKind.MONOMIAL, c).convert(dst).convert(BasisKind.MONOMIAL)
        assert np.max(np.abs(back.coeffs - c)) <= 1e-12


def test_polynomial_integral_matches_quadrature():
    p = Polynomial(BasisKind.LEGENDRE, [0.3, -1.2, 0.5, 2.0])
    x, w = np.polynomial.legendre.leggauss(16)
    t = 0.5 * 0.9 * x + 0.5 * (-0.7 + 0.2)
    assert p.integral(-0.7, 0.2) == pytest.approx(0.5 * 0.9 * float(w @ p(t)), abs=1e-14)
