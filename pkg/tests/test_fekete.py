import math

import numpy as np
import pytest

from segfek.arcmap import spectral_eigenvalues
from segfek.fekete import (
    FeketeError,
    det_rho_sweep,
    fekete_arc,
    fekete_concat_nonnormalized,
    fekete_concat_normalized,
    fekete_nodes_bruteforce,
    lgl_nodes,
    nodal_logdet_chebu,
)
from segfek.polybasis import BasisKind
from segfek.supports import SupportSet, arc_parameters
from segfek.vandermonde import Mode, ProductForm, build, product_formula_det, sign_log_det

SQRT37 = math.sqrt(3.0 / 7.0)  # 0.6546536707079771, interior root of P_4'


def test_lgl_small():
    assert np.allclose(lgl_nodes(2), [-1.0, 1.0])
    assert np.allclose(lgl_nodes(3), [-1.0, 0.0, 1.0], atol=1e-15)
    assert np.allclose(lgl_nodes(5), [-1.0, -SQRT37, 0.0, SQRT37, 1.0], atol=1e-14)


def test_lgl_structure_large():
    for r in (40, 120, 500):
        xs = lgl_nodes(r)
        assert xs[0] == -1.0 and xs[-1] == 1.0
        assert np.all(np.diff(xs) > 0)
        assert np.max(np.abs(xs + xs[::-1])) <= 1e-14


def test_lgl_rejects_r1():
    with pytest.raises(ValueError):
        lgl_nodes(1)


def test_bruteforce_nodes():
    assert np.allclose(fekete_nodes_bruteforce(3, 0.05), [-1.0, 0.0, 1.0], atol=1e-8)
    got = fekete_nodes_bruteforce(4, 0.02)
    assert np.allclose(got, [-1.0, -1.0 / math.sqrt(5), 1.0 / math.sqrt(5), 1.0], atol=1e-7)
    for r in (5, 6):
        assert np.max(np.abs(fekete_nodes_bruteforce(r, 0.02) - lgl_nodes(r))) <= 1e-5


def test_bruteforce_concat_normalized_finds_collapse():
    got = fekete_nodes_bruteforce(4, 0.02, which="concat-normalized")
    assert np.allclose(got, [-1.0, -1.0, 0.0, 1.0, 1.0], atol=1e-7)
    got = fekete_nodes_bruteforce(5, 0.02, which="concat-normalized")
    assert np.allclose(got, [-1.0, -1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0, 1.0], atol=1e-6)


def test_bruteforce_guards():
    with pytest.raises(ValueError):
        fekete_nodes_bruteforce(7, 0.1)
    with pytest.raises(ValueError):
        fekete_nodes_bruteforce(4, 0.1, which="bogus")


def test_concat_nonnormalized_examples():
    res = fekete_concat_nonnormalized(2)
    assert [(s.alpha, s.beta) for s in res.set.supports] == [(-1.0, 0.0), (0.0, 1.0)]
    assert res.log_abs_det == pytest.approx(0.0, abs=1e-14)
    assert res.method == "closed-form" and res.symmetric

    res = fekete_concat_nonnormalized(4)
    assert np.allclose(res.endpoints, [-1.0, -SQRT37, 0.0, SQRT37, 1.0], atol=1e-14)


def test_concat_normalized_table_values():
    res = fekete_concat_normalized(4)
    assert np.max(np.abs(np.array(res.endpoints) - [-1, -1, 0, 1, 1])) <= 1e-6

    res = fekete_concat_normalized(5)
    assert np.max(np.abs(np.array(res.endpoints) - [-1, -1, -1 / 3, 1 / 3, 1, 1])) <= 1e-6

    res = fekete_concat_normalized(6)
    c = (1.0 + 2.0 * math.sqrt(2.0)) / 7.0
    assert np.max(np.abs(np.array(res.endpoints) - [-1, -1, -c, 0, c, 1, 1])) <= 1e-6
    assert res.diagnostics.converged
    assert res.diagnostics.best_gap <= 1e-7
    assert res.symmetric


def test_concat_normalized_degenerate_sizes():
    res = fekete_concat_normalized(1)
    assert res.non_unique and res.endpoints == (-1.0, 1.0)
    assert res.log_abs_det == pytest.approx(0.0)
    res = fekete_concat_normalized(2)
    assert res.non_unique and res.endpoints == (-1.0, 0.0, 1.0)


def test_concat_normalized_matches_bruteforce_oracle():
    res = fekete_concat_normalized(6)
    oracle = fekete_nodes_bruteforce(6, 0.02, which="concat-normalized")
    assert np.max(np.abs(np.array(res.endpoints) - oracle)) <= 1e-5


def test_unpinned_optimizer_collapses_endpoints():
    for r in range(3, 9):
        res = fekete_concat_normalized(r, pinned=False)
        xs = np.array(res.endpoints)
        assert xs[1] + 1.0 <= 1e-6
        assert 1.0 - xs[-2] <= 1e-6


def test_arc_example_r2():
    res = fekete_arc(2, math.pi / 4)
    pairs = [(round(a, 12), round(b, 12)) for a, b in res.endpoints]
    assert pairs == [(-1.0, 0.0), (0.0, 1.0)]


def test_arc_shrinks_to_nodes():
    res = fekete_arc(3, 1e-10)
    assert np.max(np.abs(res.set.midpoints - lgl_nodes(3))) <= 1e-9
    assert np.max(res.set.lengths) <= 1e-9


def test_arc_midpoints_scaled_lgl():
    rho = 0.5 * math.pi / 3
    res = fekete_arc(3, rho)
    got_rho, taus = arc_parameters(res.set)
    assert got_rho == pytest.approx(rho, abs=1e-12)
    arc_mids = np.sort(np.cos(taus))
    assert np.allclose(arc_mids, [-math.cos(rho), 0.0, math.cos(rho)], atol=1e-12)


def test_arc_rejects_rho_out_of_range():
    with pytest.raises(ValueError):
        fekete_arc(4, math.pi / 4)  # pi/4 >= pi/r for r=4
    with pytest.raises(ValueError):
        fekete_arc(4, 0.0)


def test_rho_sweep_decreasing_and_limit():
    for r in (5, 8):
        grid = [k * math.pi / (r * 21) for k in range(1, 21)]
        rows = det_rho_sweep(r, grid)
        assert all(row.error is None for row in rows)
        vals = [row.log_abs_det for row in rows]
        assert all(b < a + 1e-12 for a, b in zip(vals, vals[1:]))
        tiny = det_rho_sweep(r, [1e-6 * math.pi / r])[0]
        assert abs(tiny.log_abs_det - nodal_logdet_chebu(r)) <= 1e-4


def test_diagonal_factor_two_ways():
    r = 6
    rho = math.pi / (2 * r)
    direct = 1.0
    for j in range(1, r + 1):
        direct *= math.sin(j * rho) / (j * math.sin(rho))
    via_eig = float(np.prod(spectral_eigenvalues(rho, r)))
    assert abs(direct - via_eig) <= 1e-12


def test_local_perturbations_never_improve():
    rng = np.random.default_rng(41)

    def assert_local_max(logdet_fn, best_val, perturb_fn):
        for _ in range(100):
            assert logdet_fn(perturb_fn(rng)) <= best_val + 1e-9

    # nodal problem at LGL
    xs = lgl_nodes(6)
    _, best = product_formula_det(xs, ProductForm.NODAL_PRODUCT)
    assert_local_max(
        lambda v: product_formula_det(v, ProductForm.NODAL_PRODUCT)[1],
        best,
        lambda g: np.sort(np.clip(xs + g.uniform(-1e-3, 1e-3, xs.size), -1, 1)),
    )

    # non-normalized concatenated
    res = fekete_concat_nonnormalized(5)
    xs = np.array(res.endpoints)
    assert_local_max(
        lambda v: product_formula_det(v, ProductForm.CONCAT_HAT)[1],
        res.log_abs_det,
        lambda g: np.sort(np.clip(xs + g.uniform(-1e-3, 1e-3, xs.size), -1, 1)),
    )

    # normalized concatenated
    res = fekete_concat_normalized(6)
    xs = np.array(res.endpoints)
    assert_local_max(
        lambda v: product_formula_det(v, ProductForm.CONCAT_NORMALIZED)[1],
        res.log_abs_det,
        lambda g: np.sort(np.clip(xs + g.uniform(-1e-3, 1e-3, xs.size), -1, 1)),
    )

    # arc problem: perturb the arc-midpoint angles inside [rho, pi - rho]
    r, rho = 5, 0.4 * math.pi / 5
    res = fekete_arc(r, rho)
    _, taus = arc_parameters(res.set)
    taus = np.sort(taus)

    def arc_logdet(t):
        from segfek.supports import ArcFamily, arc_to_supports

        sset = arc_to_supports(ArcFamily(rho, tuple(np.sort(t))))
        return sign_log_det(build(BasisKind.CHEBYSHEV_U, sset, Mode.NORMALIZED))[1]

    def perturb_taus(g):
        t = taus + g.uniform(-1e-3, 1e-3, taus.size)
        return np.clip(t, rho, math.pi - rho)

    assert_local_max(arc_logdet, res.log_abs_det, perturb_taus)


def test_result_json_schema():
    res = fekete_concat_normalized(4)
    data = res.to_json_dict()
    assert set(data) == {"r", "mode", "endpoints", "log_abs_det", "diagnostics"}
    assert data["r"] == 4 and data["mode"] == "c1-fekete-normalized"
    diag = data["diagnostics"]
    assert {"method", "starts", "iterations", "best_gap", "converged"} <= set(diag)
