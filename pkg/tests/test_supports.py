import json
import math

import numpy as np
import pytest

from segfek.supports import (
    EPS_LEN,
    ArcFamily,
    Support,
    SupportSet,
    arc_parameters,
    arc_to_supports,
    check_regular,
    concat_from_nodes,
)


def test_support_basics():
    s = Support(-0.25, 0.75)
    assert s.length == pytest.approx(1.0)
    assert s.midpoint == pytest.approx(0.25)
    assert not s.is_node
    assert Support.node(0.3).is_node
    assert Support(0.1, 0.1 + 0.5 * EPS_LEN).is_node


def test_support_validation():
    with pytest.raises(ValueError):
        Support(0.5, 0.2)
    with pytest.raises(ValueError):
        Support(-1.5, 0.0)


def test_set_sorted_by_midpoint():
    sset = SupportSet((Support(0.5, 1.0), Support(-1.0, 0.0), Support.node(0.2)))
    assert [s.midpoint for s in sset.supports] == sorted(s.midpoint for s in sset.supports)


def test_regular_examples():
    assert check_regular(SupportSet((Support(-1, 0), Support(0, 1)))).is_regular
    rep = check_regular(SupportSet((Support.node(0.0), Support(-1, 1))))
    assert not rep.is_regular
    assert any("(iii)" in v for v in rep.violations)
    rep = check_regular(SupportSet((Support(-1, 0.5), Support(0, 1))))
    assert not rep.is_regular
    assert any("(ii)" in v for v in rep.violations)


def test_regular_repeated_nodes():
    rep = check_regular(SupportSet((Support.node(0.2), Support.node(0.2))))
    assert not rep.is_regular
    assert any("(i)" in v for v in rep.violations)


def test_node_at_segment_endpoint_is_regular():
    sset = SupportSet((Support.node(-1.0), Support(-1.0, 0.3), Support.node(0.3)))
    assert check_regular(sset).is_regular


def test_regular_is_order_insensitive():
    rng = np.random.default_rng(11)
    base = [Support(-1, -0.5), Support(-0.5, 0.1), Support.node(0.4), Support(0.5, 0.9)]
    verdict = check_regular(SupportSet(tuple(base))).is_regular
    for _ in range(10):
        perm = list(base)
        rng.shuffle(perm)
        assert check_regular(SupportSet(tuple(perm))).is_regular == verdict


def test_concat_examples():
    sset = concat_from_nodes([-1.0, 0.0, 1.0])
    assert sset.class_tag == "C1"
    assert [(s.alpha, s.beta) for s in sset.supports] == [(-1.0, 0.0), (0.0, 1.0)]

    sset = concat_from_nodes([-1.0, -1.0, 1.0, 1.0])
    assert [s.is_node for s in sset.supports] == [True, False, True]

    sset = concat_from_nodes([-1.0, 1.0])
    assert sset.r == 1 and sset.supports[0].length == pytest.approx(2.0)

    with pytest.raises(ValueError):
        concat_from_nodes([0.0, -0.5, 1.0])


def test_concat_strictly_increasing_is_regular():
    rng = np.random.default_rng(12)
    for _ in range(25):
        xs = np.sort(rng.uniform(-1, 1, 8))
        if np.min(np.diff(xs)) < 1e-6:
            continue
        assert check_regular(concat_from_nodes(xs)).is_regular


def test_arc_examples():
    sset = arc_to_supports(ArcFamily(math.pi / 4, (math.pi / 2,)))
    s = sset.supports[0]
    assert s.alpha == pytest.approx(-math.sqrt(2) / 2)
    assert s.beta == pytest.approx(math.sqrt(2) / 2)
    assert sset.class_tag == "C2"

    s = arc_to_supports(ArcFamily(0.1, (0.1,))).supports[0]
    assert s.beta == pytest.approx(1.0)

    s = arc_to_supports(ArcFamily(1e-13, (math.pi / 2,))).supports[0]
    assert s.is_node and s.midpoint == pytest.approx(0.0, abs=1e-12)


def test_arc_validation():
    with pytest.raises(ValueError):
        ArcFamily(0.5, (0.4,))  # tau below rho
    with pytest.raises(ValueError):
        ArcFamily(0.5, (1.0, 0.9))  # not increasing
    with pytest.raises(ValueError):
        ArcFamily(2.0, (2.1,))  # rho outside (0, pi/2)


def test_arc_lengths_identity():
    fam = ArcFamily(0.2, (0.3, 1.1, 2.0, math.pi - 0.25))
    sset = arc_to_supports(fam)
    want = 2.0 * np.sin(np.array(fam.taus)) * math.sin(fam.rho)
    got = np.array(sorted(s.length for s in sset.supports))
    assert np.max(np.abs(np.sort(want) - got)) <= 1e-14


def test_arc_round_trip():
    fam = ArcFamily(0.15, (0.4, 0.9, 1.7, 2.6))
    rho, taus = arc_parameters(arc_to_supports(fam))
    assert rho == pytest.approx(fam.rho, abs=1e-12)
    assert np.max(np.abs(np.sort(taus) - np.array(fam.taus))) <= 1e-12


def test_json_round_trip():
    sset = SupportSet((Support(-1, -0.2), Support.node(0.0), Support(0.2, 1.0)), class_tag="general")
    data = json.loads(sset.to_json())
    assert data["class"] == "general"
    assert data["supports"][1] == [0.0, 0.0]
    back = SupportSet.from_json(sset.to_json())
    assert back == sset
