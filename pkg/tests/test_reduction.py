import json
from pathlib import Path

import pytest

from kempe_lab.coloring import is_proper
from kempe_lab.construct import enumerate_mpgs, wernicke_find
from kempe_lab.errors import EarlyWin, FixtureMissing, ValidationError
from kempe_lab.planar import Triangulation
from kempe_lab.reduction import (
    HEAWOOD_CHECKPOINTS,
    five_rotation,
    heawood_failures,
    reduce_color,
    ring_of,
    subcolorings,
)

ROT = json.loads((Path(__file__).parent / "data" / "rotation_case.json").read_text())


def icosahedron():
    return next(iter(enumerate_mpgs(12, min_degree=5)))


def test_icosahedron_every_subcolouring():
    G = icosahedron()
    v2, w, kind = wernicke_find(G)
    assert kind == "55"
    routes = set()
    for s in subcolorings(G, v2):
        out, plan = reduce_color(G, s, checkpoints=True)
        assert is_proper(G, out)
        assert all(out[v] == s[v] for v in range(G.n) if plan.route == "direct" and v != v2)
        routes.add(plan.route)
        if plan.expanded is not None:
            assert plan.expanded.n == G.n + 2
            S_stage = [cp for cp in plan.checkpoints if cp.stage in ("d", "f")]
            assert len(S_stage) == 1
    assert "direct" in routes


def test_icosahedron_rotation_or_early_win():
    G = icosahedron()
    v2, _, _ = wernicke_find(G)
    ring = ring_of(G, v2)
    for s in subcolorings(G, v2):
        if len({s[u] for u in ring}) < 4:
            continue
        try:
            rots = five_rotation(G, v2, s)
        except EarlyWin as win:
            assert len({win.coloring[u] for u in ring}) == 3
            continue
        assert len({k for _, k in rots}) == 5


def test_full_rotation_gives_five_distinct_2paths():
    G = Triangulation(ROT["rotation"])
    rots = five_rotation(G, ROT["pivot"], ROT["subcoloring"])
    assert len(rots) == 5
    assert sorted(k for _, k in rots) == [0, 1, 2, 3, 4]
    ring = G.rotation[ROT["pivot"]]
    for f, k in rots:
        assert f[ring[(k - 1) % 5]] == f[ring[(k + 1) % 5]]


def test_route_dichotomy_on_delta5_corpus():
    for G in enumerate_mpgs(15, min_degree=5):
        v2, _, _ = wernicke_find(G)
        for s in subcolorings(G, v2):
            out, plan = reduce_color(G, s)
            assert is_proper(G, out)
            assert plan.route in ("direct", "early-win", "not-a-module", "decycle")
            if plan.route in ("not-a-module", "decycle"):
                assert plan.frame is not None and plan.frame[1] == v2


def test_bad_subcolouring_rejected():
    G = icosahedron()
    v2, _, _ = wernicke_find(G)
    s = list(subcolorings(G, v2)[0])
    u = next(v for v in range(G.n) if v != v2)
    w = next(x for x in G.rotation[u] if x != v2)
    s[w] = s[u]
    with pytest.raises(ValidationError):
        reduce_color(G, s)


def test_heawood_requires_the_fixture(tmp_path):
    from kempe_lab.reduction import heawood_demo

    with pytest.raises(FixtureMissing):
        heawood_demo()
    with pytest.raises(FixtureMissing):
        heawood_demo(str(tmp_path / "missing.mpg"))
    assert HEAWOOD_CHECKPOINTS[0] == "a" and HEAWOOD_CHECKPOINTS[-1] == "h"


def test_heawood_checkpoint_checker_on_a_module_route():
    G = icosahedron()
    v2, _, _ = wernicke_find(G)
    for s in subcolorings(G, v2):
        out, plan = reduce_color(G, s, checkpoints=True)
        if plan.route == "not-a-module":
            assert heawood_failures(plan) == []
        elif plan.route == "direct":
            assert heawood_failures(plan)
