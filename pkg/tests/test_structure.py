import random

import pytest

from kempe_lab.coloring import bichromatic_cycles, enumerate_colorings, permute, sigma_classes
from kempe_lab.construct import K4, b4, random_mpg
from kempe_lab.errors import NotF2, OuterNotQuad, PathTooShort
from kempe_lab.fixtures import fixture_dir, require
from kempe_lab.planar import Triangulation, parse_mpg
from kempe_lab.structure import (
    LINE_CLASSES,
    base_module_type,
    classify_ubcmpg,
    cycle_related_graph,
    derive_h3_from_h4,
    endpoint_paths,
    f2_colorings,
    find_module_cycles,
    frame_coloring,
    harvest_quad_smpgs,
    in_f2,
    is_base_module,
    is_parallel,
    is_ub_cycle,
    module_paths,
    parallel_blocks,
    path_related_graph,
    two_endpoint_sets_nonempty,
)

from conftest import base_modules_upto, mpgs_upto, quad_smpgs_upto


def test_min_ubcmpg_fixture():
    (T,), _ = require("min-ubcmpg")
    rep = classify_ubcmpg(T)
    assert rep.kind == "tree" and rep.counts == (2, 1, 0)
    assert sorted(len(c) for c in sigma_classes(T)) == [1, 2]
    for f, cycles in rep.ub_cycles.items():
        assert all(len(c) % 2 == 0 for c in cycles)
        assert all(T.degree(v) >= 5 for c in cycles for v in c)


def test_order12_fixtures():
    graphs, _ = require("order12-tree")
    assert len(graphs) == 3
    for T in graphs:
        assert classify_ubcmpg(T).counts == (4, 2, 0)


def test_no_ubcmpg_below_order8():
    for T in mpgs_upto(7):
        assert classify_ubcmpg(T).kind == "not-UBCMPG"


def test_ub_tests_agree_on_small_corpus():
    for T in mpgs_upto(9, min_degree=4):
        for f in enumerate_colorings(T):
            for c, _ in bichromatic_cycles(T, f):
                r = is_ub_cycle(T, f, c)
                assert r.agree


def test_f2_frames_and_errors():
    S = b4()
    with pytest.raises(OuterNotQuad):
        is_base_module(Triangulation(K4.rotation, K4.faces[0]))
    f = next(f for f in enumerate_colorings(S) if not in_f2(f, S.outer))
    with pytest.raises(NotF2):
        endpoint_paths(S, f)


def test_frame_coloring_normalises_v1_v2():
    g = frame_coloring((3, 4, 3, 4, 1, 2), (0, 1, 2, 3))
    assert g[:4] == (1, 2, 1, 2)


def test_two_endpoint_sets_on_small_harvest():
    for S in quad_smpgs_upto(8):
        for f in f2_colorings(S):
            assert two_endpoint_sets_nonempty(endpoint_paths(S, f))


def test_b4_is_the_minimum_module():
    S = b4()
    rep = base_module_type(S)
    assert rep.is_base_module and rep.diagonal in ("v2v4", "v1v3")
    tv = rep.type_vector
    assert tv["structure"] == "tree" and tv["kempe"] == "Kempe"
    assert tv["colorings"] == len(enumerate_colorings(S))
    for S2 in quad_smpgs_upto(8):
        if S2.n < 6:
            assert not is_base_module(S2).is_base_module


def test_harvest_methods_agree_below_top_order():
    a = harvest_quad_smpgs(mpgs_upto(9), method="deletion")
    b = harvest_quad_smpgs(mpgs_upto(9), method="cycles")
    low = {k for k, S in b.items() if S.n < 9}
    assert set(a) == low


def test_module_paths_and_parallel_helpers():
    assert parallel_blocks((0, 1, 2), (0, 5, 2)) and is_parallel((0, 1, 2), (0, 5, 2))
    assert not is_parallel((0, 1, 2, 3), (0, 1, 4, 3))
    seen = 0
    for S in base_modules_upto(10)[:150]:
        rep = is_base_module(S, verify=False)
        for f in rep.module_colorings:
            mp = module_paths(S, f, rep.frame)
            assert mp["23"] or mp["24"]
            v2, v4 = rep.frame[1], rep.frame[3]
            for key in ("23", "24"):
                for p in mp[key]:
                    assert p[0] == v2 and p[-1] == v4
                    seen += 1
    assert seen > 0


def test_module_cycle_finder_runs():
    found = 0
    for S in base_modules_upto(10)[:200]:
        rep = is_base_module(S, verify=False)
        for f in sorted(rep.module_colorings):
            g = frame_coloring(f, rep.frame)
            mp = module_paths(S, g, rep.frame)
            for key in ("23", "24"):
                if len(mp[key]) == 1:
                    for mc in find_module_cycles(S, g, mp[key][0], frame=rep.frame):
                        assert mc.verdict in ("module", "non-module")
                        found += mc.verdict == "module"
    assert found > 0


def test_related_graph_duality_rule():
    rng = random.Random(1)
    checked = 0
    for _ in range(25):
        T = random_mpg(rng.randint(8, 12), rng)
        cols = enumerate_colorings(T)
        for f in rng.sample(cols, min(4, len(cols))):
            for c, pair in bichromatic_cycles(T, f):
                a, b = pair
                rest = [x for x in (1, 2, 3, 4) if x not in pair]
                g = permute(f, {rest[0]: 1, rest[1]: 2, a: 3, b: 4})
                if sum(g[v] == 4 for v in c) < 2:
                    continue
                h4 = cycle_related_graph(T, g, c, 4)
                d = derive_h3_from_h4(h4, T, g, c)
                h3 = cycle_related_graph(T, g, c, 3)
                for p in set(d.lines) | set(h3.lines):
                    assert d.classes_between(*p) == h3.classes_between(*p)
                checked += 1
    assert checked > 0


def test_path_related_graph_needs_three_anchors():
    S = b4()
    f = next(iter(is_base_module(S).module_colorings))
    fr = is_base_module(S).frame
    with pytest.raises(PathTooShort):
        path_related_graph(S, f, (fr[1], 5, fr[3]), anchor=2, frame=fr)
    assert set(LINE_CLASSES) == {"fine-solid", "bold-solid", "fine-dashed", "bold-dashed"}


def test_analyse_report_is_json():
    import json

    S = parse_mpg((fixture_dir() / "b4.mpg").read_text())
    data = json.loads(base_module_type(S).to_text())
    assert data["is_base_module"] is True
