import random
from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kempe_lab.coloring import (
    bichromatic_cycles,
    brute_force_colorings,
    canonical,
    classify_coloring,
    component_of,
    components,
    eliminate_pseudo_edge,
    enumerate_colorings,
    format_col4,
    ij_subgraph,
    is_proper,
    kempe_change,
    kempe_class_general,
    kempe_class_sigma,
    on_odd_cycle,
    parse_col4,
    pseudo_edges,
    pseudo_recolor,
    reconfig_graph,
    sigma_by_components,
    sigma_classes,
    sigma_op,
    swap,
)
from kempe_lab.construct import K4, b4, bipyramid, random_mpg
from kempe_lab.errors import NotBichromaticCycle, OddCycleBlocked, ParseError
from kempe_lab.planar import cycle_split, find_pockets, normalize_cycle

from conftest import mpgs_upto


def test_k4_and_octahedron_counts():
    assert enumerate_colorings(K4) == [(1, 2, 3, 4)]
    # one 3-colouring and three 4-colourings up to colour renaming
    assert len(enumerate_colorings(bipyramid(4))) == 4


def test_enumeration_matches_brute_force():
    for T in mpgs_upto(8):
        assert sorted(enumerate_colorings(T)) == sorted(brute_force_colorings(T))
    S = b4()
    assert sorted(enumerate_colorings(S)) == sorted(brute_force_colorings(S))


def test_canonical_is_least_over_permutations():
    f = (3, 1, 4, 1, 2)
    best = min(tuple(dict(zip((1, 2, 3, 4), p))[c] for c in f) for p in permutations((1, 2, 3, 4)))
    assert canonical(f) == best == (1, 2, 3, 2, 4)


def _nx_bichromatic_cycles(T, f):
    out = set()
    for i in range(1, 5):
        for j in range(i + 1, 5):
            g = nx.Graph()
            g.add_edges_from((u, v) for u, v in T.edges if {f[u], f[v]} == {i, j})
            for c in nx.simple_cycles(g):
                out.add(normalize_cycle(c))
    return out


def test_bichromatic_cycles_match_networkx():
    for T in mpgs_upto(9)[-20:]:
        for f in enumerate_colorings(T):
            assert {c for c, _ in bichromatic_cycles(T, f)} == _nx_bichromatic_cycles(T, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 12), st.integers(0, 10_000))
def test_kempe_change_is_an_involution(n, seed):
    r = random.Random(seed)
    T = random_mpg(n, r)
    f = r.choice(enumerate_colorings(T))
    v = r.randrange(n)
    j = r.choice([c for c in (1, 2, 3, 4) if c != f[v]])
    comp = component_of(T, f, v, f[v], j)
    g = kempe_change(T, f, comp, f[v], j)
    assert is_proper(T, g)
    assert kempe_change(T, g, comp, f[v], j) == f


@settings(max_examples=40, deadline=None)
@given(st.integers(7, 12), st.integers(0, 10_000))
def test_sigma_involution_and_component_oracle(n, seed):
    r = random.Random(seed)
    T = random_mpg(n, r)
    for f in enumerate_colorings(T)[:5]:
        for c, _ in bichromatic_cycles(T, f):
            g = sigma_op(T, f, c)
            assert is_proper(T, g)
            assert g == sigma_by_components(T, f, c)
            assert sigma_op(T, g, c) == f


def test_sigma_rejects_non_bichromatic_cycle():
    T = bipyramid(4)
    f = enumerate_colorings(T)[0]
    with pytest.raises(NotBichromaticCycle):
        sigma_op(T, f, T.faces[0])


def test_sigma_class_inside_general_kempe_class():
    for T in mpgs_upto(10)[-30:]:
        for cl in sigma_classes(T):
            f = min(cl)
            assert cl == kempe_class_sigma(T, f)
            assert cl <= kempe_class_general(T, f)


def test_reconfig_components_partition():
    for T in mpgs_upto(9)[-10:]:
        for moves in ("sigma", "kempe"):
            comps = reconfig_graph(T, moves).components()
            nodes = [f for c in comps for f in c]
            assert sorted(nodes) == sorted(enumerate_colorings(T))
        sig = {frozenset(c) for c in reconfig_graph(T, "sigma").components()}
        assert sig == set(sigma_classes(T))


def test_classification_labels():
    for T in mpgs_upto(8):
        for f in enumerate_colorings(T):
            label = classify_coloring(T, f)
            assert label in ("tree", "UBC", "cyclic-cycle")
            assert (label == "tree") == (not bichromatic_cycles(T, f))


def test_pseudo_recolor_and_elimination():
    T = random_mpg(11, random.Random(5))
    f = enumerate_colorings(T)[0]
    done = 0
    for v in range(T.n):
        for c in (1, 2, 3, 4):
            if c == f[v]:
                continue
            g, pe = pseudo_recolor(T, f, v, c)
            assert {frozenset((e.u, e.v)) for e in pe} == {frozenset((v, w)) for w in T.rotation[v] if f[w] == c}
            if len(pe) != 1:
                continue
            e = pe[0]
            z1, z2 = (e.u, e.v) if e.u == v else (e.v, e.u)
            for j in (1, 2, 3, 4):
                if j == c:
                    continue
                if on_odd_cycle(T, g, z1, z2, c, j):
                    with pytest.raises(OddCycleBlocked):
                        eliminate_pseudo_edge(T, g, (z1, z2), j)
                    continue
                h, rest = eliminate_pseudo_edge(T, g, (z1, z2), j)
                assert all({x.u, x.v} != {z1, z2} for x in rest)
                done += 1
    assert done > 0


def test_pseudo_edge_types():
    T = bipyramid(4)
    f = list(enumerate_colorings(T)[0])
    u, v = T.edges[0]
    f[v] = f[u]
    pe = pseudo_edges(T, f)
    assert len(pe) >= 1 and all(len(e.ts_type) == 2 for e in pe)


def _pockets_brute(T, f, i, j):
    out = set()
    for s in range(T.n):
        if f[s] in (i, j):
            continue
        nb = [w for w in T.rotation[s] if f[w] in (i, j)]
        g = nx.Graph()
        g.add_nodes_from(nb)
        g.add_edges_from((a, b) for a, b in T.edges if {f[a], f[b]} == {i, j})
        for x in range(len(nb)):
            for y in range(x + 1, len(nb)):
                for p in nx.all_simple_paths(g, nb[x], nb[y]):
                    if len(p) < 3:
                        continue
                    cyc = tuple(p) + (s,)
                    if cycle_split(T, cyc).interior:
                        out.add(normalize_cycle(cyc))
    return out


def test_pockets_match_brute_force():
    T = random_mpg(10, random.Random(11))
    assert find_pockets(K4, enumerate_colorings(K4)[0], 1, 2) == []
    for f in enumerate_colorings(T)[:3]:
        for i, j in ((1, 2), (1, 3), (2, 4)):
            got = {normalize_cycle(p.cycle) for p in find_pockets(T, f, i, j)}
            assert got == _pockets_brute(T, f, i, j)


def test_col4_round_trip_and_errors():
    f = (1, 2, 3, 4, 1)
    assert parse_col4(format_col4(f)) == f
    with pytest.raises(ParseError):
        parse_col4("col4 2\n0: 1\n1: 5\n")
    assert parse_col4("col4 2\n0: 0\n1: 3\n", allow_unset=True) == (0, 3)


def test_components_and_swap_helpers():
    T = bipyramid(5)
    f = enumerate_colorings(T)[0]
    adj = ij_subgraph(T, f, 1, 2)
    comps = components(adj)
    assert sum(len(c) for c in comps) == len(adj)
    g = swap(f, comps[0], 1, 2)
    assert is_proper(T, g)
