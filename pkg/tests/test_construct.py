import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kempe_lab.coloring import enumerate_colorings, is_proper
from kempe_lab.construct import (
    K4,
    WheelSite,
    b4,
    bipyramid,
    census,
    contract_wheel,
    diagonal_flip,
    eberhard_expand,
    enumerate_by_flips,
    enumerate_mpgs,
    extend_wheel,
    find_contractible_4wheels,
    random_mpg,
    wernicke_find,
)
from kempe_lab.errors import ColoringBlocked, FlipBlocked, NoConfiguration, SiteMismatch
from kempe_lab.planar import canonical_code

from conftest import mpgs_upto, quad_smpgs_upto, random_wheel_round_trip


def test_census_small_orders():
    assert census(8) == {4: 1, 5: 1, 6: 2, 7: 5, 8: 14}


def test_flip_enumerator_matches_closure_to_order_10():
    by_order = {}
    for T in mpgs_upto(10):
        by_order.setdefault(T.n, set()).add(canonical_code(T))
    for n in range(4, 11):
        assert set(enumerate_by_flips(n)) == by_order[n]


def test_enumeration_has_no_duplicates_and_filters():
    codes = [canonical_code(T) for T in mpgs_upto(10)]
    assert len(codes) == len(set(codes))
    d5 = list(enumerate_mpgs(12, min_degree=5))
    assert len(d5) == 1 and d5[0].n == 12 and d5[0].max_degree == 5
    assert [T.n for T in enumerate_mpgs(10, min_degree=4)].count(6) == 1


def test_eberhard_phi1_on_k4_and_bad_site():
    T = eberhard_expand(K4, "phi1", K4.faces[0])
    assert canonical_code(T) == canonical_code(bipyramid(3))
    with pytest.raises(SiteMismatch):
        eberhard_expand(K4, "phi1", (0, 1, 2, 3))


def test_diagonal_flip():
    with pytest.raises(FlipBlocked):
        diagonal_flip(K4, (0, 1))
    B = bipyramid(3)
    rim = next((u, v) for u, v in B.edges if B.degree(u) == 4 and B.degree(v) == 4)
    F = diagonal_flip(B, rim)
    assert canonical_code(F) == canonical_code(B)


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 12), st.integers(0, 10_000))
def test_flip_is_an_involution(n, seed):
    r = random.Random(seed)
    T = random_mpg(n, r)
    u, v = r.choice(T.edges)
    a, b = T.apexes(u, v)
    if T.has_edge(a, b):
        return
    F = diagonal_flip(T, (u, v))
    assert F.has_edge(a, b) and not F.has_edge(u, v)
    assert canonical_code(diagonal_flip(F, (a, b))) == canonical_code(T)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 12), st.integers(0, 10_000), st.sampled_from(["triangle", "path2", "funnel"]))
def test_wheel_round_trip(n, seed, kind):
    r = random.Random(seed)
    T = random_mpg(n, r)
    out = random_wheel_round_trip(T, r, kind)
    if out is not None:
        assert out[1]


def test_e3wo_coloring_and_blocked_coloring():
    f = enumerate_colorings(K4)[0]
    G, w, g = extend_wheel(K4, WheelSite("triangle", K4.faces[0]), f)
    assert is_proper(G, g) and g[w.center] == f[({0, 1, 2, 3} - set(K4.faces[0])).pop()]
    H = contract_wheel(G, w)
    assert canonical_code(H) == canonical_code(K4)
    T = random_mpg(9, random.Random(3))
    f = enumerate_colorings(T)[0]
    for v2 in range(T.n):
        for v4 in T.rotation[v2]:
            for v3 in T.apexes(v2, v4):
                for v1 in T.rotation[v2]:
                    if v1 not in (v3, v4) and len({f[v1], f[v2], f[v3], f[v4]}) == 4:
                        with pytest.raises(ColoringBlocked):
                            extend_wheel(T, WheelSite("funnel", (v1, v2, v3, v4)), f)
                        return
    raise AssertionError("no four-coloured funnel found")


def test_contractible_4wheels_give_proper_colourings():
    seen = 0
    for S in quad_smpgs_upto(9)[:400]:
        for f in enumerate_colorings(S)[:4]:
            for w in find_contractible_4wheels(S, f):
                H, g = contract_wheel(S, w, f)
                assert is_proper(H, g)
                seen += 1
    assert seen > 0


def test_b4_module_colourings_have_no_contractible_wheel():
    from kempe_lab.structure import is_base_module

    S = b4()
    mods = is_base_module(S).module_colorings
    assert len(mods) == 1
    for f in mods:
        assert find_contractible_4wheels(S, f) == []
    # a decycle colouring may merge an outer vertex into the far internal one
    others = [f for f in enumerate_colorings(S) if f not in mods]
    assert any(find_contractible_4wheels(S, f) for f in others)


def test_wernicke_on_delta5_corpus():
    for T in enumerate_mpgs(14, min_degree=5):
        v, w, kind = wernicke_find(T)
        assert T.degree(v) == 5 and T.degree(w) == int(kind[1])
    with pytest.raises(NoConfiguration):
        wernicke_find(K4)
