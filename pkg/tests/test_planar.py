import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kempe_lab.construct import K4, b4, bipyramid, random_mpg
from kempe_lab.errors import NotSimple, NotTriangulated, ParseError
from kempe_lab.planar import (
    Triangulation,
    canonical_code,
    canonical_form,
    cycle_split,
    format_mpg,
    induced_smpg,
    interior,
    parse_mpg,
)
from kempe_lab.structure import four_cycles

from conftest import mpgs_upto


def test_euler_and_edge_counts():
    for T in mpgs_upto(9):
        assert T.n - T.num_edges + len(T.faces) == 2
        assert T.num_edges == 3 * T.n - 6
    S = b4()
    assert S.num_edges == 3 * S.n - 3 - 4
    assert S.n - S.num_edges + len(S.faces) == 2


def test_invalid_rotations_rejected():
    with pytest.raises(NotSimple):
        Triangulation([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2]])
    with pytest.raises(NotTriangulated):
        # 4-cycle with one chord: a quadrilateral face and no outer cycle given
        Triangulation([[1, 3], [2, 3, 0], [3, 1], [0, 1, 2]])


def test_parse_round_trip_and_errors():
    T = mpgs_upto(8)[-1]
    U = parse_mpg(format_mpg(T, comment="x"))
    assert U.rotation == T.rotation
    with pytest.raises(ParseError) as e:
        parse_mpg("mpg 4\n0: 1 2 3\n1: 0 3 2\n2: 0 x 3\n3: 0 2 1\n")
    assert e.value.line == 4
    with pytest.raises(ParseError):
        parse_mpg("mpg 4\n0: 1 2 3\n1: 0 3 2\n2: 0 1 3\n")


def test_canonical_code_separates_order8():
    codes = [canonical_code(T) for T in mpgs_upto(8) if T.n == 8]
    assert len(codes) == 14 == len(set(codes))
    assert canonical_code(K4) != canonical_code(bipyramid(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 13), st.integers(0, 10_000))
def test_canonical_code_relabel_and_mirror_invariant(n, seed):
    r = random.Random(seed)
    T = random_mpg(n, r)
    perm = list(range(n))
    r.shuffle(perm)
    assert canonical_code(T.relabel(perm)) == canonical_code(T)
    assert canonical_code(T.mirror()) == canonical_code(T)
    assert canonical_code(canonical_form(T)) == canonical_code(T)


def test_cycle_split_and_induced_union():
    for T in mpgs_upto(9)[-10:]:
        for c in four_cycles(T):
            sp = cycle_split(T, c)
            cs = set(c)
            assert not (sp.interior & sp.exterior) and not (cs & sp.interior)
            assert sp.interior | sp.exterior | cs == set(range(T.n))
            for u in sp.interior:
                assert not (T.adj[u] & sp.exterior)
            A = induced_smpg(T, c, "interior")
            B = induced_smpg(T, c, "exterior")
            assert A.n + B.n - 4 == T.n
            assert A.num_edges + B.num_edges - 4 == T.num_edges
            assert interior(T, c) == sp.interior


def test_b4_outer_and_internal_vertices():
    S = b4()
    assert len(S.outer) == 4
    assert sorted(set(range(S.n)) - set(S.outer)) == [4, 5]
    assert sorted(S.degree(v) for v in S.outer) == [3, 3, 4, 4]
