"""Generation of triangulations and the extending/contracting wheel operations.

Eberhard's three operators grow a triangulation by one vertex:

* ``phi1`` puts a degree-3 vertex into a face;
* ``phi2`` deletes the diagonal of a diamond and puts a degree-4 vertex into
  the quadrilateral;
* ``phi3`` deletes the two inner diagonals of a fan of three triangles at a
  vertex and puts a degree-5 vertex into the pentagon.

Their closure from ``K4`` yields every triangulation.  A second, unrelated
enumerator walks the diagonal-flip graph at fixed order; both are used by the
census cross-check.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    ColoringBlocked,
    FlipBlocked,
    NoConfiguration,
    NotContractible,
    OuterCycleViolation,
    SiteMismatch,
)
from .planar import Triangulation, canonical_code

Rot = list[list[int]]

K4 = Triangulation([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])


# -- low level rotation editing ---------------------------------------------


def _copy(T: Triangulation) -> Rot:
    return [list(r) for r in T.rotation]


def _insert_after(rot: Rot, v: int, after: int, new: int) -> None:
    r = rot[v]
    r.insert(r.index(after) + 1, new)


def _fill_face(rot: Rot, walk: Sequence[int]) -> int:
    """Add a vertex adjacent to every vertex of the face ``walk``."""
    x = len(rot)
    k = len(walk)
    for i in range(k):
        v, nxt = walk[i], walk[(i + 1) % k]
        _insert_after(rot, v, nxt, x)
    rot.append(list(walk))
    return x


def fill_face_partial(rot: Rot, walk: Sequence[int], i: int, j: int) -> int:
    """Add a vertex inside the face ``walk`` joined to ``walk[i..j]``
    (consecutive, cyclic indices); the face is split in two."""
    x = len(rot)
    k = len(walk)
    span = [walk[(i + t) % k] for t in range((j - i) % k + 1)]
    for t, v in enumerate(span):
        nxt = walk[(i + t + 1) % k]
        _insert_after(rot, v, nxt, x)
    rot.append(span)
    return x


def _remove_edge(rot: Rot, u: int, v: int) -> None:
    rot[u].remove(v)
    rot[v].remove(u)


def _pred(rot: Rot, v: int, w: int) -> int:
    r = rot[v]
    return r[r.index(w) - 1]


def _walk(rot: Rot, u: int, v: int) -> list[int]:
    walk = [u]
    a, b = v, _pred(rot, v, u)
    while (a, b) != (u, v):
        walk.append(a)
        a, b = b, _pred(rot, b, a)
    return walk


def _compact(rot: Rot, removed: Iterable[int], outer: Sequence[int] | None = None) -> Triangulation:
    gone = set(removed)
    keep = [v for v in range(len(rot)) if v not in gone]
    new = {v: i for i, v in enumerate(keep)}
    out = [[new[w] for w in rot[v] if w not in gone] for v in keep]
    o = [new[v] for v in outer] if outer is not None else None
    return Triangulation(out, o, validate=False)


def normalize_rotations(T: Triangulation) -> tuple[tuple[int, ...], ...]:
    """Rotations with each cyclic list started at its smallest entry."""
    out = []
    for r in T.rotation:
        k = r.index(min(r))
        out.append(r[k:] + r[:k])
    return tuple(out)


# -- Eberhard operators -----------------------------------------------------


def phi1(T: Triangulation, face: Sequence[int]) -> Triangulation:
    face = tuple(face)
    if len(face) != 3 or T._walk(face[0], face[1]) != face:
        raise SiteMismatch(f"{face} is not a face walk")
    rot = _copy(T)
    _fill_face(rot, face)
    return Triangulation(rot, validate=False)


def phi2(T: Triangulation, edge: tuple[int, int]) -> Triangulation:
    u, v = edge
    if not T.has_edge(u, v):
        raise SiteMismatch(f"{u}-{v} is not an edge")
    a = T.succ(v, u, -1)
    b = T.succ(u, v, -1)
    if a == b:
        raise SiteMismatch("diamond degenerates")
    rot = _copy(T)
    _remove_edge(rot, u, v)
    _fill_face(rot, (u, b, v, a))
    return Triangulation(rot, validate=False)


def phi3(T: Triangulation, p0: int, p1: int) -> Triangulation:
    """Fan ``p0p1p2, p0p2p3, p0p3p4`` running clockwise from ``p0p1``."""
    if T.degree(p0) < 4 or not T.has_edge(p0, p1):
        raise SiteMismatch(f"no fan at {p0} starting from {p1}")
    p2 = T.succ(p0, p1, -1)
    p3 = T.succ(p0, p2, -1)
    p4 = T.succ(p0, p3, -1)
    rot = _copy(T)
    _remove_edge(rot, p0, p2)
    _remove_edge(rot, p0, p3)
    _fill_face(rot, (p0, p4, p3, p2, p1))
    return Triangulation(rot, validate=False)


def eberhard_expand(T: Triangulation, op: str, site: Sequence[int]) -> Triangulation:
    """Apply ``phi1`` (site: face), ``phi2`` (site: edge) or ``phi3`` (site: p0, p1)."""
    if T.outer is not None:
        raise SiteMismatch("Eberhard operators act on MPGs")
    if op == "phi1":
        return phi1(T, site)
    if op == "phi2":
        return phi2(T, (site[0], site[1]))
    if op == "phi3":
        return phi3(T, site[0], site[1])
    raise SiteMismatch(f"unknown operator {op!r}")


def eberhard_children(T: Triangulation) -> Iterator[Triangulation]:
    for face in T.faces:
        yield phi1(T, face)
    for u, v in T.edges:
        yield phi2(T, (u, v))
    for p0 in range(T.n):
        if T.degree(p0) >= 4:
            for p1 in T.rotation[p0]:
                yield phi3(T, p0, p1)


def _deficit(T: Triangulation, k: int) -> int:
    return sum(max(0, k - len(r)) for r in T.rotation)


def enumerate_mpgs(
    n_max: int,
    predicate: Callable[[Triangulation], bool] | None = None,
    min_degree: int = 3,
    n_min: int = 4,
) -> Iterator[Triangulation]:
    """Stream one triangulation per isomorphism class, ordered by size.

    With ``min_degree`` 4 or 5 the closure is pruned: a class that reaches a
    target of order ``N`` from order ``m`` only passes through graphs whose
    degree deficit is at most ``N - m + 1``, because removing a degree-3 or
    degree-4 vertex raises the deficit by at most one and the first removal
    from a target by at most two.
    """
    for _, graphs in _closure(n_max, min_degree):
        for T in graphs:
            if T.n >= n_min and T.min_degree >= min_degree and (predicate is None or predicate(T)):
                yield T


def _closure(n_max: int, min_degree: int = 3) -> Iterator[tuple[int, list[Triangulation]]]:
    level = [K4]
    n = 4
    while True:
        yield n, level
        if n >= n_max:
            return
        n += 1
        bound = n_max - n + 1 if n < n_max else 0
        seen: dict[bytes, Triangulation] = {}
        for T in level:
            for C in eberhard_children(T):
                if min_degree > 3 and _deficit(C, min_degree) > bound:
                    continue
                code = canonical_code(C)
                if code not in seen:
                    seen[code] = C
        level = [seen[c] for c in sorted(seen)]


def census(n_max: int, min_degree: int = 3) -> dict[int, int]:
    """Counts of triangulations per order via the Eberhard closure."""
    out = {}
    for n, level in _closure(n_max, min_degree):
        out[n] = sum(1 for T in level if T.min_degree >= min_degree)
    return out


# -- diagonal flips and the flip-graph enumerator -----------------------------


def flip_site(T: Triangulation, u: int, v: int) -> tuple[int, int]:
    """Apexes ``(a, b)`` of the two triangles on edge ``uv``."""
    return T.succ(v, u, -1), T.succ(u, v, -1)


def diagonal_flip(T: Triangulation, edge: tuple[int, int]) -> Triangulation:
    """Replace the diagonal ``uv`` of its diamond by the other diagonal."""
    u, v = edge
    if T.outer is not None:
        raise FlipBlocked("flips are defined on MPGs")
    if not T.has_edge(u, v):
        raise SiteMismatch(f"{u}-{v} is not an edge")
    a, b = flip_site(T, u, v)
    if a == b or T.has_edge(a, b):
        raise FlipBlocked(f"{a}-{b} already present")
    return Triangulation(_flip(_copy(T), T, u, v), validate=False)


def bipyramid(m: int) -> Triangulation:
    """Double wheel over an ``m``-cycle (``m + 2`` vertices)."""
    top, bot = m, m + 1
    rot: Rot = []
    for i in range(m):
        rot.append([(i + 1) % m, top, (i - 1) % m, bot])
    rot.append([i for i in range(m)])
    rot.append([i for i in reversed(range(m))])
    return Triangulation(rot)


def enumerate_by_flips(n: int) -> list[bytes]:
    """Canonical codes of all triangulations of order ``n`` by BFS in the
    flip graph (connected at every order)."""
    start = K4 if n == 4 else bipyramid(n - 2)
    c0 = canonical_code(start)
    seen = {c0}
    todo = deque([start])
    while todo:
        T = todo.popleft()
        for u, v in T.edges:
            a, b = flip_site(T, u, v)
            if a == b or T.has_edge(a, b):
                continue
            F = diagonal_flip(T, (u, v))
            c = canonical_code(F)
            if c not in seen:
                seen.add(c)
                todo.append(F)
    return sorted(seen)


# -- wheels -----------------------------------------------------------------


@dataclass(frozen=True)
class WheelSite:
    """Where an extending wheel operation acts.

    ``triangle``: a face ``(a, b, c)``.  ``path2``: a path ``(v1, v2, v3)``;
    neighbours of ``v2`` on ``side`` of the path move to the new copy.
    ``funnel``: ``(v1, v2, v3, v4)`` where ``v1v2v4`` is a path and ``v3`` is
    the apex of a triangle on ``v2v4``; the flank of ``v1v2v4`` holding
    ``v3`` moves to the new copy.
    """

    kind: str
    vertices: tuple[int, ...]
    side: str = "right"


@dataclass(frozen=True)
class WheelInstance:
    center: int
    rim: tuple[int, ...]
    contracted_pair: tuple[int, int] | None = None


def _color_wheel(f: Sequence[int] | None, site_vertices: Sequence[int], new_copy: bool) -> list[int] | None:
    if f is None:
        return None
    used = {f[v] for v in site_vertices}
    if len(used) > 3:
        raise ColoringBlocked("the site uses four colours")
    free = min({1, 2, 3, 4} - used)
    g = list(f)
    if new_copy:
        g.append(free)
        g.append(f[site_vertices[1]])
    else:
        g.append(free)
    return g


def _split(T: Triangulation, v1: int, v2: int, v3: int, side: str) -> tuple[Rot, int, int]:
    """E4WO core: split ``v2`` along ``v1v2v3``; return (rot, x, v2')."""
    if side == "left":
        v1, v3 = v3, v1
    n = T.n
    x, w = n, n + 1
    r = list(T.rotation[v2])
    i3 = r.index(v3)
    r = r[i3:] + r[:i3]  # v3, left flank..., v1, right flank...
    i1 = r.index(v1)
    left, right = r[1:i1], r[i1 + 1 :]
    rot = _copy(T)
    rot[v2] = [v3] + left + [v1, x]
    rot.append([v3, v2, v1, w])
    rot.append([v1] + right + [v3, x])
    rv1 = rot[v1]
    k = rv1.index(v2)
    rot[v1] = rv1[:k] + [w, x, v2] + rv1[k + 1 :]
    rv3 = rot[v3]
    k = rv3.index(v2)
    rot[v3] = rv3[:k] + [v2, x, w] + rv3[k + 1 :]
    for y in right:
        ry = rot[y]
        ry[ry.index(v2)] = w
    return rot, x, w


def extend_wheel(
    T: Triangulation, site: WheelSite, f: Sequence[int] | None = None
) -> tuple[Triangulation, WheelInstance, list[int] | None]:
    """E3WO / E4WO / E5WO.  New vertices get ids ``n`` (centre) and ``n+1``."""
    vs = site.vertices
    if site.kind == "triangle":
        face = tuple(vs)
        if len(face) != 3:
            raise SiteMismatch("triangle site needs three vertices")
        walk = T._walk(face[0], face[1])
        if walk != face:
            rev = (face[0], face[2], face[1])
            if T._walk(rev[0], rev[1]) != rev:
                raise SiteMismatch(f"{face} is not a face")
            face = rev
        if T.outer is not None and (face[0], face[1]) in T._outer_darts:
            raise SiteMismatch("the outer face is not a triangle site")
        rot = _copy(T)
        x = _fill_face(rot, face)
        g = _color_wheel(f, face, False)
        return Triangulation(rot, T.outer, validate=False), WheelInstance(x, face), g
    if site.kind == "path2":
        v1, v2, v3 = vs
        if v1 == v3 or not (T.has_edge(v1, v2) and T.has_edge(v2, v3)):
            raise SiteMismatch(f"{vs} is not a path")
        if T.outer is not None and v2 in T.outer:
            raise OuterCycleViolation("splitting an outer vertex")
        rot, x, w = _split(T, v1, v2, v3, site.side)
        g = _color_wheel(f, (v1, v2, v3), True)
        return (
            Triangulation(rot, T.outer, validate=False),
            WheelInstance(x, (v1, v2, v3, w), (v2, w)),
            g,
        )
    if site.kind == "funnel":
        v1, v2, v3, v4 = vs
        if len(set(vs)) != 4 or not (T.has_edge(v1, v2) and T.has_edge(v2, v4)):
            raise SiteMismatch(f"{vs} is not a funnel")
        if T.outer is not None and v2 in T.outer:
            raise OuterCycleViolation("splitting an outer vertex")
        left_apex, right_apex = flip_site(T, v2, v4)
        if v3 == left_apex:
            side = "left"
        elif v3 == right_apex:
            side = "right"
        else:
            raise SiteMismatch(f"{v3} is not an apex of {v2}-{v4}")
        rot, x, w = _split(T, v1, v2, v4, side)
        S = Triangulation(rot, validate=False)
        if set(flip_site(S, w, v4)) != {x, v3}:
            raise SiteMismatch("funnel flip site not found")
        rot = _flip(rot, S, w, v4)
        g = _color_wheel(f, (v1, v2, v3, v4), True)
        S = Triangulation(rot, T.outer, validate=False)
        return S, WheelInstance(x, tuple(S.rotation[x]), (v2, w)), g
    raise SiteMismatch(f"unknown site kind {site.kind!r}")


def _flip(rot: Rot, T: Triangulation, u: int, v: int) -> Rot:
    a, b = flip_site(T, u, v)
    rot = [list(r) for r in rot]
    _insert_after(rot, a, u, b)
    _insert_after(rot, b, v, a)
    _remove_edge(rot, u, v)
    return rot


def wheel_at(T: Triangulation, center: int, pair: tuple[int, int] | None = None) -> WheelInstance:
    rim = tuple(T.rotation[center])
    return WheelInstance(center, rim, pair)


def contract_wheel(T: Triangulation, w: WheelInstance, f: Sequence[int] | None = None):
    """C3WO / C4WO / C5WO.  Returns the contracted graph; with a colouring,
    returns ``(graph, restricted colouring)``.

    The centre and the absorbed copy are deleted and the remaining vertices
    keep their relative order.
    """
    x = w.center
    k = T.degree(x)
    if tuple(sorted(T.rotation[x])) != tuple(sorted(w.rim)) or k != len(w.rim):
        raise SiteMismatch(f"{x} is not the centre of that wheel")
    if T.outer is not None and x in T.outer:
        raise OuterCycleViolation("wheel centre on the outer cycle")
    if k == 3:
        rot = _copy(T)
        for y in T.rotation[x]:
            rot[y].remove(x)
        S = _compact(rot, [x], T.outer)
        return (S, _restrict(f, [x])) if f is not None else S
    if w.contracted_pair is None:
        raise SiteMismatch("contraction needs the pair to identify")
    p, q = w.contracted_pair
    if T.outer is not None:
        on = set(T.outer)
        if p in on and q in on:
            raise OuterCycleViolation("both contracted vertices on the outer cycle")
        if q in on:
            p, q = q, p
    if f is not None and f[p] != f[q]:
        raise NotContractible("contracted vertices have different colours")
    if k == 5:
        T, x = _unflip_funnel(T, x, p, q)
    r = T.rotation[x]
    if p not in r or q not in r or T.has_edge(p, q):
        raise NotContractible(f"{p},{q} is not a rim diagonal")
    ip = r.index(p)
    if r[(ip + 2) % 4] != q:
        raise NotContractible(f"{p},{q} is not a rim diagonal")
    rim_mid = {r[(ip + 1) % 4], r[(ip + 3) % 4]}
    common = (T.adj[p] & T.adj[q]) - rim_mid - {x}
    if common:
        raise NotContractible(f"{p} and {q} share neighbours {sorted(common)}")
    rot = _copy(T)
    rp, rq = rot[p], rot[q]
    kp, kq = rp.index(x), rq.index(x)
    lp = rp[kp + 1 :] + rp[:kp]
    lq = rq[kq + 1 :] + rq[:kq]
    if lp[-1] != lq[0] or lq[-1] != lp[0]:
        raise NotContractible("rim orientation mismatch")
    rot[p] = lp + lq[1:-1]
    for y in rim_mid:
        rot[y].remove(x)
        rot[y].remove(q)
    for y in lq[1:-1]:
        ry = rot[y]
        ry[ry.index(q)] = p
    outer = T.outer
    S = _compact(rot, [x, q], outer)
    if f is None:
        return S
    return S, _restrict(f, [x, q])


def _unflip_funnel(T: Triangulation, x: int, p: int, q: int) -> tuple[Triangulation, int]:
    """Turn a 5-wheel with contracted pair ``p, q`` into a 4-wheel at ``x``.

    The rim reads ``p, m, q, b, a``; flipping the spoke ``x-b`` into ``q-a``
    leaves the 4-wheel ``p, m, q, a`` with ``p, q`` opposite.
    """
    r = T.rotation[x]
    ip, iq = r.index(p), r.index(q)
    if (iq - ip) % 5 == 2:
        b = r[(iq + 1) % 5]
    elif (ip - iq) % 5 == 2:
        b = r[(iq - 1) % 5]
    else:
        raise NotContractible(f"{p},{q} are not at rim distance two")
    u, v = flip_site(T, x, b)
    if T.has_edge(u, v):
        raise NotContractible("funnel restoring flip blocked")
    rot = _flip(_copy(T), T, x, b)
    return Triangulation(rot, T.outer, validate=False), x


def _restrict(f: Sequence[int] | None, removed: Iterable[int]) -> list[int] | None:
    if f is None:
        return None
    gone = set(removed)
    return [c for v, c in enumerate(f) if v not in gone]


def find_contractible_4wheels(S: Triangulation, f: Sequence[int]) -> list[WheelInstance]:
    """4-wheels whose opposite rim pair shares a colour and may be identified."""
    on = set(S.outer) if S.outer is not None else set()
    out = []
    for x in range(S.n):
        if S.degree(x) != 4 or x in on:
            continue
        r = S.rotation[x]
        for i in (0, 1):
            p, q = r[i], r[i + 2]
            if f[p] != f[q]:
                continue
            if p in on and q in on:
                continue
            if S.has_edge(p, q):
                continue
            if (S.adj[p] & S.adj[q]) - {x, r[i + 1], r[(i + 3) % 4]}:
                continue
            out.append(WheelInstance(x, tuple(r), (min(p, q), max(p, q))))
    return out


def wernicke_find(T: Triangulation) -> tuple[int, int, str]:
    """A degree-5 vertex with a degree-5 (preferred) or degree-6 neighbour."""
    if T.min_degree != 5:
        raise NoConfiguration(f"minimum degree is {T.min_degree}, not 5")
    for want, kind in ((5, "55"), (6, "56")):
        for v in range(T.n):
            if T.degree(v) != 5:
                continue
            for w in sorted(T.rotation[v]):
                if T.degree(w) == want:
                    return v, w, kind
    raise NoConfiguration("no 55- or 56-configuration")


# -- random walks used by property tests ---------------------------------------------


def random_mpg(n: int, rng: random.Random, flips: int = 50) -> Triangulation:
    """Random triangulation of order ``n``: random growth then random flips."""
    T = K4
    while T.n < n:
        op = rng.random()
        if op < 0.4:
            T = phi1(T, rng.choice(T.faces))
        elif op < 0.8:
            T = phi2(T, rng.choice(T.edges))
        else:
            p0 = rng.randrange(T.n)
            if T.degree(p0) < 4:
                continue
            T = phi3(T, p0, rng.choice(T.rotation[p0]))
    for _ in range(flips):
        u, v = rng.choice(T.edges)
        a, b = flip_site(T, u, v)
        if a != b and not T.has_edge(a, b):
            T = diagonal_flip(T, (u, v))
    return T


def b4() -> Triangulation:
    """The smallest 4-base-module: the outer square ``0 1 2 3`` with an inner
    edge ``4 5``; ``1`` and ``3`` have degree 4."""
    from .planar import smpg_from_edges

    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (4, 3), (4, 0), (4, 1), (5, 1), (5, 2), (5, 3)]
    return smpg_from_edges(6, edges, (0, 1, 2, 3))
