"""Rotation-system embeddings of maximal and semi-maximal planar graphs.

A :class:`Triangulation` stores, for every vertex, its neighbours in
counter-clockwise order.  Faces are traced with the face kept on the left:
the dart ``(u, v)`` is followed by ``(v, w)`` where ``w`` is the neighbour
of ``v`` immediately before ``u`` in the rotation of ``v``.

An SMPG carries an ``outer`` cycle, stored in the orientation of its face
walk.  Every other face is a triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    Disconnected,
    NotACycle,
    NotPlanarEmbedding,
    NotSimple,
    NotTriangulated,
    ParseError,
    TriangleCycle,
)

Cycle = tuple[int, ...]


class Triangulation:
    """Immutable rotation system of an MPG or an SMPG."""

    def __init__(
        self,
        rotation: Sequence[Sequence[int]],
        outer: Sequence[int] | None = None,
        *,
        validate: bool = True,
        origin: Sequence[int] | None = None,
    ):
        self.rotation: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rotation)
        self.n = len(self.rotation)
        self.origin = tuple(origin) if origin is not None else None
        self.pos: tuple[dict[int, int], ...] = tuple(
            {w: k for k, w in enumerate(r)} for r in self.rotation
        )
        self.outer: Cycle | None = None
        if validate:
            self._check_simple()
        if outer is not None:
            self.outer = self._orient_outer(tuple(outer))
        if validate:
            self._check_faces()

    # -- construction checks ---------------------------------------------

    def _check_simple(self) -> None:
        n = self.n
        for v, r in enumerate(self.rotation):
            for w in r:
                if not (0 <= w < n):
                    raise NotSimple(f"vertex {v} lists unknown neighbour {w}")
                if w == v:
                    raise NotSimple(f"loop at vertex {v}")
            if len(self.pos[v]) != len(r):
                raise NotSimple(f"repeated neighbour in rotation of {v}")
            for w in r:
                if v not in self.pos[w]:
                    raise NotSimple(f"edge {v}-{w} listed from one side only")
        if n == 0:
            raise Disconnected("empty graph")
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for w in self.rotation[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != n:
            raise Disconnected(f"only {len(seen)} of {n} vertices reachable from 0")

    def _orient_outer(self, outer: Cycle) -> Cycle:
        k = len(outer)
        if len(set(outer)) != k or k < 3:
            raise NotACycle(f"outer cycle {outer} is not a simple cycle")
        for a, b in zip(outer, outer[1:] + outer[:1]):
            if b not in self.pos[a]:
                raise NotACycle(f"outer cycle uses non-edge {a}-{b}")
        a, b = outer[0], outer[1]
        walk = self._walk(a, b)
        if walk == outer:
            return outer
        rev = (outer[0],) + tuple(reversed(outer[1:]))
        walk = self._walk(rev[0], rev[1])
        if walk == rev:
            return rev
        raise NotTriangulated(f"outer cycle {outer} does not bound a face")

    def _check_faces(self) -> None:
        n, e = self.n, self.num_edges
        f = len(self.faces)
        if n - e + f != 2:
            raise NotPlanarEmbedding(f"Euler check fails: V-E+F = {n - e + f}")
        outer_len = 0
        if self.outer is not None:
            outer_len = len(self.outer)
        for face in self.faces:
            if len(face) == 3:
                continue
            if (face[0], face[1]) in self._outer_darts:
                continue
            raise NotTriangulated(f"face {face} has length {len(face)}")
        expected = 3 * n - 6 if self.outer is None else 3 * n - 3 - outer_len
        if n >= 3 and e != expected:
            raise NotTriangulated(f"edge count {e} differs from {expected}")

    # -- basic queries ------------------------------------------------------

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.pos[u]

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(r) for r in self.rotation)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.rotation) // 2

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (u, v) for u in range(self.n) for v in sorted(self.rotation[u]) if u < v
        )

    @property
    def is_smpg(self) -> bool:
        return self.outer is not None

    @cached_property
    def min_degree(self) -> int:
        return min(len(r) for r in self.rotation)

    @cached_property
    def max_degree(self) -> int:
        return max(len(r) for r in self.rotation)

    def succ(self, v: int, w: int, step: int = 1) -> int:
        """Neighbour of ``v`` that is ``step`` places after ``w`` (ccw)."""
        r = self.rotation[v]
        return r[(self.pos[v][w] + step) % len(r)]

    def next_dart(self, u: int, v: int) -> tuple[int, int]:
        return v, self.succ(v, u, -1)

    def _walk(self, u: int, v: int) -> Cycle:
        walk = [u]
        a, b = self.next_dart(u, v)
        while (a, b) != (u, v):
            walk.append(a)
            a, b = self.next_dart(a, b)
            if len(walk) > 2 * self.num_edges + 2:
                raise NotPlanarEmbedding("face walk does not close")
        return tuple(walk)

    @cached_property
    def faces(self) -> tuple[Cycle, ...]:
        """All face walks; the first one contains the dart ``(0, rot[0][0])``."""
        seen: set[tuple[int, int]] = set()
        out = []
        for u in range(self.n):
            for v in self.rotation[u]:
                if (u, v) in seen:
                    continue
                walk = self._walk(u, v)
                for k in range(len(walk)):
                    seen.add((walk[k], walk[(k + 1) % len(walk)]))
                out.append(walk)
        return tuple(out)

    @cached_property
    def outer_face(self) -> Cycle:
        """The unbounded face: the outer cycle, or by default the first face."""
        return self.outer if self.outer is not None else self.faces[0]

    def face_left_of(self, u: int, v: int) -> Cycle:
        return self._walk(u, v)

    @cached_property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            f for f in self.faces if len(f) == 3 and (f[0], f[1]) not in self._outer_darts
        )

    def apexes(self, u: int, v: int) -> tuple[int | None, int | None]:
        """Third vertices of the faces left of ``u->v`` and left of ``v->u``.

        ``None`` stands for a side that is the outer face of an SMPG.
        """
        out: list[int | None] = []
        for a, b in ((u, v), (v, u)):
            if (a, b) in self._outer_darts:
                out.append(None)
            else:
                out.append(self.succ(b, a, -1))
        return out[0], out[1]

    @cached_property
    def _outer_darts(self) -> frozenset[tuple[int, int]]:
        if self.outer is None:
            return frozenset()
        o = self.outer
        return frozenset((o[k], o[(k + 1) % len(o)]) for k in range(len(o)))

    def relabel(self, perm: Sequence[int]) -> "Triangulation":
        """Relabel vertex ``v`` as ``perm[v]``."""
        rot: list[tuple[int, ...]] = [()] * self.n
        for v, r in enumerate(self.rotation):
            rot[perm[v]] = tuple(perm[w] for w in r)
        outer = tuple(perm[v] for v in self.outer) if self.outer else None
        return Triangulation(rot, outer, validate=False)

    def mirror(self) -> "Triangulation":
        rot = [tuple(reversed(r)) for r in self.rotation]
        outer = None
        if self.outer is not None:
            outer = (self.outer[0],) + tuple(reversed(self.outer[1:]))
        return Triangulation(rot, outer, validate=False)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Triangulation)
            and self.rotation == other.rotation
            and self.outer == other.outer
        )

    def __hash__(self) -> int:
        return hash((self.rotation, self.outer))

    def __repr__(self) -> str:
        kind = f"smpg outer={self.outer}" if self.outer else "mpg"
        return f"Triangulation(n={self.n}, {kind})"

    @cached_property
    def _split_cache(self) -> dict[Cycle, "CycleSplit"]:
        return {}

    @cached_property
    def memo(self) -> dict:
        """Per-host memo table shared by the analysis modules."""
        return {}


def build_triangulation(
    rotation: Sequence[Sequence[int]], outer: Sequence[int] | None = None
) -> Triangulation:
    """Validate and return a triangulation (raises on any invariant failure)."""
    return Triangulation(rotation, outer)


# -- cycles ---------------------------------------------------------------


def normalize_cycle(c: Sequence[int]) -> Cycle:
    """Rotate/reflect a cycle so it starts at its minimum and turns towards
    the smaller neighbour."""
    c = tuple(c)
    k = c.index(min(c))
    c = c[k:] + c[:k]
    if len(c) > 2 and c[-1] < c[1]:
        c = (c[0],) + tuple(reversed(c[1:]))
    return c


def check_cycle(T: Triangulation, c: Sequence[int]) -> Cycle:
    c = tuple(c)
    if len(c) < 3 or len(set(c)) != len(c):
        raise NotACycle(f"{c} is not a simple closed sequence")
    for a, b in zip(c, c[1:] + c[:1]):
        if not (0 <= a < T.n) or b not in T.pos[a]:
            raise NotACycle(f"{a}-{b} is not an edge")
    return c


@dataclass(frozen=True)
class CycleSplit:
    interior: frozenset[int]
    exterior: frozenset[int]
    left: frozenset[int] = field(repr=False, default=frozenset())
    right: frozenset[int] = field(repr=False, default=frozenset())
    cycle: Cycle = field(repr=False, default=())
    interior_left: bool = field(repr=False, default=False)


def _sides(T: Triangulation, c: Cycle) -> tuple[set[int], set[int]]:
    on = set(c)
    k = len(c)
    left_seed: list[int] = []
    right_seed: list[int] = []
    for i in range(k):
        v, p, q = c[i], c[i - 1], c[(i + 1) % k]
        r = T.rotation[v]
        d = len(r)
        pv = T.pos[v]
        iq, ip = pv[q], pv[p]
        t = (iq + 1) % d
        while t != ip:
            if r[t] not in on:
                left_seed.append(r[t])
            t = (t + 1) % d
        t = (ip + 1) % d
        while t != iq:
            if r[t] not in on:
                right_seed.append(r[t])
            t = (t + 1) % d
    left = _flood(T, left_seed, on)
    right = _flood(T, right_seed, on)
    if left & right:
        raise NotPlanarEmbedding(f"cycle {c} does not separate the embedding")
    return left, right


def _flood(T: Triangulation, seeds: Iterable[int], block: set[int]) -> set[int]:
    seen = set(seeds)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for w in T.rotation[v]:
            if w not in seen and w not in block:
                seen.add(w)
                todo.append(w)
    return seen


def _face_on_left(T: Triangulation, c: Cycle, face: Cycle, left: set[int], right: set[int]) -> bool:
    on = set(c)
    for w in face:
        if w not in on:
            if w in left:
                return True
            if w in right:
                return False
    # every face vertex sits on the cycle: decide from one dart of the face
    a, b = face[0], face[1]
    i = c.index(a)
    p, q = c[i - 1], c[(i + 1) % len(c)]
    d = T.degree(a)
    pv = T.pos[a]
    off_b = (pv[b] - pv[q]) % d
    off_p = (pv[p] - pv[q]) % d
    return off_b < off_p


def cycle_split(
    T: Triangulation, c: Sequence[int], unbounded: Cycle | None = None
) -> CycleSplit:
    """Split the vertices off the cycle ``c`` into interior and exterior.

    The exterior is the side holding the unbounded face (``unbounded`` or
    ``T.outer_face``).
    """
    c = check_cycle(T, c)
    key = normalize_cycle(c)
    if unbounded is None:
        hit = T._split_cache.get(key)
        if hit is not None:
            return hit
    cc = key
    left, right = _sides(T, cc)
    face = unbounded if unbounded is not None else T.outer_face
    outer_left = _face_on_left(T, cc, face, left, right)
    inner, outer = (right, left) if outer_left else (left, right)
    res = CycleSplit(
        frozenset(inner), frozenset(outer), frozenset(left), frozenset(right), cc, not outer_left
    )
    if unbounded is None:
        T._split_cache[key] = res
    return res


def interior(T: Triangulation, c: Sequence[int]) -> frozenset[int]:
    return cycle_split(T, c).interior


def crossing(T: Triangulation, c1: Sequence[int], c2: Sequence[int]) -> bool:
    """True when ``c1`` has vertices strictly on both sides of ``c2``."""
    s = cycle_split(T, c2)
    vs = set(c1)
    return bool(vs & s.interior) and bool(vs & s.exterior)


def intersecting(T: Triangulation, c1: Sequence[int], c2: Sequence[int]) -> bool:
    """Two cycles intersect when one runs through both sides of the other.

    For cycles in a plane graph the relation is symmetric, so either test
    direction gives the same answer.
    """
    return crossing(T, c1, c2)


def _side_range(T: Triangulation, c: Cycle, i: int, left: bool) -> list[int]:
    """Neighbours of ``c[i]`` on one side, including the two cycle edges."""
    v, p, q = c[i], c[i - 1], c[(i + 1) % len(c)]
    r = T.rotation[v]
    d = len(r)
    a, b = (T.pos[v][q], T.pos[v][p]) if left else (T.pos[v][p], T.pos[v][q])
    out = [r[a]]
    t = a
    while t != b:
        t = (t + 1) % d
        out.append(r[t])
    return out


def induced_smpg(T: Triangulation, c: Sequence[int], side: str = "interior") -> Triangulation:
    """The SMPG bounded by ``c`` together with one of its sides.

    Vertices are relabelled so that ``c`` becomes ``0, 1, ..., k-1`` in
    order; the remaining vertices follow in increasing original id.  The
    original ids are kept in ``origin``.
    """
    c = check_cycle(T, c)
    if len(c) == 3:
        raise TriangleCycle("a triangle does not bound an SMPG")
    if side not in ("interior", "exterior"):
        raise ValueError(side)
    key = normalize_cycle(c)
    s = cycle_split(T, key)
    chosen = s.interior if side == "interior" else s.exterior
    use_left = s.interior_left if side == "interior" else not s.interior_left
    order = list(c) + sorted(chosen)
    new = {v: k for k, v in enumerate(order)}
    rot: list[list[int]] = [[] for _ in order]
    ci = {v: i for i, v in enumerate(key)}
    for v in order:
        if v in ci:
            nbrs = _side_range(T, key, ci[v], use_left)
        else:
            nbrs = list(T.rotation[v])
        rot[new[v]] = [new[w] for w in nbrs]
    outer = tuple(range(len(c)))
    return Triangulation(rot, outer, origin=order)


# -- pockets ------------------------------------------------------------


@dataclass(frozen=True)
class Pocket:
    """An ij-pocket: a bichromatic path ``P`` closed by a mouth ``t1 s tn``."""

    path: Cycle
    mouth: tuple[int, int, int]
    colors: tuple[int, int]
    inside: frozenset[int]

    @property
    def cycle(self) -> Cycle:
        return tuple(self.path) + (self.mouth[1],)


def _alternating_paths(T: Triangulation, f: Sequence[int], s: int, t: int, i: int, j: int, block: int) -> list[Cycle]:
    """Simple paths from ``s`` to ``t`` whose consecutive colours alternate in {i, j}."""
    out: list[Cycle] = []
    path = [s]
    on = {s, block}

    def rec(v: int) -> None:
        for w in T.rotation[v]:
            if w in on or f[w] not in (i, j) or f[w] == f[v]:
                continue
            if w == t:
                out.append(tuple(path) + (t,))
                continue
            path.append(w)
            on.add(w)
            rec(w)
            on.discard(w)
            path.pop()

    rec(s)
    return out


def find_pockets(T: Triangulation, f: Sequence[int], i: int, j: int) -> list[Pocket]:
    """Every ij-pocket of ``f``.

    For each mouth ``t1 s tn`` (``s`` off the colour pair, ``t1, tn`` its
    neighbours) and each ij-path from ``t1`` to ``tn`` avoiding ``s`` the
    closed curve is split; the pocket is the side away from the unbounded
    face and it must hold a vertex; the cycle has length at least 4.  Pseudo colourings are accepted; a
    bichromatic path never uses a monochromatic edge.
    """
    out = []
    seen = set()
    for s in range(T.n):
        if f[s] in (i, j):
            continue
        nb = [w for w in T.rotation[s] if f[w] in (i, j)]
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                t1, tn = nb[a], nb[b]
                for p in _alternating_paths(T, f, t1, tn, i, j, s):
                    if len(p) < 3:
                        continue  # a pocket is an SMPG, so its cycle has length >= 4
                    cyc = p + (s,)
                    key = normalize_cycle(cyc)
                    if key in seen:
                        continue
                    seen.add(key)
                    inside = cycle_split(T, cyc).interior
                    if inside:
                        out.append(Pocket(p, (t1, s, tn), (i, j), inside))
    out.sort(key=lambda k: (len(k.path), k.path, k.mouth))
    return out


# -- canonical codes ------------------------------------------------------


def _code(T: Triangulation, u: int, v: int, mirror: bool) -> list[int]:
    rot, pos, n = T.rotation, T.pos, T.n
    num = [-1] * n
    num[u] = 0
    order = [u]
    ref = [0] * n
    ref[u] = v
    code: list[int] = []
    cnt = 1
    step = -1 if mirror else 1
    i = 0
    while i < len(order):
        w = order[i]
        r = rot[w]
        d = len(r)
        k = pos[w][ref[w]]
        for t in range(d):
            x = r[(k + step * t) % d]
            if num[x] < 0:
                num[x] = cnt
                cnt += 1
                order.append(x)
                ref[x] = w
            code.append(num[x])
        code.append(n)
        i += 1
    return code


def _start_darts(T: Triangulation) -> list[tuple[int, int, bool]]:
    if T.outer is not None:
        o = T.outer
        k = len(o)
        cands = [(o[i], o[(i + 1) % k], False) for i in range(k)]
        cands += [(o[(i + 1) % k], o[i], True) for i in range(k)]
        return cands
    best = None
    out: list[tuple[int, int, bool]] = []
    deg = [len(r) for r in T.rotation]
    for u in range(T.n):
        du = deg[u]
        if best is not None and du > best[0]:
            continue
        for v in T.rotation[u]:
            for m in (False, True):
                key = (du, deg[v], deg[T.succ(u, v, -1 if m else 1)], deg[T.succ(u, v, 1 if m else -1)])
                if best is None or key < best:
                    best = key
                    out = [(u, v, m)]
                elif key == best:
                    out.append((u, v, m))
    return out


def canonical_start(T: Triangulation) -> tuple[list[int], tuple[int, int, bool]]:
    best: list[int] | None = None
    arg = (0, 0, False)
    for u, v, m in _start_darts(T):
        c = _code(T, u, v, m)
        if best is None or c < best:
            best, arg = c, (u, v, m)
    assert best is not None
    return best, arg


def canonical_code(T: Triangulation) -> bytes:
    """Complete isomorphism invariant of the embedding (mirror images equal)."""
    code, _ = canonical_start(T)
    head = [0 if T.outer is None else len(T.outer), T.n]
    return bytes(head + code) if T.n < 255 else repr(head + code).encode()


def canonical_form(T: Triangulation) -> Triangulation:
    """Relabelled copy in canonical numbering, rotations in canonical sense."""
    _, (u, v, m) = canonical_start(T)
    S = T.mirror() if m else T
    # BFS numbering from the chosen dart, as used by the code
    num = [-1] * T.n
    num[u] = 0
    order = [u]
    ref = {u: v}
    i = 0
    while i < len(order):
        w = order[i]
        r = S.rotation[w]
        k = S.pos[w][ref[w]]
        for t in range(len(r)):
            x = r[(k + t) % len(r)]
            if num[x] < 0:
                num[x] = len(order)
                order.append(x)
                ref[x] = w
        i += 1
    R = S.relabel(num)
    # rotate each list to start at its BFS reference, for bit-stable output
    rot = []
    for nv in range(R.n):
        w = order[nv]
        r = R.rotation[nv]
        start = R.pos[nv][num[ref[w]]]
        rot.append(r[start:] + r[:start])
    outer = None
    if R.outer is not None:
        o = R.outer
        k = o.index(min(o))
        outer = o[k:] + o[:k]
    return Triangulation(rot, outer, validate=False)


# -- text format ----------------------------------------------------------


def parse_mpg(text: str) -> Triangulation:
    """Read the ``.mpg`` format (``mpg n`` or ``smpg n outer: ...`` header)."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((no, s))
    if not lines:
        raise ParseError("empty input", 1)
    no, head = lines[0]
    parts = head.split()
    outer = None
    try:
        if parts[0] == "mpg" and len(parts) == 2:
            n = int(parts[1])
        elif parts[0] == "smpg" and len(parts) >= 4 and parts[2] == "outer:":
            n = int(parts[1])
            outer = [int(x) for x in parts[3:]]
        else:
            raise ParseError(f"bad header {head!r}", no)
    except ValueError:
        raise ParseError(f"bad header {head!r}", no) from None
    rot: list[list[int] | None] = [None] * n
    for no, s in lines[1:]:
        if ":" not in s:
            raise ParseError(f"expected 'v: neighbours', got {s!r}", no)
        a, b = s.split(":", 1)
        try:
            v = int(a)
            nb = [int(x) for x in b.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {s!r}", no) from None
        if not (0 <= v < n):
            raise ParseError(f"vertex {v} out of range", no)
        if rot[v] is not None:
            raise ParseError(f"vertex {v} listed twice", no)
        rot[v] = nb
    missing = [v for v in range(n) if rot[v] is None]
    if missing:
        raise ParseError(f"no rotation for vertices {missing}", lines[-1][0])
    return Triangulation([r or [] for r in rot], outer)


def format_mpg(T: Triangulation, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    if T.outer is None:
        out.append(f"mpg {T.n}")
    else:
        out.append(f"smpg {T.n} outer: " + " ".join(map(str, T.outer)))
    for v, r in enumerate(T.rotation):
        out.append(f"{v}: " + " ".join(map(str, r)))
    return "\n".join(out) + "\n"


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Triangulation:
    """Embed a 3-connected planar graph (its embedding is unique up to mirror)."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise NotPlanarEmbedding("graph is not planar")
    rot = [list(emb.neighbors_cw_order(v))[::-1] for v in range(n)]
    return Triangulation(rot)


def smpg_from_edges(n: int, edges: Iterable[tuple[int, int]], outer: Sequence[int]) -> Triangulation:
    """Embed an SMPG given by edges and its outer cycle.

    A temporary apex joined to the outer cycle turns the input into a
    triangulation whose embedding is forced; removing the apex again leaves
    the SMPG.  Vertex ids are preserved.
    """
    apex = n
    full = list(edges) + [(apex, v) for v in outer]
    T = from_edges(n + 1, full)
    rot = [[w for w in T.rotation[v] if w != apex] for v in range(n)]
    S = Triangulation(rot, list(outer))
    return S
