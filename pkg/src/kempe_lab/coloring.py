"""4-colourings, bichromatic structure, Kempe changes and sigma operations.

A colouring is a tuple ``f`` with ``f[v]`` in ``{1, 2, 3, 4}``.  Its
canonical form renames colours in order of first appearance, which is the
lexicographically least of its 24 permuted copies.  Pseudo colourings use the
same representation and are simply allowed to have monochromatic edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    CycleCapExceeded,
    NotBichromaticCycle,
    NotFourColorable,
    OddCycleBlocked,
    ParseError,
)
from .planar import Cycle, Triangulation, cycle_split

Coloring = tuple[int, ...]
COLORS = (1, 2, 3, 4)
PAIRS = tuple(combinations(COLORS, 2))

#: cap on the number of simple cycles listed for one bichromatic component
CYCLE_CAP = 200_000


def canonical(f: Sequence[int]) -> Coloring:
    ren: dict[int, int] = {}
    out = []
    for c in f:
        r = ren.get(c)
        if r is None:
            r = ren[c] = len(ren) + 1
        out.append(r)
    return tuple(out)


def permute(f: Sequence[int], perm: dict[int, int]) -> Coloring:
    return tuple(perm[c] for c in f)


def is_proper(T: Triangulation, f: Sequence[int]) -> bool:
    if len(f) != T.n:
        return False
    for u, r in enumerate(T.rotation):
        fu = f[u]
        if fu not in COLORS:
            return False
        for w in r:
            if f[w] == fu:
                return False
    return True


def complement(i: int, j: int) -> tuple[int, int]:
    s, t = (c for c in COLORS if c not in (i, j))
    return s, t


def swap(f: Sequence[int], vertices: Iterable[int], i: int, j: int) -> Coloring:
    g = list(f)
    for v in vertices:
        if g[v] == i:
            g[v] = j
        elif g[v] == j:
            g[v] = i
    return tuple(g)


# -- enumeration ------------------------------------------------------------------


def _search_order(T: Triangulation) -> list[int]:
    """Greedy order: next vertex has the most already-ordered neighbours."""
    n = T.n
    start = max(range(n), key=lambda v: (T.degree(v), -v))
    order = [start]
    placed = [False] * n
    placed[start] = True
    score = [0] * n
    for w in T.rotation[start]:
        score[w] += 1
    for _ in range(n - 1):
        best = -1
        for v in range(n):
            if not placed[v] and (best < 0 or (score[v], T.degree(v)) > (score[best], T.degree(best))):
                best = v
        placed[best] = True
        order.append(best)
        for w in T.rotation[best]:
            score[w] += 1
    return order


def enumerate_colorings(T: Triangulation) -> list[Coloring]:
    """All proper 4-colourings up to colour permutation, sorted (the set C0_4)."""
    key = "colorings"
    hit = T.memo.get(key)
    if hit is not None:
        return hit
    order = _search_order(T)
    idx = {v: k for k, v in enumerate(order)}
    earlier = [[idx[w] for w in T.rotation[v] if idx[w] < idx[v]] for v in order]
    n = T.n
    col = [0] * n
    out: list[Coloring] = []

    def rec(k: int, used: int) -> None:
        if k == n:
            f = [0] * n
            for p, v in enumerate(order):
                f[v] = col[p]
            out.append(canonical(f))
            return
        banned = {col[p] for p in earlier[k]}
        top = min(used + 1, 4)
        for c in range(1, top + 1):
            if c in banned:
                continue
            col[k] = c
            rec(k + 1, max(used, c))
        col[k] = 0

    rec(0, 0)
    if not out:
        raise NotFourColorable(f"no 4-colouring found for {T!r}")
    res = sorted(set(out))
    T.memo[key] = res
    return res


def brute_force_colorings(T: Triangulation) -> list[Coloring]:
    """Oracle: scan all 4^n assignments (small n only)."""
    from itertools import product

    seen = set()
    for f in product(COLORS, repeat=T.n):
        if is_proper(T, f):
            seen.add(canonical(f))
    return sorted(seen)


def count_all_colorings(T: Triangulation) -> int:
    """Number of labelled proper colourings, by brute force."""
    from itertools import product

    return sum(1 for f in product(COLORS, repeat=T.n) if is_proper(T, f))


# -- bichromatic structure -----------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    colors: tuple[int, int]
    vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...]
    kind: str  # path | tree | cyclic
    cycles: tuple[Cycle, ...] = field(repr=False, default=())


def ij_subgraph(T: Triangulation, f: Sequence[int], i: int, j: int) -> dict[int, list[int]]:
    keep = {v for v in range(T.n) if f[v] in (i, j)}
    return {v: [w for w in T.rotation[v] if w in keep] for v in keep}


def components(adj: dict[int, list[int]]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        todo = [s]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def simple_cycles(adj: dict[int, list[int]], vertices: Iterable[int] | None = None, cap: int = CYCLE_CAP) -> list[Cycle]:
    """All simple cycles (length >= 3) of an undirected graph, normalised."""
    vs = set(adj if vertices is None else vertices)
    sub = {v: [w for w in adj[v] if w in vs] for v in vs}
    # peel to the 2-core: vertices of degree <= 1 lie on no cycle
    deg = {v: len(sub[v]) for v in sub}
    todo = [v for v in sub if deg[v] <= 1]
    alive = set(sub)
    while todo:
        v = todo.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in sub[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= 1:
                    todo.append(w)
    core = {v: sorted(w for w in sub[v] if w in alive) for v in alive}
    out: list[Cycle] = []
    for s in sorted(core):
        path = [s]
        on = {s}
        stack = [iter([w for w in core[s] if w > s])]
        while stack:
            it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on.discard(path.pop())
                continue
            path.append(nxt)
            on.add(nxt)
            more = []
            for w in core[nxt]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(path))
                    if len(out) > cap:
                        raise CycleCapExceeded(f"more than {cap} cycles")
                elif w > s and w not in on:
                    more.append(w)
            stack.append(iter(more))
    return out


def bichromatic(T: Triangulation, f: Sequence[int], i: int, j: int) -> list[Component]:
    """The ij-components of ``f`` with their cycle inventories."""
    i, j = min(i, j), max(i, j)
    adj = ij_subgraph(T, f, i, j)
    out = []
    for comp in components(adj):
        edges = tuple((u, w) for u in sorted(comp) for w in sorted(adj[u]) if u < w)
        cyc = tuple(simple_cycles(adj, comp)) if len(edges) >= len(comp) else ()
        if cyc:
            kind = "cyclic"
        elif all(len(adj[v]) <= 2 for v in comp):
            kind = "path"
        else:
            kind = "tree"
        out.append(Component((i, j), comp, edges, kind, cyc))
    return out


def bichromatic_cycles(T: Triangulation, f: Sequence[int]) -> list[tuple[Cycle, tuple[int, int]]]:
    """C^2(f): every simple bichromatic cycle with its colour pair."""
    key = ("c2", tuple(f))
    hit = T.memo.get(key)
    if hit is not None:
        return hit
    out = []
    for i, j in PAIRS:
        adj = ij_subgraph(T, f, i, j)
        for c in simple_cycles(adj):
            out.append((c, (i, j)))
    T.memo[key] = out
    return out


def is_tree_coloring(T: Triangulation, f: Sequence[int]) -> bool:
    return not bichromatic_cycles(T, f)


def _check_bichromatic(T: Triangulation, f: Sequence[int], c: Sequence[int]) -> tuple[int, int]:
    cols = {f[v] for v in c}
    k = len(c)
    for a in range(k):
        if not T.has_edge(c[a], c[(a + 1) % k]):
            raise NotBichromaticCycle(f"{c[a]}-{c[(a + 1) % k]} is not an edge")
    if len(cols) != 2 or len(set(c)) != k or k < 3:
        raise NotBichromaticCycle(f"{tuple(c)} uses colours {sorted(cols)}")
    i, j = sorted(cols)
    return i, j


# -- moves -------------------------------------------------------------------


def kempe_change(T: Triangulation, f: Sequence[int], component: Iterable[int], i: int | None = None, j: int | None = None) -> Coloring:
    """Swap the two colours of an ij-component (colours read off the component
    when not given)."""
    comp = list(component)
    if i is None or j is None:
        cols = sorted({f[v] for v in comp})
        if len(cols) == 1:
            c = cols[0]
            raise ValueError(f"colour pair of a single-colour component {c} is ambiguous")
        i, j = cols
    return swap(f, comp, i, j)


def component_of(T: Triangulation, f: Sequence[int], v: int, i: int, j: int, avoid: Iterable[int] = ()) -> frozenset[int]:
    """The ij-component of ``f`` containing ``v`` (in ``G - avoid``)."""
    block = set(avoid)
    if f[v] not in (i, j) or v in block:
        return frozenset()
    comp = {v}
    todo = [v]
    while todo:
        x = todo.pop()
        for w in T.rotation[x]:
            if w not in comp and w not in block and f[w] in (i, j):
                comp.add(w)
                todo.append(w)
    return frozenset(comp)


def kempe_change_at(T: Triangulation, f: Sequence[int], v: int, i: int, j: int, avoid: Iterable[int] = ()) -> Coloring:
    return swap(f, component_of(T, f, v, i, j, avoid), i, j)


def same_component(T: Triangulation, f: Sequence[int], u: int, v: int, i: int, j: int) -> bool:
    return v in component_of(T, f, u, i, j)


def sigma_op(T: Triangulation, f: Sequence[int], c: Sequence[int], unbounded: Cycle | None = None) -> Coloring:
    """Swap the two colours missing from the bichromatic cycle ``c`` on its
    interior (the side away from the unbounded face)."""
    i, j = _check_bichromatic(T, f, c)
    s, t = complement(i, j)
    inside = cycle_split(T, c, unbounded).interior
    return swap(f, inside, s, t)


def sigma_by_components(T: Triangulation, f: Sequence[int], c: Sequence[int]) -> Coloring:
    """Oracle for ``sigma_op``: K-change every st-component lying inside ``c``."""
    i, j = _check_bichromatic(T, f, c)
    s, t = complement(i, j)
    inside = cycle_split(T, c).interior
    g = tuple(f)
    for comp in components(ij_subgraph(T, f, s, t)):
        if comp <= inside:
            g = swap(g, comp, s, t)
        else:
            assert not (comp & inside), "st-component crosses a bichromatic cycle"
    return g


def sigma_neighbors(T: Triangulation, f: Coloring) -> list[tuple[Coloring, Cycle, tuple[int, int]]]:
    """Canonical results of every sigma move from the canonical colouring ``f``."""
    key = ("sigma_nb", f)
    hit = T.memo.get(key)
    if hit is not None:
        return hit
    out = []
    for c, (i, j) in bichromatic_cycles(T, f):
        s, t = complement(i, j)
        g = canonical(swap(f, cycle_split(T, c).interior, s, t))
        out.append((g, c, (i, j)))
    T.memo[key] = out
    return out


def kempe_class_sigma(T: Triangulation, f: Sequence[int]) -> frozenset[Coloring]:
    """F^f: canonical colourings reachable from ``f`` by sigma operations."""
    f0 = canonical(f)
    classes = T.memo.setdefault("sigma_class", {})
    hit = classes.get(f0)
    if hit is not None:
        return hit
    seen = {f0}
    todo = deque([f0])
    while todo:
        g = todo.popleft()
        for h, _, _ in sigma_neighbors(T, g):
            if h not in seen:
                seen.add(h)
                todo.append(h)
    res = frozenset(seen)
    for g in res:
        classes[g] = res
    return res


def kempe_neighbors(T: Triangulation, f: Coloring) -> list[tuple[Coloring, frozenset[int], tuple[int, int]]]:
    out = []
    for i, j in PAIRS:
        for comp in components(ij_subgraph(T, f, i, j)):
            out.append((canonical(swap(f, comp, i, j)), comp, (i, j)))
    return out


def kempe_class_general(T: Triangulation, f: Sequence[int]) -> frozenset[Coloring]:
    """Closure of ``f`` under K-changes on arbitrary bichromatic components."""
    f0 = canonical(f)
    classes = T.memo.setdefault("kempe_class", {})
    hit = classes.get(f0)
    if hit is not None:
        return hit
    seen = {f0}
    todo = deque([f0])
    while todo:
        g = todo.popleft()
        for h, _, _ in kempe_neighbors(T, g):
            if h not in seen:
                seen.add(h)
                todo.append(h)
    res = frozenset(seen)
    for g in res:
        classes[g] = res
    return res


def sigma_classes(T: Triangulation) -> list[frozenset[Coloring]]:
    out = []
    done: set[Coloring] = set()
    for f in enumerate_colorings(T):
        if f not in done:
            cl = kempe_class_sigma(T, f)
            done |= cl
            out.append(cl)
    return out


def classify_coloring(T: Triangulation, f: Sequence[int]) -> str:
    """``tree``, ``UBC`` or ``cyclic-cycle``."""
    from .structure import ub_cycles

    f = canonical(f)
    if not bichromatic_cycles(T, f):
        return "tree"
    return "UBC" if ub_cycles(T, f) else "cyclic-cycle"


# -- reconfiguration graph ----------------------------------------------------------------


@dataclass
class ReconfigGraph:
    nodes: list[Coloring]
    edges: list[tuple[Coloring, Coloring, tuple[int, int], tuple[int, ...]]]
    moves: str = "sigma"

    def components(self) -> list[frozenset[Coloring]]:
        adj: dict[Coloring, set[Coloring]] = {v: set() for v in self.nodes}
        for a, b, _, _ in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen: set[Coloring] = set()
        out = []
        for v in self.nodes:
            if v in seen:
                continue
            comp = {v}
            todo = [v]
            while todo:
                x = todo.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        todo.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def to_dot(self, name: str = "reconfig") -> str:
        ids = {v: k for k, v in enumerate(self.nodes)}
        lines = [f"graph {name} {{"]
        for v in self.nodes:
            lines.append(f'  f{ids[v]} [label="{"".join(map(str, v))}"];')
        for a, b, (i, j), where in self.edges:
            at = "-".join(map(str, where))
            lines.append(f'  f{ids[a]} -- f{ids[b]} [label="{i}{j}@{at}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def reconfig_graph(T: Triangulation, moves: str = "sigma") -> ReconfigGraph:
    """Graph on C0_4 joining complement colourings.

    ``moves="sigma"`` uses sigma operations (edge label: colour pair and the
    cycle); ``moves="kempe"`` uses single K-changes (label: colour pair and
    the component).
    """
    nodes = enumerate_colorings(T)
    seen: set[tuple[Coloring, Coloring]] = set()
    edges = []
    for f in nodes:
        if moves == "sigma":
            nb = [(g, c, p) for g, c, p in sigma_neighbors(T, f)]
        elif moves == "kempe":
            nb = [(g, tuple(sorted(c)), p) for g, c, p in kempe_neighbors(T, f)]
        else:
            raise ValueError(moves)
        for g, where, pair in nb:
            if g == f:
                continue
            key = (min(f, g), max(f, g))
            if key in seen:
                continue
            seen.add(key)
            edges.append((f, g, pair, tuple(where)))
    return ReconfigGraph(list(nodes), edges, moves)


# -- pseudo colourings ------------------------------------------------------


@dataclass(frozen=True)
class PseudoEdge:
    u: int
    v: int
    color: int
    ts_type: str  # apex colours, e.g. "22"

    def describe(self) -> str:
        return f"{self.ts_type}-type pseudo {self.color}{self.color}-edge {self.u}{self.v}"


def pseudo_edges(T: Triangulation, f: Sequence[int]) -> list[PseudoEdge]:
    out = []
    for u, v in T.edges:
        if f[u] == f[v]:
            a, b = T.apexes(u, v)
            cols = sorted(f[x] for x in (a, b) if x is not None)
            out.append(PseudoEdge(u, v, f[u], "".join(map(str, cols))))
    return out


def pseudo_recolor(T: Triangulation, f: Sequence[int], v: int, c: int) -> tuple[Coloring, list[PseudoEdge]]:
    """Recolour ``v`` with ``c``; the second item lists monochromatic edges."""
    if f[v] == c:
        raise ValueError("new colour equals the old one")
    g = list(f)
    g[v] = c
    g = tuple(g)
    return g, pseudo_edges(T, g)


def _even_path(adj: dict[int, list[int]], a: int, b: int, banned_edge: tuple[int, int], cap: int = CYCLE_CAP) -> bool:
    """Is there a simple a-b path of even length avoiding ``banned_edge``?"""
    e = {banned_edge, banned_edge[::-1]}
    path = [a]
    on = {a}
    stack = [iter(adj[a])]
    steps = 0
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on.discard(path.pop())
            continue
        if nxt in on or (path[-1], nxt) in e:
            continue
        steps += 1
        if steps > cap:
            raise CycleCapExceeded("path search cap")
        if nxt == b:
            # the closed path a..b has len(path) edges
            if len(path) % 2 == 0:
                return True
            continue
        path.append(nxt)
        on.add(nxt)
        stack.append(iter(adj[nxt]))
    return False


def on_odd_cycle(T: Triangulation, f: Sequence[int], u: int, v: int, i: int, j: int) -> bool:
    """Does edge ``uv`` lie on an odd cycle of the ij-subgraph of ``f``?"""
    adj = ij_subgraph(T, f, i, j)
    if u not in adj or v not in adj:
        return False
    return _even_path(adj, u, v, (u, v))


def eliminate_pseudo_edge(T: Triangulation, f: Sequence[int], e: tuple[int, int], j: int) -> tuple[Coloring, list[PseudoEdge]]:
    """K-change the ij-component of ``H - z1`` holding ``z2`` (``e = z1z2``)."""
    z1, z2 = e
    i = f[z1]
    if f[z2] != i or not T.has_edge(z1, z2):
        raise ValueError(f"{z1}{z2} is not a pseudo edge")
    if j == i:
        raise ValueError("second colour must differ")
    if on_odd_cycle(T, f, z1, z2, i, j):
        raise OddCycleBlocked(f"{z1}{z2} lies on an odd {i}{j}-cycle")
    comp = component_of(T, f, z2, i, j, avoid=[z1])
    g = swap(f, comp, i, j)
    return g, pseudo_edges(T, g)


# -- text format -------------------------------------------------------------------


def parse_col4(text: str, allow_unset: bool = False) -> Coloring:
    """Read a ``.col4`` file; with ``allow_unset`` colour ``0`` marks an uncoloured vertex."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((no, s))
    if not lines:
        raise ParseError("empty input", 1)
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "col4":
        raise ParseError(f"bad header {head!r}", no)
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(f"bad header {head!r}", no) from None
    f: list[int | None] = [None] * n
    for no, s in lines[1:]:
        try:
            a, b = s.split(":")
            v, c = int(a), int(b)
        except ValueError:
            raise ParseError(f"expected 'v: c', got {s!r}", no) from None
        if not (0 <= v < n) or not (c in COLORS or (allow_unset and c == 0)):
            raise ParseError(f"bad entry {s!r}", no)
        f[v] = c
    if any(c is None for c in f):
        raise ParseError("missing vertices", lines[-1][0])
    return tuple(c for c in f if c is not None)


def format_col4(f: Sequence[int]) -> str:
    return f"col4 {len(f)}\n" + "".join(f"{v}: {c}\n" for v, c in enumerate(f))
