"""Decycle colourings of 4-base-modules.

A decycle colouring gives the module diagonal ``v2, v4`` two different
colours.  Every constructive strategy works on a recorded run: each
primitive move is applied and appended to a trace, so the result can be
replayed from the module colouring it started from.

Trace lines read ``move <kind> <args...>``:

``relabel a b c d``
    colour ``k`` becomes the ``k``-th number.
``kempe i j v...``
    swap ``i, j`` on the listed vertices (one or several components).
``sigma i j c...``
    swap the two colours off ``{i, j}`` on the interior of the cycle.
``recolor v c``
    give ``v`` colour ``c`` (may create monochromatic edges).
``eliminate i j z1 z2``
    K-change the ij-component of ``H - z1`` holding ``z2``.
``contract x [p q]``
    C3WO at ``x`` or C4WO identifying ``p, q``.
``lift``
    undo the last contraction, extending the colouring.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .coloring import (
    Coloring,
    bichromatic_cycles,
    complement,
    component_of,
    enumerate_colorings,
    ij_subgraph,
    is_proper,
    pseudo_edges,
    swap,
)
from .construct import WheelInstance, contract_wheel, find_contractible_4wheels
from .errors import (
    BranchUnmatched,
    KempeLabError,
    NoDecycleColoring,
    NotContractible,
    OddCycleBlocked,
    ParseError,
)
from .planar import Cycle, Triangulation, canonical_code, cycle_split, normalize_cycle
from .structure import (
    _bfs_path,
    find_module_cycles,
    frame_coloring,
    in_f2,
    is_base_module,
    is_parallel,
    missing_module_path,
    simple_paths,
)

STRATEGIES = ("recursive", "deg4", "parallel", "module-cycle", "axis", "cyclic")
SLOPED_TYPES = ("55-324", "55-343", "56-3234", "56-3243", "56-3423", "56-3424", "56-3434")
ODD_CAP = 200_000


# -- trace ---------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    kind: str
    args: tuple[int, ...] = ()

    def to_line(self) -> str:
        return " ".join(["move", self.kind, *map(str, self.args)])

    @classmethod
    def from_line(cls, line: str, no: int | None = None) -> "Move":
        parts = line.split()
        if len(parts) < 2 or parts[0] != "move":
            raise ParseError(f"expected 'move <kind> <args...>', got {line!r}", no)
        try:
            args = tuple(int(x) for x in parts[2:])
        except ValueError:
            raise ParseError(f"non-integer argument in {line!r}", no) from None
        return cls(parts[1], args)


def format_trace(moves: Iterable[Move], header: Sequence[str] = ()) -> str:
    out = [f"# {h}" for h in header]
    out += [m.to_line() for m in moves]
    return "\n".join(out) + "\n"


def parse_trace(text: str) -> list[Move]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append(Move.from_line(s, no))
    return out


def _contract(T: Triangulation, x: int, pair: tuple[int, int] | None, f: Sequence[int]):
    """Contract a wheel; returns the new graph, colouring and the kept ids."""
    if pair is None:
        S, g = contract_wheel(T, WheelInstance(x, tuple(T.rotation[x])), f)
        gone = {x}
    else:
        p, q = pair
        if T.outer is not None and q in T.outer:
            p, q = q, p
        S, g = contract_wheel(T, WheelInstance(x, tuple(T.rotation[x]), (p, q)), f)
        gone = {x, q}
    kept = [v for v in range(T.n) if v not in gone]
    return S, tuple(g), kept, pair and (p, q)


def _lift(T: Triangulation, g: Sequence[int], kept: Sequence[int], pair: tuple[int, int] | None, x: int) -> Coloring:
    """Extend a colouring of the contracted graph back to ``T``: both
    identified vertices keep the merged colour and the centre takes a free
    colour."""
    f = [0] * T.n
    for k, v in enumerate(kept):
        f[v] = g[k]
    if pair is not None:
        p, q = pair
        f[q] = f[p]
    used = {f[w] for w in T.rotation[x]}
    f[x] = min({1, 2, 3, 4} - used)
    return tuple(f)


def replay(S: Triangulation, start: Sequence[int], moves: Iterable[Move]) -> Coloring:
    """Apply a trace to ``start`` and return the final colouring."""
    graphs: list[tuple[Triangulation, list[int], tuple[int, int] | None, int]] = []
    T = S
    f = tuple(start)
    for m in moves:
        a = m.args
        if m.kind == "relabel":
            f = tuple(a[c - 1] for c in f)
        elif m.kind == "kempe":
            i, j, *vs = a
            bad = [v for v in vs if f[v] not in (i, j)]
            if bad:
                raise KempeLabError(f"kempe move touches {bad} outside colours {i}{j}")
            f = swap(f, vs, i, j)
        elif m.kind == "sigma":
            i, j, *cyc = a
            s, t = complement(i, j)
            f = swap(f, cycle_split(T, cyc).interior, s, t)
        elif m.kind == "recolor":
            v, c = a
            f = f[:v] + (c,) + f[v + 1 :]
        elif m.kind == "eliminate":
            i, j, z1, z2 = a
            f = swap(f, component_of(T, f, z2, i, j, avoid=[z1]), i, j)
        elif m.kind == "contract":
            x = a[0]
            pair = (a[1], a[2]) if len(a) == 3 else None
            T2, g, kept, pq = _contract(T, x, pair, f)
            graphs.append((T, kept, pq, x))
            T, f = T2, g
        elif m.kind == "lift":
            prev, kept, pq, x = graphs.pop()
            f = _lift(prev, f, kept, pq, x)
            T = prev
        else:
            raise KempeLabError(f"unknown move kind {m.kind!r}")
    if graphs:
        raise KempeLabError("trace ends inside a contraction")
    return f


# -- results ---------------------------------------------------------------------


@dataclass
class DecycleResult:
    coloring: Coloring
    strategy: str
    trace: list[Move]
    start: Coloring
    frame: tuple[int, int, int, int]
    notes: list[str] = field(default_factory=list)

    def is_decycled(self) -> bool:
        return self.coloring[self.frame[1]] != self.coloring[self.frame[3]]

    def replays(self, S: Triangulation) -> bool:
        return replay(S, self.start, self.trace) == self.coloring

    def trace_text(self) -> str:
        head = [
            f"strategy {self.strategy}",
            "frame " + " ".join(map(str, self.frame)),
            "start " + "".join(map(str, self.start)),
            "final " + "".join(map(str, self.coloring)),
        ]
        return format_trace(self.trace, head + [f"note {n}" for n in self.notes])


class Run:
    """A colouring together with the moves that produced it."""

    def __init__(self, S: Triangulation, f: Sequence[int], frame: Sequence[int]):
        self.S = S
        self.start = tuple(f)
        self.f = tuple(f)
        self.frame = tuple(frame)
        self.moves: list[Move] = []
        self.notes: list[str] = []

    # primitives
    def relabel(self, perm: dict[int, int]) -> None:
        if all(perm.get(c, c) == c for c in (1, 2, 3, 4)):
            return
        seq = tuple(perm.get(c, c) for c in (1, 2, 3, 4))
        self.f = tuple(seq[c - 1] for c in self.f)
        self.moves.append(Move("relabel", seq))

    def kempe(self, vertices: Iterable[int], i: int, j: int) -> None:
        vs = sorted(set(vertices))
        if not vs:
            return
        self.f = swap(self.f, vs, i, j)
        self.moves.append(Move("kempe", (i, j, *vs)))

    def kempe_at(self, v: int, i: int, j: int) -> frozenset[int]:
        comp = component_of(self.S, self.f, v, i, j)
        self.kempe(comp, i, j)
        return comp

    def swap_side(self, cycle: Sequence[int], i: int, j: int, side: str = "interior") -> None:
        """K-change every ij-vertex on one side of ``cycle``."""
        split = cycle_split(self.S, cycle)
        region = split.interior if side == "interior" else split.exterior
        self.kempe([v for v in region if self.f[v] in (i, j)], i, j)

    def sigma(self, cycle: Sequence[int], pair: tuple[int, int]) -> None:
        s, t = complement(*pair)
        self.f = swap(self.f, cycle_split(self.S, cycle).interior, s, t)
        self.moves.append(Move("sigma", (*pair, *cycle)))

    def recolor(self, v: int, c: int) -> None:
        self.f = self.f[:v] + (c,) + self.f[v + 1 :]
        self.moves.append(Move("recolor", (v, c)))

    def eliminate(self, z1: int, z2: int, j: int) -> None:
        i = self.f[z2]
        if on_odd_cycle_through(self.S, self.f, z1, z2, i, j) is not None:
            raise OddCycleBlocked(f"{z1}{z2} lies on an odd {i}{j}-cycle")
        self.f = swap(self.f, component_of(self.S, self.f, z2, i, j, avoid=[z1]), i, j)
        self.moves.append(Move("eliminate", (i, j, z1, z2)))

    # queries
    @property
    def decycled(self) -> bool:
        return self.f[self.frame[1]] != self.f[self.frame[3]] and is_proper(self.S, self.f)

    def result(self, strategy: str) -> DecycleResult:
        if not self.decycled:
            raise BranchUnmatched(f"{strategy}: final colouring is not a decycle colouring", {"coloring": self.f})
        return DecycleResult(self.f, strategy, list(self.moves), self.start, self.frame, list(self.notes))

    def snapshot(self) -> tuple[Coloring, int, int]:
        return self.f, len(self.moves), len(self.notes)

    def restore(self, snap: tuple[Coloring, int, int]) -> None:
        self.f = snap[0]
        del self.moves[snap[1] :]
        del self.notes[snap[2] :]


def symmetric_frames(frame: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """The four frames with the same diagonal ``{v2, v4}``."""
    v1, v2, v3, v4 = frame
    return [(v1, v2, v3, v4), (v3, v4, v1, v2), (v1, v4, v3, v2), (v3, v2, v1, v4)]


def _start(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> Run:
    run = Run(S, f, frame)
    g = frame_coloring(f, frame)
    perm = {f[v]: g[v] for v in range(S.n)}
    run.relabel(perm)
    return run


def _frame_of(S: Triangulation, frame: Sequence[int] | None) -> tuple[int, int, int, int]:
    if frame is not None:
        return tuple(frame)  # type: ignore[return-value]
    rep = is_base_module(S, verify=False)
    if not rep.is_base_module or rep.frame is None:
        raise KempeLabError("not a 4-base-module")
    return rep.frame


def _is_module_coloring(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> bool:
    from .coloring import canonical

    rep = is_base_module(S, verify=False)
    return canonical(f) in rep.module_colorings and in_f2(f, frame)


def on_odd_cycle_through(T: Triangulation, f: Sequence[int], u: int, v: int, i: int, j: int) -> Cycle | None:
    """The shortest odd cycle of the ij-subgraph through edge ``uv``."""
    adj = ij_subgraph(T, f, i, j)
    if u not in adj or v not in adj or v not in adj[u]:
        return None
    # BFS over (vertex, parity) avoiding the edge itself, then rebuild a simple path
    best = None
    path = [u]
    on = {u}
    steps = 0
    limit = len(adj) + 1

    def rec(x: int) -> None:
        nonlocal best, steps
        if best is not None and len(path) >= len(best):
            return
        for w in sorted(adj[x]):
            if (x, w) in ((u, v), (v, u)) or w in on:
                continue
            steps += 1
            if steps > ODD_CAP:
                return
            if w == v:
                if len(path) % 2 == 0 and (best is None or len(path) + 1 < len(best)):
                    best = tuple(path) + (v,)
                continue
            if len(path) + 1 > limit:
                continue
            path.append(w)
            on.add(w)
            rec(w)
            on.discard(w)
            path.pop()

    rec(u)
    return best


def _path(S: Triangulation, f: Sequence[int], s: int, t: int, i: int, j: int, allowed: set[int] | None = None) -> tuple[int, ...] | None:
    adj = ij_subgraph(S, f, i, j)
    if allowed is not None:
        keep = set(allowed) | {s, t}
        adj = {v: [w for w in ws if w in keep] for v, ws in adj.items() if v in keep}
    return _bfs_path(adj, s, t)


def _link_path(S: Triangulation, v: int, a: int, b: int) -> list[int]:
    """Neighbours of the outer vertex ``v`` from ``a`` to ``b`` through the interior."""
    r = list(S.rotation[v])
    k = r.index(a)
    r = r[k:] + r[:k]
    if r[-1] == b:
        return r
    if r[1] == b:
        return [a] + list(reversed(r[1:]))
    raise BranchUnmatched(f"{a} and {b} are not consecutive outer neighbours of {v}")


# -- oracle ----------------------------------------------------------------------


def decycle_oracle(S: Triangulation, frame: Sequence[int] | None = None) -> DecycleResult | None:
    """Any colouring with ``f(v2) != f(v4)``; the trace sets it directly."""
    fr = _frame_of(S, frame)
    for g in enumerate_colorings(S):
        if g[fr[1]] != g[fr[3]]:
            start = _module_start(S, fr)
            moves = [Move("recolor", (v, g[v])) for v in range(S.n) if start[v] != g[v]]
            return DecycleResult(g, "oracle", moves, start, fr)
    return None


def _module_start(S: Triangulation, frame: Sequence[int]) -> Coloring:
    rep = is_base_module(S, verify=False)
    if rep.module_colorings:
        return frame_coloring(min(rep.module_colorings), frame)
    return enumerate_colorings(S)[0]


# -- recursive modules ------------------------------------------------------------

_B4_CODE: bytes | None = None


def _b4_code() -> bytes:
    global _B4_CODE
    if _B4_CODE is None:
        from .construct import b4

        _B4_CODE = canonical_code(b4())
    return _B4_CODE


def _kempe_walk(T: Triangulation, f: Coloring, goal: Callable[[Coloring], bool]) -> list[tuple[frozenset[int], int, int]] | None:
    """Shortest K-change sequence from ``f`` to a colouring meeting ``goal``."""
    from .coloring import PAIRS, components

    prev: dict[Coloring, tuple[Coloring, frozenset[int], int, int] | None] = {f: None}
    todo = deque([f])
    while todo:
        g = todo.popleft()
        if goal(g):
            out = []
            while prev[g] is not None:
                h, comp, i, j = prev[g]  # type: ignore[misc]
                out.append((comp, i, j))
                g = h
            return list(reversed(out))
        for i, j in PAIRS:
            for comp in components(ij_subgraph(T, g, i, j)):
                h = swap(g, comp, i, j)
                if h not in prev:
                    prev[h] = (g, comp, i, j)
                    todo.append(h)
    return None


def decycle_recursive(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    """Contract contractible wheels down to B4, decycle B4, lift back up."""
    fr = _frame_of(S, frame)
    run = _start(S, f, fr)
    T = S
    g = run.f
    ids = list(range(S.n))  # current index -> index in S
    stack = []
    target = _b4_code()
    while canonical_code(T) != target:
        on = set(T.outer or ())
        threes = [x for x in range(T.n) if T.degree(x) == 3 and x not in on]
        step = None
        if threes:
            step = (threes[0], None)
        else:
            for w in find_contractible_4wheels(T, g):
                step = (w.center, w.contracted_pair)
                break
        if step is None:
            return None
        x, pair = step
        try:
            T2, g2, kept, pq = _contract(T, x, pair, g)
        except NotContractible:
            return None
        run.moves.append(Move("contract", (x,) if pair is None else (x, *pair)))
        stack.append((T, kept, pq, x))
        ids = [ids[k] for k in kept]
        T, g = T2, g2
    pos = {v: k for k, v in enumerate(ids)}
    a2, a4 = pos[fr[1]], pos[fr[3]]
    walk = _kempe_walk(T, g, lambda h: h[a2] != h[a4])
    if walk is None:
        raise BranchUnmatched("B4 has no decycle colouring reachable by K-changes", {"coloring": g})
    for comp, i, j in walk:
        run.moves.append(Move("kempe", (i, j, *sorted(comp))))
        g = swap(g, comp, i, j)
    while stack:
        prev, kept, pq, x = stack.pop()
        g = _lift(prev, g, kept, pq, x)
        run.moves.append(Move("lift"))
    run.f = g
    run.notes.append(f"{sum(1 for m in run.moves if m.kind == 'contract')} contractions")
    return run.result("recursive")


# -- degree-4 vertex on a unique module-path ----------------------------------------


def _unique_paths(S: Triangulation, g: Sequence[int], frame: Sequence[int]) -> dict[str, list[tuple[int, ...]]]:
    """Module-paths in the colours of ``g`` as given (no renaming)."""
    v2, v4 = frame[1], frame[3]
    c = g[v2]
    return {f"2{i}": simple_paths(ij_subgraph(S, g, c, i), v2, v4) for i in (3, 4)}


def deg4_applicable(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> list[tuple[str, int]]:
    """``(path colour, vertex)`` pairs meeting the theorem's hypothesis."""
    g = frame_coloring(f, frame)
    mp = _unique_paths(S, g, frame)
    on = set(S.outer or ())
    out = []
    for key in ("23", "24"):
        if len(mp[key]) != 1:
            continue
        for u in mp[key][0]:
            if u not in on and S.degree(u) == 4:
                out.append((key, u))
    return out


def decycle_deg4(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    fr = _frame_of(S, frame)
    cands = deg4_applicable(S, f, fr)
    if not cands:
        return None
    fails = []
    for key, u in cands:
        run = _start(S, f, fr)
        i = int(key[1])
        r = list(S.rotation[u])
        path = _unique_paths(S, run.f, fr)[key][0]
        k = path.index(u)
        a, b = path[k - 1], path[k + 1]
        while r[0] not in (a, b):
            r = r[1:] + r[:1]
        u1, u2, u3, u4 = r
        pair = complement(run.f[u], run.f[a])
        if run.f[u2] != run.f[u4]:
            run.kempe_at(u2, *pair)
            if run.f[u2] != run.f[u4]:
                fails.append((u, "neighbours stay unequal after the K-change"))
                continue
        cyc = (u1, u2, u3, u4)
        run.sigma(cyc, (min(run.f[u1], run.f[u2]), max(run.f[u1], run.f[u2])))
        v2 = fr[1]
        if missing_module_path(S, run.f, fr) != i and _path(S, run.f, v2, fr[3], 2, i) is not None:
            fails.append((u, f"a 2{i}-path survives the swap at {u}"))
            continue
        run.kempe_at(v2, 2, i)
        run.notes.append(f"degree-4 vertex {u} on the 2{i}-module-path")
        if run.decycled:
            return run.result("deg4")
        fails.append((u, "not decycled"))
    raise BranchUnmatched("no degree-4 vertex completes the construction", {"attempts": fails})


# -- parallel module-paths -----------------------------------------------------------


def _v2_link(S: Triangulation, frame: Sequence[int]) -> tuple[int, int] | None:
    v1, v2, v3, _ = frame
    if S.degree(v2) != 4:
        return None
    p = _link_path(S, v2, v1, v3)
    return p[1], p[2]


def parallel_pair(S: Triangulation, g: Sequence[int], frame: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    mp = _unique_paths(S, g, frame)
    for a in mp["23"]:
        for b in mp["24"]:
            if is_parallel(a, b):
                return a, b
    return None


def parallel_applicable(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> bool:
    if S.degree(frame[1]) != 4:
        return False
    return parallel_pair(S, frame_coloring(f, frame), frame) is not None


def decycle_parallel(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    fr = _frame_of(S, frame)
    if not parallel_applicable(S, f, fr):
        return None
    v1, v2, v3, v4 = fr
    run = _start(S, f, fr)
    x1, y1 = _v2_link(S, fr)  # type: ignore[misc]
    if run.f[x1] != 3:
        run.relabel({3: 4, 4: 3})
    l23, l24 = parallel_pair(S, run.f, fr)  # type: ignore[misc]
    run.kempe_at(v1, 1, 4)
    c24 = tuple(l24) + (v1,)
    cols = {run.f[v] for v in c24}
    if cols != {2, 4}:
        raise BranchUnmatched("the 24-module-path does not close into a 24-cycle", {"cycle": c24, "colours": sorted(cols)})
    run.sigma(c24, (2, 4))
    run.recolor(v2, 3)
    run.notes.append("parallel pair " + "-".join(map(str, l23)) + " / " + "-".join(map(str, l24)))
    return run.result("parallel")


# -- module-cycles ---------------------------------------------------------------------


def module_cycle_applicable(S: Triangulation, f: Sequence[int], frame: Sequence[int]):
    g = frame_coloring(f, frame)
    mp = _unique_paths(S, g, frame)
    for key in ("23", "24"):
        if len(mp[key]) == 1:
            for mc in find_module_cycles(S, g, mp[key][0], frame=frame):
                if mc.verdict == "module":
                    return key, mc
    return None


def decycle_module_cycle(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    fr = _frame_of(S, frame)
    hit = module_cycle_applicable(S, f, fr)
    if hit is None:
        return None
    key, mc = hit
    run = _start(S, f, fr)
    for kind, where, pair in mc.trace:
        if kind == "kempe":
            run.kempe(where, *pair)
        else:
            run.sigma(where, pair)
    i = missing_module_path(S, run.f, fr)
    if i is None:
        raise BranchUnmatched("chase replay keeps both module-paths", {"cycle": mc.cycle})
    run.kempe_at(fr[1], 2, i)
    run.notes.append(f"module-cycle {'-'.join(map(str, mc.cycle))} ({mc.colors[0]}{mc.colors[1]}) on the {key}-path")
    return run.result("module-cycle")


# -- axis machine -------------------------------------------------------------------


class AxisContext:
    """Named objects of the axis construction; each bind is checked."""

    def __init__(self, S: Triangulation):
        self.S = S
        self.items: dict[str, object] = {}
        self.log: list[str] = []

    def bind(self, name: str, value, check: Callable[[], bool] | None = None):
        if check is not None and not check():
            raise BranchUnmatched(f"{name} fails its defining property", self.dump())
        self.items[name] = value
        return value

    def note(self, text: str) -> None:
        self.log.append(text)

    def dump(self) -> dict:
        out = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.items.items()}
        out["log"] = list(self.log)
        return out


def _colours(f: Sequence[int], vs: Iterable[int]) -> set[int]:
    return {f[v] for v in vs}


def _is_cycle_in(S: Triangulation, f: Sequence[int], c: Sequence[int], pair: tuple[int, int]) -> bool:
    k = len(c)
    return k >= 3 and len(set(c)) == k and _colours(f, c) <= set(pair) and all(S.has_edge(c[t], c[(t + 1) % k]) for t in range(k))


def _crosses(S: Triangulation, c1: Sequence[int], c2: Sequence[int]) -> bool:
    s = cycle_split(S, c2)
    vs = set(c1)
    return bool(vs & s.interior) and bool(vs & s.exterior)


def _cycles_meet(S: Triangulation, c1: Sequence[int], c2: Sequence[int]) -> bool:
    return _crosses(S, c1, c2) or _crosses(S, c2, c1)


def axis_preconditions(S: Triangulation, f: Sequence[int], frame: Sequence[int], tree: bool = True) -> tuple[bool, str]:
    """Hypotheses of the tree-type construction; ``tree=False`` drops the
    tree-colouring requirement."""
    v1, v2, v3, v4 = frame
    if S.degree(v2) != 4:
        return False, "d(v2) != 4"
    if S.min_degree < 4:
        return False, "minimum degree below 4"
    g = frame_coloring(f, frame)
    outer = normalize_cycle(frame)
    if tree and any(c != outer for c, _ in bichromatic_cycles(S, g)):
        return False, "not a tree-colouring"
    mp = _unique_paths(S, g, frame)
    if len(mp["23"]) != 1 or len(mp["24"]) != 1:
        return False, "module-paths not unique"
    if is_parallel(mp["23"][0], mp["24"][0]):
        return False, "module-paths parallel"
    if S.degree(v1) not in (5, 6):
        return False, "d(v1) not in {5, 6}"
    return True, ""


class AxisMachine:
    """The vertical/sloped axis case analysis on one frame."""

    def __init__(self, S: Triangulation, f: Sequence[int], frame: Sequence[int], label: str = "axis"):
        self.S = S
        self.frame = tuple(frame)
        self.run = _start(S, f, frame)
        self.ctx = AxisContext(S)
        self.label = label
        self.converted = False

    def fail(self, msg: str):
        raise BranchUnmatched(msg, self.ctx.dump())

    # step (a)
    def start(self) -> DecycleResult:
        S, run, ctx = self.S, self.run, self.ctx
        v1, v2, v3, v4 = self.frame
        for k, v in zip(("v1", "v2", "v3", "v4"), self.frame):
            ctx.bind(k, v)
        x1, y1 = _v2_link(S, self.frame)  # type: ignore[misc]
        if run.f[x1] != 3:
            run.relabel({3: 4, 4: 3})
        ctx.bind("x1", x1, lambda: run.f[x1] == 3)
        ctx.bind("y1", y1, lambda: run.f[y1] == 4)
        self.f0 = run.f
        mp = _unique_paths(S, run.f, self.frame)
        l23 = ctx.bind("l23", mp["23"][0])
        l24 = ctx.bind("l24", mp["24"][0])
        common = [v for v in l23 if v in set(l24)]
        z2 = ctx.bind("z2", common[1], lambda: common[1] != v4 or len(common) == 2)
        run.kempe_at(v3, 1, 3)
        self.f1 = run.f
        vertical = _path(S, run.f, z2, v4, 2, 3) is not None
        p14 = _path(S, run.f, v1, y1, 1, 4)
        ctx.note(f"f1: vertical={vertical} sloped={p14 is not None}")
        if p14 is None:
            if not vertical:
                self.fail("f1 is neither a 23-vertical-axis nor a 14-sloped-axis colouring")
            ctx.bind("l1_23", tuple(_path(S, run.f, z2, v4, 2, 3)))  # type: ignore[arg-type]
            run.kempe_at(v1, 1, 4)
            run.recolor(v2, 1)
            run.notes.append("23-vertical-axis")
            return run.result("vertical-axis")
        ctx.bind("P14_v1y1", p14)
        return self.sloped(p14)

    # step (c)
    def sloped(self, p14: tuple[int, ...]) -> DecycleResult:
        S, run, ctx = self.S, self.run, self.ctx
        v1, v2, v3, v4 = self.frame
        nb = _link_path(S, v1, v2, v4)[1:-1]
        kind = "".join(str(self.f0[v]) for v in nb)
        typ = ctx.bind("type", f"5{S.degree(v1)}-{kind}", lambda: True)
        run.recolor(v1, 4)
        run.recolor(v2, 1)
        c14 = ctx.bind("C14", tuple(p14) + (v2,), lambda: _is_cycle_in(S, run.f, tuple(p14) + (v2,), (1, 4)))
        ctx.note(f"sloped type {typ}")
        if typ not in SLOPED_TYPES:
            if not pseudo_edges(S, run.f):
                run.notes.append(f"{typ}: f2 already proper")
                return run.result(f"sloped-axis:{typ}")
            self.fail(f"sloped-axis type {typ} is not in the case list")
        strategy = f"sloped-axis:{typ}"
        if typ in ("56-3234", "56-3243", "56-3423"):
            run.swap_side(c14, 2, 3)
            self.converted = True
            ctx.note("converted by the 23 K-change inside C14")
        elif typ in ("56-3424", "56-3434"):
            res = self._claim_3424(c14, nb, typ)
            if res is not None:
                return res
        return self.resolve(strategy)

    def _can_finish(self) -> bool:
        v1 = self.frame[0]
        return all(self.run.f[w] != 3 for w in self.S.rotation[v1])

    def _finish(self, strategy: str, why: str) -> DecycleResult:
        self.run.recolor(self.frame[0], 3)
        self.run.notes.append(why)
        return self.run.result(strategy)

    def _claim_3424(self, c14, nb, typ) -> DecycleResult | None:
        S, run, ctx = self.S, self.run, self.ctx
        v1 = self.frame[0]
        y1 = ctx.items["y1"]
        fours = [w for w in nb if run.f[w] == 4]
        # the sloped axis may end in either 4-neighbour of v1
        for xp in fours:
            p = _path(S, run.f, xp, y1, 1, 4, allowed={v for v in range(S.n) if v != v1})
            if p is None:
                continue
            cyc = (v1,) + tuple(p) + (self.frame[1],)
            if not _is_cycle_in(S, run.f, cyc, (1, 4)):
                continue
            snap = run.snapshot()
            run.swap_side(cyc, 2, 3)
            if self._can_finish():
                ctx.bind("C14", cyc)
                return self._finish(f"sloped-axis:{typ}", f"{typ}: 23 K-change inside the 14-cycle through {xp}")
            run.restore(snap)
        for xp in fours:
            if on_odd_cycle_through(S, run.f, v1, xp, 4, 1) is None and len([w for w in fours if w != xp]) == 1:
                run.eliminate(v1, xp, 1)
                ctx.note(f"{typ}: pseudo edge {v1}{xp} eliminated by a 14 K-change")
                return None
        return None

    # pseudo edge resolution, common to every 55-type
    def _pseudo(self):
        v1 = self.frame[0]
        return [e for e in pseudo_edges(self.S, self.run.f) if v1 in (e.u, e.v)]

    def _try_eliminate(self, strategy: str, why: str) -> DecycleResult | None:
        """Eliminate each remaining pseudo edge at ``v1`` whose partner colour
        (from its ts-type) gives no odd cycle; a 3-free neighbourhood of
        ``v1`` finishes at once."""
        run = self.run
        v1 = self.frame[0]
        snap = run.snapshot()
        for _ in range(4):
            if run.decycled:
                run.notes.append(why)
                return run.result(strategy)
            if self._can_finish():
                return self._finish(strategy, why + "; v1 recoloured 3")
            es = [e for e in pseudo_edges(self.S, run.f)]
            if not es or any(v1 not in (e.u, e.v) for e in es):
                break
            e = es[0]
            x = e.v if e.u == v1 else e.u
            j = 3 if e.ts_type == "22" else 2 if e.ts_type == "33" else None
            if j is None:
                break
            if on_odd_cycle_through(self.S, run.f, v1, x, 4, j) is not None:
                break
            run.eliminate(x, v1, j)
        run.restore(snap)
        return None

    def resolve(self, strategy: str) -> DecycleResult:
        S, run, ctx = self.S, self.run, self.ctx
        v1 = self.frame[0]
        es = self._pseudo()
        if not es:
            if run.decycled:
                return run.result(strategy)
            self.fail("no pseudo edge left but the colouring is not proper")
        ctx.bind("pseudo", [e.describe() for e in es])
        res = self._try_eliminate(strategy, "pseudo edge eliminated")
        if res is not None:
            return res
        e = es[0]
        x = e.v if e.u == v1 else e.u
        j = 3 if e.ts_type == "22" else 2 if e.ts_type == "33" else None
        if j is None:
            self.fail(f"pseudo edge of ts-type {e.ts_type} has no rule")
        ctx.bind("x_pseudo", x)
        odd = on_odd_cycle_through(S, run.f, v1, x, 4, j)
        if odd is None:
            self.fail("pseudo edge is off odd cycles but elimination stalled")
        name = f"C{j}4" if j < 4 else "C44"
        codd = ctx.bind(name, odd, lambda: _is_cycle_in(S, run.f, odd, (4, j)) and len(odd) % 2 == 1)
        c14 = ctx.items["C14"]
        if not _cycles_meet(S, codd, c14):
            # Case 1
            a, b = complement(4, j)
            run.swap_side(codd, a, b)
            # a converted type has had its 23 K-change inside C14 already
            if not self.converted:
                run.swap_side(c14, 2, 3)
            ctx.note("case 1: nonintersecting odd cycle and C14")
            if self._can_finish():
                return self._finish(strategy, "case 1")
            res = self._try_eliminate(strategy, "case 1 then elimination")
            if res is not None:
                return res
            self.fail("case 1 moves leave v1 with a 3-neighbour")
        ctx.note("case 2: odd cycle meets C14")
        res = self._good_cycle(strategy, codd, j)
        if res is not None:
            return res
        res = self._big_cycle(strategy, c14, j)
        if res is not None:
            return res
        if j == 3:
            res = self._horizontal_axis(strategy, c14)
            if res is not None:
                return res
        self.fail("case 2: no good-cycle, 24-big-cycle or bridge-vertex construction applies")

    def _good_cycle(self, strategy: str, codd, j) -> DecycleResult | None:
        """Step 1: a proper bichromatic cycle meeting the odd cycle whose
        interior (or exterior) complement swap frees the pseudo edge."""
        S, run, ctx = self.S, self.run, self.ctx
        cands = []
        for c, pair in bichromatic_cycles(S, run.f):
            if any(run.f[c[t]] == run.f[c[(t + 1) % len(c)]] for t in range(len(c))):
                continue
            if _cycles_meet(S, c, codd):
                cands.append((c, pair))
        for c, pair in cands:
            for side in ("interior", "exterior"):
                snap = run.snapshot()
                s, t = complement(*pair)
                run.swap_side(c, s, t, side)
                if run.f[self.frame[1]] != 1 or run.f[self.frame[3]] != 2:
                    run.restore(snap)
                    continue
                res = self._try_eliminate(strategy, f"good-cycle {'-'.join(map(str, c))} ({side})")
                if res is not None:
                    ctx.bind("good_cycle", c)
                    return res
                run.restore(snap)
        return None

    def _big_cycle(self, strategy: str, c14, j) -> DecycleResult | None:
        """Step 2: K-change inside C14, then look for a good 24- or 34-cycle
        meeting C14 or a 24-big-cycle through ``v1`` and ``x1``."""
        S, run, ctx = self.S, self.run, self.ctx
        v1 = self.frame[0]
        x1 = ctx.items["x1"]
        for side in ("interior", "exterior"):
            snap = run.snapshot()
            run.swap_side(c14, 2, 3, side)
            if run.f[self.frame[1]] != 1 or run.f[self.frame[3]] != 2:
                run.restore(snap)
                continue
            if self._can_finish():
                return self._finish(strategy, f"step 2: 23 K-change {side} C14")
            bases = [("f14", None)]
            for c, pair in bichromatic_cycles(S, run.f):
                if pair == (2, 3) and all(run.f[c[t]] != run.f[c[(t + 1) % len(c)]] for t in range(len(c))):
                    bases.append(("f14^23", (c, pair)))
            for label, extra in bases:
                snap2 = run.snapshot()
                if extra is not None:
                    run.sigma(*extra)
                for c, pair in bichromatic_cycles(S, run.f):
                    if pair not in ((2, 4), (3, 4)):
                        continue
                    big = pair == (2, 4) and v1 in c and x1 in c
                    if not (big or _cycles_meet(S, c, c14)):
                        continue
                    snap3 = run.snapshot()
                    s, t = complement(*pair)
                    run.swap_side(c, s, t)
                    if run.f[self.frame[1]] == 1 and run.f[self.frame[3]] == 2:
                        why = f"step 2 ({label}): {'24-big-cycle' if big else 'good-cycle'} {'-'.join(map(str, c))}"
                        if self._can_finish():
                            ctx.bind("C24_big" if big else "good_cycle", c)
                            return self._finish(strategy, why)
                        res = self._try_eliminate(strategy, why)
                        if res is not None:
                            return res
                    run.restore(snap3)
                run.restore(snap2)
            run.restore(snap)
        return None

    def _horizontal_axis(self, strategy: str, c14) -> DecycleResult | None:
        """Step 3, bridge-vertex case: under f14 a 13-path from ``x`` to ``v3``
        closes a 13-pocket with mouth ``x x1 v2``."""
        S, run, ctx = self.S, self.run, self.ctx
        v1, v2, v3, v4 = self.frame
        x1 = ctx.items["x1"]
        xp = ctx.items["x_pseudo"]
        snap = run.snapshot()
        run.swap_side(c14, 2, 3)
        nb = _link_path(S, v1, v2, v4)[1:-1]
        xs = [w for w in nb if w != x1 and S.has_edge(w, x1) and run.f[w] in (1, 3)]
        for x in xs:
            ell = _path(S, run.f, x, v3, 1, 3, allowed={v for v in range(S.n) if v not in (v1, v2)})
            if ell is None:
                continue
            pocket = tuple(ell) + (v2, x1)
            if len(set(pocket)) != len(pocket):
                continue
            inside = cycle_split(S, pocket).interior
            outside = cycle_split(S, pocket).exterior
            for z in ell:
                if run.f[z] != 1:
                    continue
                p12 = _path(S, run.f, x1, z, 1, 2, allowed=set(inside))
                p14 = _path(S, run.f, z, xp, 1, 4, allowed=set(outside) - {v1})
                if p12 is None or p14 is None:
                    continue
                snap2 = run.snapshot()
                run.kempe([v for v in set(inside) | {x1} if run.f[v] in (2, 4)], 2, 4)
                cyc = tuple(p12) + tuple(p14[1:]) + (v1, v2)
                if len(set(cyc)) == len(cyc) and _is_cycle_in(S, run.f, cyc, (1, 4)):
                    run.swap_side(cyc, 2, 3)
                    if self._can_finish():
                        ctx.bind("l13_xv3", tuple(ell))
                        ctx.bind("bridge_vertex", z)
                        return self._finish(strategy, f"step 3: bridge-vertex {z}")
                run.restore(snap2)
        run.restore(snap)
        return None


def decycle_axis(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    fr = _frame_of(S, frame)
    ok, _ = axis_preconditions(S, f, fr, tree=True)
    if not ok:
        return None
    return AxisMachine(S, f, fr).start()


# -- cycle and cyclic-cycle modules -----------------------------------------------------


def cyclic_preconditions(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> tuple[bool, str]:
    g = frame_coloring(f, frame)
    outer = normalize_cycle(frame)
    if all(c == outer for c, _ in bichromatic_cycles(S, g)):
        return False, "tree-colouring"
    mp = _unique_paths(S, g, frame)
    if len(mp["23"]) != 1 or len(mp["24"]) != 1:
        return False, "module-paths not unique"
    if is_parallel(mp["23"][0], mp["24"][0]):
        return False, "module-paths parallel"
    return True, ""


def _statement_one(S: Triangulation, g: Sequence[int], frame: Sequence[int], l24: Sequence[int]) -> bool | None:
    """First statement for cycle-type colourings: after the 13 K-change at
    ``v3`` a 12- or 23-cycle meets the 24-module-path.  ``None`` when the
    path avoids no bichromatic cycle (hypothesis not met)."""
    outer = normalize_cycle(frame)
    cyc = [c for c, _ in bichromatic_cycles(S, g) if c != outer]
    onp = set(l24)
    for c in cyc:
        if set(c) & onp or cycle_split(S, c).interior & onp:
            return None
    f1 = swap(g, component_of(S, g, frame[2], 1, 3), 1, 3)
    for c, pair in bichromatic_cycles(S, f1):
        if pair in ((1, 2), (2, 3)) and c != outer and (cycle_split(S, c).interior & onp or set(c) & (onp - {frame[1], frame[3]})):
            return True
    return False


def decycle_cyclic(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> DecycleResult | None:
    fr = _frame_of(S, frame)
    ok, _ = cyclic_preconditions(S, f, fr)
    if not ok:
        return None
    g = frame_coloring(f, fr)
    l24 = _unique_paths(S, g, fr)["24"][0]
    s1 = _statement_one(S, g, fr, l24)
    if s1 is False:
        raise BranchUnmatched("no 12- or 23-cycle meets the 24-module-path after the 13 K-change", {"l24": l24})
    ok, why = axis_preconditions(S, f, fr, tree=False)
    if not ok:
        raise BranchUnmatched(f"axis construction unavailable: {why}", {"frame": fr})
    m = AxisMachine(S, f, fr, label="cyclic")
    res = m.start()
    res.notes.append(f"statement one: {'checked' if s1 else 'path meets a cycle'}")
    res.notes.append(f"axis route {res.strategy}")
    res.strategy = "cyclic"
    return res


# -- pipeline ---------------------------------------------------------------------------

_DISPATCH = {
    "recursive": decycle_recursive,
    "deg4": decycle_deg4,
    "parallel": decycle_parallel,
    "module-cycle": decycle_module_cycle,
    "axis": decycle_axis,
    "cyclic": decycle_cyclic,
}


@dataclass
class PipelineLog:
    attempts: list[tuple[str, Coloring, tuple[int, ...], str]] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)


def verify_result(S: Triangulation, res: DecycleResult) -> None:
    if not is_proper(S, res.coloring):
        raise KempeLabError(f"{res.strategy} returned an improper colouring")
    if not res.is_decycled():
        raise KempeLabError(f"{res.strategy} returned a colouring with f(v2) = f(v4)")
    if not res.replays(S):
        raise KempeLabError(f"{res.strategy} trace does not replay")


def decycle(S: Triangulation, strategies: Sequence[str] = STRATEGIES, log: PipelineLog | None = None) -> DecycleResult:
    """Run the strategies in order over every module colouring and frame;
    fall back to the oracle.  Raises :class:`NoDecycleColoring` when the
    module has none."""
    rep = is_base_module(S, verify=False)
    if not rep.is_base_module:
        raise KempeLabError("not a 4-base-module")
    fr0 = rep.frame
    assert fr0 is not None
    oracle = decycle_oracle(S, fr0)
    mods = sorted(rep.module_colorings)
    for name in strategies:
        fn = _DISPATCH[name]
        for f in mods:
            for fr in symmetric_frames(fr0):
                try:
                    res = fn(S, frame_coloring(f, fr), fr)
                except BranchUnmatched as exc:
                    if log is not None:
                        log.findings.append({"strategy": name, "coloring": f, "frame": fr, "error": str(exc), "context": exc.context})
                    continue
                if res is None:
                    continue
                verify_result(S, res)
                if oracle is None:
                    raise NoDecycleColoring(f"{name} decycled a module the oracle calls non-decyclizable")
                if log is not None:
                    log.attempts.append((name, f, fr, "ok"))
                return res
    if oracle is None:
        raise NoDecycleColoring("the module has no decycle colouring")
    verify_result(S, oracle)
    return oracle


@dataclass
class Coverage:
    """Per-strategy outcome counts over every module colouring and frame."""

    ok: dict[str, int] = field(default_factory=dict)
    not_applicable: dict[str, int] = field(default_factory=dict)
    findings: list[dict] = field(default_factory=list)
    contradictions: list[str] = field(default_factory=list)

    def merge(self, other: "Coverage") -> None:
        for a, b in ((self.ok, other.ok), (self.not_applicable, other.not_applicable)):
            for k, v in b.items():
                a[k] = a.get(k, 0) + v
        self.findings += other.findings
        self.contradictions += other.contradictions


def strategy_coverage(S: Triangulation, strategies: Sequence[str] = STRATEGIES) -> Coverage:
    """Run each strategy wherever it applies; never falls back to the oracle."""
    cov = Coverage()
    rep = is_base_module(S, verify=False)
    if not rep.is_base_module:
        return cov
    fr0 = rep.frame
    assert fr0 is not None
    has_decycle = decycle_oracle(S, fr0) is not None
    for f in sorted(rep.module_colorings):
        for fr in symmetric_frames(fr0):
            g = frame_coloring(f, fr)
            for name in strategies:
                try:
                    res = _DISPATCH[name](S, g, fr)
                except BranchUnmatched as exc:
                    cov.findings.append({"strategy": name, "coloring": g, "frame": fr, "error": str(exc)})
                    continue
                if res is None:
                    cov.not_applicable[name] = cov.not_applicable.get(name, 0) + 1
                    continue
                try:
                    verify_result(S, res)
                except KempeLabError as exc:
                    cov.contradictions.append(f"{name} on {g}: {exc}")
                    continue
                if not has_decycle:
                    cov.contradictions.append(f"{name} decycled {g} but the oracle finds no decycle colouring")
                    continue
                cov.ok[res.strategy] = cov.ok.get(res.strategy, 0) + 1
    return cov
