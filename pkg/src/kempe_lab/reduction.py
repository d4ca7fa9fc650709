"""Colouring an MPG of minimum degree 5 from a colouring of ``G - v2``.

The pivot ``v2`` is a 5-vertex of a 55- or 56-configuration.  Colourings of
``G - v2`` carry ``0`` at the pivot.  The pipeline rotates the colouring of
the 5-cycle around the pivot until the pair sharing a colour sits at the
ends of a 2-path starting at the partner vertex, splits the middle vertex of
that 2-path (E4WO), decycles the quadrilateral module that remains after
deleting the new 4-wheel, and contracts the wheel again.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .coloring import Coloring, component_of, enumerate_colorings, is_proper, sigma_neighbors, swap
from .construct import WheelInstance, WheelSite, contract_wheel, extend_wheel, wernicke_find, _compact
from .decycle import DecycleResult, decycle
from .errors import EarlyWin, FixtureMissing, KempeLabError, ValidationError
from .planar import Triangulation, canonical_code
from .structure import endpoint_paths, is_base_module

log = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    stage: str
    graph: Triangulation
    coloring: Coloring
    note: str = ""


@dataclass
class ReductionPlan:
    host: Triangulation
    pivot: int
    partner: int
    kind: str  # "55" or "56"
    ring: tuple[int, ...]  # u v3 v4 v1 v5 after rotation
    rotation_index: int | None = None
    expanded: Triangulation | None = None
    centre: int | None = None  # x
    copy: int | None = None  # v4'
    frame: tuple[int, int, int, int] | None = None  # v1 v2 v3 v4
    route: str = ""
    checkpoints: list[Checkpoint] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)

    def check(self) -> None:
        if self.expanded is not None and self.expanded.n != self.host.n + 2:
            raise KempeLabError("expanded host must have two more vertices")


def ring_of(G: Triangulation, v: int) -> tuple[int, ...]:
    if G.degree(v) != 5:
        raise ValidationError(f"vertex {v} has degree {G.degree(v)}, not 5")
    return tuple(G.rotation[v])


def _repeated(f: Sequence[int], ring: Sequence[int]) -> int | None:
    """Ring position of the centre of the bichromatic 2-path, or ``None``
    when the ring shows three colours."""
    cols = [f[w] for w in ring]
    if len(set(cols)) != 4:
        return None
    for k in range(5):
        if cols[(k - 1) % 5] == cols[(k + 1) % 5]:
            return k
    raise KempeLabError("four colours on a 5-cycle without a repeated pair")


def _extend(G: Triangulation, f: Sequence[int], v: int) -> Coloring:
    used = {f[w] for w in G.rotation[v]}
    free = sorted({1, 2, 3, 4} - used)
    if not free:
        raise KempeLabError(f"no free colour at {v}")
    g = list(f)
    g[v] = free[0]
    return tuple(g)


def five_rotation(G: Triangulation, pivot: int, f: Sequence[int]) -> list[tuple[Coloring, int]]:
    """The five colourings of ``G - pivot`` joined by the K-changes that move
    the bichromatic 2-path around the ring.  Each entry is ``(colouring,
    ring position of the 2-path centre)``.  Raises :class:`EarlyWin` when a
    required path is missing, since that K-change leaves three colours."""
    ring = ring_of(G, pivot)
    f = tuple(f)
    if f[pivot] != 0:
        f = f[:pivot] + (0,) + f[pivot + 1 :]
    k = _repeated(f, ring)
    if k is None:
        raise ValidationError("the ring already shows three colours")
    out = [(f, k)]
    for step in range(4):
        at = lambda d: ring[(k + d) % 5]
        a, b, c, d = f[at(0)], f[at(2)], f[at(1)], f[at(-2)]
        # paths centre -> k+2 and centre -> k-2 must both exist
        for other, col in ((at(-2), d), (at(2), b)):
            comp = component_of(G, f, at(0), a, col)
            if other not in comp:
                g = swap(f, comp, a, col)
                raise EarlyWin(f"no {a}{col}-path from {at(0)} to {other}", g, step)
        comp = component_of(G, f, at(-1), c, b)
        if at(1) in comp or at(2) in comp:
            raise KempeLabError(f"{c}{b}-component of {at(-1)} reaches the other side")
        f = swap(f, comp, c, b)
        k = (k + 3) % 5
        if _repeated(f, ring) != k:
            raise KempeLabError("rotation step did not move the 2-path")
        out.append((f, k))
    if len({c for _, c in out}) != 5:
        raise KempeLabError("rotation repeated a 2-path")
    return out


def _choose(rotations: list[tuple[Coloring, int]], ring: Sequence[int], partner: int) -> int:
    """Least index whose 2-path has the partner as an end vertex."""
    p = list(ring).index(partner)
    for r, (_, k) in enumerate(rotations):
        if p in ((k - 1) % 5, (k + 1) % 5):
            return r
    raise KempeLabError("no rotation puts the partner at a 2-path end")


def non_module_route(S: Triangulation, f: Coloring, v2: int, v4: int) -> tuple[Coloring, list[str]]:
    """A colouring with ``v2, v4`` coloured differently, reached from ``f`` by
    sigma moves to a colouring lacking a 2i-endpoint-path and one K-change."""
    fr = _frame(S, v2, v4)
    prev: dict[Coloring, tuple[Coloring, tuple] | None] = {f: None}
    todo = deque([f])
    while todo:
        g = todo.popleft()
        ps = endpoint_paths(S, g, fr)
        if ps.kind != "shared-v2v4":
            c2 = g[v2]
            for i in sorted({1, 2, 3, 4} - {c2, g[fr[0]]}):
                comp = component_of(S, g, v2, c2, i)
                if v4 not in comp:
                    moves = []
                    h = g
                    while prev[h] is not None:
                        h0, (cyc, pair) = prev[h]  # type: ignore[misc]
                        moves.append("move sigma " + " ".join(map(str, (*pair, *cyc))))
                        h = h0
                    moves.reverse()
                    out = swap(g, comp, c2, i)
                    moves.append("move kempe " + " ".join(map(str, (c2, i, *sorted(comp)))))
                    return out, moves
        for h, cyc, pair in sigma_neighbors(S, g):
            if h not in prev:
                prev[h] = (g, (cyc, pair))
                todo.append(h)
    raise KempeLabError("every colouring in the class keeps both module-paths")


def _frame(S: Triangulation, v2: int, v4: int) -> tuple[int, int, int, int]:
    o = list(S.outer or ())
    k = o.index(v2)
    fr = tuple(o[k:] + o[:k])
    if fr[2] != v4:
        raise KempeLabError(f"{v2} and {v4} are not opposite on the outer cycle")
    return (fr[3], fr[0], fr[1], fr[2])


def reduce_color(G: Triangulation, sub: Sequence[int], pivot: int | None = None, checkpoints: bool = False) -> tuple[Coloring, ReductionPlan]:
    """Extend a colouring of ``G - pivot`` to a colouring of ``G``."""
    v2, w, kind = wernicke_find(G)
    if pivot is not None and pivot != v2:
        partners = [(5, "55"), (6, "56")]
        hit = [(p, k) for d, k in partners for p in sorted(G.rotation[pivot]) if G.degree(p) == d]
        if G.degree(pivot) != 5 or not hit:
            raise ValidationError(f"{pivot} is not a 5-vertex of a 55- or 56-configuration")
        v2, (w, kind) = pivot, hit[0]
    f = tuple(sub)
    f = f[:v2] + (0,) + f[v2 + 1 :]
    ring = ring_of(G, v2)
    plan = ReductionPlan(G, v2, w, kind, ring)
    rest = [v for v in range(G.n) if v != v2]
    if any(f[v] not in (1, 2, 3, 4) for v in rest) or not is_proper(_without(G, v2), _drop(f, v2)):
        raise ValidationError("subcolouring is not a proper colouring of G - v2")

    def snap(stage, graph, col, note=""):
        if checkpoints:
            plan.checkpoints.append(Checkpoint(stage, graph, tuple(col), note))

    snap("a", G, f, "subcolouring")
    if len({f[u] for u in ring}) < 4:
        plan.route = "direct"
        out = _extend(G, f, v2)
        snap("h", G, out, "direct extension")
        return _verified(G, out), plan
    k0 = _repeated(f, ring)
    aligned = list(ring).index(w) in (((k0 or 0) - 1) % 5, ((k0 or 0) + 1) % 5)
    try:
        rots = [(f, k0)] if aligned else five_rotation(G, v2, f)
    except EarlyWin as win:
        plan.route = "early-win"
        plan.trace.append(f"early win at rotation step {win.index}")
        out = _extend(G, win.coloring, v2)
        snap("h", G, out, "K-change leaves three ring colours")
        return _verified(G, out), plan
    r = _choose(rots, ring, w)
    plan.rotation_index = r
    f, k = rots[r]
    centre = ring[k]
    p = list(ring).index(w)
    a = w
    b = ring[(2 * k - p) % 5]
    # ring read as u v3 v4 v1 v5 with v3 the partner
    step = 1 if (k - p) % 5 == 1 else -1
    plan.ring = tuple(ring[(p - step * t) % 5] for t in (1, 0, -1, -2, -3))
    v3, v4, v1 = a, centre, b
    v5 = plan.ring[4]
    u = plan.ring[0]
    snap("a", G, f, f"rotation {r}: 2-path {v3}-{v4}-{v1}")
    # E4WO on v3 v4 v1 with the copy taking the pivot's side
    for side in ("right", "left"):
        Gs, wheel, _ = extend_wheel(G, WheelSite("path2", (v3, v4, v1), side))
        x, copy = G.n, G.n + 1
        if Gs.has_edge(copy, v2):
            break
    else:
        raise KempeLabError("E4WO did not separate the pivot")
    plan.expanded, plan.centre, plan.copy = Gs, x, copy
    plan.check()
    alpha, beta, gamma, delta = f[v1], f[v4], f[v5], f[u]
    nat = list(f) + [0, beta]
    nat[x] = min({1, 2, 3, 4} - {alpha, beta})
    snap("b", Gs, nat, "natural colouring")
    g2 = list(nat)
    g2[copy], g2[v2], g2[x] = gamma, beta, delta
    g2 = tuple(g2)
    if not is_proper(Gs, g2):
        raise KempeLabError("second colouring of the expanded host is not proper")
    snap("c", Gs, g2, "pivot coloured")
    S = _compact([list(r_) for r_ in Gs.rotation], [x, copy], (v1, v2, v3, v4))
    plan.frame = (v1, v2, v3, v4)
    fS = tuple(g2[: G.n])
    rep = is_base_module(S, verify=False)
    module_diag = rep.frame is not None and {rep.frame[1], rep.frame[3]} == {v2, v4}
    if module_diag:
        plan.route = "decycle"
        res: DecycleResult = decycle(S)
        fstar = res.coloring
        plan.trace += [m.to_line() for m in res.trace]
        plan.trace.append(f"decycle strategy {res.strategy}")
        snap("f", S, fstar, f"base-module, decycled by {res.strategy}")
    else:
        plan.route = "not-a-module"
        fstar, moves = non_module_route(S, fS, v2, v4)
        plan.trace += moves
        snap("d", S, fstar, "is not a 4-base-module")
    if fstar[v2] == fstar[v4] or not is_proper(S, fstar):
        raise KempeLabError("module colouring does not separate v2 and v4")
    g3 = list(fstar) + [0, fstar[v4]]
    g3[x] = min({1, 2, 3, 4} - {fstar[v1], fstar[v3], fstar[v4]})
    g3 = tuple(g3)
    if not is_proper(Gs, g3):
        raise KempeLabError("extended colouring of the expanded host is not proper")
    snap("g", Gs, g3, "wheel refilled")
    H, out = contract_wheel(Gs, WheelInstance(x, tuple(Gs.rotation[x]), (v4, copy)), g3)
    if _edges(H) != _edges(G) or canonical_code(H) != canonical_code(G):
        raise KempeLabError("C4WO did not restore the host")
    out = tuple(out)
    snap("h", G, out, "C4WO")
    return _verified(G, out), plan


def _edges(T: Triangulation) -> set[frozenset[int]]:
    return {frozenset(e) for e in T.edges}


def _without(G: Triangulation, v: int) -> Triangulation:
    rot = [[w for w in r if w != v] for r in G.rotation]
    return _compact(rot, [v])


def _drop(f: Sequence[int], v: int) -> list[int]:
    return [c for k, c in enumerate(f) if k != v]


def _verified(G: Triangulation, f: Sequence[int]) -> Coloring:
    f = tuple(f)
    if not is_proper(G, f) or any(c not in (1, 2, 3, 4) for c in f):
        raise KempeLabError("reduction produced an improper colouring")
    return f


def subcolorings(G: Triangulation, pivot: int) -> list[Coloring]:
    """Canonical colourings of ``G - pivot``, padded with ``0`` at the pivot."""
    H = _without(G, pivot)
    out = []
    for g in enumerate_colorings(H):
        out.append(tuple(g[:pivot]) + (0,) + tuple(g[pivot:]))
    return out


HEAWOOD_CHECKPOINTS = ("a", "b", "c", "d", "e", "f", "g", "h")


def heawood_failures(plan: ReductionPlan) -> list[str]:
    """Narrative checkpoints of the Heawood walkthrough that ``plan`` misses."""
    bad = []
    stages = {cp.stage for cp in plan.checkpoints}
    for st, what in (("b", "E4WO with the natural colouring"), ("c", "pivot coloured"), ("d", "K-change in the module"), ("h", "C4WO")):
        if st not in stages:
            bad.append(f"stage {st} ({what}) not reached")
    if plan.route != "not-a-module":
        bad.append(f"route {plan.route!r}; the quadrilateral SMPG should not be a 4-base-module")
    if not any(m.startswith("move kempe") for m in plan.trace):
        bad.append("no K-change inside the module")
    return bad


def heawood_demo(path: str | None = None) -> ReductionPlan:
    """Replay the reduction on the Heawood counterexample fixture."""
    from .coloring import parse_col4
    from .fixtures import require
    from .planar import parse_mpg

    if path is None:
        graphs, cols = require("heawood")
        G, sub = graphs[0], cols[0]
    else:
        col = path.rsplit(".", 1)[0] + ".col4"
        try:
            with open(path) as fh:
                G = parse_mpg(fh.read())
            with open(col) as fh:
                sub = parse_col4(fh.read(), allow_unset=True)
        except FileNotFoundError as exc:
            raise FixtureMissing(f"Heawood fixture not found: {exc.filename}") from None
    _, plan = reduce_color(G, sub, checkpoints=True)
    bad = heawood_failures(plan)
    if bad:
        raise KempeLabError("Heawood walkthrough diverges: " + "; ".join(bad))
    return plan
