"""UB-cycles, UBCMPG types, endpoint paths and 4-base-modules.

Conventions.  For an SMPG ``S`` with outer 4-cycle the *frame* is a tuple
``(v1, v2, v3, v4)`` read along the outer walk.  Colourings in ``F2`` colour
the frame ``1, 2, 1, 2`` once normalised with :func:`frame_coloring`; the
remaining two colours are numbered by first appearance.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coloring import (
    Coloring,
    bichromatic_cycles,
    canonical,
    component_of,
    complement,
    enumerate_colorings,
    ij_subgraph,
    kempe_class_sigma,
    reconfig_graph,
    swap,
)
from .construct import _fill_face, _walk, fill_face_partial
from .errors import CycleCapExceeded, NotF2, NotSMPG, OuterNotQuad
from .planar import Cycle, Triangulation, crossing, cycle_split, induced_smpg, normalize_cycle

PATH_CAP = 100_000


# -- UB-cycles ---------------------------------------------------------------------


@dataclass(frozen=True)
class UbReport:
    cycle: Cycle
    verdict: bool
    witness: object
    definitional: bool
    characterization: bool

    @property
    def agree(self) -> bool:
        return self.definitional == self.characterization


def _colors_on(f: Sequence[int], c: Iterable[int]) -> frozenset[int]:
    return frozenset(f[v] for v in c)


def ub_by_definition(T: Triangulation, f: Sequence[int], c: Sequence[int]) -> tuple[bool, object]:
    """|g(C)| = 2 for every g in F^f; the witness is the first failing g."""
    for g in sorted(kempe_class_sigma(T, f)):
        if len(_colors_on(g, c)) != 2:
            return False, g
    return True, len(kempe_class_sigma(T, f))


def ub_by_crossing(T: Triangulation, f: Sequence[int], c: Sequence[int]) -> tuple[bool, object]:
    """No bichromatic cycle of the class crosses ``c`` with a different pair.

    Checked as: for every ``g`` in ``F^f`` and ``C'`` in ``C2(g)`` on which
    ``C`` is not bichromatic in the same colours, ``C`` must not have vertices
    on both sides of ``C'``.
    """
    key = normalize_cycle(c)
    for g in sorted(kempe_class_sigma(T, f)):
        cols = _colors_on(g, key)
        for c2, pair in bichromatic_cycles(T, g):
            if c2 == key:
                continue
            if len(cols) == 2 and cols == frozenset(pair):
                continue
            if crossing(T, key, c2):
                return False, (g, c2)
    return True, None


def is_ub_cycle(T: Triangulation, f: Sequence[int], c: Sequence[int]) -> UbReport:
    """Both UB tests; they must agree (an AssertionError signals a bug)."""
    key = normalize_cycle(c)
    f = canonical(f)
    d, w1 = ub_by_definition(T, f, key)
    x, w2 = ub_by_crossing(T, f, key)
    assert d == x, f"UB tests disagree on {key}: scan={d} crossing={x}"
    return UbReport(key, d, w1 if not d else w2, d, x)


def ub_cycles(T: Triangulation, f: Sequence[int]) -> list[tuple[Cycle, tuple[int, int]]]:
    """All UB-cycles of ``f`` (by definition)."""
    f = canonical(f)
    memo = T.memo.setdefault("ub", {})
    hit = memo.get(f)
    if hit is not None:
        return hit
    cls = sorted(kempe_class_sigma(T, f))
    out = []
    for c, pair in bichromatic_cycles(T, f):
        if all(len(_colors_on(g, c)) == 2 for g in cls):
            out.append((c, pair))
    memo[f] = out
    return out


@dataclass
class UbcmpgReport:
    kind: str  # not-UBCMPG | pure | tree | cycle | hybrid
    ubc: list[Coloring]
    tree: list[Coloring]
    cyclic: list[Coloring]
    ub_cycles: dict[Coloring, list[Cycle]] = field(repr=False)

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.ubc), len(self.tree), len(self.cyclic)


def classify_ubcmpg(T: Triangulation, check_degrees: bool = True) -> UbcmpgReport:
    """Split C0_4 into UBC, tree and cyclic cycle-colourings, then type ``T``."""
    ubc, tree, cyc = [], [], []
    cycles: dict[Coloring, list[Cycle]] = {}
    for f in enumerate_colorings(T):
        if not bichromatic_cycles(T, f):
            tree.append(f)
            continue
        ub = [c for c, _ in ub_cycles(T, f)]
        if ub:
            ubc.append(f)
            cycles[f] = ub
            if check_degrees and T.outer is None:
                for c in ub:
                    low = [v for v in c if T.degree(v) < 5]
                    assert not low, f"UB-cycle {c} has vertices of degree < 5: {low}"
        else:
            cyc.append(f)
    if not ubc:
        kind = "not-UBCMPG"
    elif tree and cyc:
        kind = "hybrid"
    elif tree:
        kind = "tree"
    elif cyc:
        kind = "cycle"
    else:
        kind = "pure"
    return UbcmpgReport(kind, ubc, tree, cyc, cycles)


# -- frames and endpoint paths ---------------------------------------------------------


def _quad_frame(S: Triangulation) -> tuple[int, int, int, int]:
    if S.outer is None:
        raise NotSMPG("the graph has no outer cycle")
    if len(S.outer) != 4:
        raise OuterNotQuad(f"outer cycle has length {len(S.outer)}")
    a, b, c, d = S.outer
    return a, b, c, d


def in_f2(f: Sequence[int], frame: Sequence[int]) -> bool:
    v1, v2, v3, v4 = frame
    return f[v1] == f[v3] and f[v2] == f[v4] and f[v1] != f[v2]


def frame_coloring(f: Sequence[int], frame: Sequence[int]) -> Coloring:
    """Rename colours so that ``v1 -> 1`` and ``v2 -> 2``; the others follow
    in order of first appearance."""
    v1, v2 = frame[0], frame[1]
    ren = {f[v1]: 1}
    if f[v2] not in ren:
        ren[f[v2]] = 2
    nxt = iter(c for c in (2, 3, 4) if c not in ren.values())
    for c in f:
        if c not in ren:
            ren[c] = next(nxt)
    return tuple(ren[c] for c in f)


def _bfs_path(adj: dict[int, list[int]], s: int, t: int) -> tuple[int, ...] | None:
    if s not in adj or t not in adj:
        return None
    prev = {s: s}
    todo = deque([s])
    while todo:
        v = todo.popleft()
        if v == t:
            out = [t]
            while out[-1] != s:
                out.append(prev[out[-1]])
            return tuple(reversed(out))
        for w in sorted(adj[v]):
            if w not in prev:
                prev[w] = v
                todo.append(w)
    return None


def simple_paths(adj: dict[int, list[int]], s: int, t: int, cap: int = PATH_CAP) -> list[tuple[int, ...]]:
    """Every simple ``s``-``t`` path, in lexicographic order."""
    if s not in adj or t not in adj:
        return []
    out: list[tuple[int, ...]] = []
    path = [s]
    on = {s}

    def rec(v: int) -> None:
        for w in sorted(adj[v]):
            if w in on:
                continue
            if w == t:
                out.append(tuple(path) + (t,))
                if len(out) > cap:
                    raise CycleCapExceeded(f"more than {cap} paths")
                continue
            path.append(w)
            on.add(w)
            rec(w)
            on.discard(w)
            path.pop()

    if s == t:
        return [(s,)]
    rec(s)
    return out


@dataclass
class ModulePathSet:
    frame: tuple[int, int, int, int]
    coloring: Coloring  # frame-normalised
    witness: dict[str, tuple[int, ...] | None]
    host: Triangulation = field(repr=False)

    def nonempty(self) -> dict[str, bool]:
        return {k: w is not None for k, w in self.witness.items()}

    @property
    def kind(self) -> str:
        """``cross``, ``shared-v2v4`` or ``shared-v1v3``."""
        ne = self.nonempty()
        if (ne["13"] and ne["23"]) or (ne["14"] and ne["24"]):
            return "cross"
        if not ne["13"] and not ne["14"]:
            return "shared-v2v4"
        if ne["13"] and ne["14"]:
            return "shared-v1v3"
        return "cross"

    def paths(self, key: str) -> list[tuple[int, ...]]:
        """Full enumeration of one endpoint-path set."""
        a, i = int(key[0]), int(key[1])
        v1, v2, v3, v4 = self.frame
        s, t = (v1, v3) if a == 1 else (v2, v4)
        return simple_paths(ij_subgraph(self.host, self.coloring, a, i), s, t)


def endpoint_paths(S: Triangulation, f: Sequence[int], frame: Sequence[int] | None = None) -> ModulePathSet:
    fr = tuple(frame) if frame is not None else _quad_frame(S)
    if not in_f2(f, fr):
        raise NotF2(f"outer cycle {fr} is not bichromatic under f")
    g = frame_coloring(f, fr)
    v1, v2, v3, v4 = fr
    wit = {}
    for a, (s, t) in ((1, (v1, v3)), (2, (v2, v4))):
        for i in (3, 4):
            wit[f"{a}{i}"] = _bfs_path(ij_subgraph(S, g, a, i), s, t)
    return ModulePathSet(fr, g, wit, S)  # type: ignore[arg-type]


def two_endpoint_sets_nonempty(ps: ModulePathSet) -> bool:
    ne = ps.nonempty()
    dual = (not ne["13"]) == ne["24"] and (not ne["14"]) == ne["23"]
    return sum(ne.values()) == 2 and dual


# -- harvesting quadrilateral SMPGs ---------------------------------------------------------


def four_cycles(T: Triangulation) -> list[Cycle]:
    """All 4-cycles, normalised."""
    out = set()
    adj = T.adj
    for a in range(T.n):
        for b in adj[a]:
            for d in adj[a]:
                if b >= d:
                    continue
                for c in adj[b] & adj[d]:
                    if c != a:
                        out.add(normalize_cycle((a, b, c, d)))
    return sorted(out)


def quad_smpgs_from_cycles(T: Triangulation) -> list[Triangulation]:
    """Both sides of every 4-cycle of ``T``."""
    out = []
    for c in four_cycles(T):
        for side in ("interior", "exterior"):
            out.append(induced_smpg(T, c, side))
    return out


def quad_smpg_by_deletion(T: Triangulation, v: int) -> Triangulation:
    """Delete a degree-4 vertex; its link becomes the outer 4-cycle."""
    if T.degree(v) != 4:
        raise ValueError(f"vertex {v} has degree {T.degree(v)}")
    link = tuple(T.rotation[v])
    return induced_smpg(T, link, "exterior" if v in cycle_split(T, link).interior else "interior")


def harvest_quad_smpgs(mpgs: Iterable[Triangulation], method: str = "deletion") -> dict[bytes, Triangulation]:
    """Isomorph-free quad-outer SMPGs found in ``mpgs``.

    ``method="cycles"`` takes both sides of every 4-cycle; ``"deletion"``
    removes degree-4 vertices (much cheaper).  Over all MPGs of order at most
    ``N`` both give the same SMPGs of order below ``N``; only ``"cycles"``
    also yields order ``N``, from 4-cycles around a single edge (``G - e``).
    """
    from .planar import canonical_code

    out: dict[bytes, Triangulation] = {}
    for T in mpgs:
        if method == "cycles":
            items = quad_smpgs_from_cycles(T)
        else:
            items = [quad_smpg_by_deletion(T, v) for v in range(T.n) if T.degree(v) == 4]
        for S in items:
            code = canonical_code(S)
            if code not in out:
                out[code] = S
    return out


# -- base modules -----------------------------------------------------------------------


def glue_b4(S: Triangulation, a: int) -> tuple[Triangulation, int, int]:
    """Close ``S`` with a copy of B4 whose degree-4 outer pair is
    ``outer[a], outer[a + 2]``.  Returns ``(G, A, B)``; new ids are ``n, n+1``."""
    W = _quad_frame(S)
    rot = [list(r) for r in S.rotation]
    A = fill_face_partial(rot, W, a, a + 2)
    rest = _walk(rot, W[(a + 2) % 4], W[(a + 3) % 4])
    B = _fill_face(rot, rest)
    return Triangulation(rot), A, B


def glued_coloring(f: Sequence[int], frame: Sequence[int]) -> Coloring:
    used = {f[v] for v in frame}
    s, t = sorted({1, 2, 3, 4} - used)
    return tuple(f) + (s, t)


@dataclass
class ClassVerdict:
    members: frozenset[Coloring]
    kinds: frozenset[str]
    qualifies: bool
    diagonal: str | None
    glue_ub: bool
    glue_orientation: int | None


@dataclass
class BaseModuleReport:
    is_base_module: bool
    module_colorings: frozenset[Coloring]
    diagonal: str | None  # "v2v4" or "v1v3", in the input frame
    frame: tuple[int, int, int, int] | None  # frame with the module diagonal as (v2, v4)
    classes: list[ClassVerdict] = field(repr=False, default_factory=list)
    type_vector: dict[str, object] = field(default_factory=dict)
    shells: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        data = {
            "is_base_module": self.is_base_module,
            "diagonal": self.diagonal,
            "frame": list(self.frame) if self.frame else None,
            "module_colorings": ["".join(map(str, f)) for f in sorted(self.module_colorings)],
            "classes": [
                {
                    "size": len(c.members),
                    "kinds": sorted(c.kinds),
                    "qualifies": c.qualifies,
                    "glue_ub": c.glue_ub,
                }
                for c in self.classes
            ],
            "type_vector": self.type_vector,
            "shells": self.shells,
            "notes": self.notes,
        }
        return json.dumps(data, indent=2, default=list) + "\n"


def f2_colorings(S: Triangulation, frame: Sequence[int] | None = None) -> list[Coloring]:
    fr = frame or _quad_frame(S)
    return [f for f in enumerate_colorings(S) if in_f2(f, fr)]


def _glue_check(S: Triangulation, f: Coloring) -> tuple[bool, int | None]:
    fr = _quad_frame(S)
    for a in (0, 1):
        key = ("glue", a)
        hit = S.memo.get(key)
        if hit is None:
            hit = S.memo[key] = glue_b4(S, a)
        G, _, _ = hit
        g = glued_coloring(f, fr)
        ok, _ = ub_by_definition(G, g, fr)
        if ok:
            return True, a
    return False, None


def is_base_module(S: Triangulation, verify: bool = True) -> BaseModuleReport:
    """Recognise a 4-base-module from the shared-endpoint criterion.

    Every sigma-class inside ``F2`` is tested; a class qualifies when all its
    members are shared-endpoint colourings on one common diagonal.  With
    ``verify`` each class is also glued to B4 and the outer cycle tested for
    being a UB-cycle of the union; the two verdicts must agree class by class.
    """
    fr = _quad_frame(S)
    if S.memo.get(("bm", verify)) is not None:
        return S.memo[("bm", verify)]
    f2 = f2_colorings(S, fr)
    done: set[Coloring] = set()
    verdicts: list[ClassVerdict] = []
    for f in f2:
        if f in done:
            continue
        cls = kempe_class_sigma(S, f)
        done |= cls
        kinds = frozenset(endpoint_paths(S, g, fr).kind for g in cls)
        qual = len(kinds) == 1 and next(iter(kinds)) != "cross"
        diag = next(iter(kinds))[len("shared-"):] if qual else None
        glue, orient = (False, None)
        if verify:
            glue, orient = _glue_check(S, min(cls))
            assert glue == qual, f"shared-endpoint criterion and B4 gluing disagree on {min(cls)}"
        verdicts.append(ClassVerdict(cls, kinds, qual, diag, glue, orient))
    good = [v for v in verdicts if v.qualifies]
    mods: frozenset[Coloring] = frozenset().union(*(v.members for v in good)) if good else frozenset()
    diag = None
    frame = None
    notes = []
    if good:
        diags = sorted({v.diagonal for v in good})
        diag = diags[0]
        if len(diags) > 1:
            notes.append("module classes exist on both diagonals; using v2v4")
            diag = "v2v4"
            mods = frozenset().union(*(v.members for v in good if v.diagonal == "v2v4"))
        frame = fr if diag == "v2v4" else (fr[1], fr[2], fr[3], fr[0])
    rep = BaseModuleReport(bool(good), mods, diag, frame, verdicts, notes=notes)
    S.memo[("bm", verify)] = rep
    return rep


# -- module typing --------------------------------------------------------------------


def faces_inside(S: Triangulation, c: Sequence[int]) -> set[Cycle]:
    """Triangles of ``S`` on the bounded side of the cycle ``c``."""
    split = cycle_split(S, c)
    key = split.cycle
    k = len(key)
    on_cycle = {frozenset((key[i], key[(i + 1) % k])) for i in range(k)}
    seeds = []
    for i in range(k):
        a, b = key[i], key[(i + 1) % k]
        seeds.append((a, b) if split.interior_left else (b, a))
    seen: set[Cycle] = set()
    todo = [normalize_face(S.face_left_of(*d)) for d in seeds]
    while todo:
        fc = todo.pop()
        if fc in seen:
            continue
        seen.add(fc)
        for t in range(3):
            u, v = fc[t], fc[(t + 1) % 3]
            if frozenset((u, v)) in on_cycle:
                continue
            todo.append(normalize_face(S.face_left_of(v, u)))
    return seen


def normalize_face(face: Sequence[int]) -> Cycle:
    k = face.index(min(face))
    return tuple(face[k:]) + tuple(face[:k])


def _boundary(faces: set[Cycle]) -> tuple[list[tuple[int, int]], set[int]]:
    count: dict[frozenset[int], int] = {}
    darts = {}
    for fc in faces:
        for t in range(len(fc)):
            e = frozenset((fc[t], fc[(t + 1) % len(fc)]))
            count[e] = count.get(e, 0) + 1
            darts[e] = (fc[t], fc[(t + 1) % len(fc)])
    bd = [darts[e] for e, k in count.items() if k == 1]
    verts = {v for fc in faces for v in fc}
    return sorted(bd), verts


def _trace_boundary(edges: list[tuple[int, int]]) -> Cycle | None:
    nxt = {}
    for a, b in edges:
        if a in nxt:
            return None
        nxt[a] = b
    if not edges:
        return None
    start = min(nxt)
    out = [start]
    v = nxt[start]
    while v != start:
        if v in out or v not in nxt:
            return None
        out.append(v)
        v = nxt[v]
    if len(out) != len(edges):
        return None
    return normalize_cycle(out)


def shells(S: Triangulation, cycles: Iterable[Sequence[int]]) -> list[dict]:
    """Group the regions bounded by ``cycles`` into families; each family's
    boundary is its shell."""
    regions = [faces_inside(S, c) for c in cycles]
    groups: list[tuple[set[Cycle], list[Cycle]]] = []
    for c, reg in zip(cycles, regions):
        merged = [g for g in groups if g[0] & reg or _share_edge(g[0], reg)]
        faces = set(reg)
        members = [normalize_cycle(c)]
        for g in merged:
            faces |= g[0]
            members += g[1]
            groups.remove(g)
        groups.append((faces, members))
    out = []
    for faces, members in groups:
        bd, verts = _boundary(faces)
        shell = _trace_boundary(bd)
        bverts = {v for e in bd for v in e}
        out.append(
            {
                "shell": list(shell) if shell else None,
                "boundary_edges": [list(e) for e in bd],
                "family": [list(m) for m in sorted(set(members))],
                "interior": sorted(verts - bverts),
            }
        )
    out.sort(key=lambda d: d["family"])
    return out


def _edges_of(faces: set[Cycle]) -> set[frozenset[int]]:
    return {frozenset((f[t], f[(t + 1) % 3])) for f in faces for t in range(3)}


def _share_edge(a: set[Cycle], b: set[Cycle]) -> bool:
    return bool(_edges_of(a) & _edges_of(b))


def module_paths(S: Triangulation, f: Sequence[int], frame: Sequence[int]) -> dict[str, list[tuple[int, ...]]]:
    """All 23- and 24-module-paths ``v2 -> v4`` in the frame colours."""
    ps = endpoint_paths(S, f, frame)
    return {"23": ps.paths("23"), "24": ps.paths("24")}


def parallel_blocks(l23: Sequence[int], l24: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles ``C_i`` formed by the sub-paths between consecutive common vertices."""
    common = [v for v in l23 if v in set(l24)]
    blocks = []
    for a, b in zip(common, common[1:]):
        i, j = l23.index(a), l23.index(b)
        p, q = l24.index(a), l24.index(b)
        seg1 = list(l23[i : j + 1])
        seg2 = list(l24[p : q + 1]) if p <= q else list(reversed(l24[q : p + 1]))
        if len(seg1) == 2 and len(seg2) == 2:
            continue
        cyc = seg1 + list(reversed(seg2[1:-1]))
        blocks.append(tuple(cyc))
    return blocks


def is_parallel(l23: Sequence[int], l24: Sequence[int]) -> bool:
    return set(l23) & set(l24) == {l23[0], l23[-1]}


def _decycle_set(S: Triangulation, frame: Sequence[int]) -> list[Coloring]:
    v2, v4 = frame[1], frame[3]
    return [f for f in enumerate_colorings(S) if f[v2] != f[v4]]


def base_module_type(S: Triangulation, report: BaseModuleReport | None = None) -> BaseModuleReport:
    """Fill in the type vector of a recognised base-module."""
    rep = report or is_base_module(S)
    if not rep.is_base_module:
        rep.type_vector = {}
        return rep
    fr = rep.frame
    assert fr is not None
    outer_key = normalize_cycle(fr)
    cls_list = [c for c in rep.classes if c.qualifies and c.members <= rep.module_colorings]
    primary = min(cls_list, key=lambda c: min(c.members))
    K = sorted(primary.members)
    # cycle inventory of the class, outer cycle removed
    cc: dict[Cycle, tuple[int, int]] = {}
    for g in K:
        for c, pair in bichromatic_cycles(S, g):
            if c != outer_key:
                cc.setdefault(c, pair)
    ub = sorted(c for c in cc if all(len(_colors_on(g, c)) == 2 for g in K))
    cyclic = sorted(c for c in cc if c not in ub)
    if not cc:
        structure = "tree"
    elif ub:
        structure = "cycle"
    else:
        structure = "cyclic-cycle"
    notes = list(rep.notes)
    if ub and cyclic:
        notes.append("class has both UB-cycles and cyclic-cycles; typed cycle")
    fam = shells(S, cyclic) if cyclic else []
    # module paths
    paths = {g: module_paths(S, g, fr) for g in K}
    first = paths[K[0]]
    smp = all(len(p["23"]) == 1 and len(p["24"]) == 1 for p in paths.values()) and all(
        p == first for p in paths.values()
    )
    mmp = False
    for g in K:
        pv = {v for key in ("23", "24") for p in paths[g][key] for v in p}
        inner_sets = [cycle_split(S, c).interior for c in ub if len(_colors_on(g, c)) == 2]
        inner_sets += [set(s["interior"]) for s in fam]
        if any(pv & s for s in inner_sets):
            mmp = True
            break
    path_type = "SMP" if smp else ("MMP" if mmp else "unclassified")
    # Kempe: module and decycle colourings in one component of the K-change graph
    dec = set(_decycle_set(S, fr))
    comps = reconfig_graph(S, moves="kempe").components()
    kempe = any(c & rep.module_colorings and c & dec for c in comps)
    sigma_comps = reconfig_graph(S, moves="sigma").components()
    sigma_kempe = any(c & rep.module_colorings and c & dec for c in sigma_comps)
    # module-cycle
    mc = False
    for g in K:
        for key in ("23", "24"):
            if len(paths[g][key]) == 1:
                found = find_module_cycles(S, g, paths[g][key][0], frame=fr)
                if any(r.verdict == "module" for r in found):
                    mc = True
                    break
        if mc:
            break
    # parallel / intersecting
    par = None
    blocks: list[tuple[int, ...]] = []
    if len(first["23"]) == 1 and len(first["24"]) == 1:
        l23, l24 = first["23"][0], first["24"][0]
        par = "parallel" if is_parallel(l23, l24) else "intersecting"
        blocks = parallel_blocks(l23, l24)
    rep.type_vector = {
        "structure": structure,
        "paths": path_type,
        "kempe": "Kempe" if kempe else "non-Kempe",
        "sigma_connected": sigma_kempe,
        "module_cycle": "module-cycle" if mc else "non-module-cycle",
        "module_paths": par or "non-unique",
        "parallel_blocks": [list(b) for b in blocks],
        "ub_cycles": [list(c) for c in ub],
        "cyclic_cycles": len(cyclic),
        "class_size": len(K),
        "module_colorings": len(rep.module_colorings),
        "decycle_colorings": len(dec),
        "colorings": len(enumerate_colorings(S)),
    }
    rep.shells = fam
    rep.notes = notes
    return rep


def kempe_component_counts(S: Triangulation, moves: str = "kempe") -> list[int]:
    return sorted((len(c) for c in reconfig_graph(S, moves=moves).components()), reverse=True)


# -- restricting whole-graph colourings to a module ------------------------------------


def restrict_frame(f: Sequence[int], removed: Iterable[int]) -> Coloring:
    gone = set(removed)
    return tuple(c for v, c in enumerate(f) if v not in gone)


# -- module-cycles ------------------------------------------------------------------


@dataclass
class ModuleCycle:
    cycle: Cycle
    colors: tuple[int, int]
    verdict: str  # module | non-module
    trace: list[tuple[str, tuple[int, ...], tuple[int, int]]]
    start: Coloring  # frame-normalised colouring the chase starts from
    final: Coloring
    side_condition: bool  # the two-sided kj/1k connection of the definition


def _has_path(S: Triangulation, g: Sequence[int], s: int, t: int, a: int, b: int) -> bool:
    return t in component_of(S, g, s, a, b)


def _path_sides(S: Triangulation, path: Sequence[int], frame: Sequence[int]) -> tuple[set[int], set[int]]:
    v1, _, v3, _ = frame
    out = []
    for w in (v1, v3):
        cyc = tuple(path) + (w,)
        out.append(set(cycle_split(S, cyc).interior) | {w})
    return out[0], out[1]


def _side_connected(S: Triangulation, g: Sequence[int], x1: int, x2: int, a: int, b: int, side: set[int]) -> bool:
    allowed = {v for v in side if g[v] in (a, b)} | {x1, x2}
    seen = {x1}
    todo = [x1]
    while todo:
        v = todo.pop()
        for w in S.rotation[v]:
            if w in allowed and w not in seen:
                if w == x2 and v == x1:
                    continue  # the path needs an internal vertex on that side
                seen.add(w)
                todo.append(w)
    return x2 in seen


def missing_module_path(S: Triangulation, g: Sequence[int], frame: Sequence[int]) -> int | None:
    """A colour ``i`` with no 2i-path from ``v2`` to ``v4`` (``g`` keeps the
    frame colours on ``v2, v4``), else ``None``."""
    v2, v4 = frame[1], frame[3]
    c2 = g[v2]
    if g[v4] != c2:
        return None
    for i in sorted({1, 2, 3, 4} - {c2, 1}):
        if not _has_path(S, g, v2, v4, c2, i):
            return i
    return None


def find_module_cycles(
    S: Triangulation, f: Sequence[int], path: Sequence[int], frame: Sequence[int] | None = None, cap: int | None = None
) -> list[ModuleCycle]:
    """Candidate module-cycles for the unique module-path ``path``.

    ``f1`` is obtained by K-changing the 1j-component of ``v1`` (``j`` the
    colour absent from ``path``).  Every bichromatic cycle of ``f1`` holding a
    vertex of ``path`` in its interior is chased: sigma inside it, and while
    both module-paths survive, sigma inside the first bichromatic cycle that
    the last step created.  The cycle is a module-cycle when the chase ends
    without a 23- or a 24-module-path.
    """
    from .errors import ChaseCapExceeded

    fr = tuple(frame) if frame is not None else is_base_module(S).frame
    g = frame_coloring(f, fr)
    v1, v2, v3, v4 = fr
    path = tuple(path)
    i = next(g[v] for v in path if g[v] != 2)
    j = 7 - i
    side1, side2 = _path_sides(S, path, fr)
    cond = False
    for k in (2, i):
        xs = [v for v in path if g[v] == k]
        for a in range(len(xs)):
            for b in range(a + 1, len(xs)):
                x1, x2 = xs[a], xs[b]
                for s_one, s_two in ((side1, side2), (side2, side1)):
                    if _side_connected(S, g, x1, x2, k, j, s_one) and _side_connected(S, g, x1, x2, 1, k, s_two):
                        cond = True
    f1 = swap(g, component_of(S, g, v1, 1, j), 1, j)
    outer_key = normalize_cycle(fr)
    on_path = set(path)
    limit = cap if cap is not None else len(enumerate_colorings(S)) + 1
    out = []
    for c, pair in bichromatic_cycles(S, f1):
        if c == outer_key or not (cycle_split(S, c).interior & on_path):
            continue
        cur = f1
        cyc, pr = c, pair
        trace = [("kempe", tuple(sorted(component_of(S, g, v1, 1, j))), (1, j))]
        seen = {canonical(cur)}
        verdict = "non-module"
        steps = 0
        while True:
            s, t = complement(*pr)
            prev_cycles = {x for x, _ in bichromatic_cycles(S, cur)}
            cur = swap(cur, cycle_split(S, cyc).interior, s, t)
            trace.append(("sigma", cyc, pr))
            steps += 1
            if missing_module_path(S, cur, fr) is not None:
                verdict = "module"
                break
            if canonical(cur) in seen:
                break
            seen.add(canonical(cur))
            if steps > limit:
                raise ChaseCapExceeded(f"chase from {c} exceeded {limit} steps")
            fresh = [(x, p) for x, p in bichromatic_cycles(S, cur) if x not in prev_cycles and x != outer_key]
            if not fresh:
                break
            cyc, pr = fresh[0]
        out.append(ModuleCycle(c, pair, verdict, trace, g, cur, cond))
    return out


# -- related graphs ---------------------------------------------------------------

LINE_CLASSES = ("fine-solid", "bold-solid", "fine-dashed", "bold-dashed")
_DUAL = {"fine-solid": "fine-dashed", "fine-dashed": "fine-solid", "bold-solid": "bold-dashed", "bold-dashed": "bold-solid"}
_DOT_STYLE = {
    "fine-solid": 'style=solid penwidth=1',
    "bold-solid": 'style=solid penwidth=3',
    "fine-dashed": 'style=dashed penwidth=1',
    "bold-dashed": 'style=dashed penwidth=3',
}


@dataclass
class RelatedGraph:
    """Multigraph over the anchor-coloured vertices of a path or cycle.

    ``lines`` maps a sorted node pair to ``{class: multiplicity}``.  For a
    path, *fine* lines run on the ``v1`` side and *bold* ones on the ``v3``
    side; for a cycle, *bold* means interior and *fine* exterior.  A path
    lies on a side when each internal vertex is on that side or is another
    anchor vertex of the path or cycle.
    """

    kind: str  # path | cycle
    anchor: int
    nodes: tuple[int, ...]
    pairs: dict[str, tuple[int, int]]  # solid / dashed colour pairs
    lines: dict[tuple[int, int], dict[str, int]] = field(default_factory=dict)

    @property
    def num_lines(self) -> int:
        return sum(sum(c.values()) for c in self.lines.values())

    def classes_between(self, a: int, b: int) -> frozenset[str]:
        key = (min(a, b), max(a, b))
        return frozenset(k for k, m in self.lines.get(key, {}).items() if m > 0)

    def count(self, classes: Iterable[str]) -> int:
        want = set(classes)
        return sum(m for c in self.lines.values() for k, m in c.items() if k in want)

    def swap_bold(self) -> "RelatedGraph":
        """Interchange bold solid and bold dashed lines (a K-change on one side)."""
        ren = {"bold-solid": "bold-dashed", "bold-dashed": "bold-solid"}
        lines = {p: {ren.get(k, k): m for k, m in c.items()} for p, c in self.lines.items()}
        return RelatedGraph(self.kind, self.anchor, self.nodes, self.pairs, lines)

    def has_cycle(self, classes: Iterable[str]) -> bool:
        """Does the sub-multigraph made of ``classes`` contain a cycle?"""
        want = set(classes)
        parent = {v: v for v in self.nodes}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for (a, b), c in sorted(self.lines.items()):
            m = sum(k2 for k, k2 in c.items() if k in want)
            if m >= 2:
                return True
            if m == 1:
                ra, rb = find(a), find(b)
                if ra == rb:
                    return True
                parent[ra] = rb
        return False

    def to_dot(self, name: str = "related") -> str:
        out = [f"graph {name} {{"]
        for v in self.nodes:
            out.append(f'  {v} [label="{v}"];')
        for (a, b), c in sorted(self.lines.items()):
            for k in LINE_CLASSES:
                for _ in range(c.get(k, 0)):
                    out.append(f'  {a} -- {b} [{_DOT_STYLE[k]} label="{k}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def _disjoint_paths(S: Triangulation, f: Sequence[int], a: int, b: int, pair: tuple[int, int], region: set[int]) -> int:
    """Internally disjoint a-b paths through ``region`` alternating in ``pair``."""
    import networkx as nx
    from networkx.algorithms.connectivity import local_node_connectivity

    verts = {v for v in region if f[v] in pair} | {a, b}
    g = nx.Graph()
    g.add_nodes_from(verts)
    for v in verts:
        for w in S.rotation[v]:
            if w in verts and f[w] != f[v] and {v, w} != {a, b}:
                g.add_edge(v, w)
    if not nx.has_path(g, a, b):
        return 0
    return local_node_connectivity(g, a, b)


def path_related_graph(S: Triangulation, f: Sequence[int], path: Sequence[int], anchor: int = 2, frame: Sequence[int] | None = None) -> RelatedGraph:
    """H_2 (anchor 2) or H_4 (anchor 4) of a 24-module-path.

    Solid lines stand for 12-paths (14-paths for anchor 4) and dashed lines
    for 23-paths (34-paths); the internal vertices lie on one side of the path.
    """
    from .errors import PathTooShort

    fr = tuple(frame) if frame is not None else _quad_frame(S)
    g = frame_coloring(f, fr)
    nodes = tuple(v for v in path if g[v] == anchor)
    if anchor == 2 and len(nodes) < 3:
        raise PathTooShort(f"path has {len(nodes)} vertices coloured {anchor}")
    if anchor == 4 and len(nodes) < 2:
        raise PathTooShort(f"path has {len(nodes)} vertices coloured {anchor}")
    pairs = {"solid": (1, anchor), "dashed": (3, anchor) if anchor == 4 else (2, 3)}
    if anchor == 4:
        pairs["solid"] = (1, 4)
    left, right = _path_sides(S, path, fr)
    left -= set(path)
    right -= set(path)
    rg = RelatedGraph("path", anchor, nodes, pairs)
    for x in range(len(nodes)):
        for y in range(x + 1, len(nodes)):
            a, b = nodes[x], nodes[y]
            c = {}
            for style, pair in pairs.items():
                for width, side in (("fine", left), ("bold", right)):
                    m = _disjoint_paths(S, g, a, b, pair, side | set(nodes))
                    if m:
                        c[f"{width}-{style}"] = m
            if c:
                rg.lines[(min(a, b), max(a, b))] = c
    return rg


def cycle_related_graph(T: Triangulation, f: Sequence[int], c: Sequence[int], anchor: int) -> RelatedGraph:
    """H_4 or H_3 of a (possibly pseudo) bichromatic cycle.

    With the cycle coloured ``{anchor, other}`` the solid lines are
    ``(x, anchor)``-paths and the dashed ones ``(y, anchor)``-paths, where
    ``x < y`` are the two colours off the cycle.  This matches the usual
    reading of ``H_4(C_34)``: solid 14, dashed 24; and ``H_3(C_34)``: solid
    13, dashed 23.  Bold lines run through the interior.
    """
    cols = sorted({f[v] for v in c})
    if len(cols) != 2 or anchor not in cols:
        raise ValueError(f"cycle colours {cols} do not include {anchor}")
    x, y = sorted({1, 2, 3, 4} - set(cols))
    pairs = {"solid": (x, anchor), "dashed": (y, anchor)}
    split = cycle_split(T, c)
    nodes = tuple(v for v in c if f[v] == anchor)
    rg = RelatedGraph("cycle", anchor, nodes, pairs)
    for s in range(len(nodes)):
        for t in range(s + 1, len(nodes)):
            a, b = nodes[s], nodes[t]
            d = {}
            for style, pair in pairs.items():
                for width, side in (("bold", split.interior), ("fine", split.exterior)):
                    m = _disjoint_paths(T, f, a, b, pair, set(side) | set(nodes))
                    if m:
                        d[f"{width}-{style}"] = m
            if d:
                rg.lines[(min(a, b), max(a, b))] = d
    return rg


def _h3_table(L: frozenset[str]) -> frozenset[str]:
    """Line classes between two 3-vertices given the crossed H_4 classes
    ``L``, written out case by case."""
    fs, bs, fd, bd = LINE_CLASSES
    k = len(L)
    if k == 4:
        return frozenset()
    if k == 3:
        missing = next(iter(set(LINE_CLASSES) - L))
        return frozenset({{fd: fs, fs: fd, bd: bs, bs: bd}[missing]})
    if k == 2:
        rules = {
            frozenset({fd, fs}): {fs, fd},
            frozenset({bd, bs}): {bs, bd},
            frozenset({fd, bd}): {fs, bs},
            frozenset({fs, bs}): {fd, bd},
            frozenset({fd, bs}): {fs, bd},
            frozenset({fs, bd}): {fd, bs},
        }
        absent = frozenset(set(LINE_CLASSES) - L)
        return frozenset(rules[absent])
    if k == 1:
        only = next(iter(L))
        rules1 = {
            fd: {fd, bs, bd},
            fs: {fs, bs, bd},
            bd: {bd, fs, fd},
            bs: {bs, fs, fd},
        }
        return frozenset(rules1[only])
    return frozenset(LINE_CLASSES)


def derive_h3_from_h4(h4: RelatedGraph, T: Triangulation, f: Sequence[int], c: Sequence[int]) -> RelatedGraph:
    """Build H_3 of a 34-cycle from its H_4 without searching for paths.

    The chord between two 3-vertices splits the 4-vertices of the cycle in
    two arcs; ``L`` collects the H_4 classes joining the arcs.  A class is
    present in H_3 exactly when its dual (same width, other style) is
    absent from ``L``.  The written-out case table is applied as well and a
    disagreement raises :class:`RuleConflict`.
    """
    from .errors import RuleConflict

    cyc = list(c)
    other = next(f[v] for v in cyc if f[v] != h4.anchor)
    threes = tuple(v for v in cyc if f[v] == other)
    cols = sorted({1, 2, 3, 4} - {f[v] for v in cyc})
    pairs = {"solid": (cols[0], other), "dashed": (cols[1], other)}
    out = RelatedGraph("cycle", other, threes, pairs)
    pos = {v: k for k, v in enumerate(cyc)}
    for s in range(len(threes)):
        for t in range(s + 1, len(threes)):
            a, b = threes[s], threes[t]
            i, j = sorted((pos[a], pos[b]))
            arc = {cyc[k] for k in range(i + 1, j)} & set(h4.nodes)
            L = set()
            for (p, q), d in h4.lines.items():
                if (p in arc) != (q in arc):
                    L |= {k for k, m in d.items() if m}
            L = frozenset(L)
            formula = frozenset(k for k in LINE_CLASSES if _DUAL[k] not in L)
            table = _h3_table(L)
            if formula != table:
                raise RuleConflict(f"case table gives {sorted(table)}, duality gives {sorted(formula)} for L={sorted(L)}")
            if formula:
                out.lines[(min(a, b), max(a, b))] = {k: 1 for k in formula}
    return out
