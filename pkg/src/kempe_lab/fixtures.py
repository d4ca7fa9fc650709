"""Fixture manifest: which reference graphs exist on disk and what they must satisfy.

Each manifest entry names its files, a transcription status
(``transcribed``, ``search-recovered`` or ``unavailable``) and a predicate.
Tests and drivers go through :func:`require`, which refuses an entry that is
unavailable, missing on disk or failing its predicate.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .coloring import enumerate_colorings, parse_col4, reconfig_graph, sigma_classes
from .errors import FixtureMissing, KempeLabError
from .planar import Triangulation, canonical_code, parse_mpg

STATUSES = ("transcribed", "search-recovered", "unavailable")


def fixture_dir() -> Path:
    env = os.environ.get("KEMPE_LAB_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "fixtures"


@dataclass(frozen=True)
class Entry:
    name: str
    files: tuple[str, ...]
    status: str
    predicate: str
    note: str = ""

    def paths(self, root: Path | None = None) -> list[Path]:
        d = root or fixture_dir()
        return [d / f for f in self.files]


def load_manifest(root: Path | None = None) -> dict[str, Entry]:
    d = root or fixture_dir()
    path = d / "manifest.json"
    if not path.exists():
        raise FixtureMissing(f"no fixture manifest at {path}")
    data = json.loads(path.read_text())
    out = {}
    for e in data["fixtures"]:
        if e["status"] not in STATUSES:
            raise KempeLabError(f"fixture {e['name']}: unknown status {e['status']!r}")
        if e["predicate"] not in PREDICATES:
            raise KempeLabError(f"fixture {e['name']}: unknown predicate {e['predicate']!r}")
        out[e["name"]] = Entry(e["name"], tuple(e["files"]), e["status"], e["predicate"], e.get("note", ""))
    return out


# -- predicates ------------------------------------------------------------------
# Each takes the loaded objects and returns a list of failure messages.


def _b4(graphs: list[Triangulation], _cols) -> list[str]:
    from .construct import b4
    from .structure import is_base_module

    (S,) = graphs
    bad = []
    if S.outer is None or len(S.outer) != 4 or S.n != 6:
        bad.append("expected a 6-vertex SMPG with a quadrilateral outer cycle")
    elif canonical_code(S) != canonical_code(b4()):
        bad.append("not isomorphic to B4")
    elif not is_base_module(S).is_base_module:
        bad.append("not a base-module")
    return bad


def _ubcmpg_counts(T: Triangulation, total: int, split: tuple[int, int, int], kind: str) -> list[str]:
    from .structure import classify_ubcmpg

    bad = []
    n = len(enumerate_colorings(T))
    if n != total:
        bad.append(f"{n} colourings, expected {total}")
    rep = classify_ubcmpg(T)
    if rep.kind != kind:
        bad.append(f"type {rep.kind}, expected {kind}")
    if rep.counts != split:
        bad.append(f"split {rep.counts}, expected {split}")
    return bad


def _min_ubcmpg(graphs, _cols) -> list[str]:
    (T,) = graphs
    bad = _ubcmpg_counts(T, 3, (2, 1, 0), "tree")
    sizes = sorted(len(c) for c in sigma_classes(T))
    if sizes != [1, 2]:
        bad.append(f"sigma-class sizes {sizes}, expected [1, 2]")
    if T.n != 8 or T.min_degree < 4:
        bad.append("expected order 8 and minimum degree 4")
    return bad


def _order12_tree(graphs, _cols) -> list[str]:
    bad = []
    for T in graphs:
        if T.n != 12:
            bad.append(f"order {T.n}, expected 12")
        bad += _ubcmpg_counts(T, 6, (4, 2, 0), "tree")
    if len({canonical_code(T) for T in graphs}) != len(graphs):
        bad.append("duplicate graphs")
    return bad


def _pure16(graphs, _cols) -> list[str]:
    (T,) = graphs
    bad = _ubcmpg_counts(T, 16, (16, 0, 0), "pure")
    if T.n != 17:
        bad.append(f"order {T.n}, expected 17")
    return bad


def _module_counts(S: Triangulation, total: int, mods: int, dec: int, comps: int) -> list[str]:
    from .structure import _decycle_set, is_base_module

    bad = []
    rep = is_base_module(S)
    if not rep.is_base_module:
        return ["not a base-module"]
    got = (
        len(enumerate_colorings(S)),
        len(rep.module_colorings),
        len(_decycle_set(S, rep.frame)),
        len(reconfig_graph(S, moves="kempe").components()),
    )
    if got != (total, mods, dec, comps):
        bad.append(f"(colourings, module, decycle, components) = {got}, expected {(total, mods, dec, comps)}")
    return bad


def _kempe12(graphs, _cols) -> list[str]:
    return _module_counts(graphs[0], 12, 2, 4, 1)


def _nonkempe24(graphs, _cols) -> list[str]:
    return _module_counts(graphs[0], 24, 4, 12, 2)


def _heawood(graphs, cols) -> list[str]:
    (G,) = graphs
    (f,) = cols
    bad = []
    if G.outer is not None:
        bad.append("expected an MPG")
    unset = [v for v, c in enumerate(f) if c == 0]
    if len(f) != G.n or len(unset) != 1:
        return bad + ["the colouring must leave exactly one vertex uncoloured"]
    v2 = unset[0]
    if G.degree(v2) != 5:
        bad.append(f"uncoloured vertex {v2} has degree {G.degree(v2)}")
    ring = G.rotation[v2]
    if len({f[u] for u in ring}) != 4:
        bad.append("the ring of the uncoloured vertex does not use four colours")
    for u, w in G.edges:
        if v2 not in (u, w) and f[u] == f[w]:
            bad.append(f"edge {u}-{w} is monochromatic")
            break
    return bad


PREDICATES: dict[str, Callable[[list, list], list[str]]] = {
    "b4": _b4,
    "min-ubcmpg": _min_ubcmpg,
    "order12-tree": _order12_tree,
    "pure-16ubc": _pure16,
    "kempe-module-12": _kempe12,
    "nonkempe-module-24": _nonkempe24,
    "heawood": _heawood,
}


def _load(entry: Entry, root: Path | None) -> tuple[list[Triangulation], list[tuple[int, ...]]]:
    graphs, cols = [], []
    for p in entry.paths(root):
        if not p.exists():
            raise FixtureMissing(f"fixture {entry.name}: {p.name} is not on disk")
        text = p.read_text()
        if p.suffix == ".mpg":
            graphs.append(parse_mpg(text))
        elif p.suffix == ".col4":
            cols.append(parse_col4(text, allow_unset=True))
    return graphs, cols


def validate(entry: Entry, root: Path | None = None) -> list[str]:
    """Failure messages of the entry's predicate (empty when it passes)."""
    graphs, cols = _load(entry, root)
    return PREDICATES[entry.predicate](graphs, cols)


def require(name: str, root: Path | None = None) -> tuple[list[Triangulation], list[tuple[int, ...]]]:
    """Load a fixture that is on disk and passes its predicate."""
    entry = load_manifest(root).get(name)
    if entry is None:
        raise FixtureMissing(f"no manifest entry {name!r}")
    if entry.status == "unavailable":
        raise FixtureMissing(f"fixture {name} is not transcribed: {entry.note}")
    graphs, cols = _load(entry, root)
    bad = PREDICATES[entry.predicate](graphs, cols)
    if bad:
        raise FixtureMissing(f"fixture {name} fails its predicate: " + "; ".join(bad))
    return graphs, cols
