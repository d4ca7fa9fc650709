"""Command line front end.

Every command prints a JSON run report (or the format named by the command)
to stdout.  Exit codes: 0 success, 2 invalid input, 3 engine error, 4
counterexample alarm.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import pickle
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .coloring import format_col4, parse_col4, is_proper, reconfig_graph, enumerate_colorings
from .errors import CounterexampleAlarm, KempeLabError, ValidationError
from .planar import Triangulation, canonical_code, format_mpg, parse_mpg

CACHE_ENV = "KEMPE_LAB_CACHE"


# -- report plumbing -----------------------------------------------------------------


class RunReport:
    """Command name, inputs, results and optional timing, in that order."""

    def __init__(self, command: str, inputs: dict | None = None):
        self.command = command
        self.inputs = inputs or {}
        self.results: dict = {}
        self.timing: dict[str, float] | None = None

    def to_dict(self) -> dict:
        out = {"command": self.command, "version": __version__, "inputs": self.inputs, "results": self.results}
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, bytes):
        return obj.hex()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"no such file: {path}")
    return p.read_text()


def load_graph(path: str) -> Triangulation:
    return parse_mpg(_read(path))


def load_coloring(path: str, T: Triangulation | None = None):
    f = parse_col4(_read(path))
    if T is not None:
        if len(f) != T.n:
            raise ValidationError(f"colouring has {len(f)} vertices, graph has {T.n}")
        if not is_proper(T, f):
            raise ValidationError("colouring is not proper")
    return f


def _cache_dir() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cached(key: str, compute: Callable[[], object]):
    """Persist ``compute()`` under ``KEMPE_LAB_CACHE`` when the variable is set."""
    d = _cache_dir()
    if d is None:
        return compute()
    path = d / f"{key}.pkl"
    if path.exists():
        with open(path, "rb") as fh:
            return pickle.load(fh)
    value = compute()
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        pickle.dump(value, fh)
    tmp.replace(path)
    return value


def graph_to_dot(T: Triangulation, f: Sequence[int] | None = None, name: str = "G") -> str:
    palette = {1: "#e41a1c", 2: "#377eb8", 3: "#4daf4a", 4: "#ff7f00", 0: "#ffffff"}
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled];"]
    outer = set(T.outer or ())
    for v in range(T.n):
        attrs = [f'label="{v}"' if f is None else f'label="{v}:{f[v]}"']
        if f is not None:
            attrs.append(f'fillcolor="{palette.get(f[v], "#cccccc")}"')
        else:
            attrs.append('fillcolor="#ffffff"')
        if v in outer:
            attrs.append("penwidth=2")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in T.edges:
        style = " [style=bold]" if f is not None and f[u] == f[v] else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------------


def cmd_validate(args) -> RunReport:
    rep = RunReport("validate", {"path": args.path, "sha256": file_digest(args.path) if Path(args.path).exists() else None})
    text = _read(args.path)
    head = next((s.split("#", 1)[0].split() for s in text.splitlines() if s.split("#", 1)[0].strip()), [])
    if head and head[0] == "col4":
        f = parse_col4(text)
        rep.results = {"kind": "col4", "n": len(f), "valid": True}
        if args.graph:
            T = load_graph(args.graph)
            load_coloring(args.path, T)
            rep.inputs["graph"] = args.graph
            rep.results["proper"] = True
        return rep
    T = parse_mpg(text)
    again = parse_mpg(format_mpg(T))
    rep.results = {
        "kind": "smpg" if T.outer is not None else "mpg",
        "n": T.n,
        "edges": len(T.edges),
        "outer": list(T.outer) if T.outer is not None else None,
        "min_degree": T.min_degree,
        "canonical_code": canonical_code(T).hex(),
        "round_trip": canonical_code(again) == canonical_code(T),
        "valid": True,
    }
    return rep


def _census_graphs(n_max: int, min_degree: int) -> dict[int, list]:
    from .construct import enumerate_mpgs

    def compute():
        out: dict[int, list] = {}
        for T in enumerate_mpgs(n_max, min_degree=min_degree):
            out.setdefault(T.n, []).append(T.rotation)
        return out

    return cached(f"mpgs_n{n_max}_d{min_degree}", compute)


def _ubcmpg_kind(rotation) -> str:
    from .structure import classify_ubcmpg

    return classify_ubcmpg(Triangulation(rotation, validate=False)).kind


def _base_modules(rotation) -> list[bytes]:
    from .structure import harvest_quad_smpgs, is_base_module

    H = harvest_quad_smpgs([Triangulation(rotation, validate=False)], method="cycles")
    return [code for code, S in H.items() if is_base_module(S, verify=False).is_base_module]


def _pmap(fn, items: list, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (workers * 8))))


def cmd_census(args) -> str:
    graphs = _census_graphs(args.n_max, args.min_degree)
    rows = []
    for n in range(4, args.n_max + 1):
        gs = graphs.get(n, [])
        if args.max_degree is not None:
            gs = [r for r in gs if max(len(x) for x in r) <= args.max_degree]
        if args.ubcmpg or args.ubcmpg_type:
            kinds = _pmap(_ubcmpg_kind, gs, args.workers)
            want = args.ubcmpg_type
            count = sum(1 for k in kinds if k != "not-UBCMPG" and (want is None or k == want))
        elif args.base_modules:
            seen = set()
            for codes in _pmap(_base_modules, gs, args.workers):
                seen.update(codes)
            count = len(seen)
        else:
            count = len(gs)
        rows.append(f"{n}\t{count}")
    return "\n".join(rows) + "\n"


def cmd_analyze(args) -> RunReport:
    from .structure import base_module_type, classify_ubcmpg, is_base_module

    T = load_graph(args.path)
    rep = RunReport("analyze", {"path": args.path, "sha256": file_digest(args.path)})
    cols = enumerate_colorings(T)
    rg = reconfig_graph(T, moves=args.moves)
    comps = sorted((sorted(c) for c in rg.components()), key=lambda c: (-len(c), c))
    res: dict = {
        "n": T.n,
        "kind": "smpg" if T.outer is not None else "mpg",
        "colorings": len(cols),
        "reconfig": {"moves": args.moves, "nodes": len(rg.nodes), "edges": len(rg.edges), "components": [len(c) for c in comps]},
    }
    if T.outer is None:
        u = classify_ubcmpg(T)
        res["ubcmpg"] = {"kind": u.kind, "ubc": len(u.ubc), "tree": len(u.tree), "cyclic": len(u.cyclic)}
    elif len(T.outer) == 4:
        bm = is_base_module(T, verify=True)
        if bm.is_base_module:
            bm = base_module_type(T, bm)
        res["base_module"] = json.loads(bm.to_text())
    rep.results = res
    return rep


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_decycle(args) -> RunReport:
    from .decycle import PipelineLog, decycle

    S = load_graph(args.path)
    if S.outer is None or len(S.outer) != 4:
        raise ValidationError("decycle needs an SMPG with a quadrilateral outer cycle")
    log = PipelineLog()
    res = decycle(S, log=log)
    rep = RunReport("decycle", {"path": args.path, "sha256": file_digest(args.path)})
    rep.results = {
        "strategy": res.strategy,
        "frame": list(res.frame),
        "start": "".join(map(str, res.start)),
        "coloring": "".join(map(str, res.coloring)),
        "moves": len(res.trace),
        "findings": [{"strategy": x["strategy"], "error": x["error"]} for x in log.findings],
        "notes": res.notes,
    }
    if args.trace:
        _write(args.trace, res.trace_text())
    if args.output:
        _write(args.output, format_col4(res.coloring))
    return rep


def cmd_reduce(args) -> RunReport:
    from .reduction import reduce_color, subcolorings
    from .construct import wernicke_find

    G = load_graph(args.path)
    if G.outer is not None:
        raise ValidationError("reduce needs an MPG")
    if args.coloring:
        sub = parse_col4(_read(args.coloring), allow_unset=True)
        if len(sub) != G.n:
            raise ValidationError(f"subcolouring has {len(sub)} vertices, graph has {G.n}")
    else:
        pivot = args.pivot if args.pivot is not None else wernicke_find(G)[0]
        sub = subcolorings(G, pivot)[0]
    out, plan = reduce_color(G, sub, pivot=args.pivot, checkpoints=bool(args.checkpoints))
    rep = RunReport("reduce", {"path": args.path, "sha256": file_digest(args.path), "coloring": args.coloring})
    rep.results = {
        "pivot": plan.pivot,
        "partner": plan.partner,
        "configuration": plan.kind,
        "route": plan.route,
        "rotation_index": plan.rotation_index,
        "frame": list(plan.frame) if plan.frame else None,
        "coloring": "".join(map(str, out)),
        "trace": plan.trace,
    }
    if args.checkpoints:
        d = Path(args.checkpoints)
        d.mkdir(parents=True, exist_ok=True)
        for k, cp in enumerate(plan.checkpoints):
            (d / f"{k:02d}_{cp.stage}.dot").write_text(graph_to_dot(cp.graph, cp.coloring, name=f"stage_{cp.stage}"))
        rep.results["checkpoints"] = [f"{k:02d}_{cp.stage}: {cp.note}" for k, cp in enumerate(plan.checkpoints)]
    if args.output:
        _write(args.output, format_col4(out))
    return rep


def cmd_heawood(args) -> RunReport:
    from .reduction import heawood_demo

    plan = heawood_demo(args.fixture)
    rep = RunReport("heawood", {"fixture": args.fixture})
    rep.results = {
        "route": plan.route,
        "checkpoints": [f"{cp.stage}: {cp.note}" for cp in plan.checkpoints],
        "trace": plan.trace,
    }
    return rep


def cmd_gen(args) -> RunReport:
    graphs = _census_graphs(args.n_max, args.min_degree)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    counts = {}
    for n in sorted(graphs):
        if n < args.n_min:
            continue
        for k, rot in enumerate(graphs[n]):
            T = Triangulation(rot, validate=False)
            (out / f"n{n:02d}_{k:05d}.mpg").write_text(format_mpg(T, comment=f"order {n}, index {k}"))
        counts[str(n)] = len(graphs[n])
    rep = RunReport("gen", {"n_max": args.n_max, "min_degree": args.min_degree, "out": str(out)})
    rep.results = {"written": counts}
    return rep


def cmd_export_dot(args) -> str:
    T = load_graph(args.path)
    if args.reconfig:
        return reconfig_graph(T, moves=args.reconfig).to_dot()
    f = load_coloring(args.coloring, T) if args.coloring else None
    return graph_to_dot(T, f)


# -- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kempe-lab", description="Kempe-chain experiments on planar triangulations.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--timing", action="store_true", help="add wall-clock timing to JSON reports")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and check a .mpg or .col4 file")
    s.add_argument("path")
    s.add_argument("--graph", help=".mpg host to check a colouring against")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("census", help="count MPGs by order (TSV n<TAB>count)")
    s.add_argument("n_max", type=int)
    s.add_argument("--min-degree", type=int, default=3)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--ubcmpg", action="store_true", help="count UBCMPGs only")
    s.add_argument("--ubcmpg-type", choices=["pure", "tree", "cycle", "hybrid"])
    s.add_argument("--base-modules", action="store_true", help="count distinct base-modules harvested from 4-cycles")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("analyze", help="colourings, reconfiguration graph, UBC and base-module report")
    s.add_argument("path")
    s.add_argument("--moves", choices=["sigma", "kempe"], default="sigma")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("decycle", help="decycle colouring of a base-module")
    s.add_argument("path")
    s.add_argument("--trace", help="write the move trace here ('-' for stdout)")
    s.add_argument("--output", "-o", help="write the colouring (.col4)")
    s.set_defaults(func=cmd_decycle)

    s = sub.add_parser("reduce", help="colour a minimum-degree-5 MPG from a colouring of G - v2")
    s.add_argument("path")
    s.add_argument("--coloring", help=".col4 subcolouring (0 at the pivot); default: first canonical one")
    s.add_argument("--pivot", type=int)
    s.add_argument("--checkpoints", help="directory for one DOT file per stage")
    s.add_argument("--output", "-o", help="write the colouring (.col4)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("heawood", help="replay the reduction on the Heawood counterexample")
    s.add_argument("--fixture", default=None, help="graph file with a matching .col4 (default: manifest entry)")
    s.set_defaults(func=cmd_heawood)

    s = sub.add_parser("gen", help="write every MPG up to an order as .mpg files")
    s.add_argument("n_max", type=int)
    s.add_argument("--n-min", type=int, default=4)
    s.add_argument("--min-degree", type=int, default=3)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("export-dot", help="DOT export of a graph or its reconfiguration graph")
    s.add_argument("path")
    s.add_argument("--coloring")
    s.add_argument("--reconfig", choices=["sigma", "kempe"])
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        out = args.func(args)
    except CounterexampleAlarm as exc:
        print(f"ALARM: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except KempeLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if isinstance(out, RunReport):
        if args.timing:
            out.timing = {"seconds": round(time.perf_counter() - t0, 3)}
        sys.stdout.write(out.to_text())
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
