import json
from pathlib import Path

import pytest

from kempe_lab.coloring import pseudo_edges
from kempe_lab.construct import b4
from kempe_lab.decycle import (
    STRATEGIES,
    Move,
    PipelineLog,
    _DISPATCH,
    decycle,
    decycle_axis,
    decycle_cyclic,
    decycle_deg4,
    decycle_oracle,
    decycle_parallel,
    decycle_recursive,
    parse_trace,
    replay,
    strategy_coverage,
    symmetric_frames,
    verify_result,
)
from kempe_lab.errors import BranchUnmatched, KempeLabError, NoDecycleColoring, ParseError
from kempe_lab.planar import Triangulation
from kempe_lab.structure import frame_coloring, is_base_module, module_paths

from conftest import base_modules_upto, quad_smpgs_upto

CASES = json.loads((Path(__file__).parent / "data" / "decycle_cases.json").read_text())


def _case(name):
    c = CASES[name]
    S = Triangulation(c["rotation"], c["outer"])
    return S, tuple(c["coloring"]), tuple(c["frame"])


def test_b4_decycles_by_the_trivial_chain():
    S = b4()
    res = decycle(S)
    assert res.strategy == "recursive"
    verify_result(S, res)
    assert decycle_oracle(S) is not None


def test_trace_round_trip_and_replay():
    S = b4()
    res = decycle(S)
    moves = parse_trace(res.trace_text())
    assert moves == res.trace
    assert replay(S, res.start, moves) == res.coloring
    assert Move.from_line("move kempe 1 2 3 4") == Move("kempe", (1, 2, 3, 4))
    with pytest.raises(ParseError):
        parse_trace("move kempe a\n")
    with pytest.raises(KempeLabError):
        replay(S, res.start, [Move("bogus")])


def test_every_strategy_result_is_verified_on_small_modules():
    hits = dict.fromkeys(STRATEGIES, 0)
    for S in base_modules_upto(10):
        cov = strategy_coverage(S)
        assert not cov.contradictions
        for k, v in cov.ok.items():
            hits[k.split(":")[0].replace("vertical-axis", "axis").replace("sloped-axis", "axis")] += v
    for name in ("recursive", "deg4", "parallel", "module-cycle"):
        assert hits[name] > 0, name


def test_recursive_stall_case_still_decycles():
    for S in base_modules_upto(10):
        rep = is_base_module(S, verify=False)
        f = min(rep.module_colorings)
        if decycle_recursive(S, frame_coloring(f, rep.frame), rep.frame) is None:
            assert decycle_oracle(S) is not None
            verify_result(S, decycle(S))
            return
    pytest.fail("no stalling recursive module found")


def test_parallel_on_b4_and_on_intersecting_paths():
    S = b4()
    rep = is_base_module(S)
    f = frame_coloring(min(rep.module_colorings), rep.frame)
    # d(v2) = 4 in B4 and its two module-paths only share v2, v4
    res = decycle_parallel(S, f, rep.frame)
    assert res is not None
    verify_result(S, res)
    S, g, fr = _case("vertical-axis")
    assert decycle_parallel(S, g, fr) is None


def test_deg4_declines_without_a_degree4_path_vertex():
    S, g, fr = _case("vertical-axis")
    mp = module_paths(S, g, fr)
    inner = [v for key in ("23", "24") for p in mp[key] for v in p[1:-1]]
    res = decycle_deg4(S, g, fr)
    if all(S.degree(v) != 4 for v in inner):
        assert res is None
    else:
        assert res is not None
        verify_result(S, res)


@pytest.mark.parametrize("name, fn", [("vertical-axis", decycle_axis), ("sloped-axis:55-324", decycle_axis), ("cyclic", decycle_cyclic)])
def test_axis_machine_examples(name, fn):
    S, g, fr = _case(name)
    res = fn(S, g, fr)
    assert res is not None and res.strategy == name
    verify_result(S, res)
    assert pseudo_edges(S, res.coloring) == []
    # the only monochromatic edges along the way come from recolor moves
    for k, m in enumerate(res.trace):
        if m.kind != "recolor":
            before = replay(S, res.start, res.trace[:k])
            after = replay(S, res.start, res.trace[: k + 1])
            assert len(pseudo_edges(S, after)) <= len(pseudo_edges(S, before))


def test_axis_gap_is_reported_not_guessed():
    S, g, fr = _case("axis-unmatched")
    with pytest.raises(BranchUnmatched) as e:
        decycle_axis(S, g, fr)
    assert "case 1" in str(e.value)
    log = PipelineLog()
    res = decycle(S, log=log)
    verify_result(S, res)


def test_pipeline_log_and_strategy_order():
    S = base_modules_upto(9)[0]
    log = PipelineLog()
    res = decycle(S, log=log)
    assert log.attempts and log.attempts[-1][0] == res.strategy
    assert list(_DISPATCH) == list(STRATEGIES)


def test_decycle_refuses_non_modules():
    nm = next(S for S in quad_smpgs_upto(8) if not is_base_module(S, verify=False).is_base_module)
    with pytest.raises(KempeLabError):
        decycle(nm)
    assert issubclass(NoDecycleColoring, KempeLabError)


def test_symmetric_frames_keep_the_diagonal():
    for fr in symmetric_frames((0, 1, 2, 3)):
        assert {fr[1], fr[3]} == {1, 3}


def test_module_paths_in_examples():
    S, g, fr = _case("vertical-axis")
    mp = module_paths(S, g, fr)
    assert len(mp["23"]) == 1 and len(mp["24"]) == 1
