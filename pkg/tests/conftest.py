from __future__ import annotations

import random
from functools import lru_cache

import pytest

from kempe_lab.construct import enumerate_mpgs
from kempe_lab.structure import harvest_quad_smpgs, is_base_module


@lru_cache(maxsize=None)
def mpgs_upto(n_max: int, min_degree: int = 3) -> tuple:
    return tuple(enumerate_mpgs(n_max, min_degree=min_degree))


@lru_cache(maxsize=None)
def quad_smpgs_upto(n_max: int) -> tuple:
    return tuple(harvest_quad_smpgs(mpgs_upto(n_max), method="cycles").values())


@lru_cache(maxsize=None)
def base_modules_upto(n_max: int) -> tuple:
    return tuple(S for S in quad_smpgs_upto(n_max) if is_base_module(S, verify=False).is_base_module)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


# -- acceptance summary: one line per criterion -------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    detail = dict(report.user_properties).get("detail", "")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[name] = (outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, detail = _ACCEPTANCE[name]
        line = f"{outcome}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def random_wheel_round_trip(T, rng: random.Random, kind: str | None = None) -> tuple[str, bool] | None:
    """Extend a random wheel on ``T`` and contract it again.  Returns
    ``(kind, identical)`` or ``None`` when the drawn site is not usable."""
    from kempe_lab.construct import WheelSite, contract_wheel, extend_wheel, normalize_rotations
    from kempe_lab.errors import SiteMismatch
    from kempe_lab.planar import canonical_code

    kind = kind or rng.choice(("triangle", "path2", "funnel"))
    if kind == "triangle":
        site = WheelSite("triangle", rng.choice(T.faces))
    else:
        v2 = rng.randrange(T.n)
        nb = T.rotation[v2]
        v1, v3 = rng.sample(nb, 2)
        if kind == "path2":
            site = WheelSite("path2", (v1, v2, v3), rng.choice(("left", "right")))
        else:
            apex = T.apexes(v2, v3)[rng.randrange(2)]
            if apex is None or apex == v1:
                return None
            site = WheelSite("funnel", (v1, v2, apex, v3))
    try:
        G, w, _ = extend_wheel(T, site)
    except SiteMismatch:
        return None
    H = contract_wheel(G, w)
    same = canonical_code(H) == canonical_code(T) and normalize_rotations(H) == normalize_rotations(T)
    return kind, same
