"""Shared helpers and the per-criterion acceptance summary."""

from __future__ import annotations

import numpy as np
import pytest

from csbounds.bounds import BoundsPair
from csbounds.stepdist import StepCdf

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, title = marker
    state = _CRITERIA.setdefault(n, {"title": title, "outcome": "PASS", "detail": ""})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.skipped:
            state["outcome"] = "SKIP"
            if isinstance(report.longrepr, tuple):
                state["detail"] = report.longrepr[2]
        elif report.failed:
            state["outcome"] = "FAIL"
            state["detail"] = report.longreprtext.strip().splitlines()[-1][:160]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        s = _CRITERIA[n]
        line = f"criterion {n}: {s['outcome']:<4}  {s['title']}"
        if s["detail"]:
            line += f"  ({s['detail']})"
        terminalreporter.write_line(line)


def step(d: dict) -> StepCdf:
    """StepCdf from a {point: cumprob} mapping."""
    return StepCdf(list(d), list(d.values()))


def bounds_from(lb: StepCdf, ub: StepCdf) -> BoundsPair:
    """A BoundsPair with given envelopes and empty diagnostics."""
    pts = np.union1d(lb.points, ub.points)
    lv, uv = np.asarray(lb.evaluate(pts)), np.asarray(ub.evaluate(pts))
    return BoundsPair(lb, ub, pts, lv, uv, lv, uv,
                      {"crossings": [], "incomplete": [], "support": None})
