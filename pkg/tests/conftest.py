"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

import os
import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from morsehom.ingest import load_sample, parse_simplex_list

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def torus():
    return parse_simplex_list(load_sample("torus.txt"))


@pytest.fixture
def fig3():
    return parse_simplex_list(load_sample("fig3.txt"))


_criteria: dict[str, list[str]] = {}
_metrics: dict[str, list[str]] = {}


@pytest.fixture
def metric(request):
    """Record a reported (not asserted) figure under the test's criterion."""
    mark = request.node.get_closest_marker("criterion")
    cid = str(mark.args[0]) if mark else request.node.name

    def record(text: str) -> None:
        _metrics.setdefault(cid, []).append(text)

    return record


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion_id", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        _criteria.setdefault(marker, []).append(outcome)
        if report.skipped and isinstance(report.longrepr, tuple):
            _metrics.setdefault(marker, []).append(report.longrepr[2])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion_id = str(mark.args[0])


def _criterion_key(cid: str):
    num = re.match(r"\d*", cid).group()
    return (int(num) if num else 0, cid[len(num):])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=_criterion_key):
        results = _criteria[cid]
        if "FAIL" in results:
            status = "FAIL"
        elif all(r == "SKIP" for r in results):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {cid}: {status} ({len(results)} checks)")
        for text in _metrics.get(cid, []):
            terminalreporter.write_line(f"    {text}")
