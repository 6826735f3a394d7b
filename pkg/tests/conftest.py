import time

import pytest

from barrier_lifetime import AlphaSchedule, PotentialSpec, lifetime
from barrier_lifetime.quadcore import QuadratureConfig
from barrier_lifetime.regularized import alpha_limit, regularized_denominator, regularized_numerator
from barrier_lifetime.sweep import run_sweep, sweep_grid

ALPHA_GRID = (0.0, -2.0, -4.0, -8.0, -16.0)

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, text): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    cid, text = mark.args
    detail = dict(item.user_properties).get("detail", "")
    _ACCEPTANCE.append((cid, text, "PASS" if rep.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, text, verdict, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[0][1:])):
        terminalreporter.write_line(f"[{verdict}] {cid} {text}" + (f" | {detail}" if detail else ""))


@pytest.fixture(scope="session")
def moment_results():
    """Delta-function route on the validation grid."""
    return {v: lifetime(PotentialSpec.from_v0a2(v)) for v in ALPHA_GRID}


@pytest.fixture(scope="session")
def alpha_limits():
    """Damped-moment limits on the validation grid, with wall times per route."""
    cfg = QuadratureConfig()
    sched = AlphaSchedule()
    out = {"den": {}, "num": {}, "den_time": 0.0, "num_time": 0.0}
    for v in ALPHA_GRID:
        spec = PotentialSpec.from_v0a2(v)
        for key, fn in (("den", regularized_denominator), ("num", regularized_numerator)):
            start = time.perf_counter()
            out[key][v] = alpha_limit(fn, spec, sched, cfg)
            out[key + "_time"] += time.perf_counter() - start
    return out


@pytest.fixture(scope="session")
def default_sweep():
    start = time.perf_counter()
    rows = run_sweep(sweep_grid())
    return rows, time.perf_counter() - start

