import time

import pytest

from zitau.montecarlo import run_table1, run_table2

SEED = 2023

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn(SEED)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="session")
def table1_timed():
    return _timed(run_table1)


@pytest.fixture(scope="session")
def table1_results(table1_timed):
    return table1_timed[0]


@pytest.fixture(scope="session")
def table2_results():
    return run_table2(SEED)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
