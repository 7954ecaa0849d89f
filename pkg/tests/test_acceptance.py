"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

Criteria 1-7 each run one named verification suite with its runtime budget;
criterion 8 checks byte-identical CLI reruns.  Suites are cached per session
so the budget timing reflects a single cold run of each.
"""

import json

import pytest

from elliptheta.cli import main
from elliptheta.suites import run_suite

BUDGETS = {
    "theta": 10.0,
    "ellint": 60.0,
    "hts": 300.0,
    "operators": 600.0,
    "modular": 900.0,
    "macdonald": 30.0,
    "limits": 900.0,
}

_CACHE = {}


def _suite(name):
    if name not in _CACHE:
        _CACHE[name] = run_suite(name, seed=0)
    return _CACHE[name]


def _criterion(number, name):
    rep = _suite(name)
    failed = [c.name for c in rep.checks if not c.passed]
    in_budget = rep.timing_seconds < BUDGETS[name]
    ok = not failed and in_budget
    print(f"criterion {number} ({name} suite): {'PASS' if ok else 'FAIL'} "
          f"[{rep.n_pass}/{len(rep.checks)} checks, {rep.timing_seconds:.1f}s"
          f"{'' if in_budget else ' OVER BUDGET'}"
          f"{'' if not failed else ', failing: ' + ', '.join(failed)}]")
    assert not failed, f"failing checks: {failed}"
    assert in_budget, f"runtime {rep.timing_seconds:.1f}s over {BUDGETS[name]}s budget"


def test_criterion_1_theta():
    _criterion(1, "theta")


def test_criterion_2_ellint():
    _criterion(2, "ellint")


def test_criterion_3_hts():
    _criterion(3, "hts")


def test_criterion_4_qkzb():
    _criterion(4, "operators")


def test_criterion_5_modular():
    _criterion(5, "modular")


def test_criterion_6_macdonald_exact():
    rep = _suite("macdonald")
    exact = all(c.tolerance == 0.0 and c.residual == 0.0 for c in rep.checks)
    _criterion(6, "macdonald")
    assert exact, "macdonald suite must hold with zero numerical tolerance"


def test_criterion_7_limits():
    _criterion(7, "limits")


def test_criterion_8_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code1 = main(["verify", "--suite", "theta", "--no-timing",
                  "--seed", "0", "--output", str(a)])
    code2 = main(["verify", "--suite", "theta", "--no-timing",
                  "--seed", "0", "--output", str(b)])
    identical = a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    exit_matches = (code1 == 0) == rep["summary"]["all_pass"] and code1 == code2
    ok = identical and exit_matches
    print(f"criterion 8 (determinism): {'PASS' if ok else 'FAIL'} "
          f"[byte-identical={identical}, exit-status-consistent={exit_matches}]")
    assert identical
    assert exit_matches
