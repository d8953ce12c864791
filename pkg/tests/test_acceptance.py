"""Release gate: one test per acceptance criterion.

Each test prints its one-line result; the lines are also collected and
repeated in the terminal summary so they appear in the plain ``pytest -v``
log.
"""

import pytest

from irk import acceptance

from conftest import ACCEPTANCE_LINES

SEED = 0


def _params():
    out = []
    for cid, title, _fn, slow in acceptance.CRITERIA:
        marks = [pytest.mark.slow] if slow else []
        out.append(pytest.param(cid, id=cid, marks=marks))
    return out


@pytest.mark.parametrize("cid", _params())
def test_criterion(cid):
    r = acceptance.run_criterion(cid, SEED)
    line = r.line()
    if not r.passed:
        line += f" {r.detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert r.passed, r.detail


def test_criteria_cover_a1_to_a15():
    assert [c for c, *_ in acceptance.CRITERIA] == [f"A{i}" for i in range(1, 16)]
    slow = {c for c, _t, _f, s in acceptance.CRITERIA if s}
    assert slow == {"A10", "A12"}


def test_fast_profile_skips_slow(monkeypatch):
    seen = []
    monkeypatch.setattr(acceptance, "run_criterion", lambda c, seed: seen.append(c))
    res = acceptance.run_acceptance("fast", 0, ["A10", "A12"])
    assert seen == [] and all(r.passed is None for r in res)


def test_tampered_base_case_fails_a7(monkeypatch):
    real = acceptance.bounds.f

    def tampered(k, q):
        return real(k, q) + (1 if k == 1 else 0)

    monkeypatch.setattr(acceptance.bounds, "f", tampered)
    r = acceptance.run_criterion("A7", SEED)
    assert r.passed is False


def test_brute_force_oracle_small():
    assert acceptance.brute_force_f(2, 1) == 4
    assert acceptance.brute_force_f(3, 1) == 36
