import time

import pytest

from largespec import BudgetError, sweeps
from largespec.core import ResidueSet, make_rng
from largespec.dissociated import is_dissociated, is_lambda_family


def test_parallel_and_serial_sweeps_agree(monkeypatch):
    serial = sweeps.chang_family(12, seed=1)
    monkeypatch.setenv(sweeps.THREADS_ENV, "2")
    assert sweeps.chang_family(12, seed=1) == serial


def test_time_budget_refuses_slow_instances():
    with pytest.raises(BudgetError):
        sweeps.timed_call(time.sleep, (2,), time_limit=0.05)
    assert sweeps.timed_call(sum, ([1, 2],), time_limit=1) == 3


def test_records_name_their_claim():
    rec = sweeps.main_record(ResidueSet(7, [0, 1, 3]), "delta/2", 2)
    assert rec["operation"] == "verify_main_theorem"
    assert rec["claim"] == sweeps.CLAIMS["main"]
    assert rec["verdict"] == "pass" and isinstance(rec["t_k"], str)


def test_random_generators_respect_their_families():
    rng = make_rng(0)
    for _ in range(20):
        assert is_dissociated(sweeps.random_dissociated(rng, 40))
        L = sweeps.random_lambda_family(rng, 100, 2, 3)
        assert L is None or (is_lambda_family(L, 2, 3) and len(L) >= 2)
