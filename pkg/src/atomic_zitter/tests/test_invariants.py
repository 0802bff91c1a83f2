import pytest

from atomic_zitter import invariants
from atomic_zitter.invariants import CHECKS, CheckResult, run_selftest


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_each_check_passes(name):
    result = CHECKS[name]()
    assert isinstance(result, CheckResult)
    assert result.name == name
    assert result.passed, result.detail


def test_report_collects_every_check():
    report = run_selftest()
    assert report.passed
    assert [r.name for r in report.results] == list(CHECKS)
    assert report.failures == []
    assert set(report.to_dict()) == set(CHECKS)


def test_raising_check_is_a_failure(monkeypatch, caplog):
    def broken():
        raise RuntimeError("boom")

    monkeypatch.setitem(invariants.CHECKS, "parity", broken)
    report = run_selftest()
    assert not report.passed
    [failure] = report.failures
    assert failure.name == "parity"
    assert "RuntimeError: boom" in failure.detail
    assert "Selftest check 'parity' raised" in caplog.text
