import math

import pytest

import eslab


def test_sieve_matches_small_window():
    t = eslab.sieve_window(10, 10)
    assert len(t) == 10
    assert t.primes() == [11, 13, 17, 19]
    assert t.mu_values()[:5] == [-1, 0, -1, 1, 1]  # 11..15
    assert t.psi() == pytest.approx(sum(math.log(p) for p in (11, 13, 16, 17, 19)) - math.log(2) * 3)


def test_lambda_sum_at_one_third():
    t = eslab.sieve_window(1_000_000, 20_000)
    r = eslab.lambda_exp_sum(t, "1/3", 1)
    assert r["terms"] == 20_000
    assert 0.3 < r["normalized"] < 0.7


def test_phase_values_are_exact_fractions():
    vals = eslab.phase_values("1/4", 1, 0, 4)
    assert [int(v, 16) for v in vals] == [1 << 126, 2 << 126, 3 << 126, 0]


def test_diophantine():
    a, q, err = eslab.best_rational("0.1428571428571428", 100)
    assert (a, q) == (1, 7)
    assert err < 1e-12
    arc = eslab.classify_arc("1/3", 1, 1000, 100, 10)
    assert arc["kind"] == "major" and arc["q"] == 3


def test_vinogradov_closed_form():
    for H in (1, 5, 12):
        assert eslab.count_J(2, 1, H) == (2 * H**3 + H) // 3
        assert eslab.count_J(2, 2, H) == 2 * H * H - H


def test_representations_verify():
    reps = eslab.find_representations(2, 5, 5_000_021, 0.8, 5)
    assert reps
    for r in reps:
        assert sum(p * p for p in r) == 5_000_021


def test_errors_are_typed():
    with pytest.raises(eslab.ConfigError):
        eslab.best_rational("not-a-number", 10)
    with pytest.raises(eslab.Error):
        eslab.count_J(6, 3, 10_000)


def test_cli_usage_exit_code():
    assert eslab.run_cli(["no-such-command"]) == 2
