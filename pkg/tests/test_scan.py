"""Outer coupling scan: root find on k(a)^2 = 1 and consistency checks."""

from types import SimpleNamespace

import numpy as np
import pytest

from solitonscf.errors import ConfigurationError, DivergenceError, ScanFailureError
from solitonscf.scan import ScanConfig, ScanResult, find_a0, verify_extremum
from solitonscf.solver import SolverConfig

A0_REFERENCE = -2.31241249   # frozen scan result, defaults, n = 2000


# ---------------------------------------------------------------------------
# converged scan on the real solver (session fixture)


def test_scan_locates_reference_coupling(scan_result):
    assert scan_result.a0 == pytest.approx(A0_REFERENCE, abs=5e-7)
    assert abs(scan_result.solution.k**2 - 1.0) <= 1e-6


def test_scan_is_frugal(scan_result):
    assert len(scan_result.k_history) <= 12


def test_scan_warm_starts_inner_solves(scan_result):
    # cold start pays full price once; warm continuations stay cheap
    first = scan_result.k_history[0]
    assert first[0] == -3.3
    assert first[1] == pytest.approx(0.837097, abs=1e-5)
    assert all(row[2] <= 10 for row in scan_result.k_history[1:])
    assert all(row[3] < 1e-7 for row in scan_result.k_history)


def test_scan_history_is_monotone(scan_result):
    rows = sorted(scan_result.k_history, key=lambda r: r[0])
    ks = [row[1] for row in rows]
    assert all(k2 > k1 for k1, k2 in zip(ks, ks[1:]))
    assert scan_result.warnings == []


def test_scan_report_is_consistent(scan_result):
    rep = scan_result.report
    assert rep is not None
    assert rep.a == scan_result.a0
    assert rep.T == pytest.approx(1.371296, abs=2e-5)
    assert rep.Pi == pytest.approx(0.593021, abs=2e-5)
    assert rep.E0_over_m0 == pytest.approx(0.158550, abs=2e-5)
    assert rep.e_times_e0 == pytest.approx(4.0 * np.pi * scan_result.a0, rel=1e-12)


def test_extremum_condition_holds(scan_result, grid):
    mismatch = verify_extremum(scan_result, grid)
    assert mismatch < 1e-3
    # a deliberately shifted coupling must degrade the check
    shifted = ScanResult(
        a0=scan_result.a0 * 1.05,
        solution=scan_result.solution,
        k_history=scan_result.k_history,
    )
    assert verify_extremum(shifted, grid) > 0.01


def test_extremum_arithmetic(monkeypatch, grid):
    # pinned numbers: T / Pi reproduces -a0 when the pair is extremal
    monkeypatch.setattr("solitonscf.scan.kinetic_T", lambda pair, g: 0.749)
    monkeypatch.setattr("solitonscf.scan.potential_Pi", lambda pair, g: 0.22724)
    fake = SimpleNamespace(a0=-3.296, solution=SimpleNamespace(pair=None))
    mismatch = verify_extremum(fake, grid)
    assert mismatch == pytest.approx(abs(-3.296 + 0.749 / 0.22724) / 3.296, rel=1e-12)
    assert mismatch < 1e-3


def test_scan_path_independence(coarse_grid):
    cfg_a = ScanConfig(a_start=-3.3, delta_a=0.05)
    cfg_b = ScanConfig(a_start=-2.0, delta_a=-0.05)
    res_a = find_a0(cfg_a, coarse_grid)
    res_b = find_a0(cfg_b, coarse_grid)
    assert res_a.a0 == pytest.approx(res_b.a0, abs=1e-5)


# ---------------------------------------------------------------------------
# root finder in isolation (stubbed inner solver)


def _stub_solver(a0_true):
    def stub(a, grid, config=None, init=None, k0=1.0):
        k = float(np.sqrt(a0_true / a))
        return SimpleNamespace(k=k, iteration=1, residual_norm=0.0, pair=init)

    return stub


def test_secant_on_synthetic_frequency(monkeypatch, coarse_grid):
    monkeypatch.setattr("solitonscf.scan.solve_fixed_a", _stub_solver(-2.5))
    result = find_a0(ScanConfig(), coarse_grid)
    assert result.a0 == pytest.approx(-2.5, abs=1e-5)
    assert len(result.k_history) <= 12
    assert all(len(row) == 4 for row in result.k_history)


def test_secant_from_the_other_side(monkeypatch, coarse_grid):
    monkeypatch.setattr("solitonscf.scan.solve_fixed_a", _stub_solver(-2.5))
    result = find_a0(ScanConfig(a_start=-1.5, delta_a=-0.1), coarse_grid)
    assert result.a0 == pytest.approx(-2.5, abs=1e-5)


def test_scan_failure_carries_history(monkeypatch, coarse_grid):
    def always_diverges(a, grid, config=None, init=None, k0=1.0):
        raise DivergenceError("synthetic failure")

    monkeypatch.setattr("solitonscf.scan.solve_fixed_a", always_diverges)
    with pytest.raises(ScanFailureError) as info:
        find_a0(ScanConfig(), coarse_grid)
    assert info.value.k_history == []


def test_scan_stalls_on_flat_frequency(monkeypatch, coarse_grid):
    def flat(a, grid, config=None, init=None, k0=1.0):
        return SimpleNamespace(k=2.0, iteration=1, residual_norm=0.0, pair=init)

    monkeypatch.setattr("solitonscf.scan.solve_fixed_a", flat)
    with pytest.raises(ScanFailureError) as info:
        find_a0(ScanConfig(), coarse_grid)
    assert len(info.value.k_history) == 2


def test_scan_eval_cap(coarse_grid):
    cfg = ScanConfig(max_evals=2, tol_k=1e-14)
    with pytest.raises(ScanFailureError) as info:
        find_a0(cfg, coarse_grid, solver_config=SolverConfig())
    assert len(info.value.k_history) == 2


# ---------------------------------------------------------------------------
# configuration


@pytest.mark.parametrize(
    "kwargs",
    [
        {"a_start": 1.0},
        {"a_start": np.nan},
        {"delta_a": 0.0},
        {"tol_k": 0.0},
        {"max_evals": 1},
    ],
)
def test_scan_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        ScanConfig(**kwargs).validate()


def test_find_a0_requires_grid():
    with pytest.raises(ConfigurationError):
        find_a0(ScanConfig())
