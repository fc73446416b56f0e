"""Cross-backend verification checks run by the ``verify`` subcommand."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic
from .density import (
    DensityMatrix,
    apply_depolarizing,
    apply_depolarizing_mixture,
    bv_stages,
    outcome_distribution,
    run_bv_full,
)
from .factorized import full_state_from_factors, qubit_success_factor, success_probability_factorized
from .hidden import HiddenString
from .matrix import PAULIS
from .montecarlo import TrajectoryConfig, estimate_success

P_GRID = (0.0, 0.001, 0.01, 0.1, 0.3, 0.7, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.detail}"


@dataclass(frozen=True)
class VerifyConfig:
    n_max: int = 6
    tolerance: float = 1e-10
    shots: int = 100_000
    seed: int = 0
    cases: int = 24


def random_density(n: int, rng: np.random.Generator) -> DensityMatrix:
    dim = 2**n
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(n, rho / np.trace(rho))


def check_alpha_beta_identity(cfg: VerifyConfig, rng) -> CheckResult:
    ps = np.linspace(0.0, 1.0, 1001)
    err = max(abs(analytic.NoiseParams(p).qubit_factor - (1.0 + (1.0 - p) ** 3) / 2.0) for p in ps)
    return CheckResult("alpha_beta_identity", err <= 1e-14, f"max_err={err:.3e}")


def check_kraus_vs_mixture(cfg: VerifyConfig, rng) -> CheckResult:
    err = 0.0
    for n in (1, 2, 3):
        rho = random_density(n, rng)
        for q in range(1, n + 1):
            for p in P_GRID:
                a = apply_depolarizing(rho, q, p).mat
                b = apply_depolarizing_mixture(rho, q, p).mat
                err = max(err, float(np.max(np.abs(a - b))))
    return CheckResult("kraus_vs_mixture", err <= 1e-12, f"max_err={err:.3e}")


def check_twirl_identity(cfg: VerifyConfig, rng) -> CheckResult:
    err = 0.0
    for _ in range(10):
        rho = random_density(1, rng).mat
        for p in P_GRID:
            w = (1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
            twirled = sum(wk * P @ rho @ P for wk, P in zip(w, PAULIS))
            target = (1 - p) * rho + p * np.eye(2) / 2
            err = max(err, float(np.max(np.abs(twirled - target))))
    return CheckResult("twirl_identity", err <= 1e-12, f"max_err={err:.3e}")


def check_noiseless(cfg: VerifyConfig, rng) -> CheckResult:
    worst = 0.0
    for n in range(1, cfg.n_max + 1):
        for _ in range(3):
            s = HiddenString.random(n, rng)
            probs = outcome_distribution(run_bv_full(s, 0.0))
            expected = np.zeros(2**n)
            expected[s.basis_index] = 1.0
            worst = max(worst, float(np.max(np.abs(probs - expected))))
            worst = max(worst, abs(success_probability_factorized(s, 0.0).prob - 1.0))
    return CheckResult("noiseless_exact", worst <= 1e-12, f"max_err={worst:.3e}")


def check_full_vs_factorized(cfg: VerifyConfig, rng) -> CheckResult:
    worst = 0.0
    for _ in range(cfg.cases):
        n = int(rng.integers(1, cfg.n_max + 1))
        s = HiddenString.random(n, rng)
        p = float(rng.choice([rng.uniform(), *P_GRID]))
        diff = run_bv_full(s, p).mat - full_state_from_factors(s, p).mat
        worst = max(worst, float(np.linalg.norm(diff)))
    return CheckResult(
        "full_vs_factorized", worst <= cfg.tolerance, f"cases={cfg.cases} max_frobenius={worst:.3e}"
    )


def check_full_vs_analytic(cfg: VerifyConfig, rng) -> CheckResult:
    worst = 0.0
    for n in range(1, cfg.n_max + 1):
        s = HiddenString.random(n, rng)
        for p in P_GRID:
            rho = run_bv_full(s, p)
            full = float(rho.mat[s.basis_index, s.basis_index].real)
            worst = max(worst, abs(full - analytic.success_probability(n, p).prob))
    return CheckResult("full_vs_analytic", worst <= cfg.tolerance, f"max_err={worst:.3e}")


def check_factorized_vs_analytic(cfg: VerifyConfig, rng) -> CheckResult:
    worst = 0.0
    for n in (1, 2, 7, 64, 513, 1000):
        s = HiddenString.random(n, rng)
        for p in (*P_GRID, 0.005):
            a = analytic.success_probability(n, p)
            f = success_probability_factorized(s, p)
            worst = max(worst, abs(f.log2_prob - a.log2_prob) / max(1.0, abs(a.log2_prob)))
            worst = max(worst, abs(f.prob - a.prob) / a.prob)
    return CheckResult("factorized_vs_analytic", worst <= 1e-12, f"max_rel_err={worst:.3e}")


def check_qubit_factor_symmetry(cfg: VerifyConfig, rng) -> CheckResult:
    err = max(abs(qubit_success_factor(0, p) - qubit_success_factor(1, p)) for p in np.linspace(0, 1, 101))
    return CheckResult("qubit_factor_symmetry", err <= 1e-12, f"max_err={err:.3e}")


def check_max_noise(cfg: VerifyConfig, rng) -> CheckResult:
    worst = 0.0
    for n in range(1, cfg.n_max + 1):
        s = HiddenString.random(n, rng)
        probs = outcome_distribution(run_bv_full(s, 1.0))
        worst = max(worst, float(np.max(np.abs(probs - 0.5**n))))
        worst = max(worst, abs(success_probability_factorized(s, 1.0).prob - 0.5**n))
        worst = max(worst, abs(analytic.success_probability(n, 1.0).prob - 0.5**n))
    return CheckResult("max_noise_limit", worst <= 1e-12, f"max_err={worst:.3e}")


def check_stage_validity(cfg: VerifyConfig, rng) -> CheckResult:
    failures = []
    n = min(cfg.n_max, 4)
    s = HiddenString.random(n, rng)
    for p in (0.0, 0.1, 0.7):
        for label, rho in bv_stages(s, p):
            report = rho.validate()
            imag = float(np.max(np.abs(np.diag(rho.mat).imag)))
            if not report.ok or imag > 1e-12:
                failures.append(f"{label}@p={p}")
    detail = "stages=ok" if not failures else "bad=" + ",".join(failures)
    return CheckResult("stage_validity", not failures, detail)


def check_threshold(cfg: VerifyConfig, rng) -> CheckResult:
    worst_gap = worst_res = 0.0
    for n in (1, 2, 5, 10, 100, 1000):
        res = analytic.threshold_p(n)
        worst_gap = max(worst_gap, abs(res.p_star - analytic.threshold_closed_form(n)))
        worst_res = max(worst_res, res.residual)
    ok = worst_gap <= 1e-10 and worst_res <= 1e-10
    return CheckResult("threshold_bisection", ok, f"max_gap={worst_gap:.3e} max_residual={worst_res:.3e}")


def check_monte_carlo(cfg: VerifyConfig, rng) -> CheckResult:
    s = HiddenString.ones(3)
    est = estimate_success(TrajectoryConfig(s, 0.1, cfg.shots, cfg.seed))
    exact = analytic.success_probability(3, 0.1).prob
    z = abs(est.estimate - exact) / est.stderr if est.stderr > 0 else math.inf
    return CheckResult(
        "monte_carlo_consistency",
        z <= 4.0,
        f"estimate={est.estimate:.6f} analytic={exact:.6f} z={z:.2f}",
    )


CHECKS: tuple[Callable[[VerifyConfig, np.random.Generator], CheckResult], ...] = (
    check_alpha_beta_identity,
    check_kraus_vs_mixture,
    check_twirl_identity,
    check_noiseless,
    check_full_vs_factorized,
    check_full_vs_analytic,
    check_factorized_vs_analytic,
    check_qubit_factor_symmetry,
    check_max_noise,
    check_stage_validity,
    check_threshold,
    check_monte_carlo,
)


def run_checks(cfg: VerifyConfig) -> list[CheckResult]:
    rng = np.random.default_rng(cfg.seed)
    return [check(cfg, rng) for check in CHECKS]
