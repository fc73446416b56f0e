"""Figure data: success-probability sweeps and threshold curves, plus their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import analytic
from .density import success_probability_full
from .factorized import success_probability_factorized
from .hidden import HiddenString
from .matrix import MAX_QUBITS
from .montecarlo import TrajectoryConfig, estimate_success

SWEEP_HEADER = ("n", "p", "analytic", "full_sim", "factorized", "mc_estimate", "mc_stderr", "log2_prob")
THRESHOLD_HEADER = ("n", "p_star_bisection", "p_star_closed_form", "p_approx", "residual")

# Grids for the p-sweeps are a choice, not tabulated data.
SWEEP_P_N_LIST = (1, 2, 5, 10, 20)
LOW_NOISE_N_LIST = (1, 5, 10, 100, 1000)
LOW_NOISE_P_MAX = 0.01
SWEEP_N_P_LIST = (0.001, 0.01, 0.1)


@dataclass(frozen=True)
class SweepRecord:
    n: int
    p: float
    analytic: float
    full_sim: float | None
    factorized: float
    mc_estimate: float | None
    mc_stderr: float | None
    log2_prob: float

    def check_agreement(self, tol: float = 1e-10) -> list[str]:
        """Names of column pairs that disagree beyond ``max(tol, 4 stderr)``."""
        bad = []
        if abs(self.factorized - self.analytic) > tol:
            bad.append("factorized/analytic")
        if self.full_sim is not None and abs(self.full_sim - self.analytic) > tol:
            bad.append("full_sim/analytic")
        if self.mc_estimate is not None:
            bound = max(tol, 4.0 * (self.mc_stderr or 0.0))
            if abs(self.mc_estimate - self.analytic) > bound:
                bad.append("mc_estimate/analytic")
        return bad


@dataclass(frozen=True)
class ThresholdRow:
    n: int
    p_star_bisection: float
    p_star_closed_form: float
    p_approx: float
    residual: float


def format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def write_csv(rows: Iterable, header: Sequence[str], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in astuple(row)])


def to_csv(rows: Iterable, header: Sequence[str]) -> str:
    buf = io.StringIO()
    write_csv(rows, header, buf)
    return buf.getvalue()


def _parse_field(text: str, kind):
    if text == "":
        return None
    return int(text) if kind is int else float(text)


def read_csv(text: str, row_type=SweepRecord) -> list:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    expected = tuple(f.name for f in fields(row_type))
    if header != expected:
        raise ValueError(f"unexpected CSV header {header}")
    kinds = [int if f.name == "n" else float for f in fields(row_type)]
    return [row_type(*(_parse_field(t, k) for t, k in zip(row, kinds))) for row in reader]


def hidden_string_for(n: int, s: HiddenString | None, rng: np.random.Generator | None) -> HiddenString:
    if s is not None:
        return s
    if rng is not None:
        return HiddenString.random(n, rng)
    return HiddenString.ones(n)


def sweep_record(
    s: HiddenString,
    p: float,
    *,
    full: bool = False,
    shots: int | None = None,
    seed: int = 0,
) -> SweepRecord:
    """One grid point. ``full`` adds the density-matrix column where ``n`` allows it."""
    exact = analytic.success_probability(s.n, p)
    fact = success_probability_factorized(s, p)
    full_sim = success_probability_full(s, p) if full and s.n <= MAX_QUBITS else None
    mc_est = mc_err = None
    if shots is not None:
        est = estimate_success(TrajectoryConfig(s, p, shots, seed))
        mc_est, mc_err = est.estimate, est.stderr
    return SweepRecord(s.n, p, exact.prob, full_sim, fact.prob, mc_est, mc_err, exact.log2_prob)


def p_grid(p_min: float, p_max: float, steps: int) -> list[float]:
    if steps < 2:
        raise ValueError("a p-range needs at least 2 steps")
    if not 0.0 <= p_min < p_max <= 1.0:
        raise ValueError(f"need 0 <= p_min < p_max <= 1, got {p_min}, {p_max}")
    return [float(p) for p in np.linspace(p_min, p_max, steps)]


def sweep(
    n_values: Sequence[int],
    p_values: Sequence[float],
    *,
    s: HiddenString | None = None,
    rng: np.random.Generator | None = None,
    full: bool = False,
    shots: int | None = None,
    seed: int = 0,
) -> list[SweepRecord]:
    """Records for every ``(n, p)`` pair, sorted by ``(n, p)``."""
    records = []
    for n in sorted(set(n_values)):
        hidden = hidden_string_for(n, s, rng)
        for p in sorted(set(p_values)):
            records.append(sweep_record(hidden, p, full=full, shots=shots, seed=seed))
    return records


def threshold_rows(n_max: int, target: float = analytic.DEFAULT_TARGET) -> list[ThresholdRow]:
    """Threshold curve for ``n = 1..n_max``; qubit counts where ``target <= 2^-n`` are skipped."""
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    rows = []
    for n in range(1, n_max + 1):
        if target <= 0.5**n:
            continue
        res = analytic.threshold_p(n, target)
        rows.append(
            ThresholdRow(
                n,
                res.p_star,
                analytic.threshold_closed_form(n, target),
                analytic.threshold_small_p_approx(n, target),
                res.residual,
            )
        )
    return rows
