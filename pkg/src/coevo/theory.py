"""Closed-form runtime bounds, the mutation-rate recipes, and numeric
checkers for the standalone inequalities behind them.

All calculators are pure arithmetic: same inputs give bit-identical outputs.
Each returns the bound value together with a per-term breakdown so report
tables can compare empirical quantiles against individual terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import spawn_stream

DEFAULT_CHECK_SEED = 20260808


@dataclass(frozen=True)
class BoundInputs:
    """Inputs to the bound calculators.

    m, lam, delta, z, c_pp feed the generic level-process bound; the
    remaining fields are needed only for the concrete bilinear budget.
    """

    m: int
    lam: int
    delta: float
    z: tuple = ()
    c_pp: float = 1.000001
    n: Optional[int] = None
    chi: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    epsilon: Optional[float] = None
    r: Optional[float] = None

    def __post_init__(self):
        if self.m < 1 or self.lam < 1:
            raise ValueError("m and lambda must be positive integers")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")
        if self.c_pp <= 1.0:
            raise ValueError(f"c'' must exceed 1, got {self.c_pp}")


@dataclass(frozen=True)
class BoundValue:
    """A bound with its multiplicative prefactor and additive terms."""

    value: float
    prefactor: float
    terms: dict


def level_process_bound(b: BoundInputs) -> BoundValue:
    """Generic expected-runtime bound (c''*lambda/delta)*(m*lambda^2 + 16*sum 1/z_i).

    z must hold the m-1 per-level floors (empty for m = 1, where the bound
    collapses to c''*lambda^3/delta).
    """
    if len(b.z) != b.m - 1:
        raise ValueError(f"need m-1 = {b.m - 1} z values, got {len(b.z)}")
    if any(zi <= 0 for zi in b.z):
        raise ValueError("every z_i must be positive")
    prefactor = b.c_pp * b.lam / b.delta
    level_term = b.m * b.lam**2
    upgrade_term = 16.0 * sum(1.0 / zi for zi in b.z)
    return BoundValue(
        value=prefactor * (level_term + upgrade_term),
        prefactor=prefactor,
        terms={"level_term": float(level_term), "upgrade_term": upgrade_term},
    )


def recipe_mutation_rate(delta: float) -> float:
    """Mutation-rate recipe chi = (1/2) ln(42 / (41 (1 + delta))).

    Positive exactly on delta in (0, 1/41).
    """
    if not 0.0 < delta < 1.0 / 41.0:
        raise ValueError(f"delta must be in (0, 1/41), got {delta}")
    return 0.5 * math.log(42.0 / (41.0 * (1.0 + delta)))


def chi_slack(chi: float) -> float:
    """Slack delta implied by a mutation rate: delta = (42/41) e^(-2 chi) - 1."""
    return (42.0 / 41.0) * math.exp(-2.0 * chi) - 1.0


def solvable_regime_budget(b: BoundInputs) -> BoundValue:
    """Interaction budget 2*r*c''*lambda/delta * (lambda^2 n + (23 n / chi) ln(1/(beta(1-alpha+epsilon)))).

    delta is derived from chi via `chi_slack` (the inverse of the chi
    recipe).  A run exceeds this budget with probability at most (1/r) up to
    lower-order terms; the calculator exposes only the explicit leading
    expression.
    """
    for name in ("n", "chi", "alpha", "beta", "epsilon", "r"):
        if getattr(b, name) is None:
            raise ValueError(f"solvable_regime_budget needs field {name!r}")
    delta = chi_slack(b.chi)
    if delta <= 0:
        raise ValueError(f"chi={b.chi} too large: implied slack delta={delta} is not positive")
    shrink = b.beta * (1.0 - b.alpha + b.epsilon)
    if not 0.0 < shrink < 1.0:
        raise ValueError(f"beta*(1-alpha+epsilon) = {shrink} must lie in (0, 1)")
    prefactor = 2.0 * b.r * b.c_pp * b.lam / delta
    pop_term = float(b.lam**2 * b.n)
    mutation_term = (23.0 * b.n / b.chi) * math.log(1.0 / shrink)
    return BoundValue(
        value=prefactor * (pop_term + mutation_term),
        prefactor=prefactor,
        terms={"pop_term": pop_term, "mutation_term": mutation_term, "delta": delta},
    )


def error_threshold(delta: float) -> float:
    """Mutation rate ln(2)/(1 - 2*delta) above which runs need exponential time."""
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must be in (0, 1/2), got {delta}")
    return math.log(2.0) / (1.0 - 2.0 * delta)


# ---------------------------------------------------------------------------
# Inequality checkers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))


_FLOAT_SLACK = 1e-12  # absorbs rounding on mathematically non-strict bounds


def check_sqrt_bound(points: int = 1000) -> CheckResult:
    """Grid check of (3d-4d1)/11 < 1 - sqrt((1+d1)/(1+d)) < (4d-3d1)/8.

    Dense grid over d in (0, 1) and d1 in [0, d), points x points values.
    """
    d = (np.arange(points, dtype=np.float64) + 1.0) / (points + 1)
    frac = np.arange(points, dtype=np.float64) / points
    dd = d[:, None]
    d1 = dd * frac[None, :]
    mid = 1.0 - np.sqrt((1.0 + d1) / (1.0 + dd))
    lower = (3.0 * dd - 4.0 * d1) / 11.0
    upper = (4.0 * dd - 3.0 * d1) / 8.0
    bad = int((lower >= mid).sum() + (mid >= upper).sum())
    return CheckResult(
        "sqrt-sandwich",
        bad == 0,
        f"{points * points} grid points, {bad} violations",
    )


def check_exp_lower_bound(points: int = 400) -> CheckResult:
    """Grid check of 1-(1-x)^n >= 1-e^(-xn) >= xn/(1+xn) for x >= 0."""
    x = np.linspace(0.0, 1.0, points + 1)
    bad = 0
    total = 0
    for n in (1, 2, 3, 5, 8, 13, 21, 34, 55, 100):
        lhs = 1.0 - (1.0 - x) ** n
        mid = 1.0 - np.exp(-x * n)
        rhs = x * n / (1.0 + x * n)
        bad += int((lhs < mid - _FLOAT_SLACK).sum() + (mid < rhs - _FLOAT_SLACK).sum())
        total += 2 * x.size
    return CheckResult("exp-lower-bound", bad == 0, f"{total} comparisons, {bad} violations")


def check_product_mgf(samples: int = 1_000_000, seed: int = DEFAULT_CHECK_SEED) -> CheckResult:
    """Monte Carlo check of E[exp(-eta X Y)] <= exp(-eta z lambda^2).

    X, Y are independent binomials with p*q >= (1+sigma)^2 z and eta at its
    admissible maximum sigma/((1+sigma)*lambda); a configuration fails only
    if the empirical mean exceeds the bound by more than 6 standard errors.
    """
    configs = [
        (20, 0.9, 0.9, 0.5),
        (10, 0.8, 0.9, 0.4),
        (30, 0.7, 0.8, 0.3),
        (15, 0.95, 0.6, 0.4),
    ]
    lines = []
    ok = True
    for i, (lam, p, q, z) in enumerate(configs):
        rng = spawn_stream(seed, i)
        sigma = math.sqrt(p * q / z) - 1.0
        eta = sigma / ((1.0 + sigma) * lam)
        x = rng.binomial(lam, p, size=samples)
        y = rng.binomial(lam, q, size=samples)
        vals = np.exp(-eta * x.astype(np.float64) * y)
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(samples))
        bound = math.exp(-eta * z * lam * lam)
        good = mean <= bound + 6.0 * se
        ok &= good
        lines.append(f"lam={lam} p={p} q={q} z={z}: mean={mean:.6g} bound={bound:.6g} se={se:.2g}")
    return CheckResult("product-mgf", ok, "; ".join(lines))


def check_inequality_lemmas(samples: int = 1_000_000,
                            seed: int = DEFAULT_CHECK_SEED) -> list[CheckResult]:
    """Run the full standalone-inequality suite; any violation is reported."""
    return [
        check_sqrt_bound(),
        check_exp_lower_bound(),
        check_product_mgf(samples=samples, seed=seed),
    ]
