"""The two-parameter bilinear game on bitstrings and its dominance structure.

The payoff of predator x against prey y is

    payoff(x, y) = ||y|| * (||x|| - beta*n) - alpha*n * ||x||

which depends on the genomes only through their one-counts.  Predators
maximise, prey minimise; the saddle sits at (||x||, ||y||) = (beta*n, alpha*n)
and an epsilon-approximation is declared once some predator has fewer than
beta*n ones while some prey holds at least (alpha - epsilon)*n but fewer than
alpha*n ones.

Dominance between pairs:  (x1, y1) dominates (x2, y2) iff

    payoff(x1, y2) >= payoff(x1, y1) >= payoff(x2, y1),

with ties counting as dominance.  The relation is reflexive, antisymmetric in
the strict sense, and intransitive (four-cycles exist near the saddle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BitVector, PairedPopulations, ones


def _snap(x: float) -> float:
    """Snap near-integer products like alpha*n to the intended integer.

    The harness keeps alpha, beta, epsilon on the 1/n grid so these products
    are mathematically integral; snapping removes float noise that would
    otherwise flip strict region comparisons.
    """
    r = round(x)
    return float(r) if abs(x - r) < 1e-9 else float(x)


@dataclass(frozen=True)
class BilinearParams:
    """Game instance: genome length n, slopes alpha/beta, approximation slack."""

    n: int
    alpha: float
    beta: float
    epsilon: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if self.epsilon < 1.0 / self.n:
            raise ValueError(f"epsilon must be >= 1/n = {1.0 / self.n}, got {self.epsilon}")

    @property
    def alpha_n(self) -> float:
        return _snap(self.alpha * self.n)

    @property
    def beta_n(self) -> float:
        return _snap(self.beta * self.n)

    @property
    def target_lo(self) -> float:
        """Lower one-count edge (alpha - epsilon)*n of the prey target band."""
        return _snap((self.alpha - self.epsilon) * self.n)

    @property
    def solvable_regime(self) -> bool:
        """True when alpha - epsilon >= 4/5 and beta < epsilon (checked, not forced)."""
        return self.alpha - self.epsilon >= 0.8 - 1e-12 and self.beta < self.epsilon


def payoff_by_onecounts(cx, cy, params: BilinearParams):
    """Payoff from one-counts alone; accepts scalars or numpy arrays."""
    return cy * (cx - params.beta_n) - params.alpha_n * cx


def payoff(x: BitVector, y: BitVector, params: BilinearParams) -> float:
    if x.n != params.n or y.n != params.n:
        raise ValueError(f"genome lengths ({x.n}, {y.n}) do not match game n={params.n}")
    return float(payoff_by_onecounts(ones(x), ones(y), params))


def worst_case_f(x: BitVector, params: BilinearParams) -> float:
    """min over all prey y of payoff(x, y).

    The payoff is linear in ||y||, so the adversary plays ||y|| = n when
    ||x|| < beta*n and ||y|| = 0 when ||x|| > beta*n; at the kink both
    endpoints tie.  The value is unimodal in ||x|| with maximum at beta*n.
    """
    if x.n != params.n:
        raise ValueError(f"genome length {x.n} does not match game n={params.n}")
    c = ones(x)
    return float(min(payoff_by_onecounts(c, params.n, params), payoff_by_onecounts(c, 0, params)))


def dominates(x1: BitVector, y1: BitVector, x2: BitVector, y2: BitVector,
              params: BilinearParams) -> bool:
    """Pair (x1, y1) dominates (x2, y2): both payoff inequalities, ties allowed."""
    g12 = payoff(x1, y2, params)
    g11 = payoff(x1, y1, params)
    g21 = payoff(x2, y1, params)
    return g12 >= g11 >= g21


def dominates_by_onecounts(cx1: int, cy1: int, cx2: int, cy2: int,
                           params: BilinearParams) -> bool:
    """Dominance evaluated directly on one-counts.

    Equivalent to `dominates` for all inputs; this route factors the payoff
    differences instead of evaluating payoffs, so the two functions serve as
    independent cross-checks of each other.
    """
    n = params.n
    for c in (cx1, cy1, cx2, cy2):
        if not 0 <= c <= n:
            raise ValueError(f"one-count {c} out of range [0, {n}]")
    first = cy2 * (cx1 - params.beta_n) >= cy1 * (cx1 - params.beta_n)
    second = cx1 * (cy1 - params.alpha_n) >= cx2 * (cy1 - params.alpha_n)
    return bool(first and second)


def _dominates_counts_arrays(cx1, cy1, cx2, cy2, params: BilinearParams):
    """Vectorised Definition-2 dominance on one-count arrays (no validation)."""
    g12 = payoff_by_onecounts(cx1, cy2, params)
    g11 = payoff_by_onecounts(cx1, cy1, params)
    g21 = payoff_by_onecounts(cx2, cy1, params)
    return (g12 >= g11) & (g11 >= g21)


class BilinearGame:
    """Dominance oracle for the bilinear payoff, pluggable into the engine.

    `dominates_counts` is the vectorised fast path the engine prefers when a
    game's payoff is one-count determined; `dominates` is the generic pair
    interface.
    """

    def __init__(self, params: BilinearParams):
        self.params = params

    def dominates(self, x1, y1, x2, y2) -> bool:
        return dominates(x1, y1, x2, y2, self.params)

    def dominates_counts(self, cx1, cy1, cx2, cy2):
        return _dominates_counts_arrays(cx1, cy1, cx2, cy2, self.params)


# ---------------------------------------------------------------------------
# Region partition of the one-count plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Membership tag for the three-way predator (R) or prey (S) partition."""

    tag: str
    threshold: int


def classify_predator(x: BitVector, k: int, params: BilinearParams) -> Region:
    """R0: ||x|| < beta*n;  R1(k): beta*n <= ||x|| < n-k;  R2(k): ||x|| >= n-k."""
    if not 0 <= k <= (1.0 - params.beta) * params.n + 1e-9:
        raise ValueError(f"k={k} outside [0, (1-beta)n = {(1 - params.beta) * params.n}]")
    c = ones(x)
    if c < params.beta_n:
        return Region("R0", k)
    if c < params.n - k:
        return Region("R1", k)
    return Region("R2", k)


def classify_prey(y: BitVector, l: int, params: BilinearParams) -> Region:
    """S0: ||y|| >= alpha*n;  S1(l): l <= ||y|| < alpha*n;  S2(l): ||y|| < l."""
    if not 0 <= l < params.alpha_n:
        raise ValueError(f"l={l} outside [0, alpha*n = {params.alpha_n})")
    c = ones(y)
    if c >= params.alpha_n:
        return Region("S0", l)
    if c >= l:
        return Region("S1", l)
    return Region("S2", l)


def target_hit(pops: PairedPopulations, params: BilinearParams) -> bool:
    """Some predator in R0 and some prey in S1((alpha-epsilon)*n).

    This is the epsilon-approximation of the saddle; O(lambda) on one-counts.
    """
    if pops.n != params.n:
        raise ValueError(f"population n={pops.n} does not match game n={params.n}")
    pred_hit = bool((pops.predators.ones < params.beta_n).any())
    if not pred_hit:
        return False
    cy = pops.prey.ones
    return bool(((cy >= params.target_lo) & (cy < params.alpha_n)).any())


def bilinear_target(params: BilinearParams):
    """Target predicate closure over `target_hit` for run configurations."""

    def predicate(pops: PairedPopulations) -> bool:
        return target_hit(pops, params)

    predicate.__name__ = f"bilinear_target_a{params.alpha}_b{params.beta}_e{params.epsilon}"
    return predicate


# ---------------------------------------------------------------------------
# Intransitivity witness
# ---------------------------------------------------------------------------

def _dominance_digraph(points, params):
    cx = np.array([p[0] for p in points])
    cy = np.array([p[1] for p in points])
    return _dominates_counts_arrays(cx[:, None], cy[:, None], cx[None, :], cy[None, :], params)


def _find_cycle(points, dom):
    npts = len(points)
    succ = [np.nonzero(dom[a])[0] for a in range(npts)]
    for a in range(npts):
        for b in succ[a]:
            if b == a:
                continue
            for c in succ[b]:
                if c == a or c == b or dom[a, c] or dom[c, a]:
                    continue
                for d in succ[c]:
                    if d in (a, b, c) or not dom[d, a] or dom[b, d] or dom[d, b]:
                        continue
                    return points[a], points[b], points[c], points[d]
    return None


def intransitivity_witness(params: BilinearParams, radius: int = 3):
    """Search for a dominance 4-cycle q1 > q2 > q3 > q4 > q1 of one-count pairs.

    The returned cycle has no chords: no element dominates (or is dominated
    by) the one two steps back, which witnesses intransitivity.  The search
    scans the (beta*n, alpha*n) neighbourhood first, where such cycles live,
    then falls back to the full one-count grid.  Returns None only if the
    exhaustive search finds nothing.
    """
    n = params.n
    cbx, cby = int(round(params.beta_n)), int(round(params.alpha_n))
    window = [
        (cx, cy)
        for cx in range(max(0, cbx - radius), min(n, cbx + radius) + 1)
        for cy in range(max(0, cby - radius), min(n, cby + radius) + 1)
    ]
    found = _find_cycle(window, _dominance_digraph(window, params))
    if found is not None:
        return found
    full = [(cx, cy) for cx in range(n + 1) for cy in range(n + 1)]
    return _find_cycle(full, _dominance_digraph(full, params))
