"""Experiment orchestration and verification suites.

Experiments are driven by a flat ExperimentSpec (parameter grids, trial
count, master seed, budget rule) and produce a ResultTable whose rows are
canonically sorted, so output is byte-identical regardless of worker count.
Every work unit (cell, trial) draws its seed from the master seed and its
global unit index, which makes sweeps reproducible and embarrassingly
parallel.

Persistence: UTF-8 CSV with a '#'-prefixed header block (spec echo, master
seed, schema version) plus a JSON sidecar holding per-cell aggregates.  The
wall_ms column is the only field exempt from determinism.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product

import numpy as np

from . import theory
from .bilinear import (
    BilinearGame,
    BilinearParams,
    dominates,
    dominates_by_onecounts,
    intransitivity_witness,
    payoff_by_onecounts,
)
from .core import BitVector, PairedPopulations, Population, derive_seed, spawn_stream
from .levels import (
    LevelFunctionParams,
    build_bilinear_levels,
    check_growth_lemmas,
    current_level,
    eta_window,
    half_prob_conditionals,
    reference_g1_g2,
    validate_level_function,
    _psel_counts,
)
from .pdcoea import PdcoeaConfig, PdcoeaDistribution, run_trial, singleton_target, step_generation
from .theory import CheckResult

SCHEMA_VERSION = 1
GAMMA0_DEFAULT = 9.0 / 25.0
PILOT_STREAM_OFFSET = 1_000_000_007  # pilot seeds never collide with trial units

CSV_COLUMNS = (
    "kind", "n", "lambda", "chi", "alpha", "beta", "epsilon", "delta", "r",
    "trial", "seed", "hit", "T_interactions", "generations", "wall_ms",
)

EXPERIMENT_KINDS = ("runtime-scaling", "error-threshold", "trajectory", "lemma-checks", "bound-table")


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentSpec:
    """Grid experiment description; every cell is fully determined by the
    spec plus its cell and trial indices."""

    kind: str
    n: tuple = (100,)
    lam: tuple = (100,)
    chi: tuple = ("auto",)        # floats, or "auto" = recipe chi at `delta`
    alpha: tuple = (0.9,)
    beta: tuple = (0.05,)
    epsilon: tuple = (0.1,)
    r: tuple = (1.0,)
    delta: float = 0.01           # slack used when chi = "auto"
    trials: int = 10
    master_seed: int = 1
    budget: object = "pilot"      # generations, "pilot", or "bound:<factor>"
    target: str = "bilinear"      # "bilinear" or "singleton"
    gamma0: float = GAMMA0_DEFAULT
    out: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS and self.kind != "sweep":
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.target not in ("bilinear", "singleton"):
            raise ValueError(f"unknown target {self.target!r}")


@dataclass(frozen=True)
class Cell:
    n: int
    lam: int
    chi: float
    alpha: float
    beta: float
    epsilon: float
    r: float
    delta: float | None  # slack behind an "auto" chi, None for explicit chi


def resolve_cells(spec: ExperimentSpec) -> list[Cell]:
    cells = []
    for n, lam, chi, alpha, beta, eps, r in product(
        spec.n, spec.lam, spec.chi, spec.alpha, spec.beta, spec.epsilon, spec.r
    ):
        if chi == "auto":
            cells.append(Cell(int(n), int(lam), theory.recipe_mutation_rate(spec.delta),
                              float(alpha), float(beta), float(eps), float(r), spec.delta))
        else:
            cells.append(Cell(int(n), int(lam), float(chi),
                              float(alpha), float(beta), float(eps), float(r), None))
    return cells


def _parse_value(text: str):
    text = text.strip()
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_spec_file(path: str) -> ExperimentSpec:
    """Flat key = value format; comma lists give grids, '#' starts a comment.

    Keys: kind, n, lambda, chi, delta, alpha, beta, epsilon, r, trials,
    seed, budget, target, gamma0, out.
    """
    grids = {"n": "n", "lambda": "lam", "chi": "chi", "alpha": "alpha",
             "beta": "beta", "epsilon": "epsilon", "r": "r"}
    scalars = {"kind": "kind", "delta": "delta", "trials": "trials",
               "seed": "master_seed", "target": "target", "gamma0": "gamma0", "out": "out"}
    kwargs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in grids:
                kwargs[grids[key]] = tuple(_parse_value(v) for v in value.split(","))
            elif key in scalars:
                kwargs[scalars[key]] = _parse_value(value)
            elif key == "budget":
                kwargs["budget"] = _parse_value(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if "kind" not in kwargs:
        raise ValueError(f"{path}: spec must set 'kind'")
    return ExperimentSpec(**kwargs)


# ---------------------------------------------------------------------------
# Result tables
# ---------------------------------------------------------------------------

@dataclass
class ResultTable:
    spec: ExperimentSpec
    rows: list = field(default_factory=list)   # dicts keyed by CSV_COLUMNS
    extra: dict = field(default_factory=dict)  # experiment summaries for the sidecar

    def sort(self):
        self.rows.sort(key=lambda row: (
            row["n"], row["lambda"], row["chi"], row["alpha"], row["beta"],
            row["epsilon"], row["r"], row["trial"],
        ))

    def aggregates(self) -> list[dict]:
        """Per-cell success rate and hit-time quantiles, recomputable from rows.

        Censored trials contribute to the success rate and censoring count
        only, never to the hit-time quantiles.
        """
        groups: dict[tuple, list[dict]] = {}
        for row in self.rows:
            key = (row["n"], row["lambda"], row["chi"], row["alpha"],
                   row["beta"], row["epsilon"], row["r"])
            groups.setdefault(key, []).append(row)
        out = []
        for key in sorted(groups):
            rows = groups[key]
            hits = [r["T_interactions"] for r in rows if r["hit"]]
            agg = dict(zip(("n", "lambda", "chi", "alpha", "beta", "epsilon", "r"), key))
            agg.update(
                trials=len(rows),
                hits=len(hits),
                censored=len(rows) - len(hits),
                success_rate=len(hits) / len(rows),
                median_T=float(np.median(hits)) if hits else None,
                q25_T=float(np.quantile(hits, 0.25)) if hits else None,
                q75_T=float(np.quantile(hits, 0.75)) if hits else None,
            )
            out.append(agg)
        return out

    def _spec_json(self) -> str:
        spec_dict = {k: v for k, v in self.spec.__dict__.items()}
        return json.dumps(spec_dict, sort_keys=True, default=str)

    def to_csv(self) -> str:
        lines = [
            f"# coevo-results schema={SCHEMA_VERSION}",
            f"# master_seed={self.spec.master_seed}",
            f"# spec={self._spec_json()}",
            ",".join(CSV_COLUMNS),
        ]
        for row in self.rows:
            cells = []
            for col in CSV_COLUMNS:
                value = row[col]
                if value is None:
                    cells.append("")
                elif isinstance(value, bool):
                    cells.append("1" if value else "0")
                elif isinstance(value, float):
                    cells.append(repr(value))
                else:
                    cells.append(str(value))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write(self, prefix: str) -> tuple[str, str]:
        """Write `<prefix>.csv` and the `<prefix>.aggregates.json` sidecar."""
        directory = os.path.dirname(prefix)
        if directory:
            os.makedirs(directory, exist_ok=True)
        csv_path = prefix + ".csv"
        json_path = prefix + ".aggregates.json"
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())
        sidecar = {
            "schema": SCHEMA_VERSION,
            "spec": json.loads(self._spec_json()),
            "aggregates": self.aggregates(),
            **self.extra,
        }
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return csv_path, json_path


def read_result_csv(path: str):
    """Parse a results CSV back into (header_lines, list-of-dict rows)."""
    header, rows = [], []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        (header if line.startswith("#") else body).append(line)
    columns = body[0].split(",")
    for line in body[1:]:
        if not line:
            continue
        raw = dict(zip(columns, line.split(",")))
        row = {}
        for key, value in raw.items():
            if value == "":
                row[key] = None
            elif key in ("n", "lambda", "trial", "seed", "hit", "T_interactions", "generations"):
                row[key] = int(value)
            elif key == "kind":
                row[key] = value
            else:
                row[key] = float(value)
        row["hit"] = bool(row["hit"])
        rows.append(row)
    return header, rows


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

def _target_for(kind: str, n: int):
    if kind == "bilinear":
        return None
    # The reachable singleton: predators are driven toward the all-zeros
    # genome and prey toward all-ones, both of which are unique strings.
    return singleton_target(BitVector.zeros(n), BitVector.all_ones(n))


def _cell_config(cell: Cell, spec: ExperimentSpec, seed: int, budget: int,
                 record_trajectory: bool = False) -> PdcoeaConfig:
    game = BilinearParams(n=cell.n, alpha=cell.alpha, beta=cell.beta, epsilon=cell.epsilon)
    return PdcoeaConfig(
        lam=cell.lam,
        chi=cell.chi,
        n=cell.n,
        seed=seed,
        budget_generations=budget,
        game=game,
        target=_target_for(spec.target, cell.n),
        record_trajectory=record_trajectory,
    )


def pilot_budget(cell: Cell, spec: ExperimentSpec, cell_index: int,
                 pilots: int = 10, cap_factor: int = 200) -> int:
    """Budget procedure: 10x the median hit time of `pilots` pilot runs.

    Pilot runs use a generous cap of cap_factor * n generations and draw
    their seeds from a reserved stream block, so they never share randomness
    with the measured trials.  Raises if fewer than six pilots hit, since a
    median of censored values would not be meaningful.
    """
    cap = cap_factor * cell.n
    hit_gens = []
    for i in range(pilots):
        seed = derive_seed(spec.master_seed, PILOT_STREAM_OFFSET + cell_index * pilots + i)
        record = run_trial(_cell_config(cell, spec, seed, cap))
        if record.hit:
            hit_gens.append(record.generations_run)
    if len(hit_gens) < 6:
        raise RuntimeError(
            f"pilot procedure failed for cell {cell}: only {len(hit_gens)}/{pilots} "
            f"pilots hit within {cap} generations"
        )
    return max(1, int(math.ceil(10.0 * float(np.median(hit_gens)))))


def _budget_for(cell: Cell, spec: ExperimentSpec, cell_index: int) -> int:
    budget = spec.budget
    if isinstance(budget, int):
        return budget
    if budget == "pilot":
        return pilot_budget(cell, spec, cell_index)
    if isinstance(budget, str) and budget.startswith("bound:"):
        factor = float(budget.split(":", 1)[1])
        inputs = theory.BoundInputs(
            m=1, lam=cell.lam, delta=min(1.0, max(spec.delta, 1e-9)), z=(),
            c_pp=1.000001, n=cell.n, chi=cell.chi, alpha=cell.alpha,
            beta=cell.beta, epsilon=cell.epsilon, r=cell.r,
        )
        interactions = theory.solvable_regime_budget(inputs).value
        return max(1, int(math.ceil(factor * interactions / cell.lam)))
    raise ValueError(f"unknown budget rule {budget!r}")


def _run_unit(args):
    cell, spec, trial, seed, budget = args
    record = run_trial(_cell_config(cell, spec, seed, budget))
    return {
        "kind": spec.kind,
        "n": cell.n,
        "lambda": cell.lam,
        "chi": cell.chi,
        "alpha": cell.alpha,
        "beta": cell.beta,
        "epsilon": cell.epsilon,
        "delta": cell.delta,
        "r": cell.r,
        "trial": trial,
        "seed": seed,
        "hit": record.hit,
        "T_interactions": record.T_interactions,
        "generations": record.generations_run,
        "wall_ms": record.wall_ms,
    }


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ResultTable:
    """Execute all cells x trials; rows come back canonically sorted.

    Unit (cell_index, trial) gets seed derive_seed(master_seed, unit_index)
    with unit_index = cell_index * trials + trial, so the table is identical
    for any worker count and any scheduling order.
    """
    cells = resolve_cells(spec)
    units = []
    for ci, cell in enumerate(cells):
        budget = _budget_for(cell, spec, ci)
        for trial in range(spec.trials):
            seed = derive_seed(spec.master_seed, ci * spec.trials + trial)
            units.append((cell, spec, trial, seed, budget))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_unit, units, chunksize=1))
    else:
        rows = [_run_unit(unit) for unit in units]
    table = ResultTable(spec=spec, rows=rows)
    table.sort()
    return table


# ---------------------------------------------------------------------------
# Named experiments
# ---------------------------------------------------------------------------

def experiment_error_threshold(spec: ExperimentSpec, workers: int = 1):
    """Success-rate-vs-chi curve with an empirical transition summary.

    The mutation-rate grid should straddle ln 2; above the threshold the
    exact-pair target needs time exponential in n, so desk-scale budgets see
    the success rate collapse to zero.
    """
    table = run_experiment(spec, workers=workers)
    by_chi: dict[float, list] = {}
    for agg in table.aggregates():
        by_chi.setdefault(agg["chi"], []).append(agg["success_rate"])
    curve = [
        {"chi": chi, "success_rate": float(np.mean(rates))}
        for chi, rates in sorted(by_chi.items())
    ]
    nonzero = [pt["chi"] for pt in curve if pt["success_rate"] > 0]
    zero = [pt["chi"] for pt in curve if pt["success_rate"] == 0]
    summary = {
        "curve": curve,
        "last_nonzero_chi": max(nonzero) if nonzero else None,
        "first_zero_chi": min(zero) if zero else None,
        "ln2_reference": math.log(2.0),
    }
    table.extra["threshold_summary"] = summary
    return table, summary


def experiment_runtime_scaling(spec: ExperimentSpec, workers: int = 1):
    """Median hit time against n (and against lambda when swept).

    Reports log-log slope estimates plus the closed-form budget reference for
    each cell; censored trials never enter the medians.
    """
    table = run_experiment(spec, workers=workers)
    aggs = table.aggregates()

    def slope(points):
        if len(points) < 2 or any(p[1] is None for p in points):
            return None
        xs = np.log([p[0] for p in points])
        ys = np.log([p[1] for p in points])
        return float(np.polyfit(xs, ys, 1)[0])

    n_sweep = sorted({a["n"] for a in aggs})
    lam_sweep = sorted({a["lambda"] for a in aggs})
    fits = {}
    if len(n_sweep) > 1:
        pts = [(a["n"], a["median_T"]) for a in aggs if a["lambda"] == lam_sweep[0]]
        fits["slope_T_vs_n"] = slope(sorted(pts))
    if len(lam_sweep) > 1:
        pts = [(a["lambda"], a["median_T"]) for a in aggs if a["n"] == n_sweep[0]]
        fits["slope_T_vs_lambda"] = slope(sorted(pts))

    references = []
    for agg in aggs:
        try:
            inputs = theory.BoundInputs(
                m=1, lam=agg["lambda"], delta=spec.delta, z=(), c_pp=1.000001,
                n=agg["n"], chi=agg["chi"], alpha=agg["alpha"], beta=agg["beta"],
                epsilon=agg["epsilon"], r=agg["r"],
            )
            ref = theory.solvable_regime_budget(inputs).value
        except ValueError:
            ref = None
        references.append({**{k: agg[k] for k in ("n", "lambda", "chi")},
                           "budget_reference_interactions": ref})
    summary = {"fits": fits, "references": references}
    table.extra["scaling_summary"] = summary
    return table, summary


SERIES_COLUMNS = (
    "n", "lambda", "chi", "trial", "generation", "pred_mean", "prey_mean",
    "p0", "q0", "prey_in_s0", "current_level", "phase",
)


def experiment_trajectory(spec: ExperimentSpec, workers: int = 1):
    """Per-generation population series with level and phase annotation.

    Phase 2 starts at the first generation where the predator fraction below
    beta*n reaches gamma0.  Runs sequentially (the per-generation observer is
    cheap next to the run itself).
    """
    cells = resolve_cells(spec)
    table = ResultTable(spec=spec)
    series = []
    for ci, cell in enumerate(cells):
        budget = _budget_for(cell, spec, ci)
        game = BilinearParams(n=cell.n, alpha=cell.alpha, beta=cell.beta, epsilon=cell.epsilon)
        seq = build_bilinear_levels(game)

        def observer(pops):
            return current_level(pops, seq, spec.gamma0)

        for trial in range(spec.trials):
            seed = derive_seed(spec.master_seed, ci * spec.trials + trial)
            cfg = replace(_cell_config(cell, spec, seed, budget), record_trajectory=True)
            record = run_trial(cfg, observer=observer)
            table.rows.append({
                "kind": spec.kind, "n": cell.n, "lambda": cell.lam, "chi": cell.chi,
                "alpha": cell.alpha, "beta": cell.beta, "epsilon": cell.epsilon,
                "delta": cell.delta, "r": cell.r, "trial": trial, "seed": seed,
                "hit": record.hit, "T_interactions": record.T_interactions,
                "generations": record.generations_run, "wall_ms": record.wall_ms,
            })
            phase = 1
            for row, level in zip(record.trajectory, record.observed):
                if phase == 1 and row["p0"] >= spec.gamma0:
                    phase = 2
                series.append((
                    cell.n, cell.lam, cell.chi, trial, int(row["generation"]),
                    float(row["pred_mean"]), float(row["prey_mean"]),
                    float(row["p0"]), float(row["q0"]), int(row["prey_in_s0"]),
                    int(level), phase,
                ))
    table.sort()
    table.extra["series_columns"] = list(SERIES_COLUMNS)
    return table, series


def experiment_lemma_checks(spec: ExperimentSpec):
    """Run every verification suite; the spec's grid is ignored (checks carry
    their own fixed instances).  Writes a JSON report when `out` is set."""
    results = run_checks("all")
    report = {
        "checks": [{"name": r.name, "passed": bool(r.passed), "detail": r.detail} for r in results],
        "all_passed": bool(all(r.passed for r in results)),
    }
    if spec.out:
        directory = os.path.dirname(spec.out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(spec.out + ".checks.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return results, report


def experiment_bound_table(spec: ExperimentSpec):
    """Closed-form budget references for every grid cell (no runs).

    Each row carries the recipe mutation rate's implied slack, the
    interaction budget with its term breakdown, and the error-threshold
    reference for the cell's slack when it is in range.
    """
    rows = []
    for cell in resolve_cells(spec):
        row = {
            "n": cell.n, "lambda": cell.lam, "chi": cell.chi, "alpha": cell.alpha,
            "beta": cell.beta, "epsilon": cell.epsilon, "r": cell.r,
        }
        try:
            bound = theory.solvable_regime_budget(theory.BoundInputs(
                m=1, lam=cell.lam, delta=spec.delta, z=(), c_pp=1.000001,
                n=cell.n, chi=cell.chi, alpha=cell.alpha, beta=cell.beta,
                epsilon=cell.epsilon, r=cell.r))
            row.update(budget_interactions=bound.value, budget_generations=bound.value / cell.lam,
                       slack=bound.terms["delta"], pop_term=bound.terms["pop_term"],
                       mutation_term=bound.terms["mutation_term"])
        except ValueError as exc:
            row.update(budget_interactions=None, note=str(exc))
        rows.append(row)
    if spec.out:
        directory = os.path.dirname(spec.out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(spec.out + ".bounds.json", "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return rows


def write_series(series, path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(SERIES_COLUMNS) + "\n")
        for row in series:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return path


def emit_plot_data(in_csv: str, out_csv: str) -> str:
    """Rewrite a results CSV as tidy long-format (one metric per row)."""
    _, rows = read_result_csv(in_csv)
    keys = ("kind", "n", "lambda", "chi", "alpha", "beta", "epsilon", "delta", "r", "trial")
    directory = os.path.dirname(out_csv)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out_csv, "w", encoding="utf-8") as fh:
        fh.write(",".join(keys) + ",metric,value\n")
        for row in rows:
            prefix = ",".join("" if row[k] is None else str(row[k]) for k in keys)
            for metric in ("hit", "T_interactions", "generations"):
                fh.write(f"{prefix},{metric},{int(row[metric])}\n")
    return out_csv


# ---------------------------------------------------------------------------
# Check suites
# ---------------------------------------------------------------------------

def population_from_counts(counts, n: int) -> Population:
    """Canonical genomes (first c bits set) realising a one-count multiset."""
    rows = []
    for c in counts:
        bits = np.zeros(n, dtype=np.uint8)
        bits[: int(c)] = 1
        rows.append(bits)
    return Population.from_bitvectors([BitVector.from_bits(b) for b in rows])


def paired_from_counts(pred_counts, prey_counts, n: int) -> PairedPopulations:
    return PairedPopulations(
        population_from_counts(pred_counts, n),
        population_from_counts(prey_counts, n),
    )


DOMINANCE_CHECK_GAMES = ((0.4, 0.6), (0.9, 0.05), (0.0, 1.0))

# Hypothesis-satisfying one-count populations for the exact growth checks
# (n=10, alpha=0.4, beta=0.6); found by search, verified by enumeration.
GROWTH_CHECK_CONFIGS = {
    15: dict(pred=(2, 2, 2, 7, 7, 7), prey=(3, 3, 2, 1, 1, 0), k=0, l=2,
             delta1=Fraction(2, 5)),
    16: dict(pred=(0, 1, 2, 3, 4, 5), prey=(3, 2, 0, 0, 0, 0), k=0, l=1,
             rho=Fraction(1, 2)),
    17: dict(pred=(2, 2, 2, 7, 7, 7), prey=(3, 3, 2, 1, 1, 0), k=0, l=2),
    18: dict(pred=(2, 2, 2, 7, 7, 7), prey=(3, 3, 2, 1, 1, 0), k=0, l=2),
    19: dict(pred=(2, 5, 7, 8, 9, 9), prey=(5, 4, 3, 2, 1, 0), k=2, l=0,
             rho=Fraction(1, 10)),
}


def check_dominance_equivalence(n: int = 10, games=DOMINANCE_CHECK_GAMES) -> CheckResult:
    """Exhaustive agreement of the payoff route and the one-count route.

    All (n+1)^4 one-count quadruples for each game parameterisation.
    """
    vectors = [BitVector.from_bits([1] * c + [0] * (n - c)) for c in range(n + 1)]
    counts = range(n + 1)
    mismatches = 0
    checked = 0
    for alpha, beta in games:
        params = BilinearParams(n=n, alpha=alpha, beta=beta, epsilon=1.0 / n)
        for cx1 in counts:
            for cy1 in counts:
                for cx2 in counts:
                    for cy2 in counts:
                        a = dominates(vectors[cx1], vectors[cy1], vectors[cx2], vectors[cy2], params)
                        b = dominates_by_onecounts(cx1, cy1, cx2, cy2, params)
                        mismatches += a != b
                        checked += 1
    return CheckResult(
        "dominance-equivalence",
        mismatches == 0,
        f"{checked} quadruples verified across {len(games)} games, {mismatches} mismatches",
    )


def check_dominance_structure(seed: int = theory.DEFAULT_CHECK_SEED) -> CheckResult:
    """Reflexivity on the full one-count grid plus an antisymmetry spot check."""
    n = 10
    params = BilinearParams(n=n, alpha=0.4, beta=0.6, epsilon=0.1)
    bad = 0
    for cx in range(n + 1):
        for cy in range(n + 1):
            bad += not dominates_by_onecounts(cx, cy, cx, cy, params)
    rng = spawn_stream(seed, 0)
    for _ in range(10_000):
        cx1, cy1, cx2, cy2 = rng.integers(0, n + 1, size=4)
        fwd = dominates_by_onecounts(cx1, cy1, cx2, cy2, params)
        bwd = dominates_by_onecounts(cx2, cy2, cx1, cy1, params)
        if fwd and bwd:
            values = {
                payoff_by_onecounts(cx1, cy2, params),
                payoff_by_onecounts(cx1, cy1, params),
                payoff_by_onecounts(cx2, cy1, params),
                payoff_by_onecounts(cx2, cy2, params),
            }
            bad += len(values) != 1  # mutual dominance only when all payoffs tie
    return CheckResult("dominance-structure", bad == 0, f"{bad} violations")


def check_intransitivity(n: int = 20, alpha: float = 0.4, beta: float = 0.6) -> CheckResult:
    params = BilinearParams(n=n, alpha=alpha, beta=beta, epsilon=1.0 / n)
    cycle = intransitivity_witness(params)
    if cycle is None:
        return CheckResult("intransitivity", False, "no 4-cycle found")
    ok = _verify_cycle(cycle, params)
    return CheckResult("intransitivity", ok, f"cycle {cycle}" if ok else f"invalid cycle {cycle}")


def _verify_cycle(cycle, params: BilinearParams) -> bool:
    dom = lambda a, b: dominates_by_onecounts(a[0], a[1], b[0], b[1], params)
    a, b, c, d = cycle
    chain = dom(a, b) and dom(b, c) and dom(c, d) and dom(d, a)
    chords = dom(a, c) or dom(c, a) or dom(b, d) or dom(d, b)
    return chain and not chords and len({a, b, c, d}) == 4


def check_half_probabilities(populations: int = 100, lam: int = 6, n: int = 10,
                             seed: int = theory.DEFAULT_CHECK_SEED) -> CheckResult:
    """Exact conditional dominance probabilities >= 1/2 on random populations."""
    params = BilinearParams(n=n, alpha=0.4, beta=0.6, epsilon=0.1)
    rng = spawn_stream(seed, 1)
    violations = 0
    evaluated = 0
    for _ in range(populations):
        pops = paired_from_counts(rng.integers(0, n + 1, size=lam),
                                  rng.integers(0, n + 1, size=lam), n)
        for prob in half_prob_conditionals(pops, params):
            if prob is None:
                continue
            evaluated += 1
            violations += prob < Fraction(1, 2)
    return CheckResult(
        "half-probabilities", violations == 0,
        f"{evaluated} non-null conditionals over {populations} populations, {violations} below 1/2",
    )


def check_growth_suite(n: int = 10) -> CheckResult:
    params = BilinearParams(n=n, alpha=0.4, beta=0.6, epsilon=0.1)
    lines = []
    ok = True
    for case, cfg in sorted(GROWTH_CHECK_CONFIGS.items()):
        pops = paired_from_counts(cfg["pred"], cfg["prey"], n)
        report = check_growth_lemmas(
            case, pops, params, k=cfg["k"], l=cfg["l"],
            delta1=cfg.get("delta1"), rho=cfg.get("rho"),
        )
        good = report.hypotheses_met and report.passed
        ok &= good
        lines.append(
            f"case {case}: ratio={float(report.ratio):.4f} bound={float(report.bound):.4f}"
            if report.hypotheses_met else f"case {case}: hypotheses unmet ({report.note})"
        )
    return CheckResult("growth-inequalities", ok, "; ".join(lines))


def check_level_functions() -> CheckResult:
    """Reference potential validates; a count-increasing function does not;
    the closed-form cap g(0,1) < 3*eta*lambda^2*m/z_* holds across the sweep."""
    ok = True
    lines = []
    for lam in (15, 20, 28):
        for m in (3, 6, 10):
            for pattern in ("flat", "rising", "mixed"):
                z = _z_pattern(pattern, m)
                for delta in (0.3, 0.8):
                    lo, hi = eta_window(delta, lam)
                    params = LevelFunctionParams(eta=(lo + hi) / 2, phi=0.5, z=z, lam=lam, m=m)
                    g1, g2 = reference_g1_g2(params)
                    valid = validate_level_function(lambda k, j: g1(k, j) + g2(k, j), lam, m)
                    ok &= valid
                    if lam > 44.0 / 3.0 and lam * lam > 44.0 / (3.0 * delta):
                        z_star = min(z)
                        cap = 3.0 * params.eta * lam * lam * m / z_star
                        ok &= g1(0, 1) + g2(0, 1) < cap
    counterexample = validate_level_function(lambda k, j: k, 5, 4)
    ok &= not counterexample
    lines.append("monotone counterexample rejected" if not counterexample else "counterexample accepted!")
    return CheckResult("level-functions", ok, "; ".join(lines) or "ok")


def _z_pattern(pattern: str, m: int) -> tuple:
    if pattern == "flat":
        return tuple([0.5] * (m - 1))
    if pattern == "rising":
        return tuple((i + 1) / m for i in range(m - 1))
    return tuple(0.1 + 0.8 * ((i * 7) % (m + 1)) / (m + 1) for i in range(m - 1))


def check_product_space(reps: int = 4000, seed: int = theory.DEFAULT_CHECK_SEED) -> CheckResult:
    """Monte Carlo check of the product-occupancy drift and upgrade bounds.

    Uses the dominance engine with chi = 0 on a fixed population so the
    offspring marginals p = P(x in A), q = P(y in B) are exactly computable
    by enumeration; verifies, within 6 standard errors:

      1. E[Z'] >= lambda*(lambda-1)*(1+delta)*gamma where Z' is the product
         occupancy of the offspring and gamma = p*q/(1+delta),
      2. E[exp(-eta Z')] <= exp(-eta*lambda*(gamma*lambda-1)) at the
         admissible eta,
      3. P(Z' < lambda*(gamma*lambda-1)) is below its exponential cap, and
      4. the hit-rate bound 1/r < 3/(z*(lambda-1)) + 1 for the event that the
         offspring product intersects A x B, with z = p*q.
    """
    n, lam = 10, 20
    params = BilinearParams(n=n, alpha=0.4, beta=0.6, epsilon=0.1)
    pops = paired_from_counts(
        [2] * 10 + [7] * 10, [3] * 7 + [2] * 6 + [1] * 4 + [0] * 3, n)
    in_a = lambda c: c < params.beta_n          # predators in R0
    in_b = lambda c: c < 2                       # prey below 2 ones
    p = _psel_counts(pops, params, pred_x=in_a, cap=lam)
    q = _psel_counts(pops, params, pred_y=in_b, cap=lam)
    delta = 0.2
    gamma = float(p * q) / (1.0 + delta)

    dist = PdcoeaDistribution(BilinearGame(params), chi=0.0)
    rng = spawn_stream(seed, 2)
    z_vals = np.empty(reps)
    intersects = np.empty(reps, dtype=bool)
    for i in range(reps):
        child = step_generation(pops, dist, rng)
        x_in = int((child.predators.ones < params.beta_n).sum())
        y_in = int((child.prey.ones < 2).sum())
        z_vals[i] = x_in * y_in
        intersects[i] = x_in > 0 and y_in > 0

    lines, ok = [], True

    bound1 = lam * (lam - 1) * (1.0 + delta) * gamma
    se1 = z_vals.std(ddof=1) / math.sqrt(reps)
    good = z_vals.mean() >= bound1 - 6.0 * se1
    ok &= good
    lines.append(f"mean Z'={z_vals.mean():.2f} vs {bound1:.2f} (se {se1:.2f})")

    eta = (1.0 - (1.0 + delta) ** -0.5) / lam
    mgf = np.exp(-eta * z_vals)
    bound2 = math.exp(-eta * lam * (gamma * lam - 1.0))
    se2 = mgf.std(ddof=1) / math.sqrt(reps)
    good = mgf.mean() <= bound2 + 6.0 * se2
    ok &= good
    lines.append(f"mgf={mgf.mean():.4f} vs {bound2:.4f}")

    delta1 = delta / 2.0
    tail = float((z_vals < lam * (gamma * lam - 1.0)).mean())
    bound3 = math.exp(-delta1 * gamma * lam * (1.0 - math.sqrt((1.0 + delta1) / (1.0 + delta))))
    se3 = math.sqrt(max(tail * (1.0 - tail), 1.0 / reps) / reps)
    good = tail <= bound3 + 6.0 * se3
    ok &= good
    lines.append(f"tail={tail:.4f} vs {bound3:.4f}")

    z = float(p * q)
    r_hat = float(intersects.mean())
    se4 = math.sqrt(max(r_hat * (1.0 - r_hat), 1.0 / reps) / reps)
    bound4 = 3.0 / (z * (lam - 1)) + 1.0
    good = r_hat > 6.0 * se4 and 1.0 / (r_hat - 6.0 * se4) < bound4
    ok &= good
    lines.append(f"1/r={1.0 / r_hat:.4f} vs {bound4:.4f}")

    return CheckResult("product-space", ok, "; ".join(lines))


CHECK_SUITES = {
    "dominance": (check_dominance_equivalence, check_dominance_structure),
    "intransitivity": (check_intransitivity,),
    "half-prob": (check_half_probabilities,),
    "growth": (check_growth_suite,),
    "levels": (check_level_functions,),
    "inequalities": (theory.check_inequality_lemmas,),
    "product-state": (check_product_space,),
}


def run_checks(suite: str = "all") -> list[CheckResult]:
    if suite == "all":
        names = list(CHECK_SUITES)
    elif suite in CHECK_SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown check suite {suite!r}; choose from {sorted(CHECK_SUITES)} or 'all'")
    results = []
    for name in names:
        for fn in CHECK_SUITES[name]:
            out = fn()
            results.extend(out if isinstance(out, list) else [out])
    return results
