import json
import math

import numpy as np
import pytest

from coevo import BilinearParams, PdcoeaConfig, run_trial
from coevo.core import derive_seed
from coevo.harness import (
    ExperimentSpec,
    emit_plot_data,
    experiment_error_threshold,
    experiment_runtime_scaling,
    experiment_trajectory,
    parse_spec_file,
    paired_from_counts,
    pilot_budget,
    population_from_counts,
    read_result_csv,
    resolve_cells,
    run_checks,
    run_experiment,
    write_series,
)
from coevo.pdcoea import singleton_target
from coevo.core import BitVector


def tiny_spec(**kw):
    base = dict(
        kind="runtime-scaling", n=(15,), lam=(10,), chi=(0.5,), alpha=(0.9,),
        beta=(0.05,), epsilon=(0.2,), trials=2, master_seed=77, budget=300,
    )
    base.update(kw)
    return ExperimentSpec(**base)


def strip_wall(csv_text):
    lines = []
    for line in csv_text.splitlines():
        if line.startswith("#") or line.startswith("kind,"):
            lines.append(line)
        else:
            lines.append(",".join(line.split(",")[:-1]))
    return "\n".join(lines)


class TestSpecParsing:
    def test_round_trip_file(self, tmp_path):
        cfg = tmp_path / "spec.txt"
        cfg.write_text(
            "# scaling sweep\n"
            "kind = runtime-scaling\n"
            "n = 30,50,80\n"
            "lambda = 100\n"
            "chi = auto\n"
            "delta = 0.01\n"
            "alpha = 0.9\n"
            "beta = 0.05\n"
            "epsilon = 0.1\n"
            "trials = 30   # per cell\n"
            "seed = 4242\n"
            "budget = pilot\n"
        )
        spec = parse_spec_file(str(cfg))
        assert spec.kind == "runtime-scaling"
        assert spec.n == (30, 50, 80) and spec.lam == (100,)
        assert spec.chi == ("auto",) and spec.delta == 0.01
        assert spec.trials == 30 and spec.master_seed == 4242
        assert spec.budget == "pilot"

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.txt"
        cfg.write_text("kind = runtime-scaling\nwat = 3\n")
        with pytest.raises(ValueError):
            parse_spec_file(str(cfg))

    def test_kind_required(self, tmp_path):
        cfg = tmp_path / "nokind.txt"
        cfg.write_text("n = 10\n")
        with pytest.raises(ValueError):
            parse_spec_file(str(cfg))

    def test_auto_chi_resolution(self):
        spec = tiny_spec(chi=("auto",), delta=0.01)
        cell = resolve_cells(spec)[0]
        assert cell.chi == pytest.approx(0.0070736, abs=1e-6)
        assert cell.delta == 0.01

    def test_explicit_chi_keeps_delta_blank(self):
        cell = resolve_cells(tiny_spec(chi=(0.5,)))[0]
        assert cell.delta is None


class TestRunExperiment:
    def test_single_unit_reduces_to_run_trial(self):
        spec = tiny_spec(trials=1)
        table = run_experiment(spec)
        assert len(table.rows) == 1
        row = table.rows[0]
        cfg = PdcoeaConfig(
            lam=10, chi=0.5, n=15, seed=derive_seed(77, 0), budget_generations=300,
            game=BilinearParams(n=15, alpha=0.9, beta=0.05, epsilon=0.2),
            record_trajectory=False,
        )
        record = run_trial(cfg)
        assert row["hit"] == record.hit
        assert row["T_interactions"] == record.T_interactions
        assert row["generations"] == record.generations_run
        assert row["seed"] == record.seed

    def test_row_count_and_aggregates(self):
        spec = tiny_spec(n=(15, 20), trials=3)
        table = run_experiment(spec)
        assert len(table.rows) == 6
        aggs = table.aggregates()
        assert len(aggs) == 2
        assert all(a["trials"] == 3 for a in aggs)
        assert all(a["hits"] + a["censored"] == 3 for a in aggs)

    def test_deterministic_output(self):
        a = run_experiment(tiny_spec(trials=3)).to_csv()
        b = run_experiment(tiny_spec(trials=3)).to_csv()
        assert strip_wall(a) == strip_wall(b)

    def test_worker_count_does_not_change_output(self):
        spec = tiny_spec(n=(15, 20), trials=2)
        serial = run_experiment(spec, workers=1).to_csv()
        parallel = run_experiment(spec, workers=2).to_csv()
        assert strip_wall(serial) == strip_wall(parallel)

    def test_csv_round_trip_and_sidecar(self, tmp_path):
        spec = tiny_spec(trials=3, out=str(tmp_path / "res" / "tiny"))
        table = run_experiment(spec)
        csv_path, json_path = table.write(spec.out)
        header, rows = read_result_csv(csv_path)
        assert any("schema=1" in line for line in header)
        assert any("master_seed=77" in line for line in header)
        assert len(rows) == len(table.rows)
        sidecar = json.loads(open(json_path).read())
        # aggregates recomputable from raw rows
        hits = [r["T_interactions"] for r in rows if r["hit"]]
        agg = sidecar["aggregates"][0]
        assert agg["hits"] == len(hits)
        assert agg["success_rate"] == len(hits) / len(rows)
        if hits:
            assert agg["median_T"] == float(np.median(hits))

    def test_budget_rule_bound_factor(self):
        spec = tiny_spec(chi=("auto",), delta=0.01, budget="bound:1e-9")
        cells = resolve_cells(spec)
        table = run_experiment(spec)
        assert len(table.rows) == spec.trials

    def test_unknown_budget_rule(self):
        with pytest.raises(ValueError):
            run_experiment(tiny_spec(budget="whenever"))

    def test_censored_trials_excluded_from_quantiles(self):
        # beta = 0 empties the target region: everything censors
        table = run_experiment(tiny_spec(beta=(0.0,), budget=5, trials=4))
        agg = table.aggregates()[0]
        assert agg["censored"] == 4 and agg["success_rate"] == 0.0
        assert agg["median_T"] is None and agg["q25_T"] is None


class TestPilot:
    def test_pilot_budget_deterministic(self):
        spec = tiny_spec(chi=("auto",), delta=0.01, budget="pilot")
        cell = resolve_cells(spec)[0]
        a = pilot_budget(cell, spec, 0)
        b = pilot_budget(cell, spec, 0)
        assert a == b > 0

    def test_pilot_failure_raises(self):
        # impossible target (beta = 0 empties R0): pilots cannot hit
        spec = tiny_spec(beta=(0.0,), budget="pilot")
        cell = resolve_cells(spec)[0]
        with pytest.raises(RuntimeError):
            pilot_budget(cell, spec, 0, cap_factor=2)


class TestNamedExperiments:
    def test_error_threshold_curve(self):
        spec = ExperimentSpec(
            kind="error-threshold", n=(20,), lam=(20,), chi=(0.1, 2.0),
            alpha=(1.0,), beta=(0.05,), epsilon=(0.1,), trials=3,
            master_seed=9, budget=500, target="singleton",
        )
        table, summary = experiment_error_threshold(spec)
        curve = {pt["chi"]: pt["success_rate"] for pt in summary["curve"]}
        assert curve[0.1] > curve[2.0] == 0.0
        assert summary["first_zero_chi"] == 2.0
        assert summary["ln2_reference"] == pytest.approx(math.log(2))

    def test_runtime_scaling_summary(self):
        spec = ExperimentSpec(
            kind="runtime-scaling", n=(15, 30), lam=(20,), chi=("auto",), delta=0.01,
            alpha=(0.9,), beta=(0.05,), epsilon=(0.2,), trials=3, master_seed=9,
            budget="pilot",
        )
        table, summary = experiment_runtime_scaling(spec)
        assert "slope_T_vs_n" in summary["fits"]
        assert len(summary["references"]) == 2
        for agg in table.aggregates():
            for row in table.rows:
                assert row["T_interactions"] % row["lambda"] == 0

    def test_trajectory_series(self, tmp_path):
        spec = ExperimentSpec(
            kind="trajectory", n=(20,), lam=(20,), chi=("auto",), delta=0.01,
            alpha=(0.9,), beta=(0.05,), epsilon=(0.2,), trials=2,
            master_seed=9, budget=4000,
        )
        table, series = experiment_trajectory(spec)
        assert all(len(row) == 12 for row in series)
        # phase is monotone 1 -> 2 within each trial
        by_trial = {}
        for row in series:
            by_trial.setdefault(row[3], []).append(row)
        for rows in by_trial.values():
            phases = [r[-1] for r in rows]
            assert all(a <= b for a, b in zip(phases, phases[1:]))
            assert phases[0] == 1 and phases[-1] == 2
        path = write_series(series, str(tmp_path / "series.csv"))
        lines = open(path).read().splitlines()
        assert len(lines) == len(series) + 1

    def test_hit_run_ends_inside_target(self):
        spec = ExperimentSpec(
            kind="trajectory", n=(20,), lam=(20,), chi=("auto",), delta=0.01,
            alpha=(0.9,), beta=(0.05,), epsilon=(0.2,), trials=2,
            master_seed=9, budget=4000,
        )
        table, series = experiment_trajectory(spec)
        params = BilinearParams(n=20, alpha=0.9, beta=0.05, epsilon=0.2)
        for row in table.rows:
            if row["hit"]:
                final = [s for s in series if s[3] == row["trial"]][-1]
                p0, q0 = final[7], final[8]
                assert p0 > 0


class TestFullFlipMutation:
    def test_complement_rate_never_hits_singleton(self):
        # chi = n complements every offspring bit; reaching a fixed pair then
        # requires improbable initial adjacency, so no run succeeds
        spec = ExperimentSpec(
            kind="error-threshold", n=(50,), lam=(20,), chi=(50.0,),
            alpha=(1.0,), beta=(0.1,), epsilon=(0.1,), trials=5,
            master_seed=13, budget=300, target="singleton",
        )
        table, summary = experiment_error_threshold(spec)
        assert summary["curve"][0]["success_rate"] == 0.0


class TestPhaseOneDescent:
    def test_predator_mean_collapses_by_the_hit(self):
        # at the hit the predator mean sits far below beta*n + init_mean/2
        spec = ExperimentSpec(
            kind="runtime-scaling", n=(50,), lam=(50,), chi=("auto",), delta=0.01,
            alpha=(0.9,), beta=(0.05,), epsilon=(0.1,), trials=10,
            master_seed=303, budget="pilot",
        )
        cell = resolve_cells(spec)[0]
        budget = pilot_budget(cell, spec, 0)
        game = BilinearParams(n=50, alpha=0.9, beta=0.05, epsilon=0.1)
        descended = 0
        hits = 0
        for trial in range(spec.trials):
            cfg = PdcoeaConfig(
                lam=50, chi=cell.chi, n=50, seed=derive_seed(303, trial),
                budget_generations=budget, game=game, record_trajectory=True)
            record = run_trial(cfg)
            if not record.hit:
                continue
            hits += 1
            first, last = record.trajectory[0], record.trajectory[-1]
            descended += last["pred_mean"] < game.beta_n + first["pred_mean"] / 2
        assert hits >= 9
        assert descended / hits >= 0.9


class TestAnalyticKinds:
    def test_lemma_checks_kind(self, tmp_path):
        spec = ExperimentSpec(kind="lemma-checks", out=str(tmp_path / "rep"))
        from coevo.harness import experiment_lemma_checks

        results, report = experiment_lemma_checks(spec)
        assert report["all_passed"]
        assert (tmp_path / "rep.checks.json").exists()

    def test_bound_table_kind(self, tmp_path):
        from coevo.harness import experiment_bound_table

        spec = ExperimentSpec(
            kind="bound-table", n=(50, 100), lam=(100,), chi=("auto",), delta=0.01,
            alpha=(0.9,), beta=(0.05,), epsilon=(0.1,), out=str(tmp_path / "b"))
        rows = experiment_bound_table(spec)
        assert len(rows) == 2
        assert all(r["budget_interactions"] > 0 for r in rows)
        assert rows[0]["budget_interactions"] < rows[1]["budget_interactions"]
        assert (tmp_path / "b.bounds.json").exists()


class TestEmitPlots:
    def test_long_format(self, tmp_path):
        spec = tiny_spec(trials=2, out=str(tmp_path / "t"))
        table = run_experiment(spec)
        csv_path, _ = table.write(spec.out)
        out = emit_plot_data(csv_path, str(tmp_path / "long.csv"))
        lines = open(out).read().splitlines()
        assert lines[0].endswith("metric,value")
        assert len(lines) == 1 + 3 * len(table.rows)


class TestPopulationsFromCounts:
    def test_counts_realised(self):
        pop = population_from_counts([0, 3, 10], 10)
        assert list(pop.ones) == [0, 3, 10]

    def test_paired(self):
        pops = paired_from_counts([1, 2], [3, 4], 8)
        assert list(pops.predators.ones) == [1, 2]
        assert list(pops.prey.ones) == [3, 4]


class TestCheckRegistry:
    def test_fast_suites_pass(self):
        for suite in ("dominance", "intransitivity", "half-prob", "growth", "levels"):
            results = run_checks(suite)
            assert results and all(r.passed for r in results), (suite, results)

    def test_product_state_suite(self):
        results = run_checks("product-state")
        assert all(r.passed for r in results), results

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_checks("nope")
