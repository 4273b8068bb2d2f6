"""The mutation-rate error threshold, observed.

Above chi = ln(2)/(1-2*delta) the process cannot keep any fixed genome pair
in its populations for long enough to matter: with a per-iteration
reproductive rate below 2, mutation destroys copies faster than selection
multiplies them.  This sweep drives the singleton corner target (all-zeros
predator, all-ones prey) across a chi grid straddling ln 2 and watches the
success rate collapse.

Desk-scale caveat: the theory statement is about e^(Theta(n)) time, which no
experiment can exhibit; what the sweep shows is the qualitative transition.

Run:  python3 demos/error_threshold_sweep.py      (about a minute)
"""

import math

from coevo.harness import ExperimentSpec, experiment_error_threshold

spec = ExperimentSpec(
    kind="error-threshold",
    n=(60,),
    lam=(60,),
    chi=(0.05, 0.2, 0.5, 0.7, 1.0, 1.4),
    alpha=(1.0,),
    beta=(0.05,),
    epsilon=(0.1,),
    trials=10,
    master_seed=606,
    budget=5_000,
    target="singleton",
)

print(f"n={spec.n[0]}, lambda={spec.lam[0]}, budget {spec.budget} generations, "
      f"{spec.trials} trials per mutation rate")
print(f"theoretical threshold at chi = ln 2 = {math.log(2):.4f} (delta -> 0)\n")

table, summary = experiment_error_threshold(spec)

print("  chi    success rate")
for point in summary["curve"]:
    bar = "#" * int(40 * point["success_rate"])
    marker = "  <- ln 2 sits below here" if point["chi"] >= math.log(2) else ""
    print(f"  {point['chi']:4.2f}   {point['success_rate']:4.2f}  {bar}{marker}")

print(f"\nlast rate above zero at chi = {summary['last_nonzero_chi']}, "
      f"first zero at chi = {summary['first_zero_chi']}")
print("median hit times among successful cells:")
for agg in table.aggregates():
    if agg["median_T"] is not None:
        print(f"  chi={agg['chi']:4.2f}: median T = {agg['median_T']:.0f} interactions")
