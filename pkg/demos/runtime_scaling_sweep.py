"""How the hit time grows with problem size in the solvable regime.

Uses the recipe mutation rate chi = (1/2) ln(42/(41(1+delta))) and the
regime alpha - epsilon >= 4/5, beta < epsilon.  Budgets come from the pilot
procedure (10x the median of 10 pilot runs per cell), and medians are
compared against the closed-form interaction budget, which carries a 1/delta
constant that makes it an order-of-magnitude reference rather than a sharp
line.

The proven population-size regime (lambda of order 2000 ln n) is far beyond
desk scale; these runs use a small lambda and simply show that the scaling
is tame there too.

Run:  python3 demos/runtime_scaling_sweep.py      (about half a minute)
"""

from coevo.harness import ExperimentSpec, experiment_runtime_scaling

spec = ExperimentSpec(
    kind="runtime-scaling",
    n=(20, 30, 45, 65),
    lam=(40,),
    chi=("auto",),
    delta=0.01,
    alpha=(0.9,),
    beta=(0.05,),
    epsilon=(0.1,),
    trials=15,
    master_seed=909,
    budget="pilot",
)

print(f"lambda={spec.lam[0]}, recipe chi at slack delta={spec.delta}, "
      f"{spec.trials} trials per n, pilot budgets\n")

table, summary = experiment_runtime_scaling(spec)

print("  n    success   median T (interactions)   closed-form reference")
refs = {ref["n"]: ref["budget_reference_interactions"] for ref in summary["references"]}
for agg in table.aggregates():
    print(f"  {agg['n']:3d}   {agg['hits']:2d}/{agg['trials']:2d}     "
          f"{agg['median_T']:12.0f}            {refs[agg['n']]:.3g}")

slope = summary["fits"].get("slope_T_vs_n")
print(f"\nlog-log slope of median T against n: {slope:.2f}")
print("the closed-form budget is pessimistic by design (it spends a 1/delta")
print("factor on a union bound); the measured medians sit far below it while")
print("growing mildly with n, and every T is a multiple of lambda.")
