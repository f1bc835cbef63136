"""
Invalid-point campaign: simulate every bundled subject from its fitted
parameters under a normal and under a beta model and count draws outside
[0, 1].

    python demos/monte_carlo.py [replications]
"""
import sys

from sltbeta import io
from sltbeta.simulation import generators_from_fits, run_monte_carlo

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 200
doc = io.read_json(io.bundled_path("synthetic_fits.json"))
fits, _ = io.read_fits_file(io.bundled_path("synthetic_fits.json"))

for model in ("normal", "beta"):
    report = run_monte_carlo(generators_from_fits(fits, doc["delays"], model), reps, seed=1)
    print(f"\n{model} model, {report.n_subjects} subjects x {reps} replications")
    print(f"  invalid points:            {report.invalid_total_proportion:.4f}")
    print(f"  subjects with any invalid: {report.subjects_with_any_invalid_proportion:.4f}")
    for d, p in zip(report.delays, report.invalid_by_delay):
        print(f"  delay {d:>6g}: {p:.4f}")
