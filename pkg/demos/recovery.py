"""
Small parameter-recovery study: simulate SLT beta series from known
(ln k, phi), refit them and report the bias. The phi estimates run high
with only seven observations per subject.

    python demos/recovery.py [subjects_per_value]
"""
import sys

from sltbeta.fixtures import DEFAULT_DELAYS
from sltbeta.recovery import recovery_study, summarize_recovery

n = int(sys.argv[1]) if len(sys.argv) > 1 else 20
records = recovery_study([-8.0, -6.0, -4.0, -2.0], 10.0, n, DEFAULT_DELAYS, seed=7)
print(f"{'ln k*':>6} {'fits':>6} {'bias':>8} {'mean phi':>9} {'median phi':>11}")
for psi, row in summarize_recovery(records).items():
    print(
        f"{psi:>6g} {row['n']:>3}/{row['n_total']:<3} {row['psi_bias']:>+8.3f}"
        f" {row['phi_mean']:>9.2f} {row['phi_median']:>11.2f}"
    )
