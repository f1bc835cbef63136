"""
Plot the CSV files written by the CLI. Needs matplotlib
(``pip install -e .[demos]``).

    sltbeta fit --output-dir out
    sltbeta compare --fits out/fits.json --output-dir out
    sltbeta simulate --output-dir out
    sltbeta report --fits out/fits.json --output-dir out
    python demos/plot_outputs.py out
"""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


out = Path(sys.argv[1] if len(sys.argv) > 1 else "sltbeta-output")
fig, axes = plt.subplots(1, 3, figsize=(14, 4))

agreement = out / "agreement_nls_slt.csv"
if agreement.exists():
    rows = read(agreement)
    a = [float(r["lnk_a"]) for r in rows]
    b = [float(r["lnk_b"]) for r in rows]
    axes[0].scatter(a, b, s=10)
    lo, hi = min(a + b), max(a + b)
    axes[0].plot([lo, hi], [lo, hi], "k--", lw=0.8)
    axes[0].set(xlabel="ln k (NLS)", ylabel="ln k (SLT beta)", title="method agreement")

for model, style in (("normal", "o-"), ("beta", "s-")):
    path = out / f"invalid_by_delay_{model}.csv"
    if path.exists():
        rows = read(path)
        axes[1].plot([float(r["delay"]) for r in rows], [float(r["invalid"]) for r in rows], style, label=model)
axes[1].set(xscale="log", xlabel="delay (days)", ylabel="proportion outside [0, 1]", title="invalid points")
axes[1].legend()

variance = out / "variance_by_delay.csv"
if variance.exists():
    rows = read(variance)
    delays = [float(r["delay"]) for r in rows]
    for name in rows[0]:
        if name != "delay":
            axes[2].plot(delays, [float(r[name]) for r in rows], "o-", label=name)
    axes[2].set(xscale="log", xlabel="delay (days)", ylabel="variance", title="variance by delay")
    axes[2].legend(fontsize=7)

fig.tight_layout()
target = out / "overview.png"
fig.savefig(target, dpi=120)
print(f"wrote {target}")
