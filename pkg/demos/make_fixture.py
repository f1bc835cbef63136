"""
Regenerate the bundled synthetic dataset and its fits file.

    python demos/make_fixture.py

Writes ``src/sltbeta/data/synthetic_population.csv`` (126 subjects, 7
delays, 34 subjects with a 0 or 1 point) plus ``synthetic_truth.csv`` with the
generating parameters, then fits every subject by NLS, beta and SLT into
``synthetic_fits.json``. Output is deterministic.
"""
import csv
import shutil
import tempfile
from pathlib import Path

from sltbeta import cli, io
from sltbeta.fixtures import synthetic_population

DATA = Path(__file__).resolve().parents[1] / "src" / "sltbeta" / "data"


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    pop = synthetic_population()
    io.write_dataset([s.series for s in pop], DATA / "synthetic_population.csv")
    with open(DATA / "synthetic_truth.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("subject_id", "psi", "phi"))
        for s in pop:
            w.writerow((s.series.subject_id, format(s.psi, ".17g"), format(s.phi, ".17g")))

    with tempfile.TemporaryDirectory() as tmp:
        rc = cli.main(["fit", "--input", str(DATA / "synthetic_population.csv"), "--method", "all", "--output-dir", tmp])
        if rc != 0:
            raise SystemExit(rc)
        shutil.copy(Path(tmp) / "fits.json", DATA / "synthetic_fits.json")


if __name__ == "__main__":
    main()
