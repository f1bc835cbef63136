"""
Batch summaries of fitted populations: ln(k) summary tables, method
agreement, and variance-by-delay profiles, plus CSV plot-data writers.

Quartiles use linear interpolation between order statistics (numpy's
default ``"linear"`` method). Standard deviations use the n - 1 denominator.
"""
import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .estimation import FitResult, Method, model_variance_by_delay

__all__ = [
    "SummaryRow",
    "SummaryTable",
    "REFERENCE_TABLE",
    "summarize_lnk",
    "Agreement",
    "agreement_scatter",
    "empirical_variance_by_delay",
    "model_variance_matrix",
    "write_summary_csv",
    "read_summary_csv",
    "write_agreement_csv",
    "read_agreement_csv",
    "write_variance_csv",
    "read_variance_csv",
    "fmt",
]

_STATS = ("min", "q1", "median", "q3", "max", "mean", "sd")


def fmt(x):
    """Float with 17 significant digits (round-trips exactly)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SummaryRow:
    method: str
    n: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    sd: float


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple

    def row(self, method):
        method = Method(method).value
        for r in self.rows:
            if r.method == method:
                return r
        raise KeyError(method)


# Reference ln(k) summaries reported for 126 screened human subjects; the
# underlying data are not distributed, so these are documentation only.
REFERENCE_TABLE = SummaryTable(
    (
        SummaryRow("nls", 126, -9.10, -6.32, -4.88, -3.37, -0.23, -4.86, 1.94),
        SummaryRow("slt", 126, -8.91, -6.23, -4.99, -3.62, -0.91, -4.92, 1.76),
    )
)


def _row(method, psi):
    psi = np.sort(np.asarray(psi, dtype=float))
    q1, med, q3 = np.quantile(psi, [0.25, 0.5, 0.75], method="linear")
    sd = float(np.std(psi, ddof=1)) if len(psi) > 1 else 0.0
    return SummaryRow(method, len(psi), psi[0], q1, med, q3, psi[-1], float(np.mean(psi)), sd)


def summarize_lnk(fits, method=None):
    """Summary statistics of ln(k-hat) per method over converged fits.

    Parameters
    ----------
    fits : iterable of FitResult
        Non-FitResult records (e.g. failures) are ignored.
    method : Method or str, optional
        Restrict the table to one method.
    """
    groups = {}
    for f in fits:
        if not isinstance(f, FitResult) or not f.converged:
            continue
        if method is not None and f.method is not Method(method):
            continue
        groups.setdefault(f.method.value, []).append(f.psi_hat)
    if not groups:
        raise DataError("no converged fits to summarize")
    order = [m.value for m in Method]
    return SummaryTable(tuple(_row(m, groups[m]) for m in order if m in groups))


@dataclass(frozen=True)
class Agreement:
    subject_ids: tuple
    lnk_a: np.ndarray
    lnk_b: np.ndarray
    correlation: float
    dropped: tuple = ()

    @property
    def pairs(self):
        return list(zip(self.lnk_a.tolist(), self.lnk_b.tolist()))


def agreement_scatter(fits_a, fits_b, drop_unconverged=False):
    """Pair ln(k-hat) by subject across two fit lists and correlate them.

    Raises :class:`DataError` when the subject sets differ, or when a fit is
    unconverged and ``drop_unconverged`` is false.
    """
    a = {f.subject_id: f for f in fits_a if isinstance(f, FitResult)}
    b = {f.subject_id: f for f in fits_b if isinstance(f, FitResult)}
    if set(a) != set(b):
        missing = sorted(set(a) ^ set(b))
        raise DataError(f"subject sets differ; unmatched ids: {missing[:10]}")
    ids = sorted(a)
    bad = tuple(i for i in ids if not (a[i].converged and b[i].converged))
    if bad and not drop_unconverged:
        raise DataError(f"unconverged fits for subjects {list(bad[:10])}")
    ids = [i for i in ids if i not in bad]
    xa = np.array([a[i].psi_hat for i in ids])
    xb = np.array([b[i].psi_hat for i in ids])
    if len(ids) >= 2 and np.std(xa) > 0 and np.std(xb) > 0:
        r = float(np.corrcoef(xa, xb)[0, 1])
    else:
        r = float("nan")
    return Agreement(tuple(ids), xa, xb, r, bad)


def _common_grid(population):
    population = list(population)
    if len(population) < 2:
        raise DataError("variance across subjects needs at least 2 subjects")
    grid = population[0].delays
    for s in population[1:]:
        if s.delays.shape != grid.shape or np.any(s.delays != grid):
            raise DataError(f"subject {s.subject_id!r} does not share the common delay grid")
    return population, grid


def empirical_variance_by_delay(population):
    """Cross-subject sample variance (n - 1) of the indifference point at each delay."""
    population, _ = _common_grid(population)
    y = np.vstack([s.values for s in population])
    # shifting by the first subject leaves the variance unchanged and makes it
    # exactly zero for identical subjects
    return np.var(y - y[0], axis=0, ddof=1)


def model_variance_matrix(fits, delays):
    """Model-implied variance per (converged fit, delay) for box-plot data."""
    rows = [model_variance_by_delay(f, delays) for f in fits if isinstance(f, FitResult) and f.converged]
    return np.vstack(rows) if rows else np.empty((0, len(delays)))


# --------------------------------------------------------------------------
# plot-data files


def write_summary_csv(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("method", "n") + _STATS)
        for r in table.rows:
            w.writerow([r.method, r.n] + [fmt(getattr(r, k)) for k in _STATS])


def read_summary_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [
            SummaryRow(d["method"], int(d["n"]), *(float(d[k]) for k in _STATS))
            for d in csv.DictReader(fh)
        ]
    return SummaryTable(tuple(rows))


def write_agreement_csv(agreement, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("subject_id", "lnk_a", "lnk_b"))
        for i, a, b in zip(agreement.subject_ids, agreement.lnk_a, agreement.lnk_b):
            w.writerow((i, fmt(a), fmt(b)))


def read_agreement_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    ids = tuple(r["subject_id"] for r in rows)
    xa = np.array([float(r["lnk_a"]) for r in rows])
    xb = np.array([float(r["lnk_b"]) for r in rows])
    r = float(np.corrcoef(xa, xb)[0, 1]) if len(rows) >= 2 else float("nan")
    return Agreement(ids, xa, xb, r)


def write_variance_csv(delays, columns, path):
    """Write a delay-indexed table; ``columns`` maps column name to per-delay values."""
    names = list(columns)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["delay"] + names)
        for j, d in enumerate(delays):
            w.writerow([fmt(d)] + [fmt(columns[n][j]) for n in names])


def read_variance_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    names = [k for k in rows[0] if k != "delay"] if rows else []
    delays = np.array([float(r["delay"]) for r in rows])
    return delays, {n: np.array([float(r[n]) for r in rows]) for n in names}
