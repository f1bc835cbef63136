"""
Fit one bundled synthetic subject three ways (NLS, plain beta, SLT beta)
and show what happens when the series touches 0 or 1.

Beta and SLT estimates can differ even for interior data: when the mean is
close to 1 a shape parameter is small, and truncation then removes a
noticeable share of the beta mass (about l**beta).

    python demos/fit_subject.py
"""
from sltbeta import io
from sltbeta.errors import BoundaryValueError
from sltbeta.estimation import fit_beta, fit_nls, fit_slt_beta

population = io.ingest(io.bundled_path("synthetic_population.csv"))
interior = next(s for s in population if not s.has_boundary_values)
boundary = next(s for s in population if s.has_boundary_values)


def show(series):
    print(f"\nsubject {series.subject_id}")
    for d, y in zip(series.delays, series.values):
        print(f"  delay {d:>6g}  y = {y:.4f}")
    nls = fit_nls(series)
    print(f"  NLS : ln k = {nls.psi_hat:+.3f}  sigma^2 = {nls.dispersion:.4g}")
    try:
        b = fit_beta(series)
        print(f"  beta: ln k = {b.psi_hat:+.3f}  phi = {b.dispersion:.3g}  loglik = {b.objective:.3f}")
    except BoundaryValueError as exc:
        print(f"  beta: refused ({exc})")
    slt = fit_slt_beta(series)
    print(f"  SLT : ln k = {slt.psi_hat:+.3f}  phi = {slt.dispersion:.3g}  loglik = {slt.objective:.3f}")
    print(f"        k = {slt.k_hat:.3g} per day, converged = {slt.converged}, at bound = {slt.at_bound}")


show(interior)
show(boundary)
