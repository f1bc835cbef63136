"""
Per-subject estimation of the hyperbolic discounting rate.

Three estimators share one data container, :class:`IndifferenceSeries`:

``fit_nls``
    least squares on the hyperbolic curve; reports sigma^2 = SSE / (d - 1).
``fit_beta``
    beta regression maximum likelihood; rejects observations at 0 or 1.
``fit_slt_beta``
    SLT beta regression maximum likelihood; accepts the closed interval.

Beta fits optimize over (psi, tau) = (ln k, ln phi) with Nelder-Mead,
warm-started from the least-squares fit.
"""
import enum
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .discounting import HYPERBOLIC
from .distributions import DEFAULT_SLT, IDENTITY_SLT, slt_log_normalizer
from .errors import BoundaryValueError, DataError, NotConvergedError, SltBetaError
from .optimize import optimize
from .special import _log_gamma

__all__ = [
    "Method",
    "IndifferenceSeries",
    "FitOptions",
    "FitResult",
    "FitFailure",
    "fit_nls",
    "fit_nls_arrays",
    "fit_beta",
    "fit_slt_beta",
    "fit_slt_beta_arrays",
    "slt_log_likelihood",
    "fit_series",
    "fit_many",
    "model_variance_by_delay",
    "MIN_OBSERVATIONS",
]

MIN_OBSERVATIONS = 3


class Method(str, enum.Enum):
    NLS = "nls"
    BETA = "beta"
    SLT = "slt"


@dataclass(frozen=True)
class IndifferenceSeries:
    """One subject's indifference points, normalized to [0, 1].

    ``values`` are proportions of the larger-later amount ``amount``; use
    :meth:`from_raw` to build a series from currency-scale points.
    """

    subject_id: str
    delays: np.ndarray
    values: np.ndarray
    amount: float = 1.0

    def __post_init__(self):
        d = np.asarray(self.delays, dtype=float)
        y = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "delays", d)
        object.__setattr__(self, "values", y)
        if d.ndim != 1 or d.shape != y.shape:
            raise DataError(f"subject {self.subject_id!r}: delays and values must be 1-D and equal length")
        if len(d) < MIN_OBSERVATIONS:
            raise DataError(
                f"subject {self.subject_id!r}: needs at least {MIN_OBSERVATIONS} observations, got {len(d)}"
            )
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise DataError(f"subject {self.subject_id!r}: delays must be strictly positive")
        if np.any(np.diff(d) <= 0):
            raise DataError(f"subject {self.subject_id!r}: delays must be strictly increasing")
        if not np.all(np.isfinite(y)) or np.any(y < 0) or np.any(y > 1):
            raise DataError(f"subject {self.subject_id!r}: normalized values must lie in [0, 1]")
        if not self.amount > 0:
            raise DataError(f"subject {self.subject_id!r}: amount must be positive")

    @classmethod
    def from_raw(cls, subject_id, delays, points, amount=1.0):
        """Build a series from raw indifference points by dividing by ``amount``."""
        return cls(subject_id, delays, np.asarray(points, dtype=float) / float(amount), float(amount))

    def __len__(self):
        return len(self.delays)

    @property
    def has_boundary_values(self):
        return bool(np.any((self.values == 0.0) | (self.values == 1.0)))


@dataclass(frozen=True)
class FitOptions:
    psi_bounds: tuple = (-20.0, 5.0)
    tau_bounds: tuple = (-5.0, 15.0)
    tol: float = 1e-8
    max_evals: int = 10000
    restarts: int = 3


@dataclass
class FitResult:
    """Outcome of one per-subject fit.

    ``dispersion`` is sigma^2 for NLS and phi for the beta methods.
    ``objective`` is the SSE for NLS and the maximized log-likelihood otherwise.
    """

    subject_id: str
    method: Method
    psi_hat: float
    dispersion: float
    objective: float
    converged: bool
    iterations: int
    notes: str = ""
    at_bound: bool = False
    n_obs: int = 0

    @property
    def k_hat(self):
        return float(np.exp(self.psi_hat))

    def to_dict(self):
        return {
            "subject_id": self.subject_id,
            "method": self.method.value,
            "psi_hat": self.psi_hat,
            "dispersion": self.dispersion,
            "objective": self.objective,
            "converged": self.converged,
            "iterations": self.iterations,
            "notes": self.notes,
            "at_bound": self.at_bound,
            "n_obs": self.n_obs,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            subject_id=str(d["subject_id"]),
            method=Method(d["method"]),
            psi_hat=float(d["psi_hat"]),
            dispersion=float(d["dispersion"]),
            objective=float(d["objective"]),
            converged=bool(d["converged"]),
            iterations=int(d["iterations"]),
            notes=d.get("notes", ""),
            at_bound=bool(d.get("at_bound", False)),
            n_obs=int(d.get("n_obs", 0)),
        )


@dataclass
class FitFailure:
    """A per-subject error recorded instead of aborting a batch."""

    subject_id: str
    method: Method
    error: str
    message: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "subject_id": self.subject_id,
            "method": self.method.value,
            "error": self.error,
            "message": self.message,
            **({"details": self.details} if self.details else {}),
        }


def _subject_seed(subject_id):
    digest = hashlib.sha256(str(subject_id).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


# --------------------------------------------------------------------------
# least squares

_NLS_GRID_STEP = 0.05


def _sse(psi, delays, y):
    psi = np.atleast_1d(psi)
    mu = HYPERBOLIC.mean(psi[:, None], delays[None, :])
    return np.sum((y[None, :] - mu) ** 2, axis=1)


def _nls_psi(delays, y, bounds):
    lo, hi = bounds
    grid = np.arange(lo, hi + 0.5 * _NLS_GRID_STEP, _NLS_GRID_STEP)
    sse = _sse(grid, delays, y)
    i = int(np.argmin(sse))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(
        lambda p: float(_sse(p, delays, y)[0]),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-12, "maxiter": 500},
    )
    psi = float(res.x)
    nfev = len(grid) + int(res.nfev)
    if sse[i] < res.fun:
        psi = float(grid[i])
    return psi, float(_sse(psi, delays, y)[0]), nfev, bool(res.success)


def fit_nls_arrays(delays, y, subject_id="", options=None):
    """Least-squares hyperbolic fit on raw arrays (values may leave [0, 1])."""
    options = options or FitOptions()
    delays = np.asarray(delays, dtype=float)
    y = np.asarray(y, dtype=float)
    d = len(y)
    psi, sse, nfev, ok = _nls_psi(delays, y, options.psi_bounds)
    notes = []
    lo, hi = options.psi_bounds
    at_bound = False
    if np.ptp(y) == 0:
        notes.append("degenerate series: all indifference points equal")
        ok = False
    if psi - lo < 1e-3:
        notes.append("ln k at lower bound: no discounting, rate not identifiable")
        at_bound, ok = True, False
    elif hi - psi < 1e-3:
        notes.append("ln k at upper bound: complete discounting, rate not identifiable")
        at_bound, ok = True, False
    return FitResult(
        subject_id=str(subject_id),
        method=Method.NLS,
        psi_hat=psi,
        dispersion=sse / (d - 1),
        objective=sse,
        converged=ok,
        iterations=nfev,
        notes="; ".join(notes),
        at_bound=at_bound,
        n_obs=d,
    )


def fit_nls(series, options=None):
    """Least-squares fit of the hyperbolic curve.

    ``psi_hat`` minimizes sum_j (y_j - 1/(1 + exp(psi) D_j))^2 and the
    dispersion is SSE / (d - 1). Boundary and degenerate solutions are
    flagged in ``notes`` with ``converged=False``; nothing is raised.
    """
    return fit_nls_arrays(series.delays, series.values, series.subject_id, options)


# --------------------------------------------------------------------------
# beta likelihoods


class _SltLikelihood:
    """Negative SLT log-likelihood over (psi, ln phi) for one series."""

    def __init__(self, delays, g, cfg):
        self.delays = np.asarray(delays, dtype=float)
        self.log_y, self.log_1my = cfg.log_beta_scale(g)
        self.cfg = cfg
        self.n = len(self.log_y)
        self._log_s = np.log(cfg.s)

    def loglik(self, psi, tau):
        phi = np.exp(tau)
        mu = HYPERBOLIC.mean(psi, self.delays)
        cmu = HYPERBOLIC.complement(psi, self.delays)
        a = mu * phi
        b = cmu * phi
        if not (np.all(a > 0) and np.all(b > 0) and np.isfinite(phi)):
            return -np.inf
        lg = _log_gamma(np.concatenate([[phi], a, b]))
        n = self.n
        terms = (
            lg[0]
            - lg[1:n + 1]
            - lg[n + 1:]
            + (a - 1.0) * self.log_y
            + (b - 1.0) * self.log_1my
            - slt_log_normalizer(a, b, self.cfg)
            - self._log_s
        )
        with np.errstate(invalid="ignore"):
            total = float(np.sum(terms))
        return total if not np.isnan(total) else -np.inf

    def __call__(self, theta):
        return -self.loglik(theta[0], theta[1])


def slt_log_likelihood(series, psi, phi, cfg=DEFAULT_SLT):
    """SLT beta log-likelihood of a series at (psi, phi)."""
    return _SltLikelihood(series.delays, series.values, cfg).loglik(psi, np.log(phi))


def _check_boundary(delays, y, subject_id):
    hit = np.nonzero((y <= 0.0) | (y >= 1.0))[0]
    if len(hit):
        j = int(hit[0])
        raise BoundaryValueError(float(delays[j]), float(y[j]), subject_id)


def fit_slt_beta_arrays(delays, g, cfg=DEFAULT_SLT, subject_id="", options=None, method=Method.SLT):
    """Maximum-likelihood SLT beta fit on raw arrays; see :func:`fit_slt_beta`."""
    options = options or FitOptions()
    delays = np.asarray(delays, dtype=float)
    g = np.asarray(g, dtype=float)
    if cfg.l == 0.0 or cfg.upper >= 1.0:
        # the transformed value can reach 0 or 1, where the beta log density diverges
        y = cfg.to_beta_scale(g)
        bad = np.nonzero(((y <= 0.0) & (cfg.l == 0.0)) | ((y >= 1.0) & (cfg.upper >= 1.0)))[0]
        if len(bad):
            j = int(bad[0])
            raise BoundaryValueError(float(delays[j]), float(g[j]), subject_id or None)

    pre = fit_nls_arrays(delays, g, subject_id, options)
    psi_lo, psi_hi = options.psi_bounds
    tau_lo, tau_hi = options.tau_bounds
    psi0 = float(np.clip(pre.psi_hat, psi_lo, psi_hi))
    mu0 = HYPERBOLIC.mean(psi0, delays)
    phi0 = np.mean(mu0 * (1.0 - mu0)) / max(pre.dispersion, 1e-6) - 1.0
    tau0 = float(np.clip(np.log(phi0), tau_lo, tau_hi)) if phi0 > 0 else tau_lo

    nll = _SltLikelihood(delays, g, cfg)
    if not np.isfinite(nll(np.array([psi0, tau0]))):
        tau0 = 0.0
    res = optimize(
        nll,
        [psi0, tau0],
        [options.psi_bounds, options.tau_bounds],
        restarts=options.restarts,
        tol=options.tol,
        max_evals=options.max_evals,
        seed=_subject_seed(subject_id),
    )
    psi_hat, tau_hat = (float(v) for v in res.x)
    notes = []
    at_bound = False
    if tau_hat - tau_lo < 1e-6 or tau_hi - tau_hat < 1e-6:
        at_bound = True
        notes.append(f"ln phi driven to optimization bound ({tau_hat:g})")
    if psi_hat - psi_lo < 1e-6 or psi_hi - psi_hat < 1e-6:
        at_bound = True
        notes.append(f"ln k driven to optimization bound ({psi_hat:g})")
    if not res.converged:
        notes.append(res.message)
    objective = -res.fun
    converged = res.converged and np.isfinite(objective)
    return FitResult(
        subject_id=str(subject_id),
        method=method,
        psi_hat=psi_hat,
        dispersion=float(np.exp(tau_hat)),
        objective=float(objective),
        converged=bool(converged),
        iterations=res.nfev,
        notes="; ".join(notes),
        at_bound=at_bound,
        n_obs=len(g),
    )


def fit_slt_beta(series, cfg=DEFAULT_SLT, options=None):
    """SLT beta regression: jointly maximize the log-likelihood in (psi, phi).

    Observations equal to 0 or 1 are allowed whenever ``cfg.l > 0`` and
    ``1/s + l < 1``. The returned ``objective`` is the maximized
    log-likelihood and ``dispersion`` is phi-hat.
    """
    return fit_slt_beta_arrays(series.delays, series.values, cfg, series.subject_id, options)


def fit_beta(series, options=None):
    """Standard beta regression (SLT with s = 1, l = 0).

    Raises
    ------
    BoundaryValueError
        If any observation equals 0 or 1; the error names the first offending delay.
    """
    _check_boundary(series.delays, series.values, series.subject_id)
    return fit_slt_beta_arrays(
        series.delays, series.values, IDENTITY_SLT, series.subject_id, options, method=Method.BETA
    )


# --------------------------------------------------------------------------
# batch


def fit_series(series, method, cfg=DEFAULT_SLT, options=None):
    """Fit one series by ``method``; errors come back as :class:`FitFailure`."""
    method = Method(method)
    try:
        if method is Method.NLS:
            return fit_nls(series, options)
        if method is Method.BETA:
            return fit_beta(series, options)
        return fit_slt_beta(series, cfg, options)
    except BoundaryValueError as exc:
        return FitFailure(
            series.subject_id, method, exc.code, str(exc), {"delay": exc.delay, "value": exc.value}
        )
    except SltBetaError as exc:
        return FitFailure(series.subject_id, method, exc.code, str(exc))


def _fit_task(args):
    series, methods, cfg, options = args
    return [fit_series(series, m, cfg, options) for m in methods]


def fit_many(population, methods=(Method.NLS, Method.SLT), cfg=DEFAULT_SLT, options=None, workers=1):
    """Fit every series by every method.

    Results come back in input order (subject-major, then method order)
    regardless of ``workers``; a failed fit yields a :class:`FitFailure`.
    """
    methods = [Method(m) for m in methods]
    tasks = [(s, methods, cfg, options) for s in population]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_fit_task, tasks))
    else:
        chunks = [_fit_task(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def model_variance_by_delay(fit, delays):
    """Model-implied variance of the indifference point at each delay.

    Beta methods give mu_j (1 - mu_j) / (1 + phi); NLS gives the constant
    sigma^2 at every delay.
    """
    if not fit.converged:
        raise NotConvergedError(f"subject {fit.subject_id!r}: fit did not converge")
    delays = np.asarray(delays, dtype=float)
    if fit.method is Method.NLS:
        return np.full(len(delays), fit.dispersion)
    mu = HYPERBOLIC.mean(fit.psi_hat, delays)
    return mu * (1.0 - mu) / (1.0 + fit.dispersion)
