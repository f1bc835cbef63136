"""
Box-bounded Nelder-Mead minimizer with deterministic restarts.

Points are kept inside the box by projection (coordinate-wise clipping).
A run stops when the simplex diameter drops below ``tol`` or the shared
evaluation budget is spent. After the main run from ``start``, ``restarts``
further runs begin from jittered copies of ``start``; every run is followed
by a short polish run from its own optimum. The best value wins.
"""
from dataclasses import dataclass, field

import numpy as np

__all__ = ["OptimizeResult", "nelder_mead", "optimize"]


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    nfev: int
    converged: bool
    runs: int = 1
    message: str = ""
    history: list = field(default_factory=list, repr=False)


def _initial_simplex(x0, step, lower, upper):
    n = len(x0)
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        xi = x0[i] + step[i]
        if xi > upper[i]:
            xi = x0[i] - step[i]
        simplex[i + 1, i] = np.clip(xi, lower[i], upper[i])
    return simplex


class _BudgetExhausted(Exception):
    pass


def nelder_mead(fun, x0, lower, upper, step, tol=1e-8, max_evals=10000):
    """One Nelder-Mead run inside the box [lower, upper].

    Returns ``(x, fx, nfev, converged)`` where ``converged`` means the
    simplex diameter fell below ``tol`` before the budget ran out.
    Non-finite objective values are treated as +inf.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    nfev = 0

    def f(x):
        nonlocal nfev
        if nfev >= max_evals:
            raise _BudgetExhausted
        nfev += 1
        v = fun(x)
        return v if np.isfinite(v) else np.inf

    def clip(x):
        return np.minimum(np.maximum(x, lower), upper)

    simplex = _initial_simplex(clip(np.asarray(x0, dtype=float)), np.asarray(step, float), lower, upper)
    fvals = np.full(len(simplex), np.inf)
    try:
        for i, v in enumerate(simplex):
            fvals[i] = f(v)
        return _nm_loop(f, clip, simplex, fvals, tol) + (nfev, True)
    except _BudgetExhausted:
        i = int(np.argmin(fvals))
        return simplex[i].copy(), float(fvals[i]), nfev, False


def _nm_loop(f, clip, simplex, fvals, tol):
    """Iterate until the simplex diameter drops below ``tol``.

    Updates ``simplex``/``fvals`` in place so the caller can recover the
    best vertex if ``f`` raises :class:`_BudgetExhausted`.
    """
    n = simplex.shape[1]

    while True:
        order = np.argsort(fvals, kind="stable")
        simplex[:], fvals[:] = simplex[order], fvals[order]
        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        if diameter < tol:
            return simplex[0].copy(), float(fvals[0])

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = clip(centroid + (centroid - worst))
        fr = f(xr)
        if fr < fvals[0]:
            xe = clip(centroid + 2.0 * (centroid - worst))
            fe = f(xe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-1]:
            xc = clip(centroid + 0.5 * (xr - centroid))
            fc = f(xc)
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
                continue
        else:
            xc = clip(centroid + 0.5 * (worst - centroid))
            fc = f(xc)
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
                continue
        # shrink toward the best vertex
        for i in range(1, n + 1):
            x = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fvals[i] = f(x)
            simplex[i] = x


def optimize(
    objective,
    start,
    bounds,
    *,
    restarts=3,
    tol=1e-8,
    max_evals=10000,
    step=None,
    jitter=0.05,
    seed=0,
):
    """Minimize ``objective`` over a box with Nelder-Mead plus restarts.

    Parameters
    ----------
    objective : callable
        Maps a 1-D float array to a float. Must be finite at ``start``.
    start : array_like
        Initial point; clipped into the box.
    bounds : sequence of (low, high)
        One pair per coordinate.
    restarts : int
        Number of additional runs from jittered starts.
    tol : float
        Simplex diameter (max coordinate distance from the best vertex) at
        which a run stops.
    max_evals : int
        Objective evaluation budget shared by all runs.
    step : array_like, optional
        Initial simplex edge per coordinate; defaults to 10% of the box width.
    jitter : float
        Standard deviation of the start jitter as a fraction of box width.
    seed : int
        Seed of the jitter generator. Same inputs and seed give the same result.

    Returns
    -------
    OptimizeResult
    """
    bounds = np.asarray(bounds, dtype=float)
    lower, upper = bounds[:, 0], bounds[:, 1]
    width = upper - lower
    x0 = np.clip(np.asarray(start, dtype=float), lower, upper)
    f0 = objective(x0)
    if not np.isfinite(f0):
        raise ValueError("objective is not finite at the starting point")
    step = 0.1 * width if step is None else np.asarray(step, dtype=float)
    polish_step = np.maximum(1e-3 * width, 10 * tol)

    rng = np.random.default_rng(seed)
    starts = [x0] + [
        np.clip(x0 + rng.normal(0.0, jitter * width), lower, upper) for _ in range(restarts)
    ]

    best_x, best_f = x0, f0
    nfev = 1
    all_converged = True
    history = []
    for s in starts:
        budget = max_evals - nfev
        if budget <= 0:
            all_converged = False
            break
        x, fx, used, ok = nelder_mead(objective, s, lower, upper, step, tol, budget)
        nfev += used
        # polish until a restart no longer improves
        while ok and max_evals - nfev > 0:
            x2, fx2, used, ok = nelder_mead(
                objective, x, lower, upper, polish_step, tol, max_evals - nfev
            )
            nfev += used
            if fx2 < fx - 1e-12 * (1.0 + abs(fx)):
                x, fx = x2, fx2
            else:
                if fx2 < fx:
                    x, fx = x2, fx2
                break
        all_converged &= ok
        history.append((x.copy(), fx))
        if fx < best_f:
            best_x, best_f = x, fx

    message = "converged" if all_converged else f"evaluation budget of {max_evals} exhausted"
    return OptimizeResult(
        x=np.asarray(best_x, dtype=float),
        fun=float(best_f),
        nfev=nfev,
        converged=all_converged,
        runs=len(history),
        message=message,
        history=history,
    )
