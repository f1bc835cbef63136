"""
Deterministic synthetic discounting population.

The bundled dataset (``sltbeta/data/synthetic_population.csv``) is produced
by :func:`synthetic_population` with its defaults. It is synthetic: ln k is
normal with mean -4.9 and sd 1.8 (clipped to [-9.1, -0.3]), phi is
log-normal around 8, and indifference points are beta draws around the
hyperbolic curve, recorded in cents of a $100 larger-later amount.

Exactly ``n_boundary`` subjects carry a point at 0 or 1: for each of them the
observation nearest a boundary is snapped onto it. Every other subject is
kept strictly inside (0, 1) by moving recorded 0 and 100 by one cent.
"""
from dataclasses import dataclass

import numpy as np

from .discounting import HYPERBOLIC
from .estimation import IndifferenceSeries

__all__ = ["DEFAULT_DELAYS", "SyntheticSubject", "synthetic_population", "FIXTURE_SEED"]

DEFAULT_DELAYS = (1.0, 7.0, 30.0, 90.0, 180.0, 365.0, 1825.0)
FIXTURE_SEED = 20240917


@dataclass(frozen=True)
class SyntheticSubject:
    series: IndifferenceSeries
    psi: float
    phi: float


def synthetic_population(
    n_subjects=126,
    n_boundary=34,
    delays=DEFAULT_DELAYS,
    amount=100.0,
    seed=FIXTURE_SEED,
    psi_mean=-4.9,
    psi_sd=1.8,
    phi_median=8.0,
):
    """Generate the synthetic population; returns a list of :class:`SyntheticSubject`."""
    if not 0 <= n_boundary <= n_subjects:
        raise ValueError("n_boundary must lie in [0, n_subjects]")
    rng = np.random.default_rng(seed)
    delays = np.asarray(delays, dtype=float)
    psi = np.clip(rng.normal(psi_mean, psi_sd, n_subjects), -9.1, -0.3)
    phi = phi_median * np.exp(rng.normal(0.0, 0.5, n_subjects))
    boundary = set(rng.choice(n_subjects, size=n_boundary, replace=False).tolist())
    width = len(str(n_subjects))
    cent = 0.01

    out = []
    for i in range(n_subjects):
        mu = HYPERBOLIC.mean(psi[i], delays)
        cmu = HYPERBOLIC.complement(psi[i], delays)
        y = rng.beta(mu * phi[i], cmu * phi[i])
        raw = np.round(y * amount, 2)
        if i in boundary:
            dist = np.minimum(raw, amount - raw)
            j = int(np.argmin(dist))
            raw[j] = amount if raw[j] >= amount / 2 else 0.0
            inner = np.arange(len(raw)) != j
            raw[inner] = np.clip(raw[inner], cent, amount - cent)
        else:
            raw = np.clip(raw, cent, amount - cent)
        sid = f"S{i + 1:0{width}d}"
        out.append(SyntheticSubject(IndifferenceSeries.from_raw(sid, delays, raw, amount), float(psi[i]), float(phi[i])))
    return out
