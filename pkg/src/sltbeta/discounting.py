"""Discounting mean functions: expected indifference point as a function of delay."""
import numpy as np

__all__ = ["MeanFunction", "Hyperbolic", "HYPERBOLIC", "hyperbolic_mean", "hyperbolic_complement"]


class MeanFunction:
    """Maps a log-rate ``psi`` and delays to expected indifference points.

    Subclasses implement ``mean`` and, where a cancellation-free form exists,
    ``complement`` (1 - mean).
    """

    name = "base"

    def mean(self, psi, delay):
        raise NotImplementedError

    def complement(self, psi, delay):
        return 1.0 - self.mean(psi, delay)


class Hyperbolic(MeanFunction):
    """E(y) = 1 / (1 + k D) with k = exp(psi)."""

    name = "hyperbolic"

    def mean(self, psi, delay):
        return 1.0 / (1.0 + np.exp(psi) * np.asarray(delay, dtype=float))

    def complement(self, psi, delay):
        kd = np.exp(psi) * np.asarray(delay, dtype=float)
        return kd / (1.0 + kd)


HYPERBOLIC = Hyperbolic()


def hyperbolic_mean(psi, delay):
    """Hyperbolic discounting curve 1 / (1 + exp(psi) * delay).

    Equals 1 at zero delay and decreases strictly in both ``delay`` and ``psi``.
    """
    out = HYPERBOLIC.mean(psi, delay)
    return float(out) if np.ndim(out) == 0 else out


def hyperbolic_complement(psi, delay):
    """1 - hyperbolic_mean(psi, delay), computed without cancellation."""
    out = HYPERBOLIC.complement(psi, delay)
    return float(out) if np.ndim(out) == 0 else out
