"""
Data generation under the normal-residual and beta models, and the Monte
Carlo campaign that counts simulated indifference points outside [0, 1].

Normal generators draw ``Normal(mu_j, sigma^2)`` with one sigma^2 for all
delays and never clamp. Beta generators draw ``Beta(mu_j phi, (1 - mu_j) phi)``,
represented strictly inside (0, 1).
Points exactly at 0 or 1 are valid; only strict excursions count.

Every subject owns a Philox stream keyed by ``(seed, subject index)``. Its
``replications x delays`` block is drawn in row-major order, so the draw for
``(replication r, delay j)`` sits at a fixed stream position and results do
not depend on how subjects are spread over workers.
"""
import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .discounting import HYPERBOLIC
from .distributions import open_unit
from .errors import DomainError

__all__ = [
    "GeneratorModel",
    "SubjectGenerator",
    "SimulationReport",
    "subject_rng",
    "simulate_subject",
    "run_monte_carlo",
    "generators_from_fits",
]


class GeneratorModel(str, enum.Enum):
    NORMAL = "normal"
    BETA = "beta"


@dataclass(frozen=True)
class SubjectGenerator:
    """Data-generating parameters for one simulated subject.

    ``dispersion`` is sigma^2 for the normal model and phi for the beta model.
    """

    subject_id: str
    model: GeneratorModel
    psi: float
    dispersion: float
    delays: tuple

    def __post_init__(self):
        object.__setattr__(self, "model", GeneratorModel(self.model))
        object.__setattr__(self, "delays", tuple(float(d) for d in self.delays))
        if not np.isfinite(self.psi):
            raise DomainError(f"generator {self.subject_id!r}: psi must be finite")
        if self.model is GeneratorModel.NORMAL and not self.dispersion >= 0:
            raise DomainError(f"generator {self.subject_id!r}: variance must be >= 0")
        if self.model is GeneratorModel.BETA and not self.dispersion > 0:
            raise DomainError(f"generator {self.subject_id!r}: phi must be > 0")
        if not self.delays or any(d <= 0 for d in self.delays):
            raise DomainError(f"generator {self.subject_id!r}: delays must be positive")

    def means(self):
        return HYPERBOLIC.mean(self.psi, np.asarray(self.delays))

    def to_dict(self):
        return {
            "subject_id": self.subject_id,
            "model": self.model.value,
            "psi": self.psi,
            "dispersion": self.dispersion,
            "delays": list(self.delays),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(str(d["subject_id"]), d["model"], float(d["psi"]), float(d["dispersion"]), d["delays"])


def subject_rng(seed, subject_index):
    """Counter-based generator for one subject of a campaign."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(subject_index),))
    return np.random.Generator(np.random.Philox(ss))


def simulate_subject(gen, rng, replications=None):
    """Simulate indifference points for one generator.

    Returns one value per delay, or a ``(replications, n_delays)`` array
    when ``replications`` is given.
    """
    mu = gen.means()
    shape = (len(mu),) if replications is None else (int(replications), len(mu))
    if gen.model is GeneratorModel.NORMAL:
        if gen.dispersion == 0:
            return np.broadcast_to(mu, shape).copy()
        return rng.normal(mu, np.sqrt(gen.dispersion), size=shape)
    cmu = HYPERBOLIC.complement(gen.psi, np.asarray(gen.delays))
    return open_unit(rng.beta(mu * gen.dispersion, cmu * gen.dispersion, size=shape))


@dataclass
class _Tally:
    subject_id: str
    delays: tuple
    below: np.ndarray
    above: np.ndarray
    replications: int
    replications_with_invalid: int


def _tally_subject(args):
    index, gen, replications, seed = args
    y = simulate_subject(gen, subject_rng(seed, index), replications)
    below = y < 0.0
    above = y > 1.0
    return _Tally(
        subject_id=gen.subject_id,
        delays=gen.delays,
        below=below.sum(axis=0),
        above=above.sum(axis=0),
        replications=replications,
        replications_with_invalid=int(np.any(below | above, axis=1).sum()),
    )


@dataclass
class SimulationReport:
    """Invalid-point accounting for a Monte Carlo campaign.

    ``invalid_by_delay[j]`` is the proportion of draws at ``delays[j]``
    that fall strictly outside [0, 1]. ``subjects_with_any_invalid_proportion``
    is taken over all ``n_subjects * replications`` simulated subjects.
    """

    replications: int
    n_subjects: int
    n_delays: int
    seed: int
    models: list
    delays: list
    n_points: int
    invalid_count: int
    invalid_total_proportion: float
    below_total_proportion: float
    above_total_proportion: float
    invalid_by_delay: list
    below_by_delay: list
    above_by_delay: list
    invalid_count_by_delay: list
    subjects_with_any_invalid_proportion: float
    per_subject: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def run_monte_carlo(generators, replications=1000, seed=0, workers=1):
    """Replicate every generator ``replications`` times and count invalid points.

    Parameters
    ----------
    generators : sequence of SubjectGenerator
    replications : int
    seed : int
        Campaign seed; together with each generator's position it fixes every draw.
    workers : int
        Process count for subject-level parallelism. Does not affect results.

    Returns
    -------
    SimulationReport
    """
    generators = list(generators)
    if not generators:
        raise DomainError("run_monte_carlo needs at least one generator")
    if replications < 1:
        raise DomainError("replications must be positive")
    tasks = [(i, g, int(replications), int(seed)) for i, g in enumerate(generators)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(_tally_subject, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        tallies = [_tally_subject(t) for t in tasks]

    delays = sorted({d for t in tallies for d in t.delays})
    col = {d: j for j, d in enumerate(delays)}
    below = np.zeros(len(delays), dtype=np.int64)
    above = np.zeros(len(delays), dtype=np.int64)
    draws = np.zeros(len(delays), dtype=np.int64)
    per_subject = []
    any_invalid = 0
    for t in tallies:
        idx = [col[d] for d in t.delays]
        np.add.at(below, idx, t.below)
        np.add.at(above, idx, t.above)
        np.add.at(draws, idx, t.replications)
        any_invalid += t.replications_with_invalid
        n_sub = t.replications * len(t.delays)
        per_subject.append(
            {
                "subject_id": t.subject_id,
                "below_proportion": float(t.below.sum() / n_sub),
                "above_proportion": float(t.above.sum() / n_sub),
                "invalid_proportion": float((t.below.sum() + t.above.sum()) / n_sub),
                "replications_with_invalid_proportion": t.replications_with_invalid / t.replications,
            }
        )
    invalid = below + above
    n_points = int(draws.sum())
    return SimulationReport(
        replications=int(replications),
        n_subjects=len(generators),
        n_delays=len(delays),
        seed=int(seed),
        models=sorted({g.model.value for g in generators}),
        delays=delays,
        n_points=n_points,
        invalid_count=int(invalid.sum()),
        invalid_total_proportion=float(invalid.sum() / n_points),
        below_total_proportion=float(below.sum() / n_points),
        above_total_proportion=float(above.sum() / n_points),
        invalid_by_delay=(invalid / draws).tolist(),
        below_by_delay=(below / draws).tolist(),
        above_by_delay=(above / draws).tolist(),
        invalid_count_by_delay=invalid.tolist(),
        subjects_with_any_invalid_proportion=any_invalid / (len(generators) * int(replications)),
        per_subject=per_subject,
    )


def generators_from_fits(fits, delays_by_subject, model, method=None):
    """Build generators from converged fits.

    By default NLS fits feed the normal model (dispersion sigma^2) and SLT
    fits feed the beta model (dispersion phi); pass ``method`` to draw beta
    generators from plain beta fits instead. ``delays_by_subject`` maps
    subject id to that subject's delay grid. Unconverged fits are skipped.
    """
    from .estimation import Method

    model = GeneratorModel(model)
    if method is None:
        method = Method.NLS if model is GeneratorModel.NORMAL else Method.SLT
    method = Method(method)
    if (method is Method.NLS) != (model is GeneratorModel.NORMAL):
        raise DomainError(f"{method.value} fits cannot drive the {model.value} model")
    out = []
    for f in fits:
        if getattr(f, "method", None) is not method or not getattr(f, "converged", False):
            continue
        out.append(SubjectGenerator(f.subject_id, model, f.psi_hat, f.dispersion, delays_by_subject[f.subject_id]))
    return out
