"""
Johnson & Bickel (2008) screen for systematic delay-discounting data.

Criterion 1 fails at every step where an indifference point exceeds the
one at the preceding delay by more than ``c1_threshold`` (a proportion of
the larger-later amount). Criterion 2 fails when the last indifference point
is not at least ``c2_threshold`` below the first. A series passes when
neither criterion fails.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DataError

__all__ = ["ScreenResult", "johnson_bickel_screen"]


@dataclass(frozen=True)
class ScreenResult:
    subject_id: str
    passes: bool
    criterion1_violations: int
    criterion2_violated: bool

    def to_row(self):
        return {
            "subject_id": self.subject_id,
            "passes": int(self.passes),
            "criterion1_violations": self.criterion1_violations,
            "criterion2_violated": int(self.criterion2_violated),
        }


def johnson_bickel_screen(series, c1_threshold=0.2, c2_threshold=0.1, subject_id=None):
    """Apply both Johnson-Bickel criteria to one subject.

    ``series`` is an :class:`~sltbeta.estimation.IndifferenceSeries` or a plain
    sequence of normalized indifference points ordered by ascending delay.
    """
    if hasattr(series, "values") and hasattr(series, "delays"):
        values = np.asarray(series.values, dtype=float)
        subject_id = series.subject_id if subject_id is None else subject_id
    else:
        values = np.asarray(series, dtype=float)
    if values.ndim != 1 or len(values) < 2:
        raise DataError("the Johnson-Bickel screen needs at least 2 indifference points")

    rises = np.diff(values)
    c1 = int(np.sum(rises > c1_threshold))
    c2 = bool(values[0] - values[-1] < c2_threshold)
    return ScreenResult(
        subject_id="" if subject_id is None else str(subject_id),
        passes=(c1 == 0) and not c2,
        criterion1_violations=c1,
        criterion2_violated=c2,
    )
