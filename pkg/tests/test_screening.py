import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sltbeta.errors import DataError
from sltbeta.estimation import IndifferenceSeries
from sltbeta.screening import johnson_bickel_screen

unit = st.floats(0, 1, allow_nan=False)


def test_monotone_decreasing_passes():
    r = johnson_bickel_screen([0.95, 0.8, 0.5, 0.2])
    assert r.passes and r.criterion1_violations == 0 and not r.criterion2_violated


def test_single_rise_counted():
    r = johnson_bickel_screen([0.9, 0.5, 0.75, 0.2])
    assert r.criterion1_violations == 1
    assert not r.passes


def test_flat_series_fails_second_criterion():
    r = johnson_bickel_screen([0.9, 0.9, 0.9, 0.85])
    assert r.criterion2_violated
    assert r.criterion1_violations == 0
    assert not r.passes


def test_accepts_series_and_keeps_id():
    s = IndifferenceSeries("S7", [1, 7, 30, 90], [0.95, 0.8, 0.5, 0.2])
    r = johnson_bickel_screen(s)
    assert r.subject_id == "S7"
    assert r.to_row() == {"subject_id": "S7", "passes": 1, "criterion1_violations": 0, "criterion2_violated": 0}


def test_custom_thresholds():
    assert johnson_bickel_screen([0.9, 0.5, 0.75, 0.2], c1_threshold=0.3).passes
    assert not johnson_bickel_screen([0.95, 0.8, 0.5, 0.2], c2_threshold=0.8).passes


def test_too_short():
    with pytest.raises(DataError):
        johnson_bickel_screen([0.5])


@given(st.lists(unit, min_size=2, max_size=12))
def test_nonincreasing_with_enough_drop_passes(values):
    v = np.sort(values)[::-1]
    if v[0] - v[-1] >= 0.1:
        assert johnson_bickel_screen(v).passes


@given(st.lists(unit, min_size=2, max_size=12), st.floats(0, 1), st.floats(0, 1))
def test_raising_c1_never_breaks_a_pass(values, c1, extra):
    if johnson_bickel_screen(values, c1_threshold=c1).passes:
        assert johnson_bickel_screen(values, c1_threshold=c1 + extra).passes


@given(st.lists(unit, min_size=2, max_size=12))
def test_passes_definition(values):
    r = johnson_bickel_screen(values)
    assert r.passes == (r.criterion1_violations == 0 and not r.criterion2_violated)
    assert 0 <= r.criterion1_violations <= len(values) - 1
