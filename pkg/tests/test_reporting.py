import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sltbeta.discounting import HYPERBOLIC
from sltbeta.errors import DataError
from sltbeta.estimation import FitResult, IndifferenceSeries, Method, model_variance_by_delay
from sltbeta.io import bundled_path, read_fits_file
from sltbeta.recovery import simulate_slt_series
from sltbeta.reporting import (
    REFERENCE_TABLE,
    agreement_scatter,
    empirical_variance_by_delay,
    model_variance_matrix,
    read_agreement_csv,
    read_summary_csv,
    read_variance_csv,
    summarize_lnk,
    write_agreement_csv,
    write_summary_csv,
    write_variance_csv,
)


def fit(sid, psi, method=Method.SLT, converged=True, dispersion=10.0):
    return FitResult(sid, method, psi, dispersion, 0.0, converged, 1)


class TestSummary:
    def test_single_fit(self):
        r = summarize_lnk([fit("a", -4.0)]).row("slt")
        assert (r.min, r.q1, r.median, r.q3, r.max, r.mean, r.sd) == (-4.0,) * 6 + (0.0,)

    def test_three_fits(self):
        r = summarize_lnk([fit("a", -6.0), fit("b", -4.0), fit("c", -2.0)]).row("slt")
        assert (r.min, r.median, r.mean, r.max) == (-6.0, -4.0, -4.0, -2.0)
        assert (r.q1, r.q3) == (-5.0, -3.0)
        assert r.sd == pytest.approx(2.0)

    def test_method_filter_and_unconverged_skipped(self):
        fits = [fit("a", -4.0), fit("a", -3.0, Method.NLS), fit("b", -9.0, converged=False)]
        t = summarize_lnk(fits, method="nls")
        assert [r.method for r in t.rows] == ["nls"]
        assert summarize_lnk(fits).row("slt").n == 1

    def test_empty_rejected(self):
        with pytest.raises(DataError):
            summarize_lnk([])
        with pytest.raises(DataError):
            summarize_lnk([fit("a", -4.0, converged=False)])

    @given(st.lists(st.floats(-15, 3), min_size=1, max_size=40), st.randoms())
    def test_permutation_invariant_and_ordered(self, psis, rnd):
        fits = [fit(str(i), p) for i, p in enumerate(psis)]
        shuffled = fits[:]
        rnd.shuffle(shuffled)
        a, b = summarize_lnk(fits).row("slt"), summarize_lnk(shuffled).row("slt")
        assert (a.min, a.q1, a.median, a.q3, a.max) == (b.min, b.q1, b.median, b.q3, b.max)
        assert a.mean == pytest.approx(b.mean, abs=1e-12)
        assert a.min <= a.q1 <= a.median <= a.q3 <= a.max

    def test_reference_numbers_documented(self):
        assert REFERENCE_TABLE.row("nls").mean == -4.86
        assert REFERENCE_TABLE.row("slt").sd == 1.76

    def test_csv_round_trip(self, tmp_path):
        t = summarize_lnk([fit("a", -6.1), fit("b", -4.3), fit("c", -2.9), fit("c", -3.3, Method.NLS)])
        write_summary_csv(t, tmp_path / "s.csv")
        assert read_summary_csv(tmp_path / "s.csv") == t


class TestAgreement:
    def test_identical(self):
        a = [fit(str(i), p) for i, p in enumerate([-7, -5, -4, -2])]
        assert agreement_scatter(a, a).correlation == pytest.approx(1.0)

    def test_anticorrelated(self):
        a = [fit(str(i), p) for i, p in enumerate([-7, -5, -4, -2])]
        b = [fit(str(i), -9 - p, Method.NLS) for i, p in enumerate([-7, -5, -4, -2])]
        assert agreement_scatter(a, b).correlation == pytest.approx(-1.0)

    def test_pairs_by_subject_not_position(self):
        a = [fit("x", -1.0), fit("y", -2.0)]
        b = [fit("y", -2.5, Method.NLS), fit("x", -1.5, Method.NLS)]
        assert agreement_scatter(a, b).pairs == [(-1.0, -1.5), (-2.0, -2.5)]

    def test_mismatch_rejected(self):
        with pytest.raises(DataError):
            agreement_scatter([fit("a", -1.0)], [fit("b", -1.0)])

    def test_unconverged(self):
        a = [fit("a", -1.0), fit("b", -2.0), fit("c", -4.0, converged=False)]
        with pytest.raises(DataError):
            agreement_scatter(a, a)
        assert agreement_scatter(a, a, drop_unconverged=True).dropped == ("c",)

    def test_bundled_nls_vs_slt(self):
        fits, _ = read_fits_file(bundled_path("synthetic_fits.json"))
        nls = [f for f in fits if f.method is Method.NLS]
        slt = [f for f in fits if f.method is Method.SLT]
        assert agreement_scatter(nls, slt, drop_unconverged=True).correlation > 0.95

    def test_csv_round_trip(self, tmp_path):
        a = [fit(str(i), p) for i, p in enumerate([-7.25, -5.5, -4.125, -2.0625])]
        b = [fit(str(i), p + 0.1, Method.NLS) for i, p in enumerate([-7.25, -5.5, -4.125, -2.0625])]
        ag = agreement_scatter(a, b)
        write_agreement_csv(ag, tmp_path / "a.csv")
        back = read_agreement_csv(tmp_path / "a.csv")
        assert back.subject_ids == ag.subject_ids
        np.testing.assert_array_equal(back.lnk_a, ag.lnk_a)
        np.testing.assert_array_equal(back.lnk_b, ag.lnk_b)


class TestVariance:
    def test_identical_subjects(self, delays):
        s = IndifferenceSeries("a", delays, HYPERBOLIC.mean(-4.0, delays))
        np.testing.assert_array_equal(empirical_variance_by_delay([s, s, s]), np.zeros(7))

    def test_two_subjects(self):
        a = IndifferenceSeries("a", [1, 2, 3], [0.4, 0.3, 0.2])
        b = IndifferenceSeries("b", [1, 2, 3], [0.6, 0.3, 0.2])
        assert empirical_variance_by_delay([a, b])[0] == pytest.approx(0.02, rel=1e-14)

    def test_needs_two_subjects_and_shared_grid(self):
        a = IndifferenceSeries("a", [1, 2, 3], [0.4, 0.3, 0.2])
        with pytest.raises(DataError):
            empirical_variance_by_delay([a])
        with pytest.raises(DataError):
            empirical_variance_by_delay([a, IndifferenceSeries("b", [1, 2, 4], [0.4, 0.3, 0.2])])

    def test_order_invariant(self, delays):
        rng = np.random.default_rng(1)
        pop = [simulate_slt_series(-4.0, 10.0, delays, rng, subject_id=str(i)) for i in range(30)]
        np.testing.assert_allclose(empirical_variance_by_delay(pop), empirical_variance_by_delay(pop[::-1]), rtol=1e-13)

    def test_simulated_profile_matches_model(self, delays):
        rng = np.random.default_rng(2)
        pop = [simulate_slt_series(-4.0, 10.0, delays, rng, subject_id=str(i)) for i in range(4000)]
        emp = empirical_variance_by_delay(pop)
        model = model_variance_by_delay(fit("m", -4.0), delays)
        # sampling sd of a variance estimate is about var * sqrt(2 / (n - 1)) for
        # near-normal data; allow a generous 5x that for skewed beta draws
        np.testing.assert_allclose(emp, model, rtol=5 * np.sqrt(2 / 3999), atol=1e-4)
        assert np.argmax(emp) == np.argmax(model)

    def test_model_matrix(self, delays):
        m = model_variance_matrix([fit("a", -4.0), fit("b", -3.0, converged=False), fit("c", -6.0)], delays)
        assert m.shape == (2, 7)

    def test_csv_round_trip(self, tmp_path, delays):
        cols = {"empirical": np.linspace(0.001, 0.09, 7) / 3, "slt_median": np.sqrt(np.arange(7.0)) / 97}
        write_variance_csv(delays, cols, tmp_path / "v.csv")
        d, back = read_variance_csv(tmp_path / "v.csv")
        np.testing.assert_array_equal(d, delays)
        for k in cols:
            np.testing.assert_array_equal(back[k], cols[k])
