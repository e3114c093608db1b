import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zitau.bounds import (
    bound_cond_dists,
    closed_form_tie_lower,
    closed_form_tie_upper,
    denuit_bounds,
    empirical_cdf,
    estimate_bounds,
    exact_tau_a_bounds,
    find_threshold_lower,
    find_threshold_upper,
    tie_prob_under_bound,
)
from zitau.distributions import (
    FrechetCopula,
    PairedSample,
    ZipMargin,
    joint_pmf_grid,
    lower_fh,
    sample_pairs,
    upper_fh,
)
from zitau.errors import DegenerateError, DomainError
from zitau.oracle import crossing_probs, true_tau

SETTINGS = [
    (ZipMargin(0.8, 2.0), ZipMargin(0.8, 2.0)),
    (ZipMargin(0.2, 2.0), ZipMargin(0.2, 8.0)),
    (ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)),
    (ZipMargin(0.5, 3.0), ZipMargin(0.9, 1.5)),
    (ZipMargin(0.95, 4.0), ZipMargin(0.6, 2.0)),
]


class TestDenuit:
    def test_symmetric(self):
        r = denuit_bounds(0.5, 0.5)
        assert r.interval == pytest.approx((-0.5, 0.75))

    def test_zero_probs(self):
        assert denuit_bounds(0.0, 0.0).interval == pytest.approx((-1.0, 1.0))

    def test_heavy_zeros(self):
        assert denuit_bounds(0.7, 0.7).interval == pytest.approx((-0.18, 0.51))

    def test_domain(self):
        with pytest.raises(DomainError):
            denuit_bounds(1.2, 0.5)

    @settings(max_examples=100, deadline=None)
    @given(p1=st.floats(0, 1), p2=st.floats(0, 1))
    def test_ordered_and_in_range(self, p1, p2):
        r = denuit_bounds(p1, p2)
        assert -1 <= r.lower <= r.upper <= 1


class TestThresholds:
    def test_upper(self):
        F = ZipMargin(0.8, 2.0).cdf
        assert find_threshold_upper(F, F(0)) == 1
        assert find_threshold_upper(F, 0.1) == 0

    def test_upper_requires_level_below_one(self):
        with pytest.raises(DomainError):
            find_threshold_upper(ZipMargin(0.8, 2.0).cdf, 1.0)

    def test_lower(self):
        F = ZipMargin(0.8, 2.0).cdf
        s = find_threshold_lower(F, 0.3)
        assert F(s) + 0.3 - 1 > 0 >= F(s - 1) + 0.3 - 1

    def test_lower_requires_positive_level(self):
        with pytest.raises(DomainError):
            find_threshold_lower(ZipMargin(0.8, 2.0).cdf, 0.0)


class TestConditionalMargins:
    @pytest.mark.parametrize("fx,fy", SETTINGS)
    def test_upper_structural_zeros(self, fx, fy):
        c = bound_cond_dists(fx, fy, "upper")
        p1, p2 = fx.zero_prob(), fy.zero_prob()
        x10, x11 = (c.x10, c.x11) if p1 <= p2 else (c.y01, c.y11)
        if x10 is None:
            return
        s = int(np.flatnonzero(x11)[0])
        assert np.all(np.abs(x10[s + 1:]) <= 1e-15)
        assert np.all(np.abs(x11[:s]) <= 1e-15)
        star, _ = crossing_probs(x10, x11)
        assert abs(star) <= 1e-15

    @pytest.mark.parametrize("fx,fy", SETTINGS)
    def test_upper_tie_closed_form(self, fx, fy):
        p1, p2 = fx.zero_prob(), fy.zero_prob()
        if p1 == p2:
            return
        c = bound_cond_dists(fx, fy, "upper")
        if p1 < p2:
            _, tie = crossing_probs(c.x10, c.x11)
            closed = closed_form_tie_upper(fx, p1, p2)
        else:
            _, tie = crossing_probs(c.y01, c.y11)
            closed = closed_form_tie_upper(fy, p2, p1)
        assert abs(tie - closed) <= 1e-12

    @pytest.mark.parametrize("fx,fy", [s for s in SETTINGS if s[0].zero_prob() + s[1].zero_prob() < 1])
    def test_lower_tie_closed_form(self, fx, fy):
        p1, p2 = fx.zero_prob(), fy.zero_prob()
        c = bound_cond_dists(fx, fy, "lower")
        _, tie_x = crossing_probs(c.x11, c.x10)
        _, tie_y = crossing_probs(c.y11, c.y01)
        assert abs(tie_x - closed_form_tie_lower(fx, p1, p2)) <= 1e-12
        assert abs(tie_y - closed_form_tie_lower(fy, p2, p1)) <= 1e-12
        # lower bound: X10 sits above X11
        star, _ = crossing_probs(c.x11, c.x10)
        assert abs(star) <= 1e-15

    @pytest.mark.parametrize("fx,fy", SETTINGS[:3])
    @pytest.mark.parametrize("which", ["upper", "lower"])
    def test_match_grid_conditionals(self, fx, fy, which):
        if which == "lower" and fx.zero_prob() + fy.zero_prob() > 1:
            return
        c = bound_cond_dists(fx, fy, which)
        g = joint_pmf_grid(fx, fy, upper_fh if which == "upper" else lower_fh)
        p = g.probs
        for cond, mass in ((c.x10, p[1:, 0]), (c.x11, p[1:, 1:].sum(axis=1))):
            if cond is None:
                assert mass.sum() < 1e-12
                continue
            ref = mass / mass.sum()
            k = min(ref.size, cond.size - 1)
            np.testing.assert_allclose(cond[1:k + 1], ref[:k], atol=1e-9)

    def test_lower_domain(self):
        with pytest.raises(DomainError):
            bound_cond_dists(ZipMargin(0.1, 2.0), ZipMargin(0.1, 2.0), "lower")


class TestExactBounds:
    @pytest.mark.parametrize("fx,fy", SETTINGS + [
        (ZipMargin(0.1, 2.0), ZipMargin(0.1, 2.0)),
        (ZipMargin(0.05, 3.0), ZipMargin(0.3, 1.0)),
    ])
    def test_attained_by_frechet_bounds(self, fx, fy):
        r = exact_tau_a_bounds(fx, fy)
        assert r.upper == pytest.approx(true_tau(joint_pmf_grid(fx, fy, upper_fh)), abs=1e-9)
        assert r.lower == pytest.approx(true_tau(joint_pmf_grid(fx, fy, lower_fh)), abs=1e-9)

    @pytest.mark.parametrize("fx,fy", SETTINGS)
    @pytest.mark.parametrize("rho", [0.0, 0.2, 0.5, 0.8, 1.0])
    def test_contains_frechet_family(self, fx, fy, rho):
        r = exact_tau_a_bounds(fx, fy)
        t = true_tau(joint_pmf_grid(fx, fy, FrechetCopula(rho)))
        assert r.lower - 1e-10 <= t <= r.upper + 1e-10

    @pytest.mark.parametrize("fx,fy", SETTINGS)
    def test_nested_in_denuit(self, fx, fy):
        r = exact_tau_a_bounds(fx, fy)
        d = denuit_bounds(fx.zero_prob(), fy.zero_prob())
        assert d.lower - 1e-12 <= r.lower <= r.upper <= d.upper + 1e-12

    def test_all_zero_margin(self):
        r = exact_tau_a_bounds(ZipMargin(0.0, 2.0), ZipMargin(0.5, 2.0))
        assert r.upper == 0.0

    def test_tie_prob_under_bound_is_probability(self):
        for fx, fy in SETTINGS:
            t = tie_prob_under_bound(fx, fy, "upper")
            assert 0 <= t <= 1

    def test_continuous_limit(self):
        # Huge Poisson means make every atom small, so the count corrections
        # vanish and the sharp bounds approach the unadjusted ones.
        fx, fy = ZipMargin(0.5, 500.0), ZipMargin(0.6, 500.0)
        eps = float(max(fx.pmf_table(700)[1:].max(), fy.pmf_table(700)[1:].max()))
        r = exact_tau_a_bounds(fx, fy)
        d = denuit_bounds(fx.zero_prob(), fy.zero_prob())
        assert abs(r.upper - d.upper) <= 5 * eps
        assert abs(r.lower - d.lower) <= 5 * eps


class TestEstimatedBounds:
    def test_distinct_positive_values(self):
        s = PairedSample.from_pairs([(0, 0), (0, 1), (2, 0), (3, 4), (5, 6)])
        r = estimate_bounds(s)
        assert r.pU_t11 == 0.0
        p1 = p2 = 0.4
        F = empirical_cdf(s.x)
        st_ = find_threshold_upper(F, p2)
        upper = (1 - p2**2) - 2 * (p2 - F(st_ - 1)) * (F(st_) - p2)
        assert r.upper == pytest.approx(upper, abs=1e-15)
        d = denuit_bounds(p1, p2)
        assert r.lower >= d.lower - 1e-12 and r.upper <= d.upper + 1e-12

    def test_no_positive_rows_falls_back(self):
        s = PairedSample.from_pairs([(0, 0), (1, 0), (0, 2), (0, 0)])
        r = estimate_bounds(s)
        assert r.flagged
        assert r.interval == denuit_bounds(0.75, 0.75).interval

    def test_no_positive_rows_raises(self):
        s = PairedSample.from_pairs([(0, 0), (1, 0), (0, 2)])
        with pytest.raises(DegenerateError) as exc:
            estimate_bounds(s, fallback=False)
        assert exc.value.fallback is not None

    def test_no_zeros(self):
        s = PairedSample.from_pairs([(1, 2), (2, 1), (3, 3), (3, 5)])
        r = estimate_bounds(s)
        assert -1 <= r.lower <= r.upper <= 1

    @pytest.mark.parametrize("norm", ["sample", "subsample"])
    def test_close_to_exact_for_large_samples(self, norm):
        fx, fy = ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)
        s = sample_pairs(fx, fy, FrechetCopula(0.5), 50_000, 99)
        r = estimate_bounds(s, tie_normalization=norm)
        d = denuit_bounds(fx.zero_prob(), fy.zero_prob())
        assert d.lower - 0.02 <= r.lower <= r.upper <= d.upper + 0.02

    def test_unknown_normalisation(self):
        s = PairedSample.from_pairs([(1, 2), (2, 1)])
        with pytest.raises(DomainError):
            estimate_bounds(s, tie_normalization="bogus")

    @settings(max_examples=80, deadline=None)
    @given(pairs=st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=2, max_size=80))
    def test_always_ordered(self, pairs):
        r = estimate_bounds(PairedSample.from_pairs(pairs))
        assert -1 - 1e-12 <= r.lower <= r.upper <= 1 + 1e-12


class TestListedExamples:
    def test_denuit_at_zip_zero_probs(self):
        p = ZipMargin(0.8, 2.0).zero_prob()
        r = denuit_bounds(p, p)
        assert r.lower == pytest.approx(-0.81, abs=0.005)
        assert r.upper == pytest.approx(0.90, abs=0.005)

    def test_denuit_unbalanced(self):
        r = denuit_bounds(0.827067, 0.800067)
        assert r.lower == pytest.approx(-0.07, abs=0.005)
        assert r.upper == pytest.approx(0.32, abs=0.005)

    def test_threshold_upper_examples(self):
        m0 = ZipMargin(0.8, 2.0)
        F = m0.cdf
        # the level is the exact zero probability; a value rounded below it
        # would already be exceeded at 0
        assert find_threshold_upper(F, m0.zero_prob()) == 1
        assert find_threshold_upper(F, 0.308268) == 0
        assert find_threshold_upper(F, 0.0) == 0
        m = ZipMargin(0.2, 8.0)
        table = [m.cdf(s) for s in range(60)]
        assert find_threshold_upper(m.cdf, 0.308268) == next(s for s, v in enumerate(table) if v > 0.308268)

    def test_threshold_lower_examples(self):
        F = ZipMargin(0.8, 2.0).cdf
        assert find_threshold_lower(F, 0.9) == 0
        assert find_threshold_lower(F, 0.5) == 1
        assert find_threshold_lower(F, 1.0) == 0

    def test_equal_margins_have_empty_crossing_group(self):
        m = ZipMargin(0.8, 2.0)
        c = bound_cond_dists(m, m, "upper")
        assert c.x10 is None
        assert c.x11 is not None and c.x11.sum() == pytest.approx(1.0, abs=1e-9)

    def test_lower_crossing_zero(self):
        c = bound_cond_dists(ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0), "lower")
        below, _ = crossing_probs(c.x11, c.x10)
        assert abs(below) <= 1e-15

    def test_tie_prob_point_mass(self):
        m = ZipMargin(1.0, 1e-3)
        # conditioned on both positive nearly all mass sits on (1, 1)
        assert tie_prob_under_bound(m, m, "upper", 1e-14) == pytest.approx(1.0, abs=1e-3)

    def test_tie_prob_bruteforce_double_sum(self):
        m = ZipMargin(0.8, 2.0)
        g = joint_pmf_grid(m, m, upper_fh)
        q = g.probs[1:, 1:] / g.probs[1:, 1:].sum()
        cells = [(x, y, q[x, y]) for x in range(q.shape[0]) for y in range(q.shape[1]) if q[x, y] > 0]
        brute = sum(w1 * w2 for x1, y1, w1 in cells for x2, y2, w2 in cells if x1 == x2 or y1 == y2)
        t = tie_prob_under_bound(m, m, "upper")
        assert t == pytest.approx(brute, abs=1e-12)
        assert t == pytest.approx(0.26, abs=0.01)
        p = m.zero_prob()
        assert (1 - p**2) - (1 - p) ** 2 * t == pytest.approx(0.78, abs=0.01)

    def test_tie_prob_lower_requires_positive_mass(self):
        m = ZipMargin(0.2, 8.0)
        with pytest.raises(DegenerateError):
            tie_prob_under_bound(m, m, "lower")

    def test_exact_small_inflation_rows(self):
        m = ZipMargin(0.2, 2.0)
        r = exact_tau_a_bounds(m, m)
        assert r.lower == pytest.approx(-0.06, abs=0.01)
        assert r.upper == pytest.approx(0.31, abs=0.01)
        r = exact_tau_a_bounds(m, ZipMargin(0.2, 8.0))
        assert r.lower == pytest.approx(-0.07, abs=0.01)
        assert r.upper == pytest.approx(0.31, abs=0.01)

    def test_exact_upper_heavy_inflation(self):
        assert exact_tau_a_bounds(ZipMargin(0.8, 2.0), ZipMargin(0.8, 2.0)).upper == pytest.approx(0.78, abs=0.01)
        assert exact_tau_a_bounds(ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)).upper == pytest.approx(0.77, abs=0.01)

    def test_exact_lower_over_inflated_case(self):
        m = ZipMargin(0.1, 2.0)
        p = m.zero_prob()
        r = exact_tau_a_bounds(m, m)
        assert r.lower == pytest.approx(-2 * (1 - p) ** 2, abs=1e-15)
        assert true_tau(joint_pmf_grid(m, m, lower_fh)) == pytest.approx(r.lower, abs=1e-8)
