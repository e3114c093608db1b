import numpy as np
import pytest

from zitau.distributions import (
    FrechetCopula,
    JointPmfGrid,
    ZipMargin,
    joint_pmf_grid,
    lower_fh,
    upper_fh,
)
from zitau.errors import CostGuardError, PrecisionError
from zitau.oracle import crossing_probs, decompose, true_tau, true_tau_bruteforce


def test_two_by_two_example():
    g = JointPmfGrid(np.array([[0.4, 0.1], [0.1, 0.4]]))
    # 2 * (0.4 * 0.4) - 2 * (0.1 * 0.1)
    assert true_tau_bruteforce(g) == pytest.approx(0.30, abs=1e-15)
    assert true_tau(g) == pytest.approx(0.30, abs=1e-15)


def test_independence_is_zero():
    m = ZipMargin(0.8, 2.0)
    assert true_tau(joint_pmf_grid(m, m, FrechetCopula(0.0))) == pytest.approx(0.0, abs=1e-12)


def test_random_grids_match_bruteforce():
    rng = np.random.default_rng(17)
    for _ in range(50):
        k = int(rng.integers(1, 15))
        p = rng.random((k, int(rng.integers(1, 15)))) ** 3
        g = JointPmfGrid.from_probs(p)
        assert true_tau(g) == pytest.approx(true_tau_bruteforce(g), abs=1e-10)


@pytest.mark.parametrize("rho", [0.0, 0.5, 1.0])
def test_zip_grid_matches_bruteforce(rho):
    m1, m2 = ZipMargin(0.8, 2.0), ZipMargin(0.2, 2.0)
    g = joint_pmf_grid(m1, m2, FrechetCopula(rho))
    assert true_tau(g) == pytest.approx(true_tau_bruteforce(g), abs=1e-10)


def test_bruteforce_cost_guard():
    g = JointPmfGrid(np.full((40, 40), 1 / 1600))
    with pytest.raises(CostGuardError):
        true_tau_bruteforce(g)


def test_precision_guard():
    m = ZipMargin(0.8, 8.0)
    g = joint_pmf_grid(m, m, FrechetCopula(0.5), tail_tol=1e-6)
    with pytest.raises(PrecisionError):
        true_tau(g)


def test_monotone_in_rho():
    fx, fy = ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)
    vals = [true_tau(joint_pmf_grid(fx, fy, FrechetCopula(r))) for r in np.linspace(0, 1, 11)]
    assert np.all(np.diff(vals) > 0)


def test_crossing_probs():
    a = np.array([0.0, 0.5, 0.5])
    b = np.array([0.0, 1.0])
    assert crossing_probs(a, b) == pytest.approx((0.5, 0.5))


@pytest.mark.parametrize("copula", [FrechetCopula(0.2), FrechetCopula(0.8), upper_fh, lower_fh])
@pytest.mark.parametrize("margins", [
    (ZipMargin(0.8, 2.0), ZipMargin(0.8, 2.0)),
    (ZipMargin(0.2, 2.0), ZipMargin(0.2, 8.0)),
    (ZipMargin(0.6, 8.0), ZipMargin(0.3, 3.0)),
])
def test_decomposition_identity(margins, copula):
    d = decompose(joint_pmf_grid(*margins, copula))
    assert d.tau_a_assembled == pytest.approx(d.tau_direct, abs=1e-10)
    assert d.p00 + d.p01 + d.p10 + d.p11 == pytest.approx(1.0, abs=1e-9)


def test_decomposition_random_grids():
    rng = np.random.default_rng(23)
    for _ in range(30):
        p = rng.random((6, 6)) ** 4
        d = decompose(JointPmfGrid.from_probs(p))
        assert d.tau_a_assembled == pytest.approx(d.tau_direct, abs=1e-12)


def test_decomposition_without_positive_mass():
    g = JointPmfGrid(np.array([[0.5, 0.5], [0.0, 0.0]]))
    d = decompose(g)
    assert d.tau11_flagged
    assert d.tau_a_assembled == pytest.approx(d.tau_direct)


def test_product_grid_bruteforce_zero():
    a = np.array([0.2, 0.5, 0.3])
    b = np.array([0.6, 0.1, 0.3])
    assert true_tau_bruteforce(JointPmfGrid(np.outer(a, b))) == pytest.approx(0.0, abs=1e-12)


def test_decompose_upper_bound_grid():
    from zitau.bounds import exact_tau_a_bounds

    m = ZipMargin(0.8, 2.0)
    d = decompose(joint_pmf_grid(m, m, upper_fh))
    assert d.p1_star == 0.0
    assert d.tau_a_assembled == pytest.approx(exact_tau_a_bounds(m, m).upper, abs=1e-9)


def test_decompose_independence():
    m = ZipMargin(0.8, 2.0)
    d = decompose(joint_pmf_grid(m, m, FrechetCopula(0.0)))
    assert d.tau_a_assembled == pytest.approx(0.0, abs=1e-9)


def test_comonotone_tau_is_upper_bound():
    from zitau.bounds import exact_tau_a_bounds

    for fx, fy in [(ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)), (ZipMargin(0.2, 2.0), ZipMargin(0.2, 2.0))]:
        t = true_tau(joint_pmf_grid(fx, fy, FrechetCopula(1.0)))
        assert t == pytest.approx(exact_tau_a_bounds(fx, fy).upper, abs=1e-8)
