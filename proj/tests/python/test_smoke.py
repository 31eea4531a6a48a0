"""Smoke tests for the python bindings: exact identities survive the boundary."""

from fractions import Fraction as F

import pytest

import multikraw as mk

P3 = [F(1, 2), F(1, 4), F(1, 4)]


def test_version():
    assert mk.__version__


def test_krawtchouk_exact_values():
    assert mk.krawtchouk(1, 3, 6, F(1, 2)) == 0
    assert mk.krawtchouk(2, 4, 4, "1/2") == 1
    for n in range(5):
        assert mk.krawtchouk(n, 0, 4, F(1, 3)) == 1
    assert mk.krawtchouk_norm(2, 4, F(1, 2)) == 6


def test_charlier():
    assert mk.charlier(0, 5, 2) == 1
    assert mk.charlier(1, 3, 2) == F(-1, 2)  # 1 - x/lambda


def test_kernel_values_and_forms():
    x = [4, 0, 0]
    assert mk.kernel(1, x, x, P3) == 4  # C(4,1)(1/p_1 - 1)
    assert mk.kernel(0, [2, 1, 1], [1, 2, 1], P3) == 1
    for form in ("plain", "centered", "hypergeom"):
        assert mk.kernel(2, [2, 1, 1], [1, 2, 1], P3, form) == mk.kernel(
            2, [2, 1, 1], [1, 2, 1], P3
        )


def test_delta_sum_identity():
    for x in mk.enumerate_configurations(3, 3):
        for y in mk.enumerate_configurations(3, 3):
            total = sum(mk.kernel_all_degrees(x, y, P3), F(0))
            if x == y:
                assert total == 1 / mk.multinomial_pmf(x, P3)
            else:
                assert total == 0


def test_poisson_kernel_identity():
    for x in mk.enumerate_configurations(2, 3):
        for y in mk.enumerate_configurations(2, 3):
            lhs = mk.poisson_kernel(F(1, 2), x, y, P3, "series")
            rhs = mk.poisson_kernel(F(1, 2), x, y, P3, "shared-count")
            assert lhs == rhs
    assert mk.poisson_kernel_rho_min(P3) == F(-1, 3)


def test_basis_and_mvk():
    basis = mk.OrthonormalBasis.gram_schmidt(P3)
    assert basis.row_count == 2
    assert mk.mvk_raw([0, 0], [2, 1, 0], basis) == 1
    # normalized second moment: sum over |n| = 1 of Q_n(x)^2 weighted by pmf
    total = sum(
        mk.multinomial_pmf(x, P3) * F(mk.mvk_raw([1, 0], x, basis)) ** 2 / basis.squared_norm(1)
        for x in mk.enumerate_configurations(3, 3)
    )
    assert total == 3  # C(3; 1, 2)


def test_duplication():
    lhs, rhs = mk.duplication_pair(2, [2, 1, 0], [1, 1, 1], P3, F(4, 5))
    assert lhs == rhs
    masses = mk.mixing_measure([2, 1, 0], [1, 1, 1], P3, F(4, 5))
    assert sum(masses, F(0)) == 1
    assert all(m >= 0 for m in masses)
    sim = mk.matching_simulate([2, 1, 0], [1, 1, 1], P3, F(4, 5), 2000, 17)
    assert sim["seed"] == 17
    assert sum(sim["counts"]) == 2000


def test_gof_decomposition():
    observations = [[2, 1, 1], [1, 2, 1], [4, 0, 0], [2, 2, 0], [1, 1, 2], [2, 1, 1]]
    report = mk.gof_report(4, 3, observations, P3)
    assert report["mode"] == "fixed"
    assert abs(sum(report["components"]) - report["total"]) <= 1e-10 * max(1.0, report["total"])
    assert report["dfs"] == [2, 3, 4, 5]
    estimated = mk.gof_report_estimated(4, 3, observations)
    assert estimated["components"][0] == 0.0
    assert estimated["dfs"][0] == 0


def test_chi_squared_survival():
    import math

    assert mk.chi_squared_survival(0.0, 4) == 1.0
    assert abs(mk.chi_squared_survival(2 * math.log(2), 2) - 0.5) < 1e-10


def test_chain():
    spec = mk.UrnChainSpec(3, P3, 1, 1)
    rho = mk.chain_eigenvalues(spec)
    assert rho == [1, F(2, 3), F(1, 3), 0]
    P = mk.transition_matrix(spec)
    assert all(sum(row, F(0)) == 1 for row in P)
    x0 = [3, 0, 0]
    assert abs(mk.chi2_spectral(x0, 0, spec) - 7.0) < 1e-12
    assert abs(mk.chi2_spectral(x0, 5, spec) - mk.chi2_exact(x0, 5, spec)) < 1e-9
    assert mk.tv_exact(x0, 0, spec) == pytest.approx(7 / 8)
    lower, upper, l = mk.cutoff_bounds(0, 3.0, mk.UrnChainSpec(50, P3, 1, 1))
    assert lower <= upper
    csv = mk.mixing_curve_csv(x0, 5, spec)
    assert csv.startswith("l,chi2,tv,lower,upper\n")


def test_lumped_moments():
    mean, second, var = mk.lumped_moments(20, F(1, 2), 1, 0)
    assert mean == pytest.approx(20.0)
    assert second == pytest.approx(400.0)
    assert var == pytest.approx(0.0, abs=1e-9)


def test_validation_errors():
    with pytest.raises(ValueError):
        mk.UrnChainSpec(3, P3, 1, F(1, 2))  # q > min p
    with pytest.raises(ValueError):
        mk.kernel(5, [2, 1, 0], [1, 1, 1], P3)  # degree beyond N
