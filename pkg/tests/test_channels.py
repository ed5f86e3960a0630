import numpy as np
import pytest
from scipy import special

from paircat_lab.channels import (analytic_loss_probability, dephasing_kraus, loss_kraus,
                                  loss_probability, mean_total_photons,
                                  mean_total_photons_closed, param_for_mean_photons)
from paircat_lab.codes import build_code
from paircat_lab.fock import Ket, space


@pytest.fixture(scope="module")
def cat_sweet():
    from paircat_lab.codes import dephasing_sweet_spot

    alpha, _ = dephasing_sweet_spot("cat")
    return build_code("cat", alpha=alpha, parity=0, cutoff=40), alpha


@pytest.fixture(scope="module")
def paircat_sweet():
    from paircat_lab.codes import dephasing_sweet_spot

    gamma, _ = dephasing_sweet_spot("paircat")
    return build_code("paircat", gamma=gamma, delta=0, cutoff=24), gamma


def test_loss_kraus_identity_at_zero():
    spc = space(6)
    ch = loss_kraus(spc, 0, 0.0)
    assert len(ch.kraus) == 1
    assert np.allclose(ch.kraus[0].to_dense(), np.eye(7))


def test_loss_kraus_completeness_exact():
    spc = space(9)
    ch = loss_kraus(spc, 0, 0.23)
    assert ch.completeness_defect < 1e-12


def test_loss_kraus_single_photon_amplitude():
    spc = space(5)
    kt = np.log(2.0)
    ch = loss_kraus(spc, 0, kt)
    out = ch.kraus[1].mat @ Ket.basis(spc, (1,)).amplitudes
    assert abs(out[0] - np.sqrt(0.5)) < 1e-12
    assert np.linalg.norm(out[1:]) == 0


def test_dephasing_trivial_on_vacuum():
    spc = space(6)
    ch = dephasing_kraus(spc, 0, 0.3)
    vac = Ket.basis(spc, (0,)).to_density()
    out = ch.apply(vac)
    assert np.allclose(out.mat, vac.mat)


def test_dephasing_completeness():
    spc = space(12)
    ch = dephasing_kraus(spc, 0, 0.2)
    assert ch.completeness_defect < 1e-10


def test_dephasing_coherence_decay():
    spc = space(8)
    kt = 0.17
    ch = dephasing_kraus(spc, 0, kt)
    psi = (Ket.basis(spc, (0,)).amplitudes + Ket.basis(spc, (2,)).amplitudes) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    from paircat_lab.fock import DensityOperator

    out = ch.apply(DensityOperator(spc, rho))
    assert out.mat[0, 2] == pytest.approx(np.exp(-2 * kt) * rho[0, 2], rel=1e-12)


def test_channel_preserves_trace_and_hermiticity():
    spc = space(10)
    ch = loss_kraus(spc, 0, 0.4)
    rng = np.random.default_rng(7)
    m = rng.normal(size=(11, 11)) + 1j * rng.normal(size=(11, 11))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    from paircat_lab.fock import DensityOperator

    out = ch.apply(DensityOperator(spc, rho))
    assert abs(out.trace() - 1) < 1e-10
    assert np.linalg.norm(out.mat - out.mat.conj().T) < 1e-12


# ---------------------------------------------------------------------------
# loss probabilities


def test_loss_probability_trivial(cat_sweet):
    code, _ = cat_sweet
    assert loss_probability(code, 0.0, 0) == pytest.approx(1.0, abs=1e-12)


def test_loss_table_at_the_sweet_spots(cat_sweet, paircat_sweet):
    # derived oracle values, frozen from the closed forms and confirmed by the
    # numeric Kraus traces below (the two routes agree to machine precision)
    code_i, alpha = cat_sweet
    code_ii, gamma = paircat_sweet
    kt = -np.log(0.97)
    pr2 = loss_probability(code_i, kt, 2)
    pr11 = loss_probability(code_ii, kt, (1, 1))
    assert pr2 == pytest.approx(0.0024318733391889, rel=1e-10)
    assert pr11 == pytest.approx(0.0021378473976358, rel=1e-10)


def test_analytic_matches_numeric_kraus_trace():
    kt = -np.log(0.97)
    code = build_code("cat", alpha=1.5, parity=0, cutoff=45)
    got = analytic_loss_probability("p2", 1.5, 0.97)
    num = loss_probability(code, kt, 2)
    assert abs(got - num) <= 1e-6 * num
    code2 = build_code("paircat", gamma=1.3, delta=0, cutoff=24)
    got2 = analytic_loss_probability("p11", 1.3, 0.97)
    num2 = loss_probability(code2, kt, (1, 1))
    assert abs(got2 - num2) <= 1e-6 * num2


def test_analytic_loss_probability_trivial():
    assert analytic_loss_probability("p2", 1.5, 1.0) == 0.0
    assert analytic_loss_probability("p11", 1.5, 1.0) == 0.0


def test_large_loss_values():
    alpha = param_for_mean_photons("cat", 10.0)
    gamma = param_for_mean_photons("paircat", 10.0)
    assert analytic_loss_probability("p2", alpha, 0.8) == pytest.approx(0.27, abs=0.01)
    assert analytic_loss_probability("p11", gamma, 0.8) == pytest.approx(0.15, abs=0.01)


def test_dominance_over_grid():
    # the nbar = 1 boundary is the Fock-pair limit, nudged to stay invertible
    for nbar in np.maximum(np.linspace(1.0, 10.0, 7), 1.01):
        alpha = param_for_mean_photons("cat", nbar)
        gamma = param_for_mean_photons("paircat", nbar)
        for rate in np.linspace(0.01, 0.3, 7):
            p2 = analytic_loss_probability("p2", alpha, 1 - rate)
            p11 = analytic_loss_probability("p11", gamma, 1 - rate)
            assert p2 >= p11


# ---------------------------------------------------------------------------
# occupation numbers


def test_mean_photons_small_gamma_limit():
    code = build_code("paircat", gamma=1e-3, delta=0, cutoff=8)
    assert mean_total_photons(code) == pytest.approx(1.0, abs=1e-6)


def test_mean_photons_cat_value(cat_sweet):
    code, alpha = cat_sweet
    assert mean_total_photons(code) == pytest.approx(2.3, abs=0.05)


def test_closed_form_matches_trace():
    code = build_code("paircat", gamma=2.0, delta=0, cutoff=26)
    assert mean_total_photons_closed("paircat", 2.0) == pytest.approx(
        mean_total_photons(code), rel=1e-9)
    code_c = build_code("cat", alpha=1.7, parity=0, cutoff=30)
    assert mean_total_photons_closed("cat", 1.7) == pytest.approx(
        mean_total_photons(code_c), rel=1e-9)


def test_param_inversion_roundtrip():
    for nbar in (1.5, 4.0, 9.0):
        for kind in ("cat", "paircat"):
            p = param_for_mean_photons(kind, nbar)
            assert mean_total_photons_closed(kind, p) == pytest.approx(nbar, rel=1e-10)


# ---------------------------------------------------------------------------
# Poisson limit


def _loss_distribution_cat(alpha, eta, lmax, cutoff=70):
    code = build_code("cat", alpha=alpha, parity=0, cutoff=cutoff)
    kt = -np.log(eta)
    return np.array([loss_probability(code, kt, l) for l in range(lmax + 1)])


def _poisson(mean, lmax):
    l = np.arange(lmax + 1)
    return np.exp(l * np.log(mean) - special.gammaln(l + 1) - mean)


def test_poisson_limit_scheme_one():
    eta = 0.8
    tv = []
    for nbar in (2.0, 5.0, 9.0):
        alpha = param_for_mean_photons("cat", nbar)
        dist = _loss_distribution_cat(alpha, eta, 14)
        pois = _poisson((1 - eta) * nbar, 14)
        tv.append(0.5 * np.abs(dist - pois).sum())
    assert tv[0] > tv[1] > tv[2]


def test_poisson_limit_scheme_two():
    # the total-loss count over both modes approaches Poisson((1-eta) nbar);
    # the joint (l, l') law keeps its mode correlations at fixed eta
    eta = 0.8
    tv = []
    for nbar in (2.0, 5.0, 9.0):
        gamma = param_for_mean_photons("paircat", nbar)
        cut = int(np.ceil(gamma**2 + 7 * np.sqrt(gamma**2 + 1) + 6))
        code = build_code("paircat", gamma=gamma, delta=0, cutoff=cut)
        kt = -np.log(eta)
        lmax = 9
        total = np.zeros(lmax + 1)
        for i in range(lmax + 1):
            for j in range(lmax + 1 - i):
                total[i + j] += loss_probability(code, kt, (i, j))
        tv.append(0.5 * np.abs(total - _poisson((1 - eta) * nbar, lmax)).sum())
    assert tv[0] > tv[1] > tv[2]
