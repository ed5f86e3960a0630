import numpy as np
import pytest
from scipy import special

from paircat_lab.fock import Ket, TruncationError, annihilation_op, space
from paircat_lab.states import (cat_code_state, cat_state, coherent, diff_code_norm,
                                diff_norm, multimode_code_state, pair_cat_state,
                                pair_coherent, parity_code_norm, parity_norm,
                                two_mode_squeezed)


# ---------------------------------------------------------------------------
# series oracles (independent of the closed forms under test)


def parity_code_norm_series(alpha, mu, parity, nmax=400):
    n = np.arange(nmax)
    keep = n % 4 == (2 * mu + parity) % 4
    n = n[keep]
    return np.exp(2 * n * np.log(abs(alpha)) - special.gammaln(n + 1) - abs(alpha) ** 2).sum()


def diff_code_norm_series(gamma, mu, delta, nmax=400):
    n = np.arange(nmax)
    n = n[n % 2 == mu % 2]
    return np.exp((4 * n + 2 * delta) * np.log(abs(gamma)) - special.gammaln(n + 1)
                  - special.gammaln(n + delta + 1) - 2 * abs(gamma) ** 2).sum()


@pytest.mark.parametrize("param", [0.1, 0.5, 1.0, 1.7, 2.4, 3.0])
def test_cat_norms_match_series(param):
    for mu in (0, 1):
        for parity in (0, 1):
            closed = parity_code_norm(param, mu, parity)
            series = parity_code_norm_series(param, mu, parity)
            assert abs(closed - series) <= 1e-9 * abs(series)
    for parity in (0, 1):
        series = sum(parity_code_norm_series(param, mu, parity) for mu in (0, 1))
        assert abs(parity_norm(param, parity) - series) <= 1e-9 * series


@pytest.mark.parametrize("param", [0.1, 0.5, 1.0, 1.7, 2.4, 3.0])
def test_pair_norms_match_series(param):
    for mu in (0, 1):
        for delta in (0, 1, 2, 3):
            closed = diff_code_norm(param, mu, delta)
            series = diff_code_norm_series(param, mu, delta)
            assert abs(closed - series) <= 1e-9 * abs(series)


def test_code_norms_sum_to_sector_norm():
    for g in (0.3, 1.0, 2.0, 2.9):
        for delta in (0, 1, 3):
            total = diff_code_norm(g, 0, delta) + diff_code_norm(g, 1, delta)
            assert abs(total - diff_norm(g, delta)) <= 1e-12 * diff_norm(g, delta)


def test_negative_delta_norm_identity():
    for g in (0.7, 1.5):
        for delta in (1, 2, 3):
            for mu in (0, 1):
                assert diff_code_norm(g, mu, -delta) == pytest.approx(
                    diff_code_norm(g, mu + delta, delta), rel=1e-14)


# ---------------------------------------------------------------------------
# coherent and cat states


def test_coherent_vacuum():
    spc = space(8)
    k = coherent(spc, 0.0)
    assert np.allclose(k.amplitudes, Ket.basis(spc, (0,)).amplitudes)


def test_coherent_is_lowering_eigenstate():
    spc = space(25)
    alpha = 1.3 + 0.4j
    k = coherent(spc, alpha)
    out = annihilation_op(spc, 0) @ k
    # exact except at the top level, which the lowering cannot refill
    assert np.allclose(out.amplitudes[:-1], alpha * k.amplitudes[:-1], atol=1e-12)


def test_coherent_overlap_orthogonal_phases():
    spc = space(35)
    k1 = coherent(spc, 2.0)
    k2 = coherent(spc, 2.0j)
    assert abs(abs(k1.overlap(k2)) - np.exp(-4.0)) < 1e-10


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        coherent(space(4), 3.0)


def test_cat_limits_and_degenerate():
    spc = space(12)
    k = cat_state(spc, 1e-8, 0)
    assert abs(abs(k.amplitudes[0]) - 1) < 1e-12
    with pytest.raises(ValueError):
        cat_state(spc, 0.0, 1)


def test_cat_is_squared_lowering_eigenstate():
    spc = space(30)
    alpha = 2.0
    for parity in (0, 1):
        k = cat_state(spc, alpha, parity)
        a = annihilation_op(spc, 0)
        out = (a @ a) @ k
        assert np.allclose(out.amplitudes[:-2], alpha**2 * k.amplitudes[:-2], atol=1e-12)


def test_cat_code_state_limit_and_support():
    spc = space(14)
    assert np.argmax(np.abs(cat_code_state(spc, 0.0, 1, 0).amplitudes)) == 1
    k = cat_code_state(spc, 1.4, 1, 0)
    support = np.nonzero(np.abs(k.amplitudes) > 0)[0]
    assert set(support) <= {1, 5, 9, 13}


def test_cat_code_norm_value_at_two():
    # evaluate the closed form independently: N_mu=0,parity=0 at alpha = 2
    expect = 0.5 * parity_norm(2.0, 0) + 0.5 * np.exp(-4.0) * np.cos(4.0)
    assert parity_code_norm(2.0, 0, 0) == pytest.approx(expect, rel=1e-14)
    assert parity_code_norm(2.0, 0, 0) == pytest.approx(
        parity_code_norm_series(2.0, 0, 0), rel=1e-12)


# ---------------------------------------------------------------------------
# pair-coherent and pair-cat states


def test_pair_coherent_vacuum_limit():
    spc = space(8, 8)
    k = pair_coherent(spc, 0.0, 2)
    assert abs(abs(k.amplitudes[spc.index_of((0, 2))]) - 1) < 1e-12


def test_pair_coherent_is_product_eigenstate():
    spc = space(26, 26)
    gamma, delta = 1.5, 1
    k = pair_coherent(spc, gamma, delta)
    ab = annihilation_op(spc, 0) @ annihilation_op(spc, 1)
    out = (ab @ k).amplitudes
    ref = gamma**2 * k.amplitudes
    # compare on the sector interior (top component cannot be refilled)
    for n in range(24):
        i = spc.index_of((n, n + delta))
        assert abs(out[i] - ref[i]) < 1e-12


def test_pair_coherent_rotation_covariance():
    spc = space(24, 24)
    gamma, delta, theta = 1.4, 1, np.pi / 3
    k = pair_coherent(spc, gamma, delta)
    occ = spc.occupations().sum(axis=1)
    rotated = np.exp(1j * theta * occ) * k.amplitudes
    target = pair_coherent(spc, gamma * np.exp(1j * theta), delta)
    assert np.linalg.norm(rotated - target.amplitudes) < 1e-10


def test_pair_cat_small_gamma_limit():
    spc = space(8, 8)
    for mu in (0, 1):
        for delta in (0, 2):
            k = pair_cat_state(spc, 0.0, delta, mu)
            assert abs(abs(k.amplitudes[spc.index_of((mu, mu + delta))]) - 1) < 1e-12


def test_pair_cat_dual_route_construction():
    # projected-coherent route: Q_{2mu+delta} P_delta |gamma, gamma> normalized
    spc = space(30, 30)
    gamma, delta, mu = 2.0, 0, 1
    from paircat_lab.fock import sector_projector
    from paircat_lab.states import coherent as coh

    two_mode_coherent = np.kron(
        coh(space(30), gamma).amplitudes, coh(space(30), gamma).amplitudes)
    p = sector_projector(spc, "difference", delta).mat
    q = sector_projector(spc, "mod4", 2 * mu + delta).mat
    projected = q @ (p @ two_mode_coherent)
    projected = projected / np.linalg.norm(projected)
    series = pair_cat_state(spc, gamma, delta, mu)
    # fix the global phase before comparing
    phase = np.vdot(projected, series.amplitudes)
    phase /= abs(phase)
    assert np.linalg.norm(series.amplitudes - phase * projected) < 1e-10


def test_pair_cat_norm_value():
    for mu in (0, 1):
        expect = 0.5 * np.exp(-2.0) * (special.iv(0, 2.0) + (-1) ** mu * special.jv(0, 2.0))
        assert diff_code_norm(1.0, mu, 0) == pytest.approx(expect, rel=1e-12)
        assert diff_code_norm(1.0, mu, 0) == pytest.approx(
            diff_code_norm_series(1.0, mu, 0), rel=1e-12)


def test_pair_cat_orthogonality_across_mu():
    spc = space(20, 20)
    k0 = pair_cat_state(spc, 1.8, 1, 0)
    k1 = pair_cat_state(spc, 1.8, 1, 1)
    assert k0.overlap(k1) == 0  # disjoint Fock support


def test_pair_cat_annihilated_by_stabilizing_jump():
    spc = space(26, 26)
    gamma = 2.0
    ab = annihilation_op(spc, 0) @ annihilation_op(spc, 1)
    for mu in (0, 1):
        k = pair_cat_state(spc, gamma, 0, mu)
        resid = (ab @ ab @ k).amplitudes - gamma**4 * k.amplitudes
        # exclude the two top sector components the jump cannot refill
        for n in range(25, 23, -1):
            resid[spc.index_of((n, n))] = 0.0
        assert np.linalg.norm(resid) < 1e-10


def test_negative_delta_is_swap():
    spc = space(18, 18)
    from paircat_lab.fock import swap_op

    k = pair_cat_state(spc, 1.3, -2, 1)
    ref = swap_op(spc).mat @ pair_cat_state(spc, 1.3, 2, 1).amplitudes
    assert np.linalg.norm(k.amplitudes - ref) < 1e-12


def test_overlap_decay_asymptotics():
    spc = space(40, 40)
    for delta in (0, 1):
        for g, d in [(1.8, 2.1), (2.0, 2.4), (2.2, 1.9)]:
            k1 = pair_coherent(spc, g, delta)
            k2 = pair_coherent(spc, d, delta)
            got = abs(k1.overlap(k2)) ** 2
            expect = np.exp(-2 * (g - d) ** 2)
            assert abs(got - expect) <= 0.1 * expect
    # distinct sectors are exactly orthogonal
    assert pair_coherent(spc, 2.0, 0).overlap(pair_coherent(spc, 2.0, 1)) == 0


# ---------------------------------------------------------------------------
# squeezed states


def test_squeezed_zero_is_sector_vacuum():
    spc = space(10, 10)
    k = two_mode_squeezed(spc, 0.0, 3)
    assert abs(abs(k.amplitudes[spc.index_of((0, 3))]) - 1) < 1e-12


def test_squeezed_lives_in_sector():
    spc = space(20, 20)
    from paircat_lab.fock import sector_projector

    k = two_mode_squeezed(spc, 0.5, 2)
    p = sector_projector(spc, "difference", 2)
    assert np.linalg.norm(p.mat @ k.amplitudes - k.amplitudes) < 1e-12


def test_squeezed_not_eigenvector_of_pair_lowering():
    spc = space(24, 24)
    k = two_mode_squeezed(spc, 0.5, 0)
    ab = annihilation_op(spc, 0) @ annihilation_op(spc, 1)
    w = ab.mat @ k.amplitudes
    lam = np.vdot(k.amplitudes, w)  # least-squares optimum for a unit vector
    assert np.linalg.norm(w - lam * k.amplitudes) > 0.1


# ---------------------------------------------------------------------------
# multimode states


def test_multimode_reduces_to_cat_family():
    alpha = 1.3
    spc1 = space(17)
    for parity in (0, 1):
        for mu in (0, 1):
            got = multimode_code_state(spc1, alpha, (), qudit_dim=4, mu=2 * mu + parity)
            ref = cat_code_state(spc1, alpha, parity, mu)
            assert np.linalg.norm(got.amplitudes - ref.amplitudes) < 1e-12
    # qudit_dim 2 gives the two-component parity cat
    got = multimode_code_state(spc1, alpha, (), qudit_dim=2, mu=1)
    ref = cat_state(spc1, alpha, 1)
    assert np.linalg.norm(got.amplitudes - ref.amplitudes) < 1e-12


def test_multimode_reduces_to_pair_cat():
    spc = space(16, 16)
    for mu in (0, 1):
        got = multimode_code_state(spc, 1.6, (1,), qudit_dim=2, mu=mu)
        ref = pair_cat_state(spc, 1.6, 1, mu)
        assert np.linalg.norm(got.amplitudes - ref.amplitudes) < 1e-12


def test_three_mode_occupation():
    spc = space(9, 9, 9)
    from paircat_lab.fock import total_number_op

    ntot = total_number_op(spc)
    occ = 0.0
    for mu in (0, 1):
        k = multimode_code_state(spc, 1.2, (0, 0), qudit_dim=2, mu=mu)
        occ += 0.5 * np.real(k.expectation(ntot))
    assert abs(occ / 3 - 1.08) <= 0.02


def test_spacing_support():
    spc = space(12, 12)
    k = multimode_code_state(spc, 1.1, (0,), qudit_dim=2, spacing=1, mu=1)
    support = {spc.occupation_of(i) for i in np.nonzero(np.abs(k.amplitudes) > 0)[0]}
    assert support <= {(2, 2), (6, 6), (10, 10)}
