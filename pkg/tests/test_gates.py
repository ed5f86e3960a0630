import numpy as np
import pytest
from scipy.linalg import expm

from paircat_lab.codes import build_code
from paircat_lab.gates import (averaged_displacement_diag, holonomic_z, junction_z,
                               kerr_cz, kerr_z_rotation, laguerre_sequence,
                               x_and_xx_generators)


@pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0])
def test_kerr_z_cat(alpha):
    for parity in (0, 1):
        code = build_code("cat", alpha=alpha, parity=parity, cutoff=28)
        gate = kerr_z_rotation(code)
        assert np.linalg.norm(gate.projected - np.diag([1.0, 1.0j])) < 1e-10
        assert gate.leakage < 1e-10
        assert gate.is_unitary()


@pytest.mark.parametrize("gamma,delta", [(1.2, 0), (2.0, 1), (1.6, 2)])
def test_kerr_z_paircat(gamma, delta):
    code = build_code("paircat", gamma=gamma, delta=delta, cutoff=24)
    gate = kerr_z_rotation(code)
    assert np.linalg.norm(gate.projected - np.diag([1.0, 1.0j])) < 1e-10
    assert gate.leakage < 1e-10


def test_kerr_cz_cat_pair():
    c1 = build_code("cat", alpha=1.5, parity=0, cutoff=18)
    c2 = build_code("cat", alpha=1.5, parity=1, cutoff=18)
    gate = kerr_cz(c1, c2)
    assert np.linalg.norm(gate.projected - np.diag([1, 1, 1, -1])) < 1e-10
    assert gate.leakage < 1e-10


def test_kerr_cz_paircat_pair():
    c1 = build_code("paircat", gamma=1.2, delta=0, cutoff=12)
    c2 = build_code("paircat", gamma=1.2, delta=1, cutoff=12)
    gate = kerr_cz(c1, c2)
    assert np.linalg.norm(gate.projected - np.diag([1, 1, 1, -1])) < 1e-10


def test_kerr_cz_budget():
    c1 = build_code("paircat", gamma=1.2, delta=0, cutoff=12)
    with pytest.raises(ValueError):
        kerr_cz(c1, c1, dim_budget=100)


def test_laguerre_recurrence_matches_displacement():
    # oracle: diagonal of expm(beta a+ - beta* a) on a well-converged space
    big = 60
    beta = 1.3
    n = np.arange(big + 1)
    a = np.diag(np.sqrt(n[1:]), 1)
    disp = expm(beta * a.conj().T - np.conj(beta) * a)
    got = averaged_displacement_diag(big, beta)
    assert np.allclose(got[:25], np.diag(disp)[:25].real, atol=1e-10)


def test_junction_z_trivial_drive():
    code = build_code("cat", alpha=2.0, parity=0, cutoff=30)
    c_plus, c_minus, off = junction_z(code, 0.0)
    assert abs(c_plus - 2.0) < 1e-12
    assert abs(c_minus) < 1e-12
    assert off == 0.0


def test_junction_z_offdiagonals_vanish():
    code = build_code("paircat", gamma=1.5, delta=1, cutoff=20)
    for beta in (0.4, 1.0, 2.3):
        _cp, _cm, off = junction_z(code, beta, 0.7 * beta)
        assert off == 0.0


def test_junction_z_parity_dependence():
    c0 = build_code("cat", alpha=2.0, parity=0, cutoff=34)
    c1 = build_code("cat", alpha=2.0, parity=1, cutoff=34)
    _, cm0, _ = junction_z(c0, 1.0)
    _, cm1, _ = junction_z(c1, 1.0)
    assert abs(cm0 - cm1) > 1e-4


def test_holonomic_z():
    assert np.allclose(holonomic_z(0, 0.0), np.eye(2))
    u = holonomic_z(0, np.pi)
    phase = u[0, 0]
    assert np.allclose(u / phase, np.eye(2), atol=1e-12)
    code = build_code("paircat", gamma=1.5, delta=2, cutoff=16)
    u2 = holonomic_z(code, 0.4)
    assert np.allclose(u2, np.exp(-0.4j * 2) * np.diag([1, np.exp(-0.8j)]))


def test_holonomic_limit_phase():
    # the vanishing-gamma code states carry the phase (2 mu + delta) phi
    from paircat_lab.fock import space
    from paircat_lab.states import pair_cat_state

    spc = space(8, 8)
    phi, g, delta = 0.3, 0.01, 1
    for mu in (0, 1):
        rotated = pair_cat_state(spc, g * np.exp(1j * phi), delta, mu)
        base = spc.index_of((mu, mu + delta))
        got = np.angle(rotated.amplitudes[base])
        assert abs(got - (2 * mu + delta) * phi) < 1e-3


def test_x_generator_paircat():
    code = build_code("paircat", gamma=2.0, delta=0, cutoff=26)
    gate, dev = x_and_xx_generators(code, 0.3)
    assert dev < 1e-3


def test_xx_generator_cat():
    c1 = build_code("cat", alpha=2.0, parity=0, cutoff=22)
    c2 = build_code("cat", alpha=1.8, parity=0, cutoff=22)
    gate, dev = x_and_xx_generators((c1, c2), 0.1)
    # x-coefficient close to 2 g a1^2 a2^2
    target = 2 * 0.1 * 4.0 * 1.8**2
    assert abs(gate.projected[0, 3] - target) < 0.02 * target
    assert dev < 0.02


def test_x_generator_zero_coupling():
    code = build_code("paircat", gamma=1.5, delta=0, cutoff=18)
    gate, dev = x_and_xx_generators(code, 0.0)
    assert np.linalg.norm(gate.projected) == 0
