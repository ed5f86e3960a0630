import numpy as np
import pytest
from hypothesis import given, strategies as st

from paircat_lab.fock import (Ket, ModeSpace, TruncationError, annihilation_op,
                              creation_op, difference_op, identity_op, number_op,
                              sector_projector, space, swap_op)


def test_mode_space_basics():
    m = ModeSpace(5)
    assert m.dimension == 6
    with pytest.raises(ValueError):
        ModeSpace(0)


@given(st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=3), st.data())
def test_index_maps_are_mutual_inverses(cutoffs, data):
    spc = space(*cutoffs)
    flat = data.draw(st.integers(min_value=0, max_value=spc.dimension - 1))
    assert spc.index_of(spc.occupation_of(flat)) == flat
    occ = tuple(data.draw(st.integers(min_value=0, max_value=c)) for c in cutoffs)
    assert spc.occupation_of(spc.index_of(occ)) == occ


def test_annihilation_on_vacuum_and_one():
    spc = space(3)
    a = annihilation_op(spc, 0)
    vac = Ket.basis(spc, (0,))
    assert np.linalg.norm((a @ vac).amplitudes) == 0
    assert np.allclose((a @ Ket.basis(spc, (1,))).amplitudes, vac.amplitudes)


def test_two_mode_annihilation_ladder_rule():
    spc = space(4, 4)
    out = annihilation_op(spc, 0) @ Ket.basis(spc, (2, 3))
    expect = np.zeros(spc.dimension, dtype=complex)
    expect[spc.index_of((1, 3))] = np.sqrt(2)
    assert np.allclose(out.amplitudes, expect)


def test_mode_out_of_range():
    spc = space(3)
    with pytest.raises(ValueError):
        annihilation_op(spc, 1)
    with pytest.raises(ValueError):
        number_op(spc, 2)


def test_number_operator_eigenvalues():
    spc = space(6)
    n = number_op(spc, 0)
    assert Ket.basis(spc, (0,)).expectation(n) == 0
    assert Ket.basis(spc, (5,)).expectation(n) == 5


def test_difference_operator_on_two_modes():
    spc = space(6, 6)
    d = difference_op(spc)
    assert Ket.basis(spc, (2, 5)).expectation(d) == 3


def test_adjoint_involution():
    spc = space(4)
    a = annihilation_op(spc, 0)
    assert (a.dag().dag().mat - a.mat).nnz == 0


def test_commutator_below_cutoff():
    spc = space(8)
    a = annihilation_op(spc, 0)
    comm = (a @ a.dag() - a.dag() @ a).to_dense()
    # truncation corrupts only the top diagonal entry
    assert np.allclose(comm[:-1, :-1], np.eye(8))


def test_parity_projector_diagonal():
    spc = space(4)
    p0 = sector_projector(spc, "parity", 0)
    assert np.allclose(np.diag(p0.to_dense()), [1, 0, 1, 0, 1])


def test_difference_projector_support():
    spc = space(3, 3)
    p1 = sector_projector(spc, "difference", 1).to_dense()
    expect = np.zeros(spc.dimension)
    for n in range(3):
        expect[spc.index_of((n, n + 1))] = 1
    assert np.allclose(np.diag(p1), expect)


def test_negative_difference_projector_is_swap_conjugate():
    spc = space(5, 5)
    s = swap_op(spc).to_dense()
    p2 = sector_projector(spc, "difference", 2).to_dense()
    pm2 = sector_projector(spc, "difference", -2).to_dense()
    assert np.array_equal(pm2, s @ p2 @ s)


def test_empty_projector_warns():
    spc = space(3, 3)
    with pytest.warns(UserWarning):
        p = sector_projector(spc, "difference", 7)
    assert p.mat.nnz == 0


def test_projector_algebra():
    spc = space(9)
    projs = [sector_projector(spc, "parity", v).to_dense() for v in (0, 1)]
    for p in projs:
        assert np.linalg.norm(p @ p - p) < 1e-12
        assert np.linalg.norm(p - p.conj().T) < 1e-12
    assert np.linalg.norm(projs[0] @ projs[1]) == 0
    assert np.allclose(projs[0] + projs[1], np.eye(spc.dimension))


def test_difference_projectors_resolve_identity():
    spc = space(4, 4)
    total = sum(sector_projector(spc, "difference", d).to_dense() for d in range(-4, 5))
    assert np.allclose(total, np.eye(spc.dimension))


def test_mod4_projectors_resolve_identity():
    spc = space(7)
    total = sum(sector_projector(spc, "mod4", r).to_dense() for r in range(4))
    assert np.allclose(total, np.eye(spc.dimension))


def test_parity_commutation_with_annihilation():
    spc = space(10)
    a = annihilation_op(spc, 0).to_dense()
    for parity in (0, 1):
        p = sector_projector(spc, "parity", parity).to_dense()
        p_next = sector_projector(spc, "parity", parity + 1).to_dense()
        assert np.array_equal(a @ p, p_next @ a)


def test_difference_commutation_with_mode_lowering():
    spc = space(6, 6)
    a = annihilation_op(spc, 0).to_dense()
    b = annihilation_op(spc, 1).to_dense()
    for delta in (-2, 0, 1):
        p = sector_projector(spc, "difference", delta).to_dense()
        pa = sector_projector(spc, "difference", delta + 1).to_dense()
        pb = sector_projector(spc, "difference", delta - 1).to_dense()
        assert np.array_equal(a @ p, pa @ a)
        assert np.array_equal(b @ p, pb @ b)


def test_swap_examples():
    spc = space(4, 4)
    s = swap_op(spc)
    assert np.allclose((s @ Ket.basis(spc, (0, 0))).amplitudes, Ket.basis(spc, (0, 0)).amplitudes)
    assert np.allclose((s @ Ket.basis(spc, (1, 3))).amplitudes, Ket.basis(spc, (3, 1)).amplitudes)
    assert np.allclose((s @ s).to_dense(), np.eye(spc.dimension))


def test_swap_needs_equal_cutoffs():
    with pytest.raises(ValueError):
        swap_op(space(3, 4))


def test_diffvector_projector():
    spc = space(3, 3, 3)
    p = sector_projector(spc, "diffvector", (1, 0)).to_dense()
    diag = np.diag(p)
    for n in range(3):
        if n + 1 <= 3:
            assert diag[spc.index_of((n, n + 1, n + 1))] == 1
    assert diag.sum() == 3


def test_ket_normalization_and_tail():
    spc = space(5)
    amps = np.zeros(6)
    amps[0] = 3.0
    k = Ket.from_amplitudes(spc, amps)
    assert abs(k.norm() - 1) < 1e-12
    assert k.tail_mass == 0
    bad = np.zeros(6)
    bad[5] = 1.0
    with pytest.raises(TruncationError):
        Ket.from_amplitudes(spc, bad)
    ok = Ket.from_amplitudes(spc, bad, tail_tol=None)
    assert ok.tail_mass == 1.0


def test_density_validate():
    spc = space(3)
    rho = Ket.basis(spc, (1,)).to_density()
    rho.validate()
    rho.mat[0, 1] = 1.0
    with pytest.raises(ValueError):
        rho.validate()
