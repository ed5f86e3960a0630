"""Transpose recovery channel and entanglement fidelity comparisons.

The recovery Kraus operators are R_k = P E_k+ N^{-1/2} with
N = sum_j E_j P E_j+ (pseudoinverse square root), completed by the projector
onto the complement of N's support.  The entanglement fidelity for the
maximally mixed code input sigma = P/2 is
F = sum_{j,k} |Tr(R_j E_k sigma)|^2, which only ever touches the code words
as vectors, so three-mode sweeps stay cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import special

from .channels import KrausChannel
from .codes import CodeSpace, build_code
from .fock import space as make_space


@dataclass
class RecoverySpec:
    """Transpose recovery data for one code/channel pair."""

    code: CodeSpace
    channel_vectors: list  # E_k |mu_L> for each Kraus, list of [v0, v1]
    inv_sqrt: np.ndarray  # N^{-1/2} on the support
    support_projector: np.ndarray
    pinv_cutoff: float
    residual_weight: float

    def completeness_defect(self) -> float:
        """Defect of sum R+R + completion on the truncated space (projector algebra)."""
        # sum_k R_k+ R_k = N^{-1/2} N N^{-1/2} = support projector; the
        # completion (1 - support) is itself a projector, so the total is
        # exactly 1 up to the floating-point defect of the eigenbasis.
        p = self.support_projector
        return float(np.linalg.norm(p @ p - p))


def _loss_kraus_single(cutoff: int, kt: float, lmax: int) -> list[np.ndarray]:
    eta = np.exp(-kt)
    n = np.arange(cutoff + 1)
    a = np.diag(np.sqrt(n[1:]), 1)
    damp = np.diag(np.exp(-0.5 * kt * n))
    out = []
    al = np.eye(cutoff + 1)
    for l in range(lmax + 1):
        coef = np.sqrt((1 - eta) ** l / special.factorial(l))
        out.append(coef * damp @ al)
        al = al @ a
    return out


def multimode_loss_vectors(code: CodeSpace, kt: float, lmax_per_mode: int = 6,
                           weight_tol: float = 1e-8):
    """Kraus images E_k |mu_L> for equal-rate loss on every mode.

    Kraus products are enumerated in increasing total loss order and kept
    until the residual channel weight on the maximally mixed code state
    drops below weight_tol.  Returns (list of [v0, v1], labels, residual).
    """
    spc = code.space
    cutoffs = [m.cutoff for m in spc.modes]
    per_mode = [_loss_kraus_single(c, kt, min(lmax_per_mode, c)) for c in cutoffs]
    dims = spc.dims
    logicals = [k.amplitudes for k in code.logicals()]
    combos = sorted(
        itertools.product(*(range(len(p)) for p in per_mode)), key=lambda c: (sum(c), c)
    )
    vectors, labels = [], []
    total_weight = 0.0
    for combo in combos:
        vs = []
        for v in logicals:
            w = v.reshape(dims)
            for axis, l in enumerate(combo):
                w = np.tensordot(per_mode[axis][l], w, axes=(1, axis))
                w = np.moveaxis(w, 0, axis)
            vs.append(w.ravel())
        weight = 0.5 * sum(float(np.real(np.vdot(x, x))) for x in vs)
        vectors.append(vs)
        labels.append(combo)
        total_weight += weight
        if 1.0 - total_weight < weight_tol:
            break
    return vectors, labels, max(1.0 - total_weight, 0.0)


def transpose_recovery(code: CodeSpace, channel: KrausChannel | list, pinv_cutoff: float = 1e-12,
                       residual_weight: float = 0.0) -> RecoverySpec:
    """Build the transpose recovery from a channel's Kraus action on the code words."""
    if isinstance(channel, KrausChannel):
        logicals = [k.amplitudes for k in code.logicals()]
        vectors = [[e.mat @ v for v in logicals] for e in channel.kraus]
    else:
        vectors = channel
    dim = vectors[0][0].size
    nmat = np.zeros((dim, dim), dtype=complex)
    for vs in vectors:
        for v in vs:
            nmat += np.outer(v, v.conj())
    evals, evecs = np.linalg.eigh(nmat)
    keep = evals > pinv_cutoff
    if not keep.any():
        raise ValueError("channel image is numerically zero; nothing to invert")
    sub = evecs[:, keep]
    inv_sqrt = (sub / np.sqrt(evals[keep])) @ sub.conj().T
    support = sub @ sub.conj().T
    return RecoverySpec(code, vectors, inv_sqrt, support, pinv_cutoff, residual_weight)


def entanglement_fidelity(recovery: RecoverySpec) -> float:
    """F = sum_{j,k} |Tr(R_j E_k sigma)|^2 for sigma = P/2, completion included."""
    code = recovery.code
    logicals = [k.amplitudes for k in code.logicals()]
    vectors = recovery.channel_vectors
    half_inv = [[recovery.inv_sqrt @ v for v in vs] for vs in vectors]
    fid = 0.0
    for vs_j in vectors:
        for ws_k in half_inv:
            t = 0.5 * sum(np.vdot(vs_j[mu], ws_k[mu]) for mu in range(2))
            fid += abs(t) ** 2
    # completion Kraus: projector onto the complement of the channel support
    for vs_k in vectors:
        t = 0.5 * sum(
            np.vdot(logicals[mu], vs_k[mu]) - np.vdot(logicals[mu], recovery.support_projector @ vs_k[mu])
            for mu in range(2)
        )
        fid += abs(t) ** 2
    return float(fid)


def entanglement_fidelity_bell(code: CodeSpace, kraus_mats: list, recovery: RecoverySpec) -> float:
    """Reference-qubit construction of the entanglement fidelity (oracle route).

    Builds |Psi> = (|0>|0_L> + |1>|1_L>)/sqrt(2), pushes it through
    (I (x) R compose N), and returns <Psi|rho|Psi>.  Dense in the joint
    space, so keep dimensions small.
    """
    dim = code.space.dimension
    psi = np.zeros(2 * dim, dtype=complex)
    psi[:dim] = code.zero.amplitudes / np.sqrt(2)
    psi[dim:] = code.one.amplitudes / np.sqrt(2)
    rho = np.outer(psi, psi.conj())

    def apply_sys(rho, m):
        big = np.zeros_like(rho)
        for blk_i in range(2):
            for blk_j in range(2):
                big[blk_i * dim:(blk_i + 1) * dim, blk_j * dim:(blk_j + 1) * dim] = (
                    m @ rho[blk_i * dim:(blk_i + 1) * dim, blk_j * dim:(blk_j + 1) * dim] @ m.conj().T
                )
        return big

    after_noise = sum(apply_sys(rho, m) for m in kraus_mats)
    # recovery Kraus: R_k = P E_k+ N^{-1/2} built from the SAME kraus mats
    proj = code.zero.outer() + code.one.outer()
    recov_mats = [proj @ m.conj().T @ recovery.inv_sqrt for m in kraus_mats]
    recov_mats.append(np.eye(dim) - recovery.support_projector)
    after_rec = sum(apply_sys(after_noise, r) for r in recov_mats)
    return float(np.real(np.vdot(psi, after_rec @ psi)))


# ---------------------------------------------------------------------------
# three-code comparison


def figure5_codes(cutoff: int = 6, nbar_per_mode: float = 1.08, gamma3: float = 1.2):
    """Three-mode pair-cat at gamma3, con-cat matched to nbar_per_mode, single-rail."""
    paircat = build_code("multimode", gamma=gamma3, modes=3, deltas=(0, 0), cutoff=cutoff,
                         tail_tol=1e-5)
    alpha = _concat_alpha(nbar_per_mode)
    concat = build_code("concat", alpha=alpha, cutoff=cutoff, tail_tol=5e-3)
    sr_space = make_space(cutoff)
    from .fock import Ket

    single_rail = CodeSpace(Ket.basis(sr_space, (0,)), Ket.basis(sr_space, (1,)),
                            {"kind": "singlerail"})
    return {"paircat3": paircat, "concat": concat, "singlerail": single_rail}


def _concat_alpha(nbar_per_mode: float) -> float:
    from scipy import optimize

    from .states import parity_norm

    def per_mode(a):
        return 0.5 * a**2 * (parity_norm(a, 1) / parity_norm(a, 0) + parity_norm(a, 0) / parity_norm(a, 1))

    return float(optimize.brentq(lambda a: per_mode(a) - nbar_per_mode, 0.2, 3.0, xtol=1e-12))


def figure5_sweep(loss_rates, cutoff: int = 6, nbar_per_mode: float = 1.08,
                  gamma3: float = 1.2, weight_tol: float = 1e-6) -> list[dict]:
    """Entanglement fidelity rows (code, one_minus_eta, fidelity, truncation_defect)."""
    codes = figure5_codes(cutoff, nbar_per_mode, gamma3)
    rows = []
    for r in loss_rates:
        kt = -np.log(1.0 - r)
        for name, code in codes.items():
            vectors, _labels, residual = multimode_loss_vectors(code, kt, weight_tol=weight_tol)
            spec = transpose_recovery(code, vectors, residual_weight=residual)
            fid = entanglement_fidelity(spec)
            tail = sum(k.tail_mass for k in code.logicals())
            rows.append({
                "code": name,
                "one_minus_eta": float(r),
                "fidelity": fid,
                "truncation_defect": float(tail + residual),
            })
    return rows
