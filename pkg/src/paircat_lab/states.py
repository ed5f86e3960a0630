"""State families on truncated Fock spaces.

Cat states (parity-projected coherent states), four-component cat code
states, pair-coherent (Barut-Girardello) states, pair-cat code states,
two-mode squeezed states, and the multimode generalizations.

Complex code parameters are supported throughout via the gamma^(2n+Delta)
series; this fixes the single phase convention of the library (rotating both
modes by theta multiplies gamma by e^{i theta}).  All normalization constants
use exponentially scaled Bessel evaluations so they stay finite well past
gamma ~ 2.5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .fock import Ket, MultiModeSpace, TAIL_TOLERANCE, swap_op

#: below this, a normalization constant counts as degenerate
NORM_FLOOR = 1e-300


# ---------------------------------------------------------------------------
# normalization constants


def parity_norm(alpha: complex, parity: int) -> float:
    """N_parity = <alpha|P_parity|alpha> = [1 + (-1)^parity e^{-2|alpha|^2}]/2."""
    return 0.5 * (1.0 + (-1) ** (parity % 2) * np.exp(-2.0 * abs(alpha) ** 2))


def parity_code_norm(alpha: complex, mu: int, parity: int) -> float:
    """Norm of the mod-4 projected coherent state Q_{2 mu + parity} P_parity |alpha>."""
    x = abs(alpha) ** 2
    return 0.5 * parity_norm(alpha, parity) + 0.5 * (-1) ** (mu % 2) * np.exp(-x) * np.cos(
        x - 0.5 * np.pi * (parity % 2)
    )


def diff_norm(gamma: complex, delta: int) -> float:
    """N_Delta = e^{-2|gamma|^2} I_Delta(2|gamma|^2), exponentially scaled."""
    return float(special.ive(abs(int(delta)), 2.0 * abs(gamma) ** 2))


def diff_code_norm(gamma: complex, mu: int, delta: int) -> float:
    """Norm of the mod-4 projected two-mode coherent state (pair-cat numerator).

    Negative delta maps back by N_{mu, -delta} = N_{mu + delta, delta}.
    """
    delta = int(delta)
    if delta < 0:
        return diff_code_norm(gamma, mu + delta, -delta)
    x = 2.0 * abs(gamma) ** 2
    return 0.5 * (special.ive(delta, x) + (-1) ** (mu % 2) * special.jv(delta, x) * np.exp(-x))


@dataclass(frozen=True)
class NormalizationTable:
    """Closed-form normalization constants for the cat and pair-cat families."""

    parity = staticmethod(parity_norm)
    parity_code = staticmethod(parity_code_norm)
    diff = staticmethod(diff_norm)
    diff_code = staticmethod(diff_code_norm)


# ---------------------------------------------------------------------------
# single-mode constructors


def coherent(space: MultiModeSpace, alpha: complex, mode: int = 0, tail_tol=TAIL_TOLERANCE) -> Ket:
    """Coherent state on one mode, vacuum elsewhere."""
    d = space.modes[mode].dimension
    amps1 = _coherent_amplitudes(alpha, d - 1)
    return _embed_single_mode(space, mode, amps1, tail_tol)


def _coherent_amplitudes(alpha: complex, nmax: int) -> np.ndarray:
    n = np.arange(nmax + 1)
    if alpha == 0:
        v = np.zeros(nmax + 1, dtype=complex)
        v[0] = 1.0
        return v
    logmag = n * np.log(abs(alpha)) - 0.5 * special.gammaln(n + 1)
    phase = np.exp(1j * n * np.angle(alpha))
    # overall scale is irrelevant (states are renormalized); keep exponents tame
    return np.exp(logmag - logmag.max()) * phase


def _embed_single_mode(space, mode, amps1, tail_tol) -> Ket:
    v = np.zeros(space.dimension, dtype=complex)
    occ = [0] * space.num_modes
    for n, c in enumerate(amps1):
        occ[mode] = n
        v[space.index_of(occ)] = c
    return Ket.from_amplitudes(space, v, tail_tol)


def cat_state(space: MultiModeSpace, alpha: complex, parity: int, mode: int = 0, tail_tol=TAIL_TOLERANCE) -> Ket:
    """Parity-projected coherent state P_parity|alpha>/sqrt(N_parity)."""
    if parity_norm(alpha, parity) < NORM_FLOOR or (alpha == 0 and parity % 2 == 1):
        raise ValueError(f"degenerate normalization for alpha={alpha}, parity={parity}")
    d = space.modes[mode].dimension
    amps1 = _coherent_amplitudes(alpha, d - 1)
    keep = np.arange(d) % 2 == parity % 2
    amps1 = np.where(keep, amps1, 0.0)
    return _embed_single_mode(space, mode, amps1, tail_tol)


def cat_code_state(space: MultiModeSpace, alpha: complex, parity: int, mu: int, mode: int = 0,
                   tail_tol=TAIL_TOLERANCE) -> Ket:
    """Four-component cat code state, supported on Fock levels 4n + 2 mu + parity."""
    if alpha == 0:
        return Ket.basis(space, _single_occ(space, mode, 2 * (mu % 2) + parity % 2))
    d = space.modes[mode].dimension
    amps1 = _coherent_amplitudes(alpha, d - 1)
    keep = np.arange(d) % 4 == (2 * (mu % 2) + parity % 2) % 4
    amps1 = np.where(keep, amps1, 0.0)
    return _embed_single_mode(space, mode, amps1, tail_tol)


def _single_occ(space, mode, n):
    occ = [0] * space.num_modes
    occ[mode] = n
    return occ


# ---------------------------------------------------------------------------
# two-mode constructors


def pair_coherent(space: MultiModeSpace, gamma: complex, delta: int, tail_tol=TAIL_TOLERANCE) -> Ket:
    """Fixed-difference eigenstate of the two-mode lowering product, eigenvalue gamma^2.

    Amplitudes gamma^(2n+delta)/sqrt(n!(n+delta)!) on |n, n+delta>.  Negative
    delta is the SWAP of the positive-delta construction.
    """
    if space.num_modes != 2:
        raise ValueError("pair-coherent states need a two-mode space")
    delta = int(delta)
    if delta < 0:
        ket = pair_coherent(_swapped(space), gamma, -delta, tail_tol)
        return Ket.from_amplitudes(space, swap_op(space).mat @ ket.amplitudes, tail_tol)
    if delta > min(m.cutoff for m in space.modes):
        raise ValueError(f"delta={delta} exceeds the truncation")
    v = np.zeros(space.dimension, dtype=complex)
    for n, c in enumerate(_pair_sector_amplitudes(gamma, delta, _sector_nmax(space, delta))):
        v[space.index_of((n, n + delta))] = c
    return Ket.from_amplitudes(space, v, tail_tol)


def _swapped(space: MultiModeSpace) -> MultiModeSpace:
    return MultiModeSpace((space.modes[1], space.modes[0]))


def _sector_nmax(space: MultiModeSpace, delta: int) -> int:
    return min(space.modes[0].cutoff, space.modes[1].cutoff - delta)


def _pair_sector_amplitudes(gamma: complex, delta: int, nmax: int, mu=None) -> np.ndarray:
    """Unnormalized-then-normalized amplitudes over the sector index n."""
    n = np.arange(nmax + 1)
    if gamma == 0:
        v = np.zeros(nmax + 1, dtype=complex)
        idx = 0 if mu is None else mu % 2
        if idx <= nmax:
            v[idx] = 1.0
        return v
    k = 2 * n + delta
    logmag = k * np.log(abs(gamma)) - 0.5 * special.gammaln(n + 1) - 0.5 * special.gammaln(n + delta + 1)
    v = np.exp(logmag - logmag.max()) * np.exp(1j * k * np.angle(gamma))
    if mu is not None:
        v = np.where(n % 2 == mu % 2, v, 0.0)
    nrm = np.linalg.norm(v)
    if nrm < NORM_FLOOR:
        raise ValueError("degenerate sector normalization")
    return v / nrm


def pair_cat_sector_amplitudes(gamma: complex, delta: int, mu: int, nmax: int) -> np.ndarray:
    """Pair-cat code state amplitudes over the sector index n (support n = mu mod 2)."""
    return _pair_sector_amplitudes(gamma, delta, nmax, mu=mu)


def pair_cat_state(space: MultiModeSpace, gamma: complex, delta: int, mu: int,
                   tail_tol=TAIL_TOLERANCE) -> Ket:
    """Pair-cat code state, supported on |2n+mu, 2n+mu+delta>.

    Equals the superposition [|gamma_D> + (-1)^mu (-i)^D |i gamma_D>] up to
    normalization.  Negative delta via SWAP.
    """
    if space.num_modes != 2:
        raise ValueError("pair-cat states need a two-mode space")
    delta = int(delta)
    if delta < 0:
        ket = pair_cat_state(_swapped(space), gamma, -delta, mu, tail_tol)
        return Ket.from_amplitudes(space, swap_op(space).mat @ ket.amplitudes, tail_tol)
    v = np.zeros(space.dimension, dtype=complex)
    amps = pair_cat_sector_amplitudes(gamma, delta, mu, _sector_nmax(space, delta))
    for n, c in enumerate(amps):
        v[space.index_of((n, n + delta))] = c
    return Ket.from_amplitudes(space, v, tail_tol)


def two_mode_squeezed(space: MultiModeSpace, xi: float, delta: int, tail_tol=TAIL_TOLERANCE) -> Ket:
    """Two-mode squeezed state exp[xi(a+b+ - ab)]|0, delta> for real xi."""
    if space.num_modes != 2:
        raise ValueError("two-mode squeezed states need a two-mode space")
    delta = int(delta)
    if delta < 0:
        ket = two_mode_squeezed(_swapped(space), xi, -delta, tail_tol)
        return Ket.from_amplitudes(space, swap_op(space).mat @ ket.amplitudes, tail_tol)
    nmax = _sector_nmax(space, delta)
    n = np.arange(nmax + 1)
    t = np.tanh(xi)
    if t == 0:
        amps = np.zeros(nmax + 1)
        amps[0] = 1.0
    else:
        logmag = n * np.log(abs(t)) + 0.5 * (
            special.gammaln(n + delta + 1) - special.gammaln(n + 1) - special.gammaln(delta + 1)
        )
        amps = np.sign(t) ** n * np.exp(logmag - logmag.max())
        amps = amps / np.linalg.norm(amps)
    v = np.zeros(space.dimension, dtype=complex)
    for k, c in enumerate(amps):
        v[space.index_of((k, k + delta))] = c
    return Ket.from_amplitudes(space, v, tail_tol)


# ---------------------------------------------------------------------------
# multimode constructors


def multimode_sector_states(space: MultiModeSpace, deltas) -> list[tuple[int, ...]]:
    """Occupation tuples (ascending) of the fixed difference-vector sector."""
    from .fock import difference_sector_states

    return difference_sector_states(space, deltas)


def multimode_code_state(space: MultiModeSpace, gamma: complex, deltas=(), qudit_dim: int = 2,
                         spacing: int = 0, mu: int = 0, tail_tol=TAIL_TOLERANCE) -> Ket:
    """Multimode qudit code state.

    The fixed difference-vector sector is indexed by n; the code state mu keeps
    the components with n = mu (mod qudit_dim), with the projected-coherent
    amplitudes gamma^(sum occ)/sqrt(prod occ!).  For qudit_dim = 2 a spacing
    S > 0 substitutes n -> (S+1) n, spreading the support so S simultaneous
    all-mode losses stay detectable.
    """
    M = space.num_modes
    deltas = tuple(int(d) for d in deltas)
    if len(deltas) != M - 1:
        raise ValueError(f"need {M - 1} differences for {M} modes, got {len(deltas)}")
    if qudit_dim < 2:
        raise ValueError("qudit_dim must be >= 2")
    if spacing < 0:
        raise ValueError("spacing must be >= 0")
    if spacing > 0 and qudit_dim != 2:
        raise ValueError("spacing generalization is defined for qudit_dim = 2")
    if not 0 <= mu < qudit_dim:
        raise ValueError(f"mu must be in 0..{qudit_dim - 1}")
    states = multimode_sector_states(space, deltas)
    if not states:
        raise ValueError(f"difference vector {deltas} not representable at this truncation")
    stride = spacing + 1
    kept = []
    for n, occ in enumerate(states):
        if spacing > 0:
            # support at sector index n = (S+1)(2k+mu)
            if n % stride != 0 or (n // stride) % 2 != mu:
                continue
        elif n % qudit_dim != mu:
            continue
        kept.append(occ)
    if not kept:
        raise ValueError("no support inside the truncation; raise cutoffs")
    v = np.zeros(space.dimension, dtype=complex)
    if gamma == 0:
        v[space.index_of(kept[0])] = 1.0
        return Ket.from_amplitudes(space, v, tail_tol)
    logs = np.array([
        sum(occ) * np.log(abs(gamma)) - 0.5 * sum(special.gammaln(o + 1) for o in occ)
        for occ in kept
    ])
    mags = np.exp(logs - logs.max())
    for occ, m in zip(kept, mags):
        v[space.index_of(occ)] = m * np.exp(1j * sum(occ) * np.angle(gamma))
    return Ket.from_amplitudes(space, v, tail_tol)
