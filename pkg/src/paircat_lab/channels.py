"""Loss and dephasing Kraus channels and the analytic loss-probability formulas.

The loss family for one mode and duration t (transmissivity eta = e^{-kt}) is
E_l = sqrt((1-eta)^l / l!) e^{-kt n/2} a^l; the dephasing family is
E_l = sqrt((kt)^l / l!) e^{-kt n^2/2} n^l.  Probabilities of definite loss
patterns are evaluated for the maximally mixed code state P/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy import optimize, special

from .codes import CodeSpace
from .fock import DensityOperator, MultiModeSpace, Operator, annihilation_op, number_op
from .states import diff_code_norm, parity_code_norm


@dataclass
class KrausChannel:
    """Ordered Kraus list with its completeness defect on the truncated space."""

    space: MultiModeSpace
    kraus: list[Operator]
    completeness_defect: float = field(init=False)
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        d = self.space.dimension
        acc = sp.csr_matrix((d, d), dtype=complex)
        for e in self.kraus:
            acc = acc + e.mat.conj().T @ e.mat
        self.completeness_defect = float(sp.linalg.norm(acc - sp.identity(d, format="csr")))
        if not self.labels:
            self.labels = [f"E{k}" for k in range(len(self.kraus))]

    def apply(self, rho: DensityOperator) -> DensityOperator:
        out = np.zeros_like(rho.mat)
        for e in self.kraus:
            m = e.mat @ rho.mat
            out += m @ e.mat.conj().T
        return DensityOperator(rho.space, out)

    def compose(self, other: "KrausChannel") -> "KrausChannel":
        """Tensor-free composition on the same space: self after other."""
        ops = [a @ b for a in self.kraus for b in other.kraus]
        labels = [f"{la}*{lb}" for la in self.labels for lb in other.labels]
        ch = KrausChannel(self.space, ops)
        ch.labels = labels
        return ch


def loss_kraus(space: MultiModeSpace, mode: int, kt: float, lmax: int | None = None) -> KrausChannel:
    """Photon-loss Kraus family on one mode; exact resummation at lmax = cutoff."""
    if kt < 0:
        raise ValueError("kt must be >= 0")
    cutoff = space.modes[mode].cutoff
    if lmax is None:
        lmax = cutoff
    eta = np.exp(-kt)
    if kt == 0:
        from .fock import identity_op

        ch = KrausChannel(space, [identity_op(space)])
        ch.labels = ["E0"]
        return ch
    nop = number_op(space, mode)
    damp = sp.diags(np.exp(-0.5 * kt * nop.mat.diagonal().real), 0).tocsr()
    a = annihilation_op(space, mode).mat
    ops, labels = [], []
    al = sp.identity(space.dimension, dtype=complex, format="csr")
    for l in range(lmax + 1):
        coef = np.sqrt((1 - eta) ** l / special.factorial(l))
        ops.append(Operator(space, (coef * damp @ al).tocsr()))
        labels.append(f"a^{l}")
        if l < lmax:
            al = (al @ a).tocsr()
    ch = KrausChannel(space, ops)
    ch.labels = labels
    return ch


def dephasing_kraus(space: MultiModeSpace, mode: int, kt: float, lmax: int | None = None) -> KrausChannel:
    """Number-dephasing Kraus family on one mode (diagonal)."""
    if kt < 0:
        raise ValueError("kt must be >= 0")
    cutoff = space.modes[mode].cutoff
    if lmax is None:
        # Poisson(kt n^2) tail below 1e-14 at n = cutoff
        mean = kt * cutoff**2
        lmax = int(np.ceil(mean + 12 * np.sqrt(mean + 1) + 12))
    if kt == 0:
        from .fock import identity_op

        ch = KrausChannel(space, [identity_op(space)])
        ch.labels = ["n^0"]
        return ch
    ndiag = number_op(space, mode).mat.diagonal().real
    gauss = np.exp(-0.5 * kt * ndiag**2)
    ops, labels = [], []
    for l in range(lmax + 1):
        coef = np.exp(0.5 * l * np.log(kt) - 0.5 * special.gammaln(l + 1))
        diag = coef * gauss * ndiag**l
        ops.append(Operator(space, sp.diags(diag, 0).tocsr()))
        labels.append(f"n^{l}")
    ch = KrausChannel(space, ops)
    ch.labels = labels
    return ch


# ---------------------------------------------------------------------------
# loss probabilities


def loss_probability(code: CodeSpace, kt: float, pattern) -> float:
    """Probability of a definite loss pattern from the maximally mixed code state.

    pattern is an integer l (single-mode code) or a pair (l, l') for the
    two-mode code; evaluates Tr{P E+E (E'+E')}/2 with the loss Kraus
    operators of each mode.
    """
    spc = code.space
    if isinstance(pattern, (int, np.integer)):
        pattern = (int(pattern),)
    pattern = tuple(int(l) for l in pattern)
    if len(pattern) != spc.num_modes:
        raise ValueError(f"need one loss exponent per mode ({spc.num_modes})")
    eta = np.exp(-kt)
    total = 0.0
    for ket in code.logicals():
        v = ket.amplitudes
        w = v.copy()
        for mode, l in enumerate(pattern):
            a = annihilation_op(spc, mode).mat
            for _ in range(l):
                w = a @ w
            ndiag = number_op(spc, mode).mat.diagonal().real
            w = np.exp(-0.5 * kt * ndiag) * w
            w = np.sqrt((1 - eta) ** l / special.factorial(l)) * w
        total += 0.5 * float(np.real(np.vdot(w, w)))
    tail = sum(k.tail_mass for k in code.logicals())
    if tail > 1e-6:
        warnings.warn(f"loss probability computed with boundary mass {tail:.1e}", stacklevel=2)
    return total


def analytic_loss_probability(kind: str, param: float, eta: float) -> float:
    """Closed-form leading uncorrectable loss probabilities.

    kind 'p2'  : two-photon loss of the parity code at alpha = param
    kind 'p11' : one-photon-each loss of the difference code at gamma = param

    The rescaled normalization constants are evaluated at the transmitted
    amplitude sqrt(eta) * param (the closed forms resum e^{-kt n} = eta^n).
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must be in (0, 1]")
    se = np.sqrt(eta) * param
    if kind == "p2":
        pref = (1 - eta) ** 2 * param**4 / 4 * np.exp(-(1 - eta) * param**2)
        return float(
            pref
            * (
                parity_code_norm(se, 1, 0) / parity_code_norm(param, 0, 0)
                + parity_code_norm(se, 0, 0) / parity_code_norm(param, 1, 0)
            )
        )
    if kind == "p11":
        pref = (1 - eta) ** 2 * param**4 / 2 * np.exp(-2 * (1 - eta) * param**2)
        return float(
            pref
            * (
                diff_code_norm(se, 1, 0) / diff_code_norm(param, 0, 0)
                + diff_code_norm(se, 0, 0) / diff_code_norm(param, 1, 0)
            )
        )
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# occupation numbers


def mean_total_photons(code: CodeSpace) -> float:
    """Tr{P N_total}/2 over all modes of the code."""
    from .fock import total_number_op

    ntot = total_number_op(code.space)
    return float(sum(0.5 * np.real(k.expectation(ntot)) for k in code.logicals()))


def mean_total_photons_closed(kind: str, param: float) -> float:
    """Closed-form total occupation of the maximally mixed code state.

    kind 'cat' (parity 0) or 'paircat' (delta 0, both modes counted).
    """
    if kind == "cat":
        n = parity_code_norm
        return float(0.5 * param**2 * (n(param, 1, 1) / n(param, 0, 0) + n(param, 0, 1) / n(param, 1, 0)))
    if kind == "paircat":
        n = diff_code_norm
        return float(param**2 * (n(param, 1, 1) / n(param, 0, 0) + n(param, 0, 1) / n(param, 1, 0)))
    raise ValueError(f"unknown kind {kind!r}")


def param_for_mean_photons(kind: str, nbar: float, bracket=(0.1, 8.0)) -> float:
    """Invert the closed-form occupation by monotone bisection.

    Both occupations approach 1 from above as the parameter vanishes, so
    only nbar above the bracket floor's occupation is reachable.
    """
    lo, hi = bracket
    f = lambda p: mean_total_photons_closed(kind, p) - nbar
    if f(lo) > 0:
        raise ValueError(
            f"nbar={nbar} below the occupation {mean_total_photons_closed(kind, lo):.6f} "
            f"at the bracket floor {lo}"
        )
    return float(optimize.brentq(f, lo, hi, xtol=1e-12))


def probability_sweep_rows(nbars, loss_rates) -> list[dict]:
    """Rows (code_kind, param, eta, nbar, prob_kind, value) over a grid.

    Occupations at the nbar -> 1 boundary are nudged to the smallest
    invertible value (the limit states are Fock pairs with occupation
    exactly 1, outside the parametrized family).
    """
    rows = []
    for nbar in nbars:
        nbar = max(float(nbar), 1.01)
        alpha = param_for_mean_photons("cat", nbar)
        gamma = param_for_mean_photons("paircat", nbar)
        for r in loss_rates:
            eta = 1.0 - r
            rows.append({"code_kind": "cat", "param": alpha, "eta": eta, "nbar": nbar,
                         "prob_kind": "p2", "value": analytic_loss_probability("p2", alpha, eta)})
            rows.append({"code_kind": "paircat", "param": gamma, "eta": eta, "nbar": nbar,
                         "prob_kind": "p11", "value": analytic_loss_probability("p11", gamma, eta)})
    return rows
