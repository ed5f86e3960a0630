"""Code spaces, logical operators, error-correction-condition checks.

A CodeSpace bundles the two logical kets with the projector and the logical
X/Y/Z built from outer products of the code words (Y anti-Hermitian by
convention, so all matrices are real for real code parameters).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy import optimize

from . import states
from .fock import Ket, MultiModeSpace, Operator, space as make_space


@dataclass(frozen=True)
class CodeSpace:
    """Two-dimensional code subspace with derived logical operators."""

    zero: Ket
    one: Ket
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ov = abs(self.zero.overlap(self.one))
        if ov > 1e-10:
            raise ValueError(f"logical states not orthogonal: |<0|1>| = {ov:.2e}")

    @property
    def space(self) -> MultiModeSpace:
        return self.zero.space

    def logicals(self) -> tuple[Ket, Ket]:
        return (self.zero, self.one)

    def projector(self) -> Operator:
        m = self.zero.outer() + self.one.outer()
        return Operator(self.space, sp.csr_matrix(m))

    def logical_z(self) -> Operator:
        m = self.zero.outer() - self.one.outer()
        return Operator(self.space, sp.csr_matrix(m))

    def logical_x(self) -> Operator:
        m = self.zero.outer(self.one) + self.one.outer(self.zero)
        return Operator(self.space, sp.csr_matrix(m))

    def logical_y(self) -> Operator:
        """Anti-Hermitian by construction: |1><0| - |0><1|."""
        m = self.one.outer(self.zero) - self.zero.outer(self.one)
        return Operator(self.space, sp.csr_matrix(m))

    def logical_matrix(self, op: Operator) -> np.ndarray:
        """2x2 matrix <mu|O|nu> in the logical basis."""
        vecs = [self.zero.amplitudes, self.one.amplitudes]
        out = np.empty((2, 2), dtype=complex)
        for i, u in enumerate(vecs):
            for j, w in enumerate(vecs):
                out[i, j] = np.vdot(u, op.mat @ w)
        return out

    def maximally_mixed(self) -> np.ndarray:
        return 0.5 * (self.zero.outer() + self.one.outer())


def build_code(kind: str, **params) -> CodeSpace:
    """Construct a code space.

    kind = 'cat'      : params alpha, parity, cutoff (or space), mu pair implied
    kind = 'paircat'  : params gamma, delta, cutoff (or space)
    kind = 'multimode': params gamma, deltas, modes, qudit_dim, spacing, cutoff
    kind = 'concat'   : params alpha, cutoff -- three-mode repetition of the
                        two-component cat, logicals |alpha_{parity=mu}>^(x3)
    """
    tail_tol = params.pop("tail_tol", None)
    kwargs = {} if tail_tol is None else {"tail_tol": tail_tol}
    if kind == "cat":
        alpha, parity = params["alpha"], params.get("parity", 0)
        sp_ = params.get("space") or make_space(params["cutoff"])
        zero = states.cat_code_state(sp_, alpha, parity, 0, **kwargs)
        one = states.cat_code_state(sp_, alpha, parity, 1, **kwargs)
        meta = {"kind": kind, "alpha": alpha, "parity": parity}
    elif kind == "paircat":
        gamma, delta = params["gamma"], params.get("delta", 0)
        sp_ = params.get("space") or make_space(params["cutoff"], params["cutoff"])
        zero = states.pair_cat_state(sp_, gamma, delta, 0, **kwargs)
        one = states.pair_cat_state(sp_, gamma, delta, 1, **kwargs)
        meta = {"kind": kind, "gamma": gamma, "delta": delta}
    elif kind == "multimode":
        gamma = params["gamma"]
        modes = params.get("modes", 3)
        deltas = tuple(params.get("deltas", (0,) * (modes - 1)))
        d = params.get("qudit_dim", 2)
        s = params.get("spacing", 0)
        sp_ = params.get("space") or make_space(*([params["cutoff"]] * modes))
        if d == 2:
            mus = (0, 1)
        else:
            # qudit codes expose the mu in {0, d/2} qubit subspace
            mus = (0, d // 2)
        zero = states.multimode_code_state(sp_, gamma, deltas, d, s, mus[0], **kwargs)
        one = states.multimode_code_state(sp_, gamma, deltas, d, s, mus[1], **kwargs)
        meta = {"kind": kind, "gamma": gamma, "deltas": deltas, "qudit_dim": d, "spacing": s}
    elif kind == "concat":
        alpha = params["alpha"]
        sp_ = params.get("space") or make_space(*([params["cutoff"]] * 3))
        vecs = []
        for mu in (0, 1):
            c1 = states.cat_state(make_space(sp_.modes[0].cutoff), alpha, mu, **kwargs)
            v = c1.amplitudes
            triple = np.kron(np.kron(v, v), v)
            vecs.append(Ket.from_amplitudes(sp_, triple, tail_tol=None))
        zero, one = vecs
        meta = {"kind": kind, "alpha": alpha}
    else:
        raise ValueError(f"unknown code kind {kind!r}")
    return CodeSpace(zero, one, meta)


# ---------------------------------------------------------------------------
# Knill-Laflamme decomposition


@dataclass(frozen=True)
class KLCoefficients:
    """Projection of P E+ E' P onto span{P, X, Y, Z}."""

    c: complex
    x: complex
    y: complex
    z: complex
    residual: float

    def max_logical(self) -> float:
        return max(abs(self.x), abs(self.y), abs(self.z))

    def as_dict(self) -> dict:
        out = {}
        for name in ("c", "x", "y", "z"):
            v = getattr(self, name)
            out[name] = {"re": float(np.real(v)), "im": float(np.imag(v))}
        out["residual"] = self.residual
        return out


def kl_decompose(code: CodeSpace, error: Operator, error_prime: Operator) -> KLCoefficients:
    """Hilbert-Schmidt coefficients of M = P E+ E' P.

    c = Tr(P M)/2, z = Tr(Z M)/2, x = Tr(X M)/2, y = Tr(Y+ M)/2, and the
    Frobenius residual of M minus its reconstruction.
    """
    if error.space != code.space or error_prime.space != code.space:
        raise ValueError("error operators live on a different space than the code")
    vecs = [code.zero.amplitudes, code.one.amplitudes]
    left = [error.mat @ v for v in vecs]
    right = [error_prime.mat @ v for v in vecs]
    m = np.array([[np.vdot(left[i], right[j]) for j in range(2)] for i in range(2)])
    c = (m[0, 0] + m[1, 1]) / 2
    z = (m[0, 0] - m[1, 1]) / 2
    x = (m[0, 1] + m[1, 0]) / 2
    y = (m[1, 0] - m[0, 1]) / 2
    recon = np.array([[c + z, x - y], [x + y, c - z]])
    residual = float(np.linalg.norm(m - recon))
    return KLCoefficients(complex(c), complex(x), complex(y), complex(z), residual)


@dataclass
class KLReport:
    """Correctability report over a labelled error set."""

    code_meta: dict
    tolerance: float
    entries: list = field(default_factory=list)

    def add(self, label: str, label_prime: str, coeffs: KLCoefficients):
        self.entries.append(
            {
                "error": label,
                "error_prime": label_prime,
                **coeffs.as_dict(),
                "correctable": bool(coeffs.max_logical() <= self.tolerance),
                "logical_to_trivial_ratio": float(
                    coeffs.max_logical() / abs(coeffs.c) if abs(coeffs.c) > 0 else np.inf
                ),
            }
        )

    def all_correctable(self) -> bool:
        return all(e["correctable"] for e in self.entries)

    def worst(self) -> float:
        return max((max(abs(complex(e["x"]["re"], e["x"]["im"])),
                        abs(complex(e["y"]["re"], e["y"]["im"])),
                        abs(complex(e["z"]["re"], e["z"]["im"]))) for e in self.entries), default=0.0)

    def to_json(self, indent=2) -> str:
        return json.dumps(
            {"code": {k: repr(v) if isinstance(v, complex) else v for k, v in self.code_meta.items()},
             "tolerance": self.tolerance,
             "entries": self.entries},
            indent=indent,
        )


def kl_report(code: CodeSpace, labelled_errors: dict[str, Operator], tolerance: float = 1e-9) -> KLReport:
    """Pairwise KL decomposition over a labelled error dictionary."""
    report = KLReport(dict(code.metadata), tolerance)
    labels = list(labelled_errors)
    for la in labels:
        for lb in labels:
            report.add(la, lb, kl_decompose(code, labelled_errors[la], labelled_errors[lb]))
    return report


# ---------------------------------------------------------------------------
# dephasing projections and sweet spots


def dephasing_projection(code: CodeSpace, mode: str, k: int):
    """Diagonal logical action of the k-th dephasing power on a pair-cat code.

    Returns (2x2 diagonal matrix from the closed-form normalization ratios,
    max relative deviation from the numeric matrix projection).  mode 'a'
    projects a+^k a^k, mode 'b' projects b+^k b^k.
    """
    if code.metadata.get("kind") != "paircat":
        raise ValueError("dephasing projection closed forms apply to pair-cat codes")
    if k < 0:
        raise ValueError("k must be >= 0")
    gamma = code.metadata["gamma"]
    delta = code.metadata["delta"]
    g2k = abs(gamma) ** (2 * k)
    entries = np.empty(2)
    for mu in (0, 1):
        if mode == "a":
            num = states.diff_code_norm(gamma, mu + k, delta + k)
        elif mode == "b":
            num = states.diff_code_norm(gamma, mu, delta - k)
        else:
            raise ValueError("mode must be 'a' or 'b'")
        entries[mu] = g2k * num / states.diff_code_norm(gamma, mu, delta)
    closed = np.diag(entries)
    numeric = _numeric_dephasing_projection(code, mode, k)
    if np.max(np.abs(np.diag(numeric))) == 0:
        rel = np.inf if np.max(entries) > 0 else 0.0
    else:
        rel = float(np.max(np.abs(np.diag(numeric) - entries) / np.abs(entries)))
    return closed, rel


def _numeric_dephasing_projection(code: CodeSpace, mode: str, k: int) -> np.ndarray:
    from .fock import annihilation_op

    idx = 0 if mode == "a" else 1
    a = annihilation_op(code.space, idx)
    ak = a
    if k == 0:
        m = code.logical_matrix(Operator(code.space, sp.identity(code.space.dimension, dtype=complex, format="csr")))
        return np.real_if_close(m)
    for _ in range(k - 1):
        ak = ak @ a
    return np.real_if_close(code.logical_matrix(ak.dag() @ ak))


def _paircat_dephasing_z(gamma: float) -> float:
    """Z-component of the k=1 dephasing projection on the delta=0 pair-cat code."""
    n = states.diff_code_norm
    return n(gamma, 1, 1) / n(gamma, 0, 0) - n(gamma, 0, 1) / n(gamma, 1, 0)


def _cat_dephasing_z(alpha: float) -> float:
    n = states.parity_code_norm
    return n(alpha, 1, 1) / n(alpha, 0, 0) - n(alpha, 0, 1) / n(alpha, 1, 0)


def dephasing_sweet_spot(scheme: str, bracket=None) -> tuple[float, float]:
    """Root of the first-order dephasing Z-coefficient and the occupation there.

    scheme 'paircat' returns (gamma*, per-mode occupation); scheme 'cat'
    returns (alpha*, mode occupation).
    """
    if scheme == "paircat":
        f, (lo, hi) = _paircat_dephasing_z, bracket or (1.0, 1.6)
        root = optimize.brentq(f, lo, hi, xtol=1e-12)
        n = states.diff_code_norm
        occ = root**2 * (n(root, 1, 1) / n(root, 0, 0) + n(root, 0, 1) / n(root, 1, 0)) / 2
    elif scheme == "cat":
        f, (lo, hi) = _cat_dephasing_z, bracket or (1.3, 1.7)
        root = optimize.brentq(f, lo, hi, xtol=1e-12)
        n = states.parity_code_norm
        occ = root**2 * (n(root, 1, 1) / n(root, 0, 0) + n(root, 0, 1) / n(root, 1, 0)) / 2
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return float(root), float(occ)


# ---------------------------------------------------------------------------
# stabilizer verification


def stabilizer_check(code: CodeSpace) -> dict:
    """Verify S P = P for the two stabilizers of the code's scheme.

    For the non-Hermitian product stabilizer also reports |P S - P| (nonzero)
    and |P S+ - P| (zero).
    """
    from .fock import annihilation_op, identity_op, number_op

    kind = code.metadata.get("kind")
    spc = code.space
    one = identity_op(spc)
    if kind == "cat":
        alpha = code.metadata["alpha"]
        a = annihilation_op(spc, 0)
        s_gamma = one + (a @ a @ a @ a) - (alpha**4) * one
        s_syms = []
    elif kind == "paircat":
        gamma, delta = code.metadata["gamma"], code.metadata["delta"]
        ab = annihilation_op(spc, 0) @ annihilation_op(spc, 1)
        s_gamma = one + (ab @ ab) - (gamma**4) * one
        s_syms = [one + number_op(spc, 1) - number_op(spc, 0) - float(delta) * one]
    elif kind == "multimode":
        gamma = code.metadata["gamma"]
        d = code.metadata["qudit_dim"]
        deltas = code.metadata["deltas"]
        prod = one
        for m in range(spc.num_modes):
            am = annihilation_op(spc, m)
            ad = am
            for _ in range(d - 1):
                ad = ad @ am
            prod = prod @ ad
        s_gamma = one + prod - (gamma ** (d * spc.num_modes)) * one
        s_syms = [
            one + number_op(spc, m + 1) - number_op(spc, m) - float(deltas[m]) * one
            for m in range(spc.num_modes - 1)
        ]
    else:
        raise ValueError(f"stabilizers not defined for code kind {kind!r}")

    def norms(stab: Operator):
        # |S P - P|_F^2 = sum_mu |S|mu> - |mu>|^2 for orthonormal logicals,
        # and |P S - P| = |S+ P - P| by taking the adjoint.
        vecs = [code.zero.amplitudes, code.one.amplitudes]
        sp_err = np.sqrt(sum(np.linalg.norm(stab.mat @ v - v) ** 2 for v in vecs))
        ps_err = np.sqrt(sum(np.linalg.norm(stab.dag().mat @ v - v) ** 2 for v in vecs))
        return float(sp_err), float(ps_err)

    s_gamma_sp, s_gamma_ps = norms(s_gamma)
    report = {
        "product_stabilizer_SP_minus_P": s_gamma_sp,
        "product_stabilizer_PS_minus_P": s_gamma_ps,
        "product_stabilizer_PSdag_minus_P": s_gamma_sp,
        "difference_stabilizers_SP_minus_P": [norms(s)[0] for s in s_syms],
    }
    return report
