"""Lindblad generators, dissipator action, sector-block spectra, propagation.

Superoperators act on column-stacked density matrices: vec(A rho B) =
kron(B.T, A) vec(rho).  Dissipators whose jumps commute with the photon
number difference block-diagonalize over (ket-sector, bra-sector) pairs;
the logical dephasing rate is extracted from the fixed-difference coherence
block, which keeps the scans small and fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .codes import CodeSpace
from .fock import DensityOperator, Ket, MultiModeSpace, Operator
from .states import pair_cat_sector_amplitudes


@dataclass
class LindbladGenerator:
    """Hamiltonian part plus weighted jump list."""

    space: MultiModeSpace
    hamiltonian: Operator | None = None
    jumps: list[tuple[float, Operator]] = field(default_factory=list)
    block_restriction: tuple[int, int] | None = None

    def __post_init__(self):
        for rate, _ in self.jumps:
            if rate < 0:
                raise ValueError("jump rates must be >= 0")

    def apply(self, rho: DensityOperator) -> DensityOperator:
        return dissipator_apply(self, rho)

    def liouvillian(self) -> sp.csr_matrix:
        return liouvillian(self.hamiltonian, self.jumps, self.space.dimension)

    def adjoint_identity_defect(self) -> float:
        """Norm of L+(1); zero for a trace-preserving generator."""
        d = self.space.dimension
        acc = sp.csr_matrix((d, d), dtype=complex)
        for rate, f in self.jumps:
            fdf = (f.mat.conj().T @ f.mat).tocsr()
            acc = acc + rate * (fdf - 0.5 * fdf - 0.5 * fdf)
        if self.hamiltonian is not None:
            h = self.hamiltonian.mat
            acc = acc + 1j * (h.conj().T - h)
        return float(sp.linalg.norm(acc)) if acc.nnz else 0.0


def liouvillian(hamiltonian, jumps, dim: int) -> sp.csr_matrix:
    """Sparse superoperator of -i[H, .] + sum_k rate_k D[F_k]."""
    ident = sp.identity(dim, dtype=complex, format="csr")
    L = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
    if hamiltonian is not None:
        h = hamiltonian.mat if isinstance(hamiltonian, Operator) else sp.csr_matrix(hamiltonian)
        L = L + (-1j) * (sp.kron(ident, h) - sp.kron(h.T, ident))
    for rate, f in jumps or []:
        fm = f.mat if isinstance(f, Operator) else sp.csr_matrix(f)
        fdf = (fm.conj().T @ fm).tocsr()
        L = L + rate * (sp.kron(fm.conj(), fm) - 0.5 * sp.kron(ident, fdf) - 0.5 * sp.kron(fdf.T, ident))
    return L.tocsr()


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d, order="F")


def dissipator_apply(gen: LindbladGenerator, rho: DensityOperator) -> DensityOperator:
    """Right-hand side sum kappa (F rho F+ - {F+F, rho}/2) - i[H, rho]."""
    if rho.space.dimension != gen.space.dimension:
        raise ValueError("density matrix dimension does not match the generator")
    m = np.asarray(rho.mat, dtype=complex)
    out = np.zeros_like(m, dtype=complex)
    if gen.hamiltonian is not None:
        h = gen.hamiltonian.to_dense()
        out += -1j * (h @ m - m @ h)
    for rate, f in gen.jumps:
        fd = f.to_dense()
        fdf = fd.conj().T @ fd
        out += rate * (fd @ m @ fd.conj().T - 0.5 * (fdf @ m + m @ fdf))
    return DensityOperator(gen.space, out)


def evolve(gen: LindbladGenerator, rho0: DensityOperator, t: float, steps: int | None = None,
           method: str = "auto", rtol: float = 1e-8, atol: float = 1e-12,
           trace_drift_tol: float = 1e-6, t_eval=None):
    """Propagate drho/dt = L(rho) to time t.

    method 'rk' uses adaptive RK45, 'bdf' implicit BDF with the sparse
    Liouvillian as Jacobian (stiff generators), 'expm' Krylov exponential
    action, 'auto' picks bdf.  Trace renormalization is off; drift beyond
    trace_drift_tol raises.  Returns the final DensityOperator, or the list
    of snapshots when t_eval is given.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return rho0
    L = gen.liouvillian()
    y0 = vec(rho0.mat)
    times = list(t_eval) if t_eval is not None else [t]
    if method == "auto":
        method = "bdf"
    if method == "expm":
        outs = []
        y = y0
        prev = 0.0
        for tk in times:
            y = spla.expm_multiply(L * (tk - prev), y)
            outs.append(y)
            prev = tk
    elif method in ("rk", "bdf"):
        ivp_method = "RK45" if method == "rk" else "BDF"
        kwargs = {"jac": lambda _t, _y: L} if method == "bdf" else {}
        sol = solve_ivp(lambda _t, y: L @ y, (0.0, times[-1]), y0, t_eval=times,
                        method=ivp_method, rtol=rtol, atol=atol, **kwargs)
        if not sol.success:
            raise RuntimeError(f"integration failed: {sol.message}")
        outs = [sol.y[:, k] for k in range(sol.y.shape[1])]
    else:
        raise ValueError(f"unknown method {method!r}")
    results = []
    tr0 = rho0.trace()
    for y in outs:
        m = unvec(y)
        drift = abs(np.trace(m).real - tr0)
        if drift > trace_drift_tol:
            raise RuntimeError(f"trace drift {drift:.2e} exceeds {trace_drift_tol:.1e}")
        results.append(DensityOperator(gen.space, m))
    return results if t_eval is not None else results[-1]


# ---------------------------------------------------------------------------
# fixed-difference sector machinery


def sector_dim(cutoff: int, delta: int) -> int:
    """Number of |n, n+delta> states with both occupations <= cutoff."""
    return cutoff - abs(int(delta)) + 1


def sector_pair_product(cutoff: int, delta: int) -> np.ndarray:
    """Two-mode lowering product restricted to the fixed-delta sector (index n)."""
    d = sector_dim(cutoff, delta)
    delta = abs(int(delta))
    m = np.zeros((d, d))
    for n in range(1, d):
        m[n - 1, n] = np.sqrt(n * (n + delta))
    return m


def sector_number(cutoff: int, delta: int) -> np.ndarray:
    """Mode-a number operator on the fixed-delta sector (diagonal n)."""
    d = sector_dim(cutoff, delta)
    return np.diag(np.arange(d, dtype=float))


def dephasing_rate_spectrum(gamma: float, delta: int, kappa_ii: float, kappa_n: float,
                            cutoff: int | None = None) -> float:
    """Slowest logical coherence decay of kappa_II D[a^2 b^2 - gamma^4] + kappa_n D[n].

    Works in the fixed-delta coherence block, further split into the
    (even n, odd n) sub-block that hosts |0_L><1_L|; the returned rate is the
    smallest |Re lambda| whose eigenvector overlaps the code coherence by
    more than 1/2, scaled by kappa_n / 2.
    """
    if kappa_ii <= 0:
        raise ValueError("kappa_ii must be > 0")
    delta = abs(int(delta))
    if cutoff is None:
        cutoff = suggested_sector_cutoff(gamma, delta)
    nsec = sector_dim(cutoff, delta)
    ab = sector_pair_product(cutoff, delta)
    F = ab @ ab - abs(gamma) ** 4 * np.eye(nsec)
    N = sector_number(cutoff, delta)
    idx = np.arange(nsec)
    even, odd = idx[idx % 2 == 0], idx[idx % 2 == 1]
    Fe, Fo = F[np.ix_(even, even)], F[np.ix_(odd, odd)]
    Ne, No = N[np.ix_(even, even)], N[np.ix_(odd, odd)]
    Ie, Io = np.eye(len(even)), np.eye(len(odd))

    def two_sided(A, B):
        # rho -> A rho B on the (even, odd) block, column-major vec
        return np.kron(B.T, A)

    L = kappa_ii * (
        two_sided(Fe, Fo.conj().T)
        - 0.5 * two_sided(Fe.conj().T @ Fe, Io)
        - 0.5 * two_sided(Ie, Fo.conj().T @ Fo)
    )
    L += kappa_n * (
        two_sided(Ne, No) - 0.5 * two_sided(Ne @ Ne, Io) - 0.5 * two_sided(Ie, No @ No)
    )
    v0 = pair_cat_sector_amplitudes(gamma, delta, 0, nsec - 1)[even]
    v1 = pair_cat_sector_amplitudes(gamma, delta, 1, nsec - 1)[odd]
    coh = np.outer(v0, v1.conj()).flatten(order="F")
    coh = coh / np.linalg.norm(coh)
    # the coherence block has no steady states; eigenvalues of L^-1 resolve
    # the slow end of the spectrum accurately
    w, V = np.linalg.eig(np.linalg.inv(L))
    lam = 1.0 / w
    for k in np.argsort(np.abs(lam.real)):
        overlap = abs(np.vdot(V[:, k], coh)) / np.linalg.norm(V[:, k])
        if overlap > 0.5:
            return float(abs(lam[k].real) / (kappa_n / 2.0))
    raise RuntimeError("no eigenvector overlaps the logical coherence; raise the cutoff")


def suggested_sector_cutoff(gamma: float, delta: int, extra: int = 0) -> int:
    """Cutoff keeping the pair-coherent sector tail below ~1e-12."""
    g2 = abs(gamma) ** 2
    return int(np.ceil(g2 + 7.0 * np.sqrt(g2 + 1.0) + 6)) + abs(int(delta)) + extra


# ---------------------------------------------------------------------------
# code-space projections of Hamiltonians, recovery jumps


def zeno_projected_hamiltonian(code: CodeSpace, hamiltonian: Operator) -> np.ndarray:
    """Leading-order effective generator <mu|H|nu> within the stabilized code space."""
    return code.logical_matrix(hamiltonian)


def recovery_jump(kind: str, code_zero: CodeSpace, code_err: CodeSpace | None = None,
                  delta: int | None = None) -> Operator:
    """Recovery jump operators.

    kind 'cat_loss1'      : |0_{a,0}><1_{a,1}| + |1_{a,0}><0_{a,1}| mapping the
                            odd-parity subspace back with the bit flip undone
    kind 'paircat_loss2'  : rank-2 jump from the sector-delta code back to the
                            delta=0 code; the bit-flip pairing applies for
                            negative odd delta
    kind 'autonomous_plus': a+ P_{delta=+1}
    kind 'autonomous_minus': b+ P_{delta=-1}
    """
    from .fock import creation_op, sector_projector

    spc = code_zero.space
    if kind == "cat_loss1":
        if code_err is None:
            raise ValueError("cat_loss1 needs the odd-parity code")
        m = code_zero.zero.outer(code_err.one) + code_zero.one.outer(code_err.zero)
        return Operator(spc, sp.csr_matrix(m))
    if kind == "paircat_loss2":
        if code_err is None or delta is None:
            raise ValueError("paircat_loss2 needs the shifted code and its delta")
        if delta == 0:
            raise ValueError("delta = 0 is the identity case; nothing to recover")
        if delta < 0 and delta % 2 != 0:
            m = code_zero.zero.outer(code_err.one) + code_zero.one.outer(code_err.zero)
        else:
            m = code_zero.zero.outer(code_err.zero) + code_zero.one.outer(code_err.one)
        return Operator(spc, sp.csr_matrix(m))
    if kind == "autonomous_plus":
        return creation_op(spc, 0) @ sector_projector(spc, "difference", 1)
    if kind == "autonomous_minus":
        return creation_op(spc, 1) @ sector_projector(spc, "difference", -1)
    raise ValueError(f"unknown recovery jump kind {kind!r}")


# ---------------------------------------------------------------------------
# sector-union restriction (for fast two-mode demos)


@dataclass(frozen=True)
class SectorUnionSpace:
    """Span of a few fixed-difference sectors of a two-mode space.

    Operators restricted here are exact only when they are difference-
    homogeneous (map each sector to a single sector inside the union), so
    compose difference-preserving primitives before restricting.
    """

    parent: MultiModeSpace
    deltas: tuple[int, ...]
    states: tuple[tuple[int, int], ...]
    flat_indices: np.ndarray

    @classmethod
    def build(cls, parent: MultiModeSpace, deltas) -> "SectorUnionSpace":
        if parent.num_modes != 2:
            raise ValueError("sector unions are defined for two-mode spaces")
        occ = parent.occupations()
        states, flats = [], []
        for i, (n, m) in enumerate(occ):
            if int(m) - int(n) in deltas:
                states.append((int(n), int(m)))
                flats.append(i)
        order = np.argsort([parent.index_of(s) for s in states])
        states = [states[k] for k in order]
        flats = [flats[k] for k in order]
        return cls(parent, tuple(int(d) for d in deltas), tuple(states), np.asarray(flats))

    @property
    def dimension(self) -> int:
        return len(self.states)

    def restrict_operator(self, op: Operator) -> np.ndarray:
        m = op.mat.tocsc()[:, self.flat_indices][self.flat_indices, :]
        return np.asarray(m.todense())

    def restrict_ket(self, ket: Ket) -> np.ndarray:
        return ket.amplitudes[self.flat_indices]

    def embed_matrix(self, m: np.ndarray) -> np.ndarray:
        out = np.zeros((self.parent.dimension,) * 2, dtype=complex)
        out[np.ix_(self.flat_indices, self.flat_indices)] = m
        return out

    def sector_populations(self, m: np.ndarray) -> dict[int, float]:
        pops = {d: 0.0 for d in self.deltas}
        diag = np.real(np.diag(m))
        for k, (n, mm) in enumerate(self.states):
            pops[mm - n] += float(diag[k])
        return pops
