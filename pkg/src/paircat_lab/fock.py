"""Truncated multimode Fock-space linear algebra.

Spaces, sparse operators, kets and density operators over occupation-number
bases with a hard per-mode photon cutoff.  Everything downstream (state
constructors, code spaces, channels, Lindblad dynamics) is built on top of
these primitives.

Flat indexing is row-major (C order) over the modes in declared order, so
flat = n_0 * d_1 * d_2 * ... + n_1 * d_2 * ... + ... + n_{M-1}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

#: default bound on the occupation mass sitting at the truncation boundary
TAIL_TOLERANCE = 1e-8


class TruncationError(RuntimeError):
    """Raised when a state does not fit inside the requested truncation."""


@dataclass(frozen=True)
class ModeSpace:
    """Single bosonic mode truncated at a maximum photon number (inclusive)."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def dimension(self) -> int:
        return self.cutoff + 1


@dataclass(frozen=True)
class MultiModeSpace:
    """Tensor product of truncated modes with flat <-> occupation index maps."""

    modes: tuple[ModeSpace, ...]

    def __post_init__(self):
        if not self.modes:
            raise ValueError("need at least one mode")

    @property
    def num_modes(self) -> int:
        return len(self.modes)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.dimension for m in self.modes)

    @property
    def dimension(self) -> int:
        return int(np.prod(self.dims))

    def index_of(self, occupation) -> int:
        occ = tuple(occupation)
        if len(occ) != self.num_modes:
            raise ValueError(f"expected {self.num_modes} occupation numbers, got {len(occ)}")
        for n, m in zip(occ, self.modes):
            if not 0 <= n <= m.cutoff:
                raise ValueError(f"occupation {occ} outside truncation")
        return int(np.ravel_multi_index(occ, self.dims))

    def occupation_of(self, flat: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(flat, self.dims))

    def occupations(self) -> np.ndarray:
        """Array of shape (dimension, num_modes) listing all occupation tuples in flat order."""
        grids = np.indices(self.dims).reshape(self.num_modes, -1)
        return grids.T

    def boundary_mask(self) -> np.ndarray:
        """Boolean mask of flat states where any mode sits at its cutoff."""
        occ = self.occupations()
        cut = np.array([m.cutoff for m in self.modes])
        return (occ == cut[None, :]).any(axis=1)


def space(*cutoffs: int) -> MultiModeSpace:
    """Shorthand constructor: space(12) or space(10, 10)."""
    return MultiModeSpace(tuple(ModeSpace(c) for c in cutoffs))


@dataclass(frozen=True)
class Operator:
    """Sparse linear operator on a MultiModeSpace, flat Fock-indexed."""

    space: MultiModeSpace
    mat: sp.csr_matrix

    def __post_init__(self):
        d = self.space.dimension
        if self.mat.shape != (d, d):
            raise ValueError(f"matrix shape {self.mat.shape} does not match space dim {d}")

    @classmethod
    def from_dense(cls, space: MultiModeSpace, dense) -> "Operator":
        return cls(space, sp.csr_matrix(np.asarray(dense, dtype=complex)))

    def dag(self) -> "Operator":
        return Operator(self.space, self.mat.conj().T.tocsr())

    def to_dense(self) -> np.ndarray:
        return np.asarray(self.mat.todense())

    def norm(self) -> float:
        """Frobenius norm."""
        return float(sp.linalg.norm(self.mat))

    def trace(self) -> complex:
        return complex(self.mat.diagonal().sum())

    def _check_space(self, other):
        if self.space is not other.space and self.space != other.space:
            raise ValueError("operators live on different spaces")

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check_space(other)
            return Operator(self.space, (self.mat @ other.mat).tocsr())
        if isinstance(other, Ket):
            if other.space != self.space:
                raise ValueError("operator and ket live on different spaces")
            return Ket.unnormalized(self.space, self.mat @ other.amplitudes)
        if isinstance(other, np.ndarray):
            return self.mat @ other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Operator):
            self._check_space(other)
            return Operator(self.space, (self.mat + other.mat).tocsr())
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            self._check_space(other)
            return Operator(self.space, (self.mat - other.mat).tocsr())
        return NotImplemented

    def __mul__(self, scalar):
        return Operator(self.space, (self.mat * scalar).tocsr())

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)


@dataclass(frozen=True)
class Ket:
    """State vector with the mass at the truncation boundary recorded."""

    space: MultiModeSpace
    amplitudes: np.ndarray
    tail_mass: float
    normalized: bool = True

    @classmethod
    def from_amplitudes(cls, space: MultiModeSpace, amps, tail_tol: float | None = TAIL_TOLERANCE) -> "Ket":
        """Normalize, measure the boundary mass, and reject unconverged truncations."""
        v = np.asarray(amps, dtype=complex)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        v = v / nrm
        tail = float(np.sum(np.abs(v[space.boundary_mask()]) ** 2))
        if tail_tol is not None and tail > tail_tol:
            raise TruncationError(
                f"boundary mass {tail:.3e} exceeds tolerance {tail_tol:.1e}; raise the cutoff"
            )
        return cls(space, v, tail)

    @classmethod
    def unnormalized(cls, space: MultiModeSpace, amps) -> "Ket":
        v = np.asarray(amps, dtype=complex)
        tail = float(np.sum(np.abs(v[space.boundary_mask()]) ** 2))
        return cls(space, v, tail, normalized=False)

    @classmethod
    def basis(cls, space: MultiModeSpace, occupation) -> "Ket":
        v = np.zeros(space.dimension, dtype=complex)
        v[space.index_of(occupation)] = 1.0
        return cls.from_amplitudes(space, v, tail_tol=None)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "Ket":
        return Ket.from_amplitudes(self.space, self.amplitudes, tail_tol=None)

    def overlap(self, other: "Ket") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: Operator) -> complex:
        return complex(np.vdot(self.amplitudes, op.mat @ self.amplitudes))

    def outer(self, other: "Ket" | None = None) -> np.ndarray:
        """|self><other| as a dense matrix (other defaults to self)."""
        bra = self if other is None else other
        return np.outer(self.amplitudes, bra.amplitudes.conj())

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.space, self.outer())


@dataclass
class DensityOperator:
    """Dense density matrix over a MultiModeSpace."""

    space: MultiModeSpace
    mat: np.ndarray

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=complex)
        d = self.space.dimension
        if self.mat.shape != (d, d):
            raise ValueError(f"matrix shape {self.mat.shape} does not match space dim {d}")

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def fidelity_with_ket(self, ket: Ket) -> float:
        """<psi|rho|psi>."""
        return float(np.real(np.vdot(ket.amplitudes, self.mat @ ket.amplitudes)))

    def validate(self, herm_tol=1e-12, trace_tol=1e-10, eig_tol=1e-10):
        """Check hermiticity, unit trace, and positivity; raise on violation."""
        herm = np.max(np.abs(self.mat - self.mat.conj().T))
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: defect {herm:.2e}")
        tr = self.trace()
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} differs from 1")
        evals = np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)
        if evals.min() < -eig_tol:
            raise ValueError(f"negative eigenvalue {evals.min():.2e}")
        return self


# ---------------------------------------------------------------------------
# elementary operators


def identity_op(space: MultiModeSpace) -> Operator:
    return Operator(space, sp.identity(space.dimension, dtype=complex, format="csr"))


def zero_op(space: MultiModeSpace) -> Operator:
    d = space.dimension
    return Operator(space, sp.csr_matrix((d, d), dtype=complex))


def _mode_matrix(space: MultiModeSpace, mode: int, single: sp.spmatrix) -> sp.csr_matrix:
    """Embed a single-mode matrix into the full space (identity on other modes)."""
    if not 0 <= mode < space.num_modes:
        raise ValueError(f"mode {mode} out of range for {space.num_modes}-mode space")
    mats = []
    for k, m in enumerate(space.modes):
        mats.append(single if k == mode else sp.identity(m.dimension, dtype=complex))
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out.tocsr()


def annihilation_op(space: MultiModeSpace, mode: int = 0) -> Operator:
    """Lowering operator on one mode: <n-1|a|n> = sqrt(n)."""
    d = space.modes[mode].dimension if 0 <= mode < space.num_modes else None
    if d is None:
        raise ValueError(f"mode {mode} out of range for {space.num_modes}-mode space")
    n = np.arange(1, d)
    a = sp.diags(np.sqrt(n), 1, shape=(d, d), dtype=complex)
    return Operator(space, _mode_matrix(space, mode, a))


def creation_op(space: MultiModeSpace, mode: int = 0) -> Operator:
    return annihilation_op(space, mode).dag()


def number_op(space: MultiModeSpace, mode: int = 0) -> Operator:
    """Diagonal photon-number operator on one mode."""
    if not 0 <= mode < space.num_modes:
        raise ValueError(f"mode {mode} out of range for {space.num_modes}-mode space")
    d = space.modes[mode].dimension
    nd = sp.diags(np.arange(d, dtype=float), 0, dtype=complex)
    return Operator(space, _mode_matrix(space, mode, nd))


def total_number_op(space: MultiModeSpace) -> Operator:
    occ = space.occupations().sum(axis=1).astype(float)
    return Operator(space, sp.diags(occ, 0, dtype=complex).tocsr())


def difference_op(space: MultiModeSpace) -> Operator:
    """Photon number difference of a two-mode space: n(mode 1) - n(mode 0)."""
    if space.num_modes != 2:
        raise ValueError("difference operator needs exactly two modes")
    occ = space.occupations()
    diag = (occ[:, 1] - occ[:, 0]).astype(float)
    return Operator(space, sp.diags(diag, 0, dtype=complex).tocsr())


def sector_projector(space: MultiModeSpace, kind: str, value) -> Operator:
    """Diagonal projector onto a symmetry sector.

    kind = 'parity'   : total occupation = value (mod 2)
    kind = 'mod4'     : total occupation = value (mod 4)
    kind = 'difference': two modes, n_1 - n_0 = value
    kind = 'diffvector': M modes, nearest-neighbour differences fixed by the
                         (M-1)-tuple value

    A value outside the representable range yields the empty projector and a
    warning rather than an error.
    """
    occ = space.occupations()
    total = occ.sum(axis=1)
    if kind == "parity":
        mask = total % 2 == int(value) % 2
    elif kind == "mod4":
        mask = total % 4 == int(value) % 4
    elif kind == "difference":
        if space.num_modes != 2:
            raise ValueError("difference sector needs exactly two modes")
        mask = (occ[:, 1] - occ[:, 0]) == int(value)
    elif kind == "diffvector":
        deltas = tuple(int(v) for v in value)
        if len(deltas) != space.num_modes - 1:
            raise ValueError(f"need {space.num_modes - 1} differences, got {len(deltas)}")
        mask = np.ones(space.dimension, dtype=bool)
        for m, dv in enumerate(deltas):
            mask &= (occ[:, m + 1] - occ[:, m]) == dv
    else:
        raise ValueError(f"unknown sector kind {kind!r}")
    if not mask.any():
        warnings.warn(f"empty {kind} sector for value {value}", stacklevel=2)
    return Operator(space, sp.diags(mask.astype(complex), 0).tocsr())


def swap_op(space: MultiModeSpace) -> Operator:
    """Mode exchange SWAP|n,m> = |m,n> for a two-mode space with equal cutoffs."""
    if space.num_modes != 2:
        raise ValueError("SWAP needs exactly two modes")
    if space.modes[0].cutoff != space.modes[1].cutoff:
        raise ValueError("SWAP needs equal cutoffs")
    occ = space.occupations()
    src = np.arange(space.dimension)
    dst = np.ravel_multi_index((occ[:, 1], occ[:, 0]), space.dims)
    mat = sp.csr_matrix((np.ones(space.dimension), (dst, src)), shape=(space.dimension,) * 2, dtype=complex)
    return Operator(space, mat)


def difference_sector_states(space: MultiModeSpace, deltas) -> list[tuple[int, ...]]:
    """Occupation tuples of the fixed nearest-neighbour-difference sector, ascending."""
    if isinstance(deltas, (int, np.integer)):
        deltas = (int(deltas),)
    occ = space.occupations()
    mask = np.ones(space.dimension, dtype=bool)
    for m, dv in enumerate(deltas):
        mask &= (occ[:, m + 1] - occ[:, m]) == dv
    states = [tuple(int(x) for x in row) for row in occ[mask]]
    states.sort()
    return states
