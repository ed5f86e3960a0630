"""Quasiprobability distributions on the complex plane of fixed-difference states.

The Q distribution of a fixed-difference state is the squared overlap with
the pair-coherent family and is evaluated exactly from the Fock series; the
W distribution is the Fourier transform of the two-mode-squeeze
characteristic function over the sector, computed numerically on a discrete
grid.  Values are reported against gamma with the distribution argument
Gamma = gamma^2, matching the plotting convention where pair-coherent states
look like two-component cats.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .fock import DensityOperator, Ket


@dataclass
class DistributionGrid:
    """Sampled distribution over a complex-gamma grid with its measure."""

    delta: int
    gammas: np.ndarray  # complex 2-D array
    values: np.ndarray  # real, same shape
    kind: str  # 'Q' or 'W'
    measure: np.ndarray  # real, same shape

    def rows(self):
        for g, v, s in zip(self.gammas.ravel(), self.values.ravel(), self.measure.ravel()):
            yield {"re_gamma": float(g.real), "im_gamma": float(g.imag),
                   "value": float(v), "measure": float(s)}


def gamma_plane_measure(gamma, delta: int) -> np.ndarray:
    """sigma(gamma) = (4/pi) |gamma|^2 I_D(2|gamma|^2) K_D(2|gamma|^2), scaled Bessels.

    The K divergence at the origin is tamed by the |gamma|^2 prefactor, so
    sigma(0) = 0 for every delta.
    """
    gamma = np.asarray(gamma, dtype=complex)
    x = 2.0 * np.abs(gamma) ** 2
    with np.errstate(invalid="ignore"):
        out = 4.0 / np.pi * np.abs(gamma) ** 2 * special.ive(abs(delta), x) * special.kve(abs(delta), x)
    return np.where(np.abs(gamma) == 0, 0.0, out)


def big_gamma_measure(big_gamma, delta: int) -> np.ndarray:
    """sigma~(Gamma) = (2/pi) I_D(2|Gamma|) K_D(2|Gamma|) on the squared plane.

    At the origin the product tends to 1/(2 delta) for delta >= 1 and
    diverges logarithmically for delta = 0.
    """
    delta = abs(delta)
    x = np.asarray(2.0 * np.abs(big_gamma), dtype=float)
    with np.errstate(invalid="ignore"):
        out = 2.0 / np.pi * special.ive(delta, x) * special.kve(delta, x)
    origin = np.inf if delta == 0 else 1.0 / (np.pi * delta)
    return np.where(x == 0, origin, out)


def _sector_vector(state, delta: int):
    """Sector amplitudes (index n over |n, n+delta>) of a ket or density operator."""
    from .fock import difference_sector_states

    if isinstance(state, Ket):
        space = state.space
        states_ = difference_sector_states(space, (delta,))
        idx = [space.index_of(s) for s in states_]
        return state.amplitudes[idx], None
    if isinstance(state, DensityOperator):
        space = state.space
        states_ = difference_sector_states(space, (delta,))
        idx = [space.index_of(s) for s in states_]
        return None, state.mat[np.ix_(idx, idx)]
    if isinstance(state, np.ndarray) and state.ndim == 1:
        return state, None
    if isinstance(state, np.ndarray) and state.ndim == 2:
        return None, state
    raise TypeError("state must be a Ket, DensityOperator, or sector array")


def _pair_coherent_overlaps(vec: np.ndarray, delta: int, gammas: np.ndarray) -> np.ndarray:
    """<gamma_D|psi> over a complex grid, exponentially scaled for stability."""
    n = np.arange(vec.size)
    k = 2 * n + delta
    logfact = 0.5 * (special.gammaln(n + 1) + special.gammaln(n + delta + 1))
    g = gammas.ravel()
    out = np.zeros(g.size, dtype=complex)
    nz = np.abs(g) > 0
    logg = np.log(np.abs(g[nz]))
    # amplitude_n(gamma) * e^{-|gamma|^2} = exp(k log|g| - logfact - |g|^2) e^{i k arg g}
    expo = np.outer(k, logg) - logfact[:, None] - (np.abs(g[nz]) ** 2)[None, :]
    phase = np.exp(-1j * np.outer(k, np.angle(g[nz])))
    out[nz] = (np.exp(expo) * phase * vec.conj()[:, None]).sum(axis=0)
    if (~nz).any() and delta == 0:
        out[~nz] = vec.conj()[0] if vec.size else 0.0
    scaled_norm = special.ive(abs(delta), 2.0 * np.abs(g) ** 2)
    # overlap = (scaled sum) / sqrt(I_D e^{-2|g|^2}) since sum carries e^{-|g|^2}
    with np.errstate(divide="ignore", invalid="ignore"):
        res = out / np.sqrt(scaled_norm)
    res[scaled_norm == 0] = 0.0
    return res.reshape(gammas.shape)


def q_function(state, delta: int, gammas: np.ndarray) -> DistributionGrid:
    """Q(gamma^2; rho) = <gamma_D| rho |gamma_D> evaluated via the Fock series."""
    gammas = np.asarray(gammas, dtype=complex)
    vec, mat = _sector_vector(state, delta)
    if vec is not None:
        ov = _pair_coherent_overlaps(vec, delta, gammas)
        vals = np.abs(ov) ** 2
    else:
        evals, evecs = np.linalg.eigh((mat + mat.conj().T) / 2)
        vals = np.zeros(gammas.shape)
        for lam, col in zip(evals, evecs.T):
            if abs(lam) < 1e-15:
                continue
            vals += lam * np.abs(_pair_coherent_overlaps(col, delta, gammas)) ** 2
    return DistributionGrid(delta, gammas, vals, "Q", gamma_plane_measure(gammas, delta))


def q_normalization(grid: DistributionGrid) -> float:
    """Quadrature of Q against the gamma-plane measure (resolution of identity)."""
    g = grid.gammas
    dx = float(np.real(g[1, 0] - g[0, 0]))
    dy = float(np.imag(g[0, 1] - g[0, 0]))
    if dx == 0.0 or dy == 0.0:
        # orientation flipped: rows vary along the imaginary axis
        dx = float(np.real(g[0, 1] - g[0, 0]))
        dy = float(np.imag(g[1, 0] - g[0, 0]))
    return float(np.sum(grid.values * grid.measure) * abs(dx * dy))


# ---------------------------------------------------------------------------
# W distribution


def _sector_squeeze_factory(dim: int, delta: int):
    """Callable eta -> exp(eta a+b+ - eta* ab) on the fixed-delta sector.

    Uses the SU(1,1) disentangling S = e^{zeta a+b+} (cosh r)^(-(n+m+1))
    e^{-zeta* ab} with zeta = e^{i arg eta} tanh|eta|, which is exact on the
    sector, so the large-|eta| decay of the characteristic function carries
    no truncation artifacts.
    """
    n = np.arange(dim)
    logfact = special.gammaln(n + 1) + special.gammaln(n + delta + 1)
    steps = n[:, None] - n[None, :]  # m - k
    lower = steps >= 0
    ladder = np.where(
        lower,
        np.exp(0.5 * (logfact[:, None] - logfact[None, :])
               - special.gammaln(np.where(lower, steps, 0) + 1.0)),
        0.0,
    )
    occ = 2 * n + delta

    def squeeze(eta: complex) -> np.ndarray:
        r, th = abs(eta), np.angle(eta)
        if r == 0:
            return np.eye(dim, dtype=complex)
        t = np.tanh(r)
        with np.errstate(divide="ignore"):
            powers = np.where(lower, np.exp(np.where(lower, steps, 0) * np.log(t)), 0.0)
        up = ladder * powers * np.exp(1j * th * steps * lower)
        down = (ladder * powers * (-1.0) ** np.where(lower, steps, 0)
                * np.exp(-1j * th * steps * lower)).T
        middle = np.exp(-(occ + 1.0) * np.log(np.cosh(r)))
        return (up * middle[None, :]) @ down

    return squeeze


def characteristic_halfwidth(rho_sector: np.ndarray, delta: int, tol: float = 1e-6,
                             cap: float = 24.0) -> float:
    """Half-width where |chi| falls below tol along the real axis."""
    squeeze = _sector_squeeze_factory(rho_sector.shape[0], delta)
    rs = np.linspace(0.25, cap, 96)
    chi = np.array([abs(np.trace(rho_sector @ squeeze(r))) for r in rs])
    idx = np.where(chi < tol)[0]
    if idx.size == 0:
        warnings.warn(f"characteristic function still {chi[-1]:.2e} at |eta| = {cap}", stacklevel=2)
        return float(cap)
    return float(rs[idx[0]])


def w_function(state, delta: int, gammas: np.ndarray, eta_points: int = 160,
               eta_halfwidth: float | None = None, boundary_tol: float = 1e-6) -> DistributionGrid:
    """W(gamma^2; rho) by discrete Fourier transform of the sector characteristic function.

    chi(eta) = Tr{rho exp(eta a+b+ - eta* ab)} is evaluated by rotating the
    one-parameter squeeze flow (single eigendecomposition); the transform
    runs over a symmetric square eta grid whose half-width is chosen so that
    |chi| < boundary_tol at the edge.  A warning flags aliasing when the eta
    spacing cannot resolve the requested Gamma range.
    """
    gammas = np.asarray(gammas, dtype=complex)
    raw, meas, max_imag = _w_raw_on_big_gamma(state, delta, gammas**2, eta_points,
                                              eta_halfwidth, boundary_tol)
    grid = DistributionGrid(delta, gammas, raw / meas, "W", meas)
    grid.max_imag = max_imag
    return grid


def w_on_big_gamma_grid(state, delta: int, big_gamma: np.ndarray, eta_points: int = 160,
                        eta_halfwidth: float | None = None, boundary_tol: float = 1e-6):
    """W sampled on a Gamma-plane grid; returns (values, measure, raw, max_imag).

    raw = sigma~ W is the bare Fourier integral, finite everywhere including
    the measure's origin singularity at delta = 0.
    """
    raw, meas, max_imag = _w_raw_on_big_gamma(state, delta, np.asarray(big_gamma, dtype=complex),
                                              eta_points, eta_halfwidth, boundary_tol)
    with np.errstate(invalid="ignore"):
        vals = raw / meas
    return vals, meas, raw, max_imag


def _w_raw_on_big_gamma(state, delta, big_gamma, eta_points, eta_halfwidth, boundary_tol):
    """sigma~ W (the raw Fourier integral) on a Gamma grid, plus the measure."""
    vec, mat = _sector_vector(state, delta)
    if mat is None:
        mat = np.outer(vec, vec.conj())
    if eta_halfwidth is None:
        eta_halfwidth = characteristic_halfwidth(mat, delta, boundary_tol)
    gmax = float(np.abs(big_gamma).max())
    d_eta = 2.0 * eta_halfwidth / (eta_points - 1)
    if d_eta > np.pi / (2.0 * max(gmax, 1e-9)):
        warnings.warn(
            f"eta spacing {d_eta:.3f} aliases |Gamma| up to {gmax:.2f}; "
            f"raise eta_points above {int(np.ceil(2 * eta_halfwidth * 2 * gmax / np.pi)) + 1}",
            stacklevel=2,
        )
    axis = np.linspace(-eta_halfwidth, eta_halfwidth, eta_points)
    etas = axis[:, None] + 1j * axis[None, :]
    chi = _characteristic_grid(mat, delta, etas)
    dA = (axis[1] - axis[0]) ** 2
    flat_g = big_gamma.ravel()
    flat_eta = etas.ravel()
    flat_chi = chi.ravel()
    vals = np.empty(flat_g.size, dtype=complex)
    chunk = max(1, int(2e7) // max(flat_eta.size, 1))
    for start in range(0, flat_g.size, chunk):
        gs = flat_g[start:start + chunk]
        # e^{eta* G - G* eta} = e^{2i Im(eta* G)}
        phase = np.exp(2j * np.imag(np.outer(flat_eta.conj(), gs)))
        vals[start:start + chunk] = flat_chi @ phase
    vals = vals * dA / np.pi**2
    meas = big_gamma_measure(big_gamma, delta)
    max_imag = float(np.abs(np.imag(vals)).max())
    if max_imag > 1e-6:
        warnings.warn(f"imaginary residue {max_imag:.2e} in W transform", stacklevel=2)
    return np.real(vals.reshape(big_gamma.shape)), meas, max_imag


def _characteristic_grid(rho_sector: np.ndarray, delta: int, etas: np.ndarray) -> np.ndarray:
    """chi(eta) = Tr{rho exp(eta a+b+ - eta* ab)} over a complex grid."""
    squeeze = _sector_squeeze_factory(rho_sector.shape[0], delta)
    flat = etas.ravel()
    out = np.empty(flat.size, dtype=complex)
    for i, eta in enumerate(flat):
        out[i] = np.trace(rho_sector @ squeeze(eta))
    return out.reshape(etas.shape)


def w_integral(raw: np.ndarray, big_gamma: np.ndarray) -> float:
    """Quadrature of the bare integrand sigma~ W over a Cartesian Gamma grid."""
    g = np.asarray(big_gamma, dtype=complex)
    dx = abs(float(np.real(g[1, 0] - g[0, 0]))) or abs(float(np.real(g[0, 1] - g[0, 0])))
    dy = abs(float(np.imag(g[0, 1] - g[0, 0]))) or abs(float(np.imag(g[1, 0] - g[0, 0])))
    return float(np.sum(raw) * dx * dy)
