"""Gaussian states and symplectic transformations on quadrature phase space.

Conventions, fixed once and used everywhere:

* the n-mode vacuum has covariance equal to the identity and zero displacement,
* mode operators relate to quadratures through a = (x + i p) / sqrt(2),
* the displacement vector holds the quadrature expectation values and the
  covariance matrix the symmetrised centered second moments
  cov_ij = <{R_i - d_i, R_j - d_j}> (anticommutator, no factor 1/2),
* arrays are stored in the interleaved ordering (x1, p1, x2, p2, ...);
  the blockwise ordering (x1, ..., xn, p1, ..., pn) is only reached through
  :func:`reorder_basis`.

With these choices a thermal mode has covariance (1 + 2 n_th) I, a coherent
state |alpha> has displacement sqrt(2) (Re alpha, Im alpha), and a beam
splitter of reflectivity eta acts as the rotation
[[sqrt(eta) I, sqrt(1-eta) I], [-sqrt(1-eta) I, sqrt(eta) I]].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import block_diag

INTERLEAVED = "interleaved"
BLOCKWISE = "blockwise"

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PHYSICALITY_TOL = 1e-9


def omega(n_modes: int, ordering: str = INTERLEAVED) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in the given quadrature ordering."""
    if ordering == INTERLEAVED:
        single = np.array([[0.0, 1.0], [-1.0, 0.0]])
        return block_diag(*([single] * n_modes))
    if ordering == BLOCKWISE:
        eye = np.eye(n_modes)
        zero = np.zeros((n_modes, n_modes))
        return np.block([[zero, eye], [-eye, zero]])
    raise ValueError(f"unknown ordering {ordering!r}")


def basis_change(n_modes: int) -> np.ndarray:
    """Permutation matrix mapping interleaved vectors to blockwise ones.

    Row k (k < n) selects x_k and row n + k selects p_k, so for two modes the
    entries satisfy T_ij = delta_{j+4,2i} + delta_{j,2i-1} in 1-based indices.
    """
    t = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        t[k, 2 * k] = 1.0
        t[n_modes + k, 2 * k + 1] = 1.0
    return t


@dataclass(frozen=True, eq=False)
class GaussianState:
    """A Gaussian state: real covariance matrix plus real displacement vector.

    Attributes:
        cov: real symmetric 2n x 2n covariance matrix (vacuum = identity).
        disp: real quadrature displacement vector of length 2n.
        ordering: quadrature ordering of both arrays.
    """

    cov: np.ndarray
    disp: np.ndarray
    ordering: str = INTERLEAVED

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        disp = np.array(self.disp, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be square with even size, got {cov.shape}")
        if disp.shape != (cov.shape[0],):
            raise ValueError(f"displacement shape {disp.shape} does not match covariance {cov.shape}")
        if self.ordering not in (INTERLEAVED, BLOCKWISE):
            raise ValueError(f"unknown ordering {self.ordering!r}")
        asym = np.max(np.abs(cov - cov.T))
        if asym > SYMMETRY_TOL:
            raise ValueError(f"covariance asymmetry {asym:.3e} exceeds {SYMMETRY_TOL}")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "disp", disp)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """A real linear map on quadratures satisfying S Omega S^T = Omega."""

    matrix: np.ndarray
    ordering: str = INTERLEAVED

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"symplectic matrix must be square with even size, got {m.shape}")
        omg = omega(m.shape[0] // 2, self.ordering)
        err = np.max(np.abs(m @ omg @ m.T - omg))
        if err > SYMPLECTIC_TOL:
            raise ValueError(f"symplectic identity violated by {err:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


class PhysicalityReport(NamedTuple):
    is_physical: bool
    min_eigenvalue: float


def vacuum(n_modes: int) -> GaussianState:
    """The n-mode vacuum: identity covariance, zero displacement."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    return GaussianState(np.eye(2 * n_modes), np.zeros(2 * n_modes))


def thermal(n_th: float) -> GaussianState:
    """Single thermal mode with mean occupation ``n_th``."""
    if n_th < 0:
        raise ValueError("thermal occupation must be nonnegative")
    return GaussianState((1.0 + 2.0 * n_th) * np.eye(2), np.zeros(2))


def coherent(alpha_re: float, alpha_im: float = 0.0) -> GaussianState:
    """Single-mode coherent state with complex amplitude alpha_re + i alpha_im."""
    disp = np.array([np.sqrt(2.0) * alpha_re, np.sqrt(2.0) * alpha_im])
    return GaussianState(np.eye(2), disp)


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter ``r``.

    Covariance blocks: cosh(2r) I on the diagonal and sinh(2r) sigma_z as the
    cross-mode correlation (x-x correlated, p-p anticorrelated).
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    c, s = np.cosh(2.0 * r), np.sinh(2.0 * r)
    sz = np.diag([1.0, -1.0])
    cov = np.block([[c * np.eye(2), s * sz], [s * sz, c * np.eye(2)]])
    return GaussianState(cov, np.zeros(4))


def tmsv(n_s: float) -> GaussianState:
    """Two-mode squeezed vacuum parametrised by the protocol photon number.

    The covariance blocks are (1 + 4 n_s) I and 2 sqrt(2 n_s (2 n_s + 1)) sigma_z,
    i.e. sinh^2 r = 2 n_s. Note that under the vacuum-identity convention this
    makes the per-mode photon number equal to 2 n_s, twice the label.
    """
    if n_s < 0:
        raise ValueError("signal photon number must be nonnegative")
    return two_mode_squeezed(np.arcsinh(np.sqrt(2.0 * n_s)))


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Tensor product of two states; a's modes come first."""
    if a.ordering != INTERLEAVED or b.ordering != INTERLEAVED:
        raise ValueError("tensor expects interleaved states")
    cov = block_diag(a.cov, b.cov)
    disp = np.concatenate([a.disp, b.disp])
    return GaussianState(cov, disp)


def beam_splitter(eta: float) -> SymplecticTransform:
    """Two-mode beam splitter of reflectivity ``eta`` (zero relative phase).

    The second output slot carries sqrt(eta) of the second input plus
    -sqrt(1-eta) of the first, so keeping it models reflection off a target
    of reflectivity eta embedded in the first (environment) mode.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    rt, tt = np.sqrt(eta), np.sqrt(1.0 - eta)
    eye = np.eye(2)
    m = np.block([[rt * eye, tt * eye], [-tt * eye, rt * eye]])
    return SymplecticTransform(m)


def identity_transform(n_modes: int) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2 * n_modes))


def direct_sum(s1: SymplecticTransform, s2: SymplecticTransform) -> SymplecticTransform:
    """Block-diagonal composition acting on the concatenated mode sets."""
    return SymplecticTransform(block_diag(s1.matrix, s2.matrix))


def apply(s: SymplecticTransform, state: GaussianState) -> GaussianState:
    """Act with a symplectic map: cov -> S cov S^T, disp -> S disp."""
    if s.matrix.shape[0] != state.cov.shape[0]:
        raise ValueError(
            f"dimension mismatch: transform on {s.n_modes} modes, state has {state.n_modes}"
        )
    cov = s.matrix @ state.cov @ s.matrix.T
    cov = 0.5 * (cov + cov.T)
    return GaussianState(cov, s.matrix @ state.disp, state.ordering)


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Restrict to the listed modes by deleting the complementary rows/columns."""
    if state.ordering != INTERLEAVED:
        raise ValueError("partial_trace expects an interleaved state")
    keep = list(keep)
    if not keep:
        raise ValueError("must keep at least one mode")
    if any(k < 0 or k >= state.n_modes for k in keep):
        raise ValueError(f"mode index out of range for {state.n_modes} modes: {keep}")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValueError("kept modes must be strictly increasing")
    idx = [q for m in keep for q in (2 * m, 2 * m + 1)]
    return GaussianState(state.cov[np.ix_(idx, idx)], state.disp[idx])


def permute_modes(state: GaussianState, order: Sequence[int]) -> GaussianState:
    """Reorder modes so that new mode k is old mode ``order[k]``."""
    if state.ordering != INTERLEAVED:
        raise ValueError("permute_modes expects an interleaved state")
    if sorted(order) != list(range(state.n_modes)):
        raise ValueError(f"order must be a permutation of 0..{state.n_modes - 1}")
    idx = [q for m in order for q in (2 * m, 2 * m + 1)]
    return GaussianState(state.cov[np.ix_(idx, idx)], state.disp[idx])


def reorder_basis(state: GaussianState, frm: str, to: str) -> GaussianState:
    """Convert between the interleaved and blockwise quadrature orderings."""
    if state.ordering != frm:
        raise ValueError(f"state is ordered {state.ordering!r}, not {frm!r}")
    if frm == to:
        return state
    t = basis_change(state.n_modes)
    if frm == BLOCKWISE:
        t = t.T
    return GaussianState(t @ state.cov @ t.T, t @ state.disp, to)


def check_physical(state: GaussianState) -> PhysicalityReport:
    """Check the uncertainty relation cov + i Omega >= 0 (up to tolerance)."""
    omg = omega(state.n_modes, state.ordering)
    eigs = np.linalg.eigvalsh(state.cov + 1j * omg)
    lo = float(eigs.min())
    return PhysicalityReport(lo >= -PHYSICALITY_TOL, lo)
