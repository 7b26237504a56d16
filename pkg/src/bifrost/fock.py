"""Truncated Fock-space oracle: brute-force states, channels and QFI.

Everything here exists to validate the Gaussian pipeline by a route that
shares none of its machinery: density matrices on a photon-number cutoff,
beam-splitter unitaries by matrix exponential, partial traces by index
contraction, and the basis-dependent QFI

    H = 2 sum_{m,n} |<m| drho |n>|^2 / (p_m + p_n)

over the eigenpairs of the received state.

The four-mode bi-frequency pipeline is never materialised: the interaction
does not mix frequencies, so each frequency sees an independent thermal-loss
channel acting on its signal mode, and the received two-mode state is the
probe pushed through the two channels mode by mode. That keeps every matrix
at cutoff^2 x cutoff^2.

Beam-splitter convention: ``fock_beam_splitter(eta)`` realises exactly the
quadrature rotation of :func:`bifrost.gaussian.beam_splitter`, i.e. the
second output slot is sqrt(eta) x (second input) - sqrt(1-eta) x (first
input). Full reflection (eta = 1) is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import CutoffTooSmallError

# tail-mass target when the cutoff is chosen automatically
AUTO_TAIL_TOL = 1e-10
# hard gate for explicitly requested cutoffs
HARD_TAIL_TOL = 1e-6
# extra levels on top of the auto choice, headroom for beam-splitter mixing
GUARD_LEVELS = 5


@dataclass(frozen=True, eq=False)
class FockState:
    """Density matrix on a photon-number-truncated space.

    The trace may fall short of one by the truncation leak of the
    construction; it is never renormalised away.
    """

    rho: np.ndarray
    dim: int
    n_modes: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        size = self.dim**self.n_modes
        if rho.shape != (size, size):
            raise ValueError(f"density matrix shape {rho.shape} != ({size}, {size})")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > 1e-12:
            raise ValueError(f"density matrix non-hermitian by {herm:.3e}")
        object.__setattr__(self, "rho", rho)

    @property
    def trace(self) -> float:
        return float(self.rho.trace().real)


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def _thermal_probs(n_th: float, dim: int) -> np.ndarray:
    if n_th == 0.0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    q = n_th / (1.0 + n_th)
    return (1.0 - q) * q ** np.arange(dim)


def _thermal_tail(n_th: float, dim: int) -> float:
    if n_th == 0.0:
        return 0.0
    return float((n_th / (1.0 + n_th)) ** dim)


def _tmsv_tail(n_s: float, dim: int) -> float:
    if n_s == 0.0:
        return 0.0
    tanh2 = 2.0 * n_s / (2.0 * n_s + 1.0)  # tanh^2 r with sinh^2 r = 2 n_s
    return float(tanh2**dim)


def _auto_cutoff(tail: Callable[[int], float], tol: float = AUTO_TAIL_TOL) -> int:
    dim = 2
    while tail(dim) >= tol:
        dim += 1
        if dim > 4000:
            raise CutoffTooSmallError("cannot reach the requested tail mass below cutoff 4000")
    return dim + GUARD_LEVELS


def _gate_cutoff(tail_mass: float, cutoff: int, label: str):
    if tail_mass >= HARD_TAIL_TOL:
        raise CutoffTooSmallError(
            f"cutoff {cutoff} leaves {label} tail mass {tail_mass:.3e} >= {HARD_TAIL_TOL}"
        )


def fock_thermal(n_th: float, cutoff: int | None = None) -> FockState:
    """Thermal mode as a truncated geometric mixture of number states."""
    if n_th < 0:
        raise ValueError("thermal occupation must be nonnegative")
    if cutoff is None:
        cutoff = _auto_cutoff(lambda d: _thermal_tail(n_th, d))
    _gate_cutoff(_thermal_tail(n_th, cutoff), cutoff, "thermal")
    return FockState(np.diag(_thermal_probs(n_th, cutoff)).astype(complex), cutoff, 1)


def fock_tmsv(n_s: float, cutoff: int | None = None) -> FockState:
    """Two-mode squeezed vacuum with the protocol photon-number label.

    sinh^2 r = 2 n_s, matching :func:`bifrost.gaussian.tmsv`; the relative
    phase is chosen so the x quadratures are positively correlated, again
    matching the covariance convention.
    """
    if n_s < 0:
        raise ValueError("signal photon number must be nonnegative")
    if cutoff is None:
        cutoff = _auto_cutoff(lambda d: _tmsv_tail(n_s, d))
    _gate_cutoff(_tmsv_tail(n_s, cutoff), cutoff, "two-mode squeezed")
    tanh_r = np.sqrt(2.0 * n_s / (2.0 * n_s + 1.0))
    amps = tanh_r ** np.arange(cutoff) * np.sqrt(1.0 - tanh_r**2)
    psi = np.zeros(cutoff * cutoff)
    psi[np.arange(cutoff) * cutoff + np.arange(cutoff)] = amps
    return FockState(np.outer(psi, psi).astype(complex), cutoff, 2)


def fock_coherent(alpha: complex, cutoff: int | None = None) -> FockState:
    """Coherent state |alpha> truncated at the cutoff."""
    if cutoff is None:
        mean = abs(alpha) ** 2
        cutoff = _auto_cutoff(lambda d: float(poisson.sf(d - 1, mean)) if mean else 0.0)
    n = np.arange(cutoff)
    log_fact = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, cutoff)))])
    amps = np.exp(-0.5 * abs(alpha) ** 2) * alpha**n / np.exp(0.5 * log_fact)
    leak = max(1.0 - float(np.vdot(amps, amps).real), 0.0)
    _gate_cutoff(leak, cutoff, "coherent")
    return FockState(np.outer(amps, amps.conj()), cutoff, 1)


def fock_beam_splitter(eta: float, cutoff: int) -> np.ndarray:
    """Two-mode beam-splitter unitary matching the Gaussian convention.

    Exponential of theta (a_0^dag a_1 - a_1^dag a_0) with theta = arccos(sqrt(eta)),
    evaluated block by block on the total-photon-number sectors the generator
    preserves.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    theta = float(np.arccos(np.sqrt(eta)))
    a = annihilation(cutoff)
    eye = np.eye(cutoff)
    gen = np.kron(a.T, eye) @ np.kron(eye, a) - np.kron(eye, a.T) @ np.kron(a, eye)
    u = np.eye(cutoff * cutoff)
    totals = (np.arange(cutoff)[:, None] + np.arange(cutoff)[None, :]).ravel()
    for n in range(2 * cutoff - 1):
        idx = np.flatnonzero(totals == n)
        if idx.size > 1:
            u[np.ix_(idx, idx)] = expm(theta * gen[np.ix_(idx, idx)])
    return u


def fock_partial_trace(state: FockState, keep: Sequence[int]) -> FockState:
    """Trace out all modes not listed in ``keep``."""
    keep = list(keep)
    if not keep or any(k < 0 or k >= state.n_modes for k in keep):
        raise ValueError(f"invalid mode selection {keep} for {state.n_modes} modes")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValueError("kept modes must be strictly increasing")
    n, d = state.n_modes, state.dim
    tensor = state.rho.reshape([d] * (2 * n))
    traced = [m for m in range(n) if m not in keep]
    for m in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=m, axis2=m + tensor.ndim // 2)
    size = d ** len(keep)
    return FockState(tensor.reshape(size, size), d, len(keep))


def quadrature_moments(state: FockState) -> tuple[np.ndarray, np.ndarray]:
    """Interleaved covariance and displacement extracted from number-basis moments."""
    d, n = state.dim, state.n_modes
    a = annihilation(d)
    x1 = (a + a.T) / np.sqrt(2.0)
    p1 = (a - a.T) / (1j * np.sqrt(2.0))
    quads = []
    for m in range(n):
        for q in (x1, p1):
            op = np.eye(1)
            for k in range(n):
                op = np.kron(op, q if k == m else np.eye(d))
            quads.append(op)
    disp = np.array([float(np.trace(state.rho @ q).real) for q in quads])
    cov = np.empty((2 * n, 2 * n))
    for i, qi in enumerate(quads):
        for j, qj in enumerate(quads):
            sym = np.trace(state.rho @ (qi @ qj + qj @ qi)).real
            cov[i, j] = float(sym) - 2.0 * disp[i] * disp[j]
    return cov, disp


class ThermalLossChannel:
    """Single-mode channel: mix with a thermal bath on a beam splitter.

    ``apply_pair`` pushes a two-mode state through two independent copies,
    one reflectivity per mode.
    """

    def __init__(self, eta: float, n_th: float, cutoff: int):
        self.eta = eta
        self.n_th = n_th
        self.cutoff = cutoff
        _gate_cutoff(_thermal_tail(n_th, cutoff), cutoff, "thermal bath")
        u = fock_beam_splitter(eta, cutoff).reshape(cutoff, cutoff, cutoff, cutoff)
        probs = _thermal_probs(n_th, cutoff)
        # Kraus family E[k, j, t, s] = sqrt(p_j) <k, t| U |j, s>
        kraus = np.sqrt(probs)[None, :, None, None] * u.transpose(0, 2, 1, 3)
        flat = kraus.reshape(cutoff * cutoff, cutoff * cutoff)
        gram = flat.T @ flat.conj()
        gram = gram.reshape(cutoff, cutoff, cutoff, cutoff).transpose(0, 2, 1, 3)
        self.superop = np.ascontiguousarray(gram.reshape(cutoff**2, cutoff**2))

    def apply_one_mode(self, rho: np.ndarray) -> np.ndarray:
        d = self.cutoff
        out = self.superop @ rho.reshape(d * d)
        return out.reshape(d, d)


def apply_channel_pair(
    ch1: ThermalLossChannel, ch2: ThermalLossChannel, rho: np.ndarray
) -> np.ndarray:
    d = ch1.cutoff
    tensor = rho.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    mixed = ch1.superop @ tensor @ ch2.superop.T
    return mixed.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def bifrequency_fock_family(
    eta1: float, n_s: float, n_th: float, probe: str, cutoff: int
) -> Callable[[float], FockState]:
    """Received-state family of the bi-frequency protocol, in Fock space."""
    if probe == "tmsv":
        probe_state = fock_tmsv(n_s, cutoff)
    elif probe == "coherent":
        alpha = np.sqrt(n_s)
        single = fock_coherent(alpha, cutoff)
        probe_state = FockState(np.kron(single.rho, single.rho), cutoff, 2)
    else:
        raise ValueError(f"unknown probe {probe!r}")
    channels: dict[float, ThermalLossChannel] = {}

    def channel(eta: float) -> ThermalLossChannel:
        if eta not in channels:
            channels[eta] = ThermalLossChannel(eta, n_th, cutoff)
        return channels[eta]

    def family(lam: float) -> FockState:
        rho = apply_channel_pair(channel(eta1), channel(eta1 + lam), probe_state.rho)
        return FockState(rho, cutoff, 2)

    return family


def qfi_eq1(
    family: Callable[[float], FockState],
    lambda0: float = 0.0,
    step: float = 1e-4,
    drop_threshold: float = 1e-12,
) -> float:
    """Basis-dependent QFI from the eigendecomposition of the received state.

    The parameter derivative of the density matrix is taken by central
    differences; eigenvalue pairs whose sum falls below ``drop_threshold``
    contribute nothing and are skipped.
    """
    rho0 = family(lambda0).rho
    drho = (family(lambda0 + step).rho - family(lambda0 - step).rho) / (2.0 * step)
    evals, evecs = np.linalg.eigh(rho0)
    mat = evecs.conj().T @ drho @ evecs
    sums = evals[:, None] + evals[None, :]
    mask = sums > drop_threshold
    return float(2.0 * np.sum(np.abs(mat[mask]) ** 2 / sums[mask]))
