"""End-to-end sensing scenarios built from the Gaussian core and QFI engine.

Three pipelines are assembled here:

* bi-frequency illumination, where a two-frequency probe (entangled pair or two
  coherent states) reflects off a target whose reflectivity differs by a
  small gap between the two frequencies; the gap is the estimated parameter,
* the quantum-illumination regression: single-frequency target detection with
  a retained idler, reproduced both as closed forms and as a numeric
  three-mode pipeline,
* the equal-bath-occupation bound quantifying when two thermal baths at
  nearby frequencies may be treated as equally populated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar as HBAR, k as K_B

from . import gaussian as g
from .qfi import StateFamily, hc_closed_form, hq_closed_form, qfi_gaussian
from .sld import qfi_complex_form

PROBE_TMSV = "tmsv"
PROBE_COHERENT = "coherent"


@dataclass(frozen=True)
class BiFrequencyParams:
    """Operating point of the bi-frequency protocol.

    Attributes:
        eta1: target reflectivity at the reference frequency.
        lam: reflectivity difference between the two frequencies.
        n_s: probe photon-number label per mode.
        n_th: thermal occupation of each bath mode.
    """

    eta1: float
    lam: float = 0.0
    n_s: float = 1.0
    n_th: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta1 <= 1.0:
            raise ValueError(f"eta1 must lie in [0, 1], got {self.eta1}")
        if not 0.0 <= self.eta1 + self.lam <= 1.0:
            raise ValueError(f"eta1 + lambda = {self.eta1 + self.lam} outside [0, 1]")
        if self.n_s < 0 or self.n_th < 0:
            raise ValueError("photon numbers must be nonnegative")


def _bifrequency_input(p: BiFrequencyParams, probe: str) -> g.GaussianState:
    """Four-mode input ordered (bath 1, signal 1, bath 2, signal 2)."""
    if probe == PROBE_TMSV:
        raw = g.tensor(g.tensor(g.thermal(p.n_th), g.thermal(p.n_th)), g.tmsv(p.n_s))
        return g.permute_modes(raw, [0, 2, 1, 3])
    if probe == PROBE_COHERENT:
        alpha = np.sqrt(p.n_s)
        arm = g.tensor(g.thermal(p.n_th), g.coherent(alpha))
        return g.tensor(arm, arm)
    raise ValueError(f"unknown probe {probe!r}")


def _received(p: BiFrequencyParams, probe: str, lam: float) -> g.GaussianState:
    transform = g.direct_sum(g.beam_splitter(p.eta1), g.beam_splitter(p.eta1 + lam))
    out = g.apply(transform, _bifrequency_input(p, probe))
    return g.partial_trace(out, keep=[1, 3])


def bifrequency_received_state(p: BiFrequencyParams, probe: str) -> StateFamily:
    """Family of received two-mode states parametrised by the reflectivity gap."""
    if probe not in (PROBE_TMSV, PROBE_COHERENT):
        raise ValueError(f"unknown probe {probe!r}")
    step = 1e-5 * max(1.0, abs(p.eta1))
    return StateFamily(eval=lambda lam: _received(p, probe, lam), lambda0=p.lam, step=step)


def bifrequency_advantage(p: BiFrequencyParams) -> tuple[float, float, float]:
    """Closed-form (h_q, h_c, ratio) at zero reflectivity gap."""
    if p.lam != 0.0:
        raise ValueError("the closed forms hold at zero reflectivity gap")
    h_q = hq_closed_form(p.eta1, p.n_s, p.n_th)
    h_c = hc_closed_form(p.eta1, p.n_s, p.n_th)
    return h_q, h_c, h_q / h_c


def noise_factor_ratio(beta: float, eta1: float, n_s: float) -> float:
    """Advantage ratio at fixed noise factor beta = n_s / n_th."""
    if beta <= 0:
        raise ValueError("noise factor must be positive")
    return bifrequency_advantage(BiFrequencyParams(eta1, 0.0, n_s, n_s / beta))[2]


# --- quantum illumination regression -------------------------------------

def qi_quantum_qfi(n_s: float, n_th: float) -> float:
    """Entangled-probe QFI of quantum illumination in the dim-target limit."""
    if n_s < 0 or n_th < 0:
        raise ValueError("photon numbers must be nonnegative")
    return 4.0 * n_s * (n_s + 1.0) / (2.0 * n_s * n_th + n_s + n_th + 1.0)


def qi_classical_qfi(eta: float, n_s: float, n_th: float) -> float:
    """Coherent-probe QFI of quantum illumination at amplitude reflectivity eta."""
    if not 0.0 <= eta < 1.0:
        raise ValueError("amplitude reflectivity must lie in [0, 1)")
    if n_s < 0 or n_th < 0:
        raise ValueError("photon numbers must be nonnegative")
    first = 4.0 * n_s / (1.0 - 2.0 * n_th * (eta - 1.0))
    if eta == 0.0:
        return first
    second = 4.0 * n_th * eta**2 / ((eta**2 - 1.0) * (n_th * (eta**2 - 1.0) - 1.0))
    return first + second


def qi_ratio(n_s: float, n_th: float) -> float:
    """Quantum-illumination advantage (N_S+1)(2N_th+1) / (2N_S N_th+N_S+N_th+1)."""
    if n_s < 0 or n_th < 0:
        raise ValueError("photon numbers must be nonnegative")
    return (n_s + 1.0) * (2.0 * n_th + 1.0) / (2.0 * n_s * n_th + n_s + n_th + 1.0)


def _qi_quantum_received(eta: float, n_s: float, n_th: float) -> g.GaussianState:
    """Received (reflection, idler) state; the target reflects |eta|^2 in power."""
    probe = g.two_mode_squeezed(np.arcsinh(np.sqrt(n_s)))
    full = g.tensor(g.thermal(n_th), probe)
    transform = g.direct_sum(g.beam_splitter(eta**2), g.identity_transform(1))
    return g.partial_trace(g.apply(transform, full), keep=[1, 2])


def qi_quantum_qfi_numeric(eta: float, n_s: float, n_th: float, step: float = 1e-5) -> float:
    """Entangled-probe QFI from the three-mode pipeline at finite reflectivity."""
    family = StateFamily(
        eval=lambda e: _qi_quantum_received(e, n_s, n_th), lambda0=eta, step=step
    )
    return qfi_gaussian(family).value


def _qi_classical_received(eta: float, n_s: float, n_th: float) -> g.GaussianState:
    full = g.tensor(g.thermal(n_th), g.coherent(np.sqrt(n_s)))
    return g.partial_trace(g.apply(g.beam_splitter(eta**2), full), keep=[1])


def qi_classical_qfi_numeric(eta: float, n_s: float, n_th: float, step: float = 1e-5) -> float:
    """Coherent-probe QFI from the two-mode pipeline (single received mode)."""
    family = StateFamily(
        eval=lambda e: _qi_classical_received(e, n_s, n_th), lambda0=eta, step=step
    )
    return qfi_complex_form(family)


# --- equal thermal occupation approximation ------------------------------

@dataclass(frozen=True)
class ThermalApproxReport:
    """Accuracy of assuming equal bath occupation at two nearby frequencies."""

    omega1: float
    delta_omega: float
    temperature: float
    occupation: float
    ratio: float
    first_order: float
    rel_error: float


def thermal_equal_occupation(
    omega1: float, delta_omega: float, temperature: float
) -> ThermalApproxReport:
    """Occupation ratio N(omega1)/N(omega1 + delta_omega) and its linearisation.

    Frequencies are angular (rad/s); beta = hbar / (k_B T). The first-order
    value 1 - delta_omega/omega1 is accurate in the high-temperature regime
    beta*omega1 << 1 relevant to microwave sensing.
    """
    if omega1 <= 0 or temperature <= 0:
        raise ValueError("frequency and temperature must be positive")
    if delta_omega < 0:
        raise ValueError("frequency gap must be nonnegative")
    beta = HBAR / (K_B * temperature)
    expm1 = np.expm1(beta * omega1)
    ratio = 1.0 / (1.0 + beta * delta_omega * np.exp(beta * omega1) / expm1)
    first_order = 1.0 - delta_omega / omega1
    return ThermalApproxReport(
        omega1=omega1,
        delta_omega=delta_omega,
        temperature=temperature,
        occupation=1.0 / expm1,
        ratio=float(ratio),
        first_order=first_order,
        rel_error=abs(ratio - first_order) / ratio,
    )
