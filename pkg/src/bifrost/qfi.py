"""Quantum Fisher information of two-mode Gaussian state families.

The numeric pipeline evaluates the mixed-state two-mode QFI

    H = [det A * Tr((A^-1 dA)^2) + sqrt(det(1 + A^2)) * Tr(((1 + A^2)^-1 dA)^2)
         - 4 (nu_+^2 - nu_-^2) ((dnu_+)^2/(nu_+^4 - 1) - (dnu_-)^2/(nu_-^4 - 1))]
        / (2 (det A - 1))
      + 2 dd^T Sigma^-1 dd,

where A = i Omega Sigma, nu_+- are the symplectic eigenvalues of the
covariance matrix, and dots denote derivatives with respect to the estimated
parameter, here taken by second-order central differences. The displacement
term sits outside the bracket. All traces and determinants are computed in
real arithmetic through M = Omega Sigma (A = i M, A^2 = -M^2).

Closed forms for the bi-frequency illumination protocol (entangled and
coherent probes, plus the high-reflectivity and noisy limits of their ratio)
live alongside so the pipeline and the formulas can cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalInstabilityError, PureStateError
from .gaussian import GaussianState, INTERLEAVED, basis_change, omega

# det A must exceed 1 by this margin before the mixed-state branch is trusted
MIXEDNESS_MARGIN = 1e-12
# below this, a finite-difference covariance derivative counts as zero
STATIC_COV_TOL = 1e-9
# symplectic eigenvalues closer than this are treated as degenerate
DEGENERACY_TOL = 1e-8
# offset used when the degenerate branch needs one-sided evaluations
ONE_SIDED_OFFSET = 1e-6


@dataclass(frozen=True)
class StateFamily:
    """A differentiable map from the estimated parameter to a two-mode state.

    Attributes:
        eval: callable returning the state at a given parameter value; must be
            side-effect free and physical on [lambda0 - step, lambda0 + step].
        lambda0: evaluation point.
        step: central finite-difference step.
    """

    eval: Callable[[float], GaussianState]
    lambda0: float = 0.0
    step: float = 1e-5


@dataclass(frozen=True)
class QfiResult:
    """QFI value with its term-by-term breakdown and symplectic eigenvalues."""

    value: float
    nu_plus: float
    nu_minus: float
    term_covariance: float
    term_eigenvalue_correction: float
    term_displacement: float


def a_matrix(state: GaussianState) -> np.ndarray:
    """The matrix A = i Omega T Sigma T^T in the blockwise quadrature basis."""
    if state.n_modes != 2:
        raise ValueError(f"expected a two-mode state, got {state.n_modes} modes")
    if state.ordering != INTERLEAVED:
        raise ValueError("expected an interleaved state")
    t = basis_change(2)
    return 1j * omega(2, "blockwise") @ t @ state.cov @ t.T


def _nu_from_cov(cov: np.ndarray) -> tuple[float, float]:
    """Symplectic eigenvalues from Tr[A^2] and det A, in real arithmetic."""
    m = omega(cov.shape[0] // 2) @ cov
    tr_a2 = -float(np.trace(m @ m))
    det_a = float(np.linalg.det(cov))
    disc = tr_a2 * tr_a2 - 16.0 * det_a
    if disc < -1e-9:
        raise NumericalInstabilityError(
            f"negative symplectic discriminant {disc:.3e} beyond tolerance"
        )
    root = np.sqrt(max(disc, 0.0))
    nu_p = 0.5 * np.sqrt(tr_a2 + root)
    nu_m = 0.5 * np.sqrt(max(tr_a2 - root, 0.0))
    return float(nu_p), float(nu_m)


def symplectic_eigenvalues(state: GaussianState) -> tuple[float, float]:
    """Symplectic eigenvalues (nu_plus, nu_minus) of a two-mode state."""
    if state.n_modes != 2:
        raise ValueError(f"expected a two-mode state, got {state.n_modes} modes")
    nu_p, nu_m = _nu_from_cov(state.cov)
    if nu_m < 1.0 - 1e-9:
        raise NumericalInstabilityError(
            f"symplectic eigenvalue {nu_m:.12f} below 1; state is unphysical"
        )
    return nu_p, nu_m


def _nu_derivatives(family: StateFamily, lam: float, h: float) -> tuple[float, float, float, float]:
    """nu_+-, and their central-difference derivatives, at parameter ``lam``."""
    nu_p0, nu_m0 = _nu_from_cov(family.eval(lam).cov)
    nu_pp, nu_mp = _nu_from_cov(family.eval(lam + h).cov)
    nu_pm, nu_mm = _nu_from_cov(family.eval(lam - h).cov)
    return nu_p0, nu_m0, (nu_pp - nu_pm) / (2.0 * h), (nu_mp - nu_mm) / (2.0 * h)


def _f_correction(nu_p, nu_m, dnu_p, dnu_m) -> float:
    return 4.0 * (nu_p**2 - nu_m**2) * (
        dnu_p**2 / (nu_p**4 - 1.0) - dnu_m**2 / (nu_m**4 - 1.0)
    )


def _eigenvalue_correction(family: StateFamily, lam: float, h: float) -> float:
    """The -f(nu_+, nu_-) numerator with care at eigenvalue degeneracies.

    At exact degeneracy the sorted branches develop a kink; when the branch
    derivatives agree the analytic limit of the correction is zero, otherwise
    it is recovered by averaging two slightly off-degenerate evaluations.
    """
    nu_p, nu_m, dnu_p, dnu_m = _nu_derivatives(family, lam, h)
    if nu_m <= 1.0 + 1e-10:
        if abs(dnu_p) < DEGENERACY_TOL and abs(dnu_m) < DEGENERACY_TOL:
            return 0.0
        raise PureStateError(
            f"symplectic eigenvalue {nu_m:.12f} at the unit boundary with "
            "varying covariance; the mixed-state expression does not apply"
        )
    if nu_p - nu_m < DEGENERACY_TOL:
        if abs(dnu_p - dnu_m) < DEGENERACY_TOL:
            return 0.0
        left = _eigenvalue_correction_regular(family, lam - ONE_SIDED_OFFSET, h)
        right = _eigenvalue_correction_regular(family, lam + ONE_SIDED_OFFSET, h)
        return 0.5 * (left + right)
    return _f_correction(nu_p, nu_m, dnu_p, dnu_m)


def _eigenvalue_correction_regular(family: StateFamily, lam: float, h: float) -> float:
    nu_p, nu_m, dnu_p, dnu_m = _nu_derivatives(family, lam, h)
    return _f_correction(nu_p, nu_m, dnu_p, dnu_m)


def qfi_gaussian(family: StateFamily) -> QfiResult:
    """Quantum Fisher information of a two-mode Gaussian family.

    Derivatives of the covariance, displacement and symplectic eigenvalues are
    taken by central differences around ``family.lambda0``. The state there
    must be mixed; the only pure case accepted is a constant covariance
    (displacement-only encoding), for which the covariance terms vanish
    identically and the displacement term alone survives.
    """
    lam0, h = family.lambda0, family.step
    s0 = family.eval(lam0)
    if s0.n_modes != 2:
        raise ValueError(f"expected a two-mode family, got {s0.n_modes} modes")
    if s0.ordering != INTERLEAVED:
        raise ValueError("expected an interleaved family")
    sp = family.eval(lam0 + h)
    sm = family.eval(lam0 - h)

    cov = s0.cov
    dcov = (sp.cov - sm.cov) / (2.0 * h)
    ddisp = (sp.disp - sm.disp) / (2.0 * h)

    term_disp = 2.0 * float(ddisp @ np.linalg.solve(cov, ddisp))
    nu_p, nu_m = _nu_from_cov(cov)

    det_a = float(np.linalg.det(cov))
    static_cov = float(np.max(np.abs(dcov))) < STATIC_COV_TOL
    if det_a <= 1.0 + MIXEDNESS_MARGIN:
        if not static_cov:
            raise PureStateError(
                f"det A = {det_a:.15f} at the purity boundary with varying "
                "covariance; only mixed states are supported"
            )
        term_cov = 0.0
        term_eig = 0.0
    else:
        omg = omega(2)
        m = omg @ cov
        dm = omg @ dcov
        tr1 = float(np.trace(np.linalg.matrix_power(np.linalg.solve(cov, dcov), 2)))
        one_plus_a2 = np.eye(4) - m @ m
        tr2 = -float(np.trace(np.linalg.matrix_power(np.linalg.solve(one_plus_a2, dm), 2)))
        sqrt_det = (1.0 + nu_p**2) * (1.0 + nu_m**2)
        denom = 2.0 * (det_a - 1.0)
        term_cov = (det_a * tr1 + sqrt_det * tr2) / denom
        term_eig = -_eigenvalue_correction(family, lam0, h) / denom

    return QfiResult(
        value=term_cov + term_eig + term_disp,
        nu_plus=nu_p,
        nu_minus=nu_m,
        term_covariance=term_cov,
        term_eigenvalue_correction=term_eig,
        term_displacement=term_disp,
    )


def _check_eta(eta1: float):
    if not 0.0 < eta1 < 1.0:
        raise ValueError(f"reference reflectivity must lie strictly in (0, 1), got {eta1}")


def hq_closed_form(eta1: float, n_s: float, n_th: float) -> float:
    """QFI of the entangled (two-mode squeezed) probe at zero reflectivity gap.

    Finite for all n_s >= 0 and n_th >= 0 except n_s = n_th = 0, where the
    received state carries no information at all.
    """
    _check_eta(eta1)
    if n_s < 0 or n_th < 0:
        raise ValueError("photon numbers must be nonnegative")
    if n_s == 0.0 and n_th == 0.0:
        raise ValueError("no photons anywhere: the QFI expression degenerates")
    tau = 1.0 - eta1
    num = (
        8.0 * tau * eta1 * n_s**3 * (2.0 * n_th + 1.0)
        + 4.0 * n_s**2 * (
            -eta1
            + (eta1 + 3.0 * eta1 * n_th) ** 2
            - eta1 * n_th * (10.0 * n_th + 7.0)
            + 3.0 * n_th * (n_th + 1.0)
            + 1.0
        )
        - 2.0 * n_s * n_th * (
            -eta1
            + n_th * (eta1 * (3.0 * eta1 - 8.0) + 4.0 * tau * (tau - eta1) * n_th + 3.0)
            + 1.0
        )
        + n_th**2 * (2.0 * tau * n_th * (tau * n_th + 1.0) + 1.0)
    )
    k = (
        tau
        * (n_th * (4.0 * n_s * eta1 + n_th * tau + 1.0) + 2.0 * n_s * eta1)
        * (
            2.0 * n_th * tau * (4.0 * n_s * eta1 + 1.0)
            + 4.0 * n_s * eta1 * tau
            + 2.0 * n_th**2 * tau**2
            + 1.0
        )
    )
    return num / k


def hc_closed_form(eta1: float, n_s: float, n_th: float) -> float:
    """QFI of the coherent probe (|alpha|^2 = n_s per mode) at zero gap.

    The thermal contribution 4 n_th^2 ((1 + 2 n_th tau)^2 + 1) / ((1 + 2 n_th tau)^4 - 1)
    vanishes in the n_th -> 0 limit, which is where it is evaluated then.
    """
    _check_eta(eta1)
    if n_s < 0 or n_th < 0:
        raise ValueError("photon numbers must be nonnegative")
    tau = 1.0 - eta1
    if n_th == 0.0:
        thermal_part = 0.0
    else:
        g = 1.0 + 2.0 * n_th * tau
        thermal_part = 4.0 * n_th**2 * (g * g + 1.0) / (g**4 - 1.0)
    return thermal_part + n_s / (eta1 + 2.0 * n_th * tau * eta1)


def ratio_high_reflectivity(n_s: float, n_th: float) -> float:
    """Advantage ratio of the two probes in the perfectly reflective limit."""
    if n_th <= 0:
        raise ValueError("the high-reflectivity ratio degenerates at zero thermal occupation")
    if n_s < 0:
        raise ValueError("photon numbers must be nonnegative")
    num = n_s**2 * (8.0 * n_th * (n_th + 1.0) + 4.0) + 4.0 * n_s * n_th**2 + n_th**2
    den = n_th * (n_s * (4.0 * n_th + 2.0) + n_th)
    return num / den


def ratio_noisy_limit(n_s: float) -> float:
    """High-reflectivity advantage in the strong-noise limit: 1 + 8 n_s^2 / (4 n_s + 1)."""
    if n_s < 0:
        raise ValueError("photon numbers must be nonnegative")
    return 1.0 + 8.0 * n_s**2 / (4.0 * n_s + 1.0)
