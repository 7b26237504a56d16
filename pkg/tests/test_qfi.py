"""QFI engine: symplectic eigenvalues, the numeric pipeline and closed forms."""

import numpy as np
import pytest

import bifrost as bf
from bifrost.errors import PureStateError
from bifrost.protocols import BiFrequencyParams, bifrequency_received_state
from bifrost.qfi import StateFamily

SZ = np.diag([1.0, -1.0])


def received_cov(eta1, lam, n_s, n_th):
    """Received two-mode covariance assembled from its entry formulas."""
    def c(x):
        return 2.0 * x * (2.0 * n_s - n_th) + 2.0 * n_th + 1.0

    f = 2.0 * np.sqrt(2.0) * np.sqrt(eta1) * np.sqrt(n_s * (2.0 * n_s + 1.0)) * np.sqrt(eta1 + lam)
    return np.block([[c(eta1) * np.eye(2), f * SZ], [f * SZ, c(eta1 + lam) * np.eye(2)]])


def nu_oracle(eta1, lam, n_s, n_th):
    """Symplectic eigenvalues of the received state by direct 2x2 algebra.

    For cov = [[c1 I, f sz], [f sz, c2 I]] the invariants give
    nu_pm^2 = (c1^2 + c2^2 - 2 f^2 +- |c1 - c2| sqrt((c1 + c2)^2 - 4 f^2)) / 2.
    """
    def c(x):
        return 2.0 * x * (2.0 * n_s - n_th) + 2.0 * n_th + 1.0

    c1, c2 = c(eta1), c(eta1 + lam)
    f2 = 8.0 * n_s * (2.0 * n_s + 1.0) * eta1 * (eta1 + lam)
    split = abs(c1 - c2) * np.sqrt((c1 + c2) ** 2 - 4.0 * f2)
    base = c1 * c1 + c2 * c2 - 2.0 * f2
    return np.sqrt((base + split) / 2.0), np.sqrt((base - split) / 2.0)


def tmsv_family(eta1, n_s, n_th, lam0=0.0):
    return bifrequency_received_state(BiFrequencyParams(eta1, lam0, n_s, n_th), "tmsv")


def coherent_family(eta1, n_s, n_th, lam0=0.0):
    return bifrequency_received_state(BiFrequencyParams(eta1, lam0, n_s, n_th), "coherent")


# --- matrix A ---------------------------------------------------------------

def test_a_matrix_thermal_pair():
    pair = bf.tensor(bf.thermal(1.0), bf.thermal(1.0))
    a = bf.a_matrix(pair)
    expected = 1j * np.block(
        [[np.zeros((2, 2)), 3.0 * np.eye(2)], [-3.0 * np.eye(2), np.zeros((2, 2))]]
    )
    assert np.allclose(a, expected)


def test_a_matrix_received_structure():
    eta1, lam, n_s, n_th = 0.6, 0.05, 0.8, 0.4
    state = bf.GaussianState(received_cov(eta1, lam, n_s, n_th), np.zeros(4))
    a = bf.a_matrix(state)

    def c(x):
        return 2.0 * x * (2.0 * n_s - n_th) + 2.0 * n_th + 1.0

    f = 2.0 * np.sqrt(2.0 * n_s * (2.0 * n_s + 1.0) * eta1 * (eta1 + lam))
    upper = np.array([[c(eta1), -f], [-f, c(eta1 + lam)]])
    lower = np.array([[-c(eta1), -f], [-f, -c(eta1 + lam)]])
    assert np.allclose(a[:2, 2:], 1j * upper)
    assert np.allclose(a[2:, :2], 1j * lower)
    assert np.allclose(a[:2, :2], 0.0)
    assert abs(np.trace(a)) < 1e-9


def test_a_matrix_vacuum_eigenvalues():
    a = bf.a_matrix(bf.vacuum(2))
    eigs = np.sort(np.linalg.eigvals(a).real)
    assert np.allclose(eigs, [-1.0, -1.0, 1.0, 1.0])


def test_a_matrix_needs_two_modes():
    with pytest.raises(ValueError):
        bf.a_matrix(bf.vacuum(1))


# --- symplectic eigenvalues -------------------------------------------------

def test_symplectic_eigenvalues_vacuum_and_thermal():
    assert np.allclose(bf.symplectic_eigenvalues(bf.vacuum(2)), (1.0, 1.0))
    pair = bf.tensor(bf.thermal(0.7), bf.thermal(0.7))
    assert np.allclose(bf.symplectic_eigenvalues(pair), (2.4, 2.4))


@pytest.mark.parametrize(
    "eta1, lam, n_s, n_th",
    [(0.5, 0.1, 1.0, 0.3), (0.8, -0.05, 0.4, 1.1)],
)
def test_symplectic_eigenvalues_received(eta1, lam, n_s, n_th):
    state = bf.GaussianState(received_cov(eta1, lam, n_s, n_th), np.zeros(4))
    got = bf.symplectic_eigenvalues(state)
    assert np.allclose(got, nu_oracle(eta1, lam, n_s, n_th), rtol=1e-12, atol=1e-12)


def test_symplectic_eigenvalues_degenerate_point():
    # 2 n_s = n_th makes both covariance blocks equal for every gap; the
    # discriminant then cancels catastrophically, so only ~sqrt(eps) is exact
    nu_p, nu_m = bf.symplectic_eigenvalues(
        bf.GaussianState(received_cov(0.5, 0.1, 1.0, 2.0), np.zeros(4))
    )
    assert np.isclose(nu_p, nu_m, rtol=1e-6)
    assert np.isclose(nu_p, np.sqrt(17.8), rtol=1e-6)


# --- numeric QFI ------------------------------------------------------------

def test_qfi_coherent_noiseless_point():
    result = bf.qfi_gaussian(coherent_family(0.5, 1.0, 0.0))
    assert np.isclose(result.value, 2.0, rtol=1e-9)
    assert result.term_covariance == 0.0
    assert result.term_eigenvalue_correction == 0.0


def test_qfi_tmsv_matches_closed_form():
    result = bf.qfi_gaussian(tmsv_family(0.75, 1.0, 1.0))
    assert np.isclose(result.value, bf.hq_closed_form(0.75, 1.0, 1.0), rtol=1e-6)


def test_qfi_constant_family_is_zero():
    pair = bf.tensor(bf.thermal(1.0), bf.thermal(1.0))
    family = StateFamily(eval=lambda lam: pair, lambda0=0.0, step=1e-5)
    assert abs(bf.qfi_gaussian(family).value) < 1e-12


def test_qfi_term_sum_identity():
    for family in (tmsv_family(0.6, 0.8, 0.7), coherent_family(0.6, 0.8, 0.7)):
        r = bf.qfi_gaussian(family)
        total = r.term_covariance + r.term_eigenvalue_correction + r.term_displacement
        assert np.isclose(r.value, total, rtol=1e-10)
        assert r.nu_plus >= r.nu_minus >= 1.0 - 1e-9


def test_qfi_rejects_wrong_mode_count():
    family = StateFamily(eval=lambda lam: bf.thermal(0.5), lambda0=0.0)
    with pytest.raises(ValueError):
        bf.qfi_gaussian(family)


def test_qfi_pure_varying_family_raises():
    family = StateFamily(eval=lambda lam: bf.two_mode_squeezed(0.3 + lam), lambda0=0.0)
    with pytest.raises(PureStateError):
        bf.qfi_gaussian(family)


def test_finite_difference_convergence():
    for eta1, n_s, n_th in [(0.3, 1.0, 0.5), (0.7, 0.1, 5.0)]:
        p = BiFrequencyParams(eta1, 0.0, n_s, n_th)
        base = bifrequency_received_state(p, "tmsv")
        halved = StateFamily(eval=base.eval, lambda0=0.0, step=base.step / 2.0)
        v1 = bf.qfi_gaussian(base).value
        v2 = bf.qfi_gaussian(halved).value
        assert abs(v1 - v2) / abs(v1) < 1e-7


def test_two_sided_limit_consistency():
    """Evaluating at the working point agrees with extrapolating from +-eps."""
    eps = 2e-4
    for probe in ("tmsv", "coherent"):
        center = bf.qfi_gaussian(
            bifrequency_received_state(BiFrequencyParams(0.6, 0.0, 1.0, 0.8), probe)
        ).value
        plus = bf.qfi_gaussian(
            bifrequency_received_state(BiFrequencyParams(0.6, eps, 1.0, 0.8), probe)
        ).value
        minus = bf.qfi_gaussian(
            bifrequency_received_state(BiFrequencyParams(0.6, -eps, 1.0, 0.8), probe)
        ).value
        assert abs(0.5 * (plus + minus) - center) / center < 1e-6


# --- closed forms -----------------------------------------------------------

def test_hc_values():
    assert np.isclose(bf.hc_closed_form(0.5, 1.0, 0.0), 2.0, rtol=1e-12)
    assert np.isclose(bf.hc_closed_form(0.5, 0.0, 1.0), 4.0 / 3.0, rtol=1e-12)


def test_hc_equivalent_form():
    """The thermal part equals n_th / (tau (tau n_th + 1))."""
    for eta1, n_th in [(0.3, 0.6), (0.8, 4.0)]:
        tau = 1.0 - eta1
        expected = n_th / (tau * (tau * n_th + 1.0)) + 2.0 / (eta1 * (1.0 + 2.0 * n_th * tau))
        assert np.isclose(bf.hc_closed_form(eta1, 2.0, n_th), expected, rtol=1e-12)


def test_hc_matches_numeric():
    value = bf.qfi_gaussian(coherent_family(0.3, 2.0, 1.5)).value
    assert np.isclose(value, bf.hc_closed_form(0.3, 2.0, 1.5), rtol=1e-6)


def test_hq_zero_signal_limit():
    eta1, n_th = 0.4, 1.3
    tau = 1.0 - eta1
    expected = (
        n_th**2
        * (2.0 * tau * n_th * (tau * n_th + 1.0) + 1.0)
        / (
            tau
            * n_th
            * (n_th * tau + 1.0)
            * (2.0 * n_th * tau + 2.0 * n_th**2 * tau**2 + 1.0)
        )
    )
    assert np.isclose(bf.hq_closed_form(eta1, 0.0, n_th), expected, rtol=1e-12)
    # numeric cross-check slightly away from zero signal
    numeric = bf.qfi_gaussian(tmsv_family(eta1, 1e-7, n_th)).value
    assert np.isclose(numeric, expected, rtol=1e-4)


def test_hq_positive_on_grid():
    for eta1 in np.linspace(0.1, 0.9, 5):
        for n_s in np.linspace(0.1, 5.0, 5):
            for n_th in np.linspace(0.0, 5.0, 5):
                assert bf.hq_closed_form(eta1, n_s, n_th) > 0.0


def test_closed_form_domain_errors():
    with pytest.raises(ValueError):
        bf.hq_closed_form(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        bf.hq_closed_form(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        bf.hc_closed_form(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        bf.hq_closed_form(0.5, 0.0, 0.0)


def test_ratio_high_reflectivity_values():
    assert np.isclose(bf.ratio_high_reflectivity(0.0, 2.0), 1.0, rtol=1e-12)
    assert np.isclose(bf.ratio_high_reflectivity(1.0, 1e9), 2.6, rtol=1e-6)
    with pytest.raises(ValueError):
        bf.ratio_high_reflectivity(1.0, 0.0)


def test_ratio_high_reflectivity_consistent_with_closed_forms():
    eta1 = 1.0 - 1e-6
    n_s, n_th = 1.0, 2.0
    ratio = bf.hq_closed_form(eta1, n_s, n_th) / bf.hc_closed_form(eta1, n_s, n_th)
    assert np.isclose(ratio, bf.ratio_high_reflectivity(n_s, n_th), rtol=1e-4)


def test_ratio_noisy_limit_values():
    assert bf.ratio_noisy_limit(0.0) == 1.0
    assert np.isclose(bf.ratio_noisy_limit(1.0), 2.6, rtol=1e-15)
    for n_s in (0.5, 1.0, 5.0):
        assert np.isclose(
            bf.ratio_high_reflectivity(n_s, 1e4), bf.ratio_noisy_limit(n_s), rtol=1e-2
        )


def test_advantage_monotone_in_reflectivity():
    ratios = []
    for eta1 in (0.5, 0.75, 0.9, 0.95):
        ratios.append(bf.hq_closed_form(eta1, 1.0, 1.0) / bf.hc_closed_form(eta1, 1.0, 1.0))
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
