import numpy as np
import pytest
from hypothesis import given
from scipy.linalg import sqrtm

from helpers import states
from tanglekit.errors import BadDimension, BadIndex
from tanglekit.families import make_chi2, make_ghz, make_w
from tanglekit.qstate import DensityMatrix, PureState, partial_trace, random_pure_state
from tanglekit.tangles import (
    YY, ckw_residue, concurrence, concurrence_spectrum, one_tangle, tangle_report, three_tangle_pure,
    two_tangle,
)


def spectrum_rho_tilde(rho: np.ndarray) -> np.ndarray:
    """sqrt of the eigenvalues of rho (s2 s2) rho* (s2 s2), descending."""
    w = np.linalg.eigvals(rho @ YY @ rho.conj() @ YY)
    return np.sort(np.sqrt(np.clip(w.real, 0, None)))[::-1]


def spectrum_sqrt_r(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of R = sqrt(sqrt(rho) rho_tilde sqrt(rho)), descending."""
    s = sqrtm(rho)
    r = sqrtm(s @ YY @ rho.conj() @ YY @ s)
    return np.sort(np.linalg.eigvals(r).real)[::-1]


def mixed_two_qubit(seed: int) -> DensityMatrix:
    return partial_trace(random_pure_state(4, seed), [1, 2])


@pytest.mark.parametrize("seed", range(8))
def test_concurrence_spectrum_equivalent_forms(seed):
    rho = mixed_two_qubit(seed)
    mine = concurrence_spectrum(rho)
    assert np.abs(mine - spectrum_rho_tilde(rho.entries)).max() < 1e-7
    assert np.abs(mine - spectrum_sqrt_r(rho.entries)).max() < 1e-7


def test_bell_and_product():
    bell = PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert abs(concurrence(bell.projector()) - 1) < 1e-12
    prod = PureState(2, np.kron([0.6, 0.8], [1, 1j]) / np.sqrt(2))
    assert concurrence(prod.projector()) < 1e-12


@pytest.mark.parametrize("f", [0.1, 0.3, 0.5, 0.7, 0.95])
def test_werner_closed_form(f):
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    proj = np.outer(phi, phi)
    rho = DensityMatrix(2, f * proj + (1 - f) / 3 * (np.eye(4) - proj))
    assert abs(concurrence(rho) - max(0, 2 * f - 1)) < 1e-12


@given(states(2))
def test_pure_two_qubit_concurrence(s):
    a, b, c, d = s.amplitudes
    assert abs(two_tangle(s, 1, 2) - 4 * abs(a * d - b * c) ** 2) < 1e-12
    assert abs(one_tangle(s, 1) - two_tangle(s, 1, 2)) < 1e-12


@given(states(4))
def test_two_tangle_matches_density_route(s):
    for j, k in [(1, 2), (2, 4), (1, 3)]:
        via_rho = concurrence(partial_trace(s, [j, k])) ** 2
        assert abs(two_tangle(s, j, k) - via_rho) < 1e-7


@given(states(3))
def test_ckw_equality_three_qubits(s):
    tau3 = three_tangle_pure(s)
    for j in (1, 2, 3):
        assert abs(ckw_residue(s, j) - tau3) < 1e-9


@given(states(4))
def test_residues_nonnegative(s):
    for j in range(1, 5):
        assert ckw_residue(s, j) >= -1e-9


@given(states(4))
def test_tangles_in_unit_interval(s):
    rep = tangle_report(s, roofs=False)
    for v in [*rep.one_tangles.values(), *rep.two_tangles.values()]:
        assert 0 <= v <= 1


def test_ghz_and_w_values():
    ghz, w = make_ghz(3), make_w(3)
    assert abs(one_tangle(ghz, 1) - 1) < 1e-12 and two_tangle(ghz, 1, 2) < 1e-12
    assert abs(one_tangle(w, 2) - 8 / 9) < 1e-12
    assert abs(two_tangle(w, 1, 3) - 4 / 9) < 1e-12


def test_chi2_two_tangles_complex():
    a, b, c, d = 0.3 + 0.2j, -0.5j, 0.4, 0.1 - 0.6j
    s = make_chi2(a, b, c, d)
    n = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    assert abs(two_tangle(s, 2, 3) - 4 * abs(c * d) ** 2 / n**2) < 1e-12
    assert abs(two_tangle(s, 2, 4) - 4 * abs(a * b) ** 2 / n**2) < 1e-12
    for pair in [(1, 2), (1, 3), (1, 4), (3, 4)]:
        assert two_tangle(s, *pair) < 1e-12


def test_errors():
    s = random_pure_state(3, 0)
    with pytest.raises(BadIndex):
        two_tangle(s, 2, 2)
    with pytest.raises(BadIndex):
        one_tangle(s, 4)
    with pytest.raises(BadDimension):
        concurrence(partial_trace(random_pure_state(4, 0), [1, 2, 3]))


def test_report_three_qubits():
    rep = tangle_report(make_ghz(3))
    assert rep.three_tangles[(1, 2, 3)] == pytest.approx((1.0, "pure"))
    data = rep.to_json()
    assert data["three_tangles"]["123"]["kind"] == "pure"
    assert set(rep.scalars()) >= {"tau1_1", "tau2_13", "tau3_123", "residue_3"}


def test_report_four_qubits_without_roofs():
    rep = tangle_report(random_pure_state(4, 1), roofs=False)
    assert rep.three_tangles == {} and len(rep.two_tangles) == 6
    assert all(v >= 0 for v in rep.clamped_residues.values())


def test_report_four_qubits_with_roofs():
    rep = tangle_report(make_ghz(4), restarts=2)
    assert all(flag == "roof-estimate" for _, flag in rep.three_tangles.values())
    assert "roof3_234" in rep.scalars()
