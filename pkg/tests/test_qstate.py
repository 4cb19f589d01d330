import itertools
import json

import numpy as np
import pytest
from hypothesis import given

from helpers import states
from tanglekit.errors import BadDimension, BadIndex, BadSubset, SpectralFailure, ZeroVector
from tanglekit.qstate import (
    DensityMatrix, PureState, apply_local, basis_state, from_kets, normalize, partial_trace,
    permute_qubits, random_pure_state, random_sl2, read_state, state_from_json, tensor, write_state,
)


def loop_partial_trace(psi: np.ndarray, n: int, keep) -> np.ndarray:
    """Index-by-index reduction; qubit 1 is the most significant bit."""
    keep = sorted(keep)
    rest = [q for q in range(1, n + 1) if q not in keep]
    k = len(keep)
    rho = np.zeros((2**k, 2**k), dtype=complex)
    for a, b in itertools.product(range(2**k), repeat=2):
        for r in range(2 ** len(rest)):
            def index(sub):
                bits = [0] * n
                for pos, q in enumerate(keep):
                    bits[q - 1] = (sub >> (k - 1 - pos)) & 1
                for pos, q in enumerate(rest):
                    bits[q - 1] = (r >> (len(rest) - 1 - pos)) & 1
                return int("".join(map(str, bits)), 2)
            rho[a, b] += psi[index(a)] * np.conj(psi[index(b)])
    return rho


def test_basis_ordering():
    s = basis_state("100")
    assert s.amplitudes[4] == 1
    assert np.isclose(partial_trace(s, [1]).entries[1, 1], 1)


def test_normalize_and_errors():
    s = normalize([3, 4j])
    assert s.n_qubits == 1 and np.isclose(s.norm(), 1)
    with pytest.raises(ZeroVector):
        normalize([0, 0])
    with pytest.raises(BadDimension):
        normalize([1, 0, 0])
    with pytest.raises(BadDimension):
        PureState(2, np.ones(8))


def test_amplitudes_are_read_only():
    s = random_pure_state(2, 0)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1


def test_density_validation():
    with pytest.raises(SpectralFailure):
        DensityMatrix(1, np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(SpectralFailure):
        DensityMatrix(1, np.array([[1.5, 0], [0, -0.5]]))
    with pytest.raises(SpectralFailure):
        DensityMatrix(1, np.eye(2))
    with pytest.raises(BadDimension):
        DensityMatrix(2, np.eye(2) / 2)


@pytest.mark.parametrize("seed", range(4))
def test_partial_trace_matches_index_loop(seed):
    s = random_pure_state(4, seed)
    for keep in ([1], [2, 4], [1, 3, 4], [3]):
        ref = loop_partial_trace(s.amplitudes, 4, keep)
        assert np.abs(partial_trace(s, keep).entries - ref).max() < 1e-12


def test_partial_trace_of_density_agrees_with_pure():
    s = random_pure_state(4, 9)
    rho = partial_trace(s, [1, 2, 4])
    assert np.abs(partial_trace(rho, [2, 3]).entries - partial_trace(s, [2, 4]).entries).max() < 1e-12


def test_subset_errors():
    s = random_pure_state(3, 1)
    with pytest.raises(BadSubset):
        partial_trace(s, [])
    with pytest.raises(BadSubset):
        partial_trace(s, [1, 1])
    with pytest.raises((BadSubset, BadIndex)):
        partial_trace(s, [4])


@given(states(4))
def test_schmidt_duality(s):
    # complementary reductions of a pure state share their nonzero spectrum
    a = np.linalg.eigvalsh(partial_trace(s, [1]).entries)
    b = np.linalg.eigvalsh(partial_trace(s, [2, 3, 4]).entries)[-2:]
    assert np.allclose(a, b, atol=1e-12)


def test_product_reduction_is_pure():
    s = tensor(random_pure_state(2, 1), random_pure_state(1, 2))
    w = np.linalg.eigvalsh(partial_trace(s, [1, 2]).entries)
    assert abs(w[-1] - 1) < 1e-12


def test_permute_qubits():
    s = basis_state("110")
    assert permute_qubits(s, [3, 1, 2]).amplitudes[int("011", 2)] == 1
    with pytest.raises(BadSubset):
        permute_qubits(s, [1, 1, 2])


def test_apply_local_unnormalized():
    s = basis_state("00")
    out = apply_local(s, np.diag([2, 1]), 2)
    assert np.isclose(out.norm(), 2)


def test_random_sl2_determinant():
    rng = np.random.default_rng(0)
    for _ in range(10):
        g = random_sl2(rng)
        assert abs(np.linalg.det(g) - 1) < 1e-12
        s = np.linalg.svd(g, compute_uv=False)
        assert s[0] <= 2 + 1e-12


def test_random_state_deterministic():
    assert np.array_equal(random_pure_state(3, 5).amplitudes, random_pure_state(3, 5).amplitudes)
    with pytest.raises(BadDimension):
        random_pure_state(7, 0)


def test_json_round_trip(tmp_path):
    s = random_pure_state(3, 2)
    path = tmp_path / "s.json"
    write_state(s, path)
    back, factor = read_state(path)
    assert np.allclose(back.amplitudes, s.amplitudes) and abs(factor - 1) < 1e-12


def test_json_normalizes_and_reports_factor():
    s, factor = state_from_json({"n_qubits": 1, "amplitudes": [[3, 0], [0, 4]]})
    assert np.isclose(factor, 0.2) and np.isclose(s.amplitudes[1], 0.8j)


@pytest.mark.parametrize("data", [
    {"n_qubits": 2, "amplitudes": [[1, 0]]},
    {"amplitudes": [[1, 0], [0, 0]]},
    {"n_qubits": 1, "amplitudes": [[1], [0]]},
])
def test_json_malformed(data):
    with pytest.raises(BadDimension):
        state_from_json(data)


def test_read_state_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(BadDimension):
        read_state(path)
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(BadDimension):
        read_state(path)


def test_from_kets_mismatch():
    with pytest.raises(BadDimension):
        from_kets([("00", 1), ("1", 1)])
