"""One-, two- and three-tangles and the CKW residue of pure states."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, BadIndex, SpectralFailure
from .pauli import SIGMA, invariant_tau3_pure
from .qstate import SPECTRAL_TOL, DensityMatrix, PureState, check_qubit, partial_trace

YY = np.kron(SIGMA[2], SIGMA[2]).real  # sigma_y x sigma_y is a real matrix
BOUND_TOL = 1e-9


def _clamp_unit(value: float, what: str) -> float:
    if value < -SPECTRAL_TOL or value > 1 + SPECTRAL_TOL:
        raise SpectralFailure(f"{what} = {value:.3e} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def one_tangle(state: PureState, j: int) -> float:
    """``4 det`` of the reduced state of qubit ``j``."""
    check_qubit(j, state.n_qubits)
    rho = partial_trace(state, [j]).entries
    return _clamp_unit(4 * float(np.linalg.det(rho).real), f"one-tangle of qubit {j}")


def concurrence_spectrum(rho: DensityMatrix) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho (s2 s2) rho* (s2 s2)``.

    Computed as the singular values of ``W^T (s2 s2) W`` where
    ``rho = W W^dagger``; the two spectra coincide and the SVD needs no
    clamping of spurious imaginary parts.
    """
    if rho.n_qubits != 2:
        raise BadDimension(f"concurrence needs a two-qubit state, got {rho.n_qubits} qubits")
    w, v = rho.eigh()
    return _factor_spectrum(v * np.sqrt(w))


def _factor_spectrum(W: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(W.T @ YY @ W, compute_uv=False)
    s = np.sort(s)[::-1][:4]
    return np.pad(s, (0, 4 - len(s)))


def _from_spectrum(lam: np.ndarray) -> float:
    return max(0.0, float(lam[0] - lam[1:].sum()))


def concurrence(rho: DensityMatrix) -> float:
    return _from_spectrum(concurrence_spectrum(rho))


def two_tangle(state: PureState, j: int, k: int) -> float:
    if j == k:
        raise BadIndex("two-tangle needs two different qubits")
    check_qubit(j, state.n_qubits)
    check_qubit(k, state.n_qubits)
    # the reshaped amplitudes factor the reduced state exactly; going through
    # its eigenvalues would cost sqrt(eps) accuracy on rank-deficient reductions
    t = np.moveaxis(state.as_tensor(), [j - 1, k - 1], [0, 1]).reshape(4, -1)
    t = t / state.norm()
    return _from_spectrum(_factor_spectrum(t)) ** 2


def three_tangle_pure(state: PureState) -> float:
    return invariant_tau3_pure(state)


def ckw_residue(state: PureState, j: int) -> float:
    """``tau_1(j) - sum_k tau_2(jk)``, unclamped."""
    check_qubit(j, state.n_qubits)
    pairs = sum(two_tangle(state, j, k) for k in range(1, state.n_qubits + 1) if k != j)
    return one_tangle(state, j) - pairs


def key(qubits) -> str:
    """JSON key for a qubit tuple, e.g. ``(1, 2, 4) -> "124"``."""
    return "".join(str(q) for q in sorted(qubits))


@dataclass
class TangleReport:
    n_qubits: int
    one_tangles: dict[int, float]
    two_tangles: dict[tuple[int, int], float]
    three_tangles: dict[tuple[int, int, int], tuple[float, str]] = field(default_factory=dict)
    residues: dict[int, float] = field(default_factory=dict)

    @property
    def clamped_residues(self) -> dict[int, float]:
        return {j: max(r, 0.0) for j, r in self.residues.items()}

    def scalars(self) -> dict[str, float]:
        """Flat ``column name -> value`` view used by sweeps."""
        out = {f"tau1_{j}": v for j, v in self.one_tangles.items()}
        out.update({f"tau2_{key(p)}": v for p, v in self.two_tangles.items()})
        for t, (v, flag) in self.three_tangles.items():
            out[f"{'tau3' if flag == 'pure' else 'roof3'}_{key(t)}"] = v
        out.update({f"residue_{j}": v for j, v in self.residues.items()})
        return out

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "one_tangles": {key([j]): v for j, v in self.one_tangles.items()},
            "two_tangles": {key(p): v for p, v in self.two_tangles.items()},
            "three_tangles": {key(t): {"value": v, "kind": flag}
                              for t, (v, flag) in self.three_tangles.items()},
            "residues": {key([j]): v for j, v in self.residues.items()},
        }


def tangle_report(state: PureState, roofs: bool = True, seed: int = 0,
                  restarts: int = 64) -> TangleReport:
    """Collect every tangle of ``state``.

    Three-qubit states get the exact pure-state three-tangle.  For four qubits
    the three-tangles of the mixed reductions are convex-roof estimates, which
    are only computed when ``roofs`` is true.
    """
    n = state.n_qubits
    qubits = range(1, n + 1)
    one = {j: one_tangle(state, j) for j in qubits}
    two = {(j, k): two_tangle(state, j, k) for j, k in itertools.combinations(qubits, 2)}
    residues = {j: one[j] - sum(v for p, v in two.items() if j in p) for j in qubits}
    three: dict[tuple[int, int, int], tuple[float, str]] = {}
    if n == 3:
        three[(1, 2, 3)] = (three_tangle_pure(state), "pure")
    elif n == 4 and roofs:
        from .convexroof import roof_three_tangles_all

        for t, res in roof_three_tangles_all(state, seed=seed, restarts=restarts).items():
            three[t] = (res.value, "roof-estimate")
    return TangleReport(n, one, two, three, residues)
