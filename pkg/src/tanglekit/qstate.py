"""Pure states and density matrices of small qubit registers.

Basis convention used everywhere in the package: qubit 1 is the most
significant bit, so the ket ``|q1 q2 ... qN>`` sits at index
``sum_k q_k * 2**(N - k)``.  Kets written left to right therefore read off
directly as binary strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BadDimension, BadIndex, BadSubset, SpectralFailure, ZeroVector

STRUCT_TOL = 1e-12
SPECTRAL_TOL = 1e-10
ZERO_NORM = 1e-14
MAX_RANDOM_QUBITS = 6


def _n_from_length(length: int) -> int:
    n = int(length).bit_length() - 1
    if length < 2 or (1 << n) != length:
        raise BadDimension(f"length {length} is not 2**n with n >= 1")
    return n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector of an ``n_qubits`` register (read-only)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if self.n_qubits < 1 or amps.size != 2**self.n_qubits:
            raise BadDimension(
                f"{amps.size} amplitudes do not describe {self.n_qubits} qubits")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))

    def to_json(self) -> dict:
        return {"n_qubits": self.n_qubits,
                "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes]}

    def __repr__(self) -> str:
        return f"PureState(n_qubits={self.n_qubits}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, trace-one, positive semidefinite matrix on ``n_qubits``.

    Eigenvalues in ``[-SPECTRAL_TOL, 0)`` are treated as zero; anything more
    negative is rejected.
    """

    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        d = 2**self.n_qubits
        if m.shape != (d, d):
            raise BadDimension(f"matrix shape {m.shape} does not match {self.n_qubits} qubits")
        if np.abs(m - m.conj().T).max() > STRUCT_TOL:
            raise SpectralFailure("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > STRUCT_TOL:
            raise SpectralFailure(f"trace {np.trace(m).real:.3e} differs from 1")
        if np.linalg.eigvalsh(m).min() < -SPECTRAL_TOL:
            raise SpectralFailure("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues (clamped at zero) and eigenvectors."""
        w, v = np.linalg.eigh(self.entries)
        return np.clip(w, 0.0, None), v

    def rank(self, threshold: float = SPECTRAL_TOL) -> int:
        return int((self.eigh()[0] > threshold).sum())


def normalize(raw: Sequence[complex] | np.ndarray) -> PureState:
    """Return the unit vector along ``raw`` as a :class:`PureState`."""
    v = np.asarray(raw, dtype=np.complex128).ravel()
    n = _n_from_length(v.size)
    nrm = np.linalg.norm(v)
    if nrm < ZERO_NORM:
        raise ZeroVector("cannot normalize a zero vector")
    return PureState(n, v / nrm)


def basis_state(bits: str) -> PureState:
    """Computational basis ket, e.g. ``basis_state("0110")``."""
    if not bits or set(bits) - {"0", "1"}:
        raise BadDimension(f"invalid bit string {bits!r}")
    v = np.zeros(2**len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1
    return PureState(len(bits), v)


def from_kets(terms: Iterable[tuple[str, complex]]) -> PureState:
    """Normalized superposition of basis kets given as ``(bits, amplitude)``."""
    terms = list(terms)
    n = len(terms[0][0])
    v = np.zeros(2**n, dtype=np.complex128)
    for bits, amp in terms:
        if len(bits) != n:
            raise BadDimension("all kets must have the same number of qubits")
        v[int(bits, 2)] += amp
    return normalize(v)


def check_subset(keep: Iterable[int], n_qubits: int) -> tuple[int, ...]:
    idx = [int(q) for q in keep]
    if not idx:
        raise BadSubset("qubit subset is empty")
    if len(set(idx)) != len(idx):
        raise BadSubset(f"duplicate qubits in {idx}")
    if min(idx) < 1 or max(idx) > n_qubits:
        raise BadSubset(f"qubits {idx} outside 1..{n_qubits}")
    return tuple(sorted(idx))


def check_qubit(j: int, n_qubits: int) -> int:
    if not 1 <= int(j) <= n_qubits:
        raise BadIndex(f"qubit {j} outside 1..{n_qubits}")
    return int(j)


def partial_trace(state: PureState | DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (register order kept)."""
    n = state.n_qubits
    keep = check_subset(keep, n)
    axes_keep = [q - 1 for q in keep]
    axes_out = [q for q in range(n) if q not in axes_keep]
    k = len(keep)
    if isinstance(state, PureState):
        t = np.transpose(state.as_tensor(), axes_keep + axes_out).reshape(2**k, -1)
        rho = t @ t.conj().T
    else:
        t = state.entries.reshape((2,) * (2 * n))
        perm = axes_keep + axes_out + [n + a for a in axes_keep] + [n + a for a in axes_out]
        t = np.transpose(t, perm).reshape(2**k, 2**(n - k), 2**k, 2**(n - k))
        rho = np.einsum("ajbj->ab", t)
    # symmetrize away rounding so the Hermiticity check is exact
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(k, rho / np.trace(rho).real)


def random_pure_state(n: int, seed: int | np.random.SeedSequence | None) -> PureState:
    """Haar-random ``n``-qubit state, deterministic for a given seed."""
    if not 1 <= n <= MAX_RANDOM_QUBITS:
        raise BadDimension(f"n={n} outside 1..{MAX_RANDOM_QUBITS}")
    rng = np.random.default_rng(seed)
    z = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return normalize(z)


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_sl2(rng: np.random.Generator, max_stretch: float = 2.0) -> np.ndarray:
    """Random element of SL(2,C) with singular values ``s, 1/s``, ``1 <= s <= max_stretch``.

    Bounding the stretch keeps the condition number, and hence the roundoff
    in invariance checks, under control.
    """
    def su2():
        u = random_unitary(rng, 2)
        return u / np.sqrt(np.linalg.det(u))

    s = rng.uniform(1.0, max_stretch)
    return su2() @ np.diag([s, 1 / s]) @ su2()


def tensor(a: PureState, b: PureState) -> PureState:
    return PureState(a.n_qubits + b.n_qubits, np.kron(a.amplitudes, b.amplitudes))


def apply_local(state: PureState, gate: np.ndarray, qubit: int) -> PureState:
    """Apply a 2x2 matrix to one qubit.  The result is not renormalized."""
    q = check_qubit(qubit, state.n_qubits) - 1
    t = np.tensordot(np.asarray(gate, dtype=np.complex128), state.as_tensor(), axes=([1], [q]))
    return PureState(state.n_qubits, np.moveaxis(t, 0, q).ravel())


def apply_local_all(state: PureState, gates: Sequence[np.ndarray]) -> PureState:
    """Apply ``gates[k]`` to qubit ``k+1`` for every qubit."""
    if len(gates) != state.n_qubits:
        raise BadDimension("need one gate per qubit")
    for k, g in enumerate(gates):
        state = apply_local(state, g, k + 1)
    return state


def permute_qubits(state: PureState, order: Sequence[int]) -> PureState:
    """Relabel qubits: new qubit ``k`` is old qubit ``order[k-1]``."""
    order = [int(q) for q in order]
    if sorted(order) != list(range(1, state.n_qubits + 1)):
        raise BadSubset(f"{order} is not a permutation of 1..{state.n_qubits}")
    t = np.transpose(state.as_tensor(), [q - 1 for q in order])
    return PureState(state.n_qubits, t.ravel())


def state_from_json(data: dict) -> tuple[PureState, float]:
    """Parse the JSON state format and normalize.

    Returns the state and the factor that was applied to the raw amplitudes.
    """
    try:
        n = int(data["n_qubits"])
        amps = np.array([complex(float(re), float(im)) for re, im in data["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadDimension(f"malformed state description: {exc}") from exc
    if amps.size != 2**n:
        raise BadDimension(f"{amps.size} amplitudes given for {n} qubits")
    nrm = np.linalg.norm(amps)
    state = normalize(amps)
    return state, float(1.0 / nrm)


def read_state(path: str | Path) -> tuple[PureState, float]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadDimension(f"{path}: not valid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise BadDimension(f"{path}: expected a JSON object")
    return state_from_json(data)


def write_state(state: PureState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state.to_json(), indent=1), encoding="utf-8")
