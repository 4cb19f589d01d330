"""Antilinear multi-copy Pauli contractions ("combs") and named invariants.

A comb is written as a list of Pauli words, one per copy of the state.  Slots
holding an integer are fixed Pauli indices; slots holding a string are
contraction variables.  Every variable occurs in exactly two slots and is
summed over ``mu = 0..3`` with weight ``METRIC[mu]``.  Each copy contributes
the bilinear (not sesquilinear) form ``psi^T (s_w1 x ... x s_wN) psi``.

    >>> from tanglekit.qstate import from_kets
    >>> ghz = from_kets([("000", 1), ("111", 1)])
    >>> round(invariant_tau3_pure(ghz), 12)
    1.0
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence, Union

import numpy as np

from .errors import BadArity, BadPair, BadWord
from .qstate import PureState

SIGMA = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)
SIGMA.setflags(write=False)

METRIC = (-1, 1, 0, 1)
# mu = 2 carries zero weight and is skipped in the contraction sums
_ACTIVE_MU = tuple(mu for mu in range(4) if METRIC[mu] != 0)

Slot = Union[int, str]


def word_matrix(word: Sequence[int]) -> np.ndarray:
    """Kronecker product ``s_w1 x ... x s_wN`` as a dense matrix."""
    _check_word(word)
    return reduce(np.kron, (SIGMA[w] for w in word))


def _check_word(word: Sequence[int]) -> None:
    for w in word:
        if isinstance(w, str) or int(w) != w or not 0 <= w <= 3:
            raise BadWord(f"Pauli index {w!r} outside 0..3")


def bilinear_form(state: PureState, word: Sequence[int]) -> complex:
    """``<psi*| s_w1 x ... x s_wN |psi>``; amplitudes are not conjugated."""
    if len(word) != state.n_qubits:
        raise BadWord(f"word of length {len(word)} for {state.n_qubits} qubits")
    _check_word(word)
    t = state.as_tensor()
    for k, w in enumerate(word):
        if w:
            t = np.moveaxis(np.tensordot(SIGMA[w], t, axes=([1], [k])), 0, k)
    return complex(np.dot(state.amplitudes, t.ravel()))


@dataclass(frozen=True)
class CombSpec:
    """Symbolic multi-copy contraction.

    ``words[c][k]`` is the slot of qubit ``k+1`` in copy ``c``.  With
    ``symmetrize`` the value is averaged over all simultaneous permutations
    of the qubit slots.
    """

    n_qubits: int
    words: tuple[tuple[Slot, ...], ...]
    symmetrize: bool = False
    prefactor: complex = 1.0

    def __post_init__(self):
        words = tuple(tuple(w) for w in self.words)
        object.__setattr__(self, "words", words)
        for w in words:
            if len(w) != self.n_qubits:
                raise BadWord(f"word {w} has {len(w)} slots, expected {self.n_qubits}")
            _check_word([s for s in w if not isinstance(s, str)])
        counts: dict[str, int] = {}
        for w in words:
            for s in w:
                if isinstance(s, str):
                    counts[s] = counts.get(s, 0) + 1
        bad = {k: v for k, v in counts.items() if v != 2}
        if bad:
            raise BadWord(f"contraction variables must occur exactly twice: {bad}")

    @property
    def n_copies(self) -> int:
        return len(self.words)

    @property
    def contractions(self) -> tuple[str, ...]:
        return tuple(sorted({s for w in self.words for s in w if isinstance(s, str)}))


@dataclass(frozen=True)
class InvariantValue:
    raw: complex
    modulus: float = field(init=False)
    homogeneity_degree: int

    def __post_init__(self):
        object.__setattr__(self, "modulus", float(abs(self.raw)))

    def normalized(self, degree: int = 4) -> float:
        """Modulus raised to homogeneity ``degree`` (nonnegative root)."""
        return self.modulus ** (degree / self.homogeneity_degree)


def eval_comb(state: PureState, spec: CombSpec) -> InvariantValue:
    if spec.n_qubits != state.n_qubits:
        raise BadArity(f"comb for {spec.n_qubits} qubits applied to {state.n_qubits}")
    n = spec.n_qubits
    labels = spec.contractions
    cache: dict[tuple[int, ...], complex] = {}

    def form(word: tuple[int, ...]) -> complex:
        if word not in cache:
            cache[word] = bilinear_form(state, word)
        return cache[word]

    perms = list(itertools.permutations(range(n))) if spec.symmetrize else [tuple(range(n))]
    total = 0j
    for perm in perms:
        words = [tuple(w[perm[i]] for i in range(n)) for w in spec.words]
        for assignment in itertools.product(_ACTIVE_MU, repeat=len(labels)):
            weight = 1
            for mu in assignment:
                weight *= METRIC[mu]
            env = dict(zip(labels, assignment))
            term = 1 + 0j
            for w in words:
                term *= form(tuple(env[s] if isinstance(s, str) else s for s in w))
                if term == 0:
                    break
            total += weight * term
    raw = spec.prefactor * total / len(perms)
    return InvariantValue(complex(raw), 2 * spec.n_copies)


def naive_eval_comb(amplitudes: np.ndarray, spec: CombSpec) -> complex:
    """Reference evaluation with explicit loops and dense Kronecker matrices.

    Sums over all four values of every contraction variable (including the
    zero-weight one), rebuilds every operator from scratch and never caches;
    slow, for cross-checks only.
    """
    psi = np.asarray(amplitudes, dtype=np.complex128)
    n = spec.n_qubits
    labels = spec.contractions
    perms = list(itertools.permutations(range(n))) if spec.symmetrize else [tuple(range(n))]
    total = 0j
    for perm in perms:
        for assignment in itertools.product(range(4), repeat=len(labels)):
            env = dict(zip(labels, assignment))
            weight = 1
            for mu in assignment:
                weight *= METRIC[mu]
            term = 1 + 0j
            for w in spec.words:
                slots = [env[s] if isinstance(s, str) else s for s in w]
                op = np.ones((1, 1), dtype=np.complex128)
                for i in range(n):
                    op = np.kron(op, SIGMA[slots[perm[i]]])
                term *= psi @ op @ psi
            total += weight * term
    return complex(spec.prefactor * total / len(perms))


def _require(state: PureState, n: int) -> None:
    if state.n_qubits != n:
        raise BadArity(f"invariant needs {n} qubits, got {state.n_qubits}")


TAU3_COMB = CombSpec(3, (("m", 2, 2), ("m", 2, 2)))

F1_COMB = CombSpec(4, (("m", "n", 2, 2), ("m", 2, "l", 2), (2, "n", "l", 2)))

F2_COMB = CombSpec(
    4,
    (("m", "n", 2, 2), ("m", 2, "l", 2), (2, "n", 2, "t"), (2, 2, "l", "t")),
    symmetrize=True,
)

# The six-copy expression reuses its dummy labels per pair of copies; each
# pair is an independent contraction, i.e. (1/2) C_(1,2) C_(1,3) C_(2,3).
F3_COMB = CombSpec(
    4,
    (("m", "n", 2, 2), ("m", "n", 2, 2),
     ("r", 2, "t", 2), ("r", 2, "t", 2),
     (2, "R", "T", 2), (2, "R", "T", 2)),
    prefactor=0.5,
)


def c4_comb(i: int, j: int) -> CombSpec:
    if not (1 <= i < j <= 4):
        raise BadPair(f"pair ({i}, {j}) must satisfy 1 <= i < j <= 4")
    word: list[Slot] = [2, 2, 2, 2]
    word[i - 1], word[j - 1] = "m", "n"
    return CombSpec(4, (tuple(word), tuple(word)))


def invariant_tau3_pure(state: PureState) -> float:
    """Pure-state three-tangle ``|(s_mu s2 s2) . (s^mu s2 s2)|``."""
    _require(state, 3)
    return eval_comb(state, TAU3_COMB).modulus


def invariant_H(state: PureState) -> complex:
    """4-concurrence: half the bilinear expectation of ``s2^(x4)``."""
    _require(state, 4)
    return bilinear_form(state, (2, 2, 2, 2)) / 2


def invariant_C4(state: PureState, pair: tuple[int, int]) -> InvariantValue:
    _require(state, 4)
    return eval_comb(state, c4_comb(*pair))


def invariant_F1(state: PureState) -> InvariantValue:
    _require(state, 4)
    return eval_comb(state, F1_COMB)


def invariant_F2(state: PureState) -> InvariantValue:
    _require(state, 4)
    return eval_comb(state, F2_COMB)


def invariant_F3(state: PureState) -> InvariantValue:
    _require(state, 4)
    return eval_comb(state, F3_COMB)


def _h_value(state: PureState) -> InvariantValue:
    return InvariantValue(invariant_H(state), 2)


def _tau3_value(state: PureState) -> InvariantValue:
    _require(state, 3)
    return eval_comb(state, TAU3_COMB)


def _c4(i: int, j: int) -> Callable[[PureState], InvariantValue]:
    return lambda state: invariant_C4(state, (i, j))


# name -> (evaluator, number of qubits)
REGISTRY: dict[str, tuple[Callable[[PureState], InvariantValue], int]] = {
    "tau3": (_tau3_value, 3),
    "H": (_h_value, 4),
    "C4_14": (_c4(1, 4), 4),
    "C4_13": (_c4(1, 3), 4),
    "C4_12": (_c4(1, 2), 4),
    "C4_23": (_c4(2, 3), 4),
    "C4_24": (_c4(2, 4), 4),
    "C4_34": (_c4(3, 4), 4),
    "F1": (invariant_F1, 4),
    "F2": (invariant_F2, 4),
    "F3": (invariant_F3, 4),
}

# comb specs behind each registered name, for the reference evaluator
REGISTRY_COMBS: dict[str, CombSpec] = {
    "tau3": TAU3_COMB,
    **{f"C4_{i}{j}": c4_comb(i, j) for i, j in itertools.combinations(range(1, 5), 2)},
    "F1": F1_COMB,
    "F2": F2_COMB,
    "F3": F3_COMB,
}


def evaluate(name: str, state: PureState) -> InvariantValue:
    try:
        fn, n = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown invariant {name!r}; known: {', '.join(REGISTRY)}") from None
    _require(state, n)
    return fn(state)


def invariants_for(n_qubits: int) -> list[str]:
    return [name for name, (_, n) in REGISTRY.items() if n == n_qubits]
