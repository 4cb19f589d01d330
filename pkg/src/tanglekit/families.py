"""Constructors for the four-qubit state families and the telescoping map."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadIndex, BadParam, ZeroVector
from .qstate import PureState, apply_local, check_qubit, from_kets, normalize, permute_qubits


def make_psi_p(p: float) -> PureState:
    """Purification of the rank-2 GHZ/W mixture, parameter ``0 <= p <= 1``."""
    if not 0 <= p <= 1:
        raise BadParam(f"p={p} outside [0, 1]")
    g, w = math.sqrt(p / 2), math.sqrt((1 - p) / 3)
    return from_kets([("1111", g), ("1000", g), ("0100", w), ("0010", w), ("0001", w)])


def make_telescope(reference: PureState, doubled_qubit: int,
                   post_unitary: np.ndarray | None = None) -> PureState:
    """Double one qubit in the computational basis.

    Every component ``|..k..>`` of the reference becomes ``|..k..>|k>``; the
    new qubit is appended at the end of the register and ``post_unitary``, if
    given, acts on it afterwards.
    """
    n = reference.n_qubits
    if n < 2:
        raise BadIndex("telescoping needs a reference with at least two qubits")
    q = check_qubit(doubled_qubit, n)
    idx = np.arange(2**n)
    bit = (idx >> (n - q)) & 1
    amps = np.zeros(2 ** (n + 1), dtype=np.complex128)
    amps[(idx << 1) | bit] = reference.amplitudes
    out = PureState(n + 1, amps)
    if post_unitary is not None:
        u = np.asarray(post_unitary, dtype=np.complex128)
        if u.shape != (2, 2) or np.abs(u.conj().T @ u - np.eye(2)).max() > 1e-10:
            raise BadParam("post_unitary must be a 2x2 unitary")
        out = apply_local(out, u, n + 1)
    return out


def make_psi_tel(alpha: complex, beta: complex, gamma: complex) -> PureState:
    """``alpha|1111> + beta|1000> + gamma|0110>``, normalized."""
    return _normalized([("1111", alpha), ("1000", beta), ("0110", gamma)])


def psi_tel_reference(alpha: complex, beta: complex, gamma: complex) -> PureState:
    """Three-qubit state whose qubit-2 doubling, moved to slot 3, gives ``make_psi_tel``."""
    return _normalized([("111", alpha), ("100", beta), ("010", gamma)])


def psi_tel_by_telescoping(alpha: complex, beta: complex, gamma: complex) -> PureState:
    doubled = make_telescope(psi_tel_reference(alpha, beta, gamma), 2)
    return permute_qubits(doubled, [1, 2, 4, 3])


def make_cluster(a: complex, b: complex, c: complex, d: complex) -> PureState:
    """``a|0000> - b|0111> - c|1100> + d|1011>``, normalized."""
    return _normalized([("0000", a), ("0111", -b), ("1100", -c), ("1011", d)])


def make_chi1() -> PureState:
    return from_kets([("0000", 1), ("1011", 1), ("1101", 1), ("1110", 1)])


def make_chi2(a: complex, b: complex, c: complex, d: complex) -> PureState:
    return _normalized([("0000", a), ("0101", b), ("1000", c), ("1110", d)])


def make_ghz(n: int = 3) -> PureState:
    return from_kets([("0" * n, 1), ("1" * n, 1)])


def make_w(n: int = 3) -> PureState:
    return from_kets([("0" * k + "1" + "0" * (n - k - 1), 1) for k in range(n)])


def make_product(bits: str) -> PureState:
    """Product of single-qubit states labelled ``0``, ``1``, ``+`` or ``-``."""
    single = {"0": (1, 0), "1": (0, 1), "+": (1, 1), "-": (1, -1)}
    if not bits or set(bits) - set(single):
        raise BadParam(f"product labels must come from 0, 1, +, -; got {bits!r}")
    v = np.ones(1, dtype=np.complex128)
    for ch in bits:
        v = np.kron(v, np.array(single[ch], dtype=np.complex128))
    return normalize(v)


def _normalized(terms) -> PureState:
    try:
        return from_kets(terms)
    except ZeroVector as exc:
        raise BadParam("family parameters are not normalizable (all zero)") from exc


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    def build(self) -> PureState:
        return make_state(self)

    def with_param(self, key: str, value) -> "FamilySpec":
        return FamilySpec(self.name, {**self.params, key: value})


def _real(params: dict, key: str, default=None) -> float:
    v = params.get(key, default)
    if v is None:
        raise BadParam(f"missing parameter {key!r}")
    v = complex(v)
    if v.imag:
        raise BadParam(f"parameter {key!r} must be real")
    return v.real


def _cplx(params: dict, key: str, default=None) -> complex:
    v = params.get(key, default)
    if v is None:
        raise BadParam(f"missing parameter {key!r}")
    return complex(v)


def _abcd(params: dict, default=None) -> list[complex]:
    return [_cplx(params, k, default) for k in "abcd"]


_BUILDERS = {
    "psi_p": lambda q: make_psi_p(_real(q, "p")),
    "psi_tel": lambda q: make_psi_tel(*(_cplx(q, k, 1) for k in ("alpha", "beta", "gamma"))),
    "cluster": lambda q: make_cluster(*_abcd(q, 0.5)),
    "chi1": lambda q: make_chi1(),
    "chi2": lambda q: make_chi2(*_abcd(q, 0.5)),
    "ghz": lambda q: make_ghz(int(_real(q, "n", 4))),
    "w": lambda q: make_w(int(_real(q, "n", 4))),
    "product": lambda q: make_product(str(q.get("bits", "0000"))),
}

FAMILIES = tuple(_BUILDERS)


def make_state(spec: FamilySpec) -> PureState:
    try:
        build = _BUILDERS[spec.name]
    except KeyError:
        raise BadParam(f"unknown family {spec.name!r}; choose from {', '.join(FAMILIES)}") from None
    try:
        return build(spec.params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BadParam):
            raise
        raise BadParam(f"bad parameters for {spec.name}: {exc}") from exc


def parse_family(text: str) -> FamilySpec:
    """Parse ``name`` or ``name:key=value,key=value``.

    Values stay strings until the constructor converts them, so complex
    entries such as ``0.5+0.1j`` pass through untouched.
    """
    name, _, rest = text.strip().partition(":")
    name = name.strip()
    if name not in _BUILDERS:
        raise BadParam(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq or not k.strip():
            raise BadParam(f"malformed parameter {item!r} in {text!r}")
        params[k.strip()] = v.strip()
    return FamilySpec(name, params)
