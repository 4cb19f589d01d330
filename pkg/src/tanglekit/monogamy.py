"""Generalized monogamy diagnostics for pure four-qubit states.

For each qubit ``j`` the candidate four-tangle is what remains of the CKW
residue after subtracting the roof three-tangles of all triples containing
``j``::

    tau4_j = R_j - sum_{triples t containing j} roof(tau3)_t

Roof values are upper-bound estimates, so each ``tau4_j`` is a lower-bound
estimate: a spread between qubits larger than the tolerance is conclusive,
while agreement means "consistent within optimizer accuracy".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .convexroof import RoofResult, roof_three_tangles_all
from .errors import BadArity
from .families import make_telescope
from .pauli import evaluate, invariant_C4, invariant_F2, invariant_F3, invariant_H, invariants_for
from .qstate import PureState
from .tangles import key, one_tangle, three_tangle_pure, two_tangle

CONSISTENCY_TOL = 1e-3
ROOF_TOL = 1e-4
ALGEBRA_TOL = 1e-9
RELATION_RTOL = 1e-8
DIRECTION_NOTE = "roof values are upper bounds, so tau4 candidates are lower bounds"


@dataclass
class QubitBalance:
    residue: float
    roof_sum: float
    tau4_candidate: float


@dataclass
class MonogamyReport:
    per_qubit: dict[int, QubitBalance]
    consistent: bool
    tau4_from_invariants: dict[str, float]
    scaling_s: dict[int, float | None]
    roofs: dict[tuple[int, int, int], float] = field(default_factory=dict)
    one_tangles: dict[int, float] = field(default_factory=dict)
    two_tangle_sums: dict[int, float] = field(default_factory=dict)
    tolerance: float = CONSISTENCY_TOL
    transform_exponent: float = 1.0

    @property
    def tau4(self) -> dict[int, float]:
        return {j: b.tau4_candidate for j, b in self.per_qubit.items()}

    @property
    def spread(self) -> float:
        vals = list(self.tau4.values())
        return max(vals) - min(vals)

    def scalars(self) -> dict[str, float]:
        out = {}
        for j, b in self.per_qubit.items():
            out[f"residue_{j}"] = b.residue
            out[f"roofsum_{j}"] = b.roof_sum
            out[f"tau4_{j}"] = b.tau4_candidate
        out.update({f"roof3_{key(t)}": v for t, v in self.roofs.items()})
        out.update({f"inv_{k}": v for k, v in self.tau4_from_invariants.items()})
        out["consistent"] = float(self.consistent)
        out["tau4_spread"] = self.spread
        return out

    def to_json(self) -> dict:
        return {
            "per_qubit": {
                key([j]): {"residue": b.residue, "roof_sum": b.roof_sum,
                           "tau4_candidate": b.tau4_candidate}
                for j, b in self.per_qubit.items()
            },
            "consistent": self.consistent,
            "tolerance": self.tolerance,
            "direction": DIRECTION_NOTE,
            "transform_exponent": self.transform_exponent,
            "roofs": {key(t): v for t, v in self.roofs.items()},
            "tau4_from_invariants": self.tau4_from_invariants,
            "scaling_s": {key([j]): ("undefined" if s is None else s)
                          for j, s in self.scaling_s.items()},
        }

    def table(self) -> str:
        lines = [f"{'qubit':>5} {'tau1':>10} {'sum tau2':>10} {'sum roof3':>10} {'tau4_j':>10}"]
        for j, b in self.per_qubit.items():
            lines.append(f"{j:>5} {self.one_tangles.get(j, float('nan')):>10.6g} "
                         f"{self.two_tangle_sums.get(j, float('nan')):>10.6g} "
                         f"{b.roof_sum:>10.6g} {b.tau4_candidate:>10.6g}")
        lines.append(f"consistent: {self.consistent} (tolerance {self.tolerance:g}; {DIRECTION_NOTE})")
        lines.append("invariants (degree-4 normalized):")
        lines.extend(f"  {k:>6} {v:.6g}" for k, v in self.tau4_from_invariants.items())
        return "\n".join(lines)


def invariant_four_tangles(state: PureState) -> dict[str, float]:
    """Every registered four-qubit invariant, normalized to degree 4."""
    return {name: evaluate(name, state).normalized(4) for name in invariants_for(4)}


def analyze(state: PureState, roof_seed: int = 0, roof_restarts: int = 64, beta: float = 1.0,
            tolerance: float = CONSISTENCY_TOL,
            roofs: dict[tuple[int, int, int], RoofResult] | None = None,
            smoothing: tuple[float, ...] = ()) -> MonogamyReport:
    if state.n_qubits != 4:
        raise BadArity(f"monogamy analysis needs four qubits, got {state.n_qubits}")
    if roofs is None:
        roofs = roof_three_tangles_all(state, seed=roof_seed, restarts=roof_restarts, beta=beta,
                                       smoothing=smoothing)
    roof_vals = {t: r.value for t, r in roofs.items()}
    qubits = range(1, 5)
    two = {p: two_tangle(state, *p) for p in itertools.combinations(qubits, 2)}
    one = {j: one_tangle(state, j) for j in qubits}
    per_qubit = {}
    two_sums = {}
    for j in qubits:
        two_sums[j] = sum(v for p, v in two.items() if j in p)
        residue = one[j] - two_sums[j]
        roof_sum = sum(v for t, v in roof_vals.items() if j in t)
        per_qubit[j] = QubitBalance(residue, roof_sum, residue - roof_sum)
    vals = [b.tau4_candidate for b in per_qubit.values()]
    consistent = max(abs(x - y) for x, y in itertools.combinations(vals, 2)) < tolerance
    inv = invariant_four_tangles(state)
    f1 = inv["F1"]
    scaling = {j: (b.tau4_candidate / f1 if f1 > 1e-12 else None) for j, b in per_qubit.items()}
    return MonogamyReport(per_qubit, consistent, inv, scaling, roof_vals, one, two_sums,
                          tolerance, beta)


def average_residue(state: PureState, roof_seed: int = 0, roof_restarts: int = 64,
                    report: MonogamyReport | None = None) -> float:
    """Qubit-averaged candidate four-tangle."""
    if report is None:
        report = analyze(state, roof_seed, roof_restarts)
    return float(np.mean(list(report.tau4.values())))


def average_ratio(state: PureState, roof_seed: int = 0, roof_restarts: int = 64,
                  report: MonogamyReport | None = None) -> float | None:
    """Averaged candidate divided by ``|F1|^(2/3)``; ``None`` where F1 vanishes."""
    if report is None:
        report = analyze(state, roof_seed, roof_restarts)
    f1 = report.tau4_from_invariants["F1"]
    if f1 <= 1e-12:
        return None
    return float(np.mean(list(report.tau4.values()))) / f1


@dataclass
class Identity:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    relative: bool = False

    @property
    def error(self) -> float:
        diff = abs(self.lhs - self.rhs)
        if self.relative:
            return diff / max(abs(self.lhs), abs(self.rhs), 1e-300)
        return diff

    @property
    def passed(self) -> bool:
        return self.error < self.tolerance


@dataclass
class TelescopeCheck:
    reference: PureState
    telescoped: PureState
    identities: list[Identity]
    report: MonogamyReport | None = None

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.identities)

    def failures(self) -> list[Identity]:
        return [i for i in self.identities if not i.passed]


def _complex_identity(name: str, lhs: complex, rhs: complex, rtol: float) -> list[Identity]:
    scale = max(abs(lhs), abs(rhs), 1e-300)
    # one relative check on the complex difference, reported through its modulus
    return [Identity(name, abs(lhs - rhs) / scale, 0.0, rtol)]


def telescope_check(reference: PureState, roof_seed: int = 0, roof_restarts: int = 64,
                    roof_tol: float = ROOF_TOL) -> TelescopeCheck:
    """Verify the telescope identities for the qubit-3 doubling of ``reference``."""
    if reference.n_qubits != 3:
        raise BadArity("telescope_check needs a three-qubit reference")
    T = make_telescope(reference, 3)
    report = analyze(T, roof_seed, roof_restarts)
    tau3_ref = three_tangle_pure(reference)
    ids = [
        Identity("tau2_23(M) = roof3_234(T)", two_tangle(reference, 2, 3), report.roofs[(2, 3, 4)], roof_tol),
        Identity("tau2_13(M) = roof3_134(T)", two_tangle(reference, 1, 3), report.roofs[(1, 3, 4)], roof_tol),
    ]
    ids += [Identity(f"tau4_{j}(T) = tau3(M)", report.tau4[j], tau3_ref, roof_tol) for j in range(1, 5)]
    c12, c13, c14, c24, c34 = (invariant_C4(T, p).raw for p in [(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)])
    h = invariant_H(T)
    alt = abs(6 * h**2 - 0.5 * c34)
    ids += [
        Identity("|C4_14| = |C4_24|", abs(c14), abs(c24), ALGEBRA_TOL),
        Identity("|C4_14| = |6H^2 - C4_34/2|", abs(c14), alt, ALGEBRA_TOL),
        Identity("|C4_24| = |6H^2 - C4_34/2|", abs(c24), alt, ALGEBRA_TOL),
    ]
    ids += _complex_identity("F2 = C13 (7 C13 + 2 C12) / 9", invariant_F2(T).raw,
                             c13 * (7 / 9 * c13 + 2 / 9 * c12), RELATION_RTOL)
    ids += _complex_identity("F3 = C13^2 C12 / 2", invariant_F3(T).raw,
                             0.5 * c13**2 * c12, RELATION_RTOL)
    return TelescopeCheck(reference, T, ids, report)
