"""One-parameter sweeps over a state family, written as CSV."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .convexroof import roof_of
from .errors import BadParam
from .families import FamilySpec
from .monogamy import analyze, invariant_four_tangles
from .qstate import PureState, partial_trace
from .tangles import tangle_report

ZERO_TOL = 1e-10
# columns that need the full monogamy analysis (all four roofs)
_MONOGAMY_PREFIXES = ("tau4_", "roofsum_", "consistent", "tau4_spread")


@dataclass(frozen=True)
class SweepSpec:
    family: FamilySpec
    param: str
    start: float
    stop: float
    steps: int
    outputs: tuple[str, ...]

    def __post_init__(self):
        if self.steps < 2:
            raise BadParam("a sweep needs at least two steps")
        if not self.start < self.stop:
            raise BadParam(f"sweep range must satisfy start < stop, got {self.start}..{self.stop}")
        if not self.outputs:
            raise BadParam("a sweep needs at least one output column")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class Bracket:
    column: str
    lo: float
    hi: float
    before: str
    after: str


def _sign_class(v: float, zero_tol: float) -> str:
    if abs(v) <= zero_tol:
        return "zero"
    return "pos" if v > 0 else "neg"


def evaluate_columns(state: PureState, columns, seed: int = 0, restarts: int = 64,
                     beta: float = 1.0, smoothing: tuple[float, ...] = ()) -> dict[str, float]:
    """Compute only what the requested columns need."""
    columns = list(columns)
    values: dict[str, float] = {}
    if any(c.startswith(_MONOGAMY_PREFIXES) for c in columns):
        values.update(analyze(state, seed, restarts, beta, smoothing=smoothing).scalars())
    values.update(tangle_report(state, roofs=False).scalars())
    for c in columns:
        if c in values:
            continue
        if c.startswith("roof3_"):
            triple = [int(ch) for ch in c[len("roof3_"):]]
            if len(triple) != 3 or any(not 1 <= q <= state.n_qubits for q in triple):
                raise BadParam(f"bad roof column {c!r}")
            rho = partial_trace(state, triple)
            values[c] = roof_of(rho, seed=seed, restarts=restarts, beta=beta,
                                smoothing=smoothing).value
        elif c.startswith("inv_") and state.n_qubits == 4:
            values.update({f"inv_{k}": v for k, v in invariant_four_tangles(state).items()})
    missing = [c for c in columns if c not in values]
    if missing:
        raise BadParam(f"unknown sweep column(s): {', '.join(missing)}")
    return {c: values[c] for c in columns}


def run_sweep(spec: SweepSpec, seed: int = 0, restarts: int = 64, beta: float = 1.0,
              smoothing: tuple[float, ...] = ()) -> list[tuple[float, dict[str, float]]]:
    rows = []
    for x in spec.grid:
        state = spec.family.with_param(spec.param, repr(float(x))).build()
        rows.append((float(x), evaluate_columns(state, spec.outputs, seed, restarts, beta, smoothing)))
    return rows


def find_brackets(rows, columns, zero_tol: float = ZERO_TOL) -> list[Bracket]:
    """Grid intervals where a column changes between negative, zero and positive."""
    out = []
    for c in columns:
        for (x0, r0), (x1, r1) in zip(rows, rows[1:]):
            s0, s1 = _sign_class(r0[c], zero_tol), _sign_class(r1[c], zero_tol)
            if s0 != s1:
                out.append(Bracket(c, x0, x1, s0, s1))
    return out


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", *columns])
    for x, r in rows:
        w.writerow([f"{x:.12g}", *(f"{r[c]:.12g}" for c in columns)])
    return buf.getvalue()
