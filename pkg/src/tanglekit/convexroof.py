"""Numerical convex roofs of the three-tangle for low-rank three-qubit states.

Every pure-state decomposition of a rank-``r`` density matrix
``rho = sum_a lam_a |e_a><e_a|`` into ``m`` states has the form

    |phi_k~> = sum_a U[k, a] sqrt(lam_a) |e_a>,     U^dagger U = 1_r,

with weights ``p_k = <phi_k~|phi_k~>``.  The roof of ``f(tau3)`` with
``f(x) = x**beta`` is the minimum over such ``U`` of
``sum_k p_k f(tau3(phi_k))``.  Because ``tau3`` is a modulus of a quadratic
form in two copies, both ``tau3(phi_k~)`` and ``p_k`` reduce to small
``r x r`` quadratic forms in the rows of ``U``, so the objective never
touches the 8-dimensional vectors during the search.

The search is a derivative-free descent on the isometry manifold: each step
proposes a handful of small random unitary rotations ``U -> V U`` and keeps
the best improving one; the rotation scale grows on success and shrinks on
failure.  A restart stops when its objective improves by less than a relative
``1e-10`` over 50 iterations or drops below ``1e-12``.  Restart 0 always
starts from the spectral decomposition, the others from Haar-random
isometries; restart ``i`` draws only from its own child seed, so the result
does not depend on how many other restarts run alongside it.

Where a decomposition element has vanishing three-tangle the objective has a
cone-shaped kink, and random rotations rarely find the narrow descent
directions along it.  An optional ``smoothing`` schedule reruns the descent on
``sqrt(tau3**2 + eps**2) - eps`` for each listed ``eps`` and finishes with the
exact objective, keeping per restart the best exact value seen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import BadDimension, BadParam, NoConvergence, NotOrthonormal, RankOverflow
from .pauli import METRIC, invariant_tau3_pure, word_matrix
from .qstate import SPECTRAL_TOL, DensityMatrix, PureState, partial_trace

MAX_RANK = 4
MAX_DECOMPOSITION = 8
STALL_WINDOW = 50
STALL_RTOL = 1e-10
ZERO_FLOOR = 1e-12
MAX_ITER = 5000

_TAU3_MU = [(METRIC[mu], word_matrix((mu, 2, 2))) for mu in range(4) if METRIC[mu]]


def tau3_amplitudes(phi: np.ndarray) -> np.ndarray:
    """Three-tangle of (possibly unnormalized) amplitude rows ``phi[..., 8]``.

    Homogeneous of degree 4 in the amplitudes, so for normalized rows this is
    the pure-state three-tangle.
    """
    total = 0
    for g, m in _TAU3_MU:
        b = np.einsum("...i,ij,...j->...", phi, m, phi)
        total = total + g * b * b
    return np.abs(total)


@dataclass(frozen=True)
class RoofProblem:
    rho: DensityMatrix
    rank: int
    transform_exponent: float = 1.0
    decomposition_size: int = 4

    def __post_init__(self):
        if self.rho.n_qubits != 3:
            raise BadDimension("the three-tangle roof needs a three-qubit state")
        if not 0 < self.transform_exponent <= 4:
            raise BadParam(f"transform exponent {self.transform_exponent} outside (0, 4]")
        if self.rank > MAX_RANK:
            raise RankOverflow(f"rank {self.rank} exceeds the supported maximum {MAX_RANK}")
        if not self.rank <= self.decomposition_size <= MAX_DECOMPOSITION:
            raise BadParam(f"decomposition size {self.decomposition_size} must lie in "
                           f"[rank={self.rank}, {MAX_DECOMPOSITION}]")

    @classmethod
    def from_density(cls, rho: DensityMatrix, beta: float = 1.0,
                     size: int | None = None) -> "RoofProblem":
        rank = rho.rank(SPECTRAL_TOL)
        if rank > MAX_RANK:
            raise RankOverflow(f"rank {rank} exceeds the supported maximum {MAX_RANK}")
        if size is None:
            size = 1 if rank == 1 else min(max(4, 2 * rank), MAX_DECOMPOSITION)
        return cls(rho, rank, beta, size)


@dataclass
class RoofResult:
    """Outcome of one roof minimization.

    ``value`` is ``f^-1`` of the best transformed roof (an upper-bound
    estimate); ``objective`` is the transformed roof itself, identical to
    ``value`` when ``beta == 1``.
    """

    value: float
    objective: float
    decomposition: list[tuple[float, PureState]]
    restarts_used: int
    best_objective_history: list[float]
    restart_objectives: list[float] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    iterations: int = 0
    transform_exponent: float = 1.0

    def reconstruction_residual(self, rho: DensityMatrix) -> float:
        mix = sum(p * np.outer(s.amplitudes, s.amplitudes.conj()) for p, s in self.decomposition)
        return float(np.linalg.norm(mix - rho.entries))

    def decomposition_average(self) -> float:
        """``sum_k p_k tau3(phi_k)`` of the returned decomposition."""
        return float(sum(p * invariant_tau3_pure(s) for p, s in self.decomposition))

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "objective": self.objective,
            "transform_exponent": self.transform_exponent,
            "restarts_used": self.restarts_used,
            "iterations": self.iterations,
            "converged_restarts": int(sum(self.converged)),
            "best_objective_history": self.best_objective_history,
            "decomposition": [
                {"weight": p, "state": s.to_json()} for p, s in self.decomposition
            ],
        }


class _Objective:
    """Batched ``sum_k p_k (tau3_k / p_k**2)**beta`` over isometry rows."""

    def __init__(self, rho: DensityMatrix, rank: int, beta: float):
        self.eps = 0.0
        w, v = rho.eigh()
        order = np.argsort(w)[::-1][:rank]
        self.lam = w[order]
        self.W = v[:, order] * np.sqrt(self.lam)
        self.forms = [(g, self.W.T @ m @ self.W) for g, m in _TAU3_MU]
        self.beta = beta

    def tangles_and_weights(self, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        total = 0
        for g, a in self.forms:
            b = np.einsum("...ka,ab,...kb->...k", U, a, U)
            total = total + g * b * b
        p = (U.real**2 + U.imag**2) @ self.lam
        return np.abs(total), p

    def __call__(self, U: np.ndarray) -> np.ndarray:
        t, p = self.tangles_and_weights(U)
        if self.eps:
            t = np.sqrt(t * t + self.eps**2) - self.eps
        safe = np.where(p > 1e-300, p, 1.0)
        if self.beta == 1:
            terms = t / safe
        else:
            terms = safe * (t / safe**2) ** self.beta
        return np.where(p > 1e-300, terms, 0.0).sum(axis=-1)

    def decomposition(self, U: np.ndarray) -> list[tuple[float, PureState]]:
        out = []
        for row in U:
            vec = self.W @ row
            p = float(np.vdot(vec, vec).real)
            if p > 1e-14:
                out.append((p, PureState(3, vec / math.sqrt(p))))
        total = sum(p for p, _ in out)
        return [(p / total, s) for p, s in out]


def _descend(obj: _Objective, U: np.ndarray, gens, proposals: int, max_iter: int,
             history: list[float]) -> tuple[np.ndarray, np.ndarray, int]:
    """Random-rotation descent of every restart in ``U`` (modified in place)."""
    restarts, m, _ = U.shape
    f = obj(U)
    step = np.full(restarts, 0.3)
    ring = np.empty((STALL_WINDOW, restarts))
    active = np.ones(restarts, dtype=bool)
    converged = np.zeros(restarts, dtype=bool)
    eye = np.eye(m)
    block = 32
    it = 0
    while active.any() and it < max_iter:
        if it % block == 0:
            # every restart draws a full block from its own stream, active or not
            z = np.stack([g.normal(size=(block, proposals, m, m, 2)) for g in gens], axis=1)
            moves = z[..., 0] + 1j * z[..., 1]
        ring[it % STALL_WINDOW] = f
        Z = moves[it % block]
        it += 1
        idx = np.flatnonzero(active)
        V = np.linalg.qr(eye + step[idx, None, None, None] * Z[idx])[0]
        cand = V @ U[idx, None]
        fc = obj(cand)
        best = fc.argmin(axis=1)
        fb = fc[np.arange(idx.size), best]
        better = fb < f[idx]
        U[idx[better]] = cand[better, best[better]]
        f[idx[better]] = fb[better]
        step[idx] = np.where(better, np.minimum(step[idx] * 1.5, 1.0), step[idx] * 0.8)
        history.append(float(f.min()))
        if it >= STALL_WINDOW:
            old = ring[it % STALL_WINDOW]
            done = ((old - f) <= STALL_RTOL * np.abs(old)) | (f < ZERO_FLOOR)
            converged |= done & active
            active &= ~done
    return f, converged, it


def roof_tau3(problem: RoofProblem, seed: int | np.random.SeedSequence = 0,
              restarts: int = 64, proposals: int = 6, max_iter: int = MAX_ITER,
              smoothing: tuple[float, ...] = ()) -> RoofResult:
    """Minimize the average transformed three-tangle over decompositions."""
    if restarts < 1:
        raise BadParam("need at least one restart")
    if any(not eps > 0 for eps in smoothing):
        raise BadParam("smoothing parameters must be positive")
    beta = problem.transform_exponent
    obj = _Objective(problem.rho, problem.rank, beta)
    r, m = problem.rank, problem.decomposition_size

    if r == 1:
        U = np.ones((1, 1), dtype=np.complex128)
        f = float(obj(U))
        return RoofResult(f ** (1 / beta), f, obj.decomposition(U), 1, [f], [f], [True], 0, beta)

    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(restarts)
    gens = [np.random.default_rng(child) for child in children]
    U = np.empty((restarts, m, r), dtype=np.complex128)
    for i, g in enumerate(gens):
        z = g.normal(size=(m, r)) + 1j * g.normal(size=(m, r))
        U[i] = np.linalg.qr(z)[0]
    U[0] = np.eye(m, r)

    history = [float(obj(U).min())]
    f, converged, it = _descend(obj, U, gens, proposals, max_iter, history)
    best_f, best_U = f.copy(), U.copy()
    if smoothing:
        # fresh per-restart streams for each later stage keep restarts independent
        stage_seqs = [child.spawn(len(smoothing) + 1) for child in children]
        for s, eps in enumerate((*smoothing, 0.0)):
            obj.eps = eps
            stage_gens = [np.random.default_rng(seqs[s]) for seqs in stage_seqs]
            _, converged, n = _descend(obj, U, stage_gens, proposals, max_iter, history)
            it += n
            obj.eps = 0.0
            exact = obj(U)
            improved = exact < best_f
            best_f[improved] = exact[improved]
            best_U[improved] = U[improved]
            history[-1] = float(best_f.min())
    if not converged.any():
        raise NoConvergence(f"no restart met the stall criterion within {max_iter} iterations")
    k = int(np.argmin(best_f))
    value = float(max(best_f[k], 0.0))
    return RoofResult(
        value=value ** (1 / beta),
        objective=value,
        decomposition=obj.decomposition(best_U[k]),
        restarts_used=restarts,
        best_objective_history=history,
        restart_objectives=[float(x) for x in best_f],
        converged=[bool(c) for c in converged],
        iterations=it,
        transform_exponent=beta,
    )


def roof_of(rho: DensityMatrix, seed=0, restarts: int = 64, beta: float = 1.0,
            size: int | None = None, smoothing: tuple[float, ...] = ()) -> RoofResult:
    return roof_tau3(RoofProblem.from_density(rho, beta, size), seed=seed, restarts=restarts,
                     smoothing=smoothing)


TRIPLES = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))


def roof_three_tangles_all(state: PureState, seed: int = 0, restarts: int = 64, beta: float = 1.0,
                           smoothing: tuple[float, ...] = ()) -> dict[tuple[int, int, int], RoofResult]:
    """Roof three-tangles of all four three-qubit reductions of a 4-qubit state."""
    if state.n_qubits != 4:
        raise BadDimension("roof_three_tangles_all needs a four-qubit state")
    out = {}
    for k, triple in enumerate(TRIPLES):
        child = np.random.SeedSequence(seed, spawn_key=(k,))
        out[triple] = roof_of(partial_trace(state, triple), seed=child, restarts=restarts, beta=beta,
                              smoothing=smoothing)
    return out


def characteristic_curve(pair: tuple[PureState, PureState], grid: int = 101,
                         phase_samples: int = 360) -> list[tuple[float, float]]:
    """Phase-minimized three-tangle along ``sqrt(p) psi1 + e^{i phi} sqrt(1-p) psi2``.

    Dense phase sampling locates the minimum, which a bounded scalar search
    then refines.
    """
    psi1, psi2 = pair
    if psi1.n_qubits != 3 or psi2.n_qubits != 3:
        raise BadDimension("characteristic curves are defined for three-qubit states")
    a, b = psi1.amplitudes, psi2.amplitudes
    gram = np.array([[np.vdot(a, a), np.vdot(a, b)], [np.vdot(b, a), np.vdot(b, b)]])
    if np.abs(gram - np.eye(2)).max() > 1e-10:
        raise NotOrthonormal("the two states must be orthonormal")
    if grid < 2:
        raise BadParam("grid needs at least two points")
    phases = np.linspace(0, 2 * np.pi, phase_samples, endpoint=False)
    dphi = phases[1]
    curve = []
    for p in np.linspace(0, 1, grid):
        x, y = math.sqrt(p), math.sqrt(1 - p)

        def tau(phi):
            phase = np.exp(1j * np.atleast_1d(phi))[:, None]
            return tau3_amplitudes(x * a + phase * y * b)

        vals = tau(phases)
        k = int(np.argmin(vals))
        best = float(vals[k])
        res = minimize_scalar(lambda t: float(tau(t)[0]), bounds=(phases[k] - dphi, phases[k] + dphi),
                              method="bounded", options={"xatol": 1e-12})
        curve.append((float(p), min(best, float(res.fun))))
    return curve


def roof_transform_comparison(rho: DensityMatrix, betas=(0.5, 1.0, 2.0), seed: int = 0,
                              restarts: int = 64) -> list[dict]:
    """Compare ``f^-1(roof f(tau3))`` against the plain roof for power transforms.

    Records, per exponent, which side of the inequality the numbers fall on;
    no direction is assumed.
    """
    plain = roof_of(rho, seed=seed, restarts=restarts).value
    rows = []
    for beta in betas:
        transformed = roof_of(rho, seed=seed, restarts=restarts, beta=beta).value
        diff = transformed - plain
        relation = "=" if abs(diff) < 1e-6 else ("<" if diff < 0 else ">")
        rows.append({"beta": beta, "transformed": transformed, "plain": plain,
                     "relation": relation})
    return rows
