import numpy as np
import pytest

from tanglekit.convexroof import (
    RoofProblem, characteristic_curve, roof_of, roof_tau3, roof_three_tangles_all,
    roof_transform_comparison, tau3_amplitudes,
)
from tanglekit.errors import BadDimension, BadParam, NoConvergence, NotOrthonormal, RankOverflow
from tanglekit.families import make_chi1, make_ghz, make_w
from tanglekit.pauli import invariant_tau3_pure
from tanglekit.qstate import DensityMatrix, from_kets, partial_trace, random_pure_state

GHZ, W = make_ghz(3), make_w(3)
P0 = 4 * 2 ** (1 / 3) / (3 + 4 * 2 ** (1 / 3))


def mixture(p, a=GHZ, b=W) -> DensityMatrix:
    return DensityMatrix(3, p * a.projector().entries + (1 - p) * b.projector().entries)


def lower_hull_at(points, x):
    """Value of the lower convex envelope of ``points`` at ``x``."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    xs, ys = zip(*hull)
    return float(np.interp(x, xs, ys))


def test_tau3_amplitudes_batched():
    rows = np.stack([GHZ.amplitudes, W.amplitudes, 2 * GHZ.amplitudes])
    assert np.allclose(tau3_amplitudes(rows), [1, 0, 16])


def test_rank_one_is_pure_tau3():
    s = random_pure_state(3, 4)
    res = roof_of(s.projector())
    assert abs(res.value - invariant_tau3_pure(s)) < 1e-12
    assert res.restarts_used == 1


@pytest.mark.parametrize("p", [0.2, 0.5, 0.6])
def test_ghz_w_mixture_vanishes_below_p0(p):
    assert roof_of(mixture(p), restarts=16).value < 1e-6


@pytest.mark.parametrize("p", [0.7, 0.8, 0.9])
def test_ghz_w_mixture_matches_hull_of_characteristic_curve(p):
    curve = characteristic_curve((GHZ, W), grid=401)
    assert abs(roof_of(mixture(p), restarts=16).value - lower_hull_at(curve, p)) < 1e-5


def test_characteristic_curve_chi1_family():
    other = from_kets([("101", 1), ("110", 1)])
    curve = characteristic_curve((GHZ, other), grid=21)
    assert max(abs(v - p * p) for p, v in curve) < 1e-9
    assert roof_of(mixture(0.5, GHZ, other), restarts=16).value == pytest.approx(0.25, abs=1e-7)


def test_characteristic_curve_needs_orthonormal_pair():
    with pytest.raises(NotOrthonormal):
        characteristic_curve((GHZ, from_kets([("000", 1), ("001", 1)])))
    with pytest.raises(BadDimension):
        characteristic_curve((make_ghz(4), make_w(4)))


@pytest.mark.parametrize("seed", range(3))
def test_roof_bounded_by_spectral_decomposition(seed):
    rho = partial_trace(random_pure_state(4, seed), [1, 2, 3])
    w, v = rho.eigh()
    spectral = sum(lam * tau3_amplitudes(v[:, k] * np.sqrt(lam)) / lam ** 2
                   for k, lam in enumerate(w) if lam > 1e-12)
    res = roof_of(rho, restarts=8)
    assert res.value <= spectral + 1e-12
    assert res.reconstruction_residual(rho) < 1e-10
    assert abs(res.decomposition_average() - res.value) < 1e-10
    assert abs(sum(p for p, _ in res.decomposition) - 1) < 1e-12


def test_more_restarts_never_worse():
    rho = partial_trace(random_pure_state(4, 7), [2, 3, 4])
    few = roof_of(rho, seed=3, restarts=3)
    many = roof_of(rho, seed=3, restarts=9)
    assert many.value <= few.value
    assert many.restart_objectives[:3] == few.restart_objectives


def test_deterministic_for_seed():
    rho = partial_trace(random_pure_state(4, 2), [1, 2, 4])
    a, b = roof_of(rho, seed=5, restarts=4), roof_of(rho, seed=5, restarts=4)
    assert a.value == b.value and a.best_objective_history == b.best_objective_history


def test_history_is_monotone():
    res = roof_of(mixture(0.8), restarts=4)
    h = res.best_objective_history
    assert all(y <= x for x, y in zip(h, h[1:]))


def test_chi1_reductions():
    roofs = roof_three_tangles_all(make_chi1(), restarts=8)
    assert [round(roofs[t].value, 8) for t in sorted(roofs)] == [0.25, 0.25, 0.25, 0.0]


def test_transform_comparison_records_relation():
    rows = roof_transform_comparison(mixture(0.8), betas=(0.5, 1.0, 2.0), restarts=8)
    assert [r["relation"] for r in rows][1] == "="
    assert all(r["relation"] in "=<>" for r in rows)


def test_rank_one_any_exponent():
    s = random_pure_state(3, 1)
    assert abs(roof_of(s.projector(), beta=2.0).value - invariant_tau3_pure(s)) < 1e-12


def test_problem_validation():
    with pytest.raises(RankOverflow):
        RoofProblem.from_density(DensityMatrix(3, np.eye(8) / 8))
    with pytest.raises(BadDimension):
        RoofProblem.from_density(DensityMatrix(2, np.eye(4) / 4))
    rho = mixture(0.5)
    with pytest.raises(BadParam):
        RoofProblem(rho, 2, transform_exponent=0.0)
    with pytest.raises(BadParam):
        RoofProblem(rho, 2, decomposition_size=1)
    with pytest.raises(BadParam):
        roof_tau3(RoofProblem.from_density(rho), restarts=0)


def test_no_convergence():
    with pytest.raises(NoConvergence):
        roof_tau3(RoofProblem.from_density(mixture(0.8)), restarts=2, max_iter=5)


def test_result_json():
    data = roof_of(mixture(0.9), restarts=2).to_json()
    assert data["restarts_used"] == 2 and len(data["decomposition"]) == 4


def test_smoothing_escapes_kinks():
    # generic reduction whose roof nearly vanishes; plain descent stalls on a kink
    rho = partial_trace(random_pure_state(4, 2), (2, 3, 4))
    plain = roof_of(rho, restarts=16)
    smooth = roof_of(rho, restarts=16, smoothing=(1e-3, 1e-5))
    assert smooth.value < 1e-5 < plain.value
    assert smooth.reconstruction_residual(rho) < 1e-10


def test_smoothing_keeps_structured_values():
    r = roof_of(mixture(0.5), restarts=4, smoothing=(1e-3,))
    assert abs(r.value - roof_of(mixture(0.5), restarts=4).value) < 1e-8


def test_smoothing_validation():
    with pytest.raises(BadParam):
        roof_of(mixture(0.5), restarts=2, smoothing=(0.0,))
