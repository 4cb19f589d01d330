"""Entanglement bookkeeping for few-qubit pure states.

One-, two- and three-tangles, antilinear Pauli "comb" invariants, convex-roof
three-tangles of rank-limited three-qubit mixtures and four-qubit monogamy
diagnostics.
"""
from .convexroof import RoofProblem, RoofResult, characteristic_curve, roof_of, roof_tau3, roof_three_tangles_all
from .errors import TangleError
from .families import FamilySpec, make_chi1, make_chi2, make_cluster, make_ghz, make_product, make_psi_p, make_psi_tel, make_state, make_telescope, make_w, parse_family
from .monogamy import MonogamyReport, TelescopeCheck, analyze, average_residue, telescope_check
from .pauli import CombSpec, InvariantValue, eval_comb, evaluate, invariant_C4, invariant_F1, invariant_F2, invariant_F3, invariant_H, invariant_tau3_pure
from .qstate import DensityMatrix, PureState, from_kets, normalize, partial_trace, random_pure_state
from .tangles import TangleReport, concurrence, one_tangle, tangle_report, three_tangle_pure, two_tangle

__version__ = "0.1.0"

__all__ = [
    "analyze",
    "average_residue",
    "characteristic_curve",
    "CombSpec",
    "concurrence",
    "DensityMatrix",
    "eval_comb",
    "evaluate",
    "FamilySpec",
    "from_kets",
    "invariant_C4",
    "invariant_F1",
    "invariant_F2",
    "invariant_F3",
    "invariant_H",
    "invariant_tau3_pure",
    "InvariantValue",
    "make_chi1",
    "make_chi2",
    "make_cluster",
    "make_ghz",
    "make_product",
    "make_psi_p",
    "make_psi_tel",
    "make_state",
    "make_telescope",
    "make_w",
    "MonogamyReport",
    "normalize",
    "one_tangle",
    "parse_family",
    "partial_trace",
    "PureState",
    "random_pure_state",
    "roof_of",
    "roof_tau3",
    "roof_three_tangles_all",
    "RoofProblem",
    "RoofResult",
    "tangle_report",
    "TangleError",
    "TangleReport",
    "telescope_check",
    "TelescopeCheck",
    "three_tangle_pure",
    "two_tangle",
]
