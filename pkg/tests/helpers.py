import numpy as np
from hypothesis import strategies as st

from tanglekit.qstate import normalize


def states(n_qubits: int):
    """Hypothesis strategy for normalized n-qubit states via a seed."""
    def build(seed):
        rng = np.random.default_rng(seed)
        return normalize(rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits))

    return st.integers(0, 2**32 - 1).map(build)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)
