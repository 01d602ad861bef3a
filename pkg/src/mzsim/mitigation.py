"""Measurement error mitigation via confusion-matrix unmixing.

The confusion matrix M is column-stochastic: M[i, j] is the probability of
*reading* bitstring i when bitstring j was prepared.  Mitigation solves

    minimize ||M x - p||_2   subject to   x >= 0,  sum(x) = 1

where p is the empirical distribution.  When the plain linear solve
M^{-1} p already satisfies the constraints it *is* the optimum (zero
residual), so the solver only falls back to an iterative method (SLSQP)
when the nonnegativity boundary is active.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .circuit import CountsHistogram
from .noise import DeviceModel
from .states import bitstring_of

#: above this condition number the unmixing is numerically meaningless
CONDITION_LIMIT = 1e8
#: convergence tolerance handed to the iterative solver
SOLVER_TOL = 1e-10


class IllConditionedMatrixError(ValueError):
    """Confusion matrix is too close to singular to invert responsibly."""


@dataclass(frozen=True)
class ConfusionMatrix:
    num_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        dim = 2**self.num_qubits
        if m.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {m.shape}")
        if np.any(m < -1e-12) or np.any(m > 1 + 1e-12):
            raise ValueError("confusion entries must lie in [0, 1]")
        col_sums = m.sum(axis=0)
        if np.max(np.abs(col_sums - 1.0)) > 1e-9:
            raise ValueError(f"columns must sum to 1, got {col_sums}")
        object.__setattr__(self, "matrix", m)

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def to_json(self) -> str:
        return json.dumps(
            {"num_qubits": self.num_qubits, "matrix": self.matrix.tolist()},
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ConfusionMatrix":
        doc = json.loads(text)
        return cls(num_qubits=int(doc["num_qubits"]), matrix=np.array(doc["matrix"]))


def exact_confusion_matrix(device: DeviceModel, num_qubits: int) -> ConfusionMatrix:
    """Tensor product of per-qubit flip matrices [[1-p01, p10], [p01, 1-p10]]."""
    m = np.array([[1.0]])
    for q in range(num_qubits):
        p01, p10 = device.readout[q]
        m = np.kron(m, np.array([[1 - p01, p10], [p01, 1 - p10]]))
    return ConfusionMatrix(num_qubits=num_qubits, matrix=m)


def build_confusion_matrix(
    device: DeviceModel, num_qubits: int, shots: int, seed: int
) -> ConfusionMatrix:
    """Estimate the confusion matrix by calibration sampling.

    Column j: prepare basis state j exactly (X on its 1-bits), read it out
    `shots` times under the device's readout flips, tally the results.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if num_qubits > device.num_qubits:
        raise ValueError(
            f"asked for {num_qubits} qubits on {device.num_qubits}-qubit device"
        )
    dim = 2**num_qubits
    p01 = np.array([device.readout[q][0] for q in range(num_qubits)])
    p10 = np.array([device.readout[q][1] for q in range(num_qubits)])
    m = np.zeros((dim, dim))
    rng = np.random.default_rng(seed)
    weights = 1 << np.arange(num_qubits - 1, -1, -1)  # q0 is the MSB
    for j in range(dim):
        prepared = np.array([int(b) for b in bitstring_of(j, num_qubits)])
        flip_prob = np.where(prepared == 1, p10, p01)
        flips = rng.random((shots, num_qubits)) < flip_prob
        read = np.bitwise_xor(prepared, flips.astype(int))
        indices = read @ weights
        m[:, j] = np.bincount(indices, minlength=dim) / shots
    return ConfusionMatrix(num_qubits=num_qubits, matrix=m)


def _as_probability_vector(data, num_qubits: int | None = None) -> tuple[np.ndarray, int]:
    """Accept a CountsHistogram, a bitstring->weight mapping, or a vector."""
    if isinstance(data, CountsHistogram):
        mapping = data.counts
    elif isinstance(data, dict):
        mapping = data
    else:
        vec = np.asarray(data, dtype=float).ravel()
        n = int(np.log2(len(vec)))
        if 2**n != len(vec):
            raise ValueError(f"vector length {len(vec)} is not a power of two")
        total = vec.sum()
        if total <= 0:
            raise ValueError("probability vector has no weight")
        return vec / total, n
    if not mapping:
        raise ValueError("empty distribution")
    n = len(next(iter(mapping)))
    if num_qubits is not None:
        n = num_qubits
    vec = np.zeros(2**n)
    for key, weight in mapping.items():
        if len(key) != n:
            raise ValueError(f"key {key!r} does not have {n} bits")
        vec[int(key, 2)] += float(weight)
    total = vec.sum()
    if total <= 0:
        raise ValueError("distribution has no weight")
    return vec / total, n


def mitigate(counts, confusion: ConfusionMatrix) -> dict[str, float]:
    """Recover the pre-readout distribution from measured counts.

    Accepts a CountsHistogram, a bitstring->weight mapping (weights may be
    exact probabilities), or a plain probability vector.  Returns a dict
    keyed by bitstring whose values are a valid distribution: nonnegative,
    summing to 1 within 1e-9.
    """
    cond = confusion.condition_number()
    if cond > CONDITION_LIMIT:
        raise IllConditionedMatrixError(
            f"confusion matrix condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}"
        )
    p, n = _as_probability_vector(counts, confusion.num_qubits)
    m = confusion.matrix

    x = np.linalg.solve(m, p)
    if np.min(x) < -1e-10:
        # boundary case: project onto the probability simplex properly
        x0 = np.clip(x, 0.0, None)
        x0 = x0 / x0.sum() if x0.sum() > 0 else np.full(len(p), 1.0 / len(p))

        def objective(v):
            r = m @ v - p
            return float(r @ r), 2.0 * (m.T @ r)

        result = optimize.minimize(
            objective,
            x0,
            jac=True,
            method="SLSQP",
            bounds=[(0.0, 1.0)] * len(p),
            constraints=[{"type": "eq", "fun": lambda v: v.sum() - 1.0,
                          "jac": lambda v: np.ones_like(v)}],
            options={"ftol": SOLVER_TOL, "maxiter": 1000},
        )
        x = result.x
    x = np.clip(x, 0.0, None)
    x = x / x.sum()
    return {bitstring_of(i, n): float(v) for i, v in enumerate(x)}


def total_variation_distance(p, q) -> float:
    """TV distance between two distributions (dicts, histograms, or vectors)."""
    pv, n1 = _as_probability_vector(p)
    qv, n2 = _as_probability_vector(q)
    if n1 != n2:
        raise ValueError(f"distributions live on {n1} vs {n2} qubits")
    return 0.5 * float(np.abs(pv - qv).sum())
