"""Dense statevector simulation.

A state on n qubits is a complex vector of 2**n amplitudes.  Qubit 0 is
the MOST significant bit of the amplitude index, so the bitstring "q0 q1
... q(n-1)" reads left to right exactly like the index written in binary.
Example: for two qubits, amplitude[2] belongs to |10>, i.e. q0=1, q1=0.

All tolerances used for algebraic identities live here so they are pinned
in one place rather than scattered per call site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 24  # 2**24 complex128 amplitudes = 256 MiB; hard cap

# Tolerance for algebraic identities: normalization, unitarity,
# phase-aligned matrix equality.
ALGEBRAIC_TOL = 1e-12
# Tolerance for end-to-end circuit-vs-closed-form comparisons, where a
# few dozen floating-point matrix products may accumulate error.
CIRCUIT_TOL = 1e-9


def bitstring_of(index: int, num_qubits: int) -> str:
    """Binary label of a basis state, q0 leftmost."""
    return format(index, f"0{num_qubits}b")


def index_of(bits: str) -> int:
    return int(bits, 2)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude vector over computational basis states."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    def probabilities(self) -> np.ndarray:
        """|amplitude|^2 for every basis index; sums to 1 within 1e-12."""
        return np.abs(self.amplitudes) ** 2

    def probability_dict(self, cutoff: float = 0.0) -> dict[str, float]:
        """Map bitstring -> probability, dropping entries <= cutoff."""
        probs = self.probabilities()
        return {
            bitstring_of(i, self.num_qubits): float(p)
            for i, p in enumerate(probs)
            if p > cutoff
        }

    def amplitude(self, bits: str) -> complex:
        if len(bits) != self.num_qubits:
            raise ValueError(f"expected {self.num_qubits} bits, got {bits!r}")
        return complex(self.amplitudes[index_of(bits)])


def init_state(num_qubits: int) -> StateVector:
    """|00...0> on num_qubits qubits."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def apply_unitary(
    amplitudes: np.ndarray, matrix: np.ndarray, targets: tuple[int, ...], num_qubits: int
) -> np.ndarray:
    """Linear kernel: apply a 2**k x 2**k matrix to the target qubits.

    targets are ordered: targets[0] is the most significant bit of the
    matrix's own index space.  No normalization check happens here, so the
    map is linear in the input (used directly by the property tests).
    """
    k = len(targets)
    if matrix.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {matrix.shape} does not act on {k} qubit(s)")
    if len(set(targets)) != k:
        raise ValueError(f"duplicate target qubits: {targets}")
    for q in targets:
        if not 0 <= q < num_qubits:
            raise ValueError(f"target qubit {q} out of range for {num_qubits} qubits")

    # axis j of the reshaped tensor is qubit j (q0 = axis 0 = MSB)
    tensor = np.asarray(amplitudes, dtype=complex).reshape([2] * num_qubits)
    tensor = np.moveaxis(tensor, targets, range(k))
    shape = tensor.shape
    tensor = matrix @ tensor.reshape(2**k, -1)
    tensor = np.moveaxis(tensor.reshape(shape), range(k), targets)
    return tensor.reshape(2**num_qubits)


def apply_gate(state: StateVector, matrix: np.ndarray, targets: tuple[int, ...]) -> StateVector:
    """Apply a unitary to `targets` of `state`, preserving normalization."""
    amps = apply_unitary(state.amplitudes, matrix, tuple(targets), state.num_qubits)
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > ALGEBRAIC_TOL * 10:
        raise ValueError(f"gate application broke normalization: {norm!r}")
    return StateVector(state.num_qubits, amps)


def probabilities(state: StateVector) -> np.ndarray:
    return state.probabilities()


def is_unitary(matrix: np.ndarray, tol: float = ALGEBRAIC_TOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = ALGEBRAIC_TOL) -> bool:
    """True if a == c*b entrywise for some |c| = 1, within tol.

    Works for matrices and vectors alike.  The aligning phase is the
    least-squares optimum c = <b, a>/|<b, a>|.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    overlap = np.vdot(b, a)
    if abs(overlap) < 1e-300:
        # no meaningful phase; only the zero pair is phase-equal
        return bool(np.max(np.abs(a - b)) <= tol)
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(a - phase * b)) <= tol)
