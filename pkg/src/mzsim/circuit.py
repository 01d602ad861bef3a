"""Circuit intermediate representation.

A circuit is an ordered list of instructions over `num_qubits` qubits and
`num_clbits` classical bits.  Measurement is terminal: once a qubit has
been measured, no later gate may touch it (append raises).  Barriers are
scheduling markers and never change simulation output.

Counts histograms key on bitstrings of the *measured* qubits in qubit
order, q0 leftmost, regardless of which classical bit each measurement
writes to.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gates import GateDef, matrix_of
from .states import MAX_QUBITS, StateVector, apply_unitary, init_state


class CircuitError(ValueError):
    """Raised for structurally invalid circuit construction or use."""


@dataclass(frozen=True)
class Instruction:
    kind: str  # "gate" | "measure" | "barrier"
    qubits: tuple[int, ...]
    gate: GateDef | None = None
    clbit: int | None = None

    def __post_init__(self):
        if self.kind not in ("gate", "measure", "barrier"):
            raise CircuitError(f"unknown instruction kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind == "gate":
            if self.gate is None:
                raise CircuitError("gate instruction needs a GateDef")
            if len(self.qubits) != self.gate.arity:
                raise CircuitError(
                    f"{self.gate.name} acts on {self.gate.arity} qubit(s), "
                    f"got {len(self.qubits)}"
                )
        if self.kind == "measure":
            if len(self.qubits) != 1 or self.clbit is None:
                raise CircuitError("measure takes one qubit and one clbit")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated qubit in {self.qubits}")


class Circuit:
    """Builder-style circuit.  Append instructions, then simulate."""

    def __init__(self, num_qubits: int, num_clbits: int = 0, name: str = ""):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CircuitError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}"
            )
        if num_clbits < 0:
            raise CircuitError(f"num_clbits must be >= 0, got {num_clbits}")
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.name = name
        self.instructions: list[Instruction] = []
        self._measured: set[int] = set()

    # -- construction --------------------------------------------------------

    def append(self, instruction: Instruction) -> "Circuit":
        for q in instruction.qubits:
            if not 0 <= q < self.num_qubits:
                raise CircuitError(
                    f"qubit {q} out of range for {self.num_qubits}-qubit circuit"
                )
        if instruction.kind == "gate":
            touched = self._measured.intersection(instruction.qubits)
            if touched:
                raise CircuitError(
                    f"gate on already-measured qubit(s) {sorted(touched)}; "
                    "measurement is terminal"
                )
        elif instruction.kind == "measure":
            (q,) = instruction.qubits
            if q in self._measured:
                raise CircuitError(f"qubit {q} measured twice")
            if not 0 <= instruction.clbit < self.num_clbits:
                raise CircuitError(
                    f"clbit {instruction.clbit} out of range for "
                    f"{self.num_clbits} classical bits"
                )
            self._measured.add(q)
        self.instructions.append(instruction)
        return self

    def gate(self, g: GateDef, *qubits: int) -> "Circuit":
        return self.append(Instruction("gate", tuple(qubits), gate=g))

    def h(self, q: int) -> "Circuit":
        return self.gate(GateDef("H"), q)

    def x(self, q: int) -> "Circuit":
        return self.gate(GateDef("X"), q)

    def ry(self, theta: float, q: int) -> "Circuit":
        return self.gate(GateDef("RY", (theta,)), q)

    def cx(self, control: int, target: int) -> "Circuit":
        return self.gate(GateDef("CNOT"), control, target)

    def ccx(self, c1: int, c2: int, target: int) -> "Circuit":
        return self.gate(GateDef("CCX"), c1, c2, target)

    def swap(self, a: int, b: int) -> "Circuit":
        return self.gate(GateDef("SWAP"), a, b)

    def u1(self, lam: float, q: int) -> "Circuit":
        return self.gate(GateDef("U1", (lam,)), q)

    def u2(self, phi: float, lam: float, q: int) -> "Circuit":
        return self.gate(GateDef("U2", (phi, lam)), q)

    def u3(self, theta: float, phi: float, lam: float, q: int) -> "Circuit":
        return self.gate(GateDef("U3", (theta, phi, lam)), q)

    def barrier(self, *qubits: int) -> "Circuit":
        qs = qubits if qubits else tuple(range(self.num_qubits))
        return self.append(Instruction("barrier", qs))

    def measure(self, qubit: int, clbit: int) -> "Circuit":
        return self.append(Instruction("measure", (qubit,), clbit=clbit))

    def measure_all(self) -> "Circuit":
        for q in range(self.num_qubits):
            self.measure(q, q)
        return self

    # -- inspection -----------------------------------------------------------

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        """Measured qubits in qubit order (the histogram key order)."""
        return tuple(sorted(self._measured))

    def gate_instructions(self) -> list[Instruction]:
        return [i for i in self.instructions if i.kind == "gate"]

    def count_gates(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for inst in self.gate_instructions():
            counts[inst.gate.name] = counts.get(inst.gate.name, 0) + 1
        return counts

    def copy(self) -> "Circuit":
        out = Circuit(self.num_qubits, self.num_clbits, self.name)
        for inst in self.instructions:
            out.append(inst)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.num_qubits == other.num_qubits
            and self.num_clbits == other.num_clbits
            and self.instructions == other.instructions
        )

    def __repr__(self) -> str:
        return (
            f"Circuit(num_qubits={self.num_qubits}, num_clbits={self.num_clbits}, "
            f"instructions={len(self.instructions)})"
        )


@dataclass(frozen=True)
class CountsHistogram:
    """Measurement outcome tallies.  Keys are measured-qubit bitstrings."""

    shots: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")
        lengths = {len(k) for k in self.counts}
        if len(lengths) > 1:
            raise ValueError(f"inconsistent key lengths: {sorted(lengths)}")
        for key, c in self.counts.items():
            if c < 0 or set(key) - {"0", "1"}:
                raise ValueError(f"bad histogram entry {key!r}: {c}")

    def probabilities(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in sorted(self.counts.items())}


def simulate_ideal(circuit: Circuit) -> StateVector:
    """Exact statevector after all gates (measures and barriers skipped)."""
    amps = init_state(circuit.num_qubits).amplitudes
    for inst in circuit.instructions:
        if inst.kind == "gate":
            amps = apply_unitary(
                amps, matrix_of(inst.gate), inst.qubits, circuit.num_qubits
            )
    return StateVector(circuit.num_qubits, amps)


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Total unitary of a measurement-free circuit (<= 6 qubits)."""
    if circuit.num_qubits > 6:
        raise CircuitError(
            f"unitary extraction capped at 6 qubits, got {circuit.num_qubits}"
        )
    if any(inst.kind == "measure" for inst in circuit.instructions):
        raise CircuitError("cannot extract a unitary from a measured circuit")
    dim = 2**circuit.num_qubits
    # evolve all basis columns at once: treat the column index as a free axis
    u = np.eye(dim, dtype=complex)
    for inst in circuit.instructions:
        if inst.kind != "gate":
            continue
        m = matrix_of(inst.gate)
        k = len(inst.qubits)
        tensor = u.reshape([2] * circuit.num_qubits + [dim])
        tensor = np.moveaxis(tensor, inst.qubits, range(k))
        shape = tensor.shape
        tensor = m @ tensor.reshape(2**k, -1)
        u = np.moveaxis(tensor.reshape(shape), range(k), inst.qubits).reshape(dim, dim)
    return u
