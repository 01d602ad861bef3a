"""Basis-gate decomposition, qubit routing, and fidelity estimation.

The hardware basis is {U1, U2, U3, CNOT}.  Rewrites used:

    H          -> U2(0, pi)
    X          -> U3(pi, 0, pi)
    RY(t)      -> U3(t, 0, 0)
    SWAP(a, b) -> CX(a,b) CX(b,a) CX(a,b)
    CCX        -> the standard 6-CNOT network over H, T=U1(pi/4), Tdg

All rewrites are exact up to global phase, so decomposition preserves the
circuit unitary to machine precision.

Routing is greedy shortest-path SWAP insertion with no lookahead: when a
CNOT's endpoints are not adjacent on the coupling graph, SWAPs (each
emitted as 3 CNOTs) walk one endpoint along a BFS shortest path until the
pair touches.  The initial layout defaults to the identity with the
busiest logical qubit (highest 2-qubit-gate degree) placed on the
best-connected physical qubit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, CircuitError
from .gates import BASIS_GATES, GateDef, matrix_of
from .noise import DeviceModel


@dataclass(frozen=True)
class CouplingGraph:
    """Undirected connectivity between physical qubits."""

    num_qubits: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        edges = frozenset(tuple(sorted(map(int, e))) for e in self.edges)
        for a, b in edges:
            if a == b or not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"bad edge {(a, b)}")
        object.__setattr__(self, "edges", edges)
        if self.num_qubits > 1:
            seen = {0}
            frontier = deque([0])
            while frontier:
                u = frontier.popleft()
                for v in self.neighbors(u):
                    if v not in seen:
                        seen.add(v)
                        frontier.append(v)
            if len(seen) != self.num_qubits:
                raise ValueError("coupling graph must be connected")

    @classmethod
    def from_device(cls, device: DeviceModel) -> "CouplingGraph":
        return cls(device.num_qubits, frozenset(device.coupling))

    def neighbors(self, q: int) -> list[int]:
        out = [b if a == q else a for a, b in self.edges if q in (a, b)]
        return sorted(out)

    def has_edge(self, a: int, b: int) -> bool:
        return tuple(sorted((a, b))) in self.edges

    def degree(self, q: int) -> int:
        return len(self.neighbors(q))

    def shortest_path(self, start: int, goal: int) -> list[int]:
        """BFS path [start, ..., goal]; ties broken toward lower qubit index."""
        if start == goal:
            return [start]
        prev: dict[int, int] = {start: start}
        frontier = deque([start])
        while frontier:
            u = frontier.popleft()
            for v in self.neighbors(u):
                if v not in prev:
                    prev[v] = u
                    if v == goal:
                        path = [goal]
                        while path[-1] != start:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    frontier.append(v)
        raise ValueError(f"no path between {start} and {goal}")


@dataclass(frozen=True)
class TranspiledCircuit:
    """Routing result: basis circuit on physical qubits plus bookkeeping.

    initial_layout[l] / final_layout[l] give the physical wire holding
    logical qubit l at the start / end of the circuit.
    """

    circuit: Circuit
    initial_layout: tuple[int, ...]
    final_layout: tuple[int, ...]
    swap_count: int


_T = GateDef("U1", (np.pi / 4,))
_TDG = GateDef("U1", (-np.pi / 4,))
_H_BASIS = GateDef("U2", (0.0, np.pi))


def _ccx_network(a: int, b: int, t: int) -> list[tuple[GateDef, tuple[int, ...]]]:
    cx = GateDef("CNOT")
    return [
        (_H_BASIS, (t,)),
        (cx, (b, t)),
        (_TDG, (t,)),
        (cx, (a, t)),
        (_T, (t,)),
        (cx, (b, t)),
        (_TDG, (t,)),
        (cx, (a, t)),
        (_T, (b,)),
        (_T, (t,)),
        (cx, (a, b)),
        (_H_BASIS, (t,)),
        (_T, (a,)),
        (_TDG, (b,)),
        (cx, (a, b)),
    ]


def decompose_to_basis(circuit: Circuit) -> Circuit:
    """Rewrite every gate into {U1, U2, U3, CNOT}; measures/barriers pass through."""
    out = Circuit(circuit.num_qubits, circuit.num_clbits, circuit.name)
    for inst in circuit.instructions:
        if inst.kind != "gate":
            out.append(inst)
            continue
        g, qs = inst.gate, inst.qubits
        if g.name in BASIS_GATES:
            out.append(inst)
        elif g.name == "H":
            out.u2(0.0, np.pi, qs[0])
        elif g.name == "X":
            out.u3(np.pi, 0.0, np.pi, qs[0])
        elif g.name == "RY":
            out.u3(g.params[0], 0.0, 0.0, qs[0])
        elif g.name == "SWAP":
            a, b = qs
            out.cx(a, b).cx(b, a).cx(a, b)
        elif g.name == "CCX":
            for gate, targets in _ccx_network(*qs):
                out.gate(gate, *targets)
        else:
            raise CircuitError(f"no basis decomposition for {g.name}")
    return out


def _two_qubit_degree(circuit: Circuit) -> list[int]:
    deg = [0] * circuit.num_qubits
    for inst in circuit.gate_instructions():
        if len(inst.qubits) >= 2:
            for q in inst.qubits:
                deg[q] += 1
    return deg


def default_layout(circuit: Circuit, graph: CouplingGraph) -> tuple[int, ...]:
    """Identity layout, adjusted so the busiest logical sits on the hub."""
    layout = list(range(graph.num_qubits))
    deg = _two_qubit_degree(circuit)
    hot = int(np.argmax(deg)) if any(deg) else 0
    hub = max(range(graph.num_qubits), key=lambda q: (graph.degree(q), -q))
    i, j = layout.index(hub), hot
    layout[i], layout[j] = layout[j], layout[i]
    return tuple(layout)


def route(
    circuit: Circuit,
    graph: CouplingGraph,
    initial_layout: tuple[int, ...] | None = None,
) -> TranspiledCircuit:
    """Map a basis circuit onto the coupling graph, inserting SWAPs as CNOT triples."""
    for inst in circuit.gate_instructions():
        if inst.gate.name not in BASIS_GATES:
            raise CircuitError(
                f"route expects a basis-decomposed circuit; found {inst.gate.name}"
            )
    if circuit.num_qubits > graph.num_qubits:
        raise CircuitError(
            f"{circuit.num_qubits}-qubit circuit cannot map onto "
            f"{graph.num_qubits} physical qubits"
        )

    if initial_layout is None:
        layout = list(default_layout(circuit, graph))
    else:
        layout = [int(p) for p in initial_layout]
        if len(layout) == circuit.num_qubits < graph.num_qubits:
            rest = [p for p in range(graph.num_qubits) if p not in layout]
            layout += rest
        if sorted(layout) != list(range(graph.num_qubits)):
            raise CircuitError(f"layout must permute physical qubits: {layout}")

    l2p = list(layout)  # logical (possibly padded) -> physical
    out = Circuit(graph.num_qubits, circuit.num_clbits, circuit.name)
    swap_count = 0

    def emit_swap(pa: int, pb: int):
        nonlocal swap_count
        out.cx(pa, pb).cx(pb, pa).cx(pa, pb)
        swap_count += 1
        la, lb = l2p.index(pa), l2p.index(pb)
        l2p[la], l2p[lb] = l2p[lb], l2p[la]

    for inst in circuit.instructions:
        if inst.kind == "barrier":
            out.barrier(*(l2p[q] for q in inst.qubits))
        elif inst.kind == "measure":
            out.measure(l2p[inst.qubits[0]], inst.clbit)
        elif len(inst.qubits) == 1:
            out.gate(inst.gate, l2p[inst.qubits[0]])
        else:
            pa, pb = l2p[inst.qubits[0]], l2p[inst.qubits[1]]
            if not graph.has_edge(pa, pb):
                path = graph.shortest_path(pa, pb)
                for step in range(len(path) - 2):
                    emit_swap(path[step], path[step + 1])
                pa = path[-2]
            out.gate(inst.gate, pa, pb)

    return TranspiledCircuit(
        circuit=out,
        initial_layout=tuple(layout),
        final_layout=tuple(l2p),
        swap_count=swap_count,
    )


def estimate_fidelity(transpiled, device: DeviceModel) -> tuple[float, float]:
    """(fidelity, error) of a basis circuit under flat per-gate error rates.

    fidelity = prod over gates of (1 - rate) * prod over measured qubits
    of (1 - readout error); error = 1 - fidelity.
    """
    circuit = transpiled.circuit if isinstance(transpiled, TranspiledCircuit) else transpiled
    fidelity = 1.0
    for inst in circuit.gate_instructions():
        if inst.gate.name not in BASIS_GATES:
            raise CircuitError(
                f"fidelity model covers basis gates only; found {inst.gate.name}"
            )
        rate = device.cnot_error if len(inst.qubits) == 2 else device.single_qubit_error
        fidelity *= 1.0 - rate
    for q in circuit.measured_qubits:
        fidelity *= 1.0 - device.readout_error_of(q)
    return fidelity, 1.0 - fidelity


def zyz_angles(matrix: np.ndarray) -> tuple[float, float, float]:
    """(theta, phi, lam) with U3(theta, phi, lam) == matrix up to global phase."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"need a 2x2 matrix, got {m.shape}")
    theta = 2.0 * np.arctan2(abs(m[1, 0]), abs(m[0, 0]))
    if abs(m[1, 0]) < 1e-12:  # diagonal: only phi+lam is defined
        phi = 0.0
        lam = float(np.angle(m[1, 1]) - np.angle(m[0, 0]))
    elif abs(m[0, 0]) < 1e-12:  # antidiagonal: only phi-lam is defined
        lam = 0.0
        phi = float(np.angle(m[1, 0]) - np.angle(-m[0, 1]))
    else:
        phi = float(np.angle(m[1, 0]) - np.angle(m[0, 0]))
        lam = float(np.angle(-m[0, 1]) - np.angle(m[0, 0]))
    return float(theta), phi, lam


def fuse_single_qubit_runs(circuit: Circuit) -> Circuit:
    """Optional pass: merge adjacent single-qubit basis gates into one U3.

    Off the default path; useful to shorten long U1/U2/U3 chains before
    fidelity estimation.
    """
    out = Circuit(circuit.num_qubits, circuit.num_clbits, circuit.name)
    pending: dict[int, np.ndarray] = {}

    def flush(q: int):
        m = pending.pop(q, None)
        if m is None:
            return
        if np.max(np.abs(m - np.eye(2))) < 1e-12:
            return  # run collapsed to identity
        theta, phi, lam = zyz_angles(m)
        out.u3(theta, phi, lam, q)

    for inst in circuit.instructions:
        if inst.kind == "gate" and len(inst.qubits) == 1:
            if inst.gate.name not in BASIS_GATES:
                raise CircuitError(f"fuse pass expects basis gates, found {inst.gate.name}")
            q = inst.qubits[0]
            pending[q] = matrix_of(inst.gate) @ pending.get(q, np.eye(2, dtype=complex))
        else:
            for q in inst.qubits:
                flush(q)
            out.append(inst)
    for q in sorted(pending):
        flush(q)
    return out


def transpile(
    circuit: Circuit,
    device: DeviceModel,
    initial_layout: tuple[int, ...] | None = None,
    fuse: bool = False,
) -> TranspiledCircuit:
    """decompose -> (optional fuse) -> route onto the device's coupling graph."""
    basis = decompose_to_basis(circuit)
    if fuse:
        basis = fuse_single_qubit_runs(basis)
    return route(basis, CouplingGraph.from_device(device), initial_layout)
