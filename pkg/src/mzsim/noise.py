"""Synthetic device noise and seeded sampling.

The noise model is deliberately simple — calibration summaries give error
*rates*, not process tomography — and is a stochastic-Pauli trajectory
model:

* after each gate, with probability equal to that gate's error rate, a
  uniformly random non-identity Pauli (X, Y or Z) lands on each qubit the
  gate touched;
* each measured bit then flips asymmetrically: 0->1 with probability p01,
  1->0 with probability p10.

Gate rates are keyed by arity: 1-qubit gates use `single_qubit_error`
(default cnot_error/10), 2-qubit gates use `cnot_error`, and a bare CCX
uses 1-(1-cnot_error)**6, the cost of its six-CNOT expansion.

Reproducibility contract (bit-exact for a fixed numpy generation):
the measurement outcome of shot i consumes the i-th value of a PCG64
stream seeded with `seed`; the noise draws of trajectory i come from an
independent PCG64 stream seeded with (seed, i); events with probability 0
consume no randomness.  Consequently a device with all rates zero
reproduces ideal sampling bit for bit at the same seed, and trajectories
can be evaluated in parallel without changing results.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, CountsHistogram, simulate_ideal
from .gates import matrix_of
from .states import StateVector, apply_unitary

#: canonical 5-qubit T-shaped coupling (hub at qubit 1, tail 3-4)
T_COUPLING: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (1, 3), (3, 4))
#: 5-qubit "hourglass"/bowtie coupling: two triangles sharing the center
HOURGLASS_COUPLING: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4),
)

_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),          # X
    np.array([[0, -1j], [1j, 0]], dtype=complex),       # Y
    np.array([[1, 0], [0, -1]], dtype=complex),         # Z
)


@dataclass(frozen=True)
class DeviceModel:
    """Calibration summary of a backend.

    readout holds one (p01, p10) pair per qubit: p01 is the probability
    of reading 1 when the true bit is 0, p10 the reverse.
    """

    name: str
    num_qubits: int
    t1_us: float
    t2_us: float
    cnot_error: float
    readout: tuple[tuple[float, float], ...]
    coupling: tuple[tuple[int, int], ...]
    single_qubit_error: float = None  # type: ignore[assignment]
    calibration_date: str = ""

    def __post_init__(self):
        if self.single_qubit_error is None:
            object.__setattr__(self, "single_qubit_error", self.cnot_error / 10.0)
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ValueError("t1_us and t2_us must be positive")
        for label, rate in (
            ("cnot_error", self.cnot_error),
            ("single_qubit_error", self.single_qubit_error),
        ):
            if not 0.0 <= rate < 1.0:
                raise ValueError(f"{label} must be in [0, 1), got {rate}")
        readout = tuple((float(a), float(b)) for a, b in self.readout)
        if len(readout) != self.num_qubits:
            raise ValueError(
                f"need one readout pair per qubit, got {len(readout)} "
                f"for {self.num_qubits} qubits"
            )
        for p01, p10 in readout:
            if not (0.0 <= p01 < 1.0 and 0.0 <= p10 < 1.0):
                raise ValueError(f"readout probabilities must be in [0, 1): {(p01, p10)}")
        object.__setattr__(self, "readout", readout)
        coupling = tuple(tuple(sorted(map(int, e))) for e in self.coupling)
        for a, b in coupling:
            if a == b or not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"bad coupling edge {(a, b)}")
        object.__setattr__(self, "coupling", coupling)

    @property
    def mean_readout_error(self) -> float:
        return float(np.mean([(a + b) / 2 for a, b in self.readout]))

    def readout_error_of(self, qubit: int) -> float:
        p01, p10 = self.readout[qubit]
        return (p01 + p10) / 2

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "calibration_date": self.calibration_date,
            "num_qubits": self.num_qubits,
            "t1_us": self.t1_us,
            "t2_us": self.t2_us,
            "single_qubit_error": self.single_qubit_error,
            "cnot_error": self.cnot_error,
            "readout_error": [list(pair) for pair in self.readout],
            "coupling": [list(edge) for edge in self.coupling],
        }


def _symmetric_readout(p: float, num_qubits: int) -> tuple[tuple[float, float], ...]:
    return tuple((p, p) for _ in range(num_qubits))


def _preset(
    name: str, date: str, t1: float, t2: float, cnot_pct: float, ro_pct: float,
    coupling: tuple[tuple[int, int], ...],
) -> DeviceModel:
    return DeviceModel(
        name=name,
        calibration_date=date,
        num_qubits=5,
        t1_us=t1,
        t2_us=t2,
        cnot_error=cnot_pct / 100.0,
        readout=_symmetric_readout(ro_pct / 100.0, 5),
        coupling=coupling,
    )


#: five-qubit backends with their averaged calibration summaries
DEVICE_PRESETS: dict[str, DeviceModel] = {
    "burlington": _preset("burlington", "2020-08", 84.88, 67.36, 1.50, 4.64, T_COUPLING),
    "essex": _preset("essex", "2020-08", 104.31, 123.70, 1.76, 3.59, T_COUPLING),
    "london": _preset("london", "2020-08", 61.45, 62.74, 1.75, 4.40, T_COUPLING),
    "ourense": _preset("ourense", "2020-08", 93.15, 66.43, 0.92, 2.96, T_COUPLING),
    "valencia-0820": _preset("valencia-0820", "2020-08", 84.18, 62.78, 1.11, 2.32, T_COUPLING),
    "valencia-0920": _preset("valencia-0920", "2020-09", 100.00, 80.49, 1.10, 2.52, T_COUPLING),
    "vigo-0820": _preset("vigo-0820", "2020-08", 73.28, 50.73, 1.07, 1.66, T_COUPLING),
    "vigo-0920": _preset("vigo-0920", "2020-09", 107.64, 74.04, 0.94, 1.96, T_COUPLING),
    "x2": _preset("x2", "2020-08", 57.08, 45.40, 1.82, 3.18, HOURGLASS_COUPLING),
}

#: bare device names resolve to their earliest calibration
_PRESET_ALIASES = {"vigo": "vigo-0820", "valencia": "valencia-0820"}


def device_preset(name: str) -> DeviceModel:
    key = name.strip().lower()
    key = _PRESET_ALIASES.get(key, key)
    if key not in DEVICE_PRESETS:
        known = sorted(set(DEVICE_PRESETS) | set(_PRESET_ALIASES))
        raise KeyError(f"unknown device preset {name!r}; known: {', '.join(known)}")
    return DEVICE_PRESETS[key]


def load_device(source: str) -> DeviceModel:
    """Load a calibration document from a JSON file path or raw JSON text.

    Required fields: name, num_qubits, t1_us, t2_us, cnot_error,
    readout_error, coupling.  Optional: single_qubit_error (default
    cnot_error/10), calibration_date.  readout_error is either one scalar,
    applied symmetrically to every qubit, or a list of [p01, p10] pairs.
    """
    text = source
    if not source.lstrip().startswith("{"):
        if not os.path.exists(source):
            raise ValueError(f"no such calibration file: {source}")
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"calibration document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("calibration document must be a JSON object")
    required = ["name", "num_qubits", "t1_us", "t2_us", "cnot_error", "readout_error", "coupling"]
    missing = [k for k in required if k not in doc]
    if missing:
        raise ValueError(f"calibration document missing field(s): {', '.join(missing)}")
    num_qubits = int(doc["num_qubits"])
    ro = doc["readout_error"]
    if isinstance(ro, (int, float)):
        if not 0.0 <= ro < 1.0:
            raise ValueError(f"readout_error must be in [0, 1), got {ro}")
        readout = _symmetric_readout(float(ro), num_qubits)
    else:
        readout = tuple((float(p[0]), float(p[1])) for p in ro)
    try:
        return DeviceModel(
            name=str(doc["name"]),
            calibration_date=str(doc.get("calibration_date", "")),
            num_qubits=num_qubits,
            t1_us=float(doc["t1_us"]),
            t2_us=float(doc["t2_us"]),
            cnot_error=float(doc["cnot_error"]),
            single_qubit_error=(
                float(doc["single_qubit_error"])
                if doc.get("single_qubit_error") is not None
                else None
            ),
            readout=readout,
            coupling=tuple(tuple(e) for e in doc["coupling"]),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid calibration document: {exc}") from exc


def ideal_device(num_qubits: int, coupling: tuple[tuple[int, int], ...] | None = None) -> DeviceModel:
    """All-zero error rates; useful as a control in tests and sweeps."""
    if coupling is None:
        coupling = tuple((q, q + 1) for q in range(num_qubits - 1))
    return DeviceModel(
        name="ideal",
        num_qubits=num_qubits,
        t1_us=float("inf"),
        t2_us=float("inf"),
        cnot_error=0.0,
        single_qubit_error=0.0,
        readout=_symmetric_readout(0.0, num_qubits),
        coupling=coupling,
    )


@dataclass(frozen=True)
class NoiseChannel:
    """Arity-keyed gate error probabilities plus per-qubit readout flips."""

    gate_error: dict[int, float] = field(default_factory=dict)
    readout: tuple[tuple[float, float], ...] = ()

    @classmethod
    def from_device(cls, device: DeviceModel) -> "NoiseChannel":
        p2 = device.cnot_error
        return cls(
            gate_error={
                1: device.single_qubit_error,
                2: p2,
                3: 1.0 - (1.0 - p2) ** 6,
            },
            readout=device.readout,
        )


def _cumulative(probs: np.ndarray) -> np.ndarray:
    cum = np.cumsum(probs)
    cum[-1] = max(cum[-1], 1.0)  # guard the top edge against rounding
    return cum


def _extract_bits(index: int, qubits: tuple[int, ...], num_qubits: int) -> list[int]:
    return [(index >> (num_qubits - 1 - q)) & 1 for q in qubits]


def sample_counts(
    state: StateVector,
    shots: int,
    seed: int,
    measured_qubits: tuple[int, ...] | None = None,
) -> CountsHistogram:
    """Multinomial sampling of a statevector's distribution.

    Shot i consumes the i-th uniform of the PCG64 stream seeded with
    `seed`, so histograms are reproducible and batch-splittable.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    n = state.num_qubits
    qubits = tuple(range(n)) if measured_qubits is None else tuple(measured_qubits)
    cum = _cumulative(state.probabilities())
    us = np.random.default_rng(seed).random(shots)
    outcomes = np.minimum(np.searchsorted(cum, us, side="right"), 2**n - 1)
    counts: dict[str, int] = {}
    for index, tally in zip(*np.unique(outcomes, return_counts=True)):
        key = "".join(str(b) for b in _extract_bits(int(index), qubits, n))
        counts[key] = counts.get(key, 0) + int(tally)
    return CountsHistogram(shots=shots, counts=counts)


def simulate_noisy(
    circuit: Circuit, device: DeviceModel, shots: int, seed: int
) -> CountsHistogram:
    """Trajectory sampling of `circuit` under `device`'s noise model."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    if circuit.num_qubits > device.num_qubits:
        raise ValueError(
            f"circuit needs {circuit.num_qubits} qubits but device "
            f"{device.name!r} has {device.num_qubits}"
        )
    n = circuit.num_qubits
    channel = NoiseChannel.from_device(device)
    gates = circuit.gate_instructions()
    rates = [channel.gate_error.get(len(inst.qubits), 0.0) for inst in gates]
    measured = circuit.measured_qubits or tuple(range(n))
    readout = [channel.readout[q] if q < len(channel.readout) else (0.0, 0.0) for q in measured]

    ideal = simulate_ideal(circuit)
    ideal_cum = _cumulative(ideal.probabilities())

    any_gate_noise = any(r > 0 for r in rates)
    any_readout_noise = any(p01 > 0 or p10 > 0 for p01, p10 in readout)

    # measurement uniforms come first, from the same stream ideal sampling uses
    us = np.random.default_rng(seed).random(shots)

    counts: dict[str, int] = {}
    for i in range(shots):
        traj = (
            np.random.default_rng((seed, i))
            if any_gate_noise or any_readout_noise
            else None
        )
        cum = ideal_cum
        if any_gate_noise:
            flips = []  # (gate position, pauli index per touched qubit)
            for pos, rate in enumerate(rates):
                if rate > 0.0 and traj.random() < rate:
                    flips.append(
                        (pos, [int(traj.integers(3)) for _ in gates[pos].qubits])
                    )
            if flips:
                amps = np.zeros(2**n, dtype=complex)
                amps[0] = 1.0
                marks = dict(flips)
                for pos, inst in enumerate(gates):
                    amps = apply_unitary(amps, matrix_of(inst.gate), inst.qubits, n)
                    if pos in marks:
                        for q, pauli in zip(inst.qubits, marks[pos]):
                            amps = apply_unitary(amps, _PAULIS[pauli], (q,), n)
                cum = _cumulative(np.abs(amps) ** 2)
        index = min(int(np.searchsorted(cum, us[i], side="right")), 2**n - 1)
        bits = _extract_bits(index, measured, n)
        if any_readout_noise:
            for k, (p01, p10) in enumerate(readout):
                p = p10 if bits[k] else p01
                if p > 0.0 and traj.random() < p:
                    bits[k] ^= 1
        key = "".join(str(b) for b in bits)
        counts[key] = counts.get(key, 0) + 1
    return CountsHistogram(shots=shots, counts=counts)


def ideal_counts(circuit: Circuit, shots: int, seed: int) -> CountsHistogram:
    """Sample the exact distribution of `circuit` (no noise)."""
    state = simulate_ideal(circuit)
    return sample_counts(state, shots, seed, measured_qubits=circuit.measured_qubits or None)
