"""
OPENQASM interchange and transpilation onto a coupling map
==========================================================

Circuits serialize to a strict OPENQASM 2.0 subset and parse back
structurally intact.  Transpilation rewrites a circuit into the
{U1, U2, U3, CNOT} basis and inserts SWAPs so every two-qubit gate
respects the device's coupling graph, then prices the result with the
calibration error rates.
"""

import numpy as np

from mzsim import (
    Circuit,
    build_eraser,
    device_preset,
    emit,
    estimate_fidelity,
    parse,
    transpile,
    unitary_of,
)
from mzsim.states import equal_up_to_global_phase

# ---------------------------------------------------------------------------
# Round trip.  emit() writes canonical text; parse() rebuilds the same
# circuit object.
# ---------------------------------------------------------------------------

circuit = Circuit(3, 3)
circuit.h(0).cx(0, 1).ry(0.3 * np.pi, 2).ccx(0, 1, 2).measure_all()
text = emit(circuit)
print("canonical serialization:")
print(text)
assert parse(text) == circuit
print("parse(emit(circuit)) == circuit: True")

# ---------------------------------------------------------------------------
# Transpilation.  The T-shaped five-qubit device has no edge between
# qubits 0 and 4, so a CNOT across them needs routing.
# ---------------------------------------------------------------------------

vigo = device_preset("vigo")
print(f"coupling of {vigo.name}: {list(vigo.coupling)}")

distant = Circuit(5).cx(0, 4)
routed = transpile(distant, vigo)
print(f"\nCNOT between qubits 0 and 4:")
print(f"  swaps inserted: {routed.swap_count}")
print(f"  initial layout: {list(routed.initial_layout)}")
print(f"  final layout:   {list(routed.final_layout)}")
print(f"  gate counts:    {routed.circuit.count_gates()}")

# Adjacent two-qubit gates route for free: the busiest logical qubit is
# pinned to the hub of the T, so the erased-mode interferometer fits the
# coupling graph as-is.

eraser = build_eraser(erase=True)
flat = transpile(eraser, vigo)
assert flat.swap_count == 0
print(f"\nerased-mode circuit on {vigo.name}: no swaps needed "
      f"(layout {list(flat.initial_layout)})")

# The error estimate multiplies one survival factor per basis gate and one
# per measured qubit, so readout quality shows up alongside gate quality.

fidelity, error = estimate_fidelity(flat, vigo)
print(f"  estimated fidelity {fidelity:.4f}, error {error:.4f}")

# ---------------------------------------------------------------------------
# Fusing adjacent single-qubit gates shrinks the rotation count without
# changing the unitary.
# ---------------------------------------------------------------------------

chatty = Circuit(2).h(0).x(0).ry(0.4, 0).u1(0.2, 0).cx(0, 1).h(1).x(1)
fused = transpile(chatty, vigo, fuse=True)
plain = transpile(chatty, vigo, fuse=False)
print(f"\nsingle-qubit fusion: {plain.circuit.count_gates()} -> "
      f"{fused.circuit.count_gates()}")
assert equal_up_to_global_phase(
    unitary_of(plain.circuit), unitary_of(fused.circuit), tol=1e-9)
print("fused and unfused circuits agree up to global phase: True")

# Every device preset prices the same logical circuit differently.

print("\nerror estimate for the erased-mode circuit per preset:")
for name in ("vigo-0820", "vigo-0920", "london", "x2"):
    dev = device_preset(name)
    _, err = estimate_fidelity(transpile(eraser, dev), dev)
    print(f"  {name:<10} {err:.4f}")
