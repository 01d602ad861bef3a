"""
The quantum eraser: which-path information vs. interference
============================================================

A two-qubit circuit plays the textbook delayed-choice game.  The first
qubit is a photon that can take one of two interferometer arms; the
second is a marker that records which arm was taken.  Measuring the
marker in the computational basis keeps the path information and kills
the fringes; rotating it into the superposition basis first "erases"
the record and interference returns.
"""

from mzsim import build_eraser, ideal_counts, simulate_ideal

# ---------------------------------------------------------------------------
# Exact distributions.  With the marker measured as-is (erase=False) every
# outcome is equally likely: the path record makes the two arms
# distinguishable, so nothing interferes.
# ---------------------------------------------------------------------------

kept = simulate_ideal(build_eraser(erase=False))
print("marker kept (no interference):")
for key, p in sorted(kept.probability_dict().items()):
    print(f"  P({key}) = {p:.4f}")

# With the extra rotation on the marker (erase=True) the record is erased
# before readout and the photon interferes with itself again: only the
# correlated outcomes 00 and 11 survive.

erased = simulate_ideal(build_eraser(erase=True))
print("\nmarker erased (interference restored):")
for key, p in sorted(erased.probability_dict().items()):
    print(f"  P({key}) = {p:.4f}")

# ---------------------------------------------------------------------------
# The same story at finite statistics.  Histograms are seeded, so this
# block prints identically on every run.
# ---------------------------------------------------------------------------

shots = 8192
for erase in (False, True):
    counts = ideal_counts(build_eraser(erase=erase), shots, seed=1)
    label = "erased" if erase else "kept"
    print(f"\n{shots} shots, marker {label}:")
    for key, n in sorted(counts.counts.items()):
        bar = "#" * round(40 * n / shots)
        print(f"  {key}: {n:5d} {bar}")

# The contrast between the two histograms is the whole effect: same
# circuit except for one basis change on a qubit that is never used as
# anything but a bystander record.
