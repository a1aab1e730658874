"""Walk through the leakage-constrained regions of the Blackwell channel.

The Blackwell channel has a ternary input and two binary outputs: input 0
gives (0, 1), input 1 gives (1, 0) and input 2 gives (0, 0). Being
deterministic, its region for an input law is a pentagon in (R1, R2), and the
union over input laws can be traced directly.

Run with ``python3 demos/blackwell_study.py``.
"""

import numpy as np

from leakcap import (
    INF,
    BlackwellParams,
    LeakagePair,
    bwc_frontier,
    bwc_lstar,
    bwc_polytope,
    bwc_sumrate_curve,
    frontier_distance,
    frontier_dominates,
)
from leakcap.blackwell import REFERENCE_THRESHOLDS, bwc_saturation_details


def pentagon_for_uniform_input():
    p = BlackwellParams(1 / 3, 1 / 3)
    print("Uniform input law")
    for L in (LeakagePair(0, 0), LeakagePair(0.1, 0.1), LeakagePair(INF, INF)):
        poly = bwc_polytope(p, L)
        caps = {lab: round(float(v), 6) for lab, v in zip(poly.labels, poly.b) if not lab.startswith("nonneg")}
        print(f"  L={L}: {caps}")
    # beyond the cross information of the outputs, extra leakage buys nothing
    print(f"  cross information I(Y1;Y2) = {bwc_lstar(p):.6f} bits\n")


def frontiers():
    print("Union frontiers under equal leakage allowances")
    curves = {v: bwc_frontier(LeakagePair(v, v), resolution=2e-3) for v in (0.0, 0.05, 0.1, 0.4)}
    free = bwc_frontier(LeakagePair(INF, INF), resolution=2e-3)
    for v, f in curves.items():
        xs = np.array([0.25, 0.5, 0.75])
        print(f"  L={v:<4}: R2 at R1=0.25/0.5/0.75 -> {np.round(f.staircase(xs), 4)}")
    print(f"  0.05 dominates 0:   {frontier_dominates(curves[0.05], curves[0.0], 1e-3)}")
    print(f"  0.1 dominates 0.05: {frontier_dominates(curves[0.1], curves[0.05], 1e-3)}")
    print(f"  distance of L=0.4 to the unconstrained curve: {frontier_distance(curves[0.4], free):.2e}\n")


def sum_rate():
    print("Largest sum rate as the common allowance grows")
    grid = np.round(np.arange(0, 0.2 + 1e-9, 0.02), 6)
    curve = bwc_sumrate_curve(grid)
    for L, s in zip(curve.leakages, curve.sum_rates):
        print(f"  L={L:.2f}: {s:.6f}")
    print(f"  sum row first binds at L={curve.breakpoint:.5f}; plateau {curve.plateau:.6f} bits")
    print("  below the breakpoint each bit of allowance per receiver adds two bits of sum rate\n")


def saturation():
    print("Saturation thresholds: smallest allowance that stops constraining the region")
    for L, ref in REFERENCE_THRESHOLDS.items():
        d = bwc_saturation_details(L)
        print(f"  L={L:<4}: threshold {d.threshold:.5f} bits at law ({d.alpha:.3f}, {d.beta:.3f});"
              f" reference value {ref:.5f}")


if __name__ == "__main__":
    pentagon_for_uniform_input()
    frontiers()
    sum_rate()
    saturation()
