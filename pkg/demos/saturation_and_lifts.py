"""Two structural facts checked numerically on random examples.

First, every leakage allowance has a saturation threshold per input law:
once the allowance reaches it, the private-rate slice of the inner bound is
the same as with unlimited leakage.

Second, two regions whose secrecy bound applies to a sum of rates coincide
with versions that carry an extra common variable. The lift builds that
variable as a mixture and the script confirms the lifted point is a member.

Run with ``python3 demos/saturation_and_lifts.py``.
"""

import numpy as np

from leakcap import INF, AuxChain, JointPmf, LeakagePair, blackwell, leakage_threshold, named_region_polytope
from leakcap import secret_pair_lift
from leakcap.regions import saturation_deviation


def saturation(n=5):
    c = blackwell()
    rng = np.random.default_rng(1)
    print("Saturation of the leakage allowance on the Blackwell channel")
    for _ in range(n):
        aux = AuxChain(JointPmf([("U0", 2), ("U1", 2), ("U2", 2), ("X", 3)],
                                rng.dirichlet(np.ones(24)).reshape(2, 2, 2, 3)))
        t1 = leakage_threshold(aux, c, 1)
        below = saturation_deviation(aux, c, LeakagePair(0.5 * t1, INF), 1)
        at = saturation_deviation(aux, c, LeakagePair(t1, INF), 1)
        print(f"  threshold {t1:.4f}: slice gap at half of it {below:.4f}, at it {at:.1e}")
    print()


def lifts(n=5):
    c = blackwell()
    rng = np.random.default_rng(2)
    print("Lifting points of the sum-bounded secret region")
    done = 0
    while done < n:
        dist = JointPmf([("W", 2), ("V", 2), ("X", 3)], rng.dirichlet(np.ones(12)).reshape(2, 2, 3))
        src = named_region_polytope("m2secret_alt", dist, c)
        if src.is_empty:
            continue
        V = src.vertices()
        pt = rng.dirichlet(np.ones(len(V))) @ V
        rep = secret_pair_lift(dist, pt, c)
        print(f"  point ({pt[0]:.3f}, {pt[1]:.3f}): slack {rep.gamma:.3f}, mixing weight {rep.lam:.3f},"
              f" member {rep.member}, Markov deviation {rep.markov_dev:.1e}")
        done += 1


if __name__ == "__main__":
    saturation()
    lifts()
