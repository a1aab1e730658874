"""Symbolic definitions of every rate region and of the coding-scheme system.

Each region is stored as text in the inequality grammar. Bounds written with
a minimum of two terms are already split into two rows. Row labels name the
role of the row, e.g. ``r1_leak`` is the private-rate bound of user 1 that
carries the leakage allowance ``L1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .system import IneqSystem, parse_system

ACHIEVABILITY_TEXT = """\
variables: R0, R1, R2, R10, R20, R11, R22, Rp1, Rp2, Rt1, Rt2
# rate splitting  R_j = R_j0 + R_jj
R1 - R10 - R11 <= 0              # split1_le
R1 - R10 - R11 >= 0              # split1_ge
R2 - R20 - R22 <= 0              # split2_le
R2 - R20 - R22 >= 0              # split2_ge
R10 >= 0                         # public1_nonneg
R20 >= 0                         # public2_nonneg
R10 - R1 <= 0                    # public1_le_rate
R20 - R2 <= 0                    # public2_le_rate
R10 <= L1                        # public1_le_leak
R20 <= L2                        # public2_le_leak
# reliability
Rp1 + Rp2 > I(U1;U2|U0)                      # covering
R11 + Rp1 + Rt1 < I(U1;Y1|U0)                # decode1_private
R0 + R20 + R1 + Rp1 + Rt1 < I(U0,U1;Y1)      # decode1_joint
R22 + Rp2 + Rt2 < I(U2;Y2|U0)                # decode2_private
R0 + R10 + R2 + Rp2 + Rt2 < I(U0,U2;Y2)      # decode2_joint
# the other receiver resolves the randomisation index
Rt1 < I(U1;Y2|U0,U2)                         # eaves2_decodes
Rt2 < I(U2;Y1|U0,U1)                         # eaves1_decodes
# leakage
Rt1 + Rp1 - R10 > I(U1;Y2|U0,U2) + I(U1;U2|U0) - L1   # leak1_rand
Rp1 + L1 - R10 > I(U1;U2|U0)                           # leak1_bin
Rt2 + Rp2 - R20 > I(U2;Y1|U0,U1) + I(U1;U2|U0) - L2   # leak2_rand
Rp2 + L2 - R20 > I(U1;U2|U0)                           # leak2_bin
# nonnegativity
R11 >= 0                         # nonneg_R11
R22 >= 0                         # nonneg_R22
Rp1 >= 0                         # nonneg_Rp1
Rp2 >= 0                         # nonneg_Rp2
Rt1 >= 0                         # nonneg_Rt1
Rt2 >= 0                         # nonneg_Rt2
R0 >= 0                          # nonneg_R0
R1 >= 0                          # nonneg_R1
R2 >= 0                          # nonneg_R2
"""

INNER_TEXT = """\
variables: R0, R1, R2
R1 <= I(U1;Y1|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1                            # r1_leak
R0 + R1 <= I(U0,U1;Y1) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1                       # r01_leak
R0 + R1 <= I(U0,U1;Y1)                                                           # r01
R2 <= I(U2;Y2|U0) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2                            # r2_leak
R0 + R2 <= I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2                       # r02_leak
R0 + R2 <= I(U0,U2;Y2)                                                           # r02
R0 + R1 + R2 <= I(U0,U1;Y1) + I(U2;Y2|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1    # sum_leak1
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2    # sum_leak2
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0) + I(U0;Y1)               # sum_common_y1
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0) + I(U0;Y2)               # sum_common_y2
2*R0 + R1 + R2 <= I(U0,U1;Y1) + I(U0,U2;Y2) - I(U1;U2|U0)                        # double_common
"""

# 0 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0), produced alongside the bounds
CODEBOOK_CONDITION_TEXT = """\
0 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0)     # codebook_condition
"""

RATE_NONNEG_TEXT = """\
R0 >= 0    # nonneg_R0
R1 >= 0    # nonneg_R1
R2 >= 0    # nonneg_R2
"""

OUTER_TEXT = """\
variables: R0, R1, R2
R0 <= I(W;Y1)                                                  # r0_y1
R0 <= I(W;Y2)                                                  # r0_y2
R1 <= I(U;Y1|V,W) - I(U;Y2|V,W) + L1                           # r1_leak_given_v
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1                               # r1_leak
R0 + R1 <= I(U;Y1|W) + I(W;Y1)                                 # r01_y1
R0 + R1 <= I(U;Y1|W) + I(W;Y2)                                 # r01_y2
R2 <= I(V;Y2|U,W) - I(V;Y1|U,W) + L2                           # r2_leak_given_u
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2                               # r2_leak
R0 + R2 <= I(V;Y2|W) + I(W;Y1)                                 # r02_y1
R0 + R2 <= I(V;Y2|W) + I(W;Y2)                                 # r02_y2
R0 + R1 + R2 <= I(U;Y1|V,W) + I(V;Y2|W) + I(W;Y1)              # sum_v_y1
R0 + R1 + R2 <= I(U;Y1|V,W) + I(V;Y2|W) + I(W;Y2)              # sum_v_y2
R0 + R1 + R2 <= I(U;Y1|W) + I(V;Y2|U,W) + I(W;Y1)              # sum_u_y1
R0 + R1 + R2 <= I(U;Y1|W) + I(V;Y2|U,W) + I(W;Y2)              # sum_u_y2
"""

SD_TEXT = """\
variables: R0, R1, R2
R1 <= H(Y1|V,W,Y2) + L1                                         # r1_leak
R0 + R1 <= H(Y1|V,W,Y2) + I(W;Y1) + L1                          # r01_leak
R0 + R1 <= H(Y1)                                                # r01
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2                                # r2_leak
R0 + R2 <= I(V,W;Y2) - I(V;Y1|W) + L2                           # r02_leak
R0 + R2 <= I(V,W;Y2)                                            # r02
R0 + R1 + R2 <= H(Y1|V,W,Y2) + I(V;Y2|W) + I(W;Y1) + L1         # sum_leak1
R0 + R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y1)                 # sum_common_y1
R0 + R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y2)                 # sum_common_y2
2*R0 + R1 + R2 <= H(Y1|V,W) + I(V,W;Y2) + I(W;Y1)               # double_common
"""

DM_TEXT = """\
variables: R0, R1
R0 <= I(W;Y2)                                                   # r0
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1                                # r1_leak
R0 + R1 <= I(U,W;Y1) - I(U;Y2|W) + L1                           # r01_leak
R0 + R1 <= I(U;Y1|W) + I(W;Y1)                                  # r01_y1
R0 + R1 <= I(U;Y1|W) + I(W;Y2)                                  # r01_y2
"""

PD_TEXT = """\
variables: R1, R2
R2 <= I(W;Y2)                                                   # r2
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1                                # r1_leak
R1 + R2 <= I(U;Y1|W) + I(W;Y2)                                  # sum
"""

SD0_TEXT = """\
variables: R1, R2
R1 <= H(Y1|V,W,Y2) + L1                                         # r1_leak
R1 <= H(Y1)                                                     # r1
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2                                # r2_leak
R2 <= I(V,W;Y2)                                                 # r2
R1 + R2 <= H(Y1|V,W,Y2) + I(V;Y2|W) + I(W;Y1) + L1              # sum_leak1
R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y1)                      # sum_y1
R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y2)                      # sum_y2
"""

LIU_TEXT = """\
variables: R1, R2
R1 <= I(U1;Y1|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2)                # r1_secret
R2 <= I(U2;Y2|U0) - I(U1;U2|U0) - I(U2;Y1|U0,U1)                # r2_secret
"""

GP_TEXT = """\
variables: R1, R2
R1 <= H(Y1)                                                     # r1
R2 <= I(V;Y2)                                                   # r2
R1 + R2 <= H(Y1|V) + I(V;Y2)                                    # sum
"""

M1SECRET_TEXT = """\
variables: R1, R2
R1 <= H(Y1|V,Y2)                                                # r1_secret
R2 <= I(V;Y2)                                                   # r2
"""

M2SECRET_TEXT = """\
variables: R1, R2
R1 <= H(Y1)                                                     # r1
R1 <= H(Y1|W) + I(W;Y2)                                         # r1_via_w
R2 <= I(V;Y2|W) - I(V;Y1|W)                                     # r2_secret
"""

M2SECRET_ALT_TEXT = """\
variables: R1, R2
R1 <= H(Y1)                                                     # r1
R2 <= I(V;Y2|W) - I(V;Y1|W)                                     # r2_secret
R1 + R2 <= H(Y1|V,W) + I(V,W;Y2)                                # sum
"""

BOTHSECRET_TEXT = """\
variables: R1, R2
R1 <= H(Y1|V,W,Y2)                                              # r1_secret
R2 <= I(V;Y2|W) - I(V;Y1|W)                                     # r2_secret
"""

CK_TEXT = """\
variables: R0, R1
R0 <= I(W;Y1)                                                   # r0_y1
R0 <= I(W;Y2)                                                   # r0_y2
R1 <= I(U;Y1|W) - I(U;Y2|W)                                     # r1_secret
"""

DM0_TEXT = """\
variables: R0, R1
R0 <= I(W;Y2)                                                   # r0
R1 <= I(U;Y1|W) - I(U;Y2|W)                                     # r1_secret
R0 + R1 <= I(U,W;Y1) - I(U;Y2|W)                                # r01_secret
"""

DEGMSG_TEXT = """\
variables: R0, R1
R0 <= I(W;Y2)                                                   # r0
R0 + R1 <= I(X;Y1|W) + I(W;Y2)                                  # r01_via_w
R0 + R1 <= I(X;Y1)                                              # r01
"""

DET_TEXT = """\
variables: R1, R2
R1 <= H(Y1)                                                     # r1
R1 <= H(Y1|Y2) + L1                                             # r1_leak
R2 <= H(Y2)                                                     # r2
R2 <= H(Y2|Y1) + L2                                             # r2_leak
R1 + R2 <= H(Y1,Y2)                                             # sum
"""


@dataclass(frozen=True)
class RegionSpec:
    """Static description of a region: its auxiliaries, rate axes and class."""

    tag: str
    text: str
    signature: tuple
    rate_axes: tuple
    requires: str | None = None  # ChannelClass flag name
    markov: tuple | None = None  # (source, via) such that source - via - X
    uses_leakage: bool = False
    title: str = ""


REGIONS: dict[str, RegionSpec] = {
    r.tag: r
    for r in [
        RegionSpec("inner", INNER_TEXT, ("U0", "U1", "U2", "X"), ("R0", "R1", "R2"),
                   uses_leakage=True, title="leakage-constrained Marton inner bound"),
        RegionSpec("outer", OUTER_TEXT, ("W", "U", "V", "X"), ("R0", "R1", "R2"),
                   markov=(("W",), ("U", "V")), uses_leakage=True, title="leakage-constrained UVW outer bound"),
        RegionSpec("sd", SD_TEXT, ("W", "V", "X"), ("R0", "R1", "R2"), requires="semi_deterministic",
                   uses_leakage=True, title="semi-deterministic BC leakage capacity"),
        RegionSpec("dm", DM_TEXT, ("W", "U", "X"), ("R0", "R1"), markov=(("W",), ("U",)),
                   uses_leakage=True, title="degraded message set with leakage"),
        RegionSpec("pd", PD_TEXT, ("W", "U", "X"), ("R1", "R2"), requires="physically_degraded",
                   markov=(("W",), ("U",)), uses_leakage=True, title="physically degraded BC with leakage"),
        RegionSpec("sd0", SD0_TEXT, ("W", "V", "X"), ("R1", "R2"), requires="semi_deterministic",
                   uses_leakage=True, title="semi-deterministic BC, no common message"),
        RegionSpec("liu", LIU_TEXT, ("U0", "U1", "U2", "X"), ("R1", "R2"),
                   title="BC with two confidential messages, inner bound"),
        RegionSpec("gp_nosecrecy", GP_TEXT, ("V", "X"), ("R1", "R2"), requires="semi_deterministic",
                   title="semi-deterministic BC, no secrecy"),
        RegionSpec("m1secret", M1SECRET_TEXT, ("V", "X"), ("R1", "R2"), requires="semi_deterministic",
                   title="semi-deterministic BC, message 1 secret"),
        RegionSpec("m2secret", M2SECRET_TEXT, ("W", "V", "X"), ("R1", "R2"), requires="semi_deterministic",
                   title="semi-deterministic BC, message 2 secret"),
        RegionSpec("m2secret_alt", M2SECRET_ALT_TEXT, ("W", "V", "X"), ("R1", "R2"),
                   requires="semi_deterministic", title="semi-deterministic BC, message 2 secret (sum form)"),
        RegionSpec("bothsecret", BOTHSECRET_TEXT, ("W", "V", "X"), ("R1", "R2"), requires="semi_deterministic",
                   title="semi-deterministic BC, both messages secret"),
        RegionSpec("ck", CK_TEXT, ("W", "U", "X"), ("R0", "R1"), markov=(("W",), ("U",)),
                   title="BC with confidential messages"),
        RegionSpec("dm0", DM0_TEXT, ("W", "U", "X"), ("R0", "R1"), markov=(("W",), ("U",)),
                   title="degraded message set, full secrecy"),
        RegionSpec("degmsg", DEGMSG_TEXT, ("W", "X"), ("R0", "R1"), title="BC with a degraded message set"),
        RegionSpec("det", DET_TEXT, ("X",), ("R1", "R2"), requires="deterministic", uses_leakage=True,
                   title="deterministic BC with leakage"),
    ]
}


@lru_cache(maxsize=None)
def region_system(tag: str) -> IneqSystem:
    try:
        entry = REGIONS[tag]
    except KeyError:
        raise KeyError(f"unknown region id {tag!r}; known: {sorted(REGIONS)}") from None
    return parse_system(entry.text)


def achievability_system() -> IneqSystem:
    """Rate constraints of the layered double-binning scheme, all variables kept."""
    return parse_system(ACHIEVABILITY_TEXT)


def inner_bound_reference() -> IneqSystem:
    """Inner-bound rows plus the codebook condition and rate nonnegativity."""
    return parse_system(INNER_TEXT + CODEBOOK_CONDITION_TEXT + RATE_NONNEG_TEXT)
