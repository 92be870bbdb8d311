"""Stratum labels for the mass stratification at genus three.

A point of the fibred moduli model is a pair (t, u): a curve point and a
fibre coordinate.  The label records the a-number case together with the
invariants that pin down the mass:

* A3          -- the superspecial stratum (section points, and degree-one t
                 with degree-one u);
* A2_F4       -- degree-one t, u rational over the degree-two extension only;
* A2_GEN      -- degree-one t, u outside the degree-two extension;
* A1          -- all other points, refined by the invariant d, divisor
                 membership, and whether t has degree three.

For p != 2 exactly eleven labels are legal (d determines the degree-three
flag); at p = 2 the invariant d is identically 3 and the divisor cases split
further by the degree-three flag, six labels in all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .errors import IllegalLabel

A3 = "A3"
A2_F4 = "A2_F4"
A2_GEN = "A2_GEN"
A1 = "A1"


@dataclass(frozen=True)
class StratumLabel:
    kind: str
    d: int = 0
    in_D: bool = False
    t_in_f6: bool = False

    @property
    def a_number(self) -> int:
        return {"A3": 3, "A2_F4": 2, "A2_GEN": 2, "A1": 1}[self.kind]

    def validate(self, p: int) -> "StratumLabel":
        if self.kind not in (A3, A2_F4, A2_GEN, A1):
            raise IllegalLabel(f"unknown label kind {self.kind!r}")
        if self.kind != A1:
            if self.d or self.in_D or self.t_in_f6:
                raise IllegalLabel("d / divisor flags only apply to a-number one")
            return self
        if self.d not in (3, 4, 5, 6):
            raise IllegalLabel(f"d = {self.d} out of range")
        if p == 2:
            if self.d != 3:
                raise IllegalLabel("the invariant d is identically 3 at p = 2")
            if self.t_in_f6 and not self.in_D:
                raise IllegalLabel(
                    "off the divisor the degree-three flag does not refine the mass at p = 2"
                )
        else:
            if self.t_in_f6 != (self.d == 3):
                raise IllegalLabel("degree-three flag must match d = 3 when p != 2")
        return self

    def __str__(self):
        if self.kind != A1:
            return self.kind
        bits = [f"d={self.d}", "inD" if self.in_D else "notD"]
        if self.t_in_f6:
            bits.append("F6")
        return "A1[" + ",".join(bits) + "]"


def legal_labels(p: int) -> List[StratumLabel]:
    """The mass-distinct labels at p, in the CLI's frozen row order."""
    out = [StratumLabel(A3), StratumLabel(A2_F4), StratumLabel(A2_GEN)]
    if p == 2:
        out.append(StratumLabel(A1, d=3, in_D=False))
        out.append(StratumLabel(A1, d=3, in_D=True, t_in_f6=False))
        out.append(StratumLabel(A1, d=3, in_D=True, t_in_f6=True))
    else:
        for d in (3, 4, 5, 6):
            out.append(StratumLabel(A1, d=d, in_D=False, t_in_f6=(d == 3)))
        out.append(StratumLabel(A1, d=3, in_D=True, t_in_f6=True))
        for d in (4, 5, 6):
            out.append(StratumLabel(A1, d=d, in_D=True, t_in_f6=False))
    for lbl in out:
        lbl.validate(p)
    return out
