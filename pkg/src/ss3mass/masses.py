"""Closed-form exact-rational mass and order formulas.

All values are fractions.Fraction (arbitrary precision, always reduced); no
floating point anywhere.  Special zeta values come from Bernoulli numbers via
the binomial recurrence, so the superspecial mass works for every genus, and
integer outputs are asserted integral rather than rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional

import sympy

from .errors import BadC, IllegalLabel, OutOfHypotheses
from .labels import A1, A2_F4, A2_GEN, A3, StratumLabel, legal_labels  # noqa: F401


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention) via the binomial
    recurrence sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(n):
        acc += comb(n + 1, j) * bernoulli(j)
    return -acc / (n + 1)


def zeta_neg_odd(i: int) -> Fraction:
    """zeta(1 - 2i) = -B_{2i} / (2i) for i >= 1."""
    if i < 1:
        raise ValueError("i must be >= 1")
    return -bernoulli(2 * i) / (2 * i)


def mass_superspecial(g: int, c: int, p: int) -> Fraction:
    """Mass of the genus-g superspecial classes with polarisation kernel of
    rank 2c (c = 0 is the principal genus)."""
    if not 0 <= c <= g // 2:
        raise BadC(f"c = {c} outside [0, {g // 2}]")
    sign = Fraction((-1) ** (g * (g + 1) // 2), 2 ** g)
    zprod = Fraction(1)
    for i in range(1, g + 1):
        zprod *= zeta_neg_odd(i)
    val = sign * zprod
    for i in range(1, g - 2 * c + 1):
        val *= p ** i + (-1) ** i
    for i in range(1, c + 1):
        val *= p ** (4 * i - 2) - 1
    num = Fraction(1)
    for i in range(1, g + 1):
        num *= p ** (2 * i) - 1
    den = Fraction(1)
    for i in range(1, 2 * c + 1):
        den *= p ** (2 * i) - 1
    for i in range(1, g - 2 * c + 1):
        den *= p ** (2 * i) - 1
    val *= num / den
    assert val > 0
    return val


#: 2^10 * 3^4 * 5 * 7, the common denominator of the genus-three formulas
BASE_DEN = 2 ** 10 * 3 ** 4 * 5 * 7


def e_of(p: int) -> int:
    return 0 if p == 2 else 1


def stratum_L(p: int, label: StratumLabel) -> Fraction:
    """The L-value of the label's case: the mass is L / BASE_DEN for
    a-number >= 2 and p^3 * L / BASE_DEN for a-number one."""
    label.validate(p)
    if label.kind == A3:
        return Fraction((p - 1) * (p ** 2 + 1) * (p ** 3 - 1))
    if label.kind == A2_F4:
        return Fraction((p - 1) * (p ** 3 + 1) * (p ** 3 - 1) * (p ** 4 - p ** 2))
    if label.kind == A2_GEN:
        return Fraction(
            (p - 1) * (p ** 3 + 1) * (p ** 3 - 1) * p ** 2 * (p ** 4 - 1),
            2 ** e_of(p),
        )
    d = label.d
    if not label.in_D:
        return Fraction(
            p ** (2 * d) * (p ** 2 - 1) * (p ** 4 - 1) * (p ** 6 - 1), 2 ** e_of(p)
        )
    if not label.t_in_f6:
        return Fraction(p ** (2 * d) * (p - 1) * (p ** 4 - 1) * (p ** 6 - 1))
    return Fraction(p ** 6 * (p ** 2 - 1) * (p ** 3 - 1) * (p ** 4 - 1))


def mass_stratum_g3(p: int, label: StratumLabel) -> Fraction:
    """Exact mass on the stratum of the given label."""
    L = stratum_L(p, label)
    if label.kind == A1:
        val = Fraction(p ** 3) * L / BASE_DEN
    else:
        val = L / BASE_DEN
    assert val > 0
    return val


def local_index_g3(p: int, label: StratumLabel) -> int:
    """The index multiplying the relevant superspecial mass: relative to the
    principal genus for a-numbers three and one, to the non-principal genus
    for a-number two."""
    label.validate(p)
    if label.kind == A3:
        return 1
    if label.kind == A2_F4:
        return p ** 2 * (p ** 2 - 1)
    if label.kind == A2_GEN:
        val = Fraction(p ** 2 * (p ** 4 - 1), 2 ** e_of(p))
        assert val.denominator == 1
        return int(val)
    d = label.d
    if not label.in_D:
        val = Fraction(
            p ** (3 + 2 * d) * (p + 1) * (p ** 2 - 1) * (p ** 3 + 1), 2 ** e_of(p)
        )
    elif not label.t_in_f6:
        val = Fraction(p ** (3 + 2 * d) * (p ** 2 - 1) * (p ** 3 + 1))
    else:
        val = Fraction(p ** 9 * (p + 1) * (p ** 2 - 1))
    assert val.denominator == 1
    return int(val)


def index_base(p: int, label: StratumLabel) -> Fraction:
    """The superspecial mass the local index multiplies."""
    if label.kind in (A2_F4, A2_GEN):
        return mass_superspecial(3, 1, p)
    return mass_superspecial(3, 0, p)


@dataclass(frozen=True)
class GroupOrders:
    """Closed-form orders of the reduction-mod-p automorphism groups."""

    g_m2_order: int
    g_m_order: int
    ker_psi_order: int


GM_CASES = ("notInD", "inD_notF6", "inD_F6")


def formula_group_orders(p: int, d: int, case: str) -> GroupOrders:
    if case not in GM_CASES:
        raise IllegalLabel(f"case must be one of {GM_CASES}")
    if d not in (3, 4, 5, 6):
        raise IllegalLabel(f"d = {d} out of range")
    g_m2 = p ** 15 * (p + 1) * (p ** 2 - 1) * (p ** 3 + 1)
    ker = p ** (2 * (6 - d))
    if case == "notInD":
        g_m = 2 ** e_of(p) * ker
    elif case == "inD_notF6":
        g_m = (p + 1) * ker
    else:
        if d != 3:
            raise IllegalLabel("the degree-three divisor case forces d = 3")
        g_m = (p ** 3 + 1) * p ** 6
    return GroupOrders(g_m2, g_m, ker)


def label_gm_case(label: StratumLabel) -> str:
    if label.kind != A1:
        raise IllegalLabel("group orders are tabulated for a-number one only")
    if not label.in_D:
        return "notInD"
    return "inD_F6" if label.t_in_f6 else "inD_notF6"


# ---------------------------------------------------------------------------
# quaternion class numbers
# ---------------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    return int(sympy.ntheory.residue_ntheory.jacobi_symbol(a, n)) if n % 2 else _kron2(a, n)


def _kron2(a: int, n: int) -> int:
    # n even: multiplicativity over the factor 2 with (a/2) as below
    out = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        out *= 1 if a % 8 in (1, 7) else -1
    if n == 1:
        return out
    return out * int(sympy.ntheory.residue_ntheory.jacobi_symbol(a, n))


@dataclass(frozen=True)
class ClassNumbers:
    h: int
    h_c4: Optional[int]
    h_c6: Optional[int]


def quaternion_class_numbers(p: int) -> ClassNumbers:
    """Class number of the definite quaternion algebra ramified at {p, oo},
    and for p >= 5 the counts of ideal classes with unit group C4 / C6."""
    if not sympy.isprime(p):
        raise BadC(f"p = {p} is not prime")
    h = Fraction(p - 1, 12)
    h += Fraction(1, 3) * (1 - kronecker(-3, p))
    h += Fraction(1, 4) * (1 - kronecker(-4, p))
    assert h.denominator == 1 and h >= 1
    if p < 5:
        return ClassNumbers(int(h), None, None)
    h4 = Fraction(1, 2) * (1 - kronecker(-4, p))
    h6 = Fraction(1, 2) * (1 - kronecker(-3, p))
    assert h4.denominator == 1 and h6.denominator == 1
    return ClassNumbers(int(h), int(h4), int(h6))


def lambda_x_size(p: int, d: int) -> int:
    """Class count over a generic point off the divisor, in the proved cases:
    p = 2 (d is 3), p = 3 with d = 6, and any p >= 5."""
    if p == 2:
        if d != 3:
            raise OutOfHypotheses("d is identically 3 at p = 2")
        return 4
    if p == 3:
        if d != 6:
            raise OutOfHypotheses("only the d = 6 case is covered at p = 3")
        return 3 ** 11 * 13
    if p < 5 or d not in (3, 4, 5, 6):
        raise OutOfHypotheses(f"no closed form for p = {p}, d = {d}")
    val = Fraction(
        p ** (3 + 2 * d) * (p ** 2 - 1) * (p ** 4 - 1) * (p ** 6 - 1), BASE_DEN
    )
    assert val.denominator == 1
    return int(val)


def p3_remark_discrepancy() -> Dict[str, object]:
    """The internal inconsistency at p = 3: the closed-form principal-genus
    mass is 13/72576, while the two-class count with unit groups of order
    2^7 * 3^4 would give 1/5184.  The closed form is treated as authoritative
    and the clash is reported, not resolved."""
    formula = mass_superspecial(3, 0, 3)
    remark = Fraction(1, 2 ** 6 * 3 ** 4)
    return {
        "formula_mass": formula,
        "remark_mass": remark,
        "consistent": formula == remark,
    }


def mass_table(p: int) -> List[dict]:
    """Frozen-order rows for the CLI: one per legal label."""
    rows = []
    for label in legal_labels(p):
        mass = mass_stratum_g3(p, label)
        L = stratum_L(p, label)
        assert L.denominator == 1
        rows.append(
            {
                "label": str(label),
                "a": label.a_number,
                "d": label.d if label.kind == A1 else None,
                "inD": label.in_D if label.kind == A1 else None,
                "L_p": int(L),
                "mass_num": mass.numerator,
                "mass_den": mass.denominator,
                "index": local_index_g3(p, label),
            }
        )
    return rows
