"""Degree census of the curve, the measured intersection with the
quadric-envelope locus, and two constructive witness points.

Counts are of geometric points.  A point of degree d lives in the field of
degree 2d and is counted there exactly once (its full Frobenius orbit
consists of d distinct geometric points, all enumerated).  The error term of
the closed-form intersection count is always *derived* as closed form minus
measured count, never computed from intersection multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy

from .curve import CurvePoint, on_curve
from .errors import GeneratorSearchFailed, SearchFailed, UnsupportedPrime
from .fields import (
    FieldCtx,
    FieldElem,
    frobenius,
    make_field,
    multiplicative_order,
    nth_roots,
    subfield_elements,
)
from .linalg import rank_over_subfield


def census_degrees(p: int, d_max: int, max_m: int = 12) -> Dict[int, int]:
    """Counts of geometric points of each exact degree up to d_max.

    Point counts per field come from full fibre enumeration; the exact-degree
    counts are the inclusion-exclusion over subfields, cross-checked against
    per-point degree computation.
    """
    from . import _kernels

    counts: Dict[int, int] = {}
    field_counts: Dict[int, int] = {}
    for d in range(1, d_max + 1):
        ctx = make_field(p, d, max_m=max_m)
        kt = ctx.tables()
        codes = _kernels.impl.curve_points(p, ctx.q, kt.zech)
        degs = _kernels.impl.point_degrees(p, ctx.q, ctx.m, codes)
        field_counts[d] = len(codes)
        exact = sum(1 for x in degs if x == d)
        counts[d] = exact
    # Moebius cross-check: |C_d| = sum_{e | d} mu(d/e) |C(F_{p^{2e}})|
    for d in range(1, d_max + 1):
        acc = 0
        for e in range(1, d + 1):
            if d % e == 0:
                acc += sympy.mobius(d // e) * field_counts[e]
        if acc != counts[d]:
            raise AssertionError(f"census inconsistency at degree {d}: {acc} != {counts[d]}")
    return counts


def census_rhs_closed_form(p: int) -> int:
    """The closed-form size of the intersection before subtracting the
    multiplicity error term."""
    return (
        p ** 11
        + 2 * p ** 8
        + 2 * p ** 6
        + 3 * p ** 5
        + p ** 4
        + 2 * p ** 3
        + p ** 2
        + 2 * p
        + 2
    )


@dataclass
class CensusResult:
    per_degree: Dict[int, int]
    per_degree_in_delta: Dict[int, int]
    count: int
    rhs_without_epsilon: int
    epsilon: int


def intersection_census(p: int) -> CensusResult:
    """Measured geometric size of the intersection of the curve with the
    quadric-envelope locus, for p = 2 (degrees up to 2(p+1) = 6 keep every
    working field small)."""
    if p != 2:
        raise UnsupportedPrime(
            "the full census needs fields up to degree 4(p+1); use census_degrees for partial data"
        )
    from . import _kernels

    d_top = 2 * (p + 1)
    per_degree: Dict[int, int] = {}
    per_in_delta: Dict[int, int] = {}
    for d in range(1, d_top + 1):
        ctx = make_field(p, d)
        kt = ctx.tables()
        codes = _kernels.impl.curve_points(p, ctx.q, kt.zech)
        degs = _kernels.impl.point_degrees(p, ctx.q, ctx.m, codes)
        exact = [c for c, dd in zip(codes, degs) if dd == d]
        per_degree[d] = len(exact)
        flags = _kernels.impl.in_delta_batch(p, ctx.q, kt.zech, exact)
        per_in_delta[d] = sum(1 for f in flags if f)
        if d <= 5 and per_in_delta[d] != per_degree[d]:
            raise AssertionError(
                f"degree-{d} points must all lie on the envelope locus"
            )
    count = sum(per_in_delta.values())
    rhs = census_rhs_closed_form(p)
    return CensusResult(per_degree, per_in_delta, count, rhs, rhs - count)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    point: CurvePoint
    conic: Tuple[FieldElem, ...]  # six coefficients over F_{p^2}
    degree: int
    checks: Dict[str, bool] = field(default_factory=dict)


def _conic_value(coeffs, t: CurvePoint) -> FieldElem:
    """a1 X1^2 + a2 X2^2 + a3 X3^2 + a4 X1X2 + a5 X1X3 + a6 X2X3 at t."""
    t1, t2, t3 = t.coords
    mono = [t1 * t1, t2 * t2, t3 * t3, t1 * t2, t1 * t3, t2 * t3]
    acc = t.ctx.zero()
    for c, m in zip(coeffs, mono):
        acc = acc + c * m
    return acc


def witness_degree_p_plus_1(p: int, max_m: int = 12) -> Witness:
    """A point of degree p+1 on the curve lying on an explicit conic.

    Recipe: a generator u1 of the multiplicative group of F_{p^2} with
    nonzero trace, u = u1 / (-trace), a (p+1)-th root alpha of u, the point
    (alpha : u/alpha : 1) and the conic X1 X2 = u X3^2.
    """
    if p not in (2, 3, 5):
        raise UnsupportedPrime("witness recipe wired up for p in {2, 3, 5}")
    ctx = make_field(p, p + 1, max_m=max_m)
    fp2 = ctx.fp2()
    target = p * p - 1
    u1 = None
    for e in fp2.elements:
        if e.is_zero():
            continue
        tr = frobenius(e, 1) + e
        if tr.is_zero():
            continue
        if multiplicative_order(e) == target:
            u1 = e
            break
    if u1 is None:
        raise GeneratorSearchFailed("no subfield generator with nonzero trace")
    minus_a = frobenius(u1, 1) + u1
    a = -minus_a
    u = a.inverse() * u1
    # trace of u is -1 by construction
    assert frobenius(u, 1) + u == -ctx.one()
    roots = nth_roots(u, p + 1)
    assert roots, "u must be a (p+1)-th power in the big field"
    alpha = roots[0]
    t = on_curve(ctx, (alpha, u * alpha.inverse(), ctx.one()))
    assert t is not None, "the recipe point must lie on the curve"
    zero = ctx.zero()
    conic = (zero, zero, -u, ctx.one(), zero, zero)  # X1 X2 - u X3^2
    checks = {
        "on_curve": True,
        "conic_vanishes": _conic_value(conic, t).is_zero(),
        "trace_minus_one": frobenius(u, 1) + u == -ctx.one(),
        "degree": t.degree == p + 1,
    }
    if not all(checks.values()):
        raise SearchFailed(f"witness checks failed: {checks}")
    return Witness(t, conic, t.degree, checks)


def _subfield_relation(values: List[FieldElem], ctx: FieldCtx) -> List[FieldElem]:
    """A nonzero F_{p^2}-relation among the given elements."""
    rank, relations = rank_over_subfield(values, ctx)
    if not relations:
        raise SearchFailed("expected a linear dependence over the subfield")
    return list(relations[0])


def witness_degree_2p_plus_2(p: int, max_m: int = 12) -> Witness:
    """A point of degree 2(p+1), the highest possible on the envelope locus,
    with a degenerate conic through it."""
    if p == 2:
        return _witness_akio_p2(max_m)
    if p == 3:
        return _witness_akio_odd(3, max_m)
    raise UnsupportedPrime("degree-2(p+1) witness wired up for p in {2, 3}")


def _witness_akio_p2(max_m: int) -> Witness:
    """p = 2: x = 1, y^3 a primitive fifth root of unity zeta, z^3 = 1+zeta;
    1 + zeta generates the multiplicative group of F_16, forcing degree 12
    over the prime field, i.e. degree 6 over F_4."""
    p = 2
    ctx = make_field(p, 6, max_m=max_m)
    one = ctx.one()
    # fifth roots of unity live in F_16 inside F_{2^12}
    fifth = [r for r in nth_roots(one, 5) if r != one]
    zeta = fifth[0]
    opz = one + zeta
    assert multiplicative_order(opz) == 15, "1+zeta must generate F_16^x"
    y = nth_roots(zeta, 3)[0]
    z = nth_roots(opz, 3)[0]
    t = on_curve(ctx, (one, y, z))
    assert t is not None
    # x, y lie in F_16: a relation a*x^2 + b*x*y + c*y^2 = 0 over F_4
    rel = _subfield_relation([one, y, y * y], ctx)
    zero = ctx.zero()
    conic = (rel[0], rel[2], zero, rel[1], zero, zero)
    checks = {
        "on_curve": True,
        "conic_vanishes": _conic_value(conic, t).is_zero(),
        "opz_generates": multiplicative_order(opz) == 15,
        "degree": t.degree == 2 * (p + 1),
    }
    if not all(checks.values()):
        raise SearchFailed(f"witness checks failed: {checks}")
    return Witness(t, conic, t.degree, checks)


def _witness_akio_odd(p: int, max_m: int) -> Witness:
    """Odd p: search eta + zeta = xi with eta a (p+1)-power from the degree-4
    subfield (not the degree-2 one), zeta a (p+1)-power from the degree-2
    subfield, and xi generating the quotient modulo 2(p+1)-th powers; the
    coordinates are then (p+1)-th roots, with the first of degree 2(p+1)."""
    ctx = make_field(p, 2 * (p + 1), max_m=max_m)
    n = p + 1
    f4 = subfield_elements(ctx, 4)
    f2 = list(ctx.fp2().elements)
    f2_set = set(f2)
    q4 = p ** 4 - 1

    def f_generates(xi: FieldElem) -> bool:
        # xi generates F_{p^4}^x modulo 2(p+1)-th powers iff xi^(q4/ell) is a
        # nontrivial class for each prime ell | 2(p+1): cyclic quotient order
        # 2(p+1), so check xi^(q4 / ell * ...) equivalently below
        order = 2 * (p + 1)
        for ell in sorted(sympy.factorint(order)):
            if (xi ** (q4 // ell)) == ctx.one():
                return False
        return True

    z_set = []
    for z in f2:
        if not z.is_zero():
            z_set.append(z ** n)
    z_set = sorted(set(z_set), key=lambda e: e.packed())
    y_set = []
    for y in f4:
        if not y.is_zero() and y not in f2_set:
            y_set.append(y ** n)
    y_set = sorted(set(y_set), key=lambda e: e.packed())
    found = None
    for eta in y_set:
        for zeta in z_set:
            xi = eta + zeta
            if xi.is_zero():
                continue
            if f_generates(xi):
                found = (eta, zeta, xi)
                break
        if found:
            break
    if found is None:
        raise SearchFailed("counting guarantees a solution eta + zeta = xi")
    eta, zeta, xi = found
    y = nth_roots(eta, n)[0]
    z = nth_roots(zeta, n)[0]
    x = nth_roots(-xi, n)[0]
    t = on_curve(ctx, (x, y, z))
    assert t is not None
    # y/z has degree two over the subfield: a monic quadratic relation
    w = y * z.inverse()
    rel = _subfield_relation([w * w, w, ctx.one()], ctx)
    zero = ctx.zero()
    conic = (zero, rel[0], rel[2], zero, zero, rel[1])
    checks = {
        "on_curve": True,
        "conic_vanishes": _conic_value(conic, t).is_zero(),
        "degree": t.degree == 2 * (p + 1),
    }
    if not all(checks.values()):
        raise SearchFailed(f"witness checks failed: {checks}")
    return Witness(t, conic, t.degree, checks)
