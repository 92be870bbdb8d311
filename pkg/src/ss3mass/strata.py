"""The stratification apparatus: the coordinate frame of a curve point, the
distinguished linear functional on symmetric matrices, the rank invariant d,
the quadric-envelope locus, divisor membership, and the full classifier.

Conventions.  A fibre coordinate u = (u1 : u2) is normalised to u1 = 1 off
the distinguished section and to (0, 1) on it.  For a point t off the
degree-one locus all three coordinates are nonzero and the representative
with t3 = 1 is used whenever an affine normalisation is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .curve import CurvePoint
from .errors import NotInC0, NotSymmetric, OnSectionT, SingularT, ZeroVector
from .fields import FieldElem, element_degree, frobenius
from .labels import A1, A2_F4, A2_GEN, A3, StratumLabel
from .linalg import Mat, det_and_inverse, rank_over_subfield, subfield_linear_solve


class StratumPoint:
    """A pair (t, u): curve point plus normalised fibre coordinate."""

    __slots__ = ("t", "u")

    def __init__(self, t: CurvePoint, u: Tuple[FieldElem, FieldElem]):
        u1, u2 = u
        if u1.is_zero() and u2.is_zero():
            raise ZeroVector("fibre coordinate must be nonzero")
        if u1.is_zero():
            u = (u1.ctx.zero(), u1.ctx.one())
        else:
            inv = u1.inverse()
            u = (u1.ctx.one(), u2 * inv)
        self.t = t
        self.u = u

    @property
    def on_section(self) -> bool:
        return self.u[0].is_zero()

    def ratio(self) -> FieldElem:
        """u2/u1 for points off the section."""
        if self.on_section:
            raise OnSectionT("the section has no affine fibre coordinate")
        return self.u[1]

    def to_dict(self) -> dict:
        return {"t": self.t.to_dict(), "u": [c.to_dict() for c in self.u]}


def t_matrix(t: CurvePoint) -> Mat:
    """Columns t, t^(p), t^(p^-1); invertible off the degree-one locus."""
    if t.degree == 1:
        raise SingularT("the frame matrix of a degree-one point is singular")
    rows = []
    for r in range(3):
        c = t.coords[r]
        rows.append([c, frobenius(c, 1), frobenius(c, -1)])
    return Mat.from_rows(rows)


def _frame_row(t: CurvePoint) -> Tuple[FieldElem, ...]:
    """First row of the inverse frame matrix."""
    frame = t_matrix(t)
    det, inv = det_and_inverse(frame)
    if inv is None:
        raise SingularT("frame matrix unexpectedly singular")
    return inv.row(0)


def psi_t(t: CurvePoint, s: Mat) -> FieldElem:
    """The (1,1) entry of frame^-1 * S * frame for a symmetric S over F_{p^2}."""
    if not s.is_symmetric():
        raise NotSymmetric("S must be symmetric")
    for e in s.entries:
        if frobenius(e, 2) != e:
            raise NotSymmetric("S must have entries in F_{p^2}")
    r1 = _frame_row(t)
    tv = t.coords
    acc = t.ctx.zero()
    for i in range(3):
        for j in range(3):
            acc = acc + r1[i] * s[i, j] * tv[j]
    return acc


def psi_of_matrix(t: CurvePoint, m: Mat) -> FieldElem:
    """The (1,1) entry of frame^-1 * M * frame for an arbitrary 3x3 M."""
    r1 = _frame_row(t)
    tv = t.coords
    acc = t.ctx.zero()
    for i in range(3):
        for j in range(3):
            acc = acc + r1[i] * m[i, j] * tv[j]
    return acc


def sym_basis(ctx) -> List[Mat]:
    """Canonical basis of the symmetric 3x3 matrices over F_{p^2}:
    diagonal units first, then the three symmetrised off-diagonal units."""
    one, zero = ctx.one(), ctx.zero()

    def make(positions):
        ent = [zero] * 9
        for (i, j) in positions:
            ent[3 * i + j] = one
        return Mat(ctx, 3, 3, ent)

    return [
        make([(0, 0)]),
        make([(1, 1)]),
        make([(2, 2)]),
        make([(0, 1), (1, 0)]),
        make([(0, 2), (2, 0)]),
        make([(1, 2), (2, 1)]),
    ]


def psi_images(t: CurvePoint) -> List[FieldElem]:
    """Images w1..w6 of the canonical symmetric basis under psi_t."""
    if t.degree == 1:
        raise NotInC0("psi is only defined off the degree-one locus")
    r1 = _frame_row(t)
    tv = t.coords

    def entry(i, j):
        return r1[i] * tv[j]

    return [
        entry(0, 0),
        entry(1, 1),
        entry(2, 2),
        entry(0, 1) + entry(1, 0),
        entry(0, 2) + entry(2, 0),
        entry(1, 2) + entry(2, 1),
    ]


@dataclass(frozen=True)
class DInvariant:
    """The rank invariant: d is the span dimension of the psi images; d_span
    is the dimension of the quadratic-monomial span (these agree for p != 2,
    while at p = 2 d is identically three)."""

    d: int
    d_span: int


def d_span(t: CurvePoint) -> int:
    """Dimension over F_{p^2} of the span of the quadratic monomials in the
    coordinates of t (with its projective normalisation)."""
    t1, t2, t3 = t.coords
    vecs = [t1 * t1, t2 * t2, t3 * t3, t1 * t2, t1 * t3, t2 * t3]
    rank, _ = rank_over_subfield(vecs, t.ctx)
    return rank


def d_invariant(t: CurvePoint) -> DInvariant:
    if t.degree == 1:
        raise NotInC0("d is only defined off the degree-one locus")
    images = psi_images(t)
    rank_a, _ = rank_over_subfield(images, t.ctx)
    span = d_span(t)
    if t.ctx.p != 2 and rank_a != span:
        raise AssertionError(
            f"rank methods disagree at p != 2: {rank_a} vs {span}"
        )
    if t.ctx.p == 2 and rank_a != 3:
        raise AssertionError(f"psi rank must be 3 at p = 2, got {rank_a}")
    return DInvariant(rank_a, span)


def in_delta(t: CurvePoint) -> bool:
    """Whether the 6x6 matrix whose columns are the quadratic-monomial vector
    twisted by the even Frobenius powers is singular (equivalently, whether
    the monomials are dependent over F_{p^2})."""
    t1, t2, t3 = t.coords
    v = [t1 * t1, t2 * t2, t3 * t3, t1 * t2, t1 * t3, t2 * t3]
    rows = []
    for i in range(6):
        rows.append([frobenius(v[i], 2 * k) for k in range(6)])
    det, _ = det_and_inverse(Mat.from_rows(rows))
    return det.is_zero()


def psi_kernel_basis(t: CurvePoint) -> List[Mat]:
    """Basis of the symmetric matrices with psi_t(S) = 0."""
    images = psi_images(t)
    ctx = t.ctx
    particular, null = subfield_linear_solve(images, ctx.zero(), ctx)
    assert particular is not None
    basis = sym_basis(ctx)
    out = []
    for vec in null:
        acc = Mat.zero(ctx, 3, 3)
        for c, b in zip(vec, basis):
            acc = acc + b * c
        out.append(acc)
    return out


def solve_psi_preimage(t: CurvePoint, value: FieldElem) -> Optional[Mat]:
    """Some symmetric S with psi_t(S) = value, or None.

    The solution is not unique (any kernel element may be added); the returned
    representative is the one produced by echelon back-substitution.
    """
    images = psi_images(t)
    ctx = t.ctx
    particular, _ = subfield_linear_solve(images, value, ctx)
    if particular is None:
        return None
    basis = sym_basis(ctx)
    acc = Mat.zero(ctx, 3, 3)
    for c, b in zip(particular, basis):
        acc = acc + b * c
    return acc


def in_divisor_D(x: StratumPoint) -> bool:
    """Whether u2/u1 lies in the span of the psi images."""
    if x.on_section:
        raise OnSectionT("divisor membership is defined off the section")
    if x.t.degree == 1:
        raise NotInC0("divisor membership needs t off the degree-one locus")
    images = psi_images(x.t)
    base_rank, _ = rank_over_subfield(images, x.t.ctx)
    ext_rank, _ = rank_over_subfield(images + [x.ratio()], x.t.ctx)
    return ext_rank == base_rank


def classify_stratum(x: StratumPoint) -> StratumLabel:
    """Total classifier: every valid pair receives exactly one label."""
    p = x.t.ctx.p
    if x.on_section:
        return StratumLabel(A3).validate(p)
    if x.t.degree == 1:
        udeg = element_degree(x.ratio())
        if udeg == 1:
            return StratumLabel(A3).validate(p)
        if udeg == 2:
            return StratumLabel(A2_F4).validate(p)
        return StratumLabel(A2_GEN).validate(p)
    inv = d_invariant(x.t)
    inD = in_divisor_D(x)
    t_f6 = x.t.degree == 3
    if p == 2:
        label = StratumLabel(A1, d=3, in_D=inD, t_in_f6=t_f6 and inD)
    else:
        label = StratumLabel(A1, d=inv.d, in_D=inD, t_in_f6=(inv.d == 3))
    return label.validate(p)
