"""The degree p+1 plane curve X1^(p+1) + X2^(p+1) + X3^(p+1) = 0.

Membership, fibre-wise point enumeration over F_{p^{2i}}, closed-form point
counts, the subfield-rationality criterion, the commutant algebra End(t) of a
point, its unitary part, and the finite unitary group U3(F_p).

Point enumeration never scans the projective plane: fibres over the first
coordinate are resolved through (p+1)-th roots, which in the table-backed
fields amounts to solving a congruence on exponents.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    AllZero,
    CrossCheckFailure,
    DegreeOverflow,
    NotInC0,
    TooLarge,
)
from .fields import (
    DEFAULT_MAX_M,
    FieldCtx,
    FieldElem,
    element_degree,
    frobenius,
    make_field,
    nth_roots,
)
from .linalg import Mat, det_and_inverse, rank_over_subfield, solve_parallel_condition


class CurvePoint:
    """Projective point with the last nonzero coordinate normalised to one."""

    __slots__ = ("ctx", "coords", "degree")

    def __init__(self, ctx: FieldCtx, coords: Tuple[FieldElem, FieldElem, FieldElem], degree: int):
        self.ctx = ctx
        self.coords = coords
        self.degree = degree

    def __eq__(self, other):
        return isinstance(other, CurvePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"CurvePoint({[list(c.coeffs) for c in self.coords]}, deg={self.degree})"

    def to_dict(self) -> dict:
        return {"coords": [c.to_dict() for c in self.coords], "degree": self.degree}


def _normalise(coords: Sequence[FieldElem]) -> Tuple[FieldElem, FieldElem, FieldElem]:
    for idx in (2, 1, 0):
        if not coords[idx].is_zero():
            inv = coords[idx].inverse()
            return tuple(c * inv for c in coords)  # type: ignore[return-value]
    raise AllZero("projective coordinates must not all vanish")


def _point_degree(coords: Sequence[FieldElem]) -> int:
    m = coords[0].ctx.m
    for d in range(1, m + 1):
        if m % d:
            continue
        if all(frobenius(c, 2 * d) == c for c in coords):
            return d
    raise AssertionError("frobenius orbit must close")


def on_curve(ctx: FieldCtx, coords: Sequence[FieldElem]) -> Optional[CurvePoint]:
    """Normalised point when the defining equation holds, else None."""
    norm = _normalise(coords)
    n = ctx.p + 1
    total = norm[0] ** n + norm[1] ** n + norm[2] ** n
    if not total.is_zero():
        return None
    return CurvePoint(ctx, norm, _point_degree(norm))


def count_points_closed_form(p: int, i: int) -> int:
    """Number of points over F_{p^{2i}} (alternating maximal/minimal counts)."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if i % 2:
        return p ** (2 * i) + p ** (i + 2) - p ** (i + 1) + 1
    return p ** (2 * i) - p ** (i + 2) + p ** (i + 1) + 1


def enumerate_points(p: int, i: int, ctx: Optional[FieldCtx] = None,
                     max_m: int = DEFAULT_MAX_M) -> List[CurvePoint]:
    """Complete duplicate-free list of points over F_{p^{2i}}."""
    if ctx is None:
        ctx = make_field(p, i, max_m=max_m)
    elif ctx.m != i:
        raise DegreeOverflow("context degree must match the requested field")
    codes, degrees = _points_with_degrees(ctx)
    kt = ctx.tables()
    out = []
    for (c1, c2, c3), d in zip(codes, degrees):
        coords = (kt.decode(c1), kt.decode(c2), kt.decode(c3))
        out.append(CurvePoint(ctx, coords, d))
    return out


def _points_with_degrees(ctx: FieldCtx):
    from . import _kernels

    kt = ctx.tables()
    codes = _kernels.impl.curve_points(ctx.p, ctx.q, kt.zech)
    degrees = _kernels.impl.point_degrees(ctx.p, ctx.q, ctx.m, codes)
    return codes, degrees


def is_fp2_point(t: CurvePoint) -> bool:
    """Degree-one test, cross-checked against coordinate dependence over
    F_{p^2}: the two criteria agreeing is a theorem, so disagreement raises."""
    by_degree = t.degree == 1
    rank, _ = rank_over_subfield(list(t.coords), t.ctx)
    by_rank = rank < 3
    if by_degree != by_rank:
        raise CrossCheckFailure(
            f"degree criterion ({by_degree}) and rank criterion ({by_rank}) disagree"
        )
    return by_degree


@dataclass(frozen=True)
class EndAlgebra:
    """The matrices over F_{p^2} preserving the line through t."""

    dimension: int
    basis: Tuple[Mat, ...]


def end_t(t: CurvePoint) -> EndAlgebra:
    """Commutant algebra of a point outside the degree-one locus.

    Its dimension over F_{p^2} is 3 exactly on degree-three points and 1
    otherwise; degree-two points do not exist on this curve.
    """
    if t.degree == 1:
        raise NotInC0("End(t) is only considered off the degree-one locus")
    assert t.degree != 2, "degree-two points cannot lie on the curve"
    basis = solve_parallel_condition(list(t.coords))
    dim = len(basis)
    expected = 3 if t.degree == 3 else 1
    if dim != expected:
        raise CrossCheckFailure(f"End(t) dimension {dim}, expected {expected}")
    return EndAlgebra(dim, tuple(basis))


def end_t_unitary(t: CurvePoint) -> List[Tuple[Mat, FieldElem]]:
    """End(t) intersected with the unitary group, with eigenvalues.

    Scalars with norm one in the degree != 3 case; in the degree-three case
    the matrices diagonalised by the Frobenius-conjugate frame of t, indexed
    by the norm-one elements of the degree-three subfield.
    """
    if t.degree == 1:
        raise NotInC0("unitary commutant only considered off the degree-one locus")
    ctx = t.ctx
    one = ctx.one()
    out: List[Tuple[Mat, FieldElem]] = []
    if t.degree != 3:
        roots = nth_roots(one, ctx.p + 1)
        for alpha in roots:
            mat = Mat.identity(ctx, 3) * alpha
            out.append((mat, alpha))
        return out
    frame = Mat.from_rows(
        [
            [t.coords[r], frobenius(t.coords[r], 2), frobenius(t.coords[r], 4)]
            for r in range(3)
        ]
    )
    _, frame_inv = det_and_inverse(frame)
    assert frame_inv is not None
    zero = ctx.zero()
    for alpha in nth_roots(one, ctx.p ** 3 + 1):
        diag = Mat(
            ctx,
            3,
            3,
            [
                alpha if (i == j == 0) else
                frobenius(alpha, 2) if (i == j == 1) else
                frobenius(alpha, 4) if (i == j == 2) else zero
                for i in range(3)
                for j in range(3)
            ],
        )
        mat = frame * diag * frame_inv
        out.append((mat, alpha))
    for mat, alpha in out:
        applied = mat.apply(list(t.coords))
        assert all(v == alpha * c for v, c in zip(applied, t.coords))
        assert all(frobenius(e, 2) == e for e in mat.entries)
        assert mat * mat.frobenius(1).transpose() == Mat.identity(ctx, 3)
    return out


# ---------------------------------------------------------------------------
# the finite unitary group
# ---------------------------------------------------------------------------

def unitary_order(p: int) -> int:
    return p ** 3 * (p + 1) * (p ** 2 - 1) * (p ** 3 + 1)


class UnitaryGroup:
    """All 3x3 matrices A over F_{p^2} with A * conj(A)^T = I."""

    def __init__(self, p: int, ctx: FieldCtx, codes: List[Tuple[int, ...]]):
        self.p = p
        self.ctx = ctx
        self.codes = codes
        self.code_set = frozenset(codes)
        self.order = len(codes)
        self._mats: Optional[List[Mat]] = None

    @property
    def elements(self) -> List[Mat]:
        if self._mats is None:
            kt = self.ctx.tables()
            self._mats = [
                Mat(self.ctx, 3, 3, [kt.decode(c) for c in code9]) for code9 in self.codes
            ]
        return self._mats

    def contains_codes(self, code9: Tuple[int, ...]) -> bool:
        return code9 in self.code_set

    def contains(self, mat: Mat) -> bool:
        kt = self.ctx.tables()
        return tuple(kt.encode(e) for e in mat.entries) in self.code_set


def unitary_group(p: int, ctx: Optional[FieldCtx] = None) -> UnitaryGroup:
    """Complete enumeration of U3(F_p) for p in {2, 3}.

    Rows are built norm-one vector by norm-one vector through orthogonal
    completion of the Hermitian form, never by filtering all of Mat3.
    Construction verifies the order against the closed form, inverse
    membership for every element, and closure on a deterministic sample.
    """
    if p not in (2, 3):
        raise TooLarge("full unitary enumeration is supported for p in {2, 3}")
    if ctx is None:
        ctx = make_field(p, 1)
    kt = ctx.tables()
    sub = kt.subfield_codes()
    sub_nonzero = [c for c in sub if c]

    def conj(c):
        return kt.frob(c, 1)

    def hnorm(v):
        acc = 0
        for c in v:
            acc = kt.add(acc, kt.mul(c, conj(c)))
        return acc

    def hdot(x, w):
        # sum x_k * w_k with w already conjugated
        acc = 0
        for xk, wk in zip(x, w):
            acc = kt.add(acc, kt.mul(xk, wk))
        return acc

    one = 1
    norm_one = []
    for a in sub:
        for b in sub:
            for c in sub:
                if hnorm((a, b, c)) == one:
                    norm_one.append((a, b, c))

    def pplus1_roots(target):
        # lambda with lambda^(p+1) = target, inside the subfield
        return [c for c in sub_nonzero if kt.powi(c, p + 1) == target]

    codes: List[Tuple[int, ...]] = []
    for v1 in norm_one:
        w1 = tuple(conj(c) for c in v1)
        i0 = next(i for i in range(3) if w1[i])
        basis = []
        for j in range(3):
            if j == i0:
                continue
            vec = [0, 0, 0]
            vec[j] = one
            vec[i0] = kt.neg(kt.mul(w1[j], kt.inv(w1[i0])))
            basis.append(tuple(vec))
        for a in sub:
            for b in sub:
                if a == 0 and b == 0:
                    continue
                v2 = tuple(
                    kt.add(kt.mul(a, basis[0][i]), kt.mul(b, basis[1][i])) for i in range(3)
                )
                if hnorm(v2) != one:
                    continue
                w2 = tuple(conj(c) for c in v2)
                cr = (
                    kt.sub(kt.mul(w1[1], w2[2]), kt.mul(w1[2], w2[1])),
                    kt.sub(kt.mul(w1[2], w2[0]), kt.mul(w1[0], w2[2])),
                    kt.sub(kt.mul(w1[0], w2[1]), kt.mul(w1[1], w2[0])),
                )
                target = kt.inv(hnorm(cr))
                for lam in pplus1_roots(target):
                    v3 = tuple(kt.mul(lam, c) for c in cr)
                    codes.append(v1 + v2 + v3)

    group = UnitaryGroup(p, ctx, codes)
    expected = unitary_order(p)
    if group.order != expected:
        raise CrossCheckFailure(f"|U3(F_{p})| = {group.order}, closed form {expected}")
    # inverse of a unitary matrix is conj(A)^T: full membership check
    for code9 in codes:
        inv9 = tuple(conj(code9[3 * j + i]) for i in range(3) for j in range(3))
        if inv9 not in group.code_set:
            raise CrossCheckFailure("unitary group not closed under inverse")
    rng = random.Random(0x5533)
    for _ in range(1000):
        x = codes[rng.randrange(len(codes))]
        y = codes[rng.randrange(len(codes))]
        prod = _matmul_codes(kt, x, y)
        if prod not in group.code_set:
            raise CrossCheckFailure("unitary group not closed under a sampled product")
    return group


def _matmul_codes(kt, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for i in range(3):
        for j in range(3):
            acc = 0
            for k in range(3):
                acc = kt.add(acc, kt.mul(x[3 * i + k], y[3 * k + j]))
            out.append(acc)
    return tuple(out)


def count_by_degree(points: Sequence[CurvePoint]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for pt in points:
        out[pt.degree] = out.get(pt.degree, 0) + 1
    return out
