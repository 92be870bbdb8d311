"""Definite rational quaternion orders at p = 2 and 3, their unit groups, the
integral Hermitian matrix groups U(n, O), the mod-p reduction onto the
Pi-matrix algebra, and the automorphism groups of polarised threefolds cut
out through that reduction.

U(3, O) elements are stored compactly as (permutation, unit-index triple):
every Hermitian-unitary matrix over a definite order is a monomial matrix
with unit entries, so diag(u) * P_sigma is a faithful and fast encoding.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curve import CurvePoint
from .errors import (
    CrossCheckFailure,
    SearchExhausted,
    UnsupportedPrime,
    WrongANumber,
)
from .fields import FieldCtx, FieldElem, frobenius, multiplicative_order
from .groups import FiniteGroup, PiMatrix, action_on_m2_mod_p, enumerate_G_M, group_type
from .linalg import Mat
from .strata import StratumPoint


class Quat:
    """Element of the quaternion algebra (-1, -beta | Q) with exact rational
    coordinates over 1, i, j, k (beta = 1 at p = 2, beta = 3 at p = 3)."""

    __slots__ = ("beta", "co")

    def __init__(self, beta: int, co: Tuple[Fraction, Fraction, Fraction, Fraction]):
        self.beta = beta
        self.co = co

    @classmethod
    def of(cls, beta, a, b=0, c=0, d=0):
        return cls(beta, (Fraction(a), Fraction(b), Fraction(c), Fraction(d)))

    def __eq__(self, other):
        return isinstance(other, Quat) and self.beta == other.beta and self.co == other.co

    def __hash__(self):
        return hash((self.beta, self.co))

    def __repr__(self):
        return f"Quat{self.co}"

    def __add__(self, other):
        return Quat(self.beta, tuple(a + b for a, b in zip(self.co, other.co)))

    def __sub__(self, other):
        return Quat(self.beta, tuple(a - b for a, b in zip(self.co, other.co)))

    def __neg__(self):
        return Quat(self.beta, tuple(-a for a in self.co))

    def __mul__(self, other):
        b = self.beta
        a1, b1, c1, d1 = self.co
        a2, b2, c2, d2 = other.co
        return Quat(
            b,
            (
                a1 * a2 - b1 * b2 - b * c1 * c2 - b * d1 * d2,
                a1 * b2 + b1 * a2 + b * c1 * d2 - b * d1 * c2,
                a1 * c2 + c1 * a2 + d1 * b2 - b1 * d2,
                a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
            ),
        )

    def conj(self) -> "Quat":
        a, b, c, d = self.co
        return Quat(self.beta, (a, -b, -c, -d))

    def norm(self) -> Fraction:
        a, b, c, d = self.co
        return a * a + b * b + self.beta * (c * c + d * d)

    def trace(self) -> Fraction:
        return 2 * self.co[0]


@dataclass(frozen=True)
class QuaternionOrder:
    """A maximal order given by an explicit basis over the integers."""

    p: int
    beta: int
    basis: Tuple[Quat, Quat, Quat, Quat]

    def element(self, coords: Sequence[int]) -> Quat:
        acc = Quat.of(self.beta, 0)
        for c, b in zip(coords, self.basis):
            acc = acc + Quat(self.beta, tuple(Fraction(c) * x for x in b.co))
        return acc

    def coords(self, x: Quat) -> Optional[Tuple[int, int, int, int]]:
        """Integer basis coordinates, or None when x is outside the order."""
        cols = [b.co for b in self.basis]
        # solve 4x4 rational system
        mat = [[cols[j][i] for j in range(4)] + [x.co[i]] for i in range(4)]
        for col in range(4):
            piv = next(r for r in range(col, 4) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            inv = 1 / mat[col][col]
            mat[col] = [v * inv for v in mat[col]]
            for r in range(4):
                if r != col and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [vr - f * vc for vr, vc in zip(mat[r], mat[col])]
        sol = [mat[i][4] for i in range(4)]
        if any(s.denominator != 1 for s in sol):
            return None
        return tuple(int(s) for s in sol)  # type: ignore[return-value]


def maximal_order(p: int) -> QuaternionOrder:
    """The standard maximal order at p = 2 (Hurwitz) or p = 3."""
    if p == 2:
        beta = 1
        basis = (
            Quat.of(beta, 1),
            Quat.of(beta, 0, 1),
            Quat.of(beta, 0, 0, 1),
            Quat(beta, (Fraction(1, 2),) * 4),
        )
    elif p == 3:
        beta = 3
        basis = (
            Quat.of(beta, 1),
            Quat.of(beta, 0, 1),
            Quat(beta, (Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0))),
            Quat(beta, (Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1, 2))),
        )
    else:
        raise UnsupportedPrime("explicit maximal orders are fixed for p in {2, 3}")
    return QuaternionOrder(p, beta, basis)


def quaternion_unit_group(p: int) -> FiniteGroup:
    """The unit group of the maximal order, by scanning basis coordinates
    with numerators bounded by 2 and keeping reduced norm one."""
    order = maximal_order(p)
    units = []
    for coords in itertools.product(range(-2, 3), repeat=4):
        x = order.element(coords)
        if x.norm() == 1:
            units.append(x)
    ident = Quat.of(order.beta, 1)
    return FiniteGroup(units, lambda a, b: a * b, ident, name=f"O^x(p={p})")


# ---------------------------------------------------------------------------
# U(n, O) as permutation-with-units matrices
# ---------------------------------------------------------------------------

_S3 = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def _perm_mul(s, t):
    # (s*t)(j) = s(t(j))
    return tuple(s[t[j]] for j in range(3))


def _perm_inv(s):
    out = [0, 0, 0]
    for j in range(3):
        out[s[j]] = j
    return tuple(out)


class UnO:
    """U(n, O) for n = 3: monomial matrices diag(u) P_sigma with unit
    entries.  Elements are (sigma, (i1, i2, i3)) with unit indices into the
    unit group's canonical list."""

    def __init__(self, p: int, n: int = 3):
        if n != 3:
            raise UnsupportedPrime("only n = 3 is wired up")
        self.p = p
        self.order_obj = maximal_order(p)
        self.unit_group = quaternion_unit_group(p)
        self.units: List[Quat] = list(self.unit_group.elements)
        index = {u: i for i, u in enumerate(self.units)}
        nu = len(self.units)
        self.mul_table = [
            [index[self.units[a] * self.units[b]] for b in range(nu)] for a in range(nu)
        ]
        self.inv_table = [index[self._unit_inv(u)] for u in self.units]
        self.one_index = index[Quat.of(self.order_obj.beta, 1)]
        self.elements: List[Tuple[tuple, tuple]] = [
            (sigma, triple)
            for sigma in _S3
            for triple in itertools.product(range(nu), repeat=3)
        ]
        self.order = len(self.elements)

    def _unit_inv(self, u: Quat) -> Quat:
        c = u.conj()
        assert u * c == Quat.of(self.order_obj.beta, 1)
        return c

    def mul(self, g, h):
        sg, ug = g
        sh, uh = h
        # diag(ug) P_sg diag(uh) P_sh = diag(ug * sg(uh)) P_{sg*sh}
        sg_inv = _perm_inv(sg)
        mixed = tuple(self.mul_table[ug[i]][uh[sg_inv[i]]] for i in range(3))
        return (_perm_mul(sg, sh), mixed)

    def identity(self):
        return ((0, 1, 2), (self.one_index,) * 3)

    def inverse(self, g):
        s, u = g
        sinv = _perm_inv(s)
        return (sinv, tuple(self.inv_table[u[s[j]]] for j in range(3)))

    def matrix(self, g) -> List[List[Quat]]:
        s, u = g
        zero = Quat.of(self.order_obj.beta, 0)
        out = [[zero] * 3 for _ in range(3)]
        for j in range(3):
            out[s[j]][j] = self.units[u[s[j]]]
        return out

    def check_hermitian(self, g) -> bool:
        m = self.matrix(g)
        one = Quat.of(self.order_obj.beta, 1)
        zero = Quat.of(self.order_obj.beta, 0)
        for i in range(3):
            for j in range(3):
                acc = zero
                for k in range(3):
                    acc = acc + m[i][k] * m[j][k].conj()
                if acc != (one if i == j else zero):
                    return False
        return True

    def as_finite_group(self) -> FiniteGroup:
        return FiniteGroup(self.elements, self.mul, self.identity(), name=f"U(3,O_{self.p})")


# ---------------------------------------------------------------------------
# reduction mod p into the Pi-matrix algebra
# ---------------------------------------------------------------------------

class OModP:
    """The finite algebra O/pO with its structure constants mod p."""

    def __init__(self, order: QuaternionOrder):
        self.order = order
        self.p = order.p
        # structure constants: basis_i * basis_j in basis coordinates
        self.table = []
        for bi in order.basis:
            row = []
            for bj in order.basis:
                co = order.coords(bi * bj)
                assert co is not None, "order not closed under multiplication"
                row.append(co)
            self.table.append(row)
        self.conj_map = []
        for bi in order.basis:
            co = order.coords(bi.conj())
            assert co is not None, "order not stable under conjugation"
            self.conj_map.append(co)

    def mul(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        p = self.p
        out = [0, 0, 0, 0]
        for i in range(4):
            if x[i]:
                for j in range(4):
                    if y[j]:
                        cij = self.table[i][j]
                        f = x[i] * y[j]
                        for k in range(4):
                            out[k] += f * cij[k]
        return tuple(v % p for v in out)

    def conj(self, x: Tuple[int, ...]) -> Tuple[int, ...]:
        p = self.p
        out = [0, 0, 0, 0]
        for i in range(4):
            if x[i]:
                for k in range(4):
                    out[k] += x[i] * self.conj_map[i][k]
        return tuple(v % p for v in out)

    def power(self, x, e):
        out = (1, 0, 0, 0)
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def all_elements(self):
        return itertools.product(range(self.p), repeat=4)


class ReductionMap:
    """The isomorphism O/pO -> F_{p^2}[Pi]/(Pi^2) realised inside a context.

    Found by exhaustive search for a pair (omega, pi) with omega of
    multiplicative order p^2 - 1, pi squaring to zero and twisting omega by
    Frobenius; ties broken by the canonical coordinate ordering.
    """

    def __init__(self, p: int, ctx: FieldCtx):
        self.p = p
        self.ctx = ctx
        self.order = maximal_order(p)
        self.omodp = OModP(self.order)
        omega = None
        for cand in self.omodp.all_elements():
            if cand[0] == 1 and all(c == 0 for c in cand[1:]):
                continue
            if self._mult_order(cand) == p * p - 1:
                omega = cand
                break
        if omega is None:
            raise SearchExhausted("no element of order p^2 - 1 in O/pO")
        omega_p = self.omodp.power(omega, p)
        pi = None
        for cand in self.omodp.all_elements():
            if all(c == 0 for c in cand):
                continue
            if any(self.omodp.mul(cand, cand)):
                continue
            if self.omodp.mul(cand, omega) != self.omodp.mul(omega_p, cand):
                continue
            pi = cand
            break
        if pi is None:
            raise SearchExhausted("no nilpotent uniformiser image in O/pO")
        self.omega = omega
        self.pi = pi
        # basis 1, omega, pi, omega*pi of O/pO over F_p
        one = (1, 0, 0, 0)
        basis = [one, omega, pi, self.omodp.mul(omega, pi)]
        self._basis_inv = _fp_inverse([[basis[j][i] for j in range(4)] for i in range(4)], p)
        if self._basis_inv is None:
            raise SearchExhausted("(1, omega, pi, omega*pi) is not a basis")
        # minimal polynomial of omega over F_p: omega^2 = c1*omega + c0
        om2 = self.omodp.mul(omega, omega)
        co = self._decompose(om2)
        if co[2] or co[3]:
            raise SearchExhausted("omega does not generate a quadratic subring")
        c0, c1 = co[0], co[1]
        # canonical root of X^2 - c1 X - c0 inside the context's subfield
        fp2 = ctx.fp2()
        root = None
        for e in fp2.elements:
            if e * e - ctx.scalar(c1) * e - ctx.scalar(c0) == ctx.zero():
                root = e
                break
        if root is None:
            raise SearchExhausted("no subfield root for the quadratic of omega")
        self.omega_image = root

    def _mult_order(self, x) -> int:
        if not any(x):
            return 0
        cur = x
        one = (1, 0, 0, 0)
        for k in range(1, self.p ** 4):
            if cur == one:
                return k
            cur = self.omodp.mul(cur, x)
        return 0

    def _decompose(self, x) -> Tuple[int, int, int, int]:
        p = self.p
        return tuple(
            sum(self._basis_inv[i][j] * x[j] for j in range(4)) % p for i in range(4)
        )  # type: ignore[return-value]

    def scalar_pair(self, x: Tuple[int, ...]) -> Tuple[FieldElem, FieldElem]:
        """x = a + b*Pi with a, b in F_{p^2}: the images of a and b."""
        c = self._decompose(x)
        ctx = self.ctx
        a = ctx.scalar(c[0]) + ctx.scalar(c[1]) * self.omega_image
        b = ctx.scalar(c[2]) + ctx.scalar(c[3]) * self.omega_image
        return a, b

    def reduce_quat(self, x: Quat) -> Tuple[FieldElem, FieldElem]:
        co = self.order.coords(x)
        assert co is not None, "element outside the order"
        return self.scalar_pair(tuple(c % self.p for c in co))

    def reduce_matrix(self, rows: Sequence[Sequence[Quat]]) -> PiMatrix:
        ctx = self.ctx
        a_entries = []
        b_entries = []
        for i in range(3):
            for j in range(3):
                a, b = self.reduce_quat(rows[i][j])
                a_entries.append(a)
                b_entries.append(b)
        return PiMatrix(Mat(ctx, 3, 3, a_entries), Mat(ctx, 3, 3, b_entries))


def _fp_inverse(rows, p):
    n = len(rows)
    mat = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c] % p), None)
        if piv is None:
            return None
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = pow(mat[c][c], p - 2, p)
        mat[c] = [(v * inv) % p for v in mat[c]]
        for i in range(n):
            if i != c and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(vi - f * vc) % p for vi, vc in zip(mat[i], mat[c])]
    return [row[n:] for row in mat]


def reduction_kernel_on_units(p: int) -> List[Quat]:
    """Units of the maximal order reducing to 1 mod p."""
    order = maximal_order(p)
    units = quaternion_unit_group(p)
    out = []
    for u in units.elements:
        co = order.coords(u)
        assert co is not None
        if tuple(c % p for c in co) == (1 % p, 0, 0, 0):
            out.append(u)
    return out


def kernel_mod2_group(p: int = 2) -> FiniteGroup:
    """ker(U(3,O) -> GL3(O/pO)): diagonal matrices with entries reducing
    to one."""
    uno = UnO(p)
    red = ReductionMap(p, _default_ctx(p))
    keep = []
    ident_pair = (_one_code(red), _zero_code(red))
    for g in uno.elements:
        s, u = g
        if s != (0, 1, 2):
            continue
        pairs = [red.reduce_quat(uno.units[ui]) for ui in u]
        if all(
            a == red.ctx.one() and b == red.ctx.zero() for a, b in pairs
        ):
            keep.append(g)
    return FiniteGroup(keep, uno.mul, uno.identity(), name=f"ker m_{p}")


def _default_ctx(p: int) -> FieldCtx:
    from .fields import make_field

    return make_field(p, 1)


def _one_code(red: ReductionMap):
    return red.ctx.one()


def _zero_code(red: ReductionMap):
    return red.ctx.zero()


# ---------------------------------------------------------------------------
# automorphism groups of polarised threefolds
# ---------------------------------------------------------------------------

@dataclass
class AutResult:
    group: FiniteGroup
    type_label: str
    uno_order: int


def aut_polarised(p: int, x: StratumPoint, verify_oracle: int = 8) -> AutResult:
    """Automorphism group of the polarised threefold attached to (t, u) with
    a-number one, as the subgroup of U(3, O) whose reduction mod p preserves
    the distinguished submodule.

    Valid as stated at p = 2 (one superspecial class); at p = 3 this computes
    the branch of the canonical product polarisation.
    """
    if p not in (2, 3):
        raise UnsupportedPrime("unit-group filtering is wired up for p in {2, 3}")
    if x.on_section or x.t.degree == 1:
        raise WrongANumber("the construction requires a-number one")
    ctx = x.t.ctx
    uno = UnO(p)
    red = ReductionMap(p, ctx)
    gm = enumerate_G_M(p, x)
    gm_set = gm.element_set
    # reduce each of the few units once; matrices are then pure placement
    unit_pairs = [red.reduce_quat(u) for u in uno.units]
    zero = ctx.zero()
    kept = []
    for g in uno.elements:
        s, u = g
        a_entries = [zero] * 9
        b_entries = [zero] * 9
        for j in range(3):
            a, b = unit_pairs[u[s[j]]]
            a_entries[3 * s[j] + j] = a
            b_entries[3 * s[j] + j] = b
        pim = PiMatrix(Mat(ctx, 3, 3, a_entries), Mat(ctx, 3, 3, b_entries))
        if pim in gm_set:
            kept.append(g)
    group = FiniteGroup(kept, uno.mul, uno.identity(), name=f"Aut(p={p})")
    # spot-check the dual action oracle on reduced members
    rng = random.Random(0xC0)
    for _ in range(min(verify_oracle, len(kept))):
        g = kept[rng.randrange(len(kept))]
        pim = red.reduce_matrix(uno.matrix(g))
        ok, ok2 = action_on_m2_mod_p(pim, x)
        if not (ok and ok2):
            raise CrossCheckFailure("a kept unit fails the action oracle")
    return AutResult(group, group_type(group), uno.order)
