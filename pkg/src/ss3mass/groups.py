"""Brute-force group constructions over the reduction mod p of the
superspecial module.

Elements are pairs A + B*Pi of 3x3 matrices over F_{p^2} with Pi^2 = 0 and
Pi a = a^p Pi.  On the rank-six reduction with its distinguished basis the
pair acts through the block matrix [[A, 0], [B^(p), A^(p)]]; the Frobenius
twist on the lower-left block is what makes that map multiplicative for the
product law used here, and it is pinned down (rather than assumed) by the
dual-criterion action oracle below.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .curve import CurvePoint, UnitaryGroup, end_t_unitary, unitary_group
from .errors import (
    CrossCheckFailure,
    NotInC0,
    OracleDisagreement,
    TooLarge,
    WrongANumber,
)
from .fields import FieldCtx, FieldElem, frobenius
from .linalg import Mat, det_and_inverse
from .masses import formula_group_orders
from .strata import (
    StratumPoint,
    psi_kernel_basis,
    solve_psi_preimage,
    sym_basis,
    t_matrix,
)


class PiMatrix:
    """A + B*Pi over F_{p^2} inside a working context."""

    __slots__ = ("A", "B", "_key")

    def __init__(self, A: Mat, B: Mat):
        self.A = A
        self.B = B
        self._key = tuple(e.packed() for e in A.entries) + tuple(
            e.packed() for e in B.entries
        )

    @property
    def ctx(self) -> FieldCtx:
        return self.A.ctx

    def __eq__(self, other):
        return isinstance(other, PiMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"PiMatrix(key={self._key})"

    def __mul__(self, other: "PiMatrix") -> "PiMatrix":
        # (A1 + B1 Pi)(A2 + B2 Pi) = A1 A2 + (A1 B2 + B1 A2^(p)) Pi
        A = self.A * other.A
        B = self.A * other.B + self.B * other.A.frobenius(1)
        return PiMatrix(A, B)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "PiMatrix":
        return cls(Mat.identity(ctx, 3), Mat.zero(ctx, 3, 3))

    def inverse(self) -> "PiMatrix":
        _, ainv = det_and_inverse(self.A)
        if ainv is None:
            raise ZeroDivisionError("A-part singular")
        bpart = -(ainv * self.B * ainv.frobenius(1))
        return PiMatrix(ainv, bpart)

    def star(self) -> "PiMatrix":
        """The canonical involution: conjugate-transpose on the A-part and
        negated transpose on the Pi-coefficient."""
        return PiMatrix(self.A.frobenius(1).transpose(), -self.B.transpose())

    def is_polarised(self) -> bool:
        """Membership in the polarised group: A conj(A)^T = I and
        B^T conj(A) = conj(A)^T B."""
        ctx = self.ctx
        abar = self.A.frobenius(1)
        if self.A * abar.transpose() != Mat.identity(ctx, 3):
            return False
        return self.B.transpose() * abar == abar.transpose() * self.B

    def block6(self) -> Mat:
        """The 6x6 matrix of the action on the reduced module."""
        ctx = self.ctx
        zero = ctx.zero()
        abar = self.A.frobenius(1)
        bbar = self.B.frobenius(1)
        rows = []
        for i in range(3):
            rows.append(list(self.A.row(i)) + [zero] * 3)
        for i in range(3):
            rows.append(list(bbar.row(i)) + list(abar.row(i)))
        return Mat.from_rows(rows)


# ---------------------------------------------------------------------------
# generic finite group wrapper
# ---------------------------------------------------------------------------

FULL_CLOSURE_BUDGET = 5000
SAMPLE_CLOSURE = 1000


class FiniteGroup:
    """Explicit finite group: element list plus multiplication oracle.

    Closure and inverse existence are verified on construction: in full when
    |G|^2 stays within a fixed budget, otherwise inverses in full and closure
    on a deterministic sample.
    """

    def __init__(
        self,
        elements: Sequence,
        mul: Callable,
        identity,
        name: str = "",
        seed: int = 0x55,
    ):
        self.elements = list(elements)
        self.mul = mul
        self.identity = identity
        self.name = name
        self.order = len(self.elements)
        self.element_set = frozenset(self.elements)
        if identity not in self.element_set:
            raise CrossCheckFailure(f"{name}: identity missing")
        self._verify(seed)
        self._orders: Optional[Dict[object, int]] = None

    def _verify(self, seed: int):
        full = self.order * self.order <= FULL_CLOSURE_BUDGET
        if full:
            for a in self.elements:
                for b in self.elements:
                    if self.mul(a, b) not in self.element_set:
                        raise CrossCheckFailure(f"{self.name}: not closed")
        else:
            rng = random.Random(seed)
            for _ in range(SAMPLE_CLOSURE):
                a = self.elements[rng.randrange(self.order)]
                b = self.elements[rng.randrange(self.order)]
                if self.mul(a, b) not in self.element_set:
                    raise CrossCheckFailure(f"{self.name}: sampled product escapes")
        for a in self.elements:
            if self.element_order(a) is None:
                raise CrossCheckFailure(f"{self.name}: no inverse for an element")

    def element_order(self, a) -> Optional[int]:
        cur = a
        for k in range(1, self.order + 1):
            if cur == self.identity:
                return k
            cur = self.mul(cur, a)
        return None

    def orders(self) -> Dict[object, int]:
        if self._orders is None:
            self._orders = {a: self.element_order(a) for a in self.elements}
        return self._orders

    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.orders().values())

    def is_abelian(self) -> bool:
        if self.order > 1000:
            raise TooLarge("abelian check limited to order <= 1000")
        for a in self.elements:
            for b in self.elements:
                if self.mul(a, b) != self.mul(b, a):
                    return False
        return True

    def center_size(self) -> int:
        n = 0
        for a in self.elements:
            if all(self.mul(a, b) == self.mul(b, a) for b in self.elements):
                n += 1
        return n

    def abelian_invariants(self) -> List[int]:
        """Prime-power cyclic factors of an abelian group, ascending.

        Read off from torsion counts: with c_k the number of elements whose
        ell-part is killed by ell^k, the number of cyclic ell-factors of
        exponent at least k is log_ell(c_k / c_{k-1})."""
        assert self.is_abelian()
        import sympy

        orders = list(self.orders().values())
        inv: List[int] = []
        for ell in sorted(sympy.factorint(self.order)):
            counts = []
            k = 0
            while True:
                ck = sum(1 for o in orders if _ell_val(o, ell) <= k)
                counts.append(ck)
                if ck == self.order:
                    break
                k += 1
            for k in range(1, len(counts)):
                ge_k = _ilog(counts[k] // counts[k - 1], ell)
                ge_next = (
                    _ilog(counts[k + 1] // counts[k], ell) if k + 1 < len(counts) else 0
                )
                inv.extend([ell ** k] * (ge_k - ge_next))
        return sorted(inv)


def _ell_val(order: int, ell: int) -> int:
    e = 0
    while order % ell == 0:
        order //= ell
        e += 1
    return e


def _ilog(n: int, base: int) -> int:
    e = 0
    while n > 1:
        n //= base
        e += 1
    return e


def group_type(g: FiniteGroup) -> str:
    """Conservative isomorphism label: exact for abelian groups, an
    order/exponent/center fingerprint otherwise."""
    if g.order > 10 ** 5:
        raise TooLarge("group_type limited to order <= 1e5")
    if g.order == 1:
        return "C1"
    if g.order <= 1000 and g.is_abelian():
        factors = g.abelian_invariants()
        parts = []
        for val in sorted(set(factors)):
            mult = factors.count(val)
            parts.append(f"C{val}^{mult}" if mult > 1 else f"C{val}")
        return " x ".join(parts)
    fp = f"nonabelian(order={g.order}, exponent={g.exponent()}"
    if g.order <= 1000:
        fp += f", center={g.center_size()}"
    fp += ")"
    if g.order == 24 and g.exponent() == 12 and g.center_size() == 2:
        fp += " [profile of SL2(F3)]"
    if g.order == 12 and g.exponent() == 12 and g.center_size() == 2:
        fp += " [profile of C4:C3]"
    return fp


# ---------------------------------------------------------------------------
# the polarised mod-p groups
# ---------------------------------------------------------------------------

class GM2Group:
    """The polarised automorphism group of the reduced superspecial module,
    parametrised as (A, A*S) over the unitary group and the symmetric
    matrices.  Elements are generated on demand; the full honest scan lives
    in enumerate-and-verify (kernel-backed) form in ``scan_order``."""

    def __init__(self, p: int, ctx: FieldCtx):
        if p not in (2, 3):
            raise TooLarge("full enumeration supported for p in {2, 3}")
        self.p = p
        self.ctx = ctx
        self.unitary: UnitaryGroup = unitary_group(p, ctx)
        fp2 = ctx.fp2()
        self.sub_elems = list(fp2.elements)
        self.order = self.unitary.order * len(self.sub_elems) ** 6
        expected = formula_group_orders(p, 3, "notInD").g_m2_order
        if self.order != expected:
            raise CrossCheckFailure(
                f"|G_M2| parametrisation gives {self.order}, closed form {expected}"
            )

    def contains(self, g: PiMatrix) -> bool:
        return self.unitary.contains(g.A) and g.is_polarised()

    def iter_elements(self) -> Iterator[PiMatrix]:
        basis = sym_basis(self.ctx)
        for amat in self.unitary.elements:
            for coeffs in itertools.product(self.sub_elems, repeat=6):
                s = Mat.zero(self.ctx, 3, 3)
                for c, b in zip(coeffs, basis):
                    s = s + b * c
                yield PiMatrix(amat, amat * s)

    def sample(self, n: int, seed: int = 0xA5) -> List[PiMatrix]:
        rng = random.Random(seed)
        basis = sym_basis(self.ctx)
        out = []
        for _ in range(n):
            amat = self.unitary.elements[rng.randrange(self.unitary.order)]
            s = Mat.zero(self.ctx, 3, 3)
            for b in basis:
                s = s + b * self.sub_elems[rng.randrange(len(self.sub_elems))]
            out.append(PiMatrix(amat, amat * s))
        return out

    def scan_order(self) -> int:
        """Construct every element and verify the defining conditions on each
        (kernel-backed); returns the verified count."""
        from . import _kernels

        if self.p != 2:
            raise TooLarge("the full element scan exceeds 1e9 elements for p >= 3")
        kt = self.ctx.tables()
        u3_flat = [c for code9 in self.unitary.codes for c in code9]
        sub_codes = [kt.encode(e) for e in self.sub_elems]
        s6_list = list(itertools.product(sub_codes, repeat=6))
        count, ok = _kernels.impl.gm2_scan(self.p, self.ctx.q, kt.zech, u3_flat, s6_list)
        if not ok:
            raise CrossCheckFailure("an enumerated element failed the defining conditions")
        return count


def enumerate_G_M2(p: int, ctx: Optional[FieldCtx] = None) -> GM2Group:
    if ctx is None:
        from .fields import make_field

        ctx = make_field(p, 1)
    return GM2Group(p, ctx)


def _require_a1(x: StratumPoint) -> None:
    if x.on_section or x.t.degree == 1:
        raise WrongANumber("the point must have a-number one")


def gm_rhs(x: StratumPoint, alpha: FieldElem) -> FieldElem:
    """u2/u1 * (1 - alpha^(p^3 - 1))."""
    one = alpha.ctx.one()
    return x.ratio() * (one - frobenius(alpha, 3) * alpha.inverse())


def enumerate_G_M(p: int, x: StratumPoint) -> FiniteGroup:
    """All polarised pairs preserving the submodule cut out by (t, u).

    Runs over the unitary commutant of t; for each eigenvalue the symmetric
    part solves an affine condition on the distinguished functional, a coset
    of its kernel.
    """
    if p not in (2, 3):
        raise TooLarge("full enumeration supported for p in {2, 3}")
    _require_a1(x)
    t = x.t
    ctx = t.ctx
    kernel = psi_kernel_basis(t)
    fp2_elems = list(ctx.fp2().elements)
    elems: List[PiMatrix] = []
    for amat, alpha in end_t_unitary(t):
        part = solve_psi_preimage(t, gm_rhs(x, alpha))
        if part is None:
            continue
        for coeffs in itertools.product(fp2_elems, repeat=len(kernel)):
            s = part
            for c, b in zip(coeffs, kernel):
                s = s + b * c
            block_lower = s * amat
            elems.append(PiMatrix(amat, block_lower.frobenius(1)))
    group = FiniteGroup(
        elems,
        lambda a, b: a * b,
        PiMatrix.identity(ctx),
        name=f"G_M(p={p})",
    )
    for g in group.elements[: min(64, len(group.elements))]:
        if not g.is_polarised():
            raise CrossCheckFailure("G_M element violates the polarised conditions")
    return group


# ---------------------------------------------------------------------------
# the dual-criterion action oracle
# ---------------------------------------------------------------------------

def _module_basis(x: StratumPoint) -> List[List[FieldElem]]:
    """Basis of the distinguished 3-dimensional subspace of the reduced
    module: u1*E1 + u2*F1, F2, F3 in the twisted frame coordinates."""
    t = x.t
    ctx = t.ctx
    zero = ctx.zero()
    u1, u2 = x.u
    tv = list(t.coords)
    tp = [frobenius(c, 1) for c in tv]
    tm = [frobenius(c, -1) for c in tv]
    w1 = [u1 * c for c in tv] + [u2 * c for c in tv]
    w2 = [zero] * 3 + tp
    w3 = [zero] * 3 + tm
    return [w1, w2, w3]


def _in_span(vectors: List[List[FieldElem]], target: List[FieldElem]) -> bool:
    ctx = target[0].ctx
    rows = [list(v) for v in vectors]
    n = len(target)
    r = 0
    tgt = list(target)
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        if not tgt[c].is_zero():
            f = tgt[c]
            tgt = [vi - f * vr for vi, vr in zip(tgt, rows[r])]
        r += 1
    return all(v.is_zero() for v in tgt)


def action_on_m2_mod_p(g: PiMatrix, x: StratumPoint) -> Tuple[bool, bool]:
    """Whether g preserves the distinguished submodule, decided two ways.

    Route one is the closed criterion: the A-part fixes the line through t
    with eigenvalue alpha and the (1,1) frame coefficient of the twisted
    B-part equals u2/u1 * (alpha - alpha^(p^3)).  Route two applies the 6x6
    block matrix to a basis of the subspace and tests stability directly.
    The two must agree; disagreement raises.
    """
    t = x.t
    if t.degree == 1:
        raise NotInC0("the action oracle needs t off the degree-one locus")
    if x.on_section:
        raise WrongANumber("the section is handled by the classifier, not here")
    det, _ = det_and_inverse(g.A)
    if det.is_zero():
        raise ZeroDivisionError("the action oracle applies to automorphisms only")
    ctx = t.ctx
    tv = list(t.coords)
    # route one
    w = g.A.apply(tv)
    cross_zero = (
        (w[1] * tv[2] - w[2] * tv[1]).is_zero()
        and (w[2] * tv[0] - w[0] * tv[2]).is_zero()
        and (w[0] * tv[1] - w[1] * tv[0]).is_zero()
    )
    criterion = False
    if cross_zero and any(not v.is_zero() for v in w):
        pivot = next(i for i in range(3) if not tv[i].is_zero())
        alpha = w[pivot] * tv[pivot].inverse()
        frame = t_matrix(t)
        _, finv = det_and_inverse(frame)
        assert finv is not None
        r1 = finv.row(0)
        bbar = g.B.frobenius(1)
        val = ctx.zero()
        for i in range(3):
            for j in range(3):
                val = val + r1[i] * bbar[i, j] * tv[j]
        expected = x.ratio() * (alpha - frobenius(alpha, 3))
        criterion = val == expected
    # route two
    basis = _module_basis(x)
    block = g.block6()
    direct = all(_in_span(basis, block.apply(vec)) for vec in basis)
    if criterion != direct:
        raise OracleDisagreement(
            f"criterion {criterion} but direct subspace test {direct}"
        )
    return criterion, direct
