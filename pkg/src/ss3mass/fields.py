"""Exact arithmetic in the finite fields F_{p^{2m}}.

Every computation in this package happens inside one *context*: a concrete
model of F_{p^{2m}} as F_p[x]/(f) for a deterministic irreducible f.  The
algebraically closed ground field is only ever touched at finite level, so a
caller picks 2m large enough for the degrees occurring in its computation and
identifies subfields via the Frobenius fixed-point test (never by juggling
several contexts at once).

Contexts are immutable after construction and freely shareable between
threads; elements are plain immutable data.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import sympy

from .errors import CompositeP, ContextMismatch, DegreeOverflow

#: largest m accepted by make_field unless the caller raises the bound.
DEFAULT_MAX_M = 12

#: fields up to this size get exp/log/Zech tables for the fast kernels.
TABLE_LIMIT = 1 << 21


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1]
        if c:
            shift = len(a) - 1 - df
            for i in range(df):
                a[shift + i] = (a[shift + i] - c * f[i]) % p
        a.pop()
    return _poly_trim(a)


def _poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> List[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
        # make monic to keep coefficients canonical
        if b:
            inv = pow(b[-1], p - 2, p)
            b = [(c * inv) % p for c in b]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_xgcd_inverse(a: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    """Inverse of a modulo the monic polynomial f (a must be a unit)."""
    r0, r1 = list(f), _poly_mod(a, f, p)
    s0, s1 = [], [1]
    while r1:
        # divide r0 by r1
        q = [0] * (len(r0) - len(r1) + 1) if len(r0) >= len(r1) else []
        rem = list(r0)
        inv_lead = pow(r1[-1], p - 2, p)
        while len(rem) >= len(r1) and rem:
            c = (rem[-1] * inv_lead) % p
            shift = len(rem) - len(r1)
            if c:
                q[shift] = c
                for i in range(len(r1)):
                    rem[shift + i] = (rem[shift + i] - c * r1[i]) % p
            rem.pop()
            _poly_trim(rem)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    inv = pow(r0[0], p - 2, p)
    return _poly_mod([(c * inv) % p for c in s0], f, p)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _poly_trim(out)


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic degree-n polynomial over F_p.

    f is irreducible iff x^(p^n) == x mod f and gcd(x^(p^d) - x, f) = 1 for
    every proper divisor d of n.
    """
    n = len(f) - 1
    x = [0, 1]
    xq = _poly_powmod(x, p ** n, f, p)
    if _poly_sub(xq, x, p):
        return False
    for d in range(1, n):
        if n % d:
            continue
        xd = _poly_powmod(x, p ** d, f, p)
        if len(_poly_gcd(_poly_sub(xd, x, p), f, p)) != 1:
            return False
    return True


def _is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

_CTX_CACHE: dict = {}


def make_field(p: int, m: int, max_m: int = DEFAULT_MAX_M) -> "FieldCtx":
    """Deterministic context for F_{p^{2m}}.

    The modulus is the lexicographically smallest monic irreducible polynomial
    of degree 2m over F_p, coefficients compared constant term first, so two
    calls with equal (p, m) agree bit for bit across runs and machines.
    """
    if not _is_prime(p):
        raise CompositeP(f"p = {p} is not prime")
    if m < 1:
        raise DegreeOverflow("m must be >= 1")
    if m > max_m:
        raise DegreeOverflow(f"m = {m} exceeds the safety bound {max_m}")
    key = (p, m)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, m)
        _CTX_CACHE[key] = ctx
    return ctx


def _smallest_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates x^n + c_{n-1}x^{n-1} + ... + c_0 are ordered by the tuple
    (c_0, c_1, ..., c_{n-1}); the constant coefficient is the most significant
    position of the comparison.
    """
    for idx in range(p ** n):
        digits = []
        rest = idx
        for _ in range(n):
            digits.append(rest % p)
            rest //= p
        # digits[k] varies fastest for large k: digits reversed gives the
        # low-degree-first tuple with c_0 most significant.
        coeffs = digits[::-1]
        if coeffs[0] == 0:
            continue  # divisible by x
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldCtx:
    """A concrete model of F_{p^{2m}} = F_p[x]/(modulus)."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.two_m = 2 * m
        self.q = p ** self.two_m
        self.modulus: Tuple[int, ...] = _smallest_irreducible(p, self.two_m)
        # x^{2m+j} mod f for j in [0, 2m-2]: reduction table for products
        self._red: List[Tuple[int, ...]] = []
        cur = list(self.modulus[:-1])
        cur = [(-c) % p for c in cur]  # x^{2m} = -(lower part)
        for _ in range(self.two_m - 1):
            self._red.append(tuple(cur))
            cur = self._shift_reduce(cur)
        self.frobenius_matrix = self._frobenius_matrix()
        self._frob_powers: dict = {0: None}
        self._primitive: Optional[FieldElem] = None
        self._factor_q1: Optional[dict] = None
        self._fp2_data = None
        self._tables = None

    # -- internal helpers ---------------------------------------------------

    def _shift_reduce(self, vec: List[int]) -> List[int]:
        """coefficients of x * (polynomial with coeffs vec), reduced mod f."""
        p, n = self.p, self.two_m
        out = [0] + list(vec[: n - 1])
        top = vec[n - 1]
        if top:
            for i in range(n):
                out[i] = (out[i] - top * self.modulus[i]) % p
        else:
            out = [c % p for c in out]
        return out

    def _frobenius_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """Columns are the coordinates of (x^j)^p in the power basis."""
        p, n = self.p, self.two_m
        cols = []
        for j in range(n):
            img = _poly_powmod([0] * j + [1], p, self.modulus, p)
            img = list(img) + [0] * (n - len(img))
            cols.append(img)
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def _frob_matrix_power(self, e: int):
        e %= self.two_m
        mat = self._frob_powers.get(e)
        if mat is None:
            n = self.two_m
            prev = self._frob_matrix_power(e - 1) if e > 1 else self.frobenius_matrix
            if e == 1:
                mat = self.frobenius_matrix
            else:
                f = self.frobenius_matrix
                mat = tuple(
                    tuple(
                        sum(f[i][k] * prev[k][j] for k in range(n)) % self.p
                        for j in range(n)
                    )
                    for i in range(n)
                )
            self._frob_powers[e] = mat
        return mat

    # -- element constructors -----------------------------------------------

    def elem(self, coeffs: Iterable[int]) -> "FieldElem":
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.two_m:
            c = _poly_mod(c, self.modulus, self.p)
        c += [0] * (self.two_m - len(c))
        return FieldElem(self, tuple(c))

    def zero(self) -> "FieldElem":
        return self.elem([])

    def one(self) -> "FieldElem":
        return self.elem([1])

    def scalar(self, n: int) -> "FieldElem":
        return self.elem([n])

    def gen(self) -> "FieldElem":
        """The class of x: a root of the modulus (not necessarily primitive)."""
        return self.elem([0, 1])

    def elements(self) -> Iterator["FieldElem"]:
        """All q elements in canonical order (packed value ascending)."""
        for packed in range(self.q):
            yield self.from_packed(packed)

    def from_packed(self, packed: int) -> "FieldElem":
        coeffs = []
        for _ in range(self.two_m):
            coeffs.append(packed % self.p)
            packed //= self.p
        return FieldElem(self, tuple(coeffs))

    def random_element(self, rng) -> "FieldElem":
        return self.from_packed(rng.randrange(self.q))

    # -- structural data ----------------------------------------------------

    def factor_q_minus_1(self) -> dict:
        if self._factor_q1 is None:
            self._factor_q1 = dict(sympy.factorint(self.q - 1))
        return self._factor_q1

    def fp2(self):
        """Subfield data: (elements of F_{p^2} in canonical order, generator w,
        coordinate matrix inverse for F_{p^2}-expansions)."""
        if self._fp2_data is None:
            self._fp2_data = _Fp2Data(self)
        return self._fp2_data

    def tables(self):
        """Exp/log/Zech tables for the fast kernels (built lazily)."""
        if self._tables is None:
            if self.q > TABLE_LIMIT:
                raise DegreeOverflow(
                    f"field of size {self.q} exceeds the table limit {TABLE_LIMIT}"
                )
            from . import _kernels
            from ._kernels import bridge

            g = primitive_element(self)
            exp, log, zech = _kernels.impl.build_tables(
                self.p, self.two_m, list(self.modulus), list(g.coeffs)
            )
            self._tables = bridge.KTab(self, exp, log, zech)
        return self._tables

    def __repr__(self):
        return f"FieldCtx(p={self.p}, two_m={self.two_m})"


class FieldElem:
    """An element of a FieldCtx, stored in the power basis of the modulus."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- representation -----------------------------------------------------

    def packed(self) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.ctx.p + c
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"<{list(self.coeffs)} in GF({self.ctx.p}^{self.ctx.two_m})>"

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.two_m, self.coeffs))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self._same_ctx(other) and self.coeffs == other.coeffs

    def _same_ctx(self, other: "FieldElem") -> bool:
        if self.ctx is other.ctx:
            return True
        raise ContextMismatch(
            f"elements of {self.ctx!r} and {other.ctx!r} cannot be mixed"
        )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        self._same_ctx(other)
        p = self.ctx.p
        return FieldElem(
            self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        self._same_ctx(other)
        p = self.ctx.p
        return FieldElem(
            self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        self._same_ctx(other)
        ctx = self.ctx
        p, n = ctx.p, ctx.two_m
        a, b = self.coeffs, other.coeffs
        conv = [0] * (2 * n - 1)
        for i in range(n):
            ai = a[i]
            if ai:
                for j in range(n):
                    bj = b[j]
                    if bj:
                        conv[i + j] += ai * bj
        out = [c % p for c in conv[:n]]
        for j in range(n - 1):
            c = conv[n + j] % p
            if c:
                red = ctx._red[j]
                for i in range(n):
                    out[i] = (out[i] + c * red[i]) % p
        return FieldElem(ctx, tuple(out))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = _poly_xgcd_inverse(list(self.coeffs), self.ctx.modulus, self.ctx.p)
        return self.ctx.elem(inv)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.ctx.p, "two_m": self.ctx.two_m, "coeffs": list(self.coeffs)}


def elem_from_dict(d: dict, max_m: int = DEFAULT_MAX_M) -> FieldElem:
    two_m = int(d["two_m"])
    if two_m % 2:
        raise DegreeOverflow("extension degree over F_p must be even")
    ctx = make_field(int(d["p"]), two_m // 2, max_m=max_m)
    return ctx.elem(d["coeffs"])


# ---------------------------------------------------------------------------
# frobenius and degrees
# ---------------------------------------------------------------------------

def frobenius(a: FieldElem, e: int) -> FieldElem:
    """a^(p^e); a negative e uses the orbit of length 2m, so p^-1 = p^(2m-1)."""
    ctx = a.ctx
    e %= ctx.two_m
    if e == 0:
        return a
    mat = ctx._frob_matrix_power(e)
    n, p = ctx.two_m, ctx.p
    v = a.coeffs
    return FieldElem(
        ctx, tuple(sum(mat[i][j] * v[j] for j in range(n)) % p for i in range(n))
    )


def element_degree(a: FieldElem) -> int:
    """Degree [F_{p^2}(a) : F_{p^2}]: least d >= 1 with a^(p^(2d)) = a."""
    m = a.ctx.m
    for d in range(1, m + 1):
        if m % d == 0 and frobenius(a, 2 * d) == a:
            return d
    raise AssertionError("frobenius orbit must close within 2m")  # unreachable


def multiplicative_order(a: FieldElem) -> int:
    if a.is_zero():
        raise ZeroDivisionError("order of zero")
    n = a.ctx.q - 1
    for ell, k in sorted(a.ctx.factor_q_minus_1().items()):
        for _ in range(k):
            if (a ** (n // ell)) == a.ctx.one():
                n //= ell
            else:
                break
    return n


def primitive_element(ctx: FieldCtx) -> FieldElem:
    """Deterministic generator of the multiplicative group: the first element
    in canonical (packed ascending) order whose order is q - 1."""
    if ctx._primitive is not None:
        return ctx._primitive
    q1 = ctx.q - 1
    primes = sorted(ctx.factor_q_minus_1())
    one = ctx.one()
    for packed in range(1, ctx.q):
        cand = ctx.from_packed(packed)
        if cand.is_zero():
            continue
        if all(cand ** (q1 // ell) != one for ell in primes):
            ctx._primitive = cand
            return cand
    raise AssertionError("multiplicative group of a finite field is cyclic")


# ---------------------------------------------------------------------------
# n-th roots (deterministic Adleman-Manders-Miller, no discrete logs)
# ---------------------------------------------------------------------------

def _sylow_dlog(ctx: FieldCtx, base: FieldElem, val: FieldElem, ell: int, s: int) -> int:
    """Discrete log of val in the cyclic group <base> of order ell^s
    (Pohlig-Hellman digit by digit; group is tiny in every use here)."""
    one = ctx.one()
    digits = 0
    gamma = base ** (ell ** (s - 1))  # order ell
    pow_table = {}
    acc = one
    for j in range(ell):
        pow_table[acc.coeffs] = j
        acc = acc * gamma
    cur = val
    for i in range(s):
        probe = cur ** (ell ** (s - 1 - i))
        j = pow_table.get(probe.coeffs)
        if j is None:
            raise AssertionError("value outside the Sylow subgroup")
        digits += j * ell ** i
        cur = cur * base ** (-(j * ell ** i) % (ell ** s))
    return digits


def _prime_power_root(ctx: FieldCtx, c: FieldElem, ell: int) -> FieldElem:
    """One ell-th root of c, given that c is an ell-th power (ell prime | q-1)."""
    q1 = ctx.q - 1
    s, t = 0, q1
    while t % ell == 0:
        s += 1
        t //= ell
    alpha = pow(ell, -1, t)
    x = c ** alpha  # x^ell = c * (c^t)^k for some k
    err = (x ** ell) * c.inverse()
    if err == ctx.one():
        return x
    b = primitive_element(ctx) ** t  # generator of the ell-Sylow subgroup
    nlog = _sylow_dlog(ctx, b, err, ell, s)
    if nlog % ell:
        raise AssertionError("input was not an ell-th power")
    return x * b ** ((-(nlog // ell)) % (ell ** s))


def nth_roots(a: FieldElem, n: int) -> List[FieldElem]:
    """All x with x^n = a, sorted canonically.  Zero has the single root zero;
    the count of roots of any attained nonzero value is gcd(n, q-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    ctx = a.ctx
    if a.is_zero():
        return [ctx.zero()]
    q1 = ctx.q - 1
    d = math.gcd(n, q1)
    if a ** (q1 // d) != ctx.one():
        return []
    # reduce x^n = a to a d-th root: pick w with w*(n/d) = 1 mod (q-1)/d
    root = a
    if d > 1:
        for ell, k in sorted(sympy.factorint(d).items()):
            for _ in range(k):
                root = _prime_power_root(ctx, root, ell)
    w = pow(n // d, -1, q1 // d)
    x0 = root ** w
    assert (x0 ** n) == a
    mu = primitive_element(ctx) ** (q1 // d)
    out = []
    cur = x0
    for _ in range(d):
        out.append(cur)
        cur = cur * mu
    out.sort(key=lambda e: e.packed())
    return out


# ---------------------------------------------------------------------------
# the F_{p^2} subfield inside a context
# ---------------------------------------------------------------------------

class _Fp2Data:
    """Canonical copy of F_{p^2} inside F_{p^{2m}} plus F_{p^2}-expansion data.

    The basis 1, x, ..., x^{m-1} of F_{p^{2m}} over F_{p^2} (x = the power
    basis generator) is completed to the F_p-basis {x^i, w x^i} where w is the
    canonical multiplicative generator of the subfield; one matrix inversion
    over F_p then turns any element into its m F_{p^2}-coordinates.
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        p, m, n = ctx.p, ctx.m, ctx.two_m
        # subfield = fixed points of frobenius^2, found by solving (M^2 - I)v = 0
        mat2 = ctx._frob_matrix_power(2 % n) if n > 2 else ctx._frob_matrix_power(0)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                v = mat2[i][j] if n > 2 else (1 if i == j else 0)
                if i == j:
                    v = (v - 1) % p
                row.append(v % p)
            rows.append(row)
        basis = _fp_nullspace(rows, p)
        assert len(basis) == 2, "subfield F_{p^2} must be 2-dimensional over F_p"
        elems = []
        for c0 in range(p):
            for c1 in range(p):
                vec = [(c0 * basis[0][i] + c1 * basis[1][i]) % p for i in range(n)]
                elems.append(ctx.elem(vec))
        elems.sort(key=lambda e: e.packed())
        self.elements: Tuple[FieldElem, ...] = tuple(elems)
        self.generator = self._find_generator()
        # coordinate matrix: columns coeffs(x^i), coeffs(w * x^i)
        w = self.generator
        cols = []
        xi = ctx.one()
        for _ in range(m):
            cols.append(list(xi.coeffs))
            cols.append(list((w * xi).coeffs))
            xi = xi * ctx.gen()
        self._coord_inv = _fp_invert([[cols[j][i] for j in range(n)] for i in range(n)], p)

    def _find_generator(self) -> FieldElem:
        target = self.ctx.p ** 2 - 1
        for e in self.elements:
            if not e.is_zero() and multiplicative_order(e) == target:
                return e
        raise AssertionError("F_{p^2}^x is cyclic")  # unreachable

    def contains(self, a: FieldElem) -> bool:
        return frobenius(a, 2) == a

    def coords(self, a: FieldElem) -> List[FieldElem]:
        """m coordinates of a over F_{p^2} w.r.t. the basis 1, x, ..., x^{m-1}."""
        ctx = self.ctx
        p, n = ctx.p, ctx.two_m
        v = [
            sum(self._coord_inv[i][j] * a.coeffs[j] for j in range(n)) % p
            for i in range(n)
        ]
        w = self.generator
        return [ctx.scalar(v[2 * i]) + ctx.scalar(v[2 * i + 1]) * w for i in range(ctx.m)]


def subfield_elements(ctx: FieldCtx, d: int) -> List[FieldElem]:
    """All p^d elements of the subfield fixed by x -> x^(p^d) (d | 2m),
    in canonical packed order.  Enumerated from a nullspace basis of the
    d-th Frobenius matrix minus the identity, never by scanning the field."""
    if ctx.two_m % d:
        raise DegreeOverflow(f"F_p^{d} is not a subfield of F_p^{ctx.two_m}")
    p, n = ctx.p, ctx.two_m
    if d == ctx.two_m:
        return list(ctx.elements())
    mat = ctx._frob_matrix_power(d)
    rows = []
    for i in range(n):
        row = [(mat[i][j] - (1 if i == j else 0)) % p for j in range(n)]
        rows.append(row)
    basis = _fp_nullspace(rows, p)
    assert len(basis) == d, "fixed field has the wrong dimension"
    out = []
    for idx in range(p ** d):
        digits = []
        rest = idx
        for _ in range(d):
            digits.append(rest % p)
            rest //= p
        vec = [0] * n
        for c, bv in zip(digits, basis):
            for i in range(n):
                vec[i] = (vec[i] + c * bv[i]) % p
        out.append(ctx.elem(vec))
    out.sort(key=lambda e: e.packed())
    return out


def _fp_nullspace(rows: List[List[int]], p: int) -> List[List[int]]:
    """Basis of the right nullspace of a matrix over F_p."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if mat[i][c] % p), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [(v * inv) % p for v in mat[r]]
        for i in range(n_rows):
            if i != r and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(vi - f * vr) % p for vi, vr in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * n_cols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-mat[i][fc]) % p
        basis.append(vec)
    return basis


def _fp_invert(rows: List[List[int]], p: int) -> List[List[int]]:
    n = len(rows)
    mat = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        pr = next(i for i in range(c, n) if mat[i][c] % p)
        mat[c], mat[pr] = mat[pr], mat[c]
        inv = pow(mat[c][c], p - 2, p)
        mat[c] = [(v * inv) % p for v in mat[c]]
        for i in range(n):
            if i != c and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(vi - f * vc) % p for vi, vc in zip(mat[i], mat[c])]
    return [row[n:] for row in mat]
