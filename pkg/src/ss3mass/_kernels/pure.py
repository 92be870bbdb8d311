"""Pure-Python kernels for the enumeration hot loops.

Field elements are handled in a log ("Zech") encoding: code 0 is the zero
element and code c in [1, q-1] is g^(c-1) for the context's canonical
multiplicative generator g.  Multiplication and Frobenius become modular
arithmetic on exponents; addition uses the Zech logarithm table
zech[k] = code(1 + g^k).

The compiled module ``_fast`` implements the same functions with the same
signatures; ``ss3mass._kernels`` picks one at import time.
"""

from __future__ import annotations

import math

BACKEND = "pure"


def build_tables(p, two_m, modulus, gen):
    """Exp/log/Zech tables for F_p[x]/(modulus) with generator gen.

    Returns (exp, log, zech): exp[c] is the packed coefficient vector of the
    element with code c, log[packed] the inverse map, zech[k] the code of
    1 + g^k (0 when that sum vanishes).
    """
    q = p ** two_m
    n = two_m
    red = []
    cur = [(-c) % p for c in modulus[:n]]
    for _ in range(n - 1):
        red.append(list(cur))
        top = cur[n - 1]
        cur = [0] + cur[: n - 1]
        if top:
            for i in range(n):
                cur[i] = (cur[i] - top * modulus[i]) % p

    def mulmod(a, b):
        conv = [0] * (2 * n - 1)
        for i in range(n):
            ai = a[i]
            if ai:
                for j in range(n):
                    if b[j]:
                        conv[i + j] += ai * b[j]
        out = [c % p for c in conv[:n]]
        for j in range(n - 1):
            c = conv[n + j] % p
            if c:
                rj = red[j]
                for i in range(n):
                    out[i] = (out[i] + c * rj[i]) % p
        return out

    gvec = [gen[i] if i < len(gen) else 0 for i in range(n)]
    exp = [0] * q
    log = [0] * q
    cur = [1] + [0] * (n - 1)
    for k in range(q - 1):
        packed = 0
        for c in reversed(cur):
            packed = packed * p + c
        exp[k + 1] = packed
        log[packed] = k + 1
        cur = mulmod(cur, gvec)
    if cur != [1] + [0] * (n - 1):
        raise AssertionError("generator does not have order q-1")
    zech = [0] * (q - 1)
    for k in range(q - 1):
        packed = exp[k + 1]
        c0 = packed % p
        packed1 = packed - c0 + ((c0 + 1) % p)
        zech[k] = log[packed1] if packed1 else 0
    return exp, log, zech


def curve_points(p, q, zech):
    """All points of X1^(p+1)+X2^(p+1)+X3^(p+1)=0 over the table field,
    as code triples normalised so the last nonzero coordinate is one.

    Fibres over X1 are resolved by solving (p+1) * log(x) = log(rhs) in
    Z/(q-1) rather than scanning the plane.
    """
    qm1 = q - 1
    n = p + 1
    d = math.gcd(n, qm1)
    m2 = qm1 // d
    ninv = pow(n // d, -1, m2) if m2 > 1 else 0
    neg1 = 1 if p == 2 else qm1 // 2 + 1

    def add(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = zech[(b - a) % qm1]
        if z == 0:
            return 0
        return (a - 1 + z - 1) % qm1 + 1

    def roots(rhs):
        # all y with y^(p+1) = rhs
        if rhs == 0:
            return (0,)
        lr = rhs - 1
        if lr % d:
            return ()
        lx0 = ((lr // d) * ninv) % m2
        return tuple((lx0 + j * m2) % qm1 + 1 for j in range(d))

    pts = []
    for x1 in range(q):
        if x1 == 0:
            xn = 0
        else:
            xn = ((x1 - 1) * n) % qm1 + 1
        s = add(1, xn)  # 1 + x1^(p+1)
        rhs = s if p == 2 or s == 0 else (s - 1 + qm1 // 2) % qm1 + 1
        for y in roots(rhs):
            pts.append((x1, y, 1))
    for x in roots(neg1):
        pts.append((x, 1, 0))
    return pts


def point_degrees(p, q, m, pts):
    """Degree over F_{p^2} of each code triple: least d | m fixing all."""
    qm1 = q - 1
    divisors = [d for d in range(1, m + 1) if m % d == 0]
    fixers = {d: pow(p, 2 * d, qm1) for d in divisors}
    out = []
    for (a, b, c) in pts:
        for d in divisors:
            f = fixers[d]
            if (
                (a == 0 or ((a - 1) * f) % qm1 == a - 1)
                and (b == 0 or ((b - 1) * f) % qm1 == b - 1)
                and (c == 0 or ((c - 1) * f) % qm1 == c - 1)
            ):
                out.append(d)
                break
    return out


def _det6(p, q, zech, mat):
    """Determinant of a 6x6 code matrix (Gaussian elimination)."""
    qm1 = q - 1
    half = qm1 // 2

    def add(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = zech[(b - a) % qm1]
        if z == 0:
            return 0
        return (a - 1 + z - 1) % qm1 + 1

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % qm1 + 1

    def neg(a):
        if p == 2 or a == 0:
            return a
        return (a - 1 + half) % qm1 + 1

    m = [row[:] for row in mat]
    det = 1
    for col in range(6):
        piv = next((r for r in range(col, 6) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = neg(det)
        pv = m[col][col]
        det = mul(det, pv)
        pinv = (qm1 - (pv - 1)) % qm1 + 1
        for r in range(col + 1, 6):
            f = m[r][col]
            if f:
                fac = neg(mul(f, pinv))
                for cc in range(col, 6):
                    m[r][cc] = add(m[r][cc], mul(fac, m[col][cc]))
    return det


def in_delta_batch(p, q, zech, pts):
    """For each code triple t, whether the 6x6 matrix with columns
    (t1^2,t2^2,t3^2,t1t2,t1t3,t2t3) twisted by powers of Frobenius^2 is
    singular."""
    qm1 = q - 1

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % qm1 + 1

    frob2 = [pow(p, 2 * k, qm1) for k in range(6)]
    out = []
    for (t1, t2, t3) in pts:
        v = (
            mul(t1, t1),
            mul(t2, t2),
            mul(t3, t3),
            mul(t1, t2),
            mul(t1, t3),
            mul(t2, t3),
        )
        mat = [
            [0 if v[i] == 0 else ((v[i] - 1) * frob2[k]) % qm1 + 1 for k in range(6)]
            for i in range(6)
        ]
        out.append(_det6(p, q, zech, mat) == 0)
    return out


def _mat3(p, q, zech):
    """3x3 code-matrix helpers bound to one field."""
    qm1 = q - 1
    half = qm1 // 2

    def add(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = zech[(b - a) % qm1]
        if z == 0:
            return 0
        return (a - 1 + z - 1) % qm1 + 1

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % qm1 + 1

    def neg(a):
        if p == 2 or a == 0:
            return a
        return (a - 1 + half) % qm1 + 1

    def frob1(a):
        if a == 0:
            return 0
        return ((a - 1) * p) % qm1 + 1

    def matmul(x, y):
        return [
            add(add(mul(x[3 * i], y[j]), mul(x[3 * i + 1], y[3 + j])), mul(x[3 * i + 2], y[6 + j]))
            for i in range(3)
            for j in range(3)
        ]

    return add, mul, neg, frob1, matmul


def gm2_scan(p, q, zech, u3_flat, s6_list):
    """Enumerate the polarised automorphism group of the reduction mod p of
    the superspecial module: pairs (A, B=A*S) with A unitary and S symmetric.

    Verifies the defining conditions on every constructed element.  Returns
    (count, all_ok).
    """
    add, mul, neg, frob1, matmul = _mat3(p, q, zech)
    count = 0
    ok = True
    nuni = len(u3_flat) // 9
    for ai in range(nuni):
        A = u3_flat[9 * ai: 9 * ai + 9]
        Abar = [frob1(v) for v in A]
        AbarT = [Abar[3 * j + i] for i in range(3) for j in range(3)]
        # unitarity: A * conj(A)^T = I
        prod = matmul(A, AbarT)
        if prod != [1, 0, 0, 0, 1, 0, 0, 0, 1]:
            ok = False
            continue
        for s in s6_list:
            S = [s[0], s[3], s[4], s[3], s[1], s[5], s[4], s[5], s[2]]
            B = matmul(A, S)
            # defining symmetry: conj(A)^T B == B^T conj(A)
            N = matmul(AbarT, B)
            if (
                N[1] != N[3]
                or N[2] != N[6]
                or N[5] != N[7]
            ):
                ok = False
                continue
            count += 1
    return count, ok


def gm_filter(p, q, zech, a_flat, b_flat, r1, tvec, u21):
    """Module-action membership for candidate pairs (A, B).

    A candidate passes when A fixes the line through t (eigenvalue alpha) and
    the distinguished coefficient of the Frobenius twist of B equals
    u21 * (alpha - alpha^(p^3)).
    """
    add, mul, neg, frob1, matmul = _mat3(p, q, zech)
    qm1 = q - 1
    p3 = pow(p, 3, qm1)

    def frob3(a):
        if a == 0:
            return 0
        return ((a - 1) * p3) % qm1 + 1

    def inv(a):
        return (qm1 - (a - 1)) % qm1 + 1

    t1, t2, t3 = tvec
    out = []
    ncand = len(a_flat) // 9
    for ci in range(ncand):
        A = a_flat[9 * ci: 9 * ci + 9]
        B = b_flat[9 * ci: 9 * ci + 9]
        w = [
            add(add(mul(A[3 * i], t1), mul(A[3 * i + 1], t2)), mul(A[3 * i + 2], t3))
            for i in range(3)
        ]
        if w == [0, 0, 0]:
            out.append(False)
            continue
        if (
            add(mul(w[1], t3), neg(mul(w[2], t2))) != 0
            or add(mul(w[2], t1), neg(mul(w[0], t3))) != 0
            or add(mul(w[0], t2), neg(mul(w[1], t1))) != 0
        ):
            out.append(False)
            continue
        alpha = mul(w[2], inv(t3)) if t3 else mul(w[0], inv(t1))
        expected = mul(u21, add(alpha, neg(frob3(alpha))))
        val = 0
        for i in range(3):
            ri = r1[i]
            if ri == 0:
                continue
            for j in range(3):
                val = add(val, mul(mul(ri, frob1(B[3 * i + j])), tvec[j]))
        out.append(val == expected)
    return out
