# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: same contracts as ``pure``, C inner loops.

Field elements travel as Zech codes (0 = zero, c = g^(c-1)); see pure.py for
the encoding notes.
"""

import math

from libc.stdlib cimport free, malloc

BACKEND = "fast"


cdef inline long long _mul(long long a, long long b, long long qm1) nogil:
    if a == 0 or b == 0:
        return 0
    return (a - 1 + b - 1) % qm1 + 1


cdef inline long long _add(long long a, long long b, long long qm1, long long* zech) nogil:
    cdef long long z
    if a == 0:
        return b
    if b == 0:
        return a
    z = zech[(b - a) % qm1]
    if z == 0:
        return 0
    return (a - 1 + z - 1) % qm1 + 1


cdef inline long long _neg(long long a, long long p, long long qm1) nogil:
    if p == 2 or a == 0:
        return a
    return (a - 1 + qm1 / 2) % qm1 + 1


cdef inline long long _scale_log(long long a, long long f, long long qm1) nogil:
    # a -> a^(p^e) given f = p^e mod qm1
    if a == 0:
        return 0
    return ((a - 1) * f) % qm1 + 1


cdef long long* _to_c(object lst, Py_ssize_t* n_out) except NULL:
    cdef Py_ssize_t n = len(lst)
    cdef long long* buf = <long long*> malloc(n * sizeof(long long))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = lst[i]
    n_out[0] = n
    return buf


def build_tables(long long p, int two_m, modulus, gen):
    """Exp/log/Zech tables; see the pure twin for the layout."""
    cdef long long q = p ** two_m
    cdef int n = two_m
    cdef int i, j, k_small
    cdef long long kk, packed, c0, packed1, top, c
    cdef long long* mod_c = <long long*> malloc((n + 1) * sizeof(long long))
    cdef long long* red = <long long*> malloc((n - 1) * n * sizeof(long long))
    cdef long long* cur = <long long*> malloc(n * sizeof(long long))
    cdef long long* gvec = <long long*> malloc(n * sizeof(long long))
    cdef long long* conv = <long long*> malloc((2 * n) * sizeof(long long))
    cdef long long* nxt = <long long*> malloc(n * sizeof(long long))
    if mod_c == NULL or red == NULL or cur == NULL or gvec == NULL or conv == NULL or nxt == NULL:
        raise MemoryError()
    for i in range(n + 1):
        mod_c[i] = modulus[i]
    for i in range(n):
        gvec[i] = gen[i] if i < len(gen) else 0
        cur[i] = (-mod_c[i]) % p
    # red[j] = coeffs of x^(n+j) mod modulus
    for j in range(n - 1):
        for i in range(n):
            red[j * n + i] = cur[i]
        top = cur[n - 1]
        for i in range(n - 1, 0, -1):
            cur[i] = cur[i - 1]
        cur[0] = 0
        if top:
            for i in range(n):
                cur[i] = (cur[i] - top * mod_c[i]) % p
    exp = [0] * q
    log = [0] * q
    cur[0] = 1
    for i in range(1, n):
        cur[i] = 0
    for kk in range(q - 1):
        packed = 0
        for i in range(n - 1, -1, -1):
            packed = packed * p + cur[i]
        exp[kk + 1] = packed
        log[packed] = kk + 1
        # cur = cur * gvec mod modulus
        for i in range(2 * n):
            conv[i] = 0
        for i in range(n):
            if cur[i]:
                for j in range(n):
                    if gvec[j]:
                        conv[i + j] += cur[i] * gvec[j]
        for i in range(n):
            nxt[i] = conv[i] % p
        for j in range(n - 1):
            c = conv[n + j] % p
            if c:
                for i in range(n):
                    nxt[i] = (nxt[i] + c * red[j * n + i]) % p
        for i in range(n):
            cur[i] = nxt[i]
    ok = True
    if cur[0] != 1:
        ok = False
    for i in range(1, n):
        if cur[i] != 0:
            ok = False
    free(mod_c); free(red); free(cur); free(gvec); free(conv); free(nxt)
    if not ok:
        raise AssertionError("generator does not have order q-1")
    zech = [0] * (q - 1)
    for kk in range(q - 1):
        packed = exp[kk + 1]
        c0 = packed % p
        packed1 = packed - c0 + ((c0 + 1) % p)
        zech[kk] = log[packed1] if packed1 else 0
    return exp, log, zech


def curve_points(long long p, long long q, zech_list):
    cdef long long qm1 = q - 1
    cdef long long n = p + 1
    cdef long long d = math.gcd(n, qm1)
    cdef long long m2 = qm1 // d
    cdef long long ninv = pow(n // d, -1, m2) if m2 > 1 else 0
    cdef long long neg1 = 1 if p == 2 else qm1 / 2 + 1
    cdef Py_ssize_t nz
    cdef long long* zech = _to_c(zech_list, &nz)
    cdef long long x1, xn, s, rhs, lr, lx0, jj, y
    pts = []
    try:
        for x1 in range(q):
            if x1 == 0:
                xn = 0
            else:
                xn = ((x1 - 1) * n) % qm1 + 1
            s = _add(1, xn, qm1, zech)
            rhs = s if (p == 2 or s == 0) else (s - 1 + qm1 / 2) % qm1 + 1
            if rhs == 0:
                pts.append((x1, 0, 1))
                continue
            lr = rhs - 1
            if lr % d:
                continue
            lx0 = ((lr // d) * ninv) % m2
            for jj in range(d):
                y = (lx0 + jj * m2) % qm1 + 1
                pts.append((x1, y, 1))
        # line at infinity
        lr = neg1 - 1
        if lr % d == 0:
            lx0 = ((lr // d) * ninv) % m2
            for jj in range(d):
                y = (lx0 + jj * m2) % qm1 + 1
                pts.append((y, 1, 0))
    finally:
        free(zech)
    return pts


def point_degrees(long long p, long long q, int m, pts):
    cdef long long qm1 = q - 1
    cdef int dd
    cdef long long f, a, b, c
    divisors = [dd for dd in range(1, m + 1) if m % dd == 0]
    fixers = {dd: pow(p, 2 * dd, qm1) for dd in divisors}
    out = []
    for (pa, pb, pc) in pts:
        a, b, c = pa, pb, pc
        for dd in divisors:
            f = fixers[dd]
            if (
                (a == 0 or ((a - 1) * f) % qm1 == a - 1)
                and (b == 0 or ((b - 1) * f) % qm1 == b - 1)
                and (c == 0 or ((c - 1) * f) % qm1 == c - 1)
            ):
                out.append(dd)
                break
    return out


cdef long long _det6_c(long long p, long long qm1, long long* zech, long long* m) nogil:
    cdef long long det = 1
    cdef long long pv, pinv, f, fac
    cdef int col, r, cc, piv
    cdef long long tmp
    for col in range(6):
        piv = -1
        for r in range(col, 6):
            if m[6 * r + col]:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != col:
            for cc in range(6):
                tmp = m[6 * col + cc]
                m[6 * col + cc] = m[6 * piv + cc]
                m[6 * piv + cc] = tmp
            det = _neg(det, p, qm1)
        pv = m[6 * col + col]
        det = _mul(det, pv, qm1)
        pinv = (qm1 - (pv - 1)) % qm1 + 1
        for r in range(col + 1, 6):
            f = m[6 * r + col]
            if f:
                fac = _neg(_mul(f, pinv, qm1), p, qm1)
                for cc in range(col, 6):
                    m[6 * r + cc] = _add(m[6 * r + cc], _mul(fac, m[6 * col + cc], qm1), qm1, zech)
    return det


def in_delta_batch(long long p, long long q, zech_list, pts):
    cdef long long qm1 = q - 1
    cdef Py_ssize_t nz
    cdef long long* zech = _to_c(zech_list, &nz)
    cdef long long frob2[6]
    cdef long long v[6]
    cdef long long mat[36]
    cdef int k, i
    cdef long long t1, t2, t3
    for k in range(6):
        frob2[k] = pow(p, 2 * k, qm1)
    out = []
    try:
        for (pa, pb, pc) in pts:
            t1, t2, t3 = pa, pb, pc
            v[0] = _mul(t1, t1, qm1)
            v[1] = _mul(t2, t2, qm1)
            v[2] = _mul(t3, t3, qm1)
            v[3] = _mul(t1, t2, qm1)
            v[4] = _mul(t1, t3, qm1)
            v[5] = _mul(t2, t3, qm1)
            for i in range(6):
                for k in range(6):
                    mat[6 * i + k] = _scale_log(v[i], frob2[k], qm1)
            out.append(_det6_c(p, qm1, zech, mat) == 0)
    finally:
        free(zech)
    return out


cdef void _matmul3(long long* x, long long* y, long long* out, long long qm1, long long* zech) nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = _add(
                _add(
                    _mul(x[3 * i], y[j], qm1),
                    _mul(x[3 * i + 1], y[3 + j], qm1),
                    qm1, zech,
                ),
                _mul(x[3 * i + 2], y[6 + j], qm1),
                qm1, zech,
            )


def gm2_scan(long long p, long long q, zech_list, u3_flat, s6_list):
    cdef long long qm1 = q - 1
    cdef Py_ssize_t nz, nu, ns6
    cdef long long* zech = _to_c(zech_list, &nz)
    cdef long long* u3 = _to_c(u3_flat, &nu)
    flat6 = [v for s in s6_list for v in s]
    cdef long long* s6 = _to_c(flat6, &ns6)
    cdef long long A[9]
    cdef long long AbarT[9]
    cdef long long S[9]
    cdef long long B[9]
    cdef long long N[9]
    cdef long long prod[9]
    cdef long long count = 0
    cdef bint ok = True, aok
    cdef long long fp = p % qm1
    cdef Py_ssize_t ai, si, nuni, nsym
    cdef int i, j
    nuni = nu // 9
    nsym = ns6 // 6
    with nogil:
        for ai in range(nuni):
            for i in range(9):
                A[i] = u3[9 * ai + i]
            for i in range(3):
                for j in range(3):
                    AbarT[3 * i + j] = _scale_log(A[3 * j + i], fp, qm1)
            _matmul3(A, AbarT, prod, qm1, zech)
            aok = True
            for i in range(3):
                for j in range(3):
                    if prod[3 * i + j] != (1 if i == j else 0):
                        aok = False
            if not aok:
                ok = False
                continue
            for si in range(nsym):
                S[0] = s6[6 * si]
                S[4] = s6[6 * si + 1]
                S[8] = s6[6 * si + 2]
                S[1] = S[3] = s6[6 * si + 3]
                S[2] = S[6] = s6[6 * si + 4]
                S[5] = S[7] = s6[6 * si + 5]
                _matmul3(A, S, B, qm1, zech)
                _matmul3(AbarT, B, N, qm1, zech)
                if N[1] != N[3] or N[2] != N[6] or N[5] != N[7]:
                    ok = False
                    continue
                count += 1
    free(zech); free(u3); free(s6)
    return count, ok


def gm_filter(long long p, long long q, zech_list, a_flat, b_flat, r1, tvec, long long u21):
    cdef long long qm1 = q - 1
    cdef Py_ssize_t nz, na, nb
    cdef long long* zech = _to_c(zech_list, &nz)
    cdef long long* af = _to_c(a_flat, &na)
    cdef long long* bf = _to_c(b_flat, &nb)
    cdef long long fp = p % qm1
    cdef long long fp3 = pow(p, 3, qm1)
    cdef long long t[3]
    cdef long long r[3]
    cdef long long w[3]
    cdef long long alpha, expected, val, c1, c2, c3
    cdef Py_ssize_t ci, ncand
    cdef int i, j
    cdef bint good
    for i in range(3):
        t[i] = tvec[i]
        r[i] = r1[i]
    out = []
    ncand = na // 9
    for ci in range(ncand):
        for i in range(3):
            w[i] = _add(
                _add(
                    _mul(af[9 * ci + 3 * i], t[0], qm1),
                    _mul(af[9 * ci + 3 * i + 1], t[1], qm1),
                    qm1, zech,
                ),
                _mul(af[9 * ci + 3 * i + 2], t[2], qm1),
                qm1, zech,
            )
        if w[0] == 0 and w[1] == 0 and w[2] == 0:
            out.append(False)
            continue
        c1 = _add(_mul(w[1], t[2], qm1), _neg(_mul(w[2], t[1], qm1), p, qm1), qm1, zech)
        c2 = _add(_mul(w[2], t[0], qm1), _neg(_mul(w[0], t[2], qm1), p, qm1), qm1, zech)
        c3 = _add(_mul(w[0], t[1], qm1), _neg(_mul(w[1], t[0], qm1), p, qm1), qm1, zech)
        if c1 or c2 or c3:
            out.append(False)
            continue
        if t[2]:
            alpha = _mul(w[2], (qm1 - (t[2] - 1)) % qm1 + 1, qm1)
        else:
            alpha = _mul(w[0], (qm1 - (t[0] - 1)) % qm1 + 1, qm1)
        expected = _mul(u21, _add(alpha, _neg(_scale_log(alpha, fp3, qm1), p, qm1), qm1, zech), qm1)
        val = 0
        for i in range(3):
            if r[i] == 0:
                continue
            for j in range(3):
                val = _add(
                    val,
                    _mul(_mul(r[i], _scale_log(bf[9 * ci + 3 * i + j], fp, qm1), qm1), t[j], qm1),
                    qm1, zech,
                )
        out.append(val == expected)
    free(zech); free(af); free(bf)
    return out
