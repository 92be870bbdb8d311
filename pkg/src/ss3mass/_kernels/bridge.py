"""Glue between FieldElem objects and the int-encoded kernel domain."""

from __future__ import annotations


class KTab:
    """Per-context exp/log/Zech tables plus code-domain arithmetic.

    Codes: 0 is zero, c in [1, q-1] is g^(c-1) for the canonical generator g.
    """

    def __init__(self, ctx, exp, log, zech):
        self.ctx = ctx
        self.p = ctx.p
        self.q = ctx.q
        self.qm1 = ctx.q - 1
        self.exp = exp
        self.log = log
        self.zech = zech

    def encode(self, elem) -> int:
        return self.log[elem.packed()] if any(elem.coeffs) else 0

    def decode(self, code: int):
        return self.ctx.from_packed(self.exp[code])

    # -- code arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        z = self.zech[(b - a) % self.qm1]
        if z == 0:
            return 0
        return (a - 1 + z - 1) % self.qm1 + 1

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % self.qm1 + 1

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return (a - 1 + self.qm1 // 2) % self.qm1 + 1

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero code")
        return (self.qm1 - (a - 1)) % self.qm1 + 1

    def powi(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n else 1
        return ((a - 1) * n) % self.qm1 + 1

    def frob(self, a: int, e: int) -> int:
        if a == 0:
            return 0
        return ((a - 1) * pow(self.p, e % self.ctx.two_m, self.qm1)) % self.qm1 + 1

    def subfield_codes(self):
        """Codes of the F_{p^2} subfield in canonical element order."""
        return [self.encode(e) for e in self.ctx.fp2().elements]
