"""Small dense matrices over a field context, plus subfield rank computations.

Everything here is exact and tiny (dimensions at most 8): Gaussian
elimination with first-nonzero pivoting is the only algorithm needed, there
being no notion of pivot magnitude in a finite field.

``rank_over_subfield`` views elements of F_{p^{2m}} as vectors over the
subfield F_{p^2} and is the engine behind the rank and span tests of the
stratification: linear relations it returns always have entries inside the
subfield because Gaussian elimination never leaves it.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .errors import ContextMismatch, NonSquare, ZeroVector
from .fields import FieldCtx, FieldElem, frobenius


class Mat:
    """Row-major immutable matrix of FieldElem sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: FieldCtx, rows: int, cols: int, entries: Sequence[FieldElem]):
        assert len(entries) == rows * cols
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[FieldElem]]) -> "Mat":
        ctx = rows[0][0].ctx
        flat = [e for row in rows for e in row]
        for e in flat:
            if e.ctx is not ctx:
                raise ContextMismatch("matrix entries span several contexts")
        return cls(ctx, len(rows), len(rows[0]), flat)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Mat":
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, ctx: FieldCtx, rows: int, cols: int) -> "Mat":
        z = ctx.zero()
        return cls(ctx, rows, cols, [z] * (rows * cols))

    def __getitem__(self, rc: Tuple[int, int]) -> FieldElem:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> Tuple[FieldElem, ...]:
        return self.entries[r * self.cols: (r + 1) * self.cols]

    def col(self, c: int) -> Tuple[FieldElem, ...]:
        return tuple(self.entries[r * self.cols + c] for r in range(self.rows))

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols})"

    def __add__(self, other: "Mat") -> "Mat":
        assert self.rows == other.rows and self.cols == other.cols
        return Mat(self.ctx, self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.ctx, self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        return Mat(self.ctx, self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return Mat(self.ctx, self.rows, self.cols, [e * other for e in self.entries])
        if not isinstance(other, Mat):
            return NotImplemented
        assert self.cols == other.rows
        zero = self.ctx.zero()
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = acc + self.entries[i * self.cols + k] * other.entries[k * other.cols + j]
                out.append(acc)
        return Mat(self.ctx, self.rows, other.cols, out)

    def __rmul__(self, other):
        if isinstance(other, FieldElem):
            return self * other
        return NotImplemented

    def transpose(self) -> "Mat":
        return Mat(
            self.ctx,
            self.cols,
            self.rows,
            [self.entries[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)],
        )

    def frobenius(self, e: int) -> "Mat":
        return Mat(self.ctx, self.rows, self.cols, [frobenius(v, e) for v in self.entries])

    def apply(self, vec: Sequence[FieldElem]) -> List[FieldElem]:
        assert len(vec) == self.cols
        out = []
        for i in range(self.rows):
            acc = self.ctx.zero()
            for k in range(self.cols):
                acc = acc + self.entries[i * self.cols + k] * vec[k]
            out.append(acc)
        return out

    def is_symmetric(self) -> bool:
        return self == self.transpose()


def det_and_inverse(m: Mat) -> Tuple[FieldElem, Optional[Mat]]:
    """Determinant and exact inverse (None when singular)."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix has no determinant")
    n = m.rows
    ctx = m.ctx
    a = [list(m.row(i)) + [ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)]
    det = ctx.one()
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            return ctx.zero(), None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    inv_mat = Mat(ctx, n, n, [a[i][n + j] for i in range(n) for j in range(n)])
    return det, inv_mat


def _eliminate(rows: List[List[FieldElem]]) -> Tuple[int, List[int]]:
    """In-place row echelon; returns (rank, pivot column list)."""
    if not rows:
        return 0, []
    ncols = len(rows[0])
    r = 0
    pivots = []
    for c in range(ncols):
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
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return r, pivots


def rank_over_subfield(vectors: Sequence[FieldElem], ctx: FieldCtx) -> Tuple[int, List[Tuple[FieldElem, ...]]]:
    """F_{p^2}-rank of elements of F_{p^{2m}} plus a basis of linear relations.

    Each element is expanded into its m coordinates over F_{p^2}; the returned
    relation vectors r satisfy sum(r_i * v_i) = 0 exactly and have all entries
    in the subfield.
    """
    for v in vectors:
        if v.ctx is not ctx:
            raise ContextMismatch("vector outside the stated context")
    fp2 = ctx.fp2()
    k = len(vectors)
    aug = []
    for i, v in enumerate(vectors):
        row = list(fp2.coords(v))
        row += [ctx.one() if j == i else ctx.zero() for j in range(k)]
        aug.append(row)
    m = ctx.m
    # eliminate only on the coordinate part
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, k) if not aug[i][c].is_zero()), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for i in range(k):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        r += 1
        if r == k:
            break
    relations = [tuple(aug[i][m:]) for i in range(r, k)]
    return r, relations


def subfield_linear_solve(
    vectors: Sequence[FieldElem], target: FieldElem, ctx: FieldCtx
) -> Tuple[Optional[List[FieldElem]], List[List[FieldElem]]]:
    """Solve sum(c_i * vectors_i) = target for c_i in F_{p^2}.

    Returns (particular solution or None, basis of the homogeneous solution
    space); all coefficients lie in the subfield.
    """
    fp2 = ctx.fp2()
    k = len(vectors)
    m = ctx.m
    cols = [fp2.coords(v) for v in vectors]
    tgt = fp2.coords(target)
    rows = [[cols[u][r] for u in range(k)] + [tgt[r]] for r in range(m)]
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    # inconsistent when a zero row has nonzero target
    for i in range(r, m):
        if not rows[i][k].is_zero():
            particular = None
            break
    else:
        particular = [ctx.zero()] * k
        for i, pc in enumerate(pivots):
            particular[pc] = rows[i][k]
    free = [u for u in range(k) if u not in pivots]
    null = []
    for fu in free:
        vec = [ctx.zero()] * k
        vec[fu] = ctx.one()
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fu]
        null.append(vec)
    return particular, null


def solve_parallel_condition(t: Sequence[FieldElem]) -> List[Mat]:
    """F_{p^2}-basis of the 3x3 matrices over the subfield sending the column
    vector t into its own line: (A t) x t = 0.

    The two independent cross-product conditions are expanded over the
    subfield coordinates, giving a linear system in the nine unknown entries.
    """
    if all(v.is_zero() for v in t):
        raise ZeroVector("t must be nonzero")
    ctx = t[0].ctx
    fp2 = ctx.fp2()
    m = ctx.m
    # coefficient of A[i][j] in cross component c: see cross((At), t)
    # cross components: (w2 t3 - w3 t2, w3 t1 - w1 t3, w1 t2 - w2 t1)
    # with w_i = sum_j A[i][j] t_j.
    cols = []  # one column per unknown, 3m coordinate rows each
    for i in range(3):
        for j in range(3):
            contrib = [ctx.zero()] * 3
            if i == 1:
                contrib[0] = contrib[0] + t[j] * t[2]
                contrib[2] = contrib[2] - t[j] * t[0]
            elif i == 2:
                contrib[0] = contrib[0] - t[j] * t[1]
                contrib[1] = contrib[1] + t[j] * t[0]
            else:
                contrib[1] = contrib[1] - t[j] * t[2]
                contrib[2] = contrib[2] + t[j] * t[1]
            coords = []
            for comp in contrib:
                coords.extend(fp2.coords(comp))
            cols.append(coords)
    # nullspace over F_{p^2} of the (3m x 9) system
    nrows = 3 * m
    rows = [[cols[u][r] for u in range(9)] for r in range(nrows)]
    rank, pivots = _eliminate(rows)
    free = [u for u in range(9) if u not in pivots]
    basis = []
    for fu in free:
        vec = [ctx.zero()] * 9
        vec[fu] = ctx.one()
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fu]
        basis.append(Mat(ctx, 3, 3, vec))
    return basis
