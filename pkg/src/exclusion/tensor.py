"""Dense and sparse exact matrices and the tensor-space kernel.

Site ordering follows the probability-vector convention: site 1 is the most
significant bit of the configuration index, so index 1 is (0,...,0,1).
All operations are pure; entries may be Fraction, Dual or Jet (any scalar
supporting field arithmetic and exact zero tests).
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Dual, is_zero


class PoleError(ZeroDivisionError):
    """A rational expression was evaluated at a zero of its denominator."""


class Matrix:
    """Small dense matrix, row-major.  Immutable by convention."""

    __slots__ = ("a", "rows", "cols")

    def __init__(self, rows_of_entries):
        # bare ints are promoted so that entry division stays exact
        self.a = [[Fraction(e) if isinstance(e, int) else e for e in r]
                  for r in rows_of_entries]
        self.rows = len(self.a)
        self.cols = len(self.a[0]) if self.a else 0
        if any(len(r) != self.cols for r in self.a):
            raise ValueError("ragged matrix")

    @staticmethod
    def zeros(rows, cols):
        return Matrix([[Fraction(0)] * cols for _ in range(rows)])

    @staticmethod
    def identity(n):
        return Matrix([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            return Matrix([[sum(self.a[i][k] * other.a[k][j] for k in range(self.cols))
                            for j in range(other.cols)] for i in range(self.rows)])
        return Matrix([[e * other for e in row] for row in self.a])

    def __rmul__(self, other):
        return Matrix([[other * e for e in row] for row in self.a])

    def __add__(self, other):
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.a, other.a)])

    def __sub__(self, other):
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.a, other.a)])

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self.a])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            x == y for r, s in zip(self.a, other.a) for x, y in zip(r, s))

    def transpose(self):
        return Matrix([[self.a[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def trace(self):
        return sum(self.a[i][i] for i in range(self.rows))

    def map(self, fn):
        return Matrix([[fn(e) for e in row] for row in self.a])

    def col(self, j):
        return [self.a[i][j] for i in range(self.rows)]

    def apply(self, vec):
        return [sum(self.a[i][j] * vec[j] for j in range(self.cols)) for i in range(self.rows)]

    def __repr__(self):
        return f"Matrix({self.a!r})"


def kron(A: Matrix, B: Matrix) -> Matrix:
    out = Matrix.zeros(A.rows * B.rows, A.cols * B.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            aij = A.a[i][j]
            if is_zero(aij):
                continue
            for k in range(B.rows):
                for l in range(B.cols):
                    if not is_zero(B.a[k][l]):
                        out.a[i * B.rows + k][j * B.cols + l] = aij * B.a[k][l]
    return out


def permutation_op() -> Matrix:
    """4x4 swap P: P(u (x) v) = v (x) u, P^2 = I."""
    P = Matrix.zeros(4, 4)
    for i in range(2):
        for j in range(2):
            P.a[2 * i + j][2 * j + i] = Fraction(1)
    return P


def partial_transpose(M: Matrix, leg: int) -> Matrix:
    """Transpose one tensor leg of a 4x4 two-site operator (leg 1 or 2)."""
    if M.rows != 4 or M.cols != 4:
        raise ValueError("partial_transpose expects a 4x4 matrix")
    if leg not in (1, 2):
        raise ValueError("leg must be 1 or 2")
    out = Matrix.zeros(4, 4)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    if leg == 1:
                        out.a[2 * k + j][2 * i + l] = M.a[2 * i + j][2 * k + l]
                    else:
                        out.a[2 * i + l][2 * k + j] = M.a[2 * i + j][2 * k + l]
    return out


def partial_trace_first(M):
    """Trace out the first 2-dim factor of an operator on 2 (x) 2^n."""
    if isinstance(M, SparseMatrix):
        if M.dim % 2:
            raise ValueError("dimension not even")
        half = M.dim // 2
        out = SparseMatrix(half)
        for r, row in M.rows_items():
            j = r % half
            for c, v in row.items():
                if (r < half) == (c < half):
                    out.add(j, c % half, v)
        return out
    if M.rows != M.cols or M.rows % 2:
        raise ValueError("dimension not even")
    half = M.rows // 2
    return Matrix([[M.a[j][l] + M.a[half + j][half + l] for l in range(half)]
                   for j in range(half)])


def inverse(M: Matrix) -> Matrix:
    """Exact inverse of a small dense matrix by Gauss-Jordan elimination."""
    n = M.rows
    if n != M.cols:
        raise ValueError("inverse of non-square matrix")
    a = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(M.a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not is_zero(a[r][col])), None)
        if piv is None:
            raise PoleError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [e / p for e in a[col]]
        for r in range(n):
            if r != col and not is_zero(a[r][col]):
                f = a[r][col]
                a[r] = [e - f * g for e, g in zip(a[r], a[col])]
    return Matrix([row[n:] for row in a])


class SparseMatrix:
    """Square sparse matrix as row -> {col: value}; zeros are never stored.

    Comparison and iteration use the deterministic (row, col) ordering, so
    exact equality is well defined.
    """

    __slots__ = ("dim", "_rows")

    def __init__(self, dim):
        self.dim = dim
        self._rows = {}

    @staticmethod
    def identity(dim, one=Fraction(1)):
        out = SparseMatrix(dim)
        for i in range(dim):
            out._rows[i] = {i: one}
        return out

    @staticmethod
    def from_dense(M: Matrix):
        out = SparseMatrix(M.rows)
        for i in range(M.rows):
            for j in range(M.cols):
                if not is_zero(M.a[i][j]):
                    out._rows.setdefault(i, {})[j] = M.a[i][j]
        return out

    def to_dense(self) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for r, row in self._rows.items():
            for c, v in row.items():
                out.a[r][c] = v
        return out

    def add(self, r, c, v):
        if not (0 <= r < self.dim and 0 <= c < self.dim):
            raise IndexError("coordinate out of range")
        if isinstance(v, int):
            v = Fraction(v)
        row = self._rows.setdefault(r, {})
        nv = row.get(c, 0) + v
        if is_zero(nv):
            row.pop(c, None)
            if not row:
                self._rows.pop(r, None)
        else:
            row[c] = nv

    def get(self, r, c):
        return self._rows.get(r, {}).get(c, Fraction(0))

    def rows_items(self):
        return self._rows.items()

    def items(self):
        """COO entries sorted by (row, col)."""
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def __mul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.dim != other.dim:
                raise ValueError("shape mismatch")
            out = SparseMatrix(self.dim)
            for r, row in self._rows.items():
                acc = {}
                for k, v in row.items():
                    brow = other._rows.get(k)
                    if not brow:
                        continue
                    for c, w in brow.items():
                        acc[c] = acc.get(c, 0) + v * w
                acc = {c: v for c, v in acc.items() if not is_zero(v)}
                if acc:
                    out._rows[r] = acc
            return out
        return self.scale(other)

    def scale(self, s):
        out = SparseMatrix(self.dim)
        if is_zero(s):
            return out
        for r, row in self._rows.items():
            out._rows[r] = {c: v * s for c, v in row.items()}
        return out

    def __add__(self, other):
        out = SparseMatrix(self.dim)
        out._rows = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            for c, v in row.items():
                out.add(r, c, v)
        return out

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.dim == other.dim and list(self.items()) == list(other.items())

    def apply(self, vec):
        out = [Fraction(0)] * self.dim
        for r, row in self._rows.items():
            out[r] = sum(v * vec[c] for c, v in row.items())
        return out

    def apply_left(self, vec):
        out = [Fraction(0)] * self.dim
        for r, row in self._rows.items():
            vr = vec[r]
            if is_zero(vr):
                continue
            for c, v in row.items():
                out[c] += vr * v
        return out

    def map(self, fn):
        out = SparseMatrix(self.dim)
        for r, row in self._rows.items():
            nr = {c: fn(v) for c, v in row.items()}
            nr = {c: v for c, v in nr.items() if not is_zero(v)}
            if nr:
                out._rows[r] = nr
        return out

    def __repr__(self):
        return f"SparseMatrix(dim={self.dim}, nnz={self.nnz})"


def embed_at_positions(op: Matrix, positions, n_factors) -> SparseMatrix:
    """Embed an operator acting on the given 0-indexed tensor slots of
    (C^2)^(x n_factors), identity elsewhere.  ``op`` has dim 2^len(positions)
    with its tensor legs matching ``positions`` in order."""
    k = len(positions)
    if op.rows != 1 << k or op.cols != 1 << k:
        raise ValueError("operator size does not match position count")
    if len(set(positions)) != k or any(not 0 <= p < n_factors for p in positions):
        raise ValueError("bad tensor positions")
    dim = 1 << n_factors
    shifts = [n_factors - 1 - p for p in positions]
    ent = [(i, j, op.a[i][j]) for i in range(op.rows) for j in range(op.cols)
           if not is_zero(op.a[i][j])]
    out = SparseMatrix(dim)
    mask = 0
    for s in shifts:
        mask |= 1 << s
    rest = [b for b in range(dim) if not b & mask]
    for base in rest:
        for i, j, v in ent:
            r = base
            c = base
            for t, s in enumerate(shifts):
                r |= ((i >> (k - 1 - t)) & 1) << s
                c |= ((j >> (k - 1 - t)) & 1) << s
            out.add(r, c, v)
    return out


def embed_local(op: Matrix, first_site: int, length: int) -> SparseMatrix:
    """Embed a single-site (2x2) or adjacent-pair (4x4) operator; sites are
    1-indexed, site 1 being the most significant bit."""
    if op.rows == 2:
        if not 1 <= first_site <= length:
            raise ValueError(f"site {first_site} out of range for {length} sites")
        return embed_at_positions(op, (first_site - 1,), length)
    if op.rows == 4:
        if not 1 <= first_site <= length - 1:
            raise ValueError(f"pair ({first_site},{first_site + 1}) out of range "
                             f"for {length} sites")
        return embed_at_positions(op, (first_site - 1, first_site), length)
    raise ValueError("embed_local expects a 2x2 or 4x4 operator")


def exact_nullspace(M) -> list:
    """Exact basis of the kernel, by sparse rational elimination.

    Pivots are chosen to limit fill-in (shortest row first, then sparsest
    column), which keeps the very sparse Markov/transfer systems fast; the
    arithmetic is exact throughout.  Returns a list of length-dim vectors.
    """
    if isinstance(M, Matrix):
        M = SparseMatrix.from_dense(M)
    dim = M.dim
    rows = [dict(M._rows.get(r, {})) for r in range(dim)]
    col_count = [0] * dim
    for row in rows:
        for c in row:
            col_count[c] += 1
    eliminated = [False] * dim
    pivot_row_of_col = {}
    while True:
        best = None
        for ri in range(dim):
            if eliminated[ri] or not rows[ri]:
                continue
            nnz = len(rows[ri])
            cj = min(rows[ri], key=lambda c: (col_count[c], c))
            key = (nnz, col_count[cj], ri)
            if best is None or key < best[0]:
                best = (key, ri, cj)
                if nnz == 1 and col_count[cj] == 1:
                    break
        if best is None:
            break
        _, ri, cj = best
        piv = rows[ri][cj]
        eliminated[ri] = True
        pivot_row_of_col[cj] = ri
        for c in rows[ri]:
            col_count[c] -= 1
        rows[ri] = {c: v / piv for c, v in rows[ri].items()}
        for rk in range(dim):
            if rk == ri:
                continue
            f = rows[rk].get(cj)
            if f is None:
                continue
            tgt = rows[rk]
            track = not eliminated[rk]  # counts cover active rows only
            if track:
                for c in tgt:
                    col_count[c] -= 1
            for c, v in rows[ri].items():
                nv = tgt.get(c, 0) - f * v
                if nv:
                    tgt[c] = nv
                else:
                    tgt.pop(c, None)
            if track:
                for c in tgt:
                    col_count[c] += 1
    free_cols = [c for c in range(dim) if c not in pivot_row_of_col]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for c, ri in pivot_row_of_col.items():
            vec[c] = -rows[ri].get(fc, Fraction(0))
        basis.append(vec)
    return basis


def derivative_at(f, x0) -> Matrix:
    """Exact derivative of a matrix-valued rational function at x0, by
    evaluating over dual numbers.  Poles raise PoleError."""
    try:
        M = f(Dual.variable(x0))
    except ZeroDivisionError as exc:
        raise PoleError(f"pole while differentiating at {x0}: {exc}") from exc
    return M.map(lambda e: e.deriv if isinstance(e, Dual) else Fraction(0))


def value_matrix(M: Matrix) -> Matrix:
    """Drop derivative parts, keeping exact values."""
    return M.map(lambda e: e.value if isinstance(e, Dual) else e)
