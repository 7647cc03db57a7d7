"""Sparse exact integer matrices and Smith normal form.

Entries are Python ints throughout, so arithmetic never overflows or rounds.
The Smith normal form routine records its elementary row and column
operations; the transforms ``U`` and ``V`` (and their inverses) can be applied
to sparse vectors by replaying the log, or materialized as matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

SparseVec = dict  # index -> nonzero int


class IntegerMatrix:
    """Immutable sparse integer matrix, stored by column."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[Mapping[int, int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError(f"expected {cols} columns, got {len(columns)}")
        cleaned = []
        for col in columns:
            c = {int(i): int(v) for i, v in col.items() if v}
            if any(not 0 <= i < rows for i in c):
                raise ValueError("row index out of range")
            cleaned.append(c)
        self.columns = tuple(cleaned)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = v
        return cls(rows, cols, columns)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntegerMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        columns = [{} for _ in range(cols)]
        for k, d in enumerate(entries):
            if d:
                columns[k][k] = d
        return cls(rows, cols, columns)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.columns[j].get(i, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, self.row_dicts())

    def is_zero(self) -> bool:
        return not any(self.columns)

    def is_diagonal(self) -> bool:
        return all(set(col) <= {j} for j, col in enumerate(self.columns))

    def apply(self, vec: Mapping[int, int]) -> SparseVec:
        """Matrix-vector product on sparse vectors."""
        out: dict[int, int] = {}
        for j, x in vec.items():
            if not x:
                continue
            for i, v in self.columns[j].items():
                s = out.get(i, 0) + v * x
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntegerMatrix(self.rows, other.cols, [self.apply(col) for col in other.columns])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(c.items())) for c in self.columns)))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntegerMatrix({self.to_dense()})"
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def select_columns(self, idx: Iterable[int]) -> "IntegerMatrix":
        cols = [self.columns[j] for j in idx]
        return IntegerMatrix(self.rows, len(cols), cols)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_dense()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return sign * a[n - 1][n - 1] if n else 1


# -- elementary operation logs ------------------------------------------------
# ("add", i, j, c): x_i += c * x_j    ("swap", i, j)    ("neg", i)

def _vec_add(vec: dict, i: int, j: int, c: int) -> None:
    xj = vec.get(j, 0)
    if xj:
        s = vec.get(i, 0) + c * xj
        if s:
            vec[i] = s
        else:
            vec.pop(i, None)


def _vec_swap(vec: dict, i: int, j: int) -> None:
    xi, xj = vec.pop(i, 0), vec.pop(j, 0)
    if xj:
        vec[i] = xj
    if xi:
        vec[j] = xi


def _replay(vec: Mapping[int, int], ops, inverse: bool, transposed: bool) -> SparseVec:
    """Apply a product of elementary matrices to a sparse vector.

    Row-op logs describe ``U = E_t ... E_1``; column-op logs describe
    ``V = E_1 ... E_s`` where a logged column op ``col_i += c col_j`` is the
    matrix ``I + c e_j e_i^T``, whose action on vectors is ``x_j += c x_i``.
    """
    out = {k: v for k, v in vec.items() if v}
    seq = reversed(ops) if inverse != transposed else ops
    for op in seq:
        kind = op[0]
        if kind == "add":
            _, i, j, c = op
            if inverse:
                c = -c
            if transposed:
                _vec_add(out, j, i, c)
            else:
                _vec_add(out, i, j, c)
        elif kind == "swap":
            _vec_swap(out, op[1], op[2])
        else:
            i = op[1]
            if i in out:
                out[i] = -out[i]
    return out


@dataclass
class SnfResult:
    """``S = U @ M @ V`` with ``U``, ``V`` unimodular and ``S`` diagonal.

    ``diagonal`` holds the nonzero invariant factors ``d_1 | d_2 | ...``.
    """

    shape: tuple[int, int]
    diagonal: list[int]
    row_ops: list | None = field(default=None, repr=False)
    col_ops: list | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def S(self) -> IntegerMatrix:
        return IntegerMatrix.diagonal(self.diagonal, *self.shape)

    def _need(self, ops, what):
        if ops is None:
            raise ValueError(f"{what} transforms were not tracked")
        return ops

    def apply_U(self, vec):
        return _replay(vec, self._need(self.row_ops, "row"), inverse=False, transposed=False)

    def apply_U_inv(self, vec):
        return _replay(vec, self._need(self.row_ops, "row"), inverse=True, transposed=False)

    def apply_V(self, vec):
        return _replay(vec, self._need(self.col_ops, "column"), inverse=False, transposed=True)

    def apply_V_inv(self, vec):
        return _replay(vec, self._need(self.col_ops, "column"), inverse=True, transposed=True)

    def apply_U_inv_T(self, vec):
        """``(U^{-1})^T x``; rows of ``D @ U^{-1}`` are images of rows of ``D``."""
        return _replay(vec, self._need(self.row_ops, "row"), inverse=True, transposed=True)

    def _materialize(self, n, fn) -> IntegerMatrix:
        return IntegerMatrix(n, n, [fn({k: 1}) for k in range(n)])

    @property
    def U(self) -> IntegerMatrix:
        return self._materialize(self.shape[0], self.apply_U)

    @property
    def U_inv(self) -> IntegerMatrix:
        return self._materialize(self.shape[0], self.apply_U_inv)

    @property
    def V(self) -> IntegerMatrix:
        return self._materialize(self.shape[1], self.apply_V)

    @property
    def V_inv(self) -> IntegerMatrix:
        return self._materialize(self.shape[1], self.apply_V_inv)


class SnfError(ArithmeticError):
    pass


def _quo(v: int, p: int) -> int:
    """Quotient rounded to nearest, so remainders satisfy |r| <= |p|/2."""
    q, r = divmod(v, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


class _Reducer:
    """Mutable sparse matrix mirrored by rows and columns, logging operations."""

    def __init__(self, M: IntegerMatrix, track_rows: bool, track_cols: bool):
        self.nrows, self.ncols = M.shape
        self.cols = [dict(c) for c in M.columns]
        self.rows = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                self.rows[i][j] = v
        self.row_log = [] if track_rows else None
        self.col_log = [] if track_cols else None

    # row_i += c * row_j
    def row_add(self, i: int, j: int, c: int) -> None:
        if not c:
            return
        ri, cols = self.rows[i], self.cols
        for col, v in self.rows[j].items():
            s = ri.get(col, 0) + c * v
            if s:
                ri[col] = s
                cols[col][i] = s
            else:
                del ri[col]
                del cols[col][i]
        if self.row_log is not None:
            self.row_log.append(("add", i, j, c))

    # col_i += c * col_j
    def col_add(self, i: int, j: int, c: int) -> None:
        if not c:
            return
        ci, rows = self.cols[i], self.rows
        for row, v in self.cols[j].items():
            s = ci.get(row, 0) + c * v
            if s:
                ci[row] = s
                rows[row][i] = s
            else:
                del ci[row]
                del rows[row][i]
        if self.col_log is not None:
            self.col_log.append(("add", i, j, c))

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for col in set(self.rows[i]) | set(self.rows[j]):
            _vec_swap(self.cols[col], i, j)
        self.rows[i], self.rows[j] = self.rows[j], self.rows[i]
        if self.row_log is not None:
            self.row_log.append(("swap", i, j))

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in set(self.cols[i]) | set(self.cols[j]):
            _vec_swap(self.rows[row], i, j)
        self.cols[i], self.cols[j] = self.cols[j], self.cols[i]
        if self.col_log is not None:
            self.col_log.append(("swap", i, j))

    def row_neg(self, i: int) -> None:
        ri = self.rows[i]
        for col in ri:
            ri[col] = -ri[col]
            self.cols[col][i] = ri[col]
        if self.row_log is not None:
            self.row_log.append(("neg", i))

    def eliminate(self) -> list[tuple[int, int, int]]:
        """Reduce to a generalized permutation matrix; returns the pivots."""
        pivots = []
        done_cols = [False] * self.ncols
        ptr = 0
        while True:
            # empty columns stay empty under the operations used below
            while ptr < self.ncols and (done_cols[ptr] or not self.cols[ptr]):
                ptr += 1
            if ptr == self.ncols:
                break
            col = self.cols[ptr]
            r = min(col, key=lambda i: (abs(col[i]), i))
            c, p = ptr, col[r]
            if abs(p) != 1:
                r, c, p = self._global_min_active(done_cols, ptr)
            while True:
                for i, v in list(self.cols[c].items()):
                    if i != r:
                        self.row_add(i, r, -_quo(v, p))
                for j, v in list(self.rows[r].items()):
                    if j != c:
                        self.col_add(j, c, -_quo(v, p))
                if len(self.cols[c]) == 1 and len(self.rows[r]) == 1:
                    break
                # a nonzero remainder is smaller than the pivot: move there
                cand = [(abs(v), 0, i, c) for i, v in self.cols[c].items() if i != r]
                cand += [(abs(v), 1, r, j) for j, v in self.rows[r].items() if j != c]
                _, _, r, c = min(cand)
                p = self.cols[c][r]
            pivots.append((r, c, p))
            done_cols[c] = True
        return pivots

    def _global_min_active(self, done_cols, start):
        best = None
        for c in range(start, self.ncols):
            if done_cols[c]:
                continue
            for r, v in self.cols[c].items():
                if best is None or (abs(v), c, r) < (abs(best[2]), best[1], best[0]):
                    best = (r, c, v)
        return best


def smith_normal_form(M: IntegerMatrix, track_rows: bool = True,
                      track_cols: bool = True) -> SnfResult:
    """Smith normal form over the integers, smallest-magnitude pivoting."""
    red = _Reducer(M, track_rows, track_cols)
    pivots = red.eliminate()

    # move pivot k to position (k, k); all other entries are zero by now
    rank = len(pivots)
    _place(red.row_swap, [r for r, _, _ in pivots])
    _place(red.col_swap, [c for _, c, _ in pivots])

    for k in range(rank):
        if red.rows[k][k] < 0:
            red.row_neg(k)

    # divisibility chain
    for i in range(rank):
        for j in range(i + 1, rank):
            if red.rows[j][j] % red.rows[i][i]:
                _gcd_fix(red, i, j)

    diag = [red.rows[k][k] for k in range(rank)]
    return SnfResult(M.shape, diag, red.row_log, red.col_log)


def _place(swap, current: list[int]) -> None:
    """Swap lines so that pivot ``k`` sits on line ``k``."""
    owner = {line: k for k, line in enumerate(current)}
    for k in range(len(current)):
        line = current[k]
        if line == k:
            continue
        swap(k, line)
        other = owner.pop(k, None)
        owner[k] = k
        current[k] = k
        if other is not None:
            current[other] = line
            owner[line] = other
        else:
            owner.pop(line, None)


def _gcd_fix(red: _Reducer, i: int, j: int) -> None:
    """Turn diag(a, b) at positions i, j into diag(gcd, lcm)."""
    red.row_add(i, j, 1)
    ri = red.rows[i]
    while ri.get(i, 0) and ri.get(j, 0):
        x, y = ri[i], ri[j]
        if abs(x) >= abs(y):
            red.col_add(i, j, -(x // y))
        else:
            red.col_add(j, i, -(y // x))
    if not ri.get(i, 0):
        red.col_swap(i, j)
    g = ri[i]
    s = red.rows[j].get(i, 0)
    if s:
        red.row_add(j, i, -(s // g))
    if red.rows[i][i] < 0:
        red.row_neg(i)
    if red.rows[j][j] < 0:
        red.row_neg(j)


def _check_elementary(ops, n: int) -> None:
    for op in ops:
        kind = op[0]
        if kind == "add":
            _, i, j, c = op
            ok = i != j and 0 <= i < n and 0 <= j < n and isinstance(c, int)
        elif kind == "swap":
            ok = 0 <= op[1] < n and 0 <= op[2] < n
        else:
            ok = kind == "neg" and 0 <= op[1] < n
        if not ok:
            raise SnfError(f"malformed elementary operation {op!r}")


def _add_into(target: dict, source: Mapping[int, int], c: int) -> None:
    for k, v in source.items():
        s = target.get(k, 0) + c * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def _replay_lines(lines: list[dict], ops) -> None:
    """Apply line operations (rows or columns) to a list of sparse lines."""
    for op in ops:
        kind = op[0]
        if kind == "add":
            _, i, j, c = op
            _add_into(lines[i], lines[j], c)
        elif kind == "swap":
            i, j = op[1], op[2]
            lines[i], lines[j] = lines[j], lines[i]
        else:
            i = op[1]
            lines[i] = {k: -v for k, v in lines[i].items()}


def replay_product(M: IntegerMatrix, row_ops, col_ops) -> IntegerMatrix:
    """``U @ M @ V`` computed by multiplying out the logged elementary factors."""
    rows = M.row_dicts()
    _replay_lines(rows, row_ops or [])
    UM = IntegerMatrix(M.rows, M.cols, IntegerMatrix(M.cols, M.rows, rows).row_dicts())
    cols = [dict(c) for c in UM.columns]
    _replay_lines(cols, col_ops or [])
    return IntegerMatrix(M.rows, M.cols, cols)


def verify_snf(M: IntegerMatrix, res: SnfResult, materialize_limit: int = 200) -> None:
    """Re-check every Smith form postcondition by exact arithmetic.

    ``S == U M V`` is checked by multiplying out the logged elementary
    factors, each of which is checked to be elementary (determinant +-1).  Up
    to ``materialize_limit`` rows/columns the transforms are also formed
    explicitly and ``U @ U_inv == I``, ``V @ V_inv == I`` are checked, which
    proves unimodularity independently of the log structure.
    Raises :class:`SnfError` on any failure.
    """
    d = res.diagonal
    if any(x <= 0 for x in d):
        raise SnfError("nonpositive invariant factor")
    if any(d[k + 1] % d[k] for k in range(len(d) - 1)):
        raise SnfError(f"divisibility chain broken: {d}")
    rows, cols = res.shape
    if (rows, cols) != M.shape:
        raise SnfError("shape mismatch")
    if res.row_ops is None and res.col_ops is None:
        ref = smith_normal_form(M, track_rows=True, track_cols=True)
        verify_snf(M, ref, materialize_limit)
        if ref.diagonal != d:
            raise SnfError("invariant factors disagree with a tracked recomputation")
        return
    if res.row_ops is not None:
        _check_elementary(res.row_ops, rows)
    if res.col_ops is not None:
        _check_elementary(res.col_ops, cols)
    product = replay_product(M, res.row_ops, res.col_ops)
    if res.col_ops is not None and res.row_ops is not None:
        if product != res.S:
            raise SnfError("S != U M V")
    elif res.row_ops is not None:
        # U M = S V^{-1}: rows past the rank vanish, row k is divisible by d_k
        for k, row in enumerate(product.row_dicts()):
            if k >= len(d) and row:
                raise SnfError("U M has a nonzero row past the rank")
            if k < len(d) and any(v % d[k] for v in row.values()):
                raise SnfError("row of U M not divisible by its invariant factor")
    else:
        # U^{-1} S = M V: columns past the rank vanish, column k divisible by d_k
        for k, col in enumerate(product.columns):
            if k >= len(d) and col:
                raise SnfError("M V has a nonzero column past the rank")
            if k < len(d) and any(v % d[k] for v in col.values()):
                raise SnfError("column of M V not divisible by its invariant factor")
    if max(rows, cols) <= materialize_limit:
        if res.row_ops is not None and res.U @ res.U_inv != IntegerMatrix.identity(rows):
            raise SnfError("U is not unimodular")
        if res.col_ops is not None and res.V @ res.V_inv != IntegerMatrix.identity(cols):
            raise SnfError("V is not unimodular")
        if res.row_ops is not None and res.col_ops is not None and res.U @ M @ res.V != res.S:
            raise SnfError("S != U M V (materialized)")


def invariant_factors(M: IntegerMatrix) -> list[int]:
    return smith_normal_form(M, track_rows=False, track_cols=False).diagonal


def rank(M: IntegerMatrix) -> int:
    return len(invariant_factors(M))
