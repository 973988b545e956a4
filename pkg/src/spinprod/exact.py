"""Exact dense linear algebra over the Gaussian rationals.

Scalars are pairs of ``fractions.Fraction`` (real and imaginary part), so
every kernel in this module is bit-exact: equal inputs give identical
outputs and all comparisons are strict equalities.  Matrices are immutable
and row-major; multiplication and Kronecker products skip zero entries,
which keeps the signed-permutation-like operators produced elsewhere in
this package cheap to combine.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction


class ShapeError(ValueError):
    """Matrix dimensions do not line up."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


_F0 = Fraction(0)


def _make(re: Fraction, im: Fraction) -> "GaussianRational":
    z = GaussianRational.__new__(GaussianRational)
    z.re = re
    z.im = im
    return z


class GaussianRational:
    """A complex number ``re + im*i`` with exact rational parts.

    ``Fraction`` keeps both parts reduced with positive denominator, so
    equality is canonical and hashing is consistent with it.  The
    arithmetic below branches on vanishing parts: most scalars in this
    package are pure real or pure imaginary, and skipping the dead
    Fraction operations is a large constant-factor win.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __add__(self, other):
        if other is ZERO:
            return self
        if self is ZERO:
            return other
        a, b = self.re, self.im
        c, d = other.re, other.im
        return _make(a + c if c else a, b + d if d else b)

    def __sub__(self, other):
        if other is ZERO:
            return self
        a, b = self.re, self.im
        c, d = other.re, other.im
        return _make(a - c if c else a, b - d if d else b)

    def __neg__(self):
        if self is ZERO:
            return self
        return _make(-self.re, -self.im)

    def __mul__(self, other):
        if self is ZERO or other is ZERO:
            return ZERO
        if self is ONE:
            return other
        if other is ONE:
            return self
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b:
            if not d:
                return _make(a * c, _F0)
            if not c:
                return _make(_F0, a * d)
            return _make(a * c, a * d)
        if not a:
            if not d:
                return _make(_F0, b * c)
            if not c:
                return _make(-(b * d), _F0)
            return _make(-(b * d), b * c)
        if not d:
            return _make(a * c, b * c)
        if not c:
            return _make(-(b * d), a * d)
        return _make(a * c - b * d, a * d + b * c)

    def __truediv__(self, other):
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def as_quad(self) -> list[int]:
        """Serialize as ``[re_num, re_den, im_num, im_den]``."""
        return [self.re.numerator, self.re.denominator,
                self.im.numerator, self.im.denominator]

    @classmethod
    def from_quad(cls, quad) -> "GaussianRational":
        rn, rd, im_n, im_d = (int(x) for x in quad)
        return cls(Fraction(rn, rd), Fraction(im_n, im_d))

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if not self.re:
            return im
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}"

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
MINUS_ONE = GaussianRational(-1)
IMAG = GaussianRational(0, 1)
MINUS_IMAG = GaussianRational(0, -1)
HALF = GaussianRational(Fraction(1, 2))


def gr(x) -> GaussianRational:
    """Coerce an int, Fraction or GaussianRational to a GaussianRational."""
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(_as_fraction(x))


class ExactMatrix:
    """Dense row-major matrix of GaussianRationals, immutable by convention."""

    __slots__ = ("rows", "cols", "entries", "_nz_rows", "_nz_cols", "_hash")

    def __init__(self, rows: int, cols: int, entries):
        if rows < 1 or cols < 1:
            raise ShapeError("matrix dimensions must be positive")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeError(
                f"expected {rows * cols} entries for {rows}x{cols}, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._nz_rows = None
        self._nz_cols = None
        self._hash = None

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        data = [gr(x) for row in rows for x in row]
        return cls(len(rows), len(rows[0]), data)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return _identity(n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def diagonal(cls, values) -> "ExactMatrix":
        values = [gr(v) for v in values]
        n = len(values)
        data = [ZERO] * (n * n)
        for i, v in enumerate(values):
            data[i * n + i] = v
        return cls(n, n, data)

    def get(self, i: int, j: int) -> GaussianRational:
        return self.entries[i * self.cols + j]

    def nonzero_rows(self):
        """Per-row tuples of ``(col, value)`` for the nonzero entries."""
        if self._nz_rows is None:
            c = self.cols
            self._nz_rows = tuple(
                tuple((j, v) for j, v in enumerate(self.entries[i * c:(i + 1) * c])
                      if not v.is_zero())
                for i in range(self.rows))
        return self._nz_rows

    def nonzero_cols(self):
        """Per-column tuples of ``(row, value)`` for the nonzero entries."""
        if self._nz_cols is None:
            acc = [[] for _ in range(self.cols)]
            for i, row in enumerate(self.nonzero_rows()):
                for j, v in row:
                    acc[j].append((i, v))
            self._nz_cols = tuple(tuple(col) for col in acc)
        return self._nz_cols

    def column_dict(self, j: int) -> dict[int, GaussianRational]:
        return dict(self.nonzero_cols()[j])

    def apply_dict(self, vec: dict[int, GaussianRational]) -> dict[int, GaussianRational]:
        """Matrix-vector product with a sparse vector ``{index: value}``."""
        cols = self.nonzero_cols()
        out: dict[int, GaussianRational] = {}
        for k, val in vec.items():
            for i, m in cols[k]:
                cur = out.get(i)
                p = m * val
                nv = p if cur is None else cur + p
                if nv.is_zero():
                    out.pop(i, None)
                else:
                    out[i] = nv
        return out

    def row_dicts(self):
        return [dict(r) for r in self.nonzero_rows()]

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("matrix addition needs equal shapes")
        return ExactMatrix(self.rows, self.cols,
                           [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("matrix subtraction needs equal shapes")
        return ExactMatrix(self.rows, self.cols,
                           [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> "ExactMatrix":
        s = gr(s)
        if s is ONE:
            return self
        return ExactMatrix(self.rows, self.cols,
                           [s * a for a in self.entries])

    def __matmul__(self, other):
        return mat_mul(self, other)

    def transpose(self) -> "ExactMatrix":
        e = self.entries
        c = self.cols
        return ExactMatrix(c, self.rows,
                           [e[i * c + j] for j in range(c) for i in range(self.rows)])

    def dagger(self) -> "ExactMatrix":
        """Conjugate transpose."""
        e = self.entries
        c = self.cols
        return ExactMatrix(c, self.rows,
                           [e[i * c + j].conjugate() for j in range(c) for i in range(self.rows)])

    def trace(self) -> GaussianRational:
        if self.rows != self.cols:
            raise ShapeError("trace needs a square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.entries[i * self.cols + i]
        return t

    def is_zero(self) -> bool:
        return all(not r for r in self.nonzero_rows())

    def is_scalar(self, s) -> bool:
        """True iff the matrix equals ``s`` times the identity."""
        if self.rows != self.cols:
            return False
        s = gr(s)
        for i in range(self.rows):
            for j, v in enumerate(self.entries[i * self.cols:(i + 1) * self.cols]):
                want = s if i == j else ZERO
                if v is not want and v != want:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def to_quads(self) -> list[list[int]]:
        """Row-major list of 4-integer scalar encodings."""
        return [v.as_quad() for v in self.entries]

    @classmethod
    def from_quads(cls, rows: int, cols: int, quads) -> "ExactMatrix":
        return cls(rows, cols, [GaussianRational.from_quad(q) for q in quads])

    def __str__(self):
        body = "; ".join(
            ", ".join(str(self.get(i, j)) for j in range(self.cols))
            for i in range(self.rows))
        return f"[{body}]"

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} {self})"


_IDENTITY_CACHE: dict[int, ExactMatrix] = {}


def _identity(n: int) -> ExactMatrix:
    m = _IDENTITY_CACHE.get(n)
    if m is None:
        data = [ZERO] * (n * n)
        for i in range(n):
            data[i * n + i] = ONE
        m = ExactMatrix(n, n, data)
        _IDENTITY_CACHE[n] = m
    return m


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact matrix product, skipping zero entries of both factors."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bn = b.nonzero_rows()
    bc = b.cols
    out = [ZERO] * (a.rows * bc)
    for i, arow in enumerate(a.nonzero_rows()):
        base = i * bc
        for k, av in arow:
            for j, bv in bn[k]:
                idx = base + j
                cur = out[idx]
                p = av * bv
                out[idx] = p if cur is ZERO else cur + p
    return ExactMatrix(a.rows, bc, out)


def sparse_row_product(row_nz, rows_nz) -> dict[int, GaussianRational]:
    """One row of a sparse product: ``sum_k row[k] * rows_nz[k]``."""
    acc: dict[int, GaussianRational] = {}
    for k, av in row_nz:
        for j, bv in rows_nz[k]:
            cur = acc.get(j)
            p = av * bv
            nv = p if cur is None else cur + p
            if nv.is_zero():
                acc.pop(j, None)
            else:
                acc[j] = nv
    return acc


def sparse_product_rows(a: ExactMatrix, b: ExactMatrix) -> list[dict[int, GaussianRational]]:
    """Rows of ``a @ b`` as sparse dicts, with no dense allocation."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bn = b.nonzero_rows()
    return [sparse_row_product(arow, bn) for arow in a.nonzero_rows()]


def merge_into(acc: dict[int, GaussianRational], extra: dict[int, GaussianRational]):
    """Sparse in-place addition of ``extra`` into ``acc``."""
    for j, v in extra.items():
        cur = acc.get(j)
        nv = v if cur is None else cur + v
        if nv.is_zero():
            acc.pop(j, None)
        else:
            acc[j] = nv
    return acc


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product with ``out[(i*b.rows+k), (j*b.cols+l)] = a[i,j]*b[k,l]``."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [ZERO] * (rows * cols)
    bn = b.nonzero_rows()
    for i, arow in enumerate(a.nonzero_rows()):
        for j, av in arow:
            for k, brow in enumerate(bn):
                base = (i * b.rows + k) * cols + j * b.cols
                for l, bv in brow:
                    out[base + l] = av * bv
    return ExactMatrix(rows, cols, out)


def kron_all(mats) -> ExactMatrix:
    """Left fold of ``kron`` over a non-empty sequence."""
    mats = list(mats)
    acc = mats[0]
    for m in mats[1:]:
        acc = kron(acc, m)
    return acc


def direct_sum(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    rows = a.rows + b.rows
    cols = a.cols + b.cols
    out = [ZERO] * (rows * cols)
    for i in range(a.rows):
        out[i * cols:i * cols + a.cols] = a.entries[i * a.cols:(i + 1) * a.cols]
    for i in range(b.rows):
        base = (a.rows + i) * cols + a.cols
        out[base:base + b.cols] = b.entries[i * b.cols:(i + 1) * b.cols]
    return ExactMatrix(rows, cols, out)


class Rref:
    """Incremental reduced row echelon form with sparse dict rows.

    Pivot rows are kept inter-reduced (each contains its own pivot column,
    with coefficient one, plus free columns only), so reducing an incoming
    row is a single pass over its pivot-column hits.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, GaussianRational]] = {}
        self._touch: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _reduce(self, row: dict[int, GaussianRational]) -> dict[int, GaussianRational]:
        row = {c: v for c, v in row.items() if not v.is_zero()}
        for c in sorted(row):
            prow = self.pivot_rows.get(c)
            if prow is None:
                continue
            coef = row.pop(c)
            for cc, vv in prow.items():
                if cc == c:
                    continue
                cur = row.get(cc)
                nv = -coef * vv if cur is None else cur - coef * vv
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        return row

    def insert(self, row: dict[int, GaussianRational]) -> bool:
        """Add one linear equation; True iff it increased the rank."""
        row = self._reduce(row)
        if not row:
            return False
        p = min(row)
        inv = row[p].inverse()
        newrow = {c: v * inv for c, v in row.items()}
        touching = self._touch.pop(p, set())
        for q in sorted(touching):
            qrow = self.pivot_rows[q]
            f = qrow.pop(p)
            for cc, vv in newrow.items():
                if cc == p:
                    continue
                cur = qrow.get(cc)
                nv = -f * vv if cur is None else cur - f * vv
                if nv.is_zero():
                    if cc in qrow:
                        del qrow[cc]
                        self._touch[cc].discard(q)
                else:
                    if cur is None:
                        self._touch.setdefault(cc, set()).add(q)
                    qrow[cc] = nv
        self.pivot_rows[p] = newrow
        for cc in newrow:
            if cc != p:
                self._touch.setdefault(cc, set()).add(p)
        return True

    def nullspace(self) -> list[dict[int, GaussianRational]]:
        """Basis of the solution space, one vector per free column, ascending."""
        basis = []
        for f in range(self.ncols):
            if f in self.pivot_rows:
                continue
            vec = {f: ONE}
            for q in sorted(self._touch.get(f, ())):
                vec[q] = -self.pivot_rows[q][f]
            basis.append(vec)
        return basis


def exact_rank(m: ExactMatrix) -> int:
    """Rank over the Gaussian rationals via exact elimination."""
    rr = Rref(m.cols)
    for row in m.nonzero_rows():
        rr.insert(dict(row))
    return rr.rank


def invert(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    if m.rows != m.cols:
        raise ShapeError("only square matrices can be inverted")
    n = m.rows
    a = [list(m.entries[i * n:(i + 1) * n]) for i in range(n)]
    b = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        b[col] = [v * inv for v in b[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return ExactMatrix(n, n, [v for row in b for v in row])


def _matrix_from_vec(vec: dict[int, GaussianRational], rows: int, cols: int) -> ExactMatrix:
    data = [ZERO] * (rows * cols)
    for idx, v in vec.items():
        data[idx] = v
    return ExactMatrix(rows, cols, data)


def _check_square(mats, dim: int):
    for g in mats:
        if g.rows != dim or g.cols != dim:
            raise ShapeError(f"expected {dim}x{dim} matrices")


def commutant_basis(gens, dim: int) -> list[ExactMatrix]:
    """Basis of ``{M : M G == G M for all G in gens}``.

    Solves the exact linear system over the dim**2 unknown entries of M.
    With no generators this is all dim**2 matrix units, in row-major order.
    """
    gens = list(gens)
    _check_square(gens, dim)
    rr = Rref(dim * dim)
    for g in gens:
        rows_nz = g.nonzero_rows()
        cols_nz = g.nonzero_cols()
        for i in range(dim):
            for j in range(dim):
                row: dict[int, GaussianRational] = {}
                for k, v in cols_nz[j]:
                    idx = i * dim + k
                    cur = row.get(idx)
                    row[idx] = v if cur is None else cur + v
                for k, v in rows_nz[i]:
                    idx = k * dim + j
                    cur = row.get(idx)
                    row[idx] = -v if cur is None else cur - v
                rr.insert(row)
    return [_matrix_from_vec(vec, dim, dim) for vec in rr.nullspace()]


_INTERTWINER_SEED = 0x5eed
_INTEGER_COMBO_BUDGET = 243
_RANDOM_COMBO_BUDGET = 200


def _combo_stream(nbasis: int):
    """Deterministic coefficient vectors: small integers first, then seeded random."""
    count = 0
    for tup in itertools.product(range(3), repeat=nbasis):
        if not any(tup):
            continue
        yield tup
        count += 1
        if count >= _INTEGER_COMBO_BUDGET:
            break
    rng = random.Random(_INTERTWINER_SEED)
    for _ in range(_RANDOM_COMBO_BUDGET):
        yield tuple(rng.randint(-9, 9) for _ in range(nbasis))


def intertwiner_space(gensA, gensB, dim: int) -> list[ExactMatrix]:
    """Basis of ``{T : T A_k == B_k T for all k}``."""
    gensA = list(gensA)
    gensB = list(gensB)
    if len(gensA) != len(gensB):
        raise ShapeError("generator lists must have equal length")
    _check_square(gensA, dim)
    _check_square(gensB, dim)
    rr = Rref(dim * dim)
    for a, b in zip(gensA, gensB):
        a_cols = a.nonzero_cols()
        b_rows = b.nonzero_rows()
        for i in range(dim):
            for j in range(dim):
                row: dict[int, GaussianRational] = {}
                for k, v in a_cols[j]:
                    idx = i * dim + k
                    cur = row.get(idx)
                    row[idx] = v if cur is None else cur + v
                for k, v in b_rows[i]:
                    idx = k * dim + j
                    cur = row.get(idx)
                    row[idx] = -v if cur is None else cur - v
                rr.insert(row)
    return [_matrix_from_vec(vec, dim, dim) for vec in rr.nullspace()]


def solve_intertwiner(gensA, gensB, dim: int) -> ExactMatrix | None:
    """An invertible exact T with ``T A_k == B_k T``, or None.

    Searches the solution space with a deterministic sequence of integer
    coefficient combinations, then a fixed-seed randomized fallback; over
    an infinite field a generic combination of an invertible-containing
    space is invertible, so budget exhaustion reports None.
    """
    basis = intertwiner_space(gensA, gensB, dim)
    if not basis:
        return None
    for coeffs in _combo_stream(len(basis)):
        acc = None
        for c, mat in zip(coeffs, basis):
            if c == 0:
                continue
            term = mat.scale(gr(c))
            acc = term if acc is None else acc + term
        if acc is None:
            continue
        if exact_rank(acc) == dim:
            return acc
    return None
