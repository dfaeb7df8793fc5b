"""Exact rational and integer linear algebra.

Everything in this package runs over the rationals with arbitrary-precision
integers; there is no floating point anywhere.  Dimensions are tiny (at most
15 ambient coordinates), so matrices are stored densely.

``Rat`` is the rational scalar type: ``gmpy2.mpq`` when available (much
faster), otherwise ``fractions.Fraction``.  Both expose ``numerator`` /
``denominator`` and interoperate with plain ``int``, which is what the rest
of the code relies on.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat


class ExactError(Exception):
    """Base class for exact-arithmetic failures."""


class ZeroPivotNotPD(ExactError):
    """LDL^T hit a zero pivot on a block where definiteness is undecided."""


class SingularMatrix(ExactError):
    pass


class ZeroInput(ExactError):
    pass


class NotPositiveDefinite(ExactError):
    pass


class AffinelyDependent(ExactError):
    pass


def _norm(x):
    """Collapse integral rationals to int so integer fast paths stay integer."""
    if isinstance(x, int):
        return x
    if x.denominator == 1:
        return int(x)
    return x


def as_rat(x) -> Rat:
    return Rat(x)


def rat_from_pair(num: int, den: int) -> Rat:
    return Rat(num, den)


def floor_rat(x) -> int:
    if isinstance(x, int):
        return x
    return x.numerator // x.denominator


def ceil_rat(x) -> int:
    if isinstance(x, int):
        return x
    return -((-x.numerator) // x.denominator)


def floor_sqrt_rat(x) -> int:
    """floor(sqrt(x)) for a nonnegative rational x, exactly."""
    if x < 0:
        raise ValueError("negative radicand")
    if isinstance(x, int):
        return isqrt(x)
    p, q = x.numerator, x.denominator
    return isqrt(p * q) // q


class Mat:
    """Dense matrix with exact rational entries (immutable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(_norm(x) for x in row) for row in entries)
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix")

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r: int, c: int) -> "Mat":
        return Mat([[0] * c for _ in range(r)])

    @staticmethod
    def from_cols(cols: Sequence[Sequence]) -> "Mat":
        return Mat(list(zip(*cols)))

    def row(self, i: int):
        return self.entries[i]

    def col(self, j: int):
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.entries)))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.entries))
        return Mat(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries]
        )

    def mul_vec(self, v: Sequence):
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Mat({[list(r) for r in self.entries]})"

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.entries for x in row)


class SymMat:
    """Symmetric matrix over the rationals, used for Gram matrices and
    quadratic forms as well as for normals and rays in symmetric-matrix space.
    """

    __slots__ = ("d", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(_norm(x) for x in row) for row in entries)
        d = len(rows)
        for i in range(d):
            if len(rows[i]) != d:
                raise ValueError("not square")
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("not symmetric")
        self.d = d
        self.entries = rows

    @staticmethod
    def identity(d: int) -> "SymMat":
        return SymMat([[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @staticmethod
    def zero(d: int) -> "SymMat":
        return SymMat([[0] * d for _ in range(d)])

    @staticmethod
    def from_lower(d: int, lower: Sequence) -> "SymMat":
        """Build from the d(d+1)/2 lower-triangular entries, row-major."""
        if len(lower) != d * (d + 1) // 2:
            raise ValueError("wrong number of entries")
        rows = [[0] * d for _ in range(d)]
        k = 0
        for i in range(d):
            for j in range(i + 1):
                rows[i][j] = lower[k]
                rows[j][i] = lower[k]
                k += 1
        return SymMat(rows)

    @staticmethod
    def outer(v: Sequence[int]) -> "SymMat":
        """Rank-one form v v^T."""
        return SymMat([[a * b for b in v] for a in v])

    def lower(self) -> tuple:
        """Lower-triangular entries, row-major: (a11, a21, a22, a31, ...)."""
        return tuple(self.entries[i][j] for i in range(self.d) for j in range(i + 1))

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def quad(self, v: Sequence):
        """Evaluate the quadratic form v^T A v."""
        e = self.entries
        total = 0
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = e[i]
            s = 0
            for j in range(i):
                vj = v[j]
                if vj:
                    s += row[j] * vj
            total += vi * (vi * row[i] + 2 * s)
        return _norm(total)

    def bilin(self, u: Sequence, v: Sequence):
        """Evaluate u^T A v."""
        return _norm(sum(ui * sum(a * b for a, b in zip(row, v))
                         for ui, row in zip(u, self.entries) if ui))

    def mul_vec(self, v: Sequence):
        return tuple(_norm(sum(a * b for a, b in zip(row, v))) for row in self.entries)

    def pair(self, other: "SymMat"):
        """Trace inner product <A, B> = Trace(AB)."""
        a, b = self.entries, other.entries
        d = self.d
        total = 0
        for i in range(d):
            total += a[i][i] * b[i][i]
            for j in range(i):
                total += 2 * a[i][j] * b[i][j]
        return _norm(total)

    def __add__(self, other: "SymMat") -> "SymMat":
        return SymMat([[x + y for x, y in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "SymMat") -> "SymMat":
        return SymMat([[x - y for x, y in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)])

    def scale(self, c) -> "SymMat":
        return SymMat([[c * x for x in row] for row in self.entries])

    def __neg__(self) -> "SymMat":
        return self.scale(-1)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.entries for x in row)

    def to_mat(self) -> Mat:
        return Mat(self.entries)

    def congruence(self, u: Mat) -> "SymMat":
        """U^T A U for a square matrix U."""
        ut_a = u.transpose() @ self.to_mat()
        prod = ut_a @ u
        return SymMat(prod.entries)

    def rank(self) -> int:
        return rank(self.to_mat())

    def det(self):
        return det(self.to_mat())

    def is_positive_definite(self) -> bool:
        try:
            _, diag = ldlt(self)
        except ZeroPivotNotPD:
            return False
        return all(x > 0 for x in diag)

    def is_positive_semidefinite(self) -> bool:
        return _is_psd(self.entries)

    def __eq__(self, other):
        return isinstance(other, SymMat) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SymMat({[list(r) for r in self.entries]})"


@lru_cache(maxsize=4096)
def ldlt(q: SymMat) -> tuple[Mat, tuple]:
    """Exact LDL^T factorization of a symmetric matrix.

    Returns a unit lower-triangular L and the diagonal D with Q = L D L^T.
    Q is positive definite iff every entry of D is positive.  Raises
    ZeroPivotNotPD when a zero pivot appears while the remaining block is
    nonzero there, which means the factorization (without pivoting) does not
    exist; such a form is never positive definite.  Results are cached
    (SymMat is immutable), since enumeration revisits the same form often.
    """
    d = q.d
    a = [[Rat(x) for x in row] for row in q.entries]
    lower = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    diag = []
    for k in range(d):
        pivot = a[k][k]
        diag.append(_norm(pivot))
        if pivot == 0:
            if any(a[i][k] != 0 for i in range(k + 1, d)):
                raise ZeroPivotNotPD(f"zero pivot at index {k}")
            continue
        for i in range(k + 1, d):
            f = a[i][k] / pivot
            lower[i][k] = _norm(f)
            if f:
                for j in range(k, d):
                    a[i][j] -= f * a[k][j]
    return Mat(lower), tuple(diag)


def _is_psd(rows) -> bool:
    """Positive semidefiniteness by symmetric elimination with zero handling."""
    a = [[Rat(x) for x in row] for row in rows]
    n = len(a)
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[i][k] != 0 for i in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True


def solve(a: Mat, b: Sequence) -> tuple:
    """Solve A x = b exactly for square nonsingular A."""
    n = a.rows
    if a.cols != n:
        raise ValueError("matrix not square")
    m = [[Rat(x) for x in row] + [Rat(bv)] for row, bv in zip(a.entries, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("singular system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / pv
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return tuple(_norm(m[i][n] / m[i][i]) for i in range(n))


def inverse(a: Mat) -> Mat:
    n = a.rows
    cols = [solve(a, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return Mat.from_cols(cols)


def rank(a: Mat) -> int:
    """Exact rank over the rationals."""
    m = [[Rat(x) for x in row] for row in a.entries]
    rows, cols = a.rows, a.cols
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        for i in range(r + 1, rows):
            if m[i][col] != 0:
                f = m[i][col] / pv
                for j in range(col, cols):
                    m[i][j] -= f * m[r][j]
        r += 1
        if r == rows:
            break
    return r


def rank_of_rows(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return rank(Mat(rows))


def det(a: Mat):
    """Exact determinant (fraction-free for integer input)."""
    n = a.rows
    if a.cols != n:
        raise ValueError("matrix not square")
    if n == 0:
        return 1
    if a.is_integral():
        return _det_bareiss([list(r) for r in a.entries])
    m = [[Rat(x) for x in row] for row in a.entries]
    sign = 1
    result = Rat(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        result *= pv
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / pv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return _norm(sign * result)


def _det_bareiss(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pkk * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pkk
    return sign * m[n - 1][n - 1]


def nullspace(rows: Sequence[Sequence]) -> list[tuple]:
    """Basis of the right null space of the matrix with the given rows.

    Returns integer vectors (denominators cleared, gcd-normalized), in a
    deterministic order derived from the reduced echelon form.
    """
    if not rows:
        raise ValueError("need the ambient dimension; pass at least one row")
    cols = len(rows[0])
    m = [[Rat(x) for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Rat(0)] * cols
        v[fc] = Rat(1)
        for prow, pcol in enumerate(pivots):
            v[pcol] = -m[prow][fc]
        basis.append(clear_denominators(v))
    return basis


def clear_denominators(v: Sequence) -> tuple:
    """Scale a rational vector to a primitive integer vector (gcd 1),
    preserving orientation."""
    denoms = [1 if isinstance(x, int) else x.denominator for x in v]
    scale = 1
    for dn in denoms:
        scale = scale * dn // gcd(scale, dn)
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def gcd_normalize(obj, *, orient: bool = True):
    """Divide an integer vector or integral SymMat by the gcd of its entries.

    With ``orient=True`` (the convention for rays) the sign is fixed so the
    first nonzero entry is positive.  Raises ZeroInput on the zero vector.
    """
    if isinstance(obj, SymMat):
        lo = gcd_normalize(obj.lower(), orient=orient)
        return SymMat.from_lower(obj.d, lo)
    vec = tuple(obj)
    if not all(isinstance(x, int) for x in vec):
        raise ValueError("gcd_normalize expects integer entries")
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise ZeroInput("zero vector")
    vec = tuple(x // g for x in vec)
    if orient:
        lead = next(x for x in vec if x != 0)
        if lead < 0:
            vec = tuple(-x for x in vec)
    return vec


def symmat_clear_denominators(s: SymMat, *, orient: bool = False) -> SymMat:
    """Scale a rational SymMat by a positive rational to a primitive integral
    one.  Orientation (overall sign) is preserved unless ``orient``."""
    lo = clear_denominators(s.lower())
    if orient:
        lo = gcd_normalize(lo)
    return SymMat.from_lower(s.d, lo)


def hermite_diagonal(vectors: Sequence[Sequence[int]], d: int) -> list[int]:
    """Diagonal of the row-style Hermite normal form of the integer span.

    Returns a list of length ``d``; zeros mark missing rank.  The product of
    the nonzero entries is the index of the span inside its saturation.
    """
    work = [list(v) for v in vectors]
    diag = [0] * d
    row = 0
    for col in range(d):
        while True:
            nz = [i for i in range(row, len(work)) if work[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(work[i][col]))
            work[row], work[i0] = work[i0], work[row]
            p = work[row][col]
            done = True
            for i in range(row + 1, len(work)):
                if work[i][col] != 0:
                    f = work[i][col] // p
                    work[i] = [a - f * b for a, b in zip(work[i], work[row])]
                    if work[i][col] != 0:
                        done = False
            if done:
                break
        if row < len(work) and work[row][col] != 0:
            diag[col] = abs(work[row][col])
            row += 1
    return diag


def lattice_span_full(vectors: Sequence[Sequence[int]], d: int) -> bool:
    """True iff the integer span of the vectors is all of Z^d."""
    if not vectors:
        return d == 0
    diag = hermite_diagonal(vectors, d)
    prod = 1
    for x in diag:
        if x == 0:
            return False
        prod *= x
    return prod == 1


def parse_form(text: str) -> SymMat:
    """Parse the matrix text format: the dimension followed by the
    d(d+1)/2 lower-triangular entries as ``num`` or ``num/den`` tokens."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty form description")
    d = int(tokens[0])
    need = d * (d + 1) // 2
    if len(tokens) != 1 + need:
        raise ValueError(f"expected {need} entries for dimension {d}, got {len(tokens) - 1}")
    entries = []
    for tok in tokens[1:]:
        if "/" in tok:
            num, den = tok.split("/", 1)
            entries.append(Rat(int(num), int(den)))
        else:
            entries.append(int(tok))
    return SymMat.from_lower(d, entries)


def format_form(q: SymMat) -> str:
    parts = [str(q.d)]
    for x in q.lower():
        if isinstance(x, int):
            parts.append(str(x))
        else:
            parts.append(f"{x.numerator}/{x.denominator}")
    return " ".join(parts)
