"""Exact scalar and lattice kernels: quadratic-extension arithmetic, projective
points, integer matrices with Smith normal form, and the strict-positivity
alternative for integer weight families.

Everything here is a pure function on immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, MixedExtension, NoRoot
from .rationals import ONE, ZERO, Q, lcm_all, rat, rat_key, rat_str, rational_sqrt_parts, squarefree_decompose


def _merge_ext(d1: int | None, d2: int | None) -> int | None:
    if d1 is None:
        return d2
    if d2 is None or d1 == d2:
        return d1
    raise MixedExtension(f"cannot mix sqrt({d1}) with sqrt({d2})")


class QuadExtScalar:
    """Element ``a + b*sqrt(d)`` of Q or of one real/imaginary quadratic extension.

    ``d`` is a squarefree integer (never 0 or 1); ``d is None`` marks a plain
    rational, and any value with ``b == 0`` collapses to that form, so equality
    is componentwise across construction paths.
    """

    __slots__ = ("d", "a", "b")

    def __init__(self, a, b=0, d: int | None = None):
        a = Q(a)
        b = Q(b)
        if b == 0:
            d = None
        elif d is None:
            raise InputError("irrational part requires an extension d")
        else:
            s, d0 = squarefree_decompose(d)
            if d0 in (0, 1):
                raise InputError(f"d={d} is a perfect square or zero")
            if s != 1:
                b = b * s
                d = d0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *_):
        raise AttributeError("QuadExtScalar is immutable")

    @classmethod
    def rational(cls, a) -> "QuadExtScalar":
        return cls(a)

    def _coerce(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            return other
        return QuadExtScalar(rat(other))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.d is None

    def __add__(self, other):
        o = self._coerce(other)
        d = _merge_ext(self.d, o.d)
        return QuadExtScalar(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        o = self._coerce(other)
        d = _merge_ext(self.d, o.d)
        if d is None:
            return QuadExtScalar(self.a * o.a)
        return QuadExtScalar(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtScalar":
        return QuadExtScalar(self.a, -self.b, self.d)

    def norm(self) -> Q:
        """Field norm a^2 - d*b^2; zero only for the zero element."""
        if self.d is None:
            return self.a * self.a
        return self.a * self.a - Q(self.d) * self.b * self.b

    def inverse(self) -> "QuadExtScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.norm()
        return QuadExtScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, str)) or type(other).__name__ in ("Fraction", "mpq"):
            other = self._coerce(other)
        if not isinstance(other, QuadExtScalar):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sort_key(self):
        return (self.d or 0, rat_key(self.a), rat_key(self.b))

    def to_json_dict(self) -> dict:
        return {"a": rat_str(self.a), "b": rat_str(self.b), "d": self.d}

    @classmethod
    def from_json_dict(cls, data: dict) -> "QuadExtScalar":
        return cls(rat(data["a"]), rat(data["b"]), data["d"])

    def __repr__(self):
        return f"QuadExtScalar({self})"

    def __str__(self):
        if self.d is None:
            return rat_str(self.a)
        parts = []
        if self.a != 0:
            parts.append(rat_str(self.a))
        coeff = "" if self.b == 1 else ("-" if self.b == -1 else rat_str(self.b) + "*")
        term = f"{coeff}sqrt({self.d})"
        if parts and not term.startswith("-"):
            return f"{parts[0]}+{term}"
        return "".join(parts) + term


QE_ZERO = QuadExtScalar(0)
QE_ONE = QuadExtScalar(1)


class ProjPoint:
    """Point of the projective line over Q or one quadratic extension.

    Stored in canonical form: the last nonzero coordinate is scaled to 1, so
    componentwise equality is projective equality.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        if not isinstance(x, QuadExtScalar):
            x = QuadExtScalar(rat(x))
        if not isinstance(y, QuadExtScalar):
            y = QuadExtScalar(rat(y))
        _merge_ext(x.d, y.d)
        if y.is_zero():
            if x.is_zero():
                raise InputError("(0, 0) is not a projective point")
            x, y = QE_ONE, QE_ZERO
        else:
            x, y = x / y, QE_ONE
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *_):
        raise AttributeError("ProjPoint is immutable")

    @classmethod
    def from_affine(cls, t) -> "ProjPoint":
        return cls(t if isinstance(t, QuadExtScalar) else QuadExtScalar(rat(t)), QE_ONE)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(QE_ONE, QE_ZERO)

    @property
    def is_infinity(self) -> bool:
        return self.y.is_zero()

    def affine(self) -> QuadExtScalar:
        if self.is_infinity:
            raise InputError("the point at infinity has no affine coordinate")
        return self.x

    @property
    def extension(self) -> int | None:
        return _merge_ext(self.x.d, self.y.d)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def sort_key(self):
        return (1 if self.is_infinity else 0, self.x.sort_key())

    def __repr__(self):
        return f"ProjPoint({self})"

    def __str__(self):
        return "inf" if self.is_infinity else str(self.x)


class IntMatrix:
    """Immutable rectangular matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(int(x) for x in row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(row) != cols for row in entries):
            raise InputError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *_):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries)) if self.rows else IntMatrix([[] for _ in range(self.cols)])

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError("dimension mismatch in product")
        ot = other.entries
        return IntMatrix(
            [
                [sum(a * ot[k][j] for k, a in enumerate(row)) for j in range(other.cols)]
                for row in self.entries
            ]
        )

    def apply(self, vector):
        """Matrix times integer column vector."""
        if len(vector) != self.cols:
            raise InputError("dimension mismatch in matrix-vector product")
        return tuple(sum(a * v for a, v in zip(row, vector)) for row in self.entries)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("dimension mismatch in difference")
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise InputError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]})"


def _primitive(vector) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for v in vector:
        g = math.gcd(g, v)
    if g <= 1:
        return tuple(int(v) for v in vector)
    return tuple(int(v) // g for v in vector)


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with U*A*V = D and d_i | d_{i+1} >= 0."""
    m = [list(row) for row in a.entries]
    rows, cols = a.rows, a.cols
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(p, q, r00, r01, r10, r11):
        for mat in (m, u):
            rp = mat[p]
            rq = mat[q]
            for j in range(len(rp)):
                rp[j], rq[j] = r00 * rp[j] + r01 * rq[j], r10 * rp[j] + r11 * rq[j]

    def col_op(p, q, c00, c01, c10, c11):
        for mat in (m, v):
            for row in mat:
                row[p], row[q] = c00 * row[p] + c10 * row[q], c01 * row[p] + c11 * row[q]

    def swap_rows(p, q):
        m[p], m[q] = m[q], m[p]
        u[p], u[q] = u[q], u[p]

    def swap_cols(p, q):
        for mat in (m, v):
            for row in mat:
                row[p], row[q] = row[q], row[p]

    t = 0
    while t < min(rows, cols):
        # bring a smallest-magnitude nonzero entry of the trailing block to (t, t)
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        # plain elimination while the pivot divides; a gcd step otherwise
        # (each gcd step strictly shrinks the pivot, so this terminates)
        while True:
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    if m[i][t] % m[t][t] == 0:
                        row_op(t, i, 1, 0, -(m[i][t] // m[t][t]), 1)
                    else:
                        g, p, q = _xgcd(m[t][t], m[i][t])
                        row_op(t, i, p, q, -m[i][t] // g, m[t][t] // g)
            if any(m[t][j] != 0 for j in range(t + 1, cols)):
                for j in range(t + 1, cols):
                    if m[t][j] != 0:
                        if m[t][j] % m[t][t] == 0:
                            col_op(t, j, 1, -(m[t][j] // m[t][t]), 0, 1)
                        else:
                            g, p, q = _xgcd(m[t][t], m[t][j])
                            col_op(t, j, p, -m[t][j] // g, q, m[t][t] // g)
                if any(m[i][t] != 0 for i in range(t + 1, rows)):
                    continue
            break

        # the pivot must divide the whole trailing block for the divisor chain
        d = m[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, 1, 1, 0, 1)
            continue

        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return IntMatrix(u), IntMatrix(m), IntMatrix(v)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) > 0 together with p, q such that p*a + q*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def integer_kernel(a: IntMatrix) -> list[tuple[int, ...]]:
    """Saturated basis of the integer kernel {v : A v = 0}."""
    _, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(d.rows, d.cols)) if d[i, i] != 0)
    basis = [v.col(j) for j in range(rank, a.cols)]
    return [tuple(int(x) for x in b) for b in basis]


def order_from_vertex(vertex) -> int:
    """Smallest k >= 1 making k*v integral: the lcm of the reduced denominators."""
    dens = [int(Q(x).denominator) for x in vertex]
    return lcm_all(dens) if dens else 1


def quadratic_roots(a, b, c) -> tuple[QuadExtScalar, ...]:
    """Distinct roots of a*t^2 + b*t + c over Q or one quadratic extension.

    Degenerate a == 0 yields the single linear root; a double root is returned
    once.  Irrational pairs are ordered positive-sqrt part first, rational
    pairs larger root first.
    """
    a, b, c = Q(rat(a)), Q(rat(b)), Q(rat(c))
    if a == 0:
        if b == 0:
            if c == 0:
                raise InputError("zero polynomial has every root")
            raise NoRoot("constant nonzero polynomial")
        return (QuadExtScalar(-c / b),)
    disc = b * b - 4 * a * c
    if disc == 0:
        return (QuadExtScalar(-b / (2 * a)),)
    s, d = rational_sqrt_parts(disc)
    base = -b / (2 * a)
    if d == 1:
        r1 = QuadExtScalar(base + s / (2 * a))
        r2 = QuadExtScalar(base - s / (2 * a))
        return (r1, r2) if r1.a > r2.a else (r2, r1)
    half = s / (2 * a)
    if half < 0:
        half = -half
    return (QuadExtScalar(base, half, d), QuadExtScalar(base, -half, d))


# ---------------------------------------------------------------------------
# Strict-positivity alternative for integer weight families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositiveCombination:
    """Strictly positive rational lambda with sum(lambda_i * w_i) = 0."""

    coefficients: tuple

    def __iter__(self):
        return iter(self.coefficients)


@dataclass(frozen=True)
class SemipositiveWitness:
    """Integer v with <v, w_i> >= 0 for every column and > 0 for at least one."""

    vector: tuple[int, ...]


def solve_positive_combination(w: IntMatrix) -> PositiveCombination | SemipositiveWitness:
    """Decide the strict alternative for the columns w_1..w_n of ``w``.

    Exactly one of the two outcomes exists: either a strictly positive rational
    vector lambda (normalised to lambda_i >= 1) with ``w @ lambda = 0``, or an
    integer witness pairing nonnegatively with every column and positively
    with at least one.  Decided by exact phase-one simplex on
    ``{w x = -w 1, x >= 0}`` with the witness read off the Farkas dual.
    """
    n = w.cols
    if n < 1:
        raise InputError("need at least one column")
    d = w.rows
    if d == 0:
        return PositiveCombination(tuple(ONE for _ in range(n)))
    rhs = [-sum(w.row(i)) for i in range(d)]
    feasible, payload = _phase_one([list(w.row(i)) for i in range(d)], rhs)
    if feasible:
        lam = tuple(ONE + x for x in payload)
        assert all(x >= 1 for x in lam)
        for i in range(d):
            assert sum(Q(c) * l for c, l in zip(w.row(i), lam)) == 0
        return PositiveCombination(lam)
    v = _integerize(payload)
    v = tuple(-x for x in v)
    pairings = [sum(a * b for a, b in zip(v, w.col(j))) for j in range(n)]
    assert all(p >= 0 for p in pairings) and any(p > 0 for p in pairings)
    return SemipositiveWitness(v)


def _phase_one(a_rows, rhs):
    """Feasibility of {A x = b, x >= 0} by exact simplex with Bland's rule.

    Returns (True, x) on feasibility, else (False, y) with y^T A <= 0 and
    y^T b > 0 (a Farkas witness for the original row orientation).
    """
    m = len(a_rows)
    n = len(a_rows[0])
    signs = []
    tab = []
    for i in range(m):
        row = [Q(x) for x in a_rows[i]]
        b = Q(rhs[i])
        s = 1
        if b < 0:
            s = -1
            row = [-x for x in row]
            b = -b
        signs.append(s)
        tab.append(row + [ONE if j == i else ZERO for j in range(m)] + [b])
    ncols = n + m
    basis = list(range(n, n + m))
    # reduced-cost row for minimising the artificial sum
    z = [ZERO] * (ncols + 1)
    for j in range(ncols):
        z[j] = (ONE if j >= n else ZERO) - sum(tab[i][j] for i in range(m))
    z[ncols] = -sum(tab[i][ncols] for i in range(m))

    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][ncols] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:  # phase one is bounded below by zero
            raise AssertionError("unbounded phase-one objective")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * p for x, p in zip(tab[i], tab[leave])]
        if z[enter] != 0:
            f = z[enter]
            z = [x - f * p for x, p in zip(z, tab[leave])]
        basis[leave] = enter

    value = -z[ncols]
    if value == 0:
        x = [ZERO] * n
        for i, bj in enumerate(basis):
            if bj < n:
                x[bj] = tab[i][ncols]
        return True, x
    # dual multipliers from the artificial reduced costs: y_i = 1 - zbar_{art_i}
    y = [ONE - z[n + i] for i in range(m)]
    return False, [signs[i] * y[i] for i in range(m)]


def _integerize(values) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector."""
    scale = lcm_all([int(Q(v).denominator) for v in values]) if values else 1
    ints = [int(Q(v) * scale) for v in values]
    return _primitive(ints)
