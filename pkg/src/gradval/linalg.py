"""Exact linear algebra over fields and over the integers.

Field-generic routines take a ``field`` object exposing ``zero``, ``one``,
``add``, ``sub``, ``mul``, ``div`` and ``is_zero``; every base field of the
package satisfies this, and :data:`QQ` provides it for plain ``Fraction``.
"""

from fractions import Fraction
from math import gcd


class _Rationals:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def is_zero(a):
        return a == 0


QQ = _Rationals()


def rref(rows, field=QQ):
    """Reduced row echelon form.

    Returns ``(R, pivots, T)`` where ``T`` is the transformation with
    ``T @ rows == R`` (T is square, invertible).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    R = [list(r) for r in rows]
    T = [[field.one if i == j else field.zero for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if not field.is_zero(R[i][c])), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        T[r], T[p] = T[p], T[r]
        inv = field.div(field.one, R[r][c])
        R[r] = [field.mul(inv, x) for x in R[r]]
        T[r] = [field.mul(inv, x) for x in T[r]]
        for i in range(m):
            if i != r and not field.is_zero(R[i][c]):
                f = R[i][c]
                R[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(R[i], R[r])]
                T[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots, T


def rank(rows, field=QQ):
    if not rows:
        return 0
    return len(rref(rows, field)[1])


def solve_left(basis, v, field=QQ):
    """Coefficients ``c`` with ``sum(c[i] * basis[i]) == v``, or None.

    ``basis`` rows must be linearly independent.
    """
    if not basis:
        return [] if all(field.is_zero(x) for x in v) else None
    R, pivots, T = rref(basis, field)
    k = len(pivots)
    residual = list(v)
    coeffs_r = []
    for i, c in enumerate(pivots):
        f = residual[c]
        coeffs_r.append(f)
        if not field.is_zero(f):
            residual = [field.sub(x, field.mul(f, y)) for x, y in zip(residual, R[i])]
    if any(not field.is_zero(x) for x in residual):
        return None
    # v = sum coeffs_r[i] * R[i] = sum coeffs_r[i] * T[i] @ basis
    out = [field.zero] * len(basis)
    for i in range(k):
        for j in range(len(basis)):
            out[j] = field.add(out[j], field.mul(coeffs_r[i], T[i][j]))
    return out


def det(M, field=QQ):
    n = len(M)
    A = [list(r) for r in M]
    d = field.one
    for c in range(n):
        p = next((i for i in range(c, n) if not field.is_zero(A[i][c])), None)
        if p is None:
            return field.zero
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = field.sub(field.zero, d)
        d = field.mul(d, A[c][c])
        inv = field.div(field.one, A[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(A[i][c]):
                f = field.mul(A[i][c], inv)
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


def left_kernel(rows, field=QQ):
    """Basis of ``{c : c @ rows == 0}``."""
    R, pivots, T = rref(rows, field)
    return [T[i] for i in range(len(pivots), len(rows))]


def xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(rows):
    """Row-style Hermite normal form over the integers.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ rows == H``; zero rows of
    ``H`` come last.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    H = [list(map(int, r)) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-reduce column c among rows r..m-1 onto row r
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [x * p + y * q for p, q in zip(Hr, Hi)]
            H[i] = [-bg * p + ag * q for p, q in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [x * p + y * q for p, q in zip(Ur, Ui)]
            U[i] = [-bg * p + ag * q for p, q in zip(Ur, Ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [p - q * s for p, s in zip(H[i], H[r])]
                U[i] = [p - q * s for p, s in zip(U[i], U[r])]
        r += 1
    return H, U


def int_left_kernel(rows):
    """Z-basis of ``{c in Z^m : c @ rows == 0}`` for an integer matrix."""
    if not rows:
        return []
    H, U = hnf(rows)
    return [U[i] for i in range(len(rows)) if all(x == 0 for x in H[i])]


def int_row_basis(rows, width):
    """Z-basis (HNF rows) of the lattice spanned by integer ``rows``."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    H, _ = hnf(rows)
    return [r for r in H if any(r)]


def common_denominator(values):
    d = 1
    for v in values:
        v = Fraction(v)
        d = d * v.denominator // gcd(d, v.denominator)
    return d
