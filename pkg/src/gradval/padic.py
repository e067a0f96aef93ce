"""p-adic root isolation and local factorization of Kummer polynomials.

Everything here is exact integer arithmetic: a p-adic number is represented
by a procedure returning its residue modulo ``p^N`` on demand, and every
answer is certified (Hensel's criterion for roots, non-vanishing modulo
``p^N`` for valuations).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedExtension


def vp(x, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def peval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def pderiv(f):
    return [i * f[i] for i in range(1, len(f))]


class PadicRoot:
    """A root in Z_p of an integer polynomial, isolated by Hensel's criterion."""

    def __init__(self, f, p, start, dval):
        self.f = list(f)
        self.p = p
        self._r = start
        self._dval = dval
        self._df = pderiv(f)

    def approx(self, N):
        """Integer ``r`` in ``[0, p^N)`` congruent to the root modulo ``p^N``."""
        p, d = self.p, self._dval
        mod = p ** (N + 2 * d + 2)
        r = self._r
        while True:
            fr = peval(self.f, r)
            if fr == 0 or vp(fr, p) - d >= N:
                break
            dr = peval(self._df, r)
            unit = dr // p**d
            t = fr // p**d
            r = (r - t * pow(unit, -1, mod)) % mod
        self._r = r
        return r % p**N

    def __repr__(self):
        return f"PadicRoot(p={self.p}, ~{self.approx(4)} mod {self.p}^4)"


def roots_zp(f, p, max_depth=400):
    """All roots in Z_p of a squarefree monic integer polynomial."""
    df = pderiv(f)
    stack = [(r, 1) for r in range(p) if peval(f, r) % p == 0]
    found = []
    while stack:
        r, j = stack.pop()
        if j > max_depth:
            raise UnsupportedExtension("p-adic root isolation did not terminate")
        fr = peval(f, r)
        dr = peval(df, r)
        if dr != 0:
            vd = vp(dr, p)
            vf = vp(fr, p) if fr != 0 else None
            if vf is None or (vf > 2 * vd and vf - vd >= j):
                found.append(PadicRoot(f, p, r, vd))
                continue
        pj = p**j
        for k in range(p):
            c = r + k * pj
            if peval(f, c) % (pj * p) == 0:
                stack.append((c, j + 1))
    found.sort(key=lambda rt: rt.approx(16))
    return found


def _poly_mul_mod(f, g, m):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % m
    return out


def _poly_divexact_mod(f, g, m):
    """Quotient of monic ``g`` into ``f`` modulo ``m`` (remainder discarded)."""
    f = [c % m for c in f]
    dq = len(g) - 1
    q = [0] * (len(f) - dq)
    for i in range(len(f) - 1, dq - 1, -1):
        c = f[i] % m
        q[i - dq] = c
        if c:
            for j in range(dq + 1):
                f[i - dq + j] = (f[i - dq + j] - c * g[j]) % m
    return q


class LocalFactor:
    """A monic irreducible factor over Q_p, known to any precision."""

    def __init__(self, degree, approx_fn, label):
        self.degree = degree
        self._approx = approx_fn
        self.label = label
        self._cache = {}

    def approx(self, N):
        """Integer coefficients (low degree first) modulo ``p^N``."""
        if N not in self._cache:
            self._cache[N] = tuple(self._approx(N))
        return self._cache[N]


def kummer_local_factors(n, a, p):
    """Irreducible factors of ``x^n - a`` over ``Q_p`` for ``n <= 4``."""
    f = [-a] + [0] * (n - 1) + [1]
    roots = roots_zp(f, p)
    factors = []
    for k, rt in enumerate(roots):
        factors.append(
            LocalFactor(1, lambda N, rt=rt: [(-rt.approx(N)) % p**N, 1], f"root{k}")
        )
    m = n - len(roots)
    if m == 0:
        return factors
    if m == 4:
        sq = roots_zp([-a, 0, 1], p)
        if sq:
            s = sq[0]
            factors.append(LocalFactor(2, lambda N: [(-s.approx(N)) % p**N, 0, 1], "sq-"))
            factors.append(LocalFactor(2, lambda N: [s.approx(N) % p**N, 0, 1], "sq+"))
            return factors
        bs = roots_zp([4 * a, 0, 0, 0, 1], p)
        if bs:
            b = bs[0]

            def quad(N, sign):
                bb = b.approx(N + 1)
                half = (bb * bb % p ** (N + 1)) // 2 if p == 2 else bb * bb * pow(2, -1, p**N)
                return [half % p**N, (sign * bb) % p**N, 1]

            factors.append(LocalFactor(2, lambda N: quad(N, 1), "pair+"))
            factors.append(LocalFactor(2, lambda N: quad(N, -1), "pair-"))
            return factors
        factors.append(LocalFactor(4, lambda N: [c % p**N for c in f], "whole"))
        return factors
    if not roots:
        factors.append(LocalFactor(n, lambda N: [c % p**N for c in f], "whole"))
        return factors

    def cofactor(N):
        mod = p**N
        g = [c % mod for c in f]
        for rt in roots:
            g = _poly_divexact_mod(g, [(-rt.approx(N)) % mod, 1], mod)
        return g

    factors.append(LocalFactor(m, cofactor, "cofactor"))
    return factors


def resultant(f, g):
    """Resultant of two integer polynomials (Sylvester matrix, Bareiss)."""
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(M):
    n = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def factor_valuation(factor: LocalFactor, num_poly, p, start=8, limit=4096):
    """``v_p(Res(g, h)) / deg g`` for the local factor ``g`` and integer ``h``.

    This is the normalized valuation of ``h(theta)`` for a root ``theta`` of
    ``g``; ``h(theta)`` must be nonzero.
    """
    N = start
    while N <= limit:
        g = factor.approx(N)
        r = resultant(list(g), list(num_poly)) % p**N
        if r != 0:
            return Fraction(vp(r, p), factor.degree)
        N *= 2
    raise UnsupportedExtension("precision limit reached evaluating a local valuation")
