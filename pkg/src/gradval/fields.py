"""Exact base fields: Q, F_p, simple extensions, rational function fields.

Elements are plain hashable Python values (``Fraction``, ``int``, tuples), and
all arithmetic goes through the field object, e.g. ``F.mul(a, b)``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from sympy import integer_nthroot, isprime

from . import polys as P
from .errors import FieldMismatch, UsageError, ZeroElement
from .linalg import QQ, solve_left


class BaseField:
    """Common interface; subclasses define the representation."""

    kind = "abstract"

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def eq(self, a, b):
        return a == b

    def __eq__(self, other):
        return isinstance(other, BaseField) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(str(self.descriptor()))

    def __repr__(self):
        return self.name()

    # tower helpers
    def tower(self):
        """Fields from self down to the prime field."""
        out = [self]
        f = self
        while getattr(f, "base", None) is not None:
            f = f.base
            out.append(f)
        return out

    def prime_field(self):
        return self.tower()[-1]

    def generators(self):
        """Mapping name -> element of self for every named generator in the tower."""
        out = {}
        for f in reversed(self.tower()[:-1]):
            out = {k: self.coerce(v, f) for k, v in out.items()}
            out[f.var] = self.coerce(f.gen(), f)
        return out

    def coerce(self, a, source):
        """Image of ``a`` (an element of a field in this tower) in self."""
        if source == self:
            return a
        chain = self.tower()
        if source not in chain:
            raise FieldMismatch(f"{source} is not a subfield in the tower of {self}")
        idx = chain.index(source)
        for f in reversed(chain[:idx]):
            a = f.embed_base(a)
        return a

    @property
    def char(self):
        return self.prime_field().char

    def random_element(self, rng: random.Random, size=3):
        raise NotImplementedError


class Rationals(BaseField):
    kind = "rationals"
    zero = Fraction(0)
    one = Fraction(1)
    base = None
    char = 0
    abs_degree = 1
    transcendental = False

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroElement("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def to_str(self, a):
        return str(Fraction(a))

    def descriptor(self):
        return {"kind": "rationals"}

    def name(self):
        return "Q"

    def coords(self, a):
        return [Fraction(a)]

    def from_coords(self, c):
        return Fraction(c[0])

    scalars = QQ

    def contains(self, a):
        return isinstance(a, (int, Fraction))

    def random_element(self, rng, size=3):
        return Fraction(rng.randint(-size * 3, size * 3), rng.randint(1, size))


class PrimeField(BaseField):
    kind = "prime"
    base = None
    abs_degree = 1
    transcendental = False

    def __init__(self, p):
        p = int(p)
        if not isprime(p):
            raise UsageError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    @property
    def char(self):
        return self.p

    @property
    def scalars(self):
        return self

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroElement("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroElement(f"{q} has no image in F_{self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def to_str(self, a):
        return str(a % self.p)

    def descriptor(self):
        return {"kind": "prime", "p": self.p}

    def name(self):
        return f"F_{self.p}"

    def coords(self, a):
        return [a % self.p]

    def from_coords(self, c):
        return c[0] % self.p

    def elements(self):
        return list(range(self.p))

    @property
    def order(self):
        return self.p

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.p

    def random_element(self, rng, size=3):
        return rng.randrange(self.p)


def _irreducible_over_fp(F, f):
    """Rabin-style test for a monic polynomial over a prime field."""
    n = P.deg(f)
    if n < 1:
        return False
    x = (F.zero, F.one)
    for i in range(1, n // 2 + 1):
        h = P.sub(F, P.powmod(F, x, F.p**i, f), x)
        if P.deg(P.gcd(F, f, h)) > 0:
            return False
    return True


def kummer_irreducible(n, a):
    """Irreducibility of ``x^n - a`` over Q for ``n <= 4`` (Capelli)."""
    a = Fraction(a)
    if a == 0:
        return False

    def is_power(q, k):
        if q < 0 and k % 2 == 0:
            return False
        num, ok1 = integer_nthroot(abs(q.numerator), k)
        den, ok2 = integer_nthroot(q.denominator, k)
        return ok1 and ok2

    if n == 1:
        return True
    if n == 2:
        return not is_power(a, 2)
    if n == 3:
        return not is_power(a, 3)
    if n == 4:
        return not is_power(a, 2) and not (a < 0 and is_power(-a / 4, 4))
    raise UsageError("Kummer extensions are supported for n <= 4")


class SimpleExtension(BaseField):
    """``base[y]/(minpoly)`` for ``base`` in {Q, F_p}."""

    kind = "simple_extension"
    transcendental = False

    def __init__(self, base, minpoly, var):
        if base.kind not in ("rationals", "prime"):
            raise UsageError("simple extensions are built over Q or a prime field")
        mp = P.trim(base, [base.from_fraction(c) if base.kind == "rationals" else base.from_int(c) for c in minpoly])
        if not mp or not base.eq(mp[-1], base.one):
            raise UsageError("minimal polynomial must be monic")
        n = P.deg(mp)
        if n < 2:
            raise UsageError("minimal polynomial must have degree >= 2")
        if base.kind == "rationals":
            if any(c != 0 for c in mp[1:-1]):
                raise UsageError("over Q only Kummer polynomials x^n - a are supported")
            a = -mp[0]
            if a.denominator != 1:
                raise UsageError("Kummer constant must be an integer")
            if not kummer_irreducible(n, a):
                raise UsageError(f"x^{n} - {a} is reducible over Q")
            self.kummer_a = int(a)
        else:
            if not _irreducible_over_fp(base, mp):
                raise UsageError("minimal polynomial is reducible over the prime field")
            self.kummer_a = None
        self.base = base
        self.minpoly = mp
        self.n = n
        self.var = var
        self.zero = tuple([base.zero] * n)
        self.one = tuple([base.one] + [base.zero] * (n - 1))

    @classmethod
    def kummer(cls, n, a, var):
        Q = Rationals()
        return cls(Q, [-Fraction(a)] + [0] * (n - 1) + [1], var)

    @property
    def scalars(self):
        return self.base.scalars

    @property
    def abs_degree(self):
        return self.n

    def _pad(self, p):
        return tuple(p) + (self.base.zero,) * (self.n - len(p))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        if self.kummer_a is not None:
            # y^n = a: fold the high half back with a factor a
            n, out = self.n, [Fraction(0)] * self.n
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            k = i + j
                            out[k - n if k >= n else k] += x * y * (self.kummer_a if k >= n else 1)
            return tuple(out)
        prod = P.mul(self.base, P.trim(self.base, a), P.trim(self.base, b))
        return self._pad(P.mod(self.base, prod, self.minpoly))

    def inv(self, a):
        B = self.base
        a_p = P.trim(B, a)
        if not a_p:
            raise ZeroElement("inverse of zero")
        # extended Euclid in base[y]
        r0, r1 = self.minpoly, a_p
        s0, s1 = (), (B.one,)
        while P.deg(r1) > 0:
            q, r = P.divmod_(B, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, P.sub(B, s0, P.mul(B, q, s1))
        c = B.inv(r1[0])
        return self._pad(P.mod(B, P.scale(B, c, s1), self.minpoly))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def from_int(self, n):
        return self.embed_base(self.base.from_int(n))

    def from_fraction(self, q):
        return self.embed_base(self.base.from_fraction(q))

    def embed_base(self, a):
        return (a,) + (self.base.zero,) * (self.n - 1)

    def gen(self):
        return self._pad((self.base.zero, self.base.one))

    def from_poly(self, p):
        return self._pad(P.mod(self.base, P.trim(self.base, p), self.minpoly))

    def to_str(self, a):
        terms = []
        for k, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.to_str(c)
            if k == 0:
                terms.append(cs)
                continue
            mono = self.var if k == 1 else f"{self.var}^{k}"
            if cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def descriptor(self):
        return {
            "kind": "simple_extension",
            "base": self.base.descriptor(),
            "minpoly": [self.base.to_str(c) for c in self.minpoly],
            "var": self.var,
        }

    def name(self):
        return f"{self.base.name()}({self.var})"

    def coords(self, a):
        return list(a)

    def from_coords(self, c):
        return tuple(c)

    def elements(self):
        if self.base.kind != "prime":
            raise UsageError("only finite fields can be enumerated")
        out = [()]
        for _ in range(self.n):
            out = [t + (c,) for t in out for c in self.base.elements()]
        return out

    @property
    def order(self):
        return self.base.p**self.n

    def contains(self, a):
        return isinstance(a, tuple) and len(a) == self.n

    def random_element(self, rng, size=3):
        return tuple(self.base.random_element(rng, size) for _ in range(self.n))


class RationalFunctionField(BaseField):
    """``base(x)``; elements are ``(num, den)`` with ``den`` monic, coprime."""

    kind = "rational_functions"
    transcendental = True

    def __init__(self, base, var):
        if base.kind == "rational_functions":
            raise UsageError("iterated rational function fields are not supported")
        self.base = base
        self.var = var
        self.zero = ((), (base.one,))
        self.one = ((base.one,), (base.one,))

    @property
    def abs_degree(self):
        return self.base.abs_degree

    def normalize(self, num, den):
        B = self.base
        num, den = P.trim(B, num), P.trim(B, den)
        if not den:
            raise ZeroElement("zero denominator")
        if not num:
            return self.zero
        g = P.gcd(B, num, den)
        if P.deg(g) > 0:
            num = P.divmod_(B, num, g)[0]
            den = P.divmod_(B, den, g)[0]
        lc = den[-1]
        inv = B.inv(lc)
        return P.scale(B, inv, num), P.scale(B, inv, den)

    def add(self, a, b):
        B = self.base
        num = P.add(B, P.mul(B, a[0], b[1]), P.mul(B, b[0], a[1]))
        return self.normalize(num, P.mul(B, a[1], b[1]))

    def neg(self, a):
        return (P.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        B = self.base
        return self.normalize(P.mul(B, a[0], b[0]), P.mul(B, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroElement("inverse of zero")
        return self.normalize(a[1], a[0])

    def is_zero(self, a):
        return not a[0]

    def from_int(self, n):
        return self.embed_base(self.base.from_int(n))

    def from_fraction(self, q):
        return self.embed_base(self.base.from_fraction(q))

    def embed_base(self, a):
        if self.base.is_zero(a):
            return self.zero
        return ((a,), (self.base.one,))

    def gen(self):
        B = self.base
        return ((B.zero, B.one), (B.one,))

    def from_poly(self, p):
        return self.normalize(p, (self.base.one,))

    def to_str(self, a):
        num = P.to_str(self.base, a[0], self.var)
        if a[1] == (self.base.one,):
            return num
        den = P.to_str(self.base, a[1], self.var)
        return f"({num})/({den})"

    def descriptor(self):
        return {"kind": "rational_functions", "base": self.base.descriptor(), "var": self.var}

    def name(self):
        return f"{self.base.name()}({self.var})"

    def contains(self, a):
        return isinstance(a, tuple) and len(a) == 2

    def random_element(self, rng, size=3):
        B = self.base
        num = P.trim(B, [B.random_element(rng, size) for _ in range(rng.randint(1, size))])
        den = P.trim(B, [B.random_element(rng, size) for _ in range(rng.randint(1, 2))])
        if not den:
            den = (B.one,)
        return self.normalize(num, den)


def field_from_descriptor(d):
    kind = d["kind"]
    if kind == "rationals":
        return Rationals()
    if kind == "prime":
        return PrimeField(d["p"])
    if kind == "simple_extension":
        base = field_from_descriptor(d["base"])
        coeffs = [Fraction(c) if base.kind == "rationals" else int(c) for c in d["minpoly"]]
        return SimpleExtension(base, coeffs, d["var"])
    if kind == "kummer":
        return SimpleExtension.kummer(int(d["n"]), int(d["a"]), d.get("var", "a"))
    if kind == "finite":
        base = PrimeField(d["p"])
        return SimpleExtension(base, [int(c) for c in d["minpoly"]], d.get("var", "w"))
    if kind == "rational_functions":
        return RationalFunctionField(field_from_descriptor(d["base"]), d.get("var", "x"))
    raise UsageError(f"unknown field kind {kind!r}")


class FieldHom:
    """Ring homomorphism between base fields, given by generator images.

    ``base_hom`` maps ``domain.base`` into ``codomain``; prime fields map
    canonically.
    """

    def __init__(self, domain, codomain, gen_image=None, base_hom=None):
        self.domain = domain
        self.codomain = codomain
        self.gen_image = gen_image
        if domain.base is not None and base_hom is None:
            base_hom = FieldHom.inclusion(domain.base, codomain)
        self.base_hom = base_hom

    @classmethod
    def inclusion(cls, small, big):
        if small.base is None:
            if small.char != big.char:
                raise FieldMismatch(f"{small} does not embed in {big}")
            return cls(small, big)
        if small in big.tower():
            return cls(small, big, big.coerce(small.gen(), small))
        if small.kind == "rational_functions" and big.kind == "rational_functions":
            # constant field extension, x -> x
            return cls(small, big, big.gen())
        raise FieldMismatch(f"no canonical embedding of {small} into {big}")

    identity = classmethod(lambda cls, F: cls.inclusion(F, F))

    def __call__(self, a):
        D, C = self.domain, self.codomain
        if D.kind == "rationals":
            return C.from_fraction(a)
        if D.kind == "prime":
            return C.from_int(a)
        if D.kind == "simple_extension":
            return _eval_poly(C, self.base_hom, P.trim(D.base, a), self.gen_image)
        num = _eval_poly(C, self.base_hom, a[0], self.gen_image)
        den = _eval_poly(C, self.base_hom, a[1], self.gen_image)
        return C.div(num, den)

    def is_identity(self):
        if self.domain != self.codomain:
            return False
        if self.domain.base is None:
            return True
        return self.codomain.eq(self.gen_image, self.codomain.gen())

    def preimage(self, b):
        """Element of the domain mapping to ``b``, or None if outside the image."""
        D, C = self.domain, self.codomain
        if self.is_identity():
            return b
        if D.kind == "rational_functions":
            inner = FieldHom.inclusion(D.base, C.base)
            num = [inner.preimage(c) for c in b[0]]
            den = [inner.preimage(c) for c in b[1]]
            if any(x is None for x in num + den):
                return None
            return D.normalize(tuple(num), tuple(den))
        basis_D = _prime_basis(D)
        rows = [_const_coords(C, self(x)) for x in basis_D]
        target = _const_coords(C, b)
        if target is None:
            return None
        sol = solve_left(rows, target, C.prime_field().scalars)
        if sol is None:
            return None
        acc = D.zero
        for c, x in zip(sol, basis_D):
            acc = D.add(acc, D.mul(_scalar(D, c), x))
        return acc


def _const_coords(C, x):
    if C.kind == "rational_functions":
        if x[1] != (C.base.one,) or len(x[0]) > 1:
            return None
        c = x[0][0] if x[0] else C.base.zero
        return C.base.coords(c)
    return C.coords(x)


def _scalar(D, c):
    if D.kind == "rationals":
        return Fraction(c)
    if D.kind == "prime":
        return c % D.p
    return D.embed_base(c)


def _prime_basis(D):
    if D.base is None:
        return [D.one]
    if D.kind == "simple_extension":
        g = D.gen()
        out, pw = [], D.one
        for _ in range(D.n):
            out.append(pw)
            pw = D.mul(pw, g)
        return out
    raise UsageError("no finite prime basis for a transcendental field")


def _eval_poly(C, hom, p, x):
    acc = C.zero
    for c in reversed(p):
        acc = C.add(C.mul(acc, x), hom(c))
    return acc
