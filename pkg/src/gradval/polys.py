"""Dense univariate polynomials over a field object.

Polynomials are tuples of coefficients, lowest degree first, with no trailing
zeros; the zero polynomial is ``()``.
"""


def trim(F, p):
    p = list(p)
    while p and F.is_zero(p[-1]):
        p.pop()
    return tuple(p)


def deg(p):
    return len(p) - 1


def add(F, p, q):
    n = max(len(p), len(q))
    out = [
        F.add(p[i] if i < len(p) else F.zero, q[i] if i < len(q) else F.zero)
        for i in range(n)
    ]
    return trim(F, out)


def neg(F, p):
    return tuple(F.neg(c) for c in p)


def sub(F, p, q):
    return add(F, p, neg(F, q))


def scale(F, c, p):
    if F.is_zero(c):
        return ()
    return tuple(F.mul(c, x) for x in p)


def mul(F, p, q):
    if not p or not q:
        return ()
    out = [F.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if F.is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(F, out)


def power(F, p, e):
    out = (F.one,)
    base = p
    while e:
        if e & 1:
            out = mul(F, out, base)
        base = mul(F, base, base)
        e >>= 1
    return out


def divmod_(F, p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    inv = F.inv(q[-1])
    dq = len(q) - 1
    if len(p) <= dq:
        return (), trim(F, p)
    quot = [F.zero] * (len(p) - dq)
    for i in range(len(p) - 1, dq - 1, -1):
        c = p[i]
        if F.is_zero(c):
            continue
        f = F.mul(c, inv)
        quot[i - dq] = f
        for j in range(dq + 1):
            p[i - dq + j] = F.sub(p[i - dq + j], F.mul(f, q[j]))
    return trim(F, quot), trim(F, p[:dq])


def mod(F, p, q):
    return divmod_(F, p, q)[1]


def monic(F, p):
    if not p:
        return p
    return scale(F, F.inv(p[-1]), p)


def gcd(F, p, q):
    while q:
        p, q = q, mod(F, p, q)
    return monic(F, p)


def evaluate(F, p, x):
    acc = F.zero
    for c in reversed(p):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F, p):
    return trim(F, [F.mul(F.from_int(i), p[i]) for i in range(1, len(p))])


def compose_power(F, p, k):
    """``p(x^k)``."""
    out = [F.zero] * ((len(p) - 1) * k + 1) if p else []
    for i, c in enumerate(p):
        out[i * k] = c
    return trim(F, out)


def powmod(F, p, e, m):
    out = (F.one,)
    base = mod(F, p, m)
    while e:
        if e & 1:
            out = mod(F, mul(F, out, base), m)
        base = mod(F, mul(F, base, base), m)
        e >>= 1
    return out


def to_str(F, p, var):
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if F.is_zero(c):
            continue
        cs = F.to_str(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if cs == "1":
            terms.append(mono)
        elif cs == "-1":
            terms.append("-" + mono)
        else:
            if any(ch in cs[1:] for ch in "+-") or "/" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    s = " + ".join(terms)
    return s.replace("+ -", "- ")
