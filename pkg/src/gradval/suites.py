"""Property suites run over a workspace (the shipped fixtures plus user entities)."""

from __future__ import annotations

import json
import random
from itertools import combinations
from itertools import product as iproduct

from .errors import GradvalError, UnknownSuite, UnsupportedComparison
from .fields import PrimeField, Rationals, SimpleExtension
from .galois import (
    act_on_valuation,
    dominated_extension,
    fixed_subfield,
    inertia_pairing,
    named_automorphism,
    orbit_on_extensions,
    stabilizer_order,
)
from .graded import FieldExtension, GradedField, check_basis_product, efn
from .grading import Lattice, lattice_index
from .gvaluation import (
    base_containment,
    extend_valuation,
    extension_membership_oracle,
    restrict_valuation,
    ring_containment,
    ring_member,
    rings_equal,
)
from .quotient import action_is_free_on_points, torsor_check
from .valuations import base_extensions, element_pool
from .zrspace import check_neighborhood, nonvaluation_certificate, stable_affine_neighborhood


class Report:
    def __init__(self, suite):
        self.suite = suite
        self.checks = []

    def check(self, name, inputs, expected, actual, passed=None):
        if passed is None:
            passed = expected == actual
        self.checks.append(
            {"check": name, "inputs": inputs, "expected": expected, "actual": actual, "passed": bool(passed)}
        )
        return passed

    @property
    def passed(self):
        return bool(self.checks) and all(c["passed"] for c in self.checks)

    def to_config(self):
        return {
            "suite": self.suite,
            "verdict": "PASS" if self.passed else "FAIL",
            "checked": len(self.checks),
            "failed": sum(not c["passed"] for c in self.checks),
            "checks": self.checks,
        }


def _named(table, pred=lambda x: True):
    return [(n, x) for n, x in sorted(table.items()) if pred(x)]


def _faithful_groups(ws):
    return _named(ws.groups, lambda G: G.is_faithful)


# --- samples ---------------------------------------------------------------------


def homogeneous_sample(K, n, seed=0, pool=(), span=3):
    """``n`` nonzero homogeneous elements ``c * t_g`` from a seeded generator.

    Coefficients are random base elements times small powers of ``pool``
    elements, so that many different values occur.
    """
    rng = random.Random(seed)
    F = K.base
    pool = list(pool)
    out = []
    while len(out) < n:
        c = F.random_element(rng)
        if F.is_zero(c):
            c = F.one
        for _ in range(2):
            if pool:
                c = F.mul(c, F.power(rng.choice(pool), rng.randint(-2, 2)))
        g = K.gamma.point([rng.randint(-span, span) for _ in range(K.gamma.rank)])
        out.append(K.monomial(c, g))
    return out


KUMMER_CONSTANTS = (2, 3, 5, 6, 7)


def _finite_field(p, f, rng):
    Fp = PrimeField(p)
    if f == 1:
        return Fp
    tails = list(iproduct(range(p), repeat=f))
    rng.shuffle(tails)
    for t in tails:
        try:
            return SimpleExtension(Fp, list(t) + [1], "w")
        except GradvalError:
            continue
    raise GradvalError(f"no irreducible of degree {f} over F_{p}")


def random_split_extension(rng, max_e=4, max_f=4):
    """A random ``F[Gamma] / E[Gamma']`` with ``[F:E] <= max_f`` and index ``<= max_e``.

    ``E`` is the prime field; ``F`` is a Kummer extension of Q or a finite field.
    Returns ``(ext, e, f)`` with the intended invariants.
    """
    f = rng.randint(1, max_f)
    if rng.random() < 0.5:
        small = Rationals()
        big = small if f == 1 else SimpleExtension.kummer(f, rng.choice(KUMMER_CONSTANTS), "a")
    else:
        p = rng.choice((2, 3, 5))
        small = PrimeField(p)
        big = _finite_field(p, f, rng)
    d = rng.randint(1, 2)
    e = rng.randint(1, max_e)
    if d == 1:
        rows = [[e]]
    else:
        d1 = rng.choice([k for k in range(1, e + 1) if e % k == 0])
        rows = [[d1, rng.randint(-3, 3)], [0, e // d1]]
    gam = Lattice.standard(d)
    ext = FieldExtension(GradedField(big, gam), GradedField(small, Lattice(rows)))
    return ext, e, f


def extension_cases(ws):
    """``(ext name, ext, R name, R)`` for each valuation living on a small field."""
    out = []
    for en, ext in _named(ws.extensions):
        for rn, R in _named(ws.valuations, lambda V: V.parent == ext.small):
            out.append((en, ext, rn, R))
    return out


def group_cases(ws):
    """``(group name, G, L, ext, R name, R)`` for valuations on fixed fields."""
    out = []
    for gn, G in _faithful_groups(ws):
        L, ext = fixed_subfield(G)
        for rn, R in _named(ws.valuations, lambda V: V.parent == L):
            out.append((gn, G, L, ext, rn, R))
    return out


# --- suites ----------------------------------------------------------------------


def suite_efn(ws, opts):
    rep = Report("efn")
    for en, ext in _named(ws.extensions):
        e, f, n = efn(ext)
        rep.check("n = e*f", {"extension": en}, e * f, n)
        rep.check("basis product is a basis", {"extension": en, "e": e, "f": f}, True, check_basis_product(ext))
    return rep


def suite_artin(ws, opts):
    rep = Report("artin")
    for gn, G in _faithful_groups(ws):
        L, ext = fixed_subfield(G)
        e, f, n = efn(ext)
        rep.check("[K:K^G] = #G", {"group": gn, "fixed": repr(L)}, G.order, n)
        I = inertia_pairing(G).inertia
        rep.check("[K1:L1] = #(G/I)", {"group": gn}, G.order // I.order, f)
    return rep


def suite_pairing(ws, opts):
    rep = Report("pairing")
    for gn, G in _faithful_groups(ws):
        p = inertia_pairing(G)
        idx = lattice_index(G.parent.gamma, p.V)
        rep.check("#I = [grading : invariant lattice]", {"group": gn}, idx, p.inertia.order)
        rep.check("pairing is biadditive", {"group": gn}, True, p.biadditive)
        rep.check("pairing nondegenerate on I", {"group": gn}, True, p.nondegenerate_left)
        rep.check("pairing nondegenerate on cosets", {"group": gn}, True, p.nondegenerate_right)
        abelian = all(p.inertia.table[a][b] == p.inertia.table[b][a] for a in range(p.inertia.order) for b in range(a))
        rep.check("I is abelian", {"group": gn}, True, abelian)
    return rep


def oracle_disagreements(A, ext, sample):
    """Count of elements where an applicable oracle mode differs from membership."""
    e, f, _ = efn(ext)
    modes = [m for m, ok in (("POWER_E", f == 1), ("FACTORIAL_N", e == 1)) if ok]
    R = restrict_valuation(A, ext)
    bad = 0
    for y in sample:
        truth = ring_member(A, y)
        for m in modes:
            if extension_membership_oracle(A, ext, y, m, R) != truth:
                bad += 1
    return modes, bad


def suite_extendv(ws, opts):
    rep = Report("extendv")
    n_sample = opts.get("samples", 100)
    for en, ext, rn, R in extension_cases(ws):
        inp = {"extension": en, "R": rn}
        exts = extend_valuation(R, ext)
        base = base_extensions(R.v1, ext.big.base, ext.base_embedding)
        keys = sorted(A.v1.key() for A in exts)
        rep.check("A -> A1 is a bijection", inp, sorted(w.key() for w in base), keys, len(set(keys)) == len(keys)
                  and keys == sorted(w.key() for w in base))
        rep.check("extensions restrict to R", inp, True, all(rings_equal(restrict_valuation(A, ext), R) for A in exts))
        for k, A in enumerate(exts):
            pool = element_pool(A.v1)
            sample = homogeneous_sample(ext.big, n_sample, seed=k, pool=pool)
            modes, bad = oracle_disagreements(A, ext, sample)
            rep.check("oracle agrees with membership", dict(inp, extension_index=k, modes=modes, sample=len(sample)),
                      0, bad)
    for row in containment_reflection(ws):
        rep.check("A ⊆ A' iff A1 ⊆ A'1", row["inputs"], row["graded"], row["base"])
    return rep


def containment_reflection(ws):
    """Graded versus base containment for extensions of nested ``R ⊆ R'``."""
    out = []
    for en, ext in _named(ws.extensions):
        vals = _named(ws.valuations, lambda V: V.parent == ext.small)
        for (rn, R), (rpn, Rp) in ((a, b) for a in vals for b in vals):
            try:
                if not ring_containment(R, Rp):
                    continue
            except UnsupportedComparison:
                continue
            for i, A in enumerate(extend_valuation(R, ext)):
                for j, Ap in enumerate(extend_valuation(Rp, ext)):
                    try:
                        g = bool(ring_containment(A, Ap))
                        b = bool(base_containment(A.v1, Ap.v1))
                    except UnsupportedComparison:
                        continue
                    out.append({"inputs": {"extension": en, "R": rn, "R'": rpn, "A": i, "A'": j},
                                "graded": g, "base": b})
    return out


def suite_orbits(ws, opts):
    rep = Report("orbits")
    for gn, G, L, ext, rn, R in group_cases(ws):
        orbits = orbit_on_extensions(G, R, ext)
        inp = {"group": gn, "R": rn}
        rep.check("exactly one orbit", inp, 1, len(orbits))
        for A in orbits[0]:
            rep.check("stabilizer * orbit = #G", inp, G.order, stabilizer_order(G, A) * len(orbits[0]))
        pts = [(V, W) for V in orbits[0] for W in orbits[0]]
        for g in G.elements:
            same = all(
                bool(ring_containment(V, W)) == bool(ring_containment(act_on_valuation(g, V), act_on_valuation(g, W)))
                for V, W in pts
            )
            rep.check("action preserves containment", dict(inp, g=repr(g)), True, same)
    return rep


def suite_dominate(ws, opts):
    rep = Report("dominate")
    for gn, G, L, ext, rn, R in group_cases(ws):
        for rpn, Rp in _named(ws.valuations, lambda V: V.parent == L):
            try:
                if not ring_containment(R, Rp):
                    continue
            except UnsupportedComparison:
                continue
            for j, Ap in enumerate(extend_valuation(Rp, ext)):
                inp = {"group": gn, "R": rn, "Rp": rpn, "Ap": j}
                try:
                    A = dominated_extension(R, Rp, Ap, ext)
                except GradvalError as exc:
                    rep.check("dominated extension exists", inp, True, str(exc), False)
                    continue
                ok = bool(ring_containment(A, Ap)) and rings_equal(restrict_valuation(A, ext), R)
                rep.check("A extends R and A ⊆ Ap", dict(inp, A=repr(A)), True, ok)
    return rep


def perturbed_tables(t, max_flips=3):
    """Every table obtained from ``t`` by flipping 1..max_flips bits."""
    for k in range(1, max_flips + 1):
        for c in combinations(t.universe, k):
            yield c, t.flipped(list(c))


def suite_patchtop(ws, opts):
    rep = Report("patchtop")
    for tn, t in _named(ws.tables):
        k, F, G = t.k_elems, t.F, t.G
        cert = nonvaluation_certificate(t, k, F, G)
        genuine = any(all(ring_member(V, x) == t.bit(x) for x in t.universe)
                      for V in ws.valuations.values() if V.parent == t.parent)
        inp = {"table": tn}
        if genuine and not F and not G:
            rep.check("genuine trace has no certificate", inp, None, None if cert is None else cert.to_config())
            flips = list(perturbed_tables(t, opts.get("max_flips", 3)))
            bad = [[str(x) for x in c] for c, tt in flips
                   if not ((cc := nonvaluation_certificate(tt, k)) and cc.replay(tt, k))]
            rep.check("every perturbation is certified", dict(inp, perturbations=len(flips)), [], bad)
        elif cert is not None:
            rep.check("certificate replays", dict(inp, certificate=cert.to_config()), True, cert.replay(t, k, F, G))
        else:
            rep.check("table is consistent", inp, None, None)
    return rep


def run_neighborhood(m, sc, pool_exponent=3):
    res = stable_affine_neighborhood(m, sc["S"], sc["U"], pool_exponent=pool_exponent)
    return res, check_neighborhood(m, sc["S"], sc["U"], res.basic_set.positive)


def suite_neighborhood(ws, opts):
    rep = Report("neighborhood")
    pe = opts.get("pool_exponent", 3)
    for mn, m in _named(ws.models):
        for sc in getattr(m, "scenarios", []):
            inp = {"model": mn, "scenario": sc["name"]}
            try:
                res, checks = run_neighborhood(m, sc, pe)
            except GradvalError as exc:
                rep.check("neighborhood found", inp, True, str(exc), False)
                continue
            again, _ = run_neighborhood(m, sc, pe)
            cfg = res.to_config()
            for k, v in checks.items():
                rep.check(k, dict(inp, F=cfg["F"]), True, v)
            rep.check("deterministic", inp, json.dumps(cfg, sort_keys=True),
                      json.dumps(again.to_config(), sort_keys=True))
    return rep


def sample_points(G):
    """Geometric points ``(tau, lambda)``: every base automorphism on the menu, trivial character."""
    F = G.parent.base
    names = ["id", "conj"] + [f"frob^{k}" for k in range(1, 4)]
    out, seen = [], set()
    for nm in names:
        try:
            tau = named_automorphism(F, nm)
        except GradvalError:
            continue
        key = tuple(F.to_str(tau(x)) for x in F.generators().values())
        if key not in seen:
            seen.add(key)
            out.append((tau, None))
    return out


def suite_torsor(ws, opts):
    rep = Report("torsor")
    for gn, G in _named(ws.groups):
        r = torsor_check(G)
        free = G.is_faithful and action_is_free_on_points(G, sample_points(G))
        inp = {"group": gn, "free_on_points": free}
        rep.check("verdict matches freeness", inp, "PASS" if free else "FAIL", r.verdict)
        if r.passed:
            d = r.determinant
            rep.check("determinant is a homogeneous unit", dict(inp, det=str(d)), True,
                      not d.is_zero and d.is_homogeneous)
            rep.check("rank over invariants = #G", inp, G.order, len(r.basis))
        else:
            rep.check("failure carries a witness", dict(inp, kind=r.witness_kind), True, r.witness is not None)
    return rep


SUITES = {
    "efn": suite_efn,
    "artin": suite_artin,
    "pairing": suite_pairing,
    "extendv": suite_extendv,
    "orbits": suite_orbits,
    "dominate": suite_dominate,
    "patchtop": suite_patchtop,
    "neighborhood": suite_neighborhood,
    "torsor": suite_torsor,
}


def run_suite(name, ws, **opts):
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](ws, opts)
