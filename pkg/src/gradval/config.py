"""Workspace configs: named fields, lattices, graded fields, valuations,
groups, extensions, models and membership tables.

Documents are YAML (JSON is accepted as a subset).  Rationals are written
``"p/q"``, matrices as lists of rows, elements in the expression grammar of
:mod:`gradval.parse`.  Several documents merge into one workspace; names must
be unique across them and every reference is resolved before anything runs.

::

    fields:
      K: {kind: kummer, n: 2, a: -1, var: i}
      Qx: {kind: rational_functions, base: Q, var: x}
    lattices:
      Z: {basis: [[1]]}
    graded:
      KB: {field: K, lattice: Z, var: u}
    valuations:
      A+: {graded: KB, v1: {kind: prime, generator: "2+i"}, psi: [[0]]}
    groups:
      conj: {graded: KB, generators: [{sigma: conj, chi: ["1"]}]}
    extensions:
      KB/QZ: {big: KB, small: QZ, twists: ["1"]}
      fixed: {group: conj}
    models:
      M: {group: conj, points: [A+, A-], scenarios: [{name: s, S: [A+, A-], U: [A+, A-]}]}
    tables:
      T: {graded: QZ, universe: ["1", "5", "25"], bits: [1, 1, 0], k: ["1"]}

The field ``Q`` exists implicitly.  A valuation's ``rank`` defaults to the
width of its ``psi`` rows.  A group may instead be given as
``cyclic: {n, sigma, chi}`` (the powers of one automorphism, not necessarily
faithful).  A table may take its bits from ``valuation:`` and then flip the
elements listed under ``flips``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import yaml

from .errors import ConfigError, GradvalError, ParseError
from .fields import Rationals, field_from_descriptor
from .galois import (
    AutGroup,
    GradedAutomorphism,
    fixed_subfield,
    named_automorphism,
)
from .graded import FieldExtension, GradedField
from .grading import Lattice
from .gvaluation import GradedValuation
from .parse import parse_base, parse_element
from .valuations import valuation_from_descriptor

SECTIONS = ("fields", "lattices", "graded", "valuations", "groups", "extensions", "models", "tables")


def rational(x):
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {x!r}") from None


def rat_str(q):
    return str(Fraction(q))


def matrix(rows):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"expected a list of rows, got {rows!r}")
    return [[rational(x) for x in r] for r in rows]


def load_documents(paths):
    docs = []
    for p in paths:
        try:
            text = Path(p).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc.strerror}") from None
        try:
            d = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{p}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError(f"{p}: top level must be a mapping")
        docs.append(d)
    return docs


def merge(docs):
    out = {s: {} for s in SECTIONS}
    for d in docs:
        for s, entries in d.items():
            if s not in SECTIONS:
                raise ConfigError(f"unknown section {s!r}")
            if not isinstance(entries, dict):
                raise ConfigError(f"section {s!r} must be a mapping")
            for name, spec in entries.items():
                name = str(name)
                if name in out[s] or (s == "fields" and name == "Q"):
                    raise ConfigError(f"duplicate {s[:-1]} name {name!r}")
                out[s][name] = spec
    return out


class Workspace:
    """Named entities built from merged config documents."""

    def __init__(self, docs=()):
        self.spec = merge(docs)
        self.fields = {"Q": Rationals()}
        for s in SECTIONS[1:]:
            setattr(self, s, {})
        self._build()

    @classmethod
    def from_documents(cls, docs):
        return cls(docs)

    @classmethod
    def load(cls, paths):
        return cls.from_documents(load_documents(paths))

    # --- lookup ----------------------------------------------------------------

    def get(self, section, name):
        table = getattr(self, section)
        if name not in table:
            raise ConfigError(f"unknown {section[:-1]} {name!r}")
        return table[name]

    # --- building ------------------------------------------------------------

    def _build(self):
        for s in SECTIONS:
            for name, spec in self.spec[s].items():
                try:
                    getattr(self, "_build_" + s)(name, spec)
                except ParseError as exc:
                    raise ParseError(f"{s}.{name}: {exc.args[0].rsplit(' at column', 1)[0]}", exc.column) from None
                except ConfigError:
                    raise
                except GradvalError as exc:
                    raise ConfigError(f"{s}.{name}: {exc}") from exc
                except (KeyError, TypeError, ValueError) as exc:
                    raise ConfigError(f"{s}.{name}: malformed entry ({exc})") from None

    def _field_descriptor(self, spec, seen=()):
        if isinstance(spec, str):
            if spec == "Q":
                return {"kind": "rationals"}
            if spec in seen:
                raise ConfigError(f"field {spec!r} refers to itself")
            if spec not in self.spec["fields"]:
                raise ConfigError(f"unknown field {spec!r}")
            return self._field_descriptor(self.spec["fields"][spec], seen + (spec,))
        if not isinstance(spec, dict):
            raise ConfigError(f"bad field spec {spec!r}")
        d = dict(spec)
        if "base" in d:
            d["base"] = self._field_descriptor(d["base"], seen)
        return d

    def _build_fields(self, name, spec):
        self.fields[name] = field_from_descriptor(self._field_descriptor(spec, (name,)))

    def _build_lattices(self, name, spec):
        basis = matrix(spec["basis"])
        dim = spec.get("dim", len(basis[0]) if basis else None)
        if dim is None:
            raise ConfigError("an empty lattice needs 'dim'")
        self.lattices[name] = Lattice([tuple(b) for b in basis], int(dim))

    def _build_graded(self, name, spec):
        F = self.get("fields", str(spec["field"]))
        gam = self.get("lattices", str(spec["lattice"]))
        self.graded[name] = GradedField(F, gam, spec.get("var", "u"))

    def _build_valuations(self, name, spec):
        K = self.get("graded", str(spec["graded"]))
        v1 = valuation_from_descriptor(spec["v1"], K.base)
        rows = matrix(spec["psi"])
        rank = spec.get("rank")
        self.valuations[name] = GradedValuation.from_rows(K, v1, rows, None if rank is None else int(rank))

    def automorphism(self, K, spec):
        F = K.base
        sigma = named_automorphism(F, str(spec.get("sigma", "id")))
        chi = [parse_base(str(z), F) for z in spec.get("chi", ["1"] * K.gamma.rank)]
        return GradedAutomorphism(K, sigma, chi)

    def _build_groups(self, name, spec):
        K = self.get("graded", str(spec["graded"]))
        if "cyclic" in spec:
            c = spec["cyclic"]
            self.groups[name] = AutGroup.cyclic_action(K, int(c["n"]), self.automorphism(K, c))
        else:
            gens = [self.automorphism(K, g) for g in spec["generators"]]
            self.groups[name] = AutGroup.generated(K, gens)

    def _build_extensions(self, name, spec):
        if "group" in spec:
            self.extensions[name] = fixed_subfield(self.get("groups", str(spec["group"])))[1]
            return
        big = self.get("graded", str(spec["big"]))
        small = self.get("graded", str(spec["small"]))
        tw = spec.get("twists")
        twists = None if tw is None else [parse_base(str(b), big.base) for b in tw]
        self.extensions[name] = FieldExtension(big, small, None, twists)

    def _build_models(self, name, spec):
        from .zrspace import build_model

        G = self.get("groups", str(spec["group"]))
        labels = [str(p) for p in spec["points"]]
        pts = [self.get("valuations", p) for p in labels]
        m = build_model(pts, G, labels)
        m.scenarios = []
        for k, sc in enumerate(spec.get("scenarios", [])):
            S = [m.index(str(x)) for x in sc["S"]]
            U = [m.index(str(x)) for x in sc["U"]]
            m.scenarios.append({"name": str(sc.get("name", f"s{k}")), "S": S, "U": U})
        self.models[name] = m

    def _build_tables(self, name, spec):
        from .zrspace import MembershipTable

        K = self.get("graded", str(spec["graded"]))
        el = lambda xs: [parse_element(str(x), K) for x in xs]
        universe = el(spec["universe"])
        if "valuation" in spec:
            t = MembershipTable.from_valuation(universe, self.get("valuations", str(spec["valuation"])))
            t = t.flipped(el(spec.get("flips", [])))
        else:
            t = MembershipTable(universe, [bool(b) for b in spec["bits"]])
        t.k_elems = el(spec.get("k", ["1"]))
        t.F = el(spec.get("F", []))
        t.G = el(spec.get("G", []))
        self.tables[name] = t

    # --- serialization ---------------------------------------------------------

    def to_config(self):
        """Canonical document that rebuilds an identical workspace."""
        out = {s: {} for s in SECTIONS}
        fname = {}
        for n, F in self.fields.items():
            fname[json.dumps(F.descriptor(), sort_keys=True)] = n
            if n != "Q":
                out["fields"][n] = F.descriptor()
        fref = lambda F: fname.get(json.dumps(F.descriptor(), sort_keys=True), F.descriptor())
        lname = {}
        for n, L in self.lattices.items():
            lname.setdefault(L, n)
            out["lattices"][n] = {"basis": L.to_config(), "dim": L.ambient_dim}
        gname = {}
        for n, K in self.graded.items():
            gname.setdefault(K, n)
            out["graded"][n] = {"field": fref(K.base), "lattice": lname[K.gamma], "var": K.var}
        for n, V in self.valuations.items():
            out["valuations"][n] = {
                "graded": gname[V.parent],
                "v1": V.v1.descriptor(),
                "psi": [[rat_str(x) for x in r] for r in V.psi.matrix],
                "rank": V.rank,
            }
        for n, G in self.groups.items():
            spec = self.spec["groups"].get(n, {})
            K = G.parent
            if "cyclic" in spec:
                g = G.elements[1 % G.order]
                c = g.to_config()
                c["n"] = G.order
                out["groups"][n] = {"graded": gname[K], "cyclic": c}
            else:
                gens = [self.automorphism(K, g).to_config() for g in spec.get("generators", [])]
                if not gens:
                    gens = [e.to_config() for e in G.elements[1:]]
                out["groups"][n] = {"graded": gname[K], "generators": gens}
        for n, spec in self.spec["extensions"].items():
            if "group" in spec:
                out["extensions"][n] = {"group": str(spec["group"])}
            else:
                E = self.extensions[n]
                out["extensions"][n] = {
                    "big": gname[E.big],
                    "small": gname[E.small],
                    "twists": [E.big.base.to_str(b) for b in E.twists],
                }
        for n, m in self.models.items():
            out["models"][n] = {
                "group": str(self.spec["models"][n]["group"]),
                "points": list(m.labels),
                "scenarios": [
                    {"name": s["name"], "S": [m.labels[i] for i in s["S"]], "U": [m.labels[i] for i in s["U"]]}
                    for s in m.scenarios
                ],
            }
        for n, t in self.tables.items():
            out["tables"][n] = {
                "graded": gname[t.parent],
                "universe": [str(x) for x in t.universe],
                "bits": [int(t.bit(x)) for x in t.universe],
                "k": [str(x) for x in t.k_elems],
                "F": [str(x) for x in t.F],
                "G": [str(x) for x in t.G],
            }
        return {s: v for s, v in out.items() if v}

    def dump(self):
        return yaml.safe_dump(self.to_config(), sort_keys=False, allow_unicode=True)
