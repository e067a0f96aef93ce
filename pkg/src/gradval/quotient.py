"""Invariant subalgebras and the torsor comparison map.

For ``G`` acting on a split graded field ``A'`` with invariants ``A``, the map
``A' (x)_A A' -> prod_G A'``, ``a (x) a' -> (a g(a'))_g``, is written in the
``A``-bases ``{b_i (x) b_j}`` and ``{(g, b_k)}``.  All entries are homogeneous,
and the degree of entry ``(r, c)`` is ``deg(row r) - deg(b_k)``, so the
determinant is a single homogeneous element whose coefficient is the ordinary
determinant of the coefficient matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BasisConstructionFailure, ParentMismatch
from .galois import apply_aut, invariant_subalgebra
from .graded import basis_product, coordinates_over_small, efn

__all__ = ["invariant_subalgebra", "torsor_check", "TorsorReport", "action_is_free_on_points"]


@dataclass
class TorsorReport:
    verdict: str
    basis: list
    row_labels: list
    col_labels: list
    matrix: list
    determinant: object = None
    witness: object = None
    witness_kind: str = ""
    aprime_matrix: list = field(default_factory=list)
    aprime_determinant: object = None

    @property
    def passed(self):
        return self.verdict == "PASS"

    def to_config(self):
        s = lambda x: None if x is None else str(x)
        return {
            "verdict": self.verdict,
            "basis": [str(b) for b in self.basis],
            "rows": self.row_labels,
            "columns": self.col_labels,
            "matrix": [[str(x) for x in r] for r in self.matrix],
            "determinant": s(self.determinant),
            "witness": self.witness,
            "witness_kind": self.witness_kind,
            "aprime_matrix": [[str(x) for x in r] for r in self.aprime_matrix],
            "aprime_determinant": s(self.aprime_determinant),
        }


def _coeff(x, F):
    return F.zero if x.is_zero else x.coefficient


def torsor_check(G, Aprime=None):
    if Aprime is not None and Aprime != G.parent:
        raise ParentMismatch("group does not act on this algebra")
    L, ext = invariant_subalgebra(G)
    basis = basis_product(ext)
    e, f, n = efn(ext)
    if len(basis) != n:
        raise BasisConstructionFailure(f"basis has {len(basis)} elements, expected {n}")
    L1 = L.base
    elems = G.elements
    rows, row_deg, row_labels = [], [], []
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            images = [bi * apply_aut(g, bj) for g in elems]
            coords = [coordinates_over_small(ext, y) for y in images]
            rows.append([c for cs in coords for c in cs])
            row_deg.append(tuple(x + y for x, y in zip(bi.degree, bj.degree)))
            row_labels.append(f"b{i}⊗b{j}")
    col_deg = [b.degree for _ in elems for b in basis]
    col_labels = [f"g{gi}·b{k}" for gi in range(len(elems)) for k in range(len(basis))]
    coeffs = [[_coeff(x, L1) for x in r] for r in rows]
    report = TorsorReport("FAIL", basis, row_labels, col_labels, rows)
    report.aprime_matrix, report.aprime_determinant = _aprime_matrix(G, basis)
    nr, nc = len(rows), len(col_deg)
    if nr == nc:
        d = _det(coeffs, L1)
        if not L1.is_zero(d):
            deg = tuple(sum(x) for x in zip(*row_deg))
            cdeg = tuple(sum(x) for x in zip(*col_deg))
            report.verdict = "PASS"
            report.determinant = L.monomial(d, tuple(a - b for a, b in zip(deg, cdeg)))
            return report
    kern = _kernel_by_degree(coeffs, row_deg, L)
    if kern is not None:
        report.witness = kern
        report.witness_kind = "kernel"
        return report
    report.witness = _cokernel_vector(coeffs, L1, col_labels)
    report.witness_kind = "cokernel"
    return report


def _det(M, F):
    """Determinant over an arbitrary base field by fraction-free elimination."""
    n = len(M)
    A = [list(r) for r in M]
    d = F.one
    for k in range(n):
        piv = next((i for i in range(k, n) if not F.is_zero(A[i][k])), None)
        if piv is None:
            return F.zero
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            d = F.neg(d)
        d = F.mul(d, A[k][k])
        inv = F.inv(A[k][k])
        for i in range(k + 1, n):
            if not F.is_zero(A[i][k]):
                fac = F.mul(A[i][k], inv)
                A[i] = [F.sub(x, F.mul(fac, y)) for x, y in zip(A[i], A[k])]
    return d


def _left_kernel_field(M, F):
    """Left kernel vectors of ``M`` over an arbitrary field ``F``."""
    n = len(M)
    m = len(M[0]) if M else 0
    # row reduce [M | I]
    A = [list(M[i]) + [F.one if j == i else F.zero for j in range(n)] for i in range(n)]
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if not F.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(n):
            if i != r and not F.is_zero(A[i][c]):
                fac = A[i][c]
                A[i] = [F.sub(x, F.mul(fac, y)) for x, y in zip(A[i], A[r])]
        r += 1
    return [row[m:] for row in A[r:]]


def _kernel_by_degree(coeffs, row_deg, L):
    """A homogeneous kernel relation among the rows, or None if injective."""
    F = L.base
    classes = {}
    for r, dg in enumerate(row_deg):
        rep = next((k for k in classes if tuple(a - b for a, b in zip(dg, k)) in L.gamma), dg)
        classes.setdefault(rep, []).append(r)
    for rep in sorted(classes):
        idx = classes[rep]
        sub = [coeffs[r] for r in idx]
        ker = _left_kernel_field(sub, F)
        if ker:
            vec = ker[0]
            out = {}
            for r, c in zip(idx, vec):
                if not F.is_zero(c):
                    shift = tuple(a - b for a, b in zip(rep, row_deg[r]))
                    out[r] = str(L.monomial(c, shift))
            return out
    return None


def _cokernel_vector(coeffs, F, col_labels):
    """A standard basis column vector outside the row span."""
    n = len(col_labels)
    base = len(_left_kernel_field(coeffs, F))
    for k in range(n):
        e = [F.one if j == k else F.zero for j in range(n)]
        if len(_left_kernel_field(coeffs + [e], F)) == base:
            return {col_labels[k]: "1"}
    return None


def _aprime_matrix(G, basis):
    """``(g(b_j))`` with rows indexed by group elements, and its determinant."""
    K = G.parent
    F = K.base
    M = [[apply_aut(g, b) for b in basis] for g in G.elements]
    if len(M) != len(basis):
        return M, None
    coeffs = [[_coeff(x, F) for x in r] for r in M]
    d = _det(coeffs, F)
    deg = tuple(sum(x) for x in zip(*[b.degree for b in basis]))
    return M, K.monomial(d, deg) if not F.is_zero(d) else K.zero


def action_is_free_on_points(G, points):
    """Freeness of ``G`` on sampled geometric points.

    A point is ``(tau, lam)`` with ``tau`` a base-field homomorphism into a
    field ``Omega`` and ``lam`` the images of the grading generators; ``g``
    fixes the point when ``tau∘sigma_g = tau`` on the generators and
    ``tau(chi_g) = 1``.
    """
    F = G.parent.base
    gens = list(F.generators().values())
    for tau, _ in points:
        Om = tau.codomain
        for g in G.elements[1:]:
            if all(Om.eq(tau(g.sigma(x)), tau(x)) for x in gens) and all(Om.eq(tau(z), Om.one) for z in g.chi):
                return False
    return True
