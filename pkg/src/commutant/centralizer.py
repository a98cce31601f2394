"""Commutants of an algebraic Hamiltonian in the enveloping algebra.

``commutant_basis(H, d)`` assembles the general ansatz P over all PBW
monomials of degree 1..d, expands [H, P] in the PBW basis and solves the
homogeneous system over the generic parameter field.  Constants are
excluded (1 always commutes).  ``new_generators`` filters each degree's
basis modulo ordered products of the generators found at lower degrees,
which is the engine's notion of independent commuting elements.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd as _int_gcd

from .coeffs import ParamPoly, ParamRat, poly_lcm
from .linalg import (PRIMES, _fp_poly, clear_row_denominators,
                     evaluation_point, bareiss_solve, exact_nullspace,
                     fp_nullity, fp_rank_of_vectors)
from .pbw import EnvElement, commutator, grlex_key, monomials_up_to

__all__ = [
    "CommutantBasis",
    "commutant_basis",
    "commutant_system",
    "modular_commutant_nullity",
    "modular_span_rank",
    "new_generators",
    "generator_cascade",
    "reduce_against",
    "generator_products",
    "normalize_element",
]


class CommutantBasis:
    """Solver output: all degree <= d elements commuting with H."""

    def __init__(self, hamiltonian, degree, basis, ambient_dimension):
        self.hamiltonian = hamiltonian
        self.degree = degree
        self.basis = list(basis)
        self.ambient_dimension = ambient_dimension

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return (f"<CommutantBasis d={self.degree}: {len(self.basis)} elements,"
                f" ambient {self.ambient_dimension}>")


def normalize_element(el):
    """Leading coefficient 1, then cleared to primitive polynomial
    coefficients; the canonical representative of the ray."""
    if el.is_zero():
        return el
    lead = el.terms[el.leading_monomial()]
    el = el.scale(ParamRat.from_const(lead.params, 1) / lead)
    den = None
    for c in el.terms.values():
        den = c.den if den is None else poly_lcm(den, c.den)
    if den is not None and not den.is_const():
        el = el.scale(ParamRat.from_poly(den))
    content = None
    for c in el.terms.values():
        r = c.num.rational_content()
        content = r if content is None else _frac_gcd(content, r)
    if content is not None and content not in (0, 1):
        el = el.scale(Fraction(1) / content)
    return el


def _frac_gcd(a, b):
    num = _int_gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // _int_gcd(a.denominator,
                                                    b.denominator)
    return Fraction(num, den)


def commutant_system(H, d):
    """(columns, rows) of the ansatz system: columns are PBW monomials of
    degree 1..d, rows are {column index: ParamPoly} equations."""
    alg = H.algebra
    cols = monomials_up_to(alg.n, d)
    row_map = {}
    for j, m in enumerate(cols):
        bracket = commutator(H, EnvElement.monomial(alg, m))
        for r, c in bracket.terms.items():
            row_map.setdefault(r, {})[j] = c
    rows = []
    for r in sorted(row_map, key=grlex_key):
        rows.append(clear_row_denominators(row_map[r]))
    return cols, rows


def commutant_basis(H, d, dense_limit=120):
    """Nullspace basis of [H, -] on degree <= d, constants quotiented out."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    alg = H.algebra
    cols, rows = commutant_system(H, d)
    vectors = exact_nullspace(rows, len(cols), alg.params,
                              dense_limit=dense_limit)
    basis = []
    for vec in vectors:
        el = EnvElement(alg, {cols[j]: c for j, c in vec.items()})
        el = normalize_element(el)
        res = commutator(H, el)
        if not res.is_zero():
            raise AssertionError("solver returned a non-commuting element")
        basis.append(el)
    basis.sort(key=lambda e: grlex_key(e.leading_monomial()))
    return CommutantBasis(H, d, basis, comb(alg.n + d, d))


def modular_commutant_nullity(H, d, attempt=0):
    """Nullity of the commutant system at a fixed modular evaluation.

    Upper-bounds the generic commutant dimension: specialization can
    only lower the matrix rank, never raise it.
    """
    alg = H.algebra
    cols, rows = commutant_system(H, d)
    point = evaluation_point(alg.params, which=attempt)
    return fp_nullity(rows, len(cols), alg.params, point,
                      PRIMES[attempt % len(PRIMES)])


def modular_span_rank(elements, attempt=0):
    """Rank, at the same fixed modular evaluation, of the span of exact
    elements; lower-bounds their generic rank."""
    vectors = []
    params = None
    for el in elements:
        params = el.algebra.params
        vectors.append(dict(el.terms))
    point = evaluation_point(params, which=attempt)
    return fp_rank_of_vectors(vectors, params, point,
                              PRIMES[attempt % len(PRIMES)])


def generator_products(gens, d, include_one=True):
    """Ordered products of generators with total degree <= d.

    Products take the listed generator order (ascending index, repeats
    allowed); returns (label, element) pairs where the label is the
    index multiset and () labels the constant.
    """
    degs = []
    for g in gens:
        dg = g.degree()
        degs.append(int(dg) if dg != float("-inf") else 0)
    out = []
    if include_one and gens:
        out.append(((), EnvElement.const(gens[0].algebra, 1)))
    for size in range(1, d + 1):
        for combo in combinations_with_replacement(range(len(gens)), size):
            total = sum(degs[i] for i in combo)
            if total > d or total < size:
                continue
            el = gens[combo[0]]
            for i in combo[1:]:
                el = el * gens[i]
            out.append((combo, el))
    return out


def _cleared_span(span):
    """Scale span elements to polynomial coefficients; keep the scales."""
    cleared = []
    scales = []
    for label, el in span:
        den = None
        for c in el.terms.values():
            den = c.den if den is None else poly_lcm(den, c.den)
        if den is None or den.is_const():
            cleared.append((label, el))
            scales.append(None)
        else:
            cleared.append((label, el.scale(ParamRat.from_poly(den))))
            scales.append(ParamRat.from_poly(den))
    return cleared, scales


def _entry_poly(el, key, params):
    c = el.terms.get(key)
    if c is None:
        return ParamPoly(params)
    return c.num


def _solve_in_span(target, span, full=False):
    """Exact expression of ``target`` in the span of labelled elements.

    Returns (combination, residual); the residual is recomputed by exact
    reconstruction, so a wrong modular row selection can only cause a
    fallback, never a wrong answer.
    """
    params = target.algebra.params
    if not span:
        return {}, target
    cleared, scales = _cleared_span(span)
    tden = None
    for c in target.terms.values():
        tden = c.den if tden is None else poly_lcm(tden, c.den)
    tscale = None
    work_target = target
    if tden is not None and not tden.is_const():
        tscale = ParamRat.from_poly(tden)
        work_target = target.scale(tscale)

    row_keys = set(work_target.terms)
    for _, el in cleared:
        row_keys.update(el.terms)
    row_keys = sorted(row_keys, key=grlex_key)
    if full or len(row_keys) <= len(cleared) + 8:
        rows = row_keys
    else:
        rows = _select_rows(cleared, work_target, row_keys, params)
    mat = [[_entry_poly(el, k, params) for _, el in cleared] for k in rows]
    rhs = [_entry_poly(work_target, k, params) for k in rows]
    sol = bareiss_solve(mat, rhs)
    combo = {}
    recon = None
    for (label, el), c, scale in zip(span, sol, scales):
        if c.is_zero():
            continue
        if scale is not None:
            c = c * scale
        if tscale is not None:
            c = c / tscale
        combo[label] = c
        part = el.scale(c)
        recon = part if recon is None else recon + part
    residual = target if recon is None else target - recon
    return combo, residual


def _select_rows(cleared, target, row_keys, params):
    """Deterministic small row subset with full modular rank of [A|b]."""
    point = evaluation_point(params, which=0)
    p = PRIMES[0]
    vals = [int(Fraction(point[name]) % p) for name in params]
    ncols = len(cleared)
    echelon = {}
    chosen = []
    for k in row_keys:
        row = {}
        for j, (_, el) in enumerate(cleared):
            c = el.terms.get(k)
            if c is not None:
                v = _fp_poly(c.num, vals, p)
                if v:
                    row[j] = v
        c = target.terms.get(k)
        if c is not None:
            v = _fp_poly(c.num, vals, p)
            if v:
                row[ncols] = v
        while row:
            lead = min(row)
            piv = echelon.get(lead)
            if piv is None:
                inv = pow(row[lead], p - 2, p)
                echelon[lead] = {j: v * inv % p for j, v in row.items()}
                chosen.append(k)
                break
            f = row[lead]
            for j, v in piv.items():
                nv = (row.get(j, 0) - f * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        if len(chosen) >= ncols + 1:
            break
    return chosen


def reduce_against(P, gens, d, products=None):
    """Express P in ordered products (total degree <= d) of ``gens``.

    Returns (remainder, combination); the remainder is zero exactly when
    P lies in the span over the generic parameter field.  Combination
    keys are index multisets into ``gens`` (() for the constant).
    """
    if P.degree() > d:
        raise ValueError("element degree exceeds the reduction bound")
    span = products if products is not None else generator_products(gens, d)
    combo, residual = _solve_in_span(P, span)
    if not residual.is_zero():
        combo, residual = _solve_in_span(P, span, full=True)
    return residual, combo


def generator_cascade(H, d, dense_limit=120):
    """New independent commuting generators per degree 2..d.

    At each degree the commutant basis is reduced modulo ordered
    products of everything found earlier (including earlier finds of
    the same degree); nonzero remainders join the generator list.
    """
    found = []
    for delta in range(2, d + 1):
        basis = commutant_basis(H, delta, dense_limit=dense_limit).basis
        for el in basis:
            gens = [g for _, g in found]
            remainder, _ = reduce_against(el, gens, delta)
            if not remainder.is_zero():
                found.append((delta, normalize_element(remainder)))
    return found


def new_generators(H, d, dense_limit=120):
    """The new independent generators appearing exactly at degree d."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    return [el for delta, el in generator_cascade(H, d,
                                                  dense_limit=dense_limit)
            if delta == d]
