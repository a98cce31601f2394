"""Exact linear algebra over the parametric coefficient field.

The contract solver is fraction-free Bareiss elimination over
``ParamPoly`` with the pivot rule: nonzero entry of minimal total
parameter degree, ties broken by smallest column then smallest row.

Large sparse systems go through a predict-lift-verify driver: a dense
modular elimination at fixed parameter evaluation points predicts the
nullity and the supports of the reduced nullspace vectors, small exact
Bareiss solves lift each vector, and every result is verified against
the full system.  Verified vectors are genuine nullspace elements
regardless of the prediction, and matching the modular nullity bound
certifies completeness: a specialization can only enlarge a nullspace,
never shrink it.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

import numpy as np

from .coeffs import ParamPoly, ParamRat, poly_divexact, poly_gcd, poly_lcm

__all__ = [
    "PRIMES",
    "evaluation_point",
    "bareiss_nullspace",
    "bareiss_solve",
    "exact_nullspace",
    "fp_matrix",
    "fp_nullity",
    "fp_nullspace",
    "clear_row_denominators",
]

# fixed 31-bit primes and deterministic evaluation points keep every
# modular prediction reproducible
PRIMES = (2147483629, 2147483587, 2147483563)

_POINT_SEED = 0x5EED


def evaluation_point(params, which=0):
    """Deterministic rational evaluation point for a parameter tuple."""
    import random

    rng = random.Random((_POINT_SEED, which, tuple(params)).__repr__())
    point = {}
    for name in params:
        v = rng.randrange(10_001, 999_983)
        if rng.random() < 0.5:
            v = -v
        point[name] = Fraction(v)
    return point


# ---------------------------------------------------------------------
# modular layer
# ---------------------------------------------------------------------

def _fp_poly(poly, vals, p):
    total = 0
    for e, c in poly.terms.items():
        t = c.numerator % p
        if c.denominator != 1:
            t = t * pow(c.denominator % p, p - 2, p) % p
        for v, k in zip(vals, e):
            if k:
                t = t * pow(v, k, p) % p
        total = (total + t) % p
    return total


def fp_matrix(rows, ncols, params, point, p):
    """Dense int64 matrix of the sparse ParamPoly rows at a point mod p."""
    vals = [int(Fraction(point[name]) % p) for name in params]
    dense = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, poly in row.items():
            dense[i, j] = _fp_poly(poly, vals, p)
    return dense


def _fp_forward(dense, p):
    """In-place forward elimination; returns pivot (row, col) list."""
    m, n = dense.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        sub = dense[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            dense[[r, i]] = dense[[i, r]]
        inv = pow(int(dense[r, c]), p - 2, p)
        dense[r] = dense[r] * inv % p
        below = dense[r + 1:, c]
        touched = np.nonzero(below)[0]
        if touched.size:
            rows_idx = touched + r + 1
            dense[rows_idx] = (dense[rows_idx]
                               - np.outer(dense[rows_idx, c], dense[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def fp_nullspace(rows, ncols, params, point, p):
    """(nullity, pivot cols, canonical nullspace vectors mod p)."""
    dense = fp_matrix(rows, ncols, params, point, p)
    pivots = _fp_forward(dense, p)
    rank = len(pivots)
    piv_set = set(pivots)
    free = [c for c in range(ncols) if c not in piv_set]
    vectors = []
    ech = dense[:rank]
    for f in free:
        x = np.zeros(ncols, dtype=np.int64)
        x[f] = 1
        for k in range(rank - 1, -1, -1):
            c = pivots[k]
            s = int(ech[k] @ x % p)
            s = (s - int(ech[k, c]) * int(x[c])) % p
            x[c] = (-s) % p
        vectors.append(x)
    return len(free), pivots, vectors


def fp_nullity(rows, ncols, params, point, p):
    dense = fp_matrix(rows, ncols, params, point, p)
    return ncols - len(_fp_forward(dense, p))


def fp_rank_of_vectors(vectors, params, point, p):
    """Rank mod p of sparse {key: ParamRat} vectors at a point."""
    keys = sorted({k for v in vectors for k in v})
    pos = {k: i for i, k in enumerate(keys)}
    vals = [int(Fraction(point[name]) % p) for name in params]
    dense = np.zeros((len(vectors), len(keys)), dtype=np.int64)
    for i, v in enumerate(vectors):
        for k, c in v.items():
            num = _fp_poly(c.num, vals, p)
            den = _fp_poly(c.den, vals, p)
            if den == 0:
                raise ZeroDivisionError("denominator vanishes at the point")
            dense[i, pos[k]] = num * pow(den, p - 2, p) % p
    return len(_fp_forward(dense, p))


# ---------------------------------------------------------------------
# exact dense Bareiss
# ---------------------------------------------------------------------

def _pivot_search(mat, live_rows, live_cols):
    best = None
    for r in live_rows:
        row = mat[r]
        for c in live_cols:
            e = row[c]
            if e.is_zero():
                continue
            key = (e.total_degree(), c, r)
            if best is None or key < best[0]:
                best = (key, r, c)
                if key[0] == 0:
                    # degree cannot drop below 0; tie-breaks are ordered
                    if c == min(live_cols):
                        return best[1], best[2]
    if best is None:
        return None
    return best[1], best[2]


def bareiss_echelon(mat, live_cols=None):
    """Fraction-free elimination in place.

    ``mat`` is a list of ParamPoly lists.  Returns the pivot list
    [(row, col, pivot_entry_at_end)] in elimination order.
    """
    nrows = len(mat)
    if not nrows:
        return []
    ncols = len(mat[0])
    live_rows = list(range(nrows))
    if live_cols is None:
        live_cols = list(range(ncols))
    else:
        live_cols = list(live_cols)
    params = None
    for row in mat:
        for e in row:
            params = e.params
            break
        if params is not None:
            break
    prev = ParamPoly.const(params, 1) if params is not None else None
    pivots = []
    while live_rows and live_cols:
        found = _pivot_search(mat, live_rows, live_cols)
        if found is None:
            break
        pr, pc = found
        live_rows.remove(pr)
        live_cols.remove(pc)
        piv = mat[pr][pc]
        prow = mat[pr]
        for r in live_rows:
            row = mat[r]
            factor = row[pc]
            if factor.is_zero():
                for c in live_cols:
                    if not row[c].is_zero():
                        row[c] = poly_divexact(piv * row[c], prev)
            else:
                for c in live_cols:
                    row[c] = poly_divexact(piv * row[c] - factor * prow[c],
                                           prev)
                row[pc] = ParamPoly(piv.params)
        prev = piv
        pivots.append((pr, pc))
    return pivots


def bareiss_nullspace(mat):
    """Nullspace basis of a dense ParamPoly matrix, as ParamRat lists."""
    if not mat:
        return []
    ncols = len(mat[0])
    work = [list(row) for row in mat]
    pivots = bareiss_echelon(work)
    piv_cols = {c for _, c in pivots}
    params = mat[0][0].params
    zero = ParamRat.from_const(params, 0)
    one = ParamRat.from_const(params, 1)
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for pr, pc in reversed(pivots):
            row = work[pr]
            s = zero
            for c in range(ncols):
                if c != pc and not row[c].is_zero() and not x[c].is_zero():
                    s = s + ParamRat.from_poly(row[c]) * x[c]
            x[pc] = -s / ParamRat.from_poly(row[pc])
        basis.append(x)
    return basis


def bareiss_solve(mat, rhs):
    """Solve mat @ x = rhs; free variables are set to zero.

    Returns the candidate solution as a ParamRat list; callers verify by
    reconstruction, so inconsistent systems simply yield a nonzero
    residual downstream.
    """
    if not mat:
        return []
    ncols = len(mat[0])
    work = [list(row) + [b] for row, b in zip(mat, rhs)]
    pivots = bareiss_echelon(work, live_cols=range(ncols))
    params = mat[0][0].params
    zero = ParamRat.from_const(params, 0)
    x = [zero] * ncols
    for pr, pc in reversed(pivots):
        row = work[pr]
        s = ParamRat.from_poly(row[ncols])
        for c in range(ncols):
            if c != pc and not row[c].is_zero() and not x[c].is_zero():
                s = s - ParamRat.from_poly(row[c]) * x[c]
        x[pc] = s / ParamRat.from_poly(row[pc])
    return x


# ---------------------------------------------------------------------
# sparse driver
# ---------------------------------------------------------------------

def clear_row_denominators(row):
    """Scale a {col: ParamRat} row to integer-coefficient ParamPoly."""
    den = None
    for c in row.values():
        den = c.den if den is None else poly_lcm(den, c.den)
    out = {}
    rat = 1
    for k, c in row.items():
        scaled = c.num * poly_divexact(den, c.den)
        if not scaled.is_zero():
            out[k] = scaled
            d = scaled.rational_content().denominator
            rat = rat * d // _int_gcd(rat, d)
    if rat != 1:
        out = {k: poly * rat for k, poly in out.items()}
    return {k: poly.map_coeffs(_intify) for k, poly in out.items()}


def _intify(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _strip_content(row):
    g = None
    for e in row.values():
        g = e if g is None else poly_gcd(g, e)
        if g.is_const():
            break
    if g is not None and not g.is_const():
        row = {k: poly_divexact(e, g) for k, e in row.items()}
    return row


def select_independent_rows(rows, ncols, params, point, p, margin=4):
    """Indices of a small row subset with full modular row rank.

    Rows outside the subset are honored later by exact verification of
    every produced vector, so a rank-deficient modular choice can only
    trigger a retry, never a wrong result.
    """
    vals = [int(Fraction(point[name]) % p) for name in params]
    echelon = {}
    chosen = []
    limit = ncols + margin
    for i, row in enumerate(rows):
        work = {}
        for j, poly in row.items():
            v = _fp_poly(poly, vals, p)
            if v:
                work[j] = v
        while work:
            lead = min(work)
            piv = echelon.get(lead)
            if piv is None:
                inv = pow(work[lead], p - 2, p)
                echelon[lead] = {j: v * inv % p for j, v in work.items()}
                chosen.append(i)
                break
            f = work.pop(lead)
            for j, v in piv.items():
                if j == lead:
                    continue
                nv = (work.get(j, 0) - f * v) % p
                if nv:
                    work[j] = nv
                else:
                    work.pop(j, None)
        if len(chosen) >= limit:
            break
    return chosen


def _verify_vector(rows, vec):
    params = next(iter(vec.values())).params
    zero = ParamRat.from_const(params, 0)
    for row in rows:
        shared = row.keys() & vec.keys()
        if not shared:
            continue
        s = zero
        for c in shared:
            s = s + ParamRat.from_poly(row[c]) * vec[c]
        if not s.is_zero():
            return False
    return True


def _rref_rational(vectors, ncols):
    """Deterministic reduced form of sparse ParamRat vectors."""
    basis = []  # (lead col, {col: ParamRat})
    for vec in vectors:
        vec = dict(vec)
        for lead, other in basis:
            c = vec.get(lead)
            if c is not None and not c.is_zero():
                for k, v in other.items():
                    cur = vec.get(k)
                    val = -c * v if cur is None else cur - c * v
                    if val.is_zero():
                        vec.pop(k, None)
                    else:
                        vec[k] = val
        live = [k for k, v in vec.items() if not v.is_zero()]
        if not live:
            continue
        lead = min(live)
        inv = vec[lead]
        vec = {k: v / inv for k, v in vec.items() if not v.is_zero()}
        basis.append((lead, vec))
        basis.sort(key=lambda t: t[0])
    # back-reduce for canonical output
    for i in range(len(basis) - 1, -1, -1):
        lead, vec = basis[i]
        for j in range(i):
            ljead, other = basis[j]
            c = other.get(lead)
            if c is not None and not c.is_zero():
                for k, v in vec.items():
                    cur = other.get(k)
                    val = -c * v if cur is None else cur - c * v
                    if val.is_zero():
                        other.pop(k, None)
                    else:
                        other[k] = val
    return [vec for _, vec in basis]


def exact_nullspace(rows, ncols, params, dense_limit=120):
    """Nullspace basis of sparse {col: ParamPoly} rows over ParamRat.

    Small systems run plain Bareiss.  Larger systems use the modular
    predict-lift-verify driver; its output is exact, and completeness is
    certified by the modular nullity bound.
    """
    rows = [_strip_content(r) for r in rows if r]
    if ncols <= dense_limit:
        point = evaluation_point(params, which=0)
        keep = select_independent_rows(rows, ncols, params, point, PRIMES[0])
        subset = [rows[i] for i in keep]
        mat = _densify(subset, ncols, params)
        vecs = bareiss_nullspace(mat)
        sparse = [{c: v for c, v in enumerate(x) if not v.is_zero()}
                  for x in vecs]
        verified = [v for v in sparse if _verify_vector(rows, v)]
        if len(verified) == len(sparse):
            return _rref_rational(verified, ncols)
        # degenerate modular point; fall back to the full row set
        mat = _densify(rows, ncols, params)
        sparse = [{c: v for c, v in enumerate(x) if not v.is_zero()}
                  for x in bareiss_nullspace(mat)]
        return _rref_rational(sparse, ncols)

    last_error = None
    for attempt, p in enumerate(PRIMES):
        point = evaluation_point(params, which=attempt)
        try:
            found = _lift_nullspace(rows, ncols, params, point, p)
        except _LiftFailure as exc:
            last_error = exc
            continue
        return found
    raise RuntimeError(
        f"modular lift failed at all evaluation points: {last_error}")


class _LiftFailure(RuntimeError):
    pass


def _densify(rows, ncols, params):
    zero = ParamPoly(params)
    return [[row.get(c, zero) for c in range(ncols)] for row in rows]


def _lift_nullspace(rows, ncols, params, point, p):
    nullity, _, vectors = fp_nullspace(rows, ncols, params, point, p)
    if nullity == 0:
        return []
    col_rows = {}
    for i, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, []).append(i)
    candidates = []
    for v in vectors:
        support = sorted(int(c) for c in np.nonzero(v)[0])
        lifted = _lift_support(rows, col_rows, support, params, point, p)
        candidates.extend(lifted)
    verified = [vec for vec in candidates if _verify_vector(rows, vec)]
    basis = _rref_rational(verified, ncols)
    if len(basis) != nullity:
        raise _LiftFailure(
            f"lifted {len(basis)} of {nullity} predicted vectors")
    return basis


def _lift_support(rows, col_rows, support, params, point, p):
    row_idx = sorted({i for c in support for i in col_rows.get(c, [])})
    pos = {c: k for k, c in enumerate(support)}
    sub = []
    seen = set()
    for i in row_idx:
        row = rows[i]
        restricted = tuple(sorted(((pos[c], row[c]) for c in row if c in pos),
                                  key=lambda t: t[0]))
        if restricted in seen:
            continue
        seen.add(restricted)
        sub.append(dict(restricted))
    keep = select_independent_rows(sub, len(support), params, point, p)
    mat = _densify([sub[i] for i in keep], len(support), params)
    vecs = bareiss_nullspace(mat)
    out = []
    for x in vecs:
        vec = {support[k]: v for k, v in enumerate(x) if not v.is_zero()}
        if vec and _verify_vector(sub, {pos[c]: v for c, v in vec.items()}):
            out.append(vec)
    return out
