"""Exact arithmetic in Q[params] and its fraction field.

Every scalar in the engine is a ``ParamRat``: a reduced fraction of
multivariate polynomials with rational coefficients in a fixed, ordered
tuple of parameter names (the *context*).  Polynomials are stored as
mappings from exponent vectors to ``fractions.Fraction``, kept in
canonical form (no zero coefficients).  The monomial order used for
leading terms, printing and pivot selection is graded lexicographic with
respect to the declared parameter order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

__all__ = [
    "CoeffError",
    "ContextMismatch",
    "SpecializationError",
    "ParamPoly",
    "ParamRat",
    "poly_gcd",
    "poly_divexact",
]


class CoeffError(ArithmeticError):
    pass


class ContextMismatch(CoeffError):
    """Operands were built over different parameter contexts."""


class SpecializationError(CoeffError):
    """A denominator vanished under a parameter assignment."""


def _grlex_key(exps):
    # graded lexicographic: total degree first, then lex in declared order
    return (sum(exps), exps)


def _num(value):
    """Coefficient normal form: int when integral, Fraction otherwise.

    Mixed int/Fraction storage is safe: equal numbers compare and hash
    equal, and integer fast paths dominate the solver's running time.
    """
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return value.numerator
    return value


def _inv(value):
    return Fraction(value.denominator, value.numerator) \
        if isinstance(value, Fraction) else Fraction(1, value)


class ParamPoly:
    """Multivariate polynomial over Q in a fixed ordered parameter context.

    ``terms`` maps exponent tuples (one entry per parameter, in context
    order) to nonzero ``Fraction`` coefficients.  Instances are treated
    as immutable values; all operations return new objects.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params, terms=None):
        self.params = tuple(params)
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, params):
        return cls(params)

    @classmethod
    def const(cls, params, value):
        params = tuple(params)
        if not isinstance(value, (int, Fraction)):
            value = Fraction(value)
        if not value:
            return cls(params)
        return cls(params, {(0,) * len(params): _num(value)})

    @classmethod
    def var(cls, params, name):
        params = tuple(params)
        if name not in params:
            raise CoeffError(f"unknown parameter {name!r}")
        e = [0] * len(params)
        e[params.index(name)] = 1
        return cls(params, {tuple(e): 1})

    # -- predicates and views -----------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        n = len(self.terms)
        if n == 0:
            return True
        if n > 1:
            return False
        return not any(next(iter(self.terms)))

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        (e, c), = self.terms.items()
        if any(e):
            raise CoeffError("not a constant polynomial")
        return Fraction(c)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def _check(self, other):
        if self.params != other.params:
            raise ContextMismatch(
                f"parameter contexts differ: {self.params} vs {other.params}")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        out = ParamPoly.__new__(ParamPoly)
        out.params = self.params
        out.terms = terms
        return out

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = -c
            else:
                s = s - c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        out = ParamPoly.__new__(ParamPoly)
        out.params = self.params
        out.terms = terms
        return out

    def __neg__(self):
        out = ParamPoly.__new__(ParamPoly)
        out.params = self.params
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ParamPoly(self.params)
            other = _num(other)
            out = ParamPoly.__new__(ParamPoly)
            out.params = self.params
            out.terms = {e: c * other for e, c in self.terms.items()}
            return out
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                if s is None:
                    terms[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        terms[e] = s
                    else:
                        del terms[e]
        out = ParamPoly.__new__(ParamPoly)
        out.params = self.params
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise CoeffError("negative power of a polynomial")
        out = ParamPoly.const(self.params, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash((self.params, frozenset(self.terms.items())))

    # -- content and normal forms --------------------------------------

    def rational_content(self):
        """Positive rational c with self/c integer-primitive, 0 for zero."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = _int_gcd(num, c.numerator)
            den = den * c.denominator // _int_gcd(den, c.denominator)
        return Fraction(num, den)

    def monomial_content(self):
        """Largest monomial exponent dividing every term."""
        if not self.terms:
            return (0,) * len(self.params)
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            for i, v in enumerate(e):
                if v < m[i]:
                    m[i] = v
            if not any(m):
                break
        return tuple(m)

    def map_coeffs(self, f):
        return ParamPoly(self.params, {e: f(c) for e, c in self.terms.items()})

    def divide_monomial(self, m):
        return ParamPoly(self.params,
                         {tuple(a - b for a, b in zip(e, m)): c
                          for e, c in self.terms.items()})

    def evaluate(self, assignment):
        """Exact value at a full parameter -> rational assignment."""
        vals = []
        for name in self.params:
            if name not in assignment:
                raise SpecializationError(f"parameter {name!r} not assigned")
            vals.append(Fraction(assignment[name]))
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * v ** k
            total += t
        return total

    def restrict(self, assignment, new_params):
        """Substitute some parameters by rationals, re-indexing the rest."""
        new_params = tuple(new_params)
        pos = []
        for name in new_params:
            if name not in self.params:
                raise CoeffError(f"parameter {name!r} not in context")
            pos.append(self.params.index(name))
        out = {}
        for e, c in self.terms.items():
            for i, name in enumerate(self.params):
                if name in assignment and e[i]:
                    c = c * Fraction(assignment[name]) ** e[i]
            if not c:
                continue
            ne = tuple(e[i] for i in pos)
            s = out.get(ne)
            out[ne] = c if s is None else s + c
        return ParamPoly(new_params, out)

    # -- printing -------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]),
                      reverse=True)

    def __repr__(self):
        return f"ParamPoly({self.to_str()!r})"

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.params, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = -c if c < 0 else c
            if not factors:
                body = _frac_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_frac_str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)


def _frac_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------
# polynomial gcd and exact division
# ---------------------------------------------------------------------

def poly_divexact(f, g):
    """Quotient f/g when the division is exact; raises otherwise."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if g.is_const():
        inv = _inv(g.const_value())
        return f.map_coeffs(lambda c: _num(c * inv))
    q = {}
    rem = dict(f.terms)
    ge, gc = g.leading()
    gterms = list(g.terms.items())
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem[e]
        qe = tuple(a - b for a, b in zip(e, ge))
        if any(v < 0 for v in qe):
            raise CoeffError("inexact polynomial division")
        if isinstance(c, int) and isinstance(gc, int):
            qc = c // gc if c % gc == 0 else Fraction(c, gc)
        else:
            qc = _num(c * _inv(gc))
        q[qe] = qc
        for te, tc in gterms:
            ne = tuple(a + b for a, b in zip(qe, te))
            s = rem.get(ne, 0) - qc * tc
            if s:
                rem[ne] = s
            else:
                rem.pop(ne, None)
    return ParamPoly(f.params, q)


def _active_vars(f, g):
    n = len(f.params)
    seen = [False] * n
    for poly in (f, g):
        for e in poly.terms:
            for i in range(n):
                if e[i]:
                    seen[i] = True
    return [i for i in range(n) if seen[i]]


def _to_univariate(f, v):
    """Split f by the exponent of variable v: degree -> coefficient poly."""
    out = {}
    for e, c in f.terms.items():
        d = e[v]
        ne = e[:v] + (0,) + e[v + 1:]
        coeff = out.get(d)
        if coeff is None:
            out[d] = {ne: c}
        else:
            coeff[ne] = coeff.get(ne, Fraction(0)) + c
    return {d: ParamPoly(f.params, t) for d, t in out.items()}


def _from_univariate(params, v, coeffs):
    terms = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            ne = e[:v] + (d,) + e[v + 1:]
            terms[ne] = terms.get(ne, Fraction(0)) + c
    return ParamPoly(params, terms)


def _shift_var(poly, v, k):
    return ParamPoly(poly.params,
                     {e[:v] + (e[v] + k,) + e[v + 1:]: c
                      for e, c in poly.terms.items()})


def _uni_content(f, v):
    cont = None
    for _, coeff in _to_univariate(f, v).items():
        cont = coeff if cont is None else poly_gcd(cont, coeff)
        if cont.is_const():
            break
    return cont


def _pseudo_rem(f, g, v):
    """Pseudo-remainder of f by g viewed as univariate in variable v."""
    gu = _to_univariate(g, v)
    dg = max(gu)
    lg = gu[dg]
    r = f
    while not r.is_zero():
        ru = _to_univariate(r, v)
        dr = max(ru)
        if dr < dg:
            break
        lr = ru[dr]
        r = lg * r - _shift_var(lr * g, v, dr - dg)
    return r


def _primitive_positive(f):
    if f.is_zero():
        return f
    c = f.rational_content()
    _, lead = f.leading()
    if lead < 0:
        c = -c
    inv = _inv(c)
    return f.map_coeffs(lambda x: _num(x * inv))


def poly_gcd(f, g):
    """gcd over Q[params], normalized integer-primitive with positive lead."""
    if f.is_zero():
        return _primitive_positive(g)
    if g.is_zero():
        return _primitive_positive(f)
    if f.is_const() or g.is_const():
        return ParamPoly.const(f.params, 1)
    mf = f.monomial_content()
    mg = g.monomial_content()
    if any(mf):
        f = f.divide_monomial(mf)
    if any(mg):
        g = g.divide_monomial(mg)
    mono = tuple(min(a, b) for a, b in zip(mf, mg))
    active = _active_vars(f, g)
    if not active:
        base = ParamPoly.const(f.params, 1)
    else:
        v = active[0]
        cf = _uni_content(f, v)
        cg = _uni_content(g, v)
        cont = poly_gcd(cf, cg)
        a = poly_divexact(f, cf)
        b = poly_divexact(g, cg)
        # primitive polynomial remainder sequence in the main variable
        if max(_to_univariate(a, v)) < max(_to_univariate(b, v)):
            a, b = b, a
        while not b.is_zero():
            r = _pseudo_rem(a, b, v)
            a, b = b, (r if r.is_zero() else
                       poly_divexact(r, _uni_content(r, v)))
        base = _primitive_positive(cont * a)
    if any(mono):
        base = ParamPoly(base.params,
                         {tuple(x + y for x, y in zip(e, mono)): c
                          for e, c in base.terms.items()})
    return _primitive_positive(base)


def poly_lcm(f, g):
    if f.is_zero() or g.is_zero():
        return ParamPoly(f.params)
    return _primitive_positive(poly_divexact(f * g, poly_gcd(f, g)))


# ---------------------------------------------------------------------
# Fraction field
# ---------------------------------------------------------------------

class ParamRat:
    """Reduced fraction num/den of ``ParamPoly`` over a shared context.

    Canonical form: gcd(num, den) is a unit and den is integer-primitive
    with positive leading coefficient (graded-lex), so equal values have
    equal representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = ParamPoly.const(num.params, 1)
        if _normalized:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = ParamPoly.const(num.params, 1)
            return
        if den.is_const():
            inv = _inv(den.const_value())
            self.num = num.map_coeffs(lambda c: _num(c * inv))
            self.den = ParamPoly.const(num.params, 1)
            return
        g = poly_gcd(num, den)
        if not g.is_const():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        c = den.rational_content()
        _, lead = den.leading()
        if lead < 0:
            c = -c
        if c != 1:
            inv = _inv(c)
            den = den.map_coeffs(lambda x: _num(x * inv))
            num = num.map_coeffs(lambda x: _num(x * inv))
        if den.is_const():
            inv = _inv(den.const_value())
            num = num.map_coeffs(lambda x: _num(x * inv))
            den = ParamPoly.const(num.params, 1)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_const(cls, params, value):
        return cls(ParamPoly.const(params, value))

    @classmethod
    def from_poly(cls, poly):
        return cls(poly, None, _normalized=True)

    @classmethod
    def var(cls, params, name):
        return cls(ParamPoly.var(params, name))

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.den.is_const() and self.num.is_const() and \
            not self.num.is_zero() and self.num.const_value() == 1

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    @property
    def params(self):
        return self.num.params

    def _coerce(self, other):
        if isinstance(other, ParamRat):
            if self.num.params != other.num.params:
                raise ContextMismatch("parameter contexts differ")
            return other
        if isinstance(other, (int, Fraction)):
            return ParamRat.from_const(self.num.params, other)
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den is other.den or self.den == other.den:
            return ParamRat(self.num + other.num, self.den)
        return ParamRat(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den is other.den or self.den == other.den:
            return ParamRat(self.num - other.num, self.den)
        return ParamRat(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ParamRat(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ParamRat.from_const(self.num.params, 0)
        if self.den.is_const() and other.den.is_const():
            # normalized denominators that are constant are exactly 1
            return ParamRat(self.num * other.num, None, _normalized=True)
        return ParamRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return ParamRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __pow__(self, n):
        if n == 0:
            return ParamRat.from_const(self.num.params, 1)
        if n < 0:
            return ParamRat(self.den, self.num) ** (-n)
        return ParamRat(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_const() and self.const_value() == other
        if not isinstance(other, ParamRat):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, assignment):
        d = self.den.evaluate(assignment)
        if not d:
            raise SpecializationError(
                f"denominator {self.den.to_str()} vanishes at {assignment}")
        return self.num.evaluate(assignment) / d

    def restrict(self, assignment, new_params):
        den = self.den.restrict(assignment, new_params)
        if den.is_zero():
            raise SpecializationError(
                f"denominator {self.den.to_str()} vanishes under {assignment}")
        return ParamRat(self.num.restrict(assignment, new_params), den)

    def __repr__(self):
        return f"ParamRat({self.to_str()!r})"

    def to_str(self):
        if self.den.is_const():
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"
