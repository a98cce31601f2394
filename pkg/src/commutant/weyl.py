"""Polynomial-coefficient differential operators and realizations.

``WeylOperator`` terms are pairs (coordinate exponents, derivative
multi-index) in normal form with all coordinates to the left of all
derivatives; composition uses ``d_a x_b = x_b d_a + delta_ab``.  A
``Realization`` maps Lie-algebra generators to first-order operators and
extends to the enveloping algebra monomial by monomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .coeffs import ParamRat

__all__ = [
    "WeylOperator",
    "Realization",
    "check_realization",
    "coadjoint_realization",
    "realize",
    "weyl_commutator",
    "weyl_anticommutator",
]


@lru_cache(maxsize=1 << 18)
def _mono_mul(p, q, r, s):
    """Normal form of (x^p d^q)(x^r d^s); list of (xexp, dexp, int)."""
    nv = len(p)
    out = []

    def rec(v, xe, de, coeff):
        if v == nv:
            out.append((tuple(xe), tuple(de), coeff))
            return
        top = min(q[v], r[v])
        for k in range(top + 1):
            c = comb(q[v], k) * comb(r[v], k) * factorial(k)
            xe.append(p[v] + r[v] - k)
            de.append(q[v] + s[v] - k)
            rec(v + 1, xe, de, coeff * c)
            xe.pop()
            de.pop()

    rec(0, [], [], 1)
    return tuple(out)


class WeylOperator:
    """Element of the Weyl algebra over named coordinates."""

    __slots__ = ("params", "names", "terms")

    def __init__(self, params, names, terms=None):
        self.params = tuple(params)
        self.names = tuple(names)
        if terms:
            self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        else:
            self.terms = {}

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, params, names):
        return cls(params, names)

    @classmethod
    def const(cls, params, names, value):
        if not isinstance(value, ParamRat):
            value = ParamRat.from_const(params, value)
        z = (0,) * len(names)
        if value.is_zero():
            return cls(params, names)
        return cls(params, names, {(z, z): value})

    @classmethod
    def coordinate(cls, params, names, v):
        if isinstance(v, str):
            v = names.index(v)
        z = [0] * len(names)
        z[v] = 1
        zero = (0,) * len(names)
        return cls(params, names, {(tuple(z), zero):
                                   ParamRat.from_const(params, 1)})

    @classmethod
    def derivative(cls, params, names, v):
        if isinstance(v, str):
            v = names.index(v)
        z = [0] * len(names)
        z[v] = 1
        zero = (0,) * len(names)
        return cls(params, names, {(zero, tuple(z)):
                                   ParamRat.from_const(params, 1)})

    # -- views -------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def order(self):
        """Maximal derivative order (-inf for the zero operator)."""
        if not self.terms:
            return float("-inf")
        return max(sum(de) for _, de in self.terms)

    def _scalar(self, value):
        if isinstance(value, ParamRat):
            return value
        return ParamRat.from_const(self.params, value)

    def _check(self, other):
        if self.names != other.names:
            raise ValueError("operators act on different variable sets")
        if self.params != other.params:
            raise ValueError("operators have different parameter contexts")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            other = WeylOperator.const(self.params, self.names, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            prev = terms.get(m)
            val = c if prev is None else prev + c
            if val.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = val
        return WeylOperator(self.params, self.names, terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            other = WeylOperator.const(self.params, self.names, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = WeylOperator.__new__(WeylOperator)
        out.params = self.params
        out.names = self.names
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def scale(self, coeff):
        coeff = self._scalar(coeff)
        if coeff.is_zero():
            return WeylOperator(self.params, self.names)
        return WeylOperator(self.params, self.names,
                            {m: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            return self.scale(other)
        self._check(other)
        terms = {}
        for (p, q), c1 in self.terms.items():
            for (r, s), c2 in other.terms.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                for xe, de, k in _mono_mul(p, q, r, s):
                    key = (xe, de)
                    add = c * k if k != 1 else c
                    prev = terms.get(key)
                    val = add if prev is None else prev + add
                    if val.is_zero():
                        terms.pop(key, None)
                    else:
                        terms[key] = val
        return WeylOperator(self.params, self.names, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative operator power")
        out = WeylOperator.const(self.params, self.names, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return (self.names == other.names and self.params == other.params
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def specialize(self, assignment, new_params=None):
        if new_params is None:
            new_params = tuple(p for p in self.params if p not in assignment)
        return WeylOperator(new_params, self.names,
                            {m: c.restrict(assignment, new_params)
                             for m, c in self.terms.items()})

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self):
        def key(item):
            (xe, de), _ = item
            return (sum(xe) + sum(de), sum(de), xe, de)
        return sorted(self.terms.items(), key=key, reverse=True)

    def _monomial_str(self, m):
        xe, de = m
        parts = []
        for nm, e in zip(self.names, xe):
            if e == 1:
                parts.append(nm)
            elif e > 1:
                parts.append(f"{nm}^{e}")
        for nm, e in zip(self.names, de):
            if e == 1:
                parts.append(f"d_{nm}")
            elif e > 1:
                parts.append(f"d_{nm}^{e}")
        return parts

    def render(self):
        from .render import render_terms
        return render_terms(self.sorted_terms(), self._monomial_str)

    def __repr__(self):
        return f"WeylOperator({self.render()})"


def weyl_commutator(x, y):
    return x * y - y * x


def weyl_anticommutator(x, y):
    return x * y + y * x


class Realization:
    """First-order differential-operator images of algebra generators."""

    def __init__(self, algebra, names, images, label=""):
        self.algebra = algebra
        self.names = tuple(names)
        self.label = label
        self.images = {}
        for key, op in images.items():
            g = algebra.index(key) if isinstance(key, str) else key
            if op.order() > 1:
                raise ValueError(
                    f"image of {algebra.names[g]} has derivative order > 1")
            self.images[g] = op
        self._mono_cache = {}

    def image(self, g):
        if isinstance(g, str):
            g = self.algebra.index(g)
        try:
            return self.images[g]
        except KeyError:
            raise KeyError(
                f"no image for generator {self.algebra.names[g]}") from None

    def constant(self, value):
        return WeylOperator.const(self.algebra.params, self.names, value)

    def realize_monomial(self, exps):
        hit = self._mono_cache.get(exps)
        if hit is not None:
            return hit
        op = self.constant(1)
        for g, e in enumerate(exps):
            if not e:
                continue
            img = self.image(g)
            for _ in range(e):
                op = op * img
        self._mono_cache[exps] = op
        return op

    def __repr__(self):
        label = self.label or "realization"
        return f"<{label}: {len(self.images)} images on vars {self.names}>"


def realize(x, realization):
    """Image of an enveloping-algebra element under a realization."""
    out = realization.constant(0)
    for m, c in x.sorted_terms():
        out = out + realization.realize_monomial(m).scale(c)
    return out


def check_realization(realization, members=None):
    """Violations (i, j, residual) of the homomorphism property."""
    alg = realization.algebra
    if members is None:
        idxs = sorted(realization.images)
    else:
        idxs = [alg.index(m) if isinstance(m, str) else m for m in members]
    bad = []
    for a in range(len(idxs)):
        for b in range(a + 1, len(idxs)):
            i, j = idxs[a], idxs[b]
            lhs = weyl_commutator(realization.image(i), realization.image(j))
            rhs = realization.constant(0)
            for e, c in alg.bracket_terms(i, j).items():
                if any(e):
                    rhs = rhs + realization.image(e.index(1)).scale(c)
                else:
                    rhs = rhs + realization.constant(c)
            res = lhs - rhs
            if not res.is_zero():
                bad.append((i, j, res))
    return bad


def coadjoint_realization(alg, members=None, prefix="x_"):
    """Linear vector fields X_i = sum_{a,b} x_b c_{ia}^b d_a from the
    structure constants; requires constant-free brackets."""
    if members is None:
        idxs = list(range(alg.n))
    else:
        idxs = [alg.index(m) if isinstance(m, str) else m for m in members]
    names = tuple(f"{prefix}{k + 1}" for k in range(len(idxs)))
    zero = (0,) * len(idxs)
    images = {}
    for pos_i, i in enumerate(idxs):
        terms = {}
        for pos_a, a in enumerate(idxs):
            for e, c in alg.bracket_terms(i, a).items():
                if not any(e):
                    if not c.is_zero():
                        raise ValueError(
                            "coadjoint realization requires constant-free "
                            f"brackets; [{alg.names[i]},{alg.names[a]}] has "
                            "a scalar term")
                    continue
                b = e.index(1)
                if b not in idxs:
                    raise ValueError(
                        f"[{alg.names[i]},{alg.names[a]}] leaves the "
                        "selected subalgebra")
                pos_b = idxs.index(b)
                xe = list(zero)
                xe[pos_b] = 1
                de = list(zero)
                de[pos_a] = 1
                key = (tuple(xe), tuple(de))
                prev = terms.get(key)
                val = c if prev is None else prev + c
                if val.is_zero():
                    terms.pop(key, None)
                else:
                    terms[key] = val
        images[i] = WeylOperator(alg.params, names, terms)
    return Realization(alg, names, images, label=f"coadjoint({alg.name})")
