"""Universal enveloping algebra: PBW basis, normal ordering, products.

Elements are finite linear combinations of PBW monomials
``X_1^{e_1} ... X_n^{e_n}`` (exponent tuples in the algebra's generator
order) with ``ParamRat`` coefficients.  Any word of generators is
rewritten into this basis with the rule ``X_j X_i -> X_i X_j + [X_j, X_i]``
for adjacent ``j > i``; results are cached per algebra and word.

The term order on monomials (for printing, leading terms and solver
columns) is graded lexicographic on exponent vectors.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import ParamRat

__all__ = [
    "EnvElement",
    "grlex_key",
    "monomials_up_to",
    "normal_order",
    "multiply",
    "commutator",
    "anticommutator",
    "substitute_generators",
]

NEG_INF = float("-inf")


def grlex_key(exps):
    return (sum(exps), exps)


def monomials_up_to(n, d, include_const=False):
    """PBW exponent tuples of total degree <= d, graded-lex ascending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for k in range(remaining + 1):
            prefix.append(k)
            rec(prefix, remaining - k, slots - 1)
            prefix.pop()

    for total in range(0 if include_const else 1, d + 1):
        level = []

        def rec2(prefix, remaining, slots):
            if slots == 1:
                level.append(tuple(prefix) + (remaining,))
                return
            for k in range(remaining, -1, -1):
                prefix.append(k)
                rec2(prefix, remaining - k, slots - 1)
                prefix.pop()

        rec2([], total, n)
        level.sort()
        out.extend(level)
    return out


def _order_word(alg, word):
    """Normal-order a generator word; returns {exponents: ParamRat}."""
    cache = alg._word_cache
    hit = cache.get(word)
    if hit is not None:
        return hit
    k = -1
    for idx in range(len(word) - 1):
        if word[idx] > word[idx + 1]:
            k = idx
            break
    if k < 0:
        exps = [0] * alg.n
        for g in word:
            exps[g] += 1
        result = {tuple(exps): alg.one}
        cache[word] = result
        return result
    j, i = word[k], word[k + 1]
    swapped = word[:k] + (i, j) + word[k + 2:]
    result = dict(_order_word(alg, swapped))
    for e, c in alg.bracket_terms(j, i).items():
        if any(e):
            sub = word[:k] + (e.index(1),) + word[k + 2:]
        else:
            sub = word[:k] + word[k + 2:]
        for m, s in _order_word(alg, sub).items():
            prev = result.get(m)
            val = c * s if prev is None else prev + c * s
            if val.is_zero():
                result.pop(m, None)
            else:
                result[m] = val
    cache[word] = result
    return result


def _word_of(exps):
    word = []
    for g, e in enumerate(exps):
        word.extend([g] * e)
    return tuple(word)


class EnvElement:
    """Normal-ordered element of the enveloping algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        if terms:
            self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        else:
            self.terms = {}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, algebra):
        return cls(algebra)

    @classmethod
    def const(cls, algebra, value):
        value = algebra.scalar(value)
        if value.is_zero():
            return cls(algebra)
        return cls(algebra, {algebra.zero_exp: value})

    @classmethod
    def generator(cls, algebra, g):
        if isinstance(g, str):
            g = algebra.index(g)
        e = [0] * algebra.n
        e[g] = 1
        return cls(algebra, {tuple(e): algebra.one})

    @classmethod
    def monomial(cls, algebra, exps, coeff=1):
        return cls(algebra, {tuple(exps): algebra.scalar(coeff)})

    # -- views ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero element has no leading monomial")
        return max(self.terms, key=grlex_key)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.algebra.zero)

    def constant_part(self):
        return self.terms.get(self.algebra.zero_exp, self.algebra.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]),
                      reverse=True)

    def _check(self, other):
        if self.algebra is not other.algebra and \
                not self.algebra.compatible(other.algebra):
            raise ValueError("elements belong to different algebras")

    # -- linear structure ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            other = EnvElement.const(self.algebra, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            prev = terms.get(m)
            val = c if prev is None else prev + c
            if val.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = val
        out = EnvElement.__new__(EnvElement)
        out.algebra = self.algebra
        out.terms = terms
        return out

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            other = EnvElement.const(self.algebra, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = EnvElement.__new__(EnvElement)
        out.algebra = self.algebra
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def scale(self, coeff):
        coeff = self.algebra.scalar(coeff)
        if coeff.is_zero():
            return EnvElement(self.algebra)
        out = EnvElement.__new__(EnvElement)
        out.algebra = self.algebra
        out.terms = {m: c * coeff for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        terms = {}
        for m1, c1 in self.terms.items():
            w1 = _word_of(m1)
            for m2, c2 in other.terms.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                for m, s in _order_word(alg, w1 + _word_of(m2)).items():
                    prev = terms.get(m)
                    val = c * s if prev is None else prev + c * s
                    if val.is_zero():
                        terms.pop(m, None)
                    else:
                        terms[m] = val
        out = EnvElement.__new__(EnvElement)
        out.algebra = alg
        out.terms = terms
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamRat)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power in the enveloping algebra")
        out = EnvElement.const(self.algebra, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra.compatible(other.algebra) and \
            self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitution and specialization -----------------------------------

    def substitute_generators(self, images):
        """Replace generators by elements, word by word, then reorder.

        ``images`` maps generator name or index to an ``EnvElement`` of the
        same algebra; omitted generators map to themselves.
        """
        alg = self.algebra
        table = {}
        for key, val in images.items():
            g = alg.index(key) if isinstance(key, str) else key
            table[g] = val
        out = EnvElement(alg)
        for m, c in self.terms.items():
            acc = EnvElement.const(alg, c)
            for g, e in enumerate(m):
                if not e:
                    continue
                img = table.get(g)
                if img is None:
                    img = EnvElement.generator(alg, g)
                for _ in range(e):
                    acc = acc * img
            out = out + acc
        return out

    def specialize(self, assignment, target=None):
        """Assign rationals to parameters; ``target`` is the specialized
        algebra (built with  ``LieAlgebra.specialize``) to attach to."""
        alg = target if target is not None else \
            self.algebra.specialize(assignment)
        new_params = alg.params
        return EnvElement(alg, {m: c.restrict(assignment, new_params)
                                for m, c in self.terms.items()})

    # -- rendering -------------------------------------------------------

    def render(self):
        """Canonical text form; the parser reads this back verbatim."""
        from .render import render_terms
        return render_terms(self.sorted_terms(), self._monomial_str)

    def _monomial_str(self, m):
        names = self.algebra.names
        parts = []
        for g, e in enumerate(m):
            if e == 1:
                parts.append(names[g])
            elif e > 1:
                parts.append(f"{names[g]}^{e}")
        return parts

    def __repr__(self):
        return f"EnvElement({self.render()})"


def normal_order(algebra, word, coeff=1):
    """Normal-order an explicit generator word times a scalar."""
    idxs = tuple(algebra.index(g) if isinstance(g, str) else g for g in word)
    for g in idxs:
        if not 0 <= g < algebra.n:
            raise ValueError(f"generator index {g} out of range")
    coeff = algebra.scalar(coeff)
    return EnvElement(algebra, {m: coeff * c
                                for m, c in _order_word(algebra, idxs).items()})


def multiply(x, y):
    return x * y


def commutator(x, y):
    return x * y - y * x


def anticommutator(x, y):
    return x * y + y * x


def substitute_generators(x, images):
    return x.substitute_generators(images)
