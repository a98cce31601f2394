"""Lie algebras given by parametric structure constants.

A ``LieAlgebra`` stores an ordered generator list and, for each pair
``i < j``, the bracket ``[X_i, X_j]`` as a linear combination of
generators plus an optional scalar term (used for central constants that
the source tables fold into commutators).  Values of brackets are kept
as raw term dictionaries ``{exponent tuple: ParamRat}`` where the keys
are unit vectors (a generator) or the zero vector (the constant part).
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import ParamPoly, ParamRat

__all__ = [
    "AlgebraError",
    "LieAlgebra",
    "SubalgebraSelection",
    "build_algebra",
    "check_jacobi",
    "check_subalgebra",
]


class AlgebraError(ValueError):
    pass


def _unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


class LieAlgebra:
    """Structure data for a finite-dimensional Lie algebra."""

    def __init__(self, names, params, brackets, name=""):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate generator names")
        self.name = name
        self.names = names
        self.params = tuple(params)
        self.n = len(names)
        self.zero_exp = (0,) * self.n
        self.one = ParamRat.from_const(self.params, 1)
        self.zero = ParamRat.from_const(self.params, 0)
        self._brackets = {}
        for (i, j), terms in brackets.items():
            if i == j:
                if any(not c.is_zero() for c in terms.values()):
                    raise AlgebraError(
                        f"bracket [{names[i]},{names[i]}] must vanish")
                continue
            if (i, j) in self._brackets or (j, i) in self._brackets:
                raise AlgebraError(
                    f"duplicate bracket entry for ({names[i]},{names[j]})")
            clean = {}
            for e, c in terms.items():
                if sum(e) > 1:
                    raise AlgebraError(
                        f"bracket [{names[i]},{names[j]}] has degree > 1")
                if not c.is_zero():
                    clean[e] = c
            if i < j:
                self._brackets[(i, j)] = clean
            else:
                self._brackets[(j, i)] = {e: -c for e, c in clean.items()}
        # normal-ordering cache: word tuple -> {exponent tuple: ParamRat}
        self._word_cache = {}
        self._signature = (self.names, self.params,
                           tuple(sorted((k, tuple(sorted(v.items(), key=lambda t: t[0])))
                                        for k, v in self._brackets.items()
                                        if v)))

    # -- access ----------------------------------------------------------

    def index(self, nm):
        try:
            return self.names.index(nm)
        except ValueError:
            raise AlgebraError(f"unknown generator {nm!r}") from None

    def bracket_terms(self, i, j):
        """Term dict of [X_i, X_j]; querying (j, i) returns the negation."""
        if i == j:
            return {}
        if i < j:
            return self._brackets.get((i, j), {})
        stored = self._brackets.get((j, i), {})
        return {e: -c for e, c in stored.items()}

    def compatible(self, other):
        return self is other or self._signature == other._signature

    def scalar(self, value):
        if isinstance(value, ParamRat):
            return value
        return ParamRat.from_const(self.params, value)

    def param(self, name):
        return ParamRat.var(self.params, name)

    # -- derived algebras --------------------------------------------------

    def specialize(self, assignment, name=None):
        """Assign rationals to a subset of the parameters."""
        new_params = tuple(p for p in self.params if p not in assignment)
        brackets = {
            key: {e: c.restrict(assignment, new_params)
                  for e, c in terms.items()}
            for key, terms in self._brackets.items()
        }
        return LieAlgebra(self.names, new_params, brackets,
                          name=name or self.name)

    def reorder(self, new_names):
        """Same algebra with a different generator (hence PBW) order."""
        new_names = tuple(new_names)
        if sorted(new_names) != sorted(self.names):
            raise AlgebraError("reorder must permute the generator list")
        old_of_new = [self.index(nm) for nm in new_names]
        new_of_old = {o: k for k, o in enumerate(old_of_new)}
        n = self.n

        def remap(terms):
            out = {}
            for e, c in terms.items():
                if not any(e):
                    out[self.zero_exp] = c
                else:
                    out[_unit(n, new_of_old[e.index(1)])] = c
            return out

        brackets = {}
        for (i, j), terms in self._brackets.items():
            a, b = new_of_old[i], new_of_old[j]
            if a < b:
                brackets[(a, b)] = remap(terms)
            else:
                brackets[(b, a)] = {e: -c for e, c in remap(terms).items()}
        return LieAlgebra(new_names, self.params, brackets, name=self.name)

    def __repr__(self):
        label = self.name or "LieAlgebra"
        return f"<{label}: {len(self.names)} generators, params={self.params}>"


class SubalgebraSelection:
    """A bracket-closed subset of generators of a parent algebra."""

    def __init__(self, parent, members):
        self.parent = parent
        self.members = tuple(members)

    @property
    def names(self):
        return tuple(self.parent.names[i] for i in self.members)

    def __repr__(self):
        return f"<subalgebra {{{', '.join(self.names)}}}>"


def build_algebra(names, params, bracket_list, name=""):
    """Assemble a ``LieAlgebra`` from (left, right, value) bracket triples.

    ``bracket_list`` entries are ``(name_i, name_j, terms)`` with ``terms``
    a mapping generator-name -> coefficient plus optional ``None`` key for
    a scalar term.  Unlisted brackets are zero.
    """
    names = tuple(names)
    params = tuple(params)
    n = len(names)
    idx = {nm: k for k, nm in enumerate(names)}
    if len(idx) != n:
        raise AlgebraError("duplicate generator names")
    brackets = {}
    for left, right, terms in bracket_list:
        i, j = idx[left], idx[right]
        tdict = {}
        for key, coeff in terms.items():
            if not isinstance(coeff, ParamRat):
                coeff = ParamRat.from_const(params, coeff)
            e = (0,) * n if key is None else _unit(n, idx[key])
            tdict[e] = tdict.get(e, ParamRat.from_const(params, 0)) + coeff
        if (i, j) in brackets or (j, i) in brackets:
            raise AlgebraError(f"duplicate bracket entry for ({left},{right})")
        brackets[(i, j)] = tdict
    return LieAlgebra(names, params, brackets, name=name)


def check_jacobi(alg):
    """All triples i<j<k violating the Jacobi identity, with residuals."""
    from .pbw import EnvElement, commutator

    gens = [EnvElement.generator(alg, i) for i in range(alg.n)]
    bad = []
    for i in range(alg.n):
        for j in range(i + 1, alg.n):
            for k in range(j + 1, alg.n):
                res = commutator(gens[i], commutator(gens[j], gens[k])) \
                    + commutator(gens[j], commutator(gens[k], gens[i])) \
                    + commutator(gens[k], commutator(gens[i], gens[j]))
                if not res.is_zero():
                    bad.append((i, j, k, res))
    return bad


def check_subalgebra(alg, members):
    """Selection if the members close under bracket modulo constants."""
    members = tuple(alg.index(m) if isinstance(m, str) else m for m in members)
    allowed = {_unit(alg.n, i) for i in members}
    allowed.add(alg.zero_exp)
    violations = []
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            i, j = members[a], members[b]
            terms = alg.bracket_terms(min(i, j), max(i, j))
            outside = [e for e in terms if e not in allowed]
            if outside:
                violations.append((i, j, outside))
    if violations:
        return violations
    return SubalgebraSelection(alg, members)
