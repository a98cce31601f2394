"""Canonical text rendering shared by algebra and Weyl elements."""

from __future__ import annotations

__all__ = ["coeff_str", "render_terms"]


def _frac(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def coeff_str(c):
    """Render a ParamRat so the expression parser can read it back.

    Plain rationals and single-monomial numerators print inline
    (``-4``, ``3/4``, ``2*a*b^2``); anything else is parenthesized,
    with an explicit denominator when present.
    """
    num = c.num
    if c.den.is_const():
        if num.is_const():
            return _frac(num.const_value())
        if len(num.terms) == 1:
            (e, q), = num.terms.items()
            parts = [] if abs(q) == 1 else [_frac(abs(q))]
            for name, k in zip(num.params, e):
                if k == 1:
                    parts.append(name)
                elif k > 1:
                    parts.append(f"{name}^{k}")
            body = "*".join(parts)
            return body if q > 0 else "-" + body
        return f"({num.to_str()})"
    return f"({num.to_str()})/({c.den.to_str()})"


def render_terms(sorted_terms, monomial_parts):
    """Join (monomial, coeff) pairs into a signed product expression."""
    if not sorted_terms:
        return "0"
    chunks = []
    for m, c in sorted_terms:
        cs = coeff_str(c)
        negative = cs.startswith("-")
        if negative:
            cs = cs[1:]
        factors = monomial_parts(m)
        if factors and cs == "1":
            body = "*".join(factors)
        elif factors:
            body = "*".join([cs] + factors)
        else:
            body = cs
        if not chunks:
            chunks.append("-" + body if negative else body)
        else:
            chunks.append((" - " if negative else " + ") + body)
    return "".join(chunks)
