"""Sparse multivariate polynomials with complex coefficients.

Variables are named strings taking Boolean values at evaluation time, but
arithmetic is purely formal: ``x * x`` is ``x^2``, not ``x``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

ZERO_EPS = 1e-12

# A monomial is a tuple of (variable, exponent) pairs sorted by variable name,
# exponents strictly positive. The empty tuple is the constant monomial.
Monomial = tuple


class VarsetMismatch(ValueError):
    pass


class MissingAssignment(KeyError):
    pass


def make_varset(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable names in {names!r}")
    return names


def monomial(exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()) -> Monomial:
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    acc: dict[str, int] = {}
    for var, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {var}")
        acc[var] = acc.get(var, 0) + e
    return tuple(sorted((v, e) for v, e in acc.items() if e > 0))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return monomial(list(a) + list(b))


def monomial_vars(m: Monomial) -> frozenset[str]:
    return frozenset(v for v, _ in m)


def _check_coeff(c: complex) -> complex:
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"non-finite coefficient {c!r}")
    return c


def prune_terms(terms: Mapping[Monomial, complex]) -> dict[Monomial, complex]:
    return {m: c for m, c in terms.items() if abs(c) > ZERO_EPS}


@dataclass(frozen=True)
class Polynomial:
    """Immutable polynomial over an ordered variable set.

    ``terms`` maps monomials to complex coefficients; near-zero coefficients
    (``abs(c) <= ZERO_EPS``) are never stored.
    """

    terms: Mapping[Monomial, complex]
    varset: tuple[str, ...] = ()

    def __post_init__(self):
        varset = make_varset(self.varset)
        known = set(varset)
        clean = {}
        for m, c in self.terms.items():
            m = monomial(m)
            c = _check_coeff(c)
            if abs(c) <= ZERO_EPS:
                continue
            stray = monomial_vars(m) - known
            if stray:
                raise VarsetMismatch(f"variables {sorted(stray)} not in varset {varset}")
            clean[m] = clean.get(m, 0) + c
        object.__setattr__(self, "varset", varset)
        object.__setattr__(self, "terms", prune_terms(clean))

    # constructors

    @classmethod
    def zero(cls, varset=()) -> Polynomial:
        return cls({}, varset)

    @classmethod
    def const(cls, c: complex, varset=()) -> Polynomial:
        return cls({(): c}, varset)

    @classmethod
    def var(cls, name: str, varset=None) -> Polynomial:
        return cls({((name, 1),): 1.0}, varset if varset is not None else (name,))

    # ring operations

    def _check_same(self, other: Polynomial):
        if self.varset != other.varset:
            raise VarsetMismatch(f"varsets differ: {self.varset} vs {other.varset}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, float, complex)):
            return Polynomial.const(other, self.varset)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, negate(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, negate(self))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.varset == other.varset and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.varset, frozenset(self.terms.items())))

    def __call__(self, alpha: Mapping[str, int]) -> complex:
        return evaluate(self, alpha)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return degree(self)

    def variables(self) -> frozenset[str]:
        out = set()
        for m in self.terms:
            out |= monomial_vars(m)
        return frozenset(out)

    def with_varset(self, varset) -> Polynomial:
        return Polynomial(self.terms, varset)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r}, varset={self.varset})"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check_same(q)
    out = dict(p.terms)
    for m, c in q.terms.items():
        out[m] = out.get(m, 0) + c
    return Polynomial(out, p.varset)


def negate(p: Polynomial) -> Polynomial:
    return Polynomial({m: -c for m, c in p.terms.items()}, p.varset)


def scale(p: Polynomial, c: complex) -> Polynomial:
    return Polynomial({m: c * v for m, v in p.terms.items()}, p.varset)


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check_same(q)
    out: dict[Monomial, complex] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = monomial_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return Polynomial(out, p.varset)


def degree(p: Polynomial) -> int:
    """Formal total degree; the zero polynomial has degree 0."""
    return max((monomial_degree(m) for m in p.terms), default=0)


def evaluate(p: Polynomial, alpha: Mapping[str, int | complex]) -> complex:
    missing = p.variables() - set(alpha)
    if missing:
        raise MissingAssignment(f"no value for {sorted(missing)}")
    total = 0j
    for m, c in p.terms.items():
        v = c
        for var, e in m:
            v *= alpha[var] ** e
        total += v
    return complex(total)


def constrains(p: Polynomial, ys: Iterable[str]) -> bool:
    """True iff some variable of ``ys`` occurs in a stored (non-zero) term."""
    return not p.variables().isdisjoint(ys)


def substitute(p: Polynomial, beta: Mapping[str, int | complex], varset=None) -> Polynomial:
    """Replace the variables in ``beta`` by constants.

    The result lives over ``varset`` (default: ``p.varset`` minus the bound
    variables).
    """
    if varset is None:
        varset = tuple(v for v in p.varset if v not in beta)
    out: dict[Monomial, complex] = {}
    for m, c in p.terms.items():
        rest = []
        for var, e in m:
            if var in beta:
                c = c * beta[var] ** e
            else:
                rest.append((var, e))
        key = tuple(rest)
        out[key] = out.get(key, 0) + c
    return Polynomial(out, varset)


def normalize_multilinear(p: Polynomial) -> Polynomial:
    """Reduce every exponent to 1 (valid only for evaluation on {0,1})."""
    out: dict[Monomial, complex] = {}
    for m, c in p.terms.items():
        key = tuple((v, 1) for v, _ in m)
        out[key] = out.get(key, 0) + c
    return Polynomial(out, p.varset)


def real_imag(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Split ``p = p1 + i*p2`` into polynomials with real coefficients."""
    re = Polynomial({m: c.real for m, c in p.terms.items()}, p.varset)
    im = Polynomial({m: c.imag for m, c in p.terms.items()}, p.varset)
    return re, im


def squared_magnitude(p: Polynomial) -> Polynomial:
    """The real polynomial ``p1^2 + p2^2``."""
    re, im = real_imag(p)
    return add(mul(re, re), mul(im, im))


def max_coeff_diff(p: Polynomial, q: Polynomial) -> float:
    keys = set(p.terms) | set(q.terms)
    return max((abs(p.terms.get(m, 0) - q.terms.get(m, 0)) for m in keys), default=0.0)


# text format: one term per line, "re im var^e var^e ..."


def to_text(p: Polynomial) -> str:
    order = {v: i for i, v in enumerate(p.varset)}
    lines = []
    for m in sorted(p.terms, key=lambda m: (monomial_degree(m), [order[v] for v, _ in m], m)):
        c = p.terms[m]
        factors = sorted(m, key=lambda ve: order[ve[0]])
        parts = [repr(float(c.real)), repr(float(c.imag))]
        parts += [f"{v}^{e}" for v, e in factors]
        lines.append(" ".join(parts))
    return "\n".join(lines)


def from_text(text: str, varset) -> Polynomial:
    terms: dict[Monomial, complex] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ValueError(f"term line {lineno}: expected 're im [var^e ...]', got {line!r}")
        c = complex(float(fields[0]), float(fields[1]))
        factors = []
        for tok in fields[2:]:
            var, sep, e = tok.rpartition("^")
            if not sep or not var:
                raise ValueError(f"term line {lineno}: bad factor {tok!r}")
            factors.append((var, int(e)))
        m = monomial(factors)
        terms[m] = terms.get(m, 0) + c
    return Polynomial(terms, varset)


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return cmath.isclose(a, b, abs_tol=tol, rel_tol=0.0)
