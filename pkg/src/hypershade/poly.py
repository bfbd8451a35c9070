"""Exact sparse multivariate polynomials over the rationals.

Polynomials are immutable values: a variable space (ordered tuple of names)
plus a mapping from exponent tuples to nonzero rational coefficients.  The
zero polynomial is the empty mapping.  Coefficients are stored as Python
ints whenever the value is integral and as ``fractions.Fraction`` otherwise;
both are exact and interoperate transparently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence, Union

Coef = Union[int, Fraction]
Exponents = tuple[int, ...]


class SpaceMismatchError(ValueError):
    """Operands live in different variable spaces, or a name is unknown."""


class ZeroPolynomialError(ValueError):
    """The operation is undefined for the zero polynomial."""


def _coef(c) -> Coef:
    # canonical coefficient: int when integral, Fraction otherwise
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


@dataclass(frozen=True)
class VariableSpace:
    """An ordered tuple of distinct variable names."""

    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise SpaceMismatchError(f"duplicate variable names in {self.names}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, *names: str) -> "VariableSpace":
        return cls(tuple(names))

    @property
    def dimension(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SpaceMismatchError(f"variable {name!r} not in space {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def extend(self, extra: Iterable[str]) -> "VariableSpace":
        return VariableSpace(self.names + tuple(extra))

    def without(self, drop: Iterable[str]) -> "VariableSpace":
        gone = set(drop)
        return VariableSpace(tuple(n for n in self.names if n not in gone))


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """Total order on exponent tuples; larger key = larger monomial."""

    def key(self, exps: Exponents):
        raise NotImplementedError


class LexOrder(MonomialOrder):
    def key(self, exps: Exponents):
        return exps


class GrevlexOrder(MonomialOrder):
    def key(self, exps: Exponents):
        return _grevlex_key(exps)


def _grevlex_key(exps: Exponents):
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class BlockOrder(MonomialOrder):
    """Elimination order: the eliminated block dominates, grevlex inside blocks.

    Any monomial containing an eliminated variable ranks above every
    monomial free of them, so basis elements with kept-only support sort
    last and generate the elimination ideal.
    """

    eliminated: tuple[int, ...]  # sorted variable indices forming the top block
    kept: tuple[int, ...]

    def key(self, exps: Exponents):
        return (
            _grevlex_key(tuple(exps[i] for i in self.eliminated)),
            _grevlex_key(tuple(exps[i] for i in self.kept)),
        )


LEX = LexOrder()
GREVLEX = GrevlexOrder()


def block_order(space: VariableSpace, eliminate: Iterable[str]) -> BlockOrder:
    elim_idx = tuple(sorted(space.index(n) for n in eliminate))
    gone = set(elim_idx)
    kept_idx = tuple(i for i in range(space.dimension) if i not in gone)
    return BlockOrder(eliminated=elim_idx, kept=kept_idx)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    __slots__ = ("space", "terms")

    def __init__(self, space: VariableSpace, terms: Mapping[Exponents, Coef] = (), *, _raw: bool = False):
        self.space = space
        if _raw:
            self.terms = terms
            return
        canon: dict[Exponents, Coef] = {}
        dim = space.dimension
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != dim:
                raise SpaceMismatchError(
                    f"exponent tuple {exps} does not match dimension {dim}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _coef(c)
            if c:
                prev = canon.get(exps)
                if prev is None:
                    canon[exps] = c
                else:
                    s = _coef(prev + c)
                    if s:
                        canon[exps] = s
                    else:
                        del canon[exps]
        self.terms = canon

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, space: VariableSpace) -> "Polynomial":
        return cls(space, {}, _raw=True)

    @classmethod
    def constant(cls, space: VariableSpace, c) -> "Polynomial":
        c = _coef(Fraction(c))
        if not c:
            return cls.zero(space)
        return cls(space, {(0,) * space.dimension: c}, _raw=True)

    @classmethod
    def variable(cls, space: VariableSpace, name: str) -> "Polynomial":
        i = space.index(name)
        exps = tuple(1 if j == i else 0 for j in range(space.dimension))
        return cls(space, {exps: 1}, _raw=True)

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.space.dimension}

    def constant_value(self) -> Coef:
        if not self.terms:
            return 0
        return self.terms.get((0,) * self.space.dimension, 0)

    def degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        i = self.space.index(name)
        return max(e[i] for e in self.terms)

    def term_count(self) -> int:
        return len(self.terms)

    def leading(self, order: MonomialOrder = LEX) -> tuple[Exponents, Coef]:
        if not self.terms:
            raise ZeroPolynomialError("leading term of the zero polynomial is undefined")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def coefficient(self, exps: Exponents) -> Coef:
        return self.terms.get(tuple(exps), 0)

    def coefficients_in(self, name: str) -> list["Polynomial"]:
        """Coefficients of this polynomial viewed in one variable.

        Entry k is the coefficient of name**k, a polynomial in the same
        space with zero exponent on ``name``.  Empty list for the zero
        polynomial.
        """
        if not self.terms:
            return []
        i = self.space.index(name)
        d = max(e[i] for e in self.terms)
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for exps, c in self.terms.items():
            rest = exps[:i] + (0,) + exps[i + 1:]
            buckets[exps[i]][rest] = c
        return [Polynomial(self.space, b, _raw=True) for b in buckets]

    def variables_used(self) -> set[str]:
        used = set()
        names = self.space.names
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(names[i])
        return used

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.space is not other.space and self.space != other.space:
            raise SpaceMismatchError(
                f"operands in different spaces: {self.space.names} vs {other.space.names}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.space, other)
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps)
            if s is None:
                out[exps] = c
            else:
                s = _coef(s + c)
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return Polynomial(self.space, out, _raw=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.space, {e: -c for e, c in self.terms.items()}, _raw=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coef(Fraction(other))
            if not c:
                return Polynomial.zero(self.space)
            return Polynomial(self.space,
                              {e: _coef(k * c) for e, k in self.terms.items()}, _raw=True)
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.space)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exponents, Coef] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = out.get(exps)
                if s is None:
                    out[exps] = c
                else:
                    s = s + c
                    if s:
                        out[exps] = s
                    else:
                        del out[exps]
        return Polynomial(self.space, {e: _coef(c) for e, c in out.items()}, _raw=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.space, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    __hash__ = None  # mutable dict inside; polynomials are compared by value

    # -- calculus ------------------------------------------------------------

    def partial(self, name: str) -> "Polynomial":
        i = self.space.index(name)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                nexps = exps[:i] + (e - 1,) + exps[i + 1:]
                nc = _coef(c * e)
                prev = out.get(nexps)
                out[nexps] = nc if prev is None else _coef(prev + nc)
        return Polynomial(self.space, {e: c for e, c in out.items() if c}, _raw=True)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.partial(n) for n in self.space.names)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point: Sequence) -> Coef:
        """Exact evaluation at a rational point (sequence in space order)."""
        if len(point) != self.space.dimension:
            raise SpaceMismatchError("point dimension mismatch")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = Fraction(c)
            for v, e in zip(pt, exps):
                if e:
                    term *= v ** e
            total += term
        return _coef(total)

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for exps, c in self.terms.items():
            term = float(c)
            for v, e in zip(point, exps):
                if e:
                    term *= float(v) ** e
            total += term
        return total

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Polynomial({', '.join(self.space.names)}: {to_text(self)})"


# ---------------------------------------------------------------------------
# structural maps


def embed(p: Polynomial, space: VariableSpace) -> Polynomial:
    """Map a polynomial into an enlarged space by variable name."""
    if p.space == space:
        return p
    idx = [space.index(n) for n in p.space.names]
    dim = space.dimension
    out = {}
    for exps, c in p.terms.items():
        nexps = [0] * dim
        for j, e in zip(idx, exps):
            nexps[j] = e
        out[tuple(nexps)] = c
    return Polynomial(space, out, _raw=True)


def restrict(p: Polynomial, space: VariableSpace) -> Polynomial:
    """Project onto a smaller space; dropped variables must be unused."""
    keep = {n: space.index(n) for n in space.names}
    names = p.space.names
    dim = space.dimension
    out = {}
    for exps, c in p.terms.items():
        nexps = [0] * dim
        for i, e in enumerate(exps):
            if e:
                j = keep.get(names[i])
                if j is None:
                    raise SpaceMismatchError(
                        f"cannot restrict: variable {names[i]!r} occurs with exponent {e}")
                nexps[j] = e
        out[tuple(nexps)] = c
    return Polynomial(space, out, _raw=True)


def substitute(p: Polynomial,
               bindings: Mapping[str, object],
               into: VariableSpace | None = None,
               ) -> tuple[Polynomial, list[tuple[Polynomial, int]]]:
    """Simultaneous substitution of rational expressions for variables.

    Each binding maps a variable of ``p`` to either a Polynomial, a rational
    constant, or a ``(numerator, denominator)`` pair of Polynomials over a
    common target space.  Denominators are cleared exactly: the result is
    ``p`` composed with the bindings, multiplied through by each distinct
    denominator raised to the total degree of ``p`` in the variables sharing
    that denominator.  The cleared factors are returned so callers can strip
    extraneous components they may induce.
    """
    if not bindings and into is None:
        return p, []
    target = into
    norm: dict[str, tuple[Polynomial, Polynomial]] = {}
    for name, b in bindings.items():
        if name not in p.space:
            raise SpaceMismatchError(f"binding for {name!r}, not a variable of the operand")
        if isinstance(b, tuple):
            num, den = b
        elif isinstance(b, Polynomial):
            num, den = b, None
        else:
            num, den = None, None
            const = Fraction(b)
        if isinstance(b, tuple) or isinstance(b, Polynomial):
            if target is None:
                target = num.space
            norm[name] = (num, den)
        else:
            norm[name] = (const, None)  # resolved once target is known
    if target is None:
        target = p.space
    one = Polynomial.constant(target, 1)
    resolved: dict[int, tuple[Polynomial, Polynomial]] = {}
    for name, (num, den) in norm.items():
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(target, num)
        elif num.space != target:
            num = embed(num, target)
        if den is None:
            den = one
        elif den.space != target:
            den = embed(den, target)
        if den.is_zero:
            raise ZeroPolynomialError(f"zero denominator in binding for {name!r}")
        resolved[p.space.index(name)] = (num, den)
    # identity bindings for untouched variables
    for i, name in enumerate(p.space.names):
        if i not in resolved:
            resolved[i] = (Polynomial.variable(target, name), one)

    # group variables sharing a denominator; clearing power = max group degree
    groups: list[tuple[Polynomial, list[int]]] = []
    for i, (_, den) in sorted(resolved.items()):
        for d, members in groups:
            if d == den:
                members.append(i)
                break
        else:
            groups.append((den, [i]))
    powers: list[int] = []
    for den, members in groups:
        if den == one:
            powers.append(0)
            continue
        m = 0
        for exps in p.terms:
            m = max(m, sum(exps[i] for i in members))
        powers.append(m)

    # power caches
    num_pows: dict[int, list[Polynomial]] = {}
    den_pows: list[list[Polynomial]] = []
    for (den, members), m in zip(groups, powers):
        cache = [one]
        for _ in range(m):
            cache.append(cache[-1] * den)
        den_pows.append(cache)
    for i, (num, _) in resolved.items():
        dmax = max((e[i] for e in p.terms), default=0)
        cache = [one]
        for _ in range(dmax):
            cache.append(cache[-1] * num)
        num_pows[i] = cache

    result = Polynomial.zero(target)
    for exps, c in p.terms.items():
        term = Polynomial.constant(target, c)
        for i, e in enumerate(exps):
            if e:
                term = term * num_pows[i][e]
        for g, ((den, members), m) in enumerate(zip(groups, powers)):
            if m:
                used = sum(exps[i] for i in members)
                term = term * den_pows[g][m - used]
        result = result + term
    cleared = [(den, m) for (den, members), m in zip(groups, powers)
               if m and not (den.is_constant())]
    return result, cleared


def compose(p: Polynomial, bindings: Mapping[str, object],
            into: VariableSpace | None = None) -> Polynomial:
    """Substitution restricted to polynomial bindings (no denominators)."""
    q, cleared = substitute(p, bindings, into)
    assert not cleared
    return q


def homogenize(p: Polynomial, newvar: str = "x0") -> Polynomial:
    """Append a homogenizing variable; each term is padded up to deg(p)."""
    space = p.space.extend([newvar])
    if not p.terms:
        return Polynomial.zero(space)
    d = p.degree()
    out = {exps + (d - sum(exps),): c for exps, c in p.terms.items()}
    return Polynomial(space, out, _raw=True)


def dehomogenize(p: Polynomial, var: str = "x0") -> Polynomial:
    """Set ``var`` to 1 and drop it from the space."""
    i = p.space.index(var)
    space = p.space.without([var])
    out: dict[Exponents, Coef] = {}
    for exps, c in p.terms.items():
        nexps = exps[:i] + exps[i + 1:]
        prev = out.get(nexps)
        if prev is None:
            out[nexps] = c
        else:
            s = _coef(prev + c)
            if s:
                out[nexps] = s
            else:
                del out[nexps]
    return Polynomial(space, out, _raw=True)


# ---------------------------------------------------------------------------
# normalization, division, square roots


def content_and_lcm(p: Polynomial) -> tuple[int, int]:
    """(gcd of numerators, lcm of denominators) over all coefficients."""
    if not p.terms:
        raise ZeroPolynomialError("content of the zero polynomial is undefined")
    num_gcd = 0
    den_lcm = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            num_gcd = gcd(num_gcd, c.numerator)
            den_lcm = den_lcm // gcd(den_lcm, c.denominator) * c.denominator
        else:
            num_gcd = gcd(num_gcd, c)
    return num_gcd, den_lcm


def normalize_primitive(p: Polynomial) -> Polynomial:
    """Integer coefficients, content 1, positive leading (lex) coefficient.

    Idempotent; raises on the zero polynomial.
    """
    if not p.terms:
        raise ZeroPolynomialError("cannot normalize the zero polynomial")
    num_gcd, den_lcm = content_and_lcm(p)
    scale = Fraction(den_lcm, num_gcd)
    lead = max(p.terms, key=LEX.key)
    if p.terms[lead] < 0:
        scale = -scale
    if scale == 1:
        return p
    return Polynomial(p.space, {e: _coef(c * scale) for e, c in p.terms.items()}, _raw=True)


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """Return p/q when the division is exact, else None."""
    if q.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    if p.is_zero:
        return p
    if p.space != q.space:
        raise SpaceMismatchError("divide_exact operands in different spaces")
    qm, qc = q.leading(LEX)
    rem = dict(p.terms)
    quot: dict[Exponents, Coef] = {}
    # if p = q*h, leading terms match under any monomial order at each step
    while rem:
        m = max(rem, key=LEX.key)
        diff = tuple(a - b for a, b in zip(m, qm))
        if any(d < 0 for d in diff):
            return None
        c = _coef(Fraction(rem[m]) / Fraction(qc))
        quot[diff] = c
        # rem -= c * x^diff * q
        for e2, c2 in q.terms.items():
            exps = tuple(a + b for a, b in zip(diff, e2))
            s = rem.get(exps, 0) - c * c2
            s = _coef(s) if not type(s) is int else s
            if s:
                rem[exps] = s
            else:
                rem.pop(exps, None)
    return Polynomial(p.space, quot, _raw=True)


def _fraction_sqrt(c: Fraction) -> Fraction | None:
    c = Fraction(c)
    if c < 0:
        return None
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


def poly_sqrt(p: Polynomial) -> Polynomial | None:
    """Exact polynomial square root, or None when p is not a perfect square."""
    if p.is_zero:
        return p
    lm, lc = p.leading(LEX)
    if any(e % 2 for e in lm):
        return None
    rc = _fraction_sqrt(Fraction(lc))
    if rc is None:
        return None
    half = Polynomial(p.space, {tuple(e // 2 for e in lm): _coef(rc)}, _raw=True)
    s = half
    lead2 = 2 * _coef(rc)
    limit = 2 * (len(p.terms) + 1) ** 2
    for _ in range(limit):
        r = p - s * s
        if r.is_zero:
            return s
        rm, rcoef = r.leading(LEX)
        diff = tuple(a - b for a, b in zip(rm, tuple(e // 2 for e in lm)))
        if any(d < 0 for d in diff):
            return None
        t = Polynomial(p.space, {diff: _coef(Fraction(rcoef) / Fraction(lead2))}, _raw=True)
        s = s + t
    return None


# ---------------------------------------------------------------------------
# canonical text form


def _monomial_text(names: tuple[str, ...], exps: Exponents) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def to_text(p: Polynomial) -> str:
    """Canonical form: terms in descending lex order, explicit * and ^."""
    if not p.terms:
        return "0"
    pieces = []
    for exps in sorted(p.terms, key=LEX.key, reverse=True):
        c = p.terms[exps]
        mono = _monomial_text(p.space.names, exps)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = f"{mag}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)
