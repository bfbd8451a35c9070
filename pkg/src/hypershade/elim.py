"""Exact polynomial elimination: Buchberger, Dixon and Sylvester backends.

All backends consume an EliminationTask (a polynomial system plus the set of
variables to eliminate) and produce an EliminationResult whose eliminant is a
primitive integer polynomial over the kept variables.  The default policy
``sylvester-auto`` first solves linear occurrences of eliminated variables
symbolically (clearing denominators exactly), then uses a Sylvester
resultant when a two-polynomial/one-variable core remains and a Groebner
basis with a block elimination order otherwise.  Dixon runs only on explicit
request.

Eliminations are exact throughout; resultant backends may introduce
extraneous factors tied to the cleared denominators (substitution poles and
leading coefficients), which are stripped by exact trial division before a
result is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .poly import (
    GREVLEX,
    LEX,
    BlockOrder,
    Coef,
    Exponents,
    MonomialOrder,
    Polynomial,
    SpaceMismatchError,
    VariableSpace,
    ZeroPolynomialError,
    _coef,
    block_order,
    divide_exact,
    embed,
    normalize_primitive,
    poly_sqrt,
    restrict,
    substitute,
)

BACKENDS = ("sylvester-auto", "groebner", "dixon")


class EliminationBudgetError(RuntimeError):
    """Raised when an elimination exceeds its step/time budget."""

    def __init__(self, message: str, stats: "ElimStats | None" = None):
        super().__init__(message)
        self.stats = stats


class DegenerateSystemError(ValueError):
    """The system cannot be eliminated by the requested backend."""


class ElimStructureError(ValueError):
    """Structurally invalid input (wrong counts, degree-zero operand, ...)."""


@dataclass(frozen=True)
class ElimBudget:
    """Step/time budget; ``seconds=None`` and ``max_steps=None`` disable checks."""

    seconds: float | None = None
    max_steps: int | None = None


class _Clock:
    __slots__ = ("deadline", "remaining", "steps")

    def __init__(self, budget: ElimBudget | None):
        budget = budget or ElimBudget()
        self.deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
        self.remaining = budget.max_steps
        self.steps = 0

    def tick(self, n: int = 1):
        self.steps += n
        if self.remaining is not None:
            self.remaining -= n
            if self.remaining < 0:
                raise EliminationBudgetError(
                    f"elimination exceeded its step budget after {self.steps} steps")
        if self.deadline is not None and (self.steps & 0x3F) == 0 and time.monotonic() > self.deadline:
            raise EliminationBudgetError(
                f"elimination exceeded its time budget after {self.steps} steps")

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise EliminationBudgetError("elimination exceeded its time budget")


@dataclass(frozen=True)
class EliminationTask:
    """A polynomial system together with the variables to eliminate."""

    system: tuple[Polynomial, ...]
    eliminate: tuple[str, ...]
    backend: str = "sylvester-auto"
    # denominators cleared by presubstitution, carried for extraneous stripping
    cleared: tuple[tuple[Polynomial, int], ...] = ()
    presub_warning: bool = False

    def __post_init__(self):
        if not self.system:
            raise ElimStructureError("empty polynomial system")
        space = self.system[0].space
        for p in self.system:
            if p.space != space:
                raise SpaceMismatchError("system polynomials live in different spaces")
        for v in self.eliminate:
            space.index(v)
        # normalize eliminate order to the space order
        order = tuple(n for n in space.names if n in set(self.eliminate))
        object.__setattr__(self, "eliminate", order)

    @property
    def space(self) -> VariableSpace:
        return self.system[0].space

    @property
    def kept(self) -> tuple[str, ...]:
        gone = set(self.eliminate)
        return tuple(n for n in self.space.names if n not in gone)


@dataclass
class ElimStats:
    """Serializable run statistics; doubles as a bench-table row."""

    backend: str
    elapsed: float = 0.0
    steps: int = 0
    basis_size: int | None = None
    pairs_processed: int | None = None
    matrix_shape: tuple[int, int] | None = None
    square_matrix: bool | None = None
    degree: int | None = None
    terms: int | None = None
    notes: tuple[str, ...] = ()

    def to_record(self) -> str:
        parts = [f"backend={self.backend}", f"elapsed={self.elapsed:.3f}s", f"steps={self.steps}"]
        if self.basis_size is not None:
            parts.append(f"basis={self.basis_size}")
        if self.pairs_processed is not None:
            parts.append(f"pairs={self.pairs_processed}")
        if self.matrix_shape is not None:
            parts.append(f"matrix={self.matrix_shape[0]}x{self.matrix_shape[1]}")
        if self.square_matrix is not None:
            parts.append(f"square={'yes' if self.square_matrix else 'no'}")
        if self.degree is not None:
            parts.append(f"degree={self.degree}")
        if self.terms is not None:
            parts.append(f"terms={self.terms}")
        for n in self.notes:
            parts.append(f"note[{n}]")
        return " ".join(parts)


@dataclass
class EliminationResult:
    """Eliminant over the kept variables; ``eliminant is None`` = no relation."""

    eliminant: Polynomial | None
    backend_used: str
    extraneous_cleared: tuple[tuple[Polynomial, int], ...]
    stripped: tuple[Polynomial, ...]
    stats: ElimStats


# ---------------------------------------------------------------------------
# integer-primitive polynomial dictionaries (Buchberger internals)
#
# Buchberger reductions run on dict[exponents] -> int with primitive scaling:
# Fraction arithmetic in the inner loop costs roughly an order of magnitude.


def _to_int_terms(p: Polynomial) -> dict[Exponents, int]:
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den // gcd(den, c.denominator) * c.denominator
    out = {}
    g = 0
    for e, c in p.terms.items():
        v = int(c * den)
        out[e] = v
        g = gcd(g, v)
    if g > 1:
        for e in out:
            out[e] //= g
    return out


def _content(d: dict[Exponents, int]) -> int:
    g = 0
    for v in d.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def _strip_content(d: dict[Exponents, int]) -> int:
    g = _content(d)
    if g > 1:
        for e in d:
            d[e] //= g
    return g


def _joint_strip(r: dict, h: dict) -> int:
    g = 0
    for v in h.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    if g > 1:
        for e in h:
            h[e] //= g
        for e in r:
            r[e] //= g
    return g


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _nf_int(p: dict[Exponents, int],
            basis: Sequence[tuple[Exponents, int, dict]],
            keyf: Callable,
            tick: Callable) -> tuple[dict[Exponents, int], Fraction]:
    """Fraction-free full normal form.

    Returns (r, scale) with r == scale * NF(p); the remainder r carries no
    monomial divisible by a basis leading monomial.
    """
    h = dict(p)
    r: dict[Exponents, int] = {}
    scale = Fraction(1)
    while h:
        tick()
        m = max(h, key=keyf)
        hit = None
        for lm, lc, g in basis:
            if _divides(lm, m):
                hit = (lm, lc, g)
                break
        if hit is None:
            r[m] = h.pop(m)
            continue
        lm, lc, g = hit
        ch = h.pop(m)
        q = gcd(ch, lc)
        mult_h = lc // q
        mult_g = ch // q
        if mult_h != 1:
            for k in h:
                h[k] *= mult_h
            for k in r:
                r[k] *= mult_h
            scale *= mult_h
        shift = tuple(a - b for a, b in zip(m, lm))
        for ge, gc in g.items():
            if ge == lm:
                continue
            ne = tuple(a + b for a, b in zip(shift, ge))
            s = h.get(ne, 0) - mult_g * gc
            if s:
                h[ne] = s
            else:
                h.pop(ne, None)
        stripped = _joint_strip(r, h)
        if stripped > 1:
            scale /= stripped
    return r, scale


def _sign_normalize(d: dict[Exponents, int], keyf) -> dict[Exponents, int]:
    if d and d[max(d, key=keyf)] < 0:
        return {e: -c for e, c in d.items()}
    return d


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S(f, g) = (lcm / lt(f)) f - (lcm / lt(g)) g."""
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    sf = Polynomial(f.space, {tuple(l - a for l, a in zip(lcm, fm)): _coef(Fraction(1, 1) / fc)})
    sg = Polynomial(g.space, {tuple(l - a for l, a in zip(lcm, gm)): _coef(Fraction(1, 1) / gc)})
    return sf * f - sg * g


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder,
                budget: ElimBudget | None = None) -> Polynomial:
    """Remainder of p on division by basis: no monomial divisible by a basis LM."""
    if p.is_zero:
        return p
    clock = _Clock(budget)
    keyf = order.key
    prepared = []
    for b in basis:
        if b.is_zero:
            continue
        d = _to_int_terms(b)
        lm = max(d, key=keyf)
        prepared.append((lm, d[lm], d))
    if not prepared:
        return p
    # NF is linear: scale p to integers by k, then NF(p) = r / (scale * k)
    k = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            k = k // gcd(k, c.denominator) * c.denominator
    scaled = {e: int(c * k) for e, c in p.terms.items()}
    r, scale = _nf_int(scaled, prepared, keyf, clock.tick)
    inv = 1 / (scale * k)
    return Polynomial(p.space, {e: _coef(c * inv) for e, c in r.items()}, _raw=True)


def buchberger(system: Sequence[Polynomial], order: MonomialOrder,
               budget: ElimBudget | None = None,
               stats: ElimStats | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``system``.

    Pairs are pruned with Buchberger's product and chain criteria; without
    them the larger shadow eliminations do not finish.  Output is primitive
    over the integers, positive leading coefficient, sorted by leading
    monomial; deterministic for a fixed input order.
    """
    if not system:
        raise ElimStructureError("empty system")
    space = system[0].space
    keyf = order.key
    clock = _Clock(budget)

    G: list[dict] = []
    lms: list[Exponents] = []
    lcs: list[int] = []

    def push(d: dict):
        d = _sign_normalize(d, keyf)
        G.append(d)
        m = max(d, key=keyf)
        lms.append(m)
        lcs.append(d[m])

    for p in system:
        if p.is_zero:
            continue
        d = _to_int_terms(p)
        if d not in G:
            push(d)
    if not G:
        raise ElimStructureError("all system polynomials are zero")

    zero_exps = (0,) * space.dimension
    if any(lm == zero_exps for lm in lms):
        return [Polynomial.constant(space, 1)]

    pairs: set[tuple[int, int]] = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}

    def lcm_of(i: int, j: int) -> Exponents:
        return tuple(max(a, b) for a, b in zip(lms[i], lms[j]))

    processed = 0
    while pairs:
        clock.tick()
        i, j = min(pairs, key=lambda ij: (keyf(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        processed += 1
        L = lcm_of(i, j)
        # product criterion: coprime leading monomials
        if all(a + b == l for a, b, l in zip(lms[i], lms[j], L)):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if _divides(lms[k], L):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        # fraction-free S-polynomial
        ci, cj = lcs[i], lcs[j]
        q = gcd(ci, cj)
        mi, mj = cj // q, ci // q
        si = tuple(l - a for l, a in zip(L, lms[i]))
        sj = tuple(l - a for l, a in zip(L, lms[j]))
        s: dict[Exponents, int] = {}
        for e, c in G[i].items():
            ne = tuple(a + b for a, b in zip(si, e))
            s[ne] = s.get(ne, 0) + mi * c
        for e, c in G[j].items():
            ne = tuple(a + b for a, b in zip(sj, e))
            v = s.get(ne, 0) - mj * c
            if v:
                s[ne] = v
            else:
                s.pop(ne, None)
        if not s:
            continue
        basis_view = list(zip(lms, lcs, G))
        r, _ = _nf_int(s, basis_view, keyf, clock.tick)
        if not r:
            continue
        _strip_content(r)
        if max(r, key=keyf) == zero_exps:
            return [Polynomial.constant(space, 1)]
        new = len(G)
        push(r)
        for k in range(new):
            pairs.add((k, new))

    # minimal basis: drop generators whose LM is divisible by another LM
    keep: list[int] = []
    for i in range(len(G)):
        redundant = False
        for j in range(len(G)):
            if i == j:
                continue
            if _divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)

    # tail-reduce each survivor against the others
    reduced: list[dict] = []
    for pos, i in enumerate(keep):
        others = [(lms[j], lcs[j], G[j]) for j in keep if j != i]
        if others:
            r, _ = _nf_int(G[i], others, keyf, clock.tick)
        else:
            r = dict(G[i])
        if not r:
            continue
        _strip_content(r)
        reduced.append(_sign_normalize(r, keyf))
    reduced.sort(key=lambda d: keyf(max(d, key=keyf)))
    if stats is not None:
        stats.pairs_processed = processed
        stats.steps = clock.steps
    return [Polynomial(space, d, _raw=True) for d in reduced]


# ---------------------------------------------------------------------------
# determinants over the polynomial ring


def bareiss_determinant(matrix: Sequence[Sequence[Polynomial]],
                        budget: ElimBudget | None = None) -> Polynomial:
    """Exact determinant by Bareiss fraction-free elimination.

    Intermediate divisions are exact over the polynomial ring, which keeps
    entry growth polynomial instead of exponential.
    """
    n = len(matrix)
    if n == 0:
        raise ElimStructureError("empty matrix")
    for row in matrix:
        if len(row) != n:
            raise ElimStructureError("matrix is not square")
    space = matrix[0][0].space
    clock = _Clock(budget)
    M = [[p for p in row] for row in matrix]
    one = Polynomial.constant(space, 1)
    prev = one
    sign = 1
    for k in range(n - 1):
        clock.check_time()
        # row pivoting: first row with a nonzero pivot entry
        pivot_row = None
        for r in range(k, n):
            if not M[r][k].is_zero:
                pivot_row = r
                break
        if pivot_row is None:
            return Polynomial.zero(space)
        if pivot_row != k:
            M[k], M[pivot_row] = M[pivot_row], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            clock.tick()
            for j in range(k + 1, n):
                num = pk * M[i][j] - M[i][k] * M[k][j]
                if num.is_zero:
                    M[i][j] = num
                    continue
                q = divide_exact(num, prev)
                assert q is not None, "Bareiss division must be exact"
                M[i][j] = q
            M[i][k] = Polynomial.zero(space)
        prev = pk
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


def _max_rank_pivot(matrix: list[list[Polynomial]],
                    budget: ElimBudget | None = None) -> tuple[Polynomial, int]:
    """Fraction-free full-pivot elimination; returns (last pivot, rank).

    After k successful steps the pivot equals (up to sign) the determinant of
    the k x k submatrix selected by the pivot choices, so the final pivot is
    the determinant of a maximal-rank square submatrix.
    """
    if not matrix or not matrix[0]:
        raise DegenerateSystemError("empty Dixon matrix")
    space = matrix[0][0].space
    rows, cols = len(matrix), len(matrix[0])
    clock = _Clock(budget)
    M = [row[:] for row in matrix]
    prev = Polynomial.constant(space, 1)
    rank = 0
    last = None
    for k in range(min(rows, cols)):
        clock.check_time()
        # deterministic pivot: smallest (degree, terms, position) nonzero entry
        best = None
        for r in range(k, rows):
            for c in range(k, cols):
                p = M[r][c]
                if p.is_zero:
                    continue
                key = (p.degree(), p.term_count(), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
        if best is None:
            break
        _, r, c = best
        if r != k:
            M[k], M[r] = M[r], M[k]
        if c != k:
            for row in M:
                row[k], row[c] = row[c], row[k]
        pk = M[k][k]
        for i in range(k + 1, rows):
            clock.tick()
            for j in range(k + 1, cols):
                num = pk * M[i][j] - M[i][k] * M[k][j]
                if num.is_zero:
                    M[i][j] = num
                    continue
                q = divide_exact(num, prev)
                assert q is not None, "Bareiss division must be exact"
                M[i][j] = q
            M[i][k] = Polynomial.zero(space)
        prev = pk
        last = pk
        rank += 1
    if last is None:
        raise DegenerateSystemError("Dixon matrix has rank zero")
    return last, rank


# ---------------------------------------------------------------------------
# Sylvester


def sylvester_matrix(p: Polynomial, q: Polynomial, var: str) -> list[list[Polynomial]]:
    """Classical (m+n) x (m+n) Sylvester matrix in ``var``."""
    if p.is_zero or q.is_zero:
        raise ElimStructureError("Sylvester operand is zero")
    m = p.degree_in(var)
    n = q.degree_in(var)
    if m == 0 or n == 0:
        raise ElimStructureError(f"operand of degree 0 in {var!r}")
    space = p.space
    zero = Polynomial.zero(space)
    pc = p.coefficients_in(var)[::-1]  # descending
    qc = q.coefficients_in(var)[::-1]
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * i + pc + [zero] * (size - i - len(pc))
        rows.append(row)
    for i in range(m):
        row = [zero] * i + qc + [zero] * (size - i - len(qc))
        rows.append(row)
    return rows

def sylvester_resultant(p: Polynomial, q: Polynomial, var: str,
                        budget: ElimBudget | None = None) -> Polynomial:
    """Resultant of p and q with respect to ``var`` (exact, fraction-free)."""
    return bareiss_determinant(sylvester_matrix(p, q, var), budget)


# ---------------------------------------------------------------------------
# linear presubstitution


def linear_presubstitution(task: EliminationTask) -> EliminationTask:
    """Solve linear occurrences of eliminated variables and substitute them out.

    Greedy and deterministic: eliminated variables are scanned in space
    order; an equation of degree 1 in the variable is solved for it (with a
    constant coefficient preferred), the solution is substituted into the
    remaining equations with denominators cleared exactly, and spare
    denominator powers are removed again by trial division.  On an
    inconsistent outcome the original task is returned with a warning flag.
    """
    polys = [p for p in task.system if not p.is_zero]
    remaining = list(task.eliminate)
    cleared: list[tuple[Polynomial, int]] = list(task.cleared)
    progress = True
    while progress:
        progress = False
        for prefer_constant in (True, False):
            choice = None
            for v in [n for n in task.space.names if n in remaining]:
                for idx, p in enumerate(polys):
                    if v not in p.variables_used():
                        continue
                    if p.degree_in(v) != 1:
                        continue
                    c1 = p.coefficients_in(v)[1]
                    if prefer_constant and not c1.is_constant():
                        continue
                    choice = (v, idx, c1)
                    break
                if choice:
                    break
            if choice:
                break
        if not choice:
            break
        v, idx, c1 = choice
        c0 = polys[idx].coefficients_in(v)[0]
        binding = {v: (-c0, c1)}
        new_polys = []
        power_used = 0
        for i, p in enumerate(polys):
            if i == idx:
                continue
            if v not in p.variables_used():
                new_polys.append(p)
                continue
            q, cl = substitute(p, binding)
            for den, k in cl:
                power_used += k
            # strip spare denominator powers introduced by uniform clearing
            if not c1.is_constant():
                while not q.is_zero:
                    cand = divide_exact(q, c1)
                    if cand is None:
                        break
                    q = cand
                    power_used -= 1
            if q.is_zero:
                continue
            if q.is_constant():
                # inconsistent linear solve; keep the task as given
                t = replace(task, presub_warning=True)
                return t
            new_polys.append(normalize_primitive(q))
        polys = new_polys
        remaining.remove(v)
        if not c1.is_constant() and power_used > 0:
            cleared.append((c1, power_used))
        progress = True
        if not polys:
            break
    if not polys:
        # every equation was consumed: the projection constraint vanished
        return EliminationTask(system=(Polynomial.zero(task.space),),
                               eliminate=tuple(remaining), backend=task.backend,
                               cleared=tuple(cleared), presub_warning=True)
    return EliminationTask(system=tuple(polys), eliminate=tuple(remaining),
                           backend=task.backend, cleared=tuple(cleared),
                           presub_warning=task.presub_warning)


# ---------------------------------------------------------------------------
# extraneous-factor stripping


def _atomize(cand: Polynomial) -> list[Polynomial]:
    """A candidate plus its iterated exact square roots, all primitive."""
    out = []
    c = normalize_primitive(cand)
    while True:
        out.append(c)
        r = poly_sqrt(c)
        if r is None or r.is_constant():
            break
        c = normalize_primitive(r)
    return out


def _strip_candidates(task: EliminationTask,
                      final_system: Sequence[Polynomial],
                      resultant_var: str | None) -> list[Polynomial]:
    """Candidate extraneous factors of a resultant-style eliminant.

    Two sources: evaluations of the final system at the poles of cleared
    denominators (substitution poles become genuine solution components) and,
    for resultant backends, leading coefficients with respect to the
    eliminated variable (common vanishing means a root at infinity).
    """
    kept = set(task.kept)
    cands: list[Polynomial] = []

    def add(p: Polynomial):
        if p.is_zero or p.is_constant():
            return
        if not p.variables_used() <= kept:
            return
        for atom in _atomize(p):
            if not any(atom == c for c in cands):
                cands.append(atom)

    for den, _pw in task.cleared:
        if den.is_constant():
            continue
        used = den.variables_used()
        if used <= kept:
            add(den)
            continue
        # pole evaluation: denominator linear in a single variable with a
        # constant leading coefficient has the rational root -c0/c1
        if len(used) == 1:
            (u,) = used
            if den.degree_in(u) == 1:
                c1 = den.coefficients_in(u)[1]
                c0 = den.coefficients_in(u)[0]
                if c1.is_constant():
                    root = Fraction(-c0.constant_value()) / Fraction(c1.constant_value())
                    for p in final_system:
                        q, _ = substitute(p, {u: root})
                        add(q)
    if resultant_var is not None:
        # the resultant vanishes off the projection only where every leading
        # coefficient vanishes at once; a factor of just one of them can be a
        # genuine component, so only common factors qualify
        lcs = [p.coefficients_in(resultant_var)[-1] for p in final_system
               if p.degree_in(resultant_var) >= 1]
        if lcs and all(not c.is_constant() for c in lcs):
            for c in lcs:
                for atom in _atomize(c):
                    if all(divide_exact(normalize_primitive(l), atom) is not None
                           for l in lcs):
                        add(atom)
    cands.sort(key=lambda c: (c.degree(), c.term_count(), str(c)))
    return cands


def _strip_extraneous(eliminant: Polynomial,
                      candidates: Sequence[Polynomial]) -> tuple[Polynomial, list[Polynomial]]:
    stripped: list[Polynomial] = []
    e = eliminant
    changed = True
    while changed:
        changed = False
        for c in candidates:
            q = divide_exact(e, c)
            if q is not None and not q.is_constant():
                e = q
                stripped.append(c)
                changed = True
                break
    return e, stripped


# ---------------------------------------------------------------------------
# backend drivers


def _finish(task: EliminationTask, eliminant: Polynomial, backend: str,
            stats: ElimStats, final_system: Sequence[Polynomial],
            resultant_var: str | None, t0: float,
            kept: tuple[str, ...] | None = None) -> EliminationResult:
    stripped: list[Polynomial] = []
    if not eliminant.is_constant():
        cands = _strip_candidates(task, final_system, resultant_var)
        eliminant, stripped = _strip_extraneous(eliminant, cands)
    # presubstitution leaves solved variables in the space; the caller passes
    # the kept names of the original task so the result lands in its space
    kept_space = VariableSpace(kept if kept is not None else task.kept)
    eliminant = restrict(eliminant, kept_space)
    if not eliminant.is_zero:
        eliminant = normalize_primitive(eliminant)
        stats.degree = eliminant.degree() if not eliminant.is_constant() else 0
        stats.terms = eliminant.term_count()
    stats.elapsed = time.monotonic() - t0
    if stripped:
        stats.notes = stats.notes + (f"stripped {len(stripped)} extraneous factor(s)",)
    return EliminationResult(eliminant=eliminant, backend_used=backend,
                             extraneous_cleared=task.cleared,
                             stripped=tuple(stripped), stats=stats)


def _no_relation(task: EliminationTask, backend: str, stats: ElimStats,
                 t0: float, note: str) -> EliminationResult:
    stats.notes = stats.notes + (note,)
    stats.elapsed = time.monotonic() - t0
    return EliminationResult(eliminant=None, backend_used=backend,
                             extraneous_cleared=task.cleared, stripped=(),
                             stats=stats)


def eliminate_groebner(task: EliminationTask,
                       budget: ElimBudget | None = None,
                       kept: tuple[str, ...] | None = None) -> EliminationResult:
    """Eliminate via a Groebner basis for a block order ranking the
    eliminated variables above the kept ones; basis elements free of
    eliminated variables generate the elimination ideal."""
    t0 = time.monotonic()
    stats = ElimStats(backend="groebner")
    if not task.eliminate:
        raise ElimStructureError("nothing to eliminate")
    order = block_order(task.space, task.eliminate)
    try:
        basis = buchberger(task.system, order, budget, stats)
    except EliminationBudgetError as exc:
        stats.elapsed = time.monotonic() - t0
        stats.notes = ("budget exceeded",)
        raise EliminationBudgetError(str(exc), stats) from None
    stats.basis_size = len(basis)
    elim_idx = [task.space.index(v) for v in task.eliminate]
    free = [b for b in basis
            if all(all(e[i] == 0 for i in elim_idx) for e in b.terms)]
    if not free:
        return _no_relation(task, "groebner", stats, t0,
                            "no relation: the projection is dense")
    if any(f.is_constant() for f in free):
        stats.notes = stats.notes + ("inconsistent system: empty variety",)
        gen = Polynomial.constant(task.space, 1)
    elif len(free) == 1:
        gen = free[0]
    else:
        gen = free[0]
        for f in free[1:]:
            gen = gen * f
        stats.notes = stats.notes + (
            f"elimination ideal not principal: product of {len(free)} generators",)
    return _finish(task, gen, "groebner", stats, task.system, None, t0, kept)


def _endgame(task: EliminationTask, backend: str, stats: ElimStats,
             t0: float, kept: tuple[str, ...] | None = None) -> EliminationResult | None:
    """Handle systems fully closed by presubstitution (no variables left)."""
    if task.eliminate:
        return None
    polys = [p for p in task.system if not p.is_zero]
    if not polys:
        return _no_relation(task, backend, stats, t0,
                            "no relation: presubstitution consumed every constraint")
    if any(p.is_constant() for p in polys):
        stats.notes = stats.notes + ("inconsistent system: empty variety",)
        return _finish(task, Polynomial.constant(task.space, 1), backend, stats,
                       polys, None, t0, kept)
    gen = polys[0]
    for p in polys[1:]:
        gen = gen * p
    if len(polys) > 1:
        stats.notes = stats.notes + (f"product of {len(polys)} surviving constraints",)
    stats.notes = stats.notes + ("closed by presubstitution",)
    return _finish(task, gen, backend, stats, polys, None, t0, kept)


def _fresh_names(space: VariableSpace, base_names: Sequence[str], suffix: str) -> list[str]:
    out = []
    for n in base_names:
        cand = f"{n}{suffix}"
        while cand in space or cand in out:
            cand = cand + "_"
        out.append(cand)
    return out


def dixon_resultant(task: EliminationTask,
                    budget: ElimBudget | None = None,
                    presubstitute: bool = True) -> EliminationResult:
    """Dixon (Cayley-style) resultant of m+1 polynomials in m variables.

    The cancellation determinant is built row-differenced so the division by
    prod(v_k - v_k~) happens entrywise; the coefficient matrix determinant
    (or, when singular, the determinant of a maximal-rank square submatrix)
    is the eliminant.  May contain extraneous factors beyond the stripped
    denominator-derived candidates.
    """
    t0 = time.monotonic()
    stats = ElimStats(backend="dixon")
    kept0 = task.kept
    t = linear_presubstitution(task) if presubstitute else task
    done = _endgame(t, "dixon", stats, t0, kept0)
    if done is not None:
        return done
    m = len(t.eliminate)
    if len(t.system) != m + 1:
        raise ElimStructureError(
            f"Dixon needs {m + 1} polynomials for {m} eliminated variables, "
            f"got {len(t.system)}")
    space = t.space
    bar_names = _fresh_names(space, t.eliminate, "~")
    big = space.extend(bar_names)
    elim_names = list(t.eliminate)

    # stage substitutions: E_s(f) replaces the first s eliminated variables
    # with their barred copies
    def staged(f: Polynomial, s: int) -> Polynomial:
        if s == 0:
            return embed(f, big)
        binding = {elim_names[k]: Polynomial.variable(big, bar_names[k]) for k in range(s)}
        q, _ = substitute(f, binding, into=big)
        return q

    rows: list[list[Polynomial]] = [[staged(f, 0) for f in t.system]]
    for s in range(1, m + 1):
        dvar = Polynomial.variable(big, bar_names[s - 1]) - Polynomial.variable(big, elim_names[s - 1])
        row = []
        for i, f in enumerate(t.system):
            hi = staged(f, s)
            diff = hi - rows[s - 1][i]
            if diff.is_zero:
                row.append(diff)
                continue
            q = divide_exact(diff, dvar)
            assert q is not None, "stage difference must divide by (v~ - v)"
            row.append(q)
        rows.append(row)

    delta = bareiss_determinant(rows, budget)
    if delta.is_zero:
        raise DegenerateSystemError("Dixon cancellation determinant is identically zero")

    # split delta into the Dixon matrix: rows by barred monomials, columns by
    # eliminated monomials, entries over the kept variables
    kept_set = {big.index(n) for n in t.kept}
    elim_idx = [big.index(n) for n in elim_names]
    bar_idx = [big.index(n) for n in bar_names]
    cells: dict[tuple[Exponents, Exponents], dict] = {}
    for exps, c in delta.terms.items():
        brow = tuple(exps[i] for i in bar_idx)
        bcol = tuple(exps[i] for i in elim_idx)
        kexp = tuple(exps[i] if i in kept_set else 0 for i in range(big.dimension))
        cell = cells.setdefault((brow, bcol), {})
        cell[kexp] = cell.get(kexp, 0) + c
    row_keys = sorted({rk for rk, _ in cells}, key=GREVLEX.key)
    col_keys = sorted({ck for _, ck in cells}, key=GREVLEX.key)
    rindex = {k: i for i, k in enumerate(row_keys)}
    cindex = {k: i for i, k in enumerate(col_keys)}
    zero = Polynomial.zero(big)
    D = [[zero] * len(col_keys) for _ in range(len(row_keys))]
    for (rk, ck), cell in cells.items():
        D[rindex[rk]][cindex[ck]] = Polynomial(big, cell)
    stats.matrix_shape = (len(row_keys), len(col_keys))

    square = len(row_keys) == len(col_keys)
    det = None
    if square:
        det = bareiss_determinant(D, budget)
        if det.is_zero:
            square = False
    if not square or det is None or det.is_zero:
        det, rank = _max_rank_pivot(D, budget)
        stats.notes = stats.notes + (f"maximal-rank submatrix of rank {rank}",)
        stats.square_matrix = False
    else:
        stats.square_matrix = True
    if det.is_constant():
        raise DegenerateSystemError("Dixon eliminant degenerated to a constant")
    det = restrict(det, space)  # entries carry kept variables only
    final_var = elim_names[0] if m == 1 else None
    return _finish(t, det, "dixon", stats, t.system, final_var, t0, kept0)


def eliminate(task: EliminationTask,
              budget: ElimBudget | None = None) -> EliminationResult:
    """Backend dispatcher.

    ``groebner`` and ``dixon`` run as requested on the task; the default
    ``sylvester-auto`` presubstitutes linear occurrences first, then takes a
    Sylvester resultant when exactly two polynomials in one eliminated
    variable remain, falling back to the block-order Groebner run otherwise.
    """
    backend = task.backend or "sylvester-auto"
    if backend not in BACKENDS:
        raise ElimStructureError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "groebner":
        return eliminate_groebner(task, budget)
    if backend == "dixon":
        return dixon_resultant(task, budget)

    t0 = time.monotonic()
    stats = ElimStats(backend="sylvester-auto")
    kept0 = task.kept
    t = linear_presubstitution(task)
    if t.presub_warning:
        stats.notes = stats.notes + ("presubstitution fell back or emptied the system",)
    done = _endgame(t, "sylvester-auto", stats, t0, kept0)
    if done is not None:
        return done
    polys = t.system
    if len(t.eliminate) == 1 and len(polys) == 2:
        (v,) = t.eliminate
        da = polys[0].degree_in(v) if v in polys[0].variables_used() else 0
        db = polys[1].degree_in(v) if v in polys[1].variables_used() else 0
        if da > 0 and db > 0:
            res = sylvester_resultant(polys[0], polys[1], v, budget)
            stats.matrix_shape = (da + db, da + db)
            if res.is_zero:
                raise DegenerateSystemError(
                    "Sylvester resultant vanished identically: the inputs share a factor")
            return _finish(t, res, "sylvester-auto", stats, polys, v, t0, kept0)
        nz = polys[0] if db == 0 else polys[1]
        if nz.is_constant():
            stats.notes = stats.notes + ("inconsistent system: empty variety",)
            return _finish(t, Polynomial.constant(t.space, 1), "sylvester-auto",
                           stats, polys, None, t0, kept0)
        # one input free of the variable: it already constrains the projection
        stats.notes = stats.notes + ("one constraint already free of the variable",)
        return _finish(t, nz, "sylvester-auto", stats, polys, None, t0, kept0)
    if len(t.eliminate) == 1 and len(polys) == 1:
        return _no_relation(t, "sylvester-auto", stats, t0,
                            "no relation: single constraint projects densely")
    inner = eliminate_groebner(t, budget, kept0)
    inner.stats.backend = "sylvester-auto"
    inner.stats.notes = inner.stats.notes + ("groebner fallback after presubstitution",)
    inner.backend_used = "sylvester-auto"
    return inner
