"""Stiefel-Whitney classes of diagonal forms and the invariants w_i·w̃_j of Weyl groups.

An expression such as ``w1*wt3 + wt2`` is an F2-combination of pairs (i, j),
each standing for the invariant (L, α) ↦ w_i(q_L)·w_j(q_{L,α}).

>>> from coxinv.torsors import d4_versal_torsor
>>> T = d4_versal_torsor()
>>> str(evaluate(parse_expr("w1", "B", 2), T))
'(t)'
>>> str(evaluate(parse_expr("wt1", "B", 2), T))
'(t)+(N)'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, ParseError
from .symbols import ONE, ONE_CLASS, ZERO, CohClass, SymbolContext, monomial_basis, total
from .torsors import QuadraticForm, SplitOne, Torsor, trace_form, twisted_trace_form, versal_Hq_torsor

TYPES = ("A", "B", "D")
MIN_RANK = {"A": 1, "B": 2, "D": 4}


def check_type_rank(type_: str, n: int) -> str:
    t = str(type_).upper()
    if t == "C":
        t = "B"
    if t not in TYPES:
        raise DomainError(f"invariants are modeled for types A, B, D only, not {type_!r}")
    if not isinstance(n, int) or n < MIN_RANK[t]:
        raise DomainError(f"type {t} needs rank >= {MIN_RANK[t]}, got {n}")
    return t


# ---------------------------------------------------------------------------
# Stiefel-Whitney classes of forms


def sw_all(q: QuadraticForm, ctx: SymbolContext) -> list:
    """[w_0(q), ..., w_rank(q)], the elementary symmetric functions of the entry symbols."""
    e = [ONE] + [ZERO] * q.rank
    for k, entry in enumerate(q.diagonal, start=1):
        s = ctx.sym(entry)
        if s.is_zero:
            continue
        for d in range(k, 0, -1):
            if not e[d - 1].is_zero:
                e[d] = e[d] + ctx.cup(e[d - 1], s)
    return e


def sw(q: QuadraticForm, i: int, ctx: SymbolContext) -> CohClass:
    """i-th Stiefel-Whitney class; 1 for i = 0 and 0 above the rank."""
    if i < 0:
        raise DomainError("degree must be non-negative")
    if i > q.rank:
        return ZERO
    return sw_all(q, ctx)[i]


def total_sw(q: QuadraticForm, ctx: SymbolContext) -> CohClass:
    """Product of (1 + (a)) over the diagonal entries."""
    return ctx.cup(*(ONE + ctx.sym(a) for a in q.diagonal))


def whitney_check(q1: QuadraticForm, q2: QuadraticForm, i: int, ctx: SymbolContext) -> bool:
    """Does w_i(q1 ⊕ q2) equal Σ_k w_k(q1)·w_{i-k}(q2)?"""
    lhs = sw(q1 + q2, i, ctx)
    rhs = total(ctx.cup(sw(q1, k, ctx), sw(q2, i - k, ctx)) for k in range(i + 1))
    return lhs == rhs


# ---------------------------------------------------------------------------
# Invariant expressions


@dataclass(frozen=True)
class InvariantExpr:
    type: str
    n: int
    terms: frozenset = frozenset()

    def __post_init__(self):
        t = check_type_rank(self.type, self.n)
        object.__setattr__(self, "type", t)
        for i, j in self.terms:
            if not (0 <= i <= self.n and 0 <= j <= self.n):
                raise DomainError(f"w{i}*wt{j} is out of range for rank {self.n}")
            if t == "A" and j:
                raise DomainError("type A has only the classes w_i")

    @classmethod
    def of(cls, type_: str, n: int, pairs: Iterable[tuple]) -> "InvariantExpr":
        acc: set = set()
        for p in pairs:
            acc ^= {tuple(p)}
        return cls(type_, n, frozenset(acc))

    def _same_ambient(self, other: "InvariantExpr") -> None:
        if (self.type, self.n) != (other.type, other.n):
            raise DomainError(f"cannot combine {self.type}{self.n} with {other.type}{other.n}")

    def __add__(self, other: "InvariantExpr") -> "InvariantExpr":
        self._same_ambient(other)
        return InvariantExpr(self.type, self.n, self.terms ^ other.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(render_pair(i, j) for i, j in self.sorted_terms())


def render_pair(i: int, j: int) -> str:
    parts = ([f"w{i}"] if i else []) + ([f"wt{j}"] if j else [])
    return "*".join(parts) if parts else "1"


_FACTOR_RE = re.compile(r"(wt|w̃|w)(\d+)")


def parse_expr(text: str, type_: str, n: int) -> InvariantExpr:
    """Parse ``w1*wt3 + wt2`` style input (``w̃`` accepted for ``wt``).

    >>> str(parse_expr("wt2 + w1*w̃3", "B", 4))
    'wt2 + w1*wt3'
    """
    pairs = []
    pos = 0
    if not text.strip():
        raise ParseError("empty expression", 0)
    for chunk in text.split("+"):
        lead = len(chunk) - len(chunk.lstrip())
        body = chunk.strip()
        start = pos + lead
        pos += len(chunk) + 1
        if not body:
            raise ParseError("empty term", start)
        if body in ("0",):
            continue
        if body == "1":
            pairs.append((0, 0))
            continue
        i = j = None
        offset = 0
        for factor in body.split("*"):
            f = factor.strip()
            fstart = start + offset + (len(factor) - len(factor.lstrip()))
            offset += len(factor) + 1
            m = _FACTOR_RE.fullmatch(f)
            if not m:
                raise ParseError(f"bad factor {f!r}", fstart)
            k = int(m.group(2))
            if m.group(1) == "w":
                if i is not None:
                    raise ParseError("at most one w factor per term", fstart)
                i = k
            else:
                if j is not None:
                    raise ParseError("at most one wt factor per term", fstart)
                j = k
        pairs.append((i or 0, j or 0))
    return InvariantExpr.of(type_, n, pairs)


def evaluate(expr: InvariantExpr, T: Torsor) -> CohClass:
    """Σ w_i(q_L)·w_j(q_{L,α}) over the terms of expr."""
    if T.rank != expr.n:
        raise DomainError(f"torsor rank {T.rank} differs from expression rank {expr.n}")
    ctx = T.ctx
    w = sw_all(trace_form(T), ctx)
    wt = sw_all(twisted_trace_form(T), ctx)
    return total(ctx.cup(w[i], wt[j]) for i, j in expr.terms)


# ---------------------------------------------------------------------------
# Fingerprints


def fingerprint_qs(type_: str, n: int) -> tuple:
    t = check_type_rank(type_, n)
    m = n // 2
    return (m,) if t == "D" else tuple(range(m + 1))


@lru_cache(maxsize=None)
def canonical_torsor(type_: str, n: int, q: int, minus_one_is_square: bool = True,
                     two_is_square: bool = True, experimental_odd_d: bool = False) -> Torsor:
    """The versal H_q torsor used in fingerprints, in a fresh canonical context.

    Type A uses trivial marks (only w_i are defined).  For type D the torsor
    has norm class 1; odd D ranks require ``experimental_odd_d``.
    """
    t = check_type_rank(type_, n)
    ctx = SymbolContext(minus_one_is_square, two_is_square)
    if t == "A":
        return versal_Hq_torsor(n, q, ctx, units=False)
    if t == "D":
        if q != n // 2:
            raise DomainError("type D is evaluated at q = n // 2 only")
        if n % 2:
            if not experimental_odd_d:
                raise DomainError("odd-rank type D is experimental; enable it explicitly")
            even = versal_Hq_torsor(n - 1, q, ctx)
            # The norm condition forces the extra split mark to be a square.
            return Torsor(even.ctx, even.factors + (SplitOne(ONE_CLASS),))
    return versal_Hq_torsor(n, q, ctx)


@dataclass(frozen=True)
class Fingerprint:
    type: str
    n: int
    values: tuple  # ((q, CohClass), ...)

    def __getitem__(self, q: int) -> CohClass:
        for k, v in self.values:
            if k == q:
                return v
        raise KeyError(q)

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for _, v in self.values)

    def __add__(self, other: "Fingerprint") -> "Fingerprint":
        if (self.type, self.n, [q for q, _ in self.values]) != (other.type, other.n, [q for q, _ in other.values]):
            raise DomainError("fingerprints of different ambients")
        return Fingerprint(self.type, self.n, tuple((q, a + b) for (q, a), (_, b) in zip(self.values, other.values)))

    def to_dict(self) -> dict:
        return {str(q): str(v) for q, v in self.values}


def fingerprint(expr: InvariantExpr, minus_one_is_square: bool = True, two_is_square: bool = True,
                experimental_odd_d: bool = False) -> Fingerprint:
    """Evaluations of expr on the canonical versal H_q torsors."""
    vals = []
    for q in fingerprint_qs(expr.type, expr.n):
        T = canonical_torsor(expr.type, expr.n, q, minus_one_is_square, two_is_square, experimental_odd_d)
        vals.append((q, _evaluate_cached(expr, T)))
    return Fingerprint(expr.type, expr.n, tuple(vals))


_SW_CACHE: dict = {}


def _sw_tables(T: Torsor) -> tuple:
    key = id(T)
    hit = _SW_CACHE.get(key)
    if hit is None or hit[0] is not T:
        hit = (T, sw_all(trace_form(T), T.ctx), sw_all(twisted_trace_form(T), T.ctx))
        _SW_CACHE[key] = hit
    return hit[1], hit[2]


def _evaluate_cached(expr: InvariantExpr, T: Torsor) -> CohClass:
    # Canonical torsors are cached, so their Stiefel-Whitney tables are too.
    w, wt = _sw_tables(T)
    return total(T.ctx.cup(w[i], wt[j]) for i, j in expr.terms)


def invariants_equal(e1: InvariantExpr, e2: InvariantExpr, **flags) -> bool:
    e1._same_ambient(e2)
    return fingerprint(e1, **flags) == fingerprint(e2, **flags)


def support_matrix(fps: Sequence[Fingerprint]) -> tuple:
    """Row ints of concatenated support vectors, plus the per-q monomial bases.

    Each q contributes the union monomial basis of the family at that q.
    """
    if not fps:
        return (), ()
    qs = [q for q, _ in fps[0].values]
    bases = [monomial_basis(fp[q] for fp in fps) for q in qs]
    index = []
    offset = 0
    for basis in bases:
        index.append({mono: offset + k for k, mono in enumerate(basis)})
        offset += len(basis)
    rows = []
    for fp in fps:
        word = 0
        for idx, q in zip(index, qs):
            for mono in fp[q].terms:
                word |= 1 << idx[mono]
        rows.append(word)
    return tuple(rows), tuple(zip(qs, bases))
