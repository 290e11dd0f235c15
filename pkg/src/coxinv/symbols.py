"""Normal-form calculus for mod-2 symbols of square classes.

A class is an F2-sum of monomials ``(-1)^a (2)^b (x1)...(xk)``.  Products are
normalized by the rewrite rules

* ``(x)(x) = (-1)(x)`` for every non-constant atom ``x``,
* ``(2)(2) = (-1)(2)``,
* ``(-1)(2) = 0`` (Steinberg relation ``(a)(1-a) = 0`` at ``a = -1``),
* a monomial holding a dependent atom together with one of its declared
  relation partners is zero,

plus the context flags that declare ``-1`` and/or ``2`` to be squares.

>>> ctx = SymbolContext().with_atoms("t", "u")
>>> t, u = ctx["t"], ctx["u"]
>>> str(ctx.cup(ctx.sym(SquareClass.of(TWO)), ctx.sym(SquareClass.of(TWO, t))))
'(2)·(t)'
>>> str(ctx.cup(ctx.sym(SquareClass.of(t)), ctx.sym(SquareClass.of(t))))
'(−1)·(t)'
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import reduce
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ConfigurationError, ContextError, EnumerationError, ParseError

MINUS_SIGN = "−"
CDOT = "·"


class AtomKind(enum.IntEnum):
    MINUS_ONE = 0
    TWO = 1
    INDETERMINATE = 2
    DEPENDENT = 3


_NAME_RE = re.compile(r"^(.*?)(\d+)$")
_IDENT_RE = re.compile(r"^[A-Za-z_Ͱ-Ͽ][A-Za-z0-9_Ͱ-Ͽ]*$")


@dataclass(frozen=True)
class Atom:
    """A generator of the square-class group: -1, 2, an indeterminate, or a dependent element."""

    kind: AtomKind
    name: str

    @property
    def is_constant(self) -> bool:
        return self.kind in (AtomKind.MINUS_ONE, AtomKind.TWO)

    @property
    def sort_key(self) -> tuple:
        # Constants first, then indeterminates, then dependent atoms; within a
        # kind by numeric suffix and then prefix, so that the blocks of a
        # torsor (t1, u1, v1, t2, ...) stay together.
        if self.is_constant:
            return (int(self.kind), -1, "")
        match = _NAME_RE.match(self.name)
        if match:
            return (int(self.kind), int(match.group(2)), match.group(1))
        return (int(self.kind), -1, self.name)

    def __lt__(self, other: "Atom") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.name


MINUS_ONE = Atom(AtomKind.MINUS_ONE, MINUS_SIGN + "1")
TWO = Atom(AtomKind.TWO, "2")


@dataclass(frozen=True)
class SquareClass:
    """Element of K^x / K^x2, stored as the squarefree support of its atom factorization."""

    support: frozenset = frozenset()

    @classmethod
    def of(cls, *atoms: Atom) -> "SquareClass":
        """Product of the given atoms; repeated atoms cancel (exponents mod 2)."""
        support: set = set()
        for a in atoms:
            support ^= {a}
        return cls(frozenset(support))

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(self.support ^ other.support)

    @property
    def is_trivial(self) -> bool:
        return not self.support

    def __str__(self) -> str:
        if not self.support:
            return "1"
        return CDOT.join(a.name for a in sorted(self.support))


ONE_CLASS = SquareClass()


@dataclass(frozen=True)
class Monomial:
    """Cup product (-1)^minus_one_exp (2)^two (x1)...(xk) with distinct non-constant atoms."""

    minus_one_exp: int = 0
    two: bool = False
    rest: frozenset = frozenset()

    @property
    def degree(self) -> int:
        return self.minus_one_exp + int(self.two) + len(self.rest)

    def factors(self) -> tuple:
        return (MINUS_ONE,) * self.minus_one_exp + ((TWO,) if self.two else ()) + tuple(sorted(self.rest))

    @property
    def sort_key(self) -> tuple:
        return (self.degree, tuple(a.sort_key for a in self.factors()))

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        parts = []
        if self.minus_one_exp == 1:
            parts.append(f"({MINUS_ONE.name})")
        elif self.minus_one_exp > 1:
            parts.append(f"({MINUS_ONE.name})^{self.minus_one_exp}")
        if self.two:
            parts.append("(2)")
        parts.extend(f"({a.name})" for a in sorted(self.rest))
        return CDOT.join(parts) if parts else "1"


UNIT = Monomial()


@dataclass(frozen=True)
class CohClass:
    """F2-linear combination of normalized monomials; possibly inhomogeneous."""

    terms: frozenset = frozenset()

    def __add__(self, other: "CohClass") -> "CohClass":
        return CohClass(self.terms ^ other.terms)

    __sub__ = __add__

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=lambda m: m.sort_key)

    def component(self, degree: int) -> "CohClass":
        return CohClass(frozenset(m for m in self.terms if m.degree == degree))

    def degrees(self) -> list:
        return sorted({m.degree for m in self.terms})

    def atoms(self) -> frozenset:
        return frozenset(a for m in self.terms for a in m.rest)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(str(m) for m in self.sorted_terms())

    def __repr__(self) -> str:
        return f"CohClass({str(self)!r})"


ZERO = CohClass()
ONE = CohClass(frozenset({UNIT}))


def total(classes: Iterable[CohClass]) -> CohClass:
    acc: set = set()
    for c in classes:
        acc ^= c.terms
    return CohClass(frozenset(acc))


@dataclass(frozen=True, eq=False)
class SymbolContext:
    """Declared atoms and the square flags; immutable, extended by copying."""

    minus_one_is_square: bool = False
    two_is_square: bool = False
    atoms: tuple = ()
    relations: Mapping = field(default_factory=lambda: MappingProxyType({}))
    specializations: Mapping = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {a.name: a for a in self.atoms})

    # -- declaration -----------------------------------------------------

    def _extended(self, new_atoms, relations=None, specializations=None) -> "SymbolContext":
        for a in new_atoms:
            if not _IDENT_RE.match(a.name):
                raise ContextError(f"illegal atom name {a.name!r}")
            if a.name in self._by_name or a.name in ("2", "-1", MINUS_ONE.name):
                raise ContextError(f"atom {a.name!r} already declared")
        rel = dict(self.relations)
        rel.update(relations or {})
        spec = dict(self.specializations)
        spec.update(specializations or {})
        return SymbolContext(
            self.minus_one_is_square,
            self.two_is_square,
            self.atoms + tuple(new_atoms),
            MappingProxyType(rel),
            MappingProxyType(spec),
        )

    def with_atoms(self, *names: str) -> "SymbolContext":
        """Return a new context that also declares the indeterminates ``names``."""
        return self._extended([Atom(AtomKind.INDETERMINATE, n) for n in names])

    def with_dependent(
        self,
        name: str,
        relations: Iterable[Atom] = (),
        specialization: Optional[Mapping[Atom, Optional[SquareClass]]] = None,
    ) -> "SymbolContext":
        """Declare a dependent atom.

        ``relations`` lists partners ``p`` with ``(name)·(p) = 0``.
        ``specialization`` maps atoms to their image in the residue field at
        this atom (``None`` meaning the symbol vanishes there); atoms not
        mentioned specialize to themselves.
        """
        atom = Atom(AtomKind.DEPENDENT, name)
        partners = frozenset(relations)
        if atom in partners or any(p.name == name for p in partners):
            raise ContextError("a dependent atom cannot be its own relation partner")
        for p in partners:
            self._check_declared(p)
        specs = {}
        if specialization is not None:
            for k, v in specialization.items():
                self._check_declared(k)
                if v is not None:
                    for a in v.support:
                        self._check_declared(a)
            specs[atom] = MappingProxyType(dict(specialization))
        return self._extended([atom], {atom: partners}, specs)

    def with_flags(self, minus_one_is_square: bool, two_is_square: bool) -> "SymbolContext":
        return SymbolContext(minus_one_is_square, two_is_square, self.atoms, self.relations, self.specializations)

    def __getitem__(self, name: str) -> Atom:
        if name in ("-1", MINUS_ONE.name):
            return MINUS_ONE
        if name == "2":
            return TWO
        try:
            return self._by_name[name]
        except KeyError:
            raise ContextError(f"undeclared atom {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def _check_declared(self, atom: Atom) -> None:
        if atom.is_constant:
            return
        if self._by_name.get(atom.name) != atom:
            raise ContextError(f"undeclared atom {atom.name!r}")

    # -- normal forms ----------------------------------------------------

    def _finish(self, a: int, two: bool, rest: frozenset) -> Optional[Monomial]:
        if two and a:
            return None
        if a and self.minus_one_is_square:
            return None
        if two and self.two_is_square:
            return None
        for x in rest:
            if x.kind is AtomKind.DEPENDENT and self.relations.get(x, frozenset()) & rest:
                return None
        return Monomial(a, two, rest)

    def normalize(self, m: Monomial) -> Optional[Monomial]:
        """Normal form of ``m`` in this context, or ``None`` when it vanishes."""
        return self._finish(m.minus_one_exp, m.two, m.rest)

    def mul_monomials(self, m1: Monomial, m2: Monomial) -> Optional[Monomial]:
        if m1.two and m2.two:
            # (2)(2) = (-1)(2) = 0
            return None
        overlap = m1.rest & m2.rest
        return self._finish(m1.minus_one_exp + m2.minus_one_exp + len(overlap), m1.two or m2.two, m1.rest | m2.rest)

    def monomial(self, *atoms: Atom) -> CohClass:
        """The class of the product of the degree-1 symbols of ``atoms`` (repeats allowed)."""
        return self.cup(*(self.sym(SquareClass.of(a)) for a in atoms)) if atoms else ONE

    def atom_symbol(self, atom: Atom) -> CohClass:
        self._check_declared(atom)
        if atom.kind is AtomKind.MINUS_ONE:
            m = self._finish(1, False, frozenset())
        elif atom.kind is AtomKind.TWO:
            m = self._finish(0, True, frozenset())
        else:
            m = self._finish(0, False, frozenset({atom}))
        return CohClass(frozenset({m})) if m is not None else ZERO

    def sym(self, c: Union[SquareClass, Atom]) -> CohClass:
        """Degree-1 symbol (c); additive in the square-class group law."""
        if isinstance(c, Atom):
            c = SquareClass.of(c)
        return total(self.atom_symbol(a) for a in c.support)

    def cup(self, *classes: CohClass) -> CohClass:
        """Cup product of any number of classes (empty product is 1)."""
        return reduce(self._cup2, classes, ONE)

    def _cup2(self, a: CohClass, b: CohClass) -> CohClass:
        acc: set = set()
        for m1 in a.terms:
            for m2 in b.terms:
                m = self.mul_monomials(m1, m2)
                if m is not None:
                    acc ^= {m}
        return CohClass(frozenset(acc))

    def renormalize(self, c: CohClass) -> CohClass:
        """Re-apply this context's rules (e.g. after a flag change) to every term of ``c``."""
        acc: set = set()
        for m in c.terms:
            n = self.normalize(m)
            if n is not None:
                acc ^= {n}
        return CohClass(frozenset(acc))

    # -- residues --------------------------------------------------------

    def residue_at(self, c: CohClass, p: Atom) -> CohClass:
        """Residue of ``c`` at the valuation of the atom ``p``.

        Writes ``c = beta + (p)·gamma`` with ``beta, gamma`` free of ``p`` and
        returns ``gamma`` with p's residue specialization applied.
        """
        if p.is_constant:
            raise ContextError("residues are taken at non-constant atoms only")
        self._check_declared(p)
        if p.kind is AtomKind.DEPENDENT:
            if p not in self.specializations:
                raise ConfigurationError(f"dependent atom {p.name!r} has no residue specialization")
            spec = self.specializations[p]
        else:
            spec = {}
        acc = ZERO
        for m in c.terms:
            if p not in m.rest:
                continue
            factors = [CohClass(frozenset({Monomial(m.minus_one_exp, m.two)}))]
            for x in m.rest - {p}:
                if x in spec:
                    image = spec[x]
                    factors.append(ZERO if image is None else self.sym(image))
                else:
                    factors.append(self.atom_symbol(x))
            acc = acc + self.cup(*factors)
        return acc

    # -- parsing ---------------------------------------------------------

    def parse(self, text: str) -> CohClass:
        """Parse the canonical rendering (ASCII ``-1`` and ``*`` also accepted)."""
        return parse_class(text, self)


def monomial_basis(classes: Iterable[CohClass]) -> list:
    """Sorted union of the terms of ``classes``."""
    terms: set = set()
    for c in classes:
        terms |= c.terms
    return sorted(terms, key=lambda m: m.sort_key)


def monomial_support_vector(c: CohClass, basis: Sequence[Monomial]) -> tuple:
    """Characteristic 0/1 vector of the terms of ``c`` against ``basis``."""
    index = {m: i for i, m in enumerate(basis)}
    bits = [0] * len(basis)
    for m in c.terms:
        if m not in index:
            raise EnumerationError(f"term {m} not in the monomial basis")
        bits[index[m]] = 1
    return tuple(bits)


def parse_class(text: str, ctx: SymbolContext) -> CohClass:
    s = text.replace(MINUS_SIGN, "-").replace(CDOT, "*")
    if not s.strip():
        raise ParseError("empty class", 0)
    acc = ZERO
    pos = 0
    for chunk in s.split("+"):
        stripped = chunk.strip()
        start = pos + (len(chunk) - len(chunk.lstrip()))
        acc = acc + _parse_monomial(stripped, start, ctx)
        pos += len(chunk) + 1
    return acc


def _parse_monomial(text: str, offset: int, ctx: SymbolContext) -> CohClass:
    if text == "0":
        return ZERO
    if text == "1":
        return ONE
    if not text:
        raise ParseError("empty term", offset)
    factors = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " *":
            i += 1
            continue
        if ch != "(":
            raise ParseError(f"expected '(' but found {ch!r}", offset + i)
        close = text.find(")", i)
        if close < 0:
            raise ParseError("unbalanced parenthesis", offset + i)
        name = text[i + 1 : close].strip()
        i = close + 1
        exp = 1
        if i < len(text) and text[i] == "^":
            m = re.match(r"\^(\d+)", text[i:])
            if not m:
                raise ParseError("bad exponent", offset + i)
            exp = int(m.group(1))
            i += len(m.group(0))
        try:
            atom = ctx[name]
        except ContextError:
            raise ParseError(f"unknown atom {name!r}", offset + i) from None
        factors.extend([ctx.atom_symbol(atom)] * exp)
    return ctx.cup(*factors)
