"""Pointed étale algebras (L, α) as symbolic torsor models, with their trace forms.

>>> T = versal_Hq_torsor(6, 2)
>>> print(T)
k(√t1)×k(√t2)×k^2 ; α=(u1,u2,u3,v3)
>>> [str(c) for c in trace_form(T).diagonal]
['2', '2·t1', '2', '2·t2', '1', '1']
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import ContextError, DomainError
from .symbols import ONE_CLASS, TWO, Atom, SquareClass, SymbolContext


@dataclass(frozen=True)
class SplitOne:
    """A factor k with marked unit."""

    unit: SquareClass

    rank = 1


@dataclass(frozen=True)
class Quadratic:
    """A factor k(√disc) whose marked element is a unit of k."""

    disc: SquareClass
    unit: SquareClass

    rank = 2


@dataclass(frozen=True)
class GenericQuadratic:
    """A factor k(√disc) marked by u + v√disc, whose norm has square class ``norm``."""

    disc: SquareClass
    norm: Atom
    unit: SquareClass
    label: str = ""

    rank = 2


Factor = Union[SplitOne, Quadratic, GenericQuadratic]


@dataclass(frozen=True)
class QuadraticForm:
    diagonal: tuple

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        """Orthogonal sum."""
        return QuadraticForm(self.diagonal + other.diagonal)

    def __str__(self) -> str:
        return "⟨" + ",".join(str(c) for c in self.diagonal) + "⟩"


def form(*entries: SquareClass) -> QuadraticForm:
    return QuadraticForm(tuple(entries))


@dataclass(frozen=True, eq=False)
class Torsor:
    ctx: SymbolContext
    factors: tuple

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    def product(self, other: "Torsor") -> "Torsor":
        """Concatenate factors; ``other`` must live in a context extending this one."""
        if other.ctx.atoms[: len(self.ctx.atoms)] != self.ctx.atoms:
            raise ContextError("torsors live in incompatible symbol contexts")
        return Torsor(other.ctx, self.factors + other.factors)

    def with_context(self, ctx: SymbolContext) -> "Torsor":
        """Same factors in a context with the same atoms (e.g. other square flags)."""
        if ctx.atoms != self.ctx.atoms:
            raise ContextError("context declares different atoms")
        return Torsor(ctx, self.factors)

    def __str__(self) -> str:
        parts = []
        alpha = []
        split = 0

        def flush():
            nonlocal split
            if split:
                parts.append("k" if split == 1 else f"k^{split}")
                split = 0

        for f in self.factors:
            if isinstance(f, SplitOne):
                split += 1
                alpha.append(str(f.unit))
                continue
            flush()
            parts.append(f"k(√{f.disc})")
            alpha.append(f.label or str(f.unit) if isinstance(f, GenericQuadratic) else str(f.unit))
        flush()
        return "×".join(parts) + " ; α=(" + ",".join(alpha) + ")"


def versal_Hq_torsor(n: int, q: int, ctx: Optional[SymbolContext] = None, units: bool = True) -> Torsor:
    """Canonical torsor in the image of H_q, over fresh indeterminates.

    Blocks i ≤ q are k(√t_i) marked by u_i; the remaining pairs are split and
    marked by (u_j, v_j); odd n appends one more split factor marked u_{m+1}.
    With ``units=False`` every mark is trivial (the S_n case) and only the
    t_i are declared.
    """
    if n < 1:
        raise DomainError("rank must be positive")
    m = n // 2
    if not 0 <= q <= m:
        raise DomainError(f"q must lie in 0..{m}, got {q}")
    ctx = SymbolContext() if ctx is None else ctx
    names = []
    for i in range(1, m + 1):
        if i <= q:
            names.append(f"t{i}")
        if units:
            names.append(f"u{i}")
            if i > q:
                names.append(f"v{i}")
    if units and n % 2:
        names.append(f"u{m + 1}")
    ctx = ctx.with_atoms(*names)

    def mark(name):
        return SquareClass.of(ctx[name]) if units else ONE_CLASS

    factors: list = []
    for i in range(1, q + 1):
        factors.append(Quadratic(SquareClass.of(ctx[f"t{i}"]), mark(f"u{i}")))
    for j in range(q + 1, m + 1):
        factors += [SplitOne(mark(f"u{j}")), SplitOne(mark(f"v{j}"))]
    if n % 2:
        factors.append(SplitOne(mark(f"u{m + 1}")))
    return Torsor(ctx, tuple(factors))


def d4_versal_torsor(ctx: Optional[SymbolContext] = None, suffix: str = "") -> Torsor:
    """(K(√t), u + v√t) over K = k(t, u, v), with N the square class of u² − v²t.

    N carries the relation (N)·(t) = 0, from (N)·(t) = (N)·(1 − N/u²) = 0, and
    specializes (t) to 0 at its own valuation, where t ≡ (u/v)² is a square.
    """
    ctx = SymbolContext() if ctx is None else ctx
    t, u, v, nn = (f"{x}{suffix}" for x in "tuvN")
    ctx = ctx.with_atoms(t, u, v)
    ctx = ctx.with_dependent(nn, relations=[ctx[t]], specialization={ctx[t]: None})
    label = f"{u}+{v}√{t}"
    factor = GenericQuadratic(SquareClass.of(ctx[t]), ctx[nn], SquareClass.of(ctx[u]), label)
    return Torsor(ctx, (factor,))


def trace_form(T: Torsor) -> QuadraticForm:
    """x ↦ Tr(x²): ⟨1⟩ per split factor and ⟨2, 2t⟩ per quadratic factor."""
    two = SquareClass.of(TWO)
    out: list = []
    for f in T.factors:
        if isinstance(f, SplitOne):
            out.append(ONE_CLASS)
        else:
            out += [two, two * f.disc]
    return QuadraticForm(tuple(out))


def twisted_trace_form(T: Torsor) -> QuadraticForm:
    """x ↦ Tr(αx²): ⟨u⟩, ⟨2u, 2ut⟩, or ⟨2u, 2utN⟩ per factor."""
    two = SquareClass.of(TWO)
    out: list = []
    for f in T.factors:
        if isinstance(f, SplitOne):
            out.append(f.unit)
        elif isinstance(f, Quadratic):
            out += [two * f.unit, two * f.unit * f.disc]
        else:
            out += [two * f.unit, two * f.unit * f.disc * SquareClass.of(f.norm)]
    return QuadraticForm(tuple(out))


def norm_class(T: Torsor) -> SquareClass:
    """Square class of N_{L/k}(α); trivial exactly on the image of the D_n torsors."""
    out = ONE_CLASS
    for f in T.factors:
        if isinstance(f, SplitOne):
            out = out * f.unit
        elif isinstance(f, GenericQuadratic):
            out = out * SquareClass.of(f.norm)
    return out
