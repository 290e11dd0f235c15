"""Root systems, classical Weyl groups as signed permutations, and abelian reflection subgroups.

Signed permutations act on the standard basis by ``w(e_i) = signs[i] * e_{perm[i]}``
(0-based internally, 1-based in text).

>>> s = reflection_of_root((1, 1, 0))
>>> s
SignedPermutation(perm=(1, 0, 2), signs=(-1, -1, 1))
>>> (s * s).is_identity
True
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx

from .errors import DomainError, ResourceError, UnsupportedError

#: Largest Weyl group that may be enumerated element by element.
DEFAULT_GROUP_CAP = 400_000

CLASSICAL = ("A", "B", "C", "D")
EXCEPTIONAL = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}


# ---------------------------------------------------------------------------
# Root systems


@dataclass(frozen=True)
class RootSystem:
    """Roots as integer vectors; the true root is ``vector / scale``."""

    type: str
    rank: int
    roots: tuple
    scale: int = 1

    @property
    def dimension(self) -> int:
        return len(self.roots[0]) if self.roots else 0

    def __len__(self) -> int:
        return len(self.roots)

    def positive_roots(self) -> list:
        """Roots whose first nonzero coordinate is positive."""
        return [r for r in self.roots if next(c for c in r if c) > 0]


def _unit(n: int, i: int, c: int = 1) -> list:
    v = [0] * n
    v[i] = c
    return v


def _pm_pairs(n: int, scale: int = 1, limit: Optional[int] = None) -> list:
    """All ±e_i±e_j with i<j<limit, times scale."""
    limit = n if limit is None else limit
    out = []
    for i, j in itertools.combinations(range(limit), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = si * scale, sj * scale
            out.append(tuple(v))
    return out


def _check_pair(type_: str, rank: int) -> str:
    t = type_.upper()
    if t in EXCEPTIONAL:
        if rank not in (EXCEPTIONAL[t], 0, None):
            raise DomainError(f"{t} has rank {EXCEPTIONAL[t]}, not {rank}")
        return t
    if t in ("E", "F", "G"):
        t = f"{t}{rank}"
        if t not in EXCEPTIONAL:
            raise DomainError(f"no exceptional root system {t}")
        return t
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4}
    if t not in minimum:
        raise DomainError(f"unknown type {type_!r}")
    if not isinstance(rank, int) or rank < minimum[t]:
        raise DomainError(f"type {t} needs rank >= {minimum[t]}, got {rank}")
    return t


def roots(type_: str, rank: int) -> RootSystem:
    """Root system of the given type; E/F/G coordinates are doubled (scale 2) where needed.

    >>> len(roots("B", 2)), len(roots("D", 4)), len(roots("E8", 8))
    (8, 24, 240)
    """
    t = _check_pair(type_, rank)
    if t == "A":
        n = rank + 1
        rs = []
        for i, j in itertools.permutations(range(n), 2):
            v = [0] * n
            v[i], v[j] = 1, -1
            rs.append(tuple(v))
        return RootSystem("A", rank, tuple(sorted(rs, reverse=True)))
    if t in ("B", "C", "D"):
        n = rank
        rs = _pm_pairs(n)
        if t != "D":
            c = 1 if t == "B" else 2
            for i in range(n):
                rs += [tuple(_unit(n, i, c)), tuple(_unit(n, i, -c))]
        return RootSystem(t, rank, tuple(sorted(rs, reverse=True)))
    if t == "E8":
        rs = _pm_pairs(8, 2)
        for signs in itertools.product((1, -1), repeat=8):
            if signs.count(-1) % 2 == 0:
                rs.append(signs)
        return RootSystem(t, 8, tuple(sorted(rs, reverse=True)), 2)
    if t == "E7":
        rs = _pm_pairs(8, 2, limit=6)
        rs += [(0,) * 6 + (2, -2), (0,) * 6 + (-2, 2)]
        for signs in itertools.product((1, -1), repeat=6):
            if signs.count(-1) % 2 == 1:
                v = signs + (1, -1)
                rs += [v, tuple(-c for c in v)]
        return RootSystem(t, 7, tuple(sorted(rs, reverse=True)), 2)
    if t == "E6":
        rs = _pm_pairs(8, 2, limit=5)
        for signs in itertools.product((1, -1), repeat=5):
            if signs.count(-1) % 2 == 0:
                v = signs + (-1, -1, 1)
                rs += [v, tuple(-c for c in v)]
        return RootSystem(t, 6, tuple(sorted(rs, reverse=True)), 2)
    if t == "F4":
        rs = _pm_pairs(4, 2)
        for i in range(4):
            rs += [tuple(_unit(4, i, 2)), tuple(_unit(4, i, -2))]
        rs += list(itertools.product((1, -1), repeat=4))
        return RootSystem(t, 4, tuple(sorted(rs, reverse=True)), 2)
    # G2 in the plane x1+x2+x3 = 0
    base = [(1, -1, 0), (1, 0, -1), (0, 1, -1), (2, -1, -1), (-1, 2, -1), (-1, -1, 2)]
    rs = base + [tuple(-c for c in v) for v in base]
    return RootSystem(t, 2, tuple(sorted(rs, reverse=True)))


def reflect(alpha: Sequence[int], beta: Sequence[int]) -> tuple:
    """r_alpha(beta) = beta - 2(beta,alpha)/(alpha,alpha) alpha, exactly."""
    num = 2 * sum(a * b for a, b in zip(alpha, beta))
    den = sum(a * a for a in alpha)
    c = Fraction(num, den)
    out = tuple(Fraction(b) - c * a for a, b in zip(alpha, beta))
    if any(x.denominator != 1 for x in out):
        return tuple(out)
    return tuple(int(x) for x in out)


# ---------------------------------------------------------------------------
# Signed permutations


@dataclass(frozen=True, order=True)
class SignedPermutation:
    perm: tuple
    signs: tuple

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.signs) != n:
            raise ValueError("not a signed permutation")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition ``self ∘ other`` (apply ``other`` first)."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        perm = tuple(self.perm[other.perm[i]] for i in range(self.n))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.n))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.n
        signs = [1] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def conjugate(self, h: "SignedPermutation") -> "SignedPermutation":
        """self · h · self⁻¹"""
        return self * h * self.inverse()

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)

    @property
    def parity(self) -> int:
        return math.prod(self.signs)

    def apply(self, x: Sequence) -> tuple:
        out = [0] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            out[p] = s * x[i]
        return tuple(out)

    def matrix(self) -> list:
        m = [[0] * self.n for _ in range(self.n)]
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            m[p][i] = s
        return m

    @property
    def order(self) -> int:
        k, g = 1, self
        while not g.is_identity:
            g = g * self
            k += 1
        return k

    @property
    def is_reflection(self) -> bool:
        """Order 2 with a codimension-one fixed hyperplane."""
        if self.is_identity or not (self * self).is_identity:
            return False
        m = self.matrix()
        for i in range(self.n):
            m[i][i] -= 1
        return _rational_rank(m) == 1

    def __str__(self) -> str:
        return "[" + " ".join(("-" if s < 0 else "") + str(p + 1) for p, s in zip(self.perm, self.signs)) + "]"


def _rational_rank(m: list) -> int:
    rows = [[Fraction(x) for x in r] for r in m]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def reflection_of_root(root: Sequence[int]) -> SignedPermutation:
    """Reflection in a root of type A/B/C/D (any nonzero multiple of e_i or e_i±e_j)."""
    n = len(root)
    support = [i for i, c in enumerate(root) if c]
    if len(support) == 1:
        i = support[0]
        signs = [1] * n
        signs[i] = -1
        return SignedPermutation(tuple(range(n)), tuple(signs))
    if len(support) == 2:
        i, j = support
        a, b = root[i], root[j]
        if abs(a) == abs(b):
            perm = list(range(n))
            perm[i], perm[j] = j, i
            signs = [1] * n
            if a == b:
                signs[i] = signs[j] = -1
            return SignedPermutation(tuple(perm), tuple(signs))
    raise UnsupportedError(f"{tuple(root)} is not a classical root")


# ---------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True)
class WeylGroup:
    """Classical Weyl group realized as signed permutations on ``degree`` coordinates."""

    type: str
    rank: int

    @property
    def degree(self) -> int:
        return self.rank + 1 if self.type == "A" else self.rank

    @property
    def order(self) -> int:
        n = self.rank
        if self.type == "A":
            return math.factorial(n + 1)
        if self.type == "D":
            return 2 ** (n - 1) * math.factorial(n)
        return 2**n * math.factorial(n)

    def reflections(self) -> list:
        rs = roots(self.type, self.rank).positive_roots()
        return sorted({reflection_of_root(r) for r in rs})

    def contains(self, w: SignedPermutation) -> bool:
        if w.n != self.degree:
            return False
        if self.type == "A":
            return all(s == 1 for s in w.signs)
        if self.type == "D":
            return w.parity == 1
        return True

    def elements(self, cap: int = DEFAULT_GROUP_CAP) -> Iterator[SignedPermutation]:
        """Every element, after checking the enumeration cap."""
        if self.order > cap:
            raise ResourceError(f"|W({self.type}{self.rank})| = {self.order} exceeds the cap {cap}")
        n = self.degree
        sign_choices = [(1,) * n] if self.type == "A" else list(itertools.product((1, -1), repeat=n))
        if self.type == "D":
            sign_choices = [s for s in sign_choices if math.prod(s) == 1]
        for perm in itertools.permutations(range(n)):
            for signs in sign_choices:
                yield SignedPermutation(perm, signs)

    def generators(self) -> list:
        """Simple reflections."""
        n = self.degree
        gens = []
        for i in range(n - 1):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            gens.append(reflection_of_root(v))
        if self.type in ("B", "C"):
            gens.append(reflection_of_root(_unit(n, n - 1)))
        elif self.type == "D":
            v = [0] * n
            v[n - 2] = v[n - 1] = 1
            gens.append(reflection_of_root(v))
        return gens


def weyl_group(type_: str, rank: int) -> WeylGroup:
    t = _check_pair(type_, rank)
    if t not in CLASSICAL:
        raise UnsupportedError(f"Weyl group of {t} is not enumerated")
    return WeylGroup("B" if t == "C" else t, rank)


def closure(gens: Iterable[SignedPermutation], n: int) -> frozenset:
    """Subgroup generated by ``gens`` (breadth-first)."""
    gens = list(gens)
    e = SignedPermutation.identity(n)
    seen = {e}
    frontier = deque([e])
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return frozenset(seen)


@dataclass(frozen=True)
class ReflectionSubgroup:
    generators: tuple
    elements: frozenset = field(compare=False)

    @classmethod
    def generated_by(cls, gens: Sequence[SignedPermutation]) -> "ReflectionSubgroup":
        gens = tuple(gens)
        if not gens:
            raise ValueError("need at least one generator to fix the degree")
        if not all(g.is_reflection for g in gens):
            raise ValueError("generators must be reflections")
        return cls(gens, closure(gens, gens[0].n))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_abelian(self) -> bool:
        return all(a * b == b * a for a, b in itertools.combinations(self.generators, 2))

    def reflections(self) -> frozenset:
        return frozenset(g for g in self.elements if g.is_reflection)


def subgroup_Hq(type_: str, n: int, q: int) -> ReflectionSubgroup:
    """The abelian reflection subgroup attached to {±e_{2i-1}±e_{2i} : i≤q} ∪ {±e_j : j>2q}.

    For type D only ``q = n // 2`` is allowed and the sign flips are absent.
    """
    t = type_.upper()
    if t == "C":
        t = "B"
    if t not in ("B", "D"):
        raise DomainError("H_q is defined for types B and D")
    _check_pair(t, n)
    m = n // 2
    if t == "B" and not 0 <= q <= m:
        raise DomainError(f"q must lie in 0..{m}")
    if t == "D" and q != m:
        raise DomainError(f"type D uses q = {m} only")
    gens = []
    for i in range(q):
        for sign in (-1, 1):
            v = [0] * n
            v[2 * i], v[2 * i + 1] = 1, sign
            gens.append(reflection_of_root(v))
    if t == "B":
        gens += [reflection_of_root(_unit(n, j)) for j in range(2 * q, n)]
    return ReflectionSubgroup.generated_by(gens)


# ---------------------------------------------------------------------------
# Maximal abelian reflection subgroups


@dataclass(frozen=True)
class SubgroupClass:
    """A W-conjugacy class of maximal abelian reflection subgroups, keyed by reflection sets."""

    representative: frozenset
    orbit: frozenset = field(compare=False)

    def contains(self, h: ReflectionSubgroup) -> bool:
        return h.reflections() in self.orbit

    @property
    def rank(self) -> int:
        return len(self.representative)


def _canonical(refl_set: frozenset) -> tuple:
    return tuple(sorted(refl_set))


def maximal_abelian_reflection_subgroups(type_: str, n: int, cap: int = DEFAULT_GROUP_CAP) -> list:
    """Conjugacy classes of maximal abelian subgroups generated by reflections.

    Maximal sets of pairwise commuting reflections are the maximal cliques of
    the commuting graph; such a set is already the full reflection set of the
    group it generates, since any reflection in that group commutes with all
    of its generators.  Classes are orbits under conjugation by W.
    """
    w = weyl_group(type_, n)
    if w.order > cap:
        raise ResourceError(f"|W({w.type}{n})| = {w.order} exceeds the cap {cap}")
    refl = w.reflections()
    g = nx.Graph()
    g.add_nodes_from(range(len(refl)))
    for a, b in itertools.combinations(range(len(refl)), 2):
        if refl[a] * refl[b] == refl[b] * refl[a]:
            g.add_edge(a, b)
    cliques = {frozenset(refl[i] for i in c) for c in nx.find_cliques(g)}
    gens = w.generators()
    classes = []
    remaining = set(cliques)
    while remaining:
        start = min(remaining, key=_canonical)
        orbit = {start}
        frontier = deque([start])
        while frontier:
            c = frontier.popleft()
            for s in gens:
                d = frozenset(s.conjugate(r) for r in c)
                if d not in orbit:
                    orbit.add(d)
                    frontier.append(d)
        remaining -= orbit
        rep = min(orbit, key=_canonical)
        classes.append(SubgroupClass(rep, frozenset(orbit)))
    classes.sort(key=lambda c: (-c.rank, _canonical(c.representative)))
    return classes


# ---------------------------------------------------------------------------
# Normalizer action


@dataclass(frozen=True)
class NormalizerAction:
    """Permutations of the generator labels of H induced by conjugation with N_W(H).

    ``permutations[k][a] = b`` means the k-th element sends label a to label b.
    """

    labels: tuple
    permutations: tuple
    normalizer_order: int

    @property
    def degree(self) -> int:
        return len(self.labels)


def normalizer_action(h: ReflectionSubgroup, w: WeylGroup, cap: int = DEFAULT_GROUP_CAP) -> NormalizerAction:
    """Distinct label permutations induced by the normalizer of H in W.

    H must be generated by pairwise commuting reflections that are the only
    reflections it contains (true for every H_q), so conjugation permutes them.
    """
    labels = h.generators
    index = {g: i for i, g in enumerate(labels)}
    if set(index) != set(h.reflections()):
        raise UnsupportedError("H must contain no reflections besides its generators")
    perms = set()
    count = 0
    for x in w.elements(cap):
        images = [index.get(x.conjugate(g)) for g in labels]
        if None in images:
            continue
        count += 1
        perms.add(tuple(images))
    return NormalizerAction(labels, tuple(sorted(perms)), count)
