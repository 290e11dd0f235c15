"""Dense linear algebra over F2 with rows packed into Python ints.

Bit ``j`` of a row int is the entry in column ``j``.

>>> m = F2Matrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
>>> rank(m)
2
>>> solve(F2Matrix.from_rows([[1, 1], [0, 1]]), (1, 0))
(1, 0)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

BitVector = tuple


def pack(bits: Sequence[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def unpack(word: int, length: int) -> BitVector:
    return tuple((word >> j) & 1 for j in range(length))


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple  # ints, one per row

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match storage")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "F2Matrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(pack(r) for r in rows))

    @classmethod
    def from_ints(cls, rows: Iterable[int], ncols: int) -> "F2Matrix":
        rows = tuple(rows)
        return cls(len(rows), ncols, rows)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def row(self, i: int) -> BitVector:
        return unpack(self.rows[i], self.ncols)

    def to_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.nrows)]

    def transpose(self) -> "F2Matrix":
        cols = []
        for j in range(self.ncols):
            word = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    word |= 1 << i
            cols.append(word)
        return F2Matrix(self.ncols, self.nrows, tuple(cols))

    def apply(self, x: Sequence[int]) -> BitVector:
        """Matrix-vector product m·x."""
        if len(x) != self.ncols:
            raise ValueError("vector length does not match ncols")
        xw = pack(x)
        return tuple(bin(r & xw).count("1") & 1 for r in self.rows)

    def stack(self, other: "F2Matrix") -> "F2Matrix":
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return F2Matrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)


def _echelon(rows: Sequence[int]) -> list:
    """Reduced echelon basis as (pivot column, row) pairs."""
    basis: list = []
    for r in rows:
        for p, b in basis:
            if (r >> p) & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            basis = [(q, b ^ r if (b >> p) & 1 else b) for q, b in basis]
            basis.append((p, r))
    return basis


def rank(m: F2Matrix) -> int:
    return len(_echelon(m.rows))


def rank_of_ints(rows: Iterable[int]) -> int:
    return len(_echelon(list(rows)))


def solve(m: F2Matrix, rhs: Sequence[int]) -> Optional[BitVector]:
    """Some x with m·x = rhs, free variables set to 0; None if inconsistent."""
    if len(rhs) != m.nrows:
        raise ValueError("rhs length does not match nrows")
    # Augment each row with the rhs bit in column ncols.
    aug = [r | ((b & 1) << m.ncols) for r, b in zip(m.rows, rhs)]
    x = 0
    for p, row in _echelon(aug):
        if p == m.ncols:
            return None
        if (row >> m.ncols) & 1:
            x |= 1 << p
    return unpack(x, m.ncols)


def kernel_basis(m: F2Matrix) -> list:
    """Basis of {x : m·x = 0}, one vector per free column (in increasing order)."""
    basis = _echelon(m.rows)
    pivots = {p for p, _ in basis}
    out = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        x = 1 << f
        for p, row in basis:
            if (row >> f) & 1:
                x |= 1 << p
        out.append(unpack(x, m.ncols))
    return out


def express(target: int, generators: Sequence[int]) -> Optional[BitVector]:
    """Coefficients c with XOR of c_k·generators[k] = target, or None.

    Equivalent to ``solve`` on the matrix whose columns are the generators;
    kept separate because callers hold the generators as row ints.
    """
    width = max([target.bit_length()] + [g.bit_length() for g in generators])
    cols = F2Matrix.from_ints([target] + list(generators), width).transpose()
    a = F2Matrix.from_ints([r >> 1 for r in cols.rows], len(generators))
    rhs = [r & 1 for r in cols.rows]
    return solve(a, rhs)
