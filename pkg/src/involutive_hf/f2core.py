"""Dense linear algebra over the two-element field.

Vectors are Python ints used as bitsets: bit ``c`` holds coordinate ``c``.
Matrix rows are stored the same way, so row operations are a single XOR on
arbitrary-precision ints.

Pivot rule (used everywhere, so results are reproducible): columns are scanned
left to right and the pivot for a column is the lowest-index remaining row with
a one in that column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "F2Matrix",
    "F2Subspace",
    "Eliminator",
    "rank",
    "kernel_basis",
    "solve_linear",
    "subspace_membership",
    "span",
    "pack",
    "unpack",
    "iter_bits",
    "parity",
]


def iter_bits(v: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``v`` in increasing order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def pack(bits: Sequence[int] | int) -> int:
    """Pack a 0/1 sequence into a bitset (an int is returned unchanged)."""
    if isinstance(bits, int):
        return bits
    out = 0
    for k, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"entry {k} is {b!r}, expected 0 or 1")
        if b:
            out |= 1 << k
    return out


def unpack(v: int, n: int) -> list[int]:
    return [(v >> k) & 1 for k in range(n)]


@dataclass(frozen=True)
class F2Matrix:
    """An ``nrows x ncols`` matrix over F2 stored as row bitsets."""

    nrows: int
    ncols: int
    data: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.data) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.data)}")
        limit = 1 << self.ncols
        for r, row in enumerate(self.data):
            if row < 0 or row >= limit:
                raise ValueError(f"row {r} has bits outside {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            packed.append(pack(r))
        return cls(len(rows), ncols, tuple(packed))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> F2Matrix:
        """Build from column bitsets (bit ``r`` of ``columns[c]`` is entry ``(r, c)``)."""
        rows = [0] * nrows
        for c, col in enumerate(columns):
            for r in iter_bits(col):
                if r >= nrows:
                    raise ValueError(f"column {c} has bits outside {nrows} rows")
                rows[r] |= 1 << c
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, tuple(1 << k for k in range(n)))

    @cached_property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.ncols
        for r, row in enumerate(self.data):
            for c in iter_bits(row):
                cols[c] |= 1 << r
        return tuple(cols)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return (self.data[r] >> c) & 1

    def to_rows(self) -> list[list[int]]:
        return [unpack(row, self.ncols) for row in self.data]

    def transpose(self) -> F2Matrix:
        return F2Matrix(self.ncols, self.nrows, self.columns)

    def apply(self, v: int) -> int:
        """Return ``M v`` for a column bitset ``v``."""
        out = 0
        cols = self.columns
        for c in iter_bits(v):
            out ^= cols[c]
        return out

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        return F2Matrix.from_columns([self.apply(col) for col in other.columns], self.nrows)

    def __add__(self, other: F2Matrix) -> F2Matrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch")
        return F2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def is_zero(self) -> bool:
        return not any(self.data)


def _rref(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form under the fixed pivot rule.

    Returns the nonzero reduced rows and the pivot column of each.
    """
    work = list(rows)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        hit = next((r for r in range(top, len(work)) if work[r] & bit), None)
        if hit is None:
            continue
        work[top], work[hit] = work[hit], work[top]
        prow = work[top]
        for r in range(len(work)):
            if r != top and work[r] & bit:
                work[r] ^= prow
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


def rank(m: F2Matrix) -> int:
    return len(_rref(m.data, m.ncols)[1])


@dataclass(frozen=True)
class F2Subspace:
    """A subspace of F2^n with a canonical (reduced echelon) basis.

    Equal subspaces have identical ``basis`` tuples, so dataclass equality is
    subspace equality.
    """

    ambient_dim: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[list[int]]:
        return [unpack(v, self.ambient_dim) for v in self.basis]


def span(vectors: Iterable[Sequence[int] | int], ambient_dim: int) -> F2Subspace:
    rows, _ = _rref([pack(v) for v in vectors], ambient_dim)
    return F2Subspace(ambient_dim, tuple(rows))


def kernel_basis(m: F2Matrix) -> F2Subspace:
    rows, pivots = _rref(m.data, m.ncols)
    pivot_set = set(pivots)
    vecs = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, p in zip(rows, pivots):
            if (row >> free) & 1:
                v |= 1 << p
        vecs.append(v)
    return span(vecs, m.ncols)


def solve_linear(m: F2Matrix, b: Sequence[int] | int) -> int | None:
    """Return some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent.

    The solution sets every free variable to zero, so it is determined by the
    pivot rule.
    """
    bv = pack(b)
    if bv >> m.nrows:
        raise ValueError(f"right-hand side longer than {m.nrows} rows")
    rhs = 1 << m.ncols
    aug = [row | (rhs if (bv >> r) & 1 else 0) for r, row in enumerate(m.data)]
    rows, pivots = _rref(aug, m.ncols + 1)
    x = 0
    for row, p in zip(rows, pivots):
        if p == m.ncols:
            return None
        if row & rhs:
            x |= 1 << p
    return x


def subspace_membership(s: F2Subspace, v: Sequence[int] | int) -> bool:
    w = pack(v)
    if w >> s.ambient_dim:
        raise ValueError(f"vector longer than ambient dimension {s.ambient_dim}")
    for row in s.basis:
        low = row & -row
        if w & low:
            w ^= row
    return w == 0


class Eliminator:
    """Incremental echelon basis keyed on the lowest set bit.

    Each inserted vector carries a tag bitset; ``reduce`` returns the residual
    and the XOR of the tags used, which gives coordinates with respect to the
    inserted vectors. Used for homology: insert boundaries with tag 0, then
    cycle representatives with one tag bit each.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def vectors(self) -> list[int]:
        return [vec for vec, _ in self._pivots.values()]

    def reduce(self, v: int) -> tuple[int, int]:
        tag = 0
        pivots = self._pivots
        while v:
            low = (v & -v).bit_length() - 1
            hit = pivots.get(low)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def insert(self, v: int, tag: int = 0) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        res, used = self.reduce(v)
        if not res:
            return False
        low = (res & -res).bit_length() - 1
        self._pivots[low] = (res, tag ^ used)
        return True

    def absorb(self, v: int, tag: int = 0) -> int | None:
        """Insert ``v``; when it is already in the span return the dependency tag.

        The returned tag is ``tag`` combined with the tags of the stored
        vectors summing to ``v``, i.e. the relation that makes ``v`` redundant.
        """
        res, used = self.reduce(v)
        if res:
            low = (res & -res).bit_length() - 1
            self._pivots[low] = (res, tag ^ used)
            return None
        return tag ^ used

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0
