"""Block-binary skeleton matrices.

A skeleton with ``k`` row-blocks of size ``n`` has exactly one 1 per block
in every column, so a column is fully described by its ``k`` in-block
positions.  :class:`BlockBinaryMatrix` stores those positions (0-based) as
an ``(M, k)`` integer array; the 0/1 matrix is only materialized on demand.

Two sources of skeletons live here:

* :func:`build_skeleton` evaluates the shifted polynomials ``P + f_j`` at
  the first ``k`` field elements; the value ``P(f_m) + f_j`` picks the
  position inside block ``m`` of column ``j``.
* :func:`compose` combines two skeletons block-by-block.  Column ``(u, w)``
  gets position ``u_i * n_B + w_i`` in block ``i`` (0-based), so two
  composed columns meet in block ``i`` exactly when both factors do.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import EmptyList, InvalidDegree, InvalidParams, ShapeMismatch
from .finite_field import FieldSpec


@dataclass(frozen=True)
class SparsePolynomial:
    """``c_1 x + c_2 x^2 + ... + c_r x^r`` over ``field``.

    The constant term is always zero and is not stored.
    """

    coeffs: tuple[int, ...]
    field: FieldSpec

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: int) -> int:
        return eval_poly(self, x)

    def __str__(self) -> str:
        f = self.field
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            mono = "x" if i == 1 else f"x^{i}"
            coef = f.format(c)
            if coef == "1":
                terms.append(mono)
            elif "+" in coef:
                terms.append(f"({coef}){mono}")
            else:
                terms.append(coef + mono)
        return " + ".join(terms) or "0"


def enumerate_polynomials(f: FieldSpec, r: int) -> list[SparsePolynomial]:
    """All ``q**r`` polynomials of degree <= r with zero constant term.

    Coefficient vectors ``(c_1, ..., c_r)`` are listed in lexicographic
    order of element indices, ``c_1`` most significant; the zero
    polynomial comes first.
    """
    if not 1 <= r <= f.q - 1:
        raise InvalidDegree(f"degree bound r={r} outside [1, {f.q - 1}] for GF({f.q})")
    return [SparsePolynomial(c, f) for c in itertools.product(range(f.q), repeat=r)]


def eval_poly(P: SparsePolynomial, x: int) -> int:
    f = P.field
    acc = 0
    for c in reversed(P.coeffs):
        acc = f.mul(f.add(acc, c), x)
    return acc


@dataclass(frozen=True, eq=False)
class BlockBinaryMatrix:
    """Binary matrix of ``k`` row-blocks of size ``n``, one 1 per block per column.

    ``positions[c, i]`` is the 0-based row offset, inside block ``i``, of
    column ``c``'s single 1 in that block.
    """

    k: int
    n: int
    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        if pos.ndim != 2 or pos.shape[1] != self.k:
            raise ShapeMismatch(f"positions must have shape (M, {self.k}), got {pos.shape}")
        if pos.size and (pos.min() < 0 or pos.max() >= self.n):
            raise InvalidParams(f"positions must lie in [0, {self.n})")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def M(self) -> int:
        return self.positions.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.k * self.n, self.M)

    def __eq__(self, other):
        if not isinstance(other, BlockBinaryMatrix):
            return NotImplemented
        return (self.k, self.n) == (other.k, other.n) and np.array_equal(
            self.positions, other.positions
        )

    def __len__(self):
        return self.M

    def column(self, c: int) -> np.ndarray:
        return self.positions[c]

    def row_indices(self) -> np.ndarray:
        """Global row index of each 1, shape ``(M, k)``."""
        return self.positions + self.n * np.arange(self.k)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape, dtype=np.int8)
        cols = np.repeat(np.arange(self.M), self.k)
        dense[self.row_indices().ravel(), cols] = 1
        return dense

    def density(self) -> Fraction:
        rows, cols = self.shape
        return Fraction(int(self.to_dense().sum()), rows * cols)

    def truncate(self, k: int) -> "BlockBinaryMatrix":
        if not 1 <= k <= self.k:
            raise InvalidParams(f"cannot keep {k} of {self.k} blocks")
        return BlockBinaryMatrix(k, self.n, self.positions[:, :k])

    def hstack(self, *others: "BlockBinaryMatrix") -> "BlockBinaryMatrix":
        for o in others:
            if (o.k, o.n) != (self.k, self.n):
                raise ShapeMismatch("column concatenation needs identical (k, n)")
        return BlockBinaryMatrix(
            self.k, self.n, np.vstack([self.positions] + [o.positions for o in others])
        )

    def max_intersection(self, other: "BlockBinaryMatrix | None" = None) -> int:
        """Largest column intersection between distinct columns.

        With ``other`` given, the maximum runs over all cross pairs instead.
        """
        a = self.positions
        b = a if other is None else other.positions
        if other is not None and (other.k, other.n) != (self.k, self.n):
            raise ShapeMismatch("intersection needs identical (k, n)")
        counts = (a[:, None, :] == b[None, :, :]).sum(axis=2)
        if other is None:
            if self.M < 2:
                return 0
            np.fill_diagonal(counts, -1)
        return int(counts.max()) if counts.size else 0


def build_skeleton(P: SparsePolynomial, f: FieldSpec, k: int) -> BlockBinaryMatrix:
    """The skeleton V^P: ``k`` blocks of size ``q``, ``q`` columns.

    Column ``j`` holds, in block ``m``, a 1 at the position of
    ``P(f_m) + f_j`` in the element enumeration.
    """
    if P.field != f:
        raise InvalidParams("polynomial is defined over a different field")
    r = P.degree_bound
    if not r < k <= f.q:
        raise InvalidParams(f"need r < k <= q, got r={r}, k={k}, q={f.q}")
    values = [eval_poly(P, x) for x in range(k)]
    pos = [[f.add(v, fj) for v in values] for fj in range(f.q)]
    return BlockBinaryMatrix(k, f.q, np.array(pos, dtype=np.int64))


def column_intersection(u, w) -> int:
    """Number of blocks in which two skeleton columns share their 1."""
    u = np.asarray(u)
    w = np.asarray(w)
    if u.shape != w.shape:
        raise ShapeMismatch(f"columns of different block counts: {u.shape} vs {w.shape}")
    return int(np.count_nonzero(u == w))


def compose(A: BlockBinaryMatrix, B: BlockBinaryMatrix, k: int) -> BlockBinaryMatrix:
    """Composition ``A * B`` keeping the first ``k`` blocks of each input.

    The result has ``k`` blocks of size ``A.n * B.n`` and ``A.M * B.M``
    columns, ordered with the column of ``A`` varying slowest.
    """
    if not 1 <= k <= min(A.k, B.k):
        raise InvalidParams(f"k={k} exceeds block counts ({A.k}, {B.k})")
    a = A.positions[:, None, :k]
    b = B.positions[None, :, :k]
    pos = (a * B.n + b).reshape(A.M * B.M, k)
    return BlockBinaryMatrix(k, A.n * B.n, pos)


def compose_chain(mats, k: int) -> BlockBinaryMatrix:
    """Left fold of :func:`compose` over ``mats``."""
    mats = list(mats)
    if not mats:
        raise EmptyList("compose_chain needs at least one matrix")
    return reduce(lambda acc, nxt: compose(acc, nxt, k), mats[1:], mats[0].truncate(k))
