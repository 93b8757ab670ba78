"""Structured frames: unions of orthonormal bases built from skeletons.

Embedding a ``k x k`` unitary ``U`` into a skeleton replaces the single 1
of block ``i`` in a skeleton column with row ``i`` of ``U``; the ``k``
entries of that row are spread over ``k`` new frame columns.  Frame column
``(j, l)`` therefore has the value ``U[i, l]`` at the block-``i`` row of
skeleton column ``j``, and nothing else.

For ``m = q_1 q_2 ... q_t`` (maximal prime-power factors) every tuple of
polynomials ``(P_1, ..., P_t)`` gives one skeleton chain and hence one
orthonormal basis of dimension ``d = m k``.  Bases are concatenated in
lexicographic order of the tuple, first factor slowest.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidParams, NotUnitary, ParseError, ShapeMismatch, TooLarge
from .finite_field import field_of_order
from .skeleton import BlockBinaryMatrix, build_skeleton, compose_chain, enumerate_polynomials
from .unitary import UnitaryMatrix, is_unitary, max_abs_entry

DEFAULT_MAX_DENSE_ENTRIES = 2**24


def prime_power_factors(m: int) -> tuple[int, ...]:
    """Maximal prime-power factors of ``m``, by ascending prime (12 -> (4, 3))."""
    if m < 2:
        raise InvalidParams(f"m must be >= 2, got {m}")
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            q = 1
            while m % d == 0:
                m //= d
                q *= d
            out.append(q)
        d += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def max_admissible_k(m: int) -> int:
    return min(prime_power_factors(m))


@dataclass(frozen=True, eq=False)
class StructuredFrame:
    """A ``d x (d Q)`` union of ``Q`` orthonormal bases stored by column.

    ``rows[c]`` and ``values[c]`` list the ``k`` nonzeros of column ``c``
    (rows ascending).  Columns ``b*d .. (b+1)*d - 1`` form basis ``b``.
    """

    rows: np.ndarray
    values: np.ndarray
    d: int
    Q: int
    m: int
    k: int
    r: int
    factors: tuple[int, ...] = ()
    unitary_kind: str = "custom"
    alpha: float = float("nan")
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.complex128)
        if rows.shape != vals.shape or rows.ndim != 2:
            raise ShapeMismatch("rows and values must be equal-shape 2-D arrays")
        if rows.shape[0] != self.d * self.Q:
            raise ShapeMismatch(f"expected {self.d * self.Q} columns, got {rows.shape[0]}")
        rows.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "values", vals)

    @property
    def n_columns(self) -> int:
        return self.rows.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.d, self.n_columns)

    @property
    def nnz_per_column(self) -> int:
        return self.rows.shape[1]

    @property
    def is_real(self) -> bool:
        return not np.any(self.values.imag)

    @property
    def coherence_bound(self) -> float:
        """``min(r alpha^2, 1)``."""
        return min(self.r * self.alpha**2, 1.0)

    def nnz(self) -> int:
        return int(np.count_nonzero(self.values))

    def density(self) -> Fraction:
        return Fraction(self.nnz(), self.d * self.n_columns)

    def to_dense(self, max_entries: int = DEFAULT_MAX_DENSE_ENTRIES) -> np.ndarray:
        return frame_to_dense(self, max_entries)

    def __array__(self, dtype=None, copy=None):
        a = self.to_dense()
        return a if dtype is None else a.astype(dtype)

    def basis(self, b: int) -> np.ndarray:
        if not 0 <= b < self.Q:
            raise IndexError(f"basis {b} out of range [0, {self.Q})")
        sl = slice(b * self.d, (b + 1) * self.d)
        return _columns_to_dense(self.rows[sl], self.values[sl], self.d)

    def metadata(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "r": self.r,
            "d": self.d,
            "Q": self.Q,
            "M": self.n_columns,
            "factors": list(self.factors),
            "unitary": self.unitary_kind,
            "alpha": self.alpha,
            "coherence_bound": self.coherence_bound,
        }

    @classmethod
    def from_dense(cls, A, **meta) -> "StructuredFrame":
        """Re-sparsify a dense frame (every column must share one nonzero count)."""
        A = np.asarray(A, dtype=np.complex128)
        nz = A != 0
        counts = nz.sum(axis=0)
        if counts.size == 0 or np.any(counts != counts[0]):
            raise ParseError("columns have differing nonzero counts")
        kk = int(counts[0])
        rows = np.sort(np.nonzero(nz.T)[1].reshape(-1, kk), axis=1)
        vals = np.take_along_axis(A.T, rows, axis=1)
        d = A.shape[0]
        meta.setdefault("Q", A.shape[1] // d)
        meta.setdefault("m", d // kk)
        meta.setdefault("k", kk)
        meta.setdefault("r", 0)
        return cls(rows, vals, d=d, **meta)


def _columns_to_dense(rows: np.ndarray, values: np.ndarray, d: int) -> np.ndarray:
    n = rows.shape[0]
    out = np.zeros((d, n), dtype=np.complex128)
    cols = np.repeat(np.arange(n), rows.shape[1])
    out[rows.ravel(), cols] = values.ravel()
    return out


def embed(V: BlockBinaryMatrix, U) -> tuple[np.ndarray, np.ndarray]:
    """Replace each 1 of ``V`` by a row of ``U``; zeros become zero rows.

    Returns ``(rows, values)``, each of shape ``(V.M * k, k)``: frame column
    ``j*k + l`` takes value ``U[i, l]`` at the block-``i`` row of skeleton
    column ``j``.
    """
    a = np.asarray(U, dtype=np.complex128)
    if a.shape != (V.k, V.k):
        raise ShapeMismatch(f"unitary of shape {a.shape} does not match {V.k} blocks")
    if not is_unitary(a, 1e-10):
        raise NotUnitary("embedding needs a unitary matrix (tolerance 1e-10)")
    rows = np.repeat(V.row_indices(), V.k, axis=0)
    values = np.tile(a.T, (V.M, 1))
    return rows, values


def build_frame(m: int, k: int, r: int, U, basis_unitaries=None) -> StructuredFrame:
    """Union of ``m**r`` orthonormal bases of dimension ``m k``.

    Parameters
    ----------
    m, k, r : int
        Need ``1 <= r < k <= min(prime-power factors of m)``.
    U : UnitaryMatrix or array
        ``k x k`` unitary shared by all bases.
    basis_unitaries : callable, optional
        ``basis_unitaries(b)`` returns the unitary for basis ``b``, overriding
        ``U`` per basis.
    """
    factors = prime_power_factors(m)
    kmax = min(factors)
    if r < 1:
        raise InvalidParams(f"r must be >= 1, got {r}")
    if not r < k <= kmax:
        raise InvalidParams(
            f"need r < k <= {kmax} (smallest prime-power factor of m={m}), got r={r}, k={k}"
        )
    kind = getattr(U, "kind", "custom")
    if np.asarray(U).shape != (k, k):
        raise InvalidParams(f"unitary must be {k}x{k}")

    per_factor = []
    for q in factors:
        F = field_of_order(q)
        per_factor.append([build_skeleton(P, F, k) for P in enumerate_polynomials(F, r)])

    all_rows, all_vals = [], []
    alpha = 0.0
    for b, chain in enumerate(itertools.product(*per_factor)):
        Ub = U if basis_unitaries is None else basis_unitaries(b)
        rows, vals = embed(compose_chain(chain, k), Ub)
        all_rows.append(rows)
        all_vals.append(vals)
        if b == 0 or basis_unitaries is not None:
            alpha = max(alpha, max_abs_entry(Ub))
    if basis_unitaries is not None:
        kind = "per-basis"

    return StructuredFrame(
        np.concatenate(all_rows),
        np.concatenate(all_vals),
        d=m * k,
        Q=m**r,
        m=m,
        k=k,
        r=r,
        factors=factors,
        unitary_kind=kind,
        alpha=alpha,
    )


def frame_to_dense(F: StructuredFrame, max_entries: int = DEFAULT_MAX_DENSE_ENTRIES) -> np.ndarray:
    total = F.d * F.n_columns
    if total > max_entries:
        raise TooLarge(f"dense frame would have {total} entries (cap {max_entries})")
    dense = _columns_to_dense(F.rows, F.values, F.d)
    return dense.real.copy() if F.is_real else dense


def gaussian_frame(d: int, M: int, seed: int) -> np.ndarray:
    """i.i.d. standard normal ``d x M`` matrix with unit-norm columns."""
    if d < 1 or M < 1:
        raise InvalidParams("d and M must be positive")
    G = np.random.default_rng(seed).standard_normal((d, M))
    return G / np.linalg.norm(G, axis=0, keepdims=True)


def frame_shape(m: int, k: int, r: int) -> tuple[int, int]:
    d = m * k
    return d, d * m**r


__all__ = [
    "StructuredFrame",
    "UnitaryMatrix",
    "build_frame",
    "embed",
    "frame_shape",
    "frame_to_dense",
    "gaussian_frame",
    "max_admissible_k",
    "prime_power_factors",
]
