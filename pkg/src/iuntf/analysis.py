"""Frame measurements and sparse-recovery guarantee calculators.

All measurement functions accept either a :class:`StructuredFrame` or a
dense 2-D array whose columns are the frame vectors.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import BadOrder, DomainError, NotSorted, NumericalFailure, TooFewColumns
from .frame import StructuredFrame

# Column chunk for Gram scans; bounds peak memory to chunk * M entries.
GRAM_CHUNK = 256


def _dense(F) -> np.ndarray:
    if isinstance(F, StructuredFrame):
        return F.to_dense()
    A = np.asarray(F)
    if A.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got shape {A.shape}")
    return A


def coherence(F, chunk: int = GRAM_CHUNK) -> float:
    """Largest ``|<phi_i, phi_j>|`` over distinct normalized columns.

    Exhaustive scan of the Gram matrix, one block of rows at a time.
    """
    A = _dense(F)
    M = A.shape[1]
    if M < 2:
        raise TooFewColumns("coherence needs at least two columns")
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise DomainError("frame has a zero column")
    A = A / norms
    AH = A.conj().T
    best = 0.0
    for start in range(0, M, chunk):
        stop = min(start + chunk, M)
        G = np.abs(AH[start:stop] @ A)
        G[np.arange(stop - start), np.arange(start, stop)] = 0.0
        best = max(best, float(G.max()))
    return best


def frame_bounds(F) -> tuple[float, float]:
    """Extreme eigenvalues ``(A, B)`` of the frame operator ``Phi Phi^*``."""
    A = _dense(F)
    try:
        eig = np.linalg.eigvalsh(A @ A.conj().T)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    return float(eig[0]), float(eig[-1])


def frame_operator_eigenvalues(F) -> np.ndarray:
    A = _dense(F)
    try:
        return np.linalg.eigvalsh(A @ A.conj().T)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc


def density(F) -> Fraction:
    """Fraction of nonzero entries, as an exact ratio."""
    if isinstance(F, StructuredFrame):
        return F.density()
    A = np.asarray(F)
    return Fraction(int(np.count_nonzero(A)), A.size)


def is_mub(F, tol: float = 1e-12, basis_size: int | None = None) -> bool:
    """True iff every cross-basis pair has ``|<b, b'>|^2 = 1/d`` within ``tol``.

    A structured frame is split into its ``Q`` bases; a dense matrix is split
    into consecutive groups of ``basis_size`` columns (default: row count).
    A matrix whose column count is not a multiple of the basis size is not a
    union of bases and yields ``False``.
    """
    A = _dense(F)
    d = A.shape[0]
    size = F.d if isinstance(F, StructuredFrame) else (basis_size or d)
    M = A.shape[1]
    if M % size:
        return False
    target = 1.0 / size
    AH = A.conj().T
    for b in range(M // size - 1):
        start, stop = b * size, (b + 1) * size
        G = AH[start:stop] @ A[:, stop:]
        if np.max(np.abs(np.abs(G) ** 2 - target)) > tol:
            return False
    return True


@dataclass
class FrameReport:
    coherence: float
    lower_bound: float
    upper_bound: float
    density: Fraction
    Q: int
    is_mub: bool
    coherence_bound: float | None = None
    d: int = 0
    M: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["density"] = f"{self.density.numerator}/{self.density.denominator}"
        out["density_value"] = float(self.density)
        return out


def analyze(F, basis_size: int | None = None) -> FrameReport:
    """Coherence, frame bounds, density, MUB flag and the ``min(r a^2, 1)`` bound."""
    A_, B_ = frame_bounds(F)
    if isinstance(F, StructuredFrame):
        d, M, Q, bound = F.d, F.n_columns, F.Q, F.coherence_bound
    else:
        arr = np.asarray(F)
        d, M = arr.shape
        size = basis_size or d
        Q, bound = (M // size if M % size == 0 else 0), None
    return FrameReport(
        coherence=coherence(F),
        lower_bound=A_,
        upper_bound=B_,
        density=density(F),
        Q=Q,
        is_mub=is_mub(F, basis_size=basis_size),
        coherence_bound=bound,
        d=d,
        M=M,
    )


# --- recovery guarantees ----------------------------------------------------

def _check_mu(mu) -> None:
    if not 0 < mu <= 1:
        raise DomainError(f"coherence must lie in (0, 1], got {mu}")


def _largest_int_below(bound) -> int:
    """Largest integer strictly below ``bound``.

    Float bounds within 1e-9 (relative) of an integer are snapped to it, so a
    measured ``mu = 0.2000000000000001`` behaves like ``1/5``.
    """
    if isinstance(bound, Rational):
        return math.ceil(bound) - 1
    nearest = round(bound)
    if abs(bound - nearest) <= 1e-9 * max(1.0, abs(bound)):
        return int(nearest) - 1
    return math.floor(bound)


def guarantee_general(mu) -> int:
    """Largest ``s`` with ``s < (1 + 1/mu) / 2``."""
    _check_mu(mu)
    bound = (1 + 1 / Fraction(mu)) / 2 if isinstance(mu, Rational) else (1 + 1 / mu) / 2
    return max(0, _largest_int_below(bound))


def guarantee_union(mu, Q: int) -> int:
    """Largest ``s`` with ``s < (sqrt(2) - 1 + 1/(2(Q-1))) / mu`` (union of ``Q`` bases)."""
    _check_mu(mu)
    if Q < 2:
        raise DomainError(f"union bound needs Q >= 2, got {Q}")
    bound = (math.sqrt(2) - 1 + 1 / (2 * (Q - 1))) / float(mu)
    return max(0, _largest_int_below(bound))


def check_mixed_support(mu, s_list) -> bool:
    """Mixed-support recovery condition for a union of bases.

    ``s_list[i]`` is the number of atoms drawn from basis ``i`` (ascending).
    Holds when ``sum_{i>=2} mu s_i / (1 + mu s_i) < 1 / (2 (1 + mu s_1))``.
    """
    s = list(s_list)
    if not s:
        raise DomainError("need at least one support size")
    if any(x < 0 for x in s):
        raise DomainError("support sizes must be nonnegative")
    if any(a > b for a, b in zip(s, s[1:])):
        raise NotSorted(f"support sizes must be ascending, got {s}")
    if mu < 0:
        raise DomainError(f"coherence must be nonnegative, got {mu}")
    lhs = sum(mu * x / (1 + mu * x) for x in s[1:])
    rhs = 1 / (2 * (1 + mu * s[0]))
    return lhs < rhs


def check_two_basis(mu, s1: int, s2: int) -> bool:
    """Two-basis condition ``2 mu^2 s1 s2 + mu s2 < 1`` (needs ``s1 <= s2``)."""
    if s1 > s2:
        raise BadOrder(f"need s1 <= s2, got {s1} > {s2}")
    if s1 < 0 or mu < 0:
        raise DomainError("mu and support sizes must be nonnegative")
    return 2 * mu * mu * s1 * s2 + mu * s2 < 1


@dataclass
class GuaranteeReport:
    mu: float
    Q: int
    s_general: int
    s_union: int | None
    mixed_support: bool | None = None
    two_basis: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def guarantees(mu, Q: int, s_list=None) -> GuaranteeReport:
    """Every applicable guarantee for coherence ``mu`` and ``Q`` bases."""
    report = GuaranteeReport(
        mu=float(mu),
        Q=Q,
        s_general=guarantee_general(mu),
        s_union=guarantee_union(mu, Q) if Q >= 2 else None,
    )
    if s_list:
        s = list(s_list)
        report.mixed_support = check_mixed_support(mu, s)
        if len(s) == 2:
            report.two_basis = check_two_basis(mu, s[0], s[1])
    return report
