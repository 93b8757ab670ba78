"""Orthogonal matching pursuit and the recovery-trial harness."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InvalidSparsity, ParameterError, SingularSupport, ZeroSignal
from .frame import StructuredFrame

log = logging.getLogger(__name__)

SNR_CAP_DB = 300.0
DEFAULT_THRESHOLD_DB = 100.0


def as_matrix(Phi) -> np.ndarray:
    if isinstance(Phi, StructuredFrame):
        return Phi.to_dense()
    A = np.asarray(Phi)
    if A.ndim != 2:
        raise ParameterError(f"expected a 2-D matrix, got shape {A.shape}")
    return A


@dataclass
class OMPResult:
    estimate: np.ndarray
    support: list[int]  # in selection order
    residual_norms: list[float]  # before the first and after each iteration
    residual: np.ndarray

    @property
    def iterations(self) -> int:
        return len(self.support)


def omp(Phi, y, s: int, rank_tol: float = 1e-10) -> OMPResult:
    """Run exactly ``s`` OMP iterations on ``y ~ Phi x``.

    Each step picks the unselected column with the largest ``|<r, phi_j>|``
    (lowest index on ties), then projects ``y`` onto the selected columns
    through an incrementally updated QR factorization.

    Raises
    ------
    InvalidSparsity
        If ``s`` is not in ``[1, min(rows, cols)]``.
    SingularSupport
        If the selected columns are numerically dependent (smallest singular
        value below ``rank_tol`` times the largest).
    """
    A = as_matrix(Phi)
    d, M = A.shape
    if not 1 <= s <= min(d, M):
        raise InvalidSparsity(f"sparsity {s} outside [1, {min(d, M)}]")
    y = np.asarray(y)
    dtype = np.result_type(A.dtype, y.dtype, np.float64)
    y = y.astype(dtype)

    AH = A.conj().T
    Qf = np.zeros((d, s), dtype=dtype)
    R = np.zeros((s, s), dtype=dtype)
    available = np.ones(M, dtype=bool)
    support: list[int] = []
    residual = y.copy()
    norms = [float(np.linalg.norm(residual))]

    for t in range(s):
        corr = np.abs(AH @ residual)
        corr[~available] = -1.0
        j = int(np.argmax(corr))
        support.append(j)
        available[j] = False

        # Gram-Schmidt against the current basis, repeated once for stability.
        v = A[:, j].astype(dtype)
        coeffs = np.zeros(t, dtype=dtype)
        for _ in range(2):
            c = Qf[:, :t].conj().T @ v
            v = v - Qf[:, :t] @ c
            coeffs += c
        R[:t, t] = coeffs
        R[t, t] = np.linalg.norm(v)
        sv = np.linalg.svd(R[: t + 1, : t + 1], compute_uv=False)
        if sv[-1] <= rank_tol * sv[0]:
            raise SingularSupport(f"selected columns {support} are numerically dependent")
        Qf[:, t] = v / R[t, t]

        Qt = Qf[:, : t + 1]
        residual = y - Qt @ (Qt.conj().T @ y)
        norms.append(float(np.linalg.norm(residual)))

    coef = solve_triangular(R, Qf.conj().T @ y)
    estimate = np.zeros(M, dtype=dtype)
    estimate[support] = coef
    return OMPResult(estimate, support, norms, residual)


@dataclass
class SparseSignal:
    M: int
    support: np.ndarray
    values: np.ndarray

    @property
    def s(self) -> int:
        return len(self.support)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.M, dtype=self.values.dtype)
        x[self.support] = self.values
        return x


def random_sparse_signal(M: int, s: int, rng) -> SparseSignal:
    """Uniform random support of size ``s``, i.i.d. standard normal values."""
    if not 1 <= s <= M:
        raise InvalidSparsity(f"sparsity {s} outside [1, {M}]")
    rng = np.random.default_rng(rng)
    support = np.sort(rng.choice(M, size=s, replace=False))
    return SparseSignal(M, support, rng.standard_normal(s))


def snr_db(x, x_hat, cap: float = SNR_CAP_DB) -> float:
    """``10 log10(||x|| / ||x_hat - x||)``, capped at ``cap`` dB.

    Note the ratio of norms is not squared.
    """
    x = np.asarray(x)
    nx = float(np.linalg.norm(x))
    if nx == 0:
        raise ZeroSignal("SNR of the zero signal is undefined")
    err = float(np.linalg.norm(np.asarray(x_hat) - x))
    if err == 0:
        return cap
    return min(cap, 10.0 * math.log10(nx / err))


@dataclass
class RecoveryOutcome:
    estimate: np.ndarray
    snr_db: float
    exact: bool
    iterations: int
    support: list[int] = field(default_factory=list)


def recover(Phi, signal: SparseSignal, threshold_db: float = DEFAULT_THRESHOLD_DB) -> RecoveryOutcome:
    """Measure ``signal`` with ``Phi`` and reconstruct it by OMP at its true sparsity."""
    A = as_matrix(Phi)
    x = signal.to_dense()
    res = omp(A, A @ x, signal.s)
    snr = snr_db(x, res.estimate)
    return RecoveryOutcome(res.estimate, snr, snr > threshold_db, res.iterations, res.support)


def trial_rng(seed: int, s: int, i: int) -> np.random.Generator:
    """Generator for trial ``i`` at sparsity ``s``; independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([seed, s, i]))


@dataclass
class TrialStats:
    s: int
    trials: int
    successes: int
    mean_snr_db: float
    singular: int = 0

    @property
    def rate(self) -> float:
        return self.successes / self.trials


def run_trials(
    Phi,
    s: int,
    trials: int,
    seed: int,
    threshold_db: float = DEFAULT_THRESHOLD_DB,
    on_singular: str = "raise",
    workers: int = 1,
) -> TrialStats:
    """Seeded OMP recovery trials at a single sparsity level.

    ``on_singular="fail"`` counts a :class:`SingularSupport` trial as a failed
    recovery (excluded from the mean SNR) instead of propagating it.
    """
    if trials < 1:
        raise ParameterError("need at least one trial")
    if on_singular not in ("raise", "fail"):
        raise ParameterError(f"on_singular must be 'raise' or 'fail', got {on_singular!r}")
    A = as_matrix(Phi)
    M = A.shape[1]

    def one(i: int):
        sig = random_sparse_signal(M, s, trial_rng(seed, s, i))
        try:
            return recover(A, sig, threshold_db).snr_db
        except SingularSupport:
            if on_singular == "raise":
                raise
            log.debug("singular support at s=%d trial %d", s, i)
            return None

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            snrs = list(pool.map(one, range(trials)))
    else:
        snrs = [one(i) for i in range(trials)]

    done = [v for v in snrs if v is not None]
    successes = sum(v > threshold_db for v in done)
    mean = math.fsum(done) / len(done) if done else float("nan")
    return TrialStats(s, trials, successes, mean, trials - len(done))


def success_rate(
    Phi,
    s: int,
    trials: int,
    seed: int,
    threshold_db: float = DEFAULT_THRESHOLD_DB,
    **kwargs,
) -> float:
    """Fraction of seeded trials recovered with SNR above ``threshold_db``."""
    return run_trials(Phi, s, trials, seed, threshold_db, **kwargs).rate
