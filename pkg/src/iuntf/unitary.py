"""Small unitary matrices for embedding into skeletons."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import FrameIOError, NotUnitary, ParameterError, ParseError, UnsupportedOrder

log = logging.getLogger(__name__)

UNITARY_KINDS = ("dct", "dft", "hadamard", "identity", "file")


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """A ``k x k`` unitary matrix tagged with how it was generated."""

    entries: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ParameterError(f"unitary must be square and non-empty, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def alpha(self) -> float:
        return max_abs_entry(self)

    @property
    def is_real(self) -> bool:
        return not np.any(self.entries.imag)

    def __getitem__(self, idx):
        return self.entries[idx]


def dct(k: int) -> UnitaryMatrix:
    """Orthonormal DCT-II: ``U[i, j] = c_i cos(pi/k (j + 1/2) i)``.

    ``c_0 = sqrt(1/k)`` and ``c_i = sqrt(2/k)`` otherwise.
    """
    if k < 1:
        raise ParameterError("order must be >= 1")
    i = np.arange(k)[:, None]
    j = np.arange(k)[None, :]
    scale = np.full((k, 1), np.sqrt(2.0 / k))
    scale[0, 0] = np.sqrt(1.0 / k)
    return UnitaryMatrix(scale * np.cos(np.pi / k * (j + 0.5) * i), "dct")


def dft(k: int) -> UnitaryMatrix:
    """Unitary DFT, ``U[i, j] = exp(-2 pi i ij / k) / sqrt(k)``."""
    if k < 1:
        raise ParameterError("order must be >= 1")
    return UnitaryMatrix(scipy.linalg.dft(k, scale="sqrtn"), "dft")


def hadamard(k: int) -> UnitaryMatrix:
    """Sylvester Hadamard matrix of order ``k`` scaled by ``1/sqrt(k)``.

    Only powers of two are supported.
    """
    if k < 1 or k & (k - 1):
        raise UnsupportedOrder(f"Sylvester Hadamard needs a power of two, got {k}")
    return UnitaryMatrix(scipy.linalg.hadamard(k) / np.sqrt(k), "hadamard")


def identity(k: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(k), "identity")


def max_abs_entry(U) -> float:
    """The largest entry modulus (alpha)."""
    return float(np.max(np.abs(np.asarray(U))))


def is_unitary(U, tol: float = 1e-12) -> bool:
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    a = np.asarray(U)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    err = a @ a.conj().T - np.eye(a.shape[0])
    return bool(np.max(np.abs(err)) <= tol)


def make_unitary(kind: str, k: int, path=None) -> UnitaryMatrix:
    """Factory used by the frame builder and the CLI.

    ``hadamard`` falls back to ``dft`` when ``k`` is not a power of two; the
    returned matrix's ``kind`` records what was actually built.
    """
    if kind == "dct":
        return dct(k)
    if kind == "dft":
        return dft(k)
    if kind == "identity":
        return identity(k)
    if kind == "hadamard":
        try:
            return hadamard(k)
        except UnsupportedOrder:
            log.warning("no Sylvester Hadamard of order %d, using DFT instead", k)
            return dft(k)
    if kind == "file":
        if path is None:
            raise ParameterError("unitary kind 'file' needs a path")
        U = load_unitary(path)
        if U.k != k:
            raise ParameterError(f"unitary in {path} has order {U.k}, expected {k}")
        return U
    raise ParameterError(f"unknown unitary kind {kind!r}; choose from {UNITARY_KINDS}")


def load_unitary(path, tol: float = 1e-10) -> UnitaryMatrix:
    """Read a unitary from ``.npy`` or a whitespace-separated text file.

    Text entries may be complex in numpy notation (``0.5+0.5j``).
    """
    path = Path(path)
    try:
        if path.suffix == ".npy":
            a = np.load(path)
        else:
            a = np.loadtxt(path, dtype=np.complex128, ndmin=2)
    except OSError as exc:
        raise FrameIOError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"cannot parse {path}: {exc}") from exc
    if not is_unitary(a, tol):
        raise NotUnitary(f"matrix in {path} is not unitary within {tol}")
    return UnitaryMatrix(a, "file")
