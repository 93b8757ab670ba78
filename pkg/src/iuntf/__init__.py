"""Incoherent unit-norm tight frames as unions of orthonormal bases.

Frames are built from polynomials over finite fields (prime-power sizes)
and a block-wise composition rule for binary matrices (composite sizes),
then checked exactly and benchmarked with orthogonal matching pursuit.
"""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    FrameReport,
    GuaranteeReport,
    analyze,
    check_mixed_support,
    check_two_basis,
    coherence,
    density,
    frame_bounds,
    guarantee_general,
    guarantee_union,
    is_mub,
)
from .finite_field import FieldSpec, field_of_order, make_field  # noqa: E402
from .frame import StructuredFrame, build_frame, embed, gaussian_frame  # noqa: E402
from .skeleton import (  # noqa: E402
    BlockBinaryMatrix,
    SparsePolynomial,
    build_skeleton,
    compose,
    compose_chain,
    enumerate_polynomials,
)
from .solver import omp, random_sparse_signal, snr_db, success_rate  # noqa: E402
from .unitary import UnitaryMatrix, dct, dft, hadamard  # noqa: E402

__all__ = [
    "BlockBinaryMatrix",
    "FieldSpec",
    "FrameReport",
    "GuaranteeReport",
    "SparsePolynomial",
    "StructuredFrame",
    "UnitaryMatrix",
    "analyze",
    "build_frame",
    "build_skeleton",
    "check_mixed_support",
    "check_two_basis",
    "coherence",
    "compose",
    "compose_chain",
    "dct",
    "density",
    "dft",
    "embed",
    "enumerate_polynomials",
    "field_of_order",
    "frame_bounds",
    "gaussian_frame",
    "guarantee_general",
    "guarantee_union",
    "hadamard",
    "is_mub",
    "make_field",
    "omp",
    "random_sparse_signal",
    "snr_db",
    "success_rate",
]
