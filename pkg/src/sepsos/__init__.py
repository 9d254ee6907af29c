"""Exact Hermitian sum-of-squares certificates, positive maps and separability tests."""

from .kernels import BACKEND
from .linalg import HermitianMatrix, rational_psd_check, solve_linear_exact
from .maps import KrausSet, MatrixMap, biquadratic_to_map, decomposable_from, map_to_biquadratic
from .poly import HermitianPolynomial, Poly, RealPolynomial, dehomogenize, realify
from .scalars import GaussQ
from .sdp import SdpProblem, minimize, solve
from .sos import (
    GramBasis,
    GramCertificate,
    MomentCertificate,
    candidate_basis,
    real_sos_check,
    sos_check,
    sos_to_decomposable,
    verify_gram,
    verify_moment,
)
from .states import DensityMatrix, partial_transpose, ppt_check, random_separable
from .zeros import ZeroCurve, prove_not_sos

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensityMatrix",
    "GaussQ",
    "GramBasis",
    "GramCertificate",
    "HermitianMatrix",
    "HermitianPolynomial",
    "KrausSet",
    "MatrixMap",
    "MomentCertificate",
    "Poly",
    "RealPolynomial",
    "SdpProblem",
    "ZeroCurve",
    "biquadratic_to_map",
    "candidate_basis",
    "decomposable_from",
    "dehomogenize",
    "map_to_biquadratic",
    "minimize",
    "partial_transpose",
    "ppt_check",
    "prove_not_sos",
    "random_separable",
    "rational_psd_check",
    "real_sos_check",
    "realify",
    "solve",
    "solve_linear_exact",
    "sos_check",
    "sos_to_decomposable",
    "verify_gram",
    "verify_moment",
]
