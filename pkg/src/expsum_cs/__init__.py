"""Flat random exponential sums on Z_N, their tail bounds, and l1 recovery from partial Fourier data."""

__version__ = "0.1.0"

from .errors import InvalidModulusError, InvalidParameterError
from .group_fourier import CyclicIndex, Signal, Spectrum, dft, idft, norms, a_norm
from .exp_sums import (
    FrequencyDraw,
    ContinuousDraw,
    KernelProfile,
    exp_sum_discrete,
    kernel_profile,
    certificate_check,
    moment_exact,
    j_moment,
    mgf_discrete,
    rotated_mgf,
)
from .recovery import MeasurementSet, RecoveryResult, measure, basis_pursuit, verify_alpha

__all__ = [
    "InvalidModulusError",
    "InvalidParameterError",
    "CyclicIndex",
    "Signal",
    "Spectrum",
    "dft",
    "idft",
    "norms",
    "a_norm",
    "FrequencyDraw",
    "ContinuousDraw",
    "KernelProfile",
    "exp_sum_discrete",
    "kernel_profile",
    "certificate_check",
    "moment_exact",
    "j_moment",
    "mgf_discrete",
    "rotated_mgf",
    "MeasurementSet",
    "RecoveryResult",
    "measure",
    "basis_pursuit",
    "verify_alpha",
]
