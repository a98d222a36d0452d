"""Closed-form evaluators: hypergeometric determinants, Toeplitz forms and Pfaffians."""
from .context import ClosedFormContext, c_factor, g_factor
from .determinantal import (
    rescale_pair,
    spectrum_of_product,
    zfh1,
    zfh1_matrices,
    zfh2,
    zfh2_matrices,
    zis1,
    zis1_matrices,
    zis2,
    zis2_matrices,
)
from .pfaffian_forms import (
    CONVENTIONS,
    QuadratureRule,
    WeightSpec,
    de_bruijn_check,
    e_kernel,
    f_kernel,
    j_pfaffian,
    kernel_matrices,
    schur_pfaff_check,
    schur_pfaff_matrix,
)
from .toeplitz import NORMALIZATIONS, cor_tw, fh_standard, tw_coefficient

__all__ = [
    "ClosedFormContext",
    "QuadratureRule",
    "WeightSpec",
    "CONVENTIONS",
    "NORMALIZATIONS",
    "c_factor",
    "g_factor",
    "zis1",
    "zis2",
    "zfh1",
    "zfh2",
    "zis1_matrices",
    "zis2_matrices",
    "zfh1_matrices",
    "zfh2_matrices",
    "spectrum_of_product",
    "rescale_pair",
    "cor_tw",
    "fh_standard",
    "tw_coefficient",
    "e_kernel",
    "f_kernel",
    "kernel_matrices",
    "j_pfaffian",
    "schur_pfaff_check",
    "schur_pfaff_matrix",
    "de_bruijn_check",
]
