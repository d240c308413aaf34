"""SC/SCL decoding of extended Reed-Solomon codes via n binary polar codes."""

from .galois import FieldSpec, field_new
from .ers_code import ErsCode, code_new, encode_matrix, encode_poly
from .transform import (Permutation, PreTransform, d_set, encode_via_transform, gp_matrix,
                        make_permutation, pretransform, rank_submatrix)
from .decoder import sc_decode, sc_decode_batch, scl_decode, scl_decode_batch
from .analysis import SubchannelProfile, ga_profile, lower_bound, mc_profile, sc_error_prob

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "field_new", "ErsCode", "code_new", "encode_matrix", "encode_poly",
    "Permutation", "PreTransform", "d_set", "encode_via_transform", "gp_matrix",
    "make_permutation", "pretransform", "rank_submatrix", "sc_decode", "sc_decode_batch",
    "scl_decode", "scl_decode_batch", "SubchannelProfile", "ga_profile", "lower_bound",
    "mc_profile", "sc_error_prob",
]
