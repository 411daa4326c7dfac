"""Streaming erasure codes for variable-size messages over burst channels.

The package bundles an online rate-optimal codec for the zero-lossless-delay
regime, a diagonal interleaving codec for the divisible regime, offline
reference schemes, and brute-force oracles that verify every decodability
and rate claim at desk scale.
"""

from .cauchy import CauchyMatrix, SingularMatrixError, build_cauchy, solve, vec_mat
from .channel import (
    all_patterns,
    apply_pattern,
    enumerate_patterns,
    erased_runs,
    is_admissible,
    single_burst_patterns,
)
from .codecs import CODEC_IDS, LinearCodec, VgmsCodec, bind_codec
from .gf import GF, field, is_irreducible
from .model import (
    CodeParams,
    SizeSequence,
    Transcript,
    build_transcript,
    check_delays,
    make_params,
    param_violations,
    random_payload,
    random_sizes,
    stream_rate,
    terminate_sizes,
)
from .oracle import (
    Counterexample,
    check_minimality,
    cumulative_profile,
    decoded_before_burst,
    exhaustive_decode_check,
    lower_bound_profile,
)
from .gap import GapReport, classify_regime, run_gap, sweep_classifier
from .vgms import (
    DecodeFailure,
    DecodeResult,
    VgmsEncoder,
    VgmsLayout,
    decode_stream,
    encode_stream,
    packet_layout,
    parity_budget,
)

__all__ = [
    "CODEC_IDS",
    "CauchyMatrix",
    "CodeParams",
    "Counterexample",
    "DecodeFailure",
    "DecodeResult",
    "GF",
    "GapReport",
    "LinearCodec",
    "SingularMatrixError",
    "SizeSequence",
    "Transcript",
    "VgmsCodec",
    "VgmsEncoder",
    "VgmsLayout",
    "all_patterns",
    "apply_pattern",
    "bind_codec",
    "build_cauchy",
    "build_transcript",
    "check_delays",
    "check_minimality",
    "classify_regime",
    "cumulative_profile",
    "decode_stream",
    "decoded_before_burst",
    "encode_stream",
    "enumerate_patterns",
    "erased_runs",
    "exhaustive_decode_check",
    "field",
    "is_admissible",
    "is_irreducible",
    "lower_bound_profile",
    "make_params",
    "packet_layout",
    "param_violations",
    "parity_budget",
    "random_payload",
    "random_sizes",
    "run_gap",
    "single_burst_patterns",
    "solve",
    "stream_rate",
    "sweep_classifier",
    "terminate_sizes",
    "vec_mat",
]
