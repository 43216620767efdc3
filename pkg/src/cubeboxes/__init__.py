"""Disjoint sub-box families of {0,1}^n, their exact Fourier analysis,
symmetric-difference groups and the simplex-to-box encoding."""

from .boxcore import (Box, BoxFamily, FormatError, VerificationError, VerifyReport,
                      double_family, is_disjoint, parse_family, prop, serialize_family,
                      verify_family)
from .cubefourier import (CubeFunction, ProofTrace, Spectrum, convolve, indicator_sum,
                          inverse_transform, proof_trace, transform)
from .extremal import SearchProblem, SearchResult, certify, enumerate_candidates, search
from .setgroups import (GroupReport, SetFamily, check_group, generate_Gv, preimage_group,
                        two_adic_order)
from .simplexgeo import (EncodingResult, Hyperplane, Simplex, encode_boxes,
                         facet_hyperplanes, is_nearly_neighbourly)

__version__ = "0.1.0"
