"""Constructive omega-chaos in binary shift spaces.

Scrambled points ``p_beta`` are built from the specification property of the
full shift and checked through finite-depth omega-limit proxies.
"""
from .core import (BINARY, Alphabet, ExpansivityParams, SymbolicSequence, constant, dist, dist_bounds,
                   exact_dist, factor_complexity, from_string, least_period_upto, periodic, prepend,
                   shift, sturmian)
from .family import (FamilyCertificate, SturmianSpec, generate_family, orbit_disjointness_proxy,
                     sturmian_sequence)
from .omega import (RecurrenceParams, ScrambleReport, omega_cylinders, recurs, verify_exclusion,
                    verify_scramble_pair)
from .scramble import (SystemParams, build_p_beta, construct_pair, default_params, derive_params,
                       e_beta_witness, h_beta_proxy, is_in_E)
from .specification import (FillerPolicy, SpecInterval, SpecSchedule, build_isp_witness, build_spec_pattern,
                            relaxation_time)

__all__ = [
    "BINARY", "Alphabet", "ExpansivityParams", "SymbolicSequence", "constant", "dist", "dist_bounds",
    "exact_dist", "factor_complexity", "from_string", "least_period_upto", "periodic", "prepend", "shift",
    "sturmian", "FamilyCertificate", "SturmianSpec", "generate_family", "orbit_disjointness_proxy",
    "sturmian_sequence", "RecurrenceParams", "ScrambleReport", "omega_cylinders", "recurs",
    "verify_exclusion", "verify_scramble_pair", "SystemParams", "build_p_beta", "construct_pair",
    "default_params", "derive_params", "e_beta_witness", "h_beta_proxy", "is_in_E", "FillerPolicy",
    "SpecInterval", "SpecSchedule", "build_isp_witness", "build_spec_pattern", "relaxation_time",
]
