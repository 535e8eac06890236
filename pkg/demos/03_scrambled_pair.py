# Build p_beta and p_gamma for two Sturmian slopes and look at their late cylinders.
import warnings

from omega_scramble import (RecurrenceParams, construct_pair, default_params, e_beta_witness, is_in_E,
                            omega_cylinders, sturmian_sequence, verify_exclusion, verify_scramble_pair)
from omega_scramble.family import GOLDEN, SILVER, divergence_length

warnings.simplefilter("ignore")
params = default_params()
print(f"epsilon = {params.epsilon}, N = {params.N}, P = {params.P}, M = {params.M}")

beta, gamma = sturmian_sequence(SILVER), sturmian_sequence(GOLDEN)
w = e_beta_witness(beta, params)
print("E_beta witness:", "".join(map(str, w.word(0, 65))))
print("member at depth 50:", is_in_E(w, beta, params, 50).member)
print("member of E_gamma: ", is_in_E(w, gamma, params, 50))

rp = RecurrenceParams(horizon=100_000)
pb, eb, pg, eg = construct_pair(beta, gamma, params)
report = verify_scramble_pair(pb, pg, params, (13, 26, 39, 52, 65), rp)
for K, (only_b, only_g) in report.exclusive_counts.items():
    print(f"K = {K:3d}: |omega_K(p_beta)| = {len(omega_cylinders(pb, K, rp)):4d}, exclusive {only_b} / {only_g}")

# both slope languages contain every word of length <= 4, so short cylinders cannot tell them apart
L = divergence_length(beta, gamma)
K = params.stride * L
pb, eb, pg, eg = construct_pair(beta, gamma, params, shift_depth=L)
print(f"first length with no common factor: {L}; at K = {K}:")
print("  H_beta entries avoid omega(p_gamma):", verify_exclusion(pg, eb, K, rp))
print("  H_gamma entries avoid omega(p_beta):", verify_exclusion(pb, eg, K, rp))
print("  H_beta entries recur in p_beta:     ", not verify_exclusion(pb, eb, K, rp))
