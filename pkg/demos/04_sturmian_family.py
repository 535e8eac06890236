# A certified family of Sturmian slopes sqrt(m) - floor(sqrt(m)).
import json

from omega_scramble import generate_family, orbit_disjointness_proxy, sturmian_sequence

cert = generate_family(4, seed=7, separation="0.01")
for spec, c in zip(cert.members, cert.certificates):
    x = sturmian_sequence(spec)
    print(f"m = {spec.defining['m']:5d}  slope {spec.slope[:14]}  prefix {''.join(map(str, x.word(0, 24)))}"
          f"  complexity {[c.complexity[n] for n in (1, 2, 3, 12)]}")

a, b = cert.members[:2]
print("letter frequencies separate the first two:", orbit_disjointness_proxy(a, b, 10_000))
print(json.dumps(cert.to_json()["pairwise_gaps"], indent=1))
