# Run the lemma registry, then break the instance on purpose.
import warnings

from omega_scramble.config import RunConfig
from omega_scramble.suite import run_suite

result = run_suite(RunConfig(seed=7))
for name, v in result.verdicts.items():
    print(f"{name:17s} {v['verdict']:5s} {v['detail']}")

# an epsilon above the separation bound lets one point sit in two E sets
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    faulty = run_suite(RunConfig(seed=7, epsilon="4", strict=False), ["e-disjointness"])
v = faulty.verdicts["e-disjointness"]
print("\nwith epsilon = 4:", v["verdict"], "-", v["detail"])
print("counterexample keys:", sorted(v["counterexample"]))
