"""Python binding smoke tests; run by ctest with PYTHONPATH set."""

import math
import sys

import qoslab


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)
    print("ok:", msg)


sys3 = qoslab.build_system("s3-dual")
check(sys3.kind == "s3-dual" and sys3.dims == [1, 1, 2], "s3 dual builds")

rep = qoslab.verify_orthonormality(sys3)
check(rep["pass"] and rep["max_defect"] <= 1e-12, "exact orthonormality")

check(qoslab.roundtrip_defect(sys3, trials=10, seed=1) <= 1e-10, "round trip")

rad = qoslab.build_system("rademacher:dims=1x4,n=5000", seed=3)
back = qoslab.system_from_json(rad.to_json())
check(back.sample_count == 5000 and back.dims == rad.dims, "json round trip")

est = qoslab.estimate_constants(rad, E="l2:3", method="exact-svd")
check(abs(est["k1_lower"] - 1.0) <= 1e-9 and abs(est["k2_lower"] - 1.0) <= 1e-9,
      "hilbertian constants are 1")

signs = qoslab.estimate_constants(
    qoslab.build_system("rademacher:dims=1x2,n=1000", seed=5),
    E="l1:2", method="exhaustive-signs", budget=4)
check(abs(signs["k1_lower"] - math.sqrt(2.0)) <= 1e-8, "sqrt(2) sign witness")

clt = qoslab.clt([1], h="e11sq", m=[1, 2], n=2000, seed=7)
check(all(abs(r["estimate"] - 1.0) <= 3 * max(r["stderr"], 1e-12) + 0.05
          for r in clt["rows"]), "scalar clt sanity")

wb = qoslab.build_system("walsh-blocked:dims=1,1,2")
approx = qoslab.approximate_deltas(wb, [0.5, 0.25, 0.125])
check(approx["pass"] and approx["supports_disjoint"], "delta approximation")

pis = qoslab.pisier_map(E="l1:2", d=2, map="transpose", budget=1000, seed=9)
check(pis["ratio"] >= 1.0 - 1e-9, "transpose amplification ratio")

try:
    qoslab.estimate_constants(rad, E="l1:2", method="exact-svd")
    check(False, "non-Hilbertian exact-svd should raise")
except qoslab.UnsupportedNormError:
    check(True, "non-Hilbertian exact-svd rejected")

print("python smoke tests passed")
