# Free k-quandles and the truncated quandle metric.
# Run: python3 demos/05_k_quandles_and_metric.py

from qforge.words import IDENTITY
from qforge.quandle import free_quandle, free_k_quandle, truncated_eccentricity, truncated_diameter, metric_distance
from qforge.boundedclasses import k_quandle_pipeline

FQ = free_quandle("ab")
for r in (2, 4, 6):
    m = truncated_eccentricity(FQ, (0, IDENTITY), r)
    print(f"FQ(a,b)  radius {r}: eccentricity {m.eccentricity} ({m.reached}/{m.nodes} cosets reached)")

FQ2 = free_k_quandle("ab", 2)      # Env is the infinite dihedral group
for r in (2, 4, 6, 8):
    print(f"FQ2(a,b) radius {r}: diameter {truncated_diameter(FQ2, 0, r, op_radius=None).diameter}")

print("d(<a>, <a>b) in FQ:", metric_distance(FQ, (0, IDENTITY), FQ.element(0, "b")))

for S, k in (("ab", 3), ("abc", 2), ("ab", 2)):
    rep = k_quandle_pipeline(S, k, "ab", n_max=8)
    print(f"FQ_{k}({','.join(S)}): certified={rep.certified} base={rep.base} D<={rep.defect_upper} warnings={rep.warnings}")
