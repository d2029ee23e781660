# Finite quandles: axioms, orbits, Inn, Env, and cohomology over Q.
# Run: python3 demos/02_finite_quandles_and_cohomology.py

from qforge.quandle import dihedral, trivial, conjugation_quandle, check_axioms, components, inner_group_order, env_presentation, component_diameter
from qforge.cohomology import cohomology_dimension, coboundary, Cochain, bounded_comparison_finite
from qforge.linalg import format_abelian

R3, R4, T2 = dihedral(3), dihedral(4), trivial(2)
S3 = conjugation_quandle([(1, 0, 2), (0, 2, 1)])

for name, X in [("R3", R3), ("R4", R4), ("T2", T2), ("Conj(S3)", S3)]:
    rep = check_axioms(X)
    ab = format_abelian(*env_presentation(X).abelianization())
    print(f"{name:9s} {rep.classification:8s} orbits={components(X)} |Inn|={inner_group_order(X)} "
          f"Env^ab={ab} diam={component_diameter(X)}")

# d^1 of the indicator of 0 on R3: (d f)(x,y) = f(x) - f(x*y)
f = Cochain.from_function(R3, 1, lambda x: int(x == 0))
df = coboundary(f)
print("(d f)(0,1) =", df(0, 1))

for name, X in [("R3", R3), ("R4", R4), ("T2", T2), ("Conj(S3)", S3)]:
    dims = [cohomology_dimension(X, n, "quandle") for n in (1, 2)]
    rdims = [cohomology_dimension(X, n, "rack") for n in (1, 2)]
    print(f"{name:9s} quandle H1,H2 = {dims}   rack H1,H2 = {rdims}")

# on a finite carrier every cochain is bounded: the comparison map is the identity
print(bounded_comparison_finite(T2).to_json())
