# From a homogeneous quasimorphism on F(a,b) to a nontrivial bounded class on FQ(a,b).
# Run: python3 demos/03_unbounded_quasimorphism_on_free_quandle.py

from qforge.words import parse_word, format_word, IDENTITY
from qforge.quandle import free_quandle, rack_op
from qforge.quasimorphism import homogenized_counting
from qforge.boundedclasses import build_phi_X, defect_report, growth_certificate, chooser_independence, counting_family, independence_certificate, en_report

X = free_quandle("ab")          # parts (F/<a>, a) and (F/<b>, b)
A = X.alphabet
x, y = (0, IDENTITY), (1, IDENTITY)
print("<a> * <b> =", X.format_element(rack_op(X, x, y)))

phi = homogenized_counting("ab", A)          # vanishes on <a>
pX = build_phi_X(X, phi, part=0)
print("phi_X(<a>bab) =", pX.value((0, parse_word("bab", A))), " base:", format_word(pX.base, A))

# |phi_X(x) - phi_X(x*y)| stays below |phi(z_i0)-phi(z_r)| + 6D ...
r = defect_report(pX, radius=3)
print("coboundary sup on", r.pairs, "pairs:", r.observed, "<=", r.bound)

# ... while phi_X itself grows linearly along powers of the base
g = growth_certificate(pX, n_max=12)
print("growth:", [str(v) for v in g.values])

# changing coset representatives changes phi_X by a bounded eta only
c = chooser_independence(X, phi, 0, "shortest", "shifted", samples=500)
print("max |eta| =", c.eta_max, "<= D =", c.defect)

# five counting classes; random combinations stay unbounded
fam = counting_family(X, ["ab", "aab", "abb", "ab^-1", "aba^-1b^-1"])
ir = independence_certificate(X, fam, coeff_trials=20)
print(f"{ir.witnessed}/20 random combinations unbounded, {ir.inconclusive} inconclusive")

# the permutation rack m*k = m+1: all e_n give the same class
e = en_report([0, 1, 2, 3, 4])
print("e_n family: independent classes =", e.independent_classes)
print(" ", e.reason)
