# Words in F(a,b) and counting quasimorphisms.
# Run: python3 demos/01_words_and_quasimorphisms.py

from qforge.words import Alphabet, parse_word, format_word, multiply, power, cyclic_normal_form
from qforge.quasimorphism import counting, homogenize, evaluate, measure_defect, scl_lower_bound, homogenized_counting

F = Alphabet.free("ab")
w = lambda s: parse_word(s, F)

# normal forms fold as you multiply
print(format_word(multiply(w("ab"), w("b^-1a"), F), F))          # a^2
c, u = cyclic_normal_form(w("ba"), F)
print(format_word(c, F), format_word(u, F))                      # ab a: ba = a^-1 (ab) a

# the counting quasimorphism of ab, and its homogenization
phi = counting("ab", F)
print("phi(abab) =", evaluate(phi, w("abab"), F), " certified D <=", phi.defect_upper)
print("measured defect on ball(4):", measure_defect(phi, F, 4))

hphi = homogenize(phi, F)
for g in ("ab", "bab", "a", "aba^-1b^-1"):
    print(f"hphi({g}) =", evaluate(hphi, w(g), F))

# homogeneous means hphi(g^n) = n hphi(g), exactly
g = w("abb")
print([str(evaluate(hphi, power(g, n, F), F)) for n in range(-3, 4)])

# Bavard: scl(g) >= |phi(g)| / 2D(phi)
fam = [homogenized_counting(s, F) for s in ("ab", "aab", "abb", "ab^-1", "aba^-1b^-1")]
c = w("aba^-1b^-1")
print("scl([a,b]) >=", scl_lower_bound(c, fam, F).lower, "(true value 1/2)")
