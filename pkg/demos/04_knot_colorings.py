# Link diagrams as crossing lists: presentations, link group abelianization, colorings.
# Run: python3 demos/04_knot_colorings.py

from qforge.linkdiagram import STANDARD, presentation, wirtinger_presentation, count_colorings, list_colorings
from qforge.quandle import dihedral, alexander
from qforge.linalg import format_abelian

print("trefoil relations:", presentation(STANDARD["trefoil"]()).format_relations())

quandles = {"R3": dihedral(3), "R5": dihedral(5), "Alex(7,3)": alexander(7, 3), "Alex(11,5)": alexander(11, 5)}
print(f"{'diagram':15s} {'group^ab':8s}", "  ".join(f"{k:>10s}" for k in quandles))
for name, build in STANDARD.items():
    p = presentation(build())
    ab = format_abelian(*wirtinger_presentation(p).abelianization())
    counts = [count_colorings(p, X) for X in quandles.values()]
    print(f"{name:15s} {ab:8s}", "  ".join(f"{c:10d}" for c in counts))

# the nontrivial 3-colorings of the trefoil
print([c for c in list_colorings(presentation(STANDARD["trefoil"]()), dihedral(3)) if len(set(c)) > 1])
