"""How deep must a patch circuit be to prepare Psi on a lattice of given size?"""

from sierpinski_lre.experiments import causal_cone_check, depth_bound, inverse_depth_bound
from sierpinski_lre.lattice import build_lattice

print(" P  L  threshold  min_generation  cone_cap")
for P in (1, 2):
    for L in (1, 2, 3):
        b = depth_bound(P, L)
        print(f"{P:>2} {L:>2} {str(b['threshold']):>10} {b['min_generation']:>15} {b['dj_cap']:>9}")

for g in range(2, 7):
    D = 2**g - 1
    print(f"generation {g} (diameter {D}): needs depth >= {inverse_depth_bound(D, 1)['min_depth']} with P=1")

rep = causal_cone_check(build_lattice(4), P=1, L=2, seed=7, starts=300)
print(f"causal cone at generation 4: max diameter {rep.max_diameter}, cap {rep.cap}, passed {rep.passed}")
