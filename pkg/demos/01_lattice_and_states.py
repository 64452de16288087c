"""Walk through the fractal lattice, its loop constraints and the two code states.

Run:  python3 demos/01_lattice_and_states.py
"""

from sierpinski_lre.constraints import build_system, count_solutions
from sierpinski_lre.lattice import LATERAL, build_lattice
from sierpinski_lre.scalar import ZERO
from sierpinski_lre.states import LocalOperator, build_phi, build_psi, matrix_element
from sierpinski_lre.tensor import check_scale_invariance

print("generation  vertices  loops  diameter  log2(M)")
for g in range(1, 7):
    lat = build_lattice(g)
    system = build_system(lat)
    print(f"{g:>10}  {lat.n_vertices:>8}  {len(lat.loops):>5}  {lat.diameter:>8}  {system.nullity:>7}")

lat = build_lattice(2)
print("\nlateral loops at generation 2:", lat.loop_indices(LATERAL))
print("solutions at generation 2:", count_solutions(build_system(lat)))

# Psi and Phi live in different lateral-syndrome sectors, so they are orthogonal.
psi, phi = build_psi(lat), build_phi(lat)
overlap = matrix_element(phi, LocalOperator.identity(), psi)
print("<Phi|Psi> =", overlap, "(zero)" if overlap == ZERO else "")

print("scale factor of the block contraction:", check_scale_invariance())
