"""Reduce random constraint solutions to product form using only T moves."""

from sierpinski_lre.constraints import build_system, make_rng, sample_solution
from sierpinski_lre.experiments import canonicalize, ergodicity_check, prepare_by_circuit, replay
from sierpinski_lre.lattice import LATERAL, build_lattice

lat2 = build_lattice(2)
print("circuit of half projectors reproduces Psi:", prepare_by_circuit(lat2)["equals_psi"])
print("T-orbit of the zero configuration:", ergodicity_check(lat2))

lat = build_lattice(3)
rng = make_rng(5)
x = sample_solution(build_system(lat, free_loops=lat.loop_indices(LATERAL)), rng)
res = canonicalize(lat, x)
print("sample:", "".join(map(str, x)))
for form, moves in res.forms:
    assert replay(lat, x, moves) == form
    print(f"form : {''.join(map(str, form))}  via {len(moves)} moves")
