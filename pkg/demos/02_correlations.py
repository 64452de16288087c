"""Exact correlations of Psi: every nonadjacent connected correlation vanishes."""

import itertools

from sierpinski_lre.experiments import connected_pattern_check, single_site_suite
from sierpinski_lre.lattice import build_lattice
from sierpinski_lre.states import LocalOperator, build_psi, expectation

lat = build_lattice(3)
psi = build_psi(lat)

for a, b in itertools.product(range(2), repeat=2):
    val = expectation(psi, LocalOperator.dyad((4,), (a,), (b,)))
    print(f"<|{a}><{b}|> on site 4 = {val}")

# Adjacent sites are correlated; distant ones are not.
for i, j in ((0, 1), (0, 13)):
    ok, info = connected_pattern_check(psi, (i,), (j,))
    kind = "adjacent" if lat.are_adjacent(i, j) else "nonadjacent"
    print(f"sites {i},{j} ({kind}): all connected correlations zero = {ok}")

report = single_site_suite(lat)
print(f"full sweep at generation 3: {report.checks} exact checks, passed = {report.passed}")
