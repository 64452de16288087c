"""Local operators cannot tell Psi from Phi, up to a diameter that grows with the lattice."""

import sys

from sierpinski_lre.experiments import (
    detection_diameter_bound,
    error_detection_suite,
    find_syndrome_flipper,
    flipper_negative_control,
    v1_flipper,
)
from sierpinski_lre.lattice import build_lattice

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 5_000
lat = build_lattice(3)
print("lattice diameter:", lat.diameter, " detection bound:", detection_diameter_bound(lat.diameter))

flip = find_syndrome_flipper(lat, forbidden=lat.corners)
print("corner-free flipper from Psi to Phi:", flip)

report = error_detection_suite(lat, max_exhaustive_size=4, sample_budget=samples, seed=1)
print(f"{len(report.per_support)} supports, {report.ops_exhaustive} dyads exhaustively, "
      f"{report.ops_sampled} sampled, failures: {len(report.failures)}")

# The flipper is a nonlocal error: it maps Phi onto Psi, so the code cannot detect it.
print("flipper as an error:", flipper_negative_control(lat, v1_flipper(lat)))
