import itertools

import pytest

from sierpinski_lre.errors import ConventionViolation, ResourceLimit
from sierpinski_lre.lattice import build_lattice
from sierpinski_lre.scalar import ExactScalar
from sierpinski_lre.states import build_psi, materialize
from sierpinski_lre.tensor import (
    A,
    a2_a3_even,
    block_contraction_support,
    check_scale_invariance,
    contract_network,
    contract_network_dense,
    letter_for_legs,
    oracle_equivalence,
)

ROW0 = {(0, 0, 0), (1, 1, 1), (0, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 0), (3, 0, 2), (3, 2, 1)}
LAMBDA = ExactScalar(0, 1, 1)  # 2*sqrt2, pinned from the brute-force contraction


def test_tensor_a_entries():
    assert len(A) == 8
    assert set(A) == {
        (0, (0, 0, 0)), (0, (1, 1, 1)), (1, (1, 0, 0)), (1, (0, 1, 1)),
        (2, (0, 1, 0)), (2, (1, 0, 1)), (3, (0, 0, 1)), (3, (1, 1, 0)),
    }
    assert letter_for_legs((1, 1, 1)) == 0


@pytest.mark.parametrize("g", [1, 2])
def test_contraction_equals_psi(g):
    lat = build_lattice(g)
    net = contract_network(lat)
    psi = materialize(build_psi(lat))
    ratio = net.proportionality(psi)
    assert ratio is not None and float(ratio) > 0
    assert len(net) == (8 if g == 1 else 4096)
    assert contract_network_dense(lat) == net
    assert oracle_equivalence(lat, psi)
    if g == 1:
        assert set(net.amplitudes) == ROW0


def test_contraction_limits():
    with pytest.raises(ResourceLimit):
        contract_network(build_lattice(3))
    with pytest.raises(ResourceLimit):
        contract_network_dense(build_lattice(3))


def test_scale_invariance_lambda():
    assert check_scale_invariance() == LAMBDA


def test_reversed_orientation_is_rejected():
    with pytest.raises(ConventionViolation):
        check_scale_invariance(orientation=-1)


def test_block_support_rule():
    support = block_contraction_support()
    triples = set(itertools.product(range(4), repeat=3))
    assert support == {t for t in triples if a2_a3_even(t)}
    assert len(support) == 32
