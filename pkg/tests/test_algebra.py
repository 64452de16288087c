import itertools

import pytest

from sierpinski_lre.algebra import (
    LETTERS,
    RED_SIDES,
    block_parity,
    dump_tables,
    gamma_state,
    is_red,
    s_gate,
    s_sides,
    t_gate,
    u_block,
    w_plus_table,
)
from sierpinski_lre.constraints import syndrome_mask
from sierpinski_lre.errors import InvalidArgument
from sierpinski_lre.lattice import ANCHOR, BLOCK, LINK, build_lattice
from sierpinski_lre.scalar import ONE, ExactScalar


def test_letters_have_even_red_count():
    for a in LETTERS:
        assert len(RED_SIDES[a]) % 2 == 0
        assert [s for s in (1, 2, 3) if is_red(a, s)] == list(RED_SIDES[a])


def test_s_gate_examples():
    assert s_gate(1)((0,)) == (1,)
    assert s_gate(2)((3,)) == (1,)
    assert s_gate(3)((0,)) == (3,)
    for k in (1, 2, 3):
        assert s_gate(k).compose(s_gate(k)).is_identity()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_s_gate_toggles_the_two_other_sides(k):
    for a in LETTERS:
        b = s_gate(k)((a,))[0]
        changed = {s for s in (1, 2, 3) if is_red(a, s) != is_red(b, s)}
        assert changed == set(s_sides(k)) == {1, 2, 3} - {k}


def test_s_gates_form_klein_group():
    s1, s2, s3 = (s_gate(k) for k in (1, 2, 3))
    assert s1.compose(s2).mapping == s3.mapping
    assert s1.compose(s2).mapping == s2.compose(s1).mapping


def test_t_gate_examples(lat2):
    link = next(e for e in lat2.edges if e.kind == LINK)
    gate, _ = t_gate(lat2, link)
    assert gate((0, 0)) == (1, 1)
    gate, sites = t_gate(lat2, (0, 1))
    assert sites == (0, 1)
    assert gate((0, 0)) == (2, 3)
    with pytest.raises(InvalidArgument):
        t_gate(lat2, (0, ANCHOR))
    with pytest.raises(InvalidArgument):
        t_gate(lat2, (0, 8))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_t_gates_preserve_every_loop_parity(g):
    lat = build_lattice(g)
    n = lat.n_vertices
    for e in lat.edges:
        gate, (u, v) = t_gate(lat, e)
        assert gate.compose(gate).is_identity()
        for a, b in itertools.product(LETTERS, repeat=2):
            conf = [0] * n
            conf[u], conf[v] = a, b
            before = syndrome_mask(lat, conf)
            conf[u], conf[v] = gate((a, b))
            assert syndrome_mask(lat, conf) == before


def test_t_gates_commute(lat2):
    n = lat2.n_vertices
    gates = [t_gate(lat2, e) for e in lat2.edges]
    conf = tuple(range(4)) * 2 + (1,)

    def app(gp, c):
        g, (u, v) = gp
        c = list(c)
        c[u], c[v] = g((c[u], c[v]))
        return tuple(c)

    for g1, g2 in itertools.combinations(gates, 2):
        assert app(g1, app(g2, conf)) == app(g2, app(g1, conf))
    assert len(conf) == n


@pytest.mark.parametrize("g", [2, 3])
def test_three_t_gates_reach_the_other_letters(g):
    lat = build_lattice(g)
    for v in lat.vertices:
        neigh = [w for w in lat.ports[v] if w != ANCHOR]
        for a in LETTERS:
            images = set()
            for w in neigh:
                gate, (x, y) = t_gate(lat, (v, w))
                out = gate((a, 0) if x == v else (0, a))
                images.add(out[0] if x == v else out[1])
            if v in lat.corners:
                # the two block gates together stand in for the missing external one
                g1, s1 = t_gate(lat, (v, neigh[0]))
                g2, s2 = t_gate(lat, (v, neigh[1]))
                c = [0] * lat.n_vertices
                c[v] = a
                for gate, (x, y) in ((g1, s1), (g2, s2)):
                    c[x], c[y] = gate((c[x], c[y]))
                assert c[v] == s_gate(1)((a,))[0]
                images.add(c[v])
            assert images == set(LETTERS) - {a}


def test_w_plus_rows():
    w = w_plus_table()
    assert [len(r) for r in w.rows] == [8, 8, 8, 8]
    assert w.rows[0] == ((0, 0, 0), (1, 1, 1), (0, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 0), (3, 0, 2), (3, 2, 1))
    a_sector = {t for t in itertools.product(LETTERS, repeat=3) if block_parity(t) == 0}
    assert len(a_sector) == 32
    assert {t for r in w.rows for t in r} == a_sector
    assert w.weight * w.weight * 8 == ONE


def test_u_block_examples():
    assert u_block((0, 0, 0)) == (0, 1)
    assert u_block((0, 3, 2)) == (1, 2)
    assert u_block((0, 0, 1)) == (3, 1)
    assert u_block((1, 1, 1)) == (0, 2)
    assert u_block((0, 1, 0)) == (2, 1)
    assert u_block((1, 0, 0)) == (1, 3)
    assert u_block((0, 0, 2)) is None


def test_w_plus_is_coisometry():
    # W+ (W+)^dagger = 1 on the coarse qudit: rows are disjoint and each has norm^2 8 * (1/8)
    w = w_plus_table()
    for a, b in itertools.product(range(4), repeat=2):
        overlap = len(set(w.rows[a]) & set(w.rows[b]))
        assert (w.weight * w.weight * overlap) == (ONE if a == b else ExactScalar(0))


def test_gamma_state_normalized():
    g = gamma_state()
    assert sorted(g) == list(range(1, 9))
    total = ExactScalar(0)
    for amp in g.values():
        total = total + amp * amp
    assert total == ONE


def test_dump_tables_is_complete():
    d = dump_tables()
    assert set(d["S"]) == {"1", "2", "3"}
    assert d["W_plus"]["rows"]["0"][0] == "000"
