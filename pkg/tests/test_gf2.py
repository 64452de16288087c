import itertools

from hypothesis import given, settings, strategies as st

from sierpinski_lre import gf2


def brute(rows, rhs, n):
    sols = []
    for x in range(1 << n):
        if all(bin(r & x).count("1") % 2 == b for r, b in zip(rows, rhs)):
            sols.append(x)
    return sols


systems = st.integers(1, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(0, (1 << n) - 1), min_size=0, max_size=10),
    ).flatmap(lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.lists(st.integers(0, 1), min_size=len(t[1]), max_size=len(t[1]))))
)


@settings(max_examples=200)
@given(systems)
def test_solve_matches_brute_force(sysdef):
    n, rows, rhs = sysdef
    x0, basis = gf2.solve(rows, rhs, n)
    sols = brute(rows, rhs, n)
    if x0 is None:
        assert sols == []
        return
    assert len(sols) == 1 << len(basis)
    span = set()
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        x = x0
        for c, b in zip(coeffs, basis):
            if c:
                x ^= b
        span.add(x)
    assert span == set(sols)
    assert gf2.rank(rows) == n - len(basis)


def test_echelon_membership():
    e = gf2.Echelon([0b011, 0b110])
    assert e.contains(0b101)
    assert not e.contains(0b001)
    assert e.rank == 2
    c = e.copy()
    assert c.add(0b001) and c.rank == 3 and e.rank == 2
    assert not e.add(0b101)


def test_inconsistent_system():
    x0, basis = gf2.solve([0b1, 0b1], [0, 1], 1)
    assert x0 is None and basis == []
