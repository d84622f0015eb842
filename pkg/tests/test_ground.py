"""Ground model finder: T_E completeness, read freeness, determinism."""

import pytest

from caext import OracleBounds, TermManager, oracle_solve
from caext.ground import solve_ground, virtual_read_equalities

from helpers import random_instance

LOOSE = OracleBounds(max_free_constants=16, max_array_constants=6)


@pytest.fixture
def m():
    return TermManager()


class TestScalarCore:
    def test_equality_chain_sat(self, m):
        x, y, z = (m.mk_const(s, m.bv_sort(1)) for s in "xyz")
        res = solve_ground(m, [m.mk_eq(x, y), m.mk_eq(y, z)])
        assert res.verdict == "sat"
        vals = res.interpretation
        assert vals.value(x) == vals.value(y) == vals.value(z)

    def test_contradiction_unsat(self, m):
        x, y = (m.mk_const(s, m.bv_sort(2)) for s in "xy")
        eq = m.mk_eq(x, y)
        assert solve_ground(m, [eq, m.mk_not(eq)]).verdict == "unsat"

    def test_three_distinct_values_do_not_fit_one_bit(self, m):
        ts = [m.mk_const(s, m.bv_sort(1)) for s in "xyz"]
        res = solve_ground(m, [m.mk_distinct_n(3, ts)])
        assert res.verdict == "unsat"

    def test_distinct_n_reified_negatively(self, m):
        ts = [m.mk_const(s, m.bv_sort(2)) for s in "xyz"]
        atom = m.mk_distinct_n(2, ts)
        res = solve_ground(m, [m.mk_not(atom)])
        assert res.verdict == "sat"
        vals = {res.interpretation.value(t) for t in ts}
        assert len(vals) == 1

    def test_distinct_n_counting(self, m):
        ts = [m.mk_const(s, m.bv_sort(2)) for s in "xyzw"]
        res = solve_ground(m, [m.mk_distinct_n(3, ts),
                               m.mk_eq(ts[0], ts[1])])
        assert res.verdict == "sat"
        vals = [res.interpretation.value(t) for t in ts]
        assert len(set(vals)) >= 3 and vals[0] == vals[1]

    def test_values_fixed(self, m):
        x = m.mk_const("x", m.bv_sort(3))
        res = solve_ground(m, [m.mk_eq(x, m.mk_value(m.bv_sort(3), 5))])
        assert res.interpretation.value(x) == 5


class TestReadsAreFree:
    """The ground level enforces neither select congruence nor array
    axioms; those violations are the array engine's job to repair."""

    def test_congruence_not_enforced(self, m):
        a = m.mk_const("a", m.array_sort(m.bv_sort(2), m.bool_sort))
        i, j = (m.mk_const(s, m.bv_sort(2)) for s in "ij")
        ri, rj = m.mk_select(a, i), m.mk_select(a, j)
        res = solve_ground(m, [m.mk_eq(i, j),
                               m.mk_not(m.mk_eq(ri, rj))])
        assert res.verdict == "sat"

    def test_virtual_read_is_enforced(self, m):
        a = m.mk_const("a", m.array_sort(m.bv_sort(2), m.bool_sort))
        i = m.mk_const("i", m.bv_sort(2))
        u = m.mk_const("u", m.bool_sort)
        read = m.mk_select(m.mk_store(a, i, u), i)
        res = solve_ground(m, [m.mk_not(m.mk_eq(read, u))])
        assert res.verdict == "unsat"

    def test_array_equality_does_not_bind_reads(self, m):
        asort = m.array_sort(m.bv_sort(2), m.bool_sort)
        a, b = m.mk_const("a", asort), m.mk_const("b", asort)
        i = m.mk_const("i", m.bv_sort(2))
        res = solve_ground(m, [
            m.mk_eq(a, b),
            m.mk_not(m.mk_eq(m.mk_select(a, i), m.mk_select(b, i)))])
        assert res.verdict == "sat"

    def test_virtual_read_terms_enumerated(self, m):
        a = m.mk_const("a", m.array_sort(m.bool_sort, m.bool_sort))
        i = m.mk_const("i", m.bool_sort)
        u = m.mk_const("u", m.bool_sort)
        s = m.mk_store(a, i, u)
        eqs = virtual_read_equalities(m, [m.mk_eq(s, a)])
        assert eqs == [m.mk_eq(m.mk_select(s, i), u)]


class TestArrayPartition:
    def test_transitivity_enforced(self, m):
        asort = m.array_sort(m.bool_sort, m.bool_sort)
        a, b, c = (m.mk_const(s, asort) for s in "abc")
        res = solve_ground(m, [m.mk_eq(a, b), m.mk_eq(b, c),
                               m.mk_not(m.mk_eq(a, c))])
        assert res.verdict == "unsat"

    def test_representatives_follow_truth(self, m):
        asort = m.array_sort(m.bool_sort, m.bool_sort)
        a, b, c = (m.mk_const(s, asort) for s in "abc")
        res = solve_ground(m, [m.mk_eq(a, b), m.mk_not(m.mk_eq(b, c))])
        assert res.verdict == "sat"
        interp = res.interpretation
        assert interp.arrays_equal(a, b)
        assert not interp.arrays_equal(b, c)
        assert not interp.arrays_equal(a, c)

    def test_store_nodes_participate(self, m):
        asort = m.array_sort(m.bool_sort, m.bool_sort)
        a, b = m.mk_const("a", asort), m.mk_const("b", asort)
        i = m.mk_const("i", m.bool_sort)
        u = m.mk_const("u", m.bool_sort)
        s = m.mk_store(a, i, u)
        res = solve_ground(m, [m.mk_eq(s, b)])
        assert res.verdict == "sat"
        assert res.interpretation.arrays_equal(s, b)


class TestEvalAndInvariants:
    def test_model_satisfies_all_inputs(self):
        for seed in range(40):
            m, assertions = random_instance(seed)
            from caext.flatten import flatten
            flat = flatten(m, assertions).all_formulas
            res = solve_ground(m, flat)
            if res.verdict == "sat":
                assert all(res.interpretation.eval(f) for f in flat), seed

    def test_deterministic(self):
        m, assertions = random_instance(11)
        r1 = solve_ground(m, assertions)
        r2 = solve_ground(m, assertions)
        assert r1.verdict == r2.verdict
        if r1.verdict == "sat":
            assert r1.interpretation.values == r2.interpretation.values

    def test_oracle_sat_implies_ground_sat(self):
        for seed in range(30):
            m, assertions = random_instance(seed)
            if oracle_solve(assertions, LOOSE).verdict == "sat":
                assert solve_ground(m, assertions).verdict == "sat", seed

    def test_scalar_only_formulas_match_oracle(self):
        import random as _r
        for seed in range(30):
            rng = _r.Random(seed)
            m = TermManager()
            xs = [m.mk_const(f"x{k}", m.bv_sort(2)) for k in range(3)]
            fs = []
            for _ in range(4):
                l, r = rng.choice(xs), rng.choice(xs)
                f = m.mk_eq(l, r)
                if rng.random() < 0.5:
                    f = m.mk_not(f)
                fs.append(f)
            fs.append(m.mk_distinct_n(rng.randint(1, 3), xs))
            assert (solve_ground(m, fs).verdict
                    == oracle_solve(fs, LOOSE).verdict), seed

    def test_budget_returns_none(self, m):
        xs = [m.mk_const(f"x{k}", m.bv_sort(3)) for k in range(8)]
        fs = [m.mk_distinct_n(8, xs)]
        res = solve_ground(m, fs, budget=0)
        assert res.verdict is None
