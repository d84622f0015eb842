"""Ground model finder over finite scalar domains.

Bit-blasts the scalar skeleton of a formula set to CNF and searches it
with the CDCL core.  Reads (``select`` nodes) are free bit-vectors,
constrained only by the virtual-read equality
``select(store(a,i,u), i) = u`` of each store term present — array
axioms beyond that are deliberately *not* encoded; the array engine
repairs violations with lemmas.  Array-sorted terms receive one
equality variable per unordered same-sort pair plus transitivity
constraints, never function values.  At-least-n-distinct atoms are
encoded eagerly with first-occurrence flags feeding a sequential
counter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InternalError, UnassignedConstant
from .sat import SatSolver
from .terms import Kind, Sort, Term, TermManager, iter_subterms

_SCALAR_LEAVES = (Kind.CONSTANT, Kind.VALUE, Kind.SELECT)
_CONNECTIVES = (Kind.NOT, Kind.AND, Kind.OR, Kind.IMPLIES, Kind.ITE)


def _width(sort: Sort) -> int:
    return 1 if sort.is_bool else sort.width


class Interpretation:
    """A total assignment for one candidate ground model.

    ``values`` maps every scalar constant, literal, and read node of
    the encoded formula set to a domain value.  Array terms carry only
    equivalence-class information: ``array_repr`` maps each array term
    to its class representative (the lowest-id member).
    """

    __slots__ = ("values", "array_repr")

    def __init__(self, values: dict[Term, int],
                 array_repr: dict[Term, Term]):
        self.values = values
        self.array_repr = array_repr

    def value(self, t: Term) -> int:
        """Value of a scalar term."""
        if t.kind is Kind.VALUE:
            return t.value or 0
        v = self.values.get(t)
        if v is None:
            raise UnassignedConstant(f"{t!r} has no value in this "
                                     "interpretation")
        return v

    def arrays_equal(self, s: Term, t: Term) -> bool:
        if s is t:
            return True
        rs, rt = self.array_repr.get(s), self.array_repr.get(t)
        if rs is None or rt is None:
            raise UnassignedConstant(f"{s!r} or {t!r} not tracked")
        return rs is rt

    def eval(self, f: Term) -> bool:
        """Truth of a formula under this interpretation."""
        k = f.kind
        if k is Kind.EQ:
            lhs, rhs = f.args
            if lhs.sort.is_array:
                return self.arrays_equal(lhs, rhs)
            return self.value(lhs) == self.value(rhs)
        if k is Kind.DISTINCT_N:
            return len({self.value(a) for a in f.args}) >= (f.n or 1)
        if k is Kind.NOT:
            return not self.eval(f.args[0])
        if k is Kind.AND:
            return all(self.eval(a) for a in f.args)
        if k is Kind.OR:
            return any(self.eval(a) for a in f.args)
        if k is Kind.IMPLIES:
            return self.eval(f.args[1]) or not self.eval(f.args[0])
        if k is Kind.ITE:
            return self.eval(f.args[1] if self.eval(f.args[0]) else f.args[2])
        if k in (Kind.CONSTANT, Kind.VALUE, Kind.SELECT):
            return bool(self.value(f))
        raise InternalError(f"cannot evaluate {f!r}")


@dataclass
class GroundResult:
    verdict: Optional[str]          # "sat", "unsat", or None on budget
    interpretation: Optional["Interpretation"] = None
    conflicts: int = 0


class _Encoder:
    def __init__(self, manager: TermManager, seed: int,
                 budget: Optional[int]):
        self.m = manager
        self.sat = SatSolver(seed=seed, conflict_budget=budget)
        self.true_lit = self.sat.new_var()
        self.sat.add_clause([self.true_lit])
        self.bits: dict[Term, list[int]] = {}
        self.pair: dict[tuple[Term, Term], int] = {}
        self.cache: dict[Term, int] = {}
        self.eq_cache: dict[tuple[Term, Term], int] = {}
        self.arrays: list[Term] = []
        self.reads: list[Term] = []

    # -- gates ----------------------------------------------------------

    def _iff(self, a: int, b: int) -> int:
        q = self.sat.new_var()
        add = self.sat.add_clause
        add([-q, -a, b])
        add([-q, a, -b])
        add([q, a, b])
        add([q, -a, -b])
        return q

    def _and(self, lits: Sequence[int]) -> int:
        if not lits:
            return self.true_lit
        if len(lits) == 1:
            return lits[0]
        q = self.sat.new_var()
        for lit in lits:
            self.sat.add_clause([-q, lit])
        self.sat.add_clause([q] + [-lit for lit in lits])
        return q

    def _or(self, lits: Sequence[int]) -> int:
        return -self._and([-lit for lit in lits])

    # -- term bits --------------------------------------------------------

    def node_bits(self, t: Term) -> list[int]:
        got = self.bits.get(t)
        if got is not None:
            return got
        w = _width(t.sort)
        if t.kind is Kind.VALUE:
            v = t.value or 0
            out = [self.true_lit if (v >> k) & 1 else -self.true_lit
                   for k in range(w)]
        elif t.kind in (Kind.CONSTANT, Kind.SELECT):
            out = [self.sat.new_var() for _ in range(w)]
        else:
            raise InternalError(f"scalar term {t!r} is not flat")
        self.bits[t] = out
        return out

    # -- arrays ----------------------------------------------------------

    def register_arrays(self, arrays: Sequence[Term]) -> None:
        """Create pair variables and transitivity constraints for all
        same-sort pairs, so any truth assignment extends to a partition."""
        self.arrays = sorted(arrays, key=lambda t: t.id)
        by_sort: dict[Sort, list[Term]] = {}
        for a in self.arrays:
            by_sort.setdefault(a.sort, []).append(a)
        for group in by_sort.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    self.pair[(group[i], group[j])] = self.sat.new_var()
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    for k in range(j + 1, len(group)):
                        ab = self.pair[(group[i], group[j])]
                        bc = self.pair[(group[j], group[k])]
                        ac = self.pair[(group[i], group[k])]
                        self.sat.add_clause([-ab, -bc, ac])
                        self.sat.add_clause([-ab, -ac, bc])
                        self.sat.add_clause([-bc, -ac, ab])

    def pair_lit(self, s: Term, t: Term) -> int:
        if s is t:
            return self.true_lit
        key = (s, t) if s.id < t.id else (t, s)
        lit = self.pair.get(key)
        if lit is None:
            raise InternalError(f"unregistered array pair {s!r} / {t!r}")
        return lit

    # -- atoms -------------------------------------------------------------

    def scalar_eq_lit(self, lhs: Term, rhs: Term) -> int:
        if lhs is rhs:
            return self.true_lit
        key = (lhs, rhs) if lhs.id < rhs.id else (rhs, lhs)
        lit = self.eq_cache.get(key)
        if lit is None:
            xs, ys = self.node_bits(lhs), self.node_bits(rhs)
            lit = self._and([self._iff(x, y) for x, y in zip(xs, ys)])
            self.eq_cache[key] = lit
        return lit

    def distinct_lit(self, t: Term) -> int:
        ts, n = list(t.args), t.n or 1
        if n > len(ts):
            return -self.true_lit
        # first[i]: ts[i] differs from every earlier argument.
        first = [self._and([-self.scalar_eq_lit(ts[i], ts[j])
                            for j in range(i)])
                 for i in range(len(ts))]
        # Sequential counter: count[j] = at least j+1 of `first` so far.
        count: list[int] = []
        for f in first:
            nxt: list[int] = []
            for j in range(min(len(count) + 1, n)):
                at_least = count[j] if j < len(count) else -self.true_lit
                carry = count[j - 1] if j > 0 else self.true_lit
                nxt.append(self._or([at_least, self._and([carry, f])]))
            count = nxt
        return count[n - 1] if n <= len(count) else -self.true_lit

    def atom_lit(self, t: Term) -> int:
        if t.kind is Kind.EQ:
            lhs, rhs = t.args
            if lhs.sort.is_array:
                return self.pair_lit(lhs, rhs)
            return self.scalar_eq_lit(lhs, rhs)
        if t.kind is Kind.DISTINCT_N:
            return self.distinct_lit(t)
        if t.kind in _SCALAR_LEAVES and t.sort.is_bool:
            return self.node_bits(t)[0]
        raise InternalError(f"unsupported atom {t!r}")

    # -- formulas ----------------------------------------------------------

    def formula_lit(self, f: Term) -> int:
        lit = self.cache.get(f)
        if lit is not None:
            return lit
        k = f.kind
        if k is Kind.NOT:
            lit = -self.formula_lit(f.args[0])
        elif k is Kind.AND:
            lit = self._and([self.formula_lit(a) for a in f.args])
        elif k is Kind.OR:
            lit = self._or([self.formula_lit(a) for a in f.args])
        elif k is Kind.IMPLIES:
            a, b = (self.formula_lit(x) for x in f.args)
            lit = self._or([-a, b])
        elif k is Kind.ITE:
            c, x, y = (self.formula_lit(x) for x in f.args)
            lit = self._or([self._and([c, x]), self._and([-c, y])])
        else:
            lit = self.atom_lit(f)
        self.cache[f] = lit
        return lit

    def assert_bits_equal(self, s: Term, t: Term) -> None:
        for x, y in zip(self.node_bits(s), self.node_bits(t)):
            self.sat.add_clause([-x, y])
            self.sat.add_clause([x, -y])


def virtual_read_equalities(manager: TermManager,
                            formulas: Sequence[Term]) -> list[Term]:
    """``select(store(a,i,u), i) = u`` for every store term present."""
    out = []
    for t in iter_subterms(formulas):
        if t.kind is Kind.STORE:
            read = manager.mk_select(t, t.index)
            out.append(manager.mk_eq(read, t.stored_value))
    return out


def solve_ground(manager: TermManager, formulas: Sequence[Term], *,
                 seed: int = 0,
                 budget: Optional[int] = None) -> GroundResult:
    """Find a total scalar interpretation satisfying ``formulas`` plus
    the virtual-read equalities, or report ground unsatisfiability.

    Deterministic for fixed input and seed.
    """
    enc = _Encoder(manager, seed, budget)
    virtuals = virtual_read_equalities(manager, formulas)
    everything = list(formulas) + virtuals
    subterms = list(iter_subterms(everything))
    enc.register_arrays([t for t in subterms if t.sort.is_array])
    for t in subterms:
        if t.kind in (Kind.CONSTANT, Kind.SELECT) and t.sort.is_scalar:
            enc.node_bits(t)
    for f in formulas:
        enc.sat.add_clause([enc.formula_lit(f)])
    for eq in virtuals:
        enc.assert_bits_equal(eq.args[0], eq.args[1])

    outcome = enc.sat.solve()
    if outcome is None:
        return GroundResult(None, conflicts=enc.sat.conflicts)
    if not outcome:
        return GroundResult("unsat", conflicts=enc.sat.conflicts)

    values: dict[Term, int] = {}
    for t, bits in enc.bits.items():
        if t.kind is Kind.VALUE:
            values[t] = t.value or 0
        else:
            values[t] = sum(
                (1 << k) if _lit_true(enc.sat, lit) else 0
                for k, lit in enumerate(bits))

    parent: dict[Term, Term] = {a: a for a in enc.arrays}

    def find(x: Term) -> Term:
        while parent[x] is not x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (s, t), lit in enc.pair.items():
        if _lit_true(enc.sat, lit):
            rs, rt = find(s), find(t)
            if rs is not rt:
                keep, drop = (rs, rt) if rs.id < rt.id else (rt, rs)
                parent[drop] = keep
    array_repr = {a: find(a) for a in enc.arrays}
    return GroundResult("sat", Interpretation(values, array_repr),
                        enc.sat.conflicts)


def _lit_true(sat: SatSolver, lit: int) -> bool:
    v = sat.value(abs(lit))
    return v if lit > 0 else not v
