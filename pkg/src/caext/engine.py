"""Candidate-guided decision procedure for extensional arrays with
constant-array defaults over finite scalar sorts.

The solver alternates two phases.  A ground solver proposes a candidate
interpretation that satisfies the current formula set while treating
reads as unconstrained scalars and array equalities as an arbitrary
partition (:mod:`caext.ground`).  A propagation phase then spreads each
read and each constant-array default through the store and equality
structure as far as the candidate interpretation allows, recording for
every propagated fact the array it reached, the neighbouring array it
came from, and the literal that justified the hop.  A fact that reaches
an array whose candidate values contradict it yields a lemma over the
recorded justification literals; the lemma joins the formula set, the
propagation state is discarded, and the loop repeats.

The refinement terminates on finite domains: every lemma except the
extensionality-witness kind is false under the interpretation that
produced it, so that interpretation is never proposed again, and at
most one witness lemma is ever produced per array equality atom.  When
a candidate survives propagation without contradiction, the recorded
steps determine a concrete table for every array constant — propagated
reads pin single cells, propagated defaults fill the cells off their
updated indices, untouched cells get the all-zero element — and the
result is a full model of the input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    IllDefinedModel,
    InternalError,
    ResourceLimit,
    UndefinedStep,
)
from .flatten import flatten
from .ground import Interpretation, solve_ground
from .model import Model, complete_model, validate_model, zero_value
from .terms import (Kind, Sort, Term, TermManager, domain_size,
                    iter_subterms, substitute)

__all__ = [
    "Configuration",
    "ConflictInfo",
    "ReasonTrace",
    "SolveResult",
    "SolveStats",
    "build_model",
    "check_conflicts",
    "check_sat",
    "compute_reason",
    "compute_updated_indices",
    "exists_fresh_index",
    "init_steps",
    "propagate_fixpoint",
]

# Propagation-rule labels, as recorded per step for tracing.
INIT_READ = "init_read"
INIT_WRITE = "init_write"
INIT_CONST = "init_const"
READ_DOWN = "read_down"              # read crosses a store toward its base
READ_UP = "read_up"                  # read crosses a store away from its base
READ_EQ_RIGHT = "read_eq_right"      # read copied across an equality, lhs→rhs
READ_EQ_LEFT = "read_eq_left"        # read copied across an equality, rhs→lhs
CONST_DOWN = "const_down"            # default crosses a store toward its base
CONST_UP = "const_up"                # default crosses a store away from its base
CONST_EQ_RIGHT = "const_eq_right"    # default copied across an equality, lhs→rhs
CONST_EQ_LEFT = "const_eq_left"      # default copied across an equality, rhs→lhs

# Lemma-rule labels, as counted in solver statistics.
LEMMA_READ_OVER_CONST = "read_over_const"
LEMMA_READ_CONGRUENCE = "read_congruence"
LEMMA_EXTENSIONALITY = "extensionality"
LEMMA_CONST_CONGRUENCE = "const_congruence"

LEMMA_RULES = (
    LEMMA_READ_OVER_CONST,
    LEMMA_READ_CONGRUENCE,
    LEMMA_EXTENSIONALITY,
    LEMMA_CONST_CONGRUENCE,
)


class Configuration:
    """Mutable solver state: the formula set, the current candidate
    interpretation, and the propagation map.

    The propagation map records, for every pair of a destination array
    and a propagated term (a read or a constant array), the literal that
    justified the most recent hop and the array the term arrived from.
    Entries are write-once between resets; sources always point at an
    entry recorded earlier, so justification chains are acyclic.
    """

    def __init__(self, manager: TermManager, formulas: Iterable[Term], *,
                 debug: bool = True):
        self.manager = manager
        self.formulas: list[Term] = list(formulas)
        self.interp: Optional[Interpretation] = None
        # (destination array, propagated term) -> (reason literal | None, source)
        self.steps: dict[tuple[Term, Term], tuple[Optional[Term], Term]] = {}
        self.step_rule: dict[tuple[Term, Term], str] = {}
        self.debug = debug
        self._refresh()

    # -- formula-set term index ------------------------------------------

    def _refresh(self) -> None:
        subterms = list(iter_subterms(self.formulas))
        self.ordinal: dict[Term, int] = {t: k for k, t in enumerate(subterms)}
        self.reads = [t for t in subterms if t.kind is Kind.SELECT]
        self.stores = [t for t in subterms if t.kind is Kind.STORE]
        self.const_arrays = [t for t in subterms
                             if t.kind is Kind.CONST_ARRAY]
        self.array_eq_atoms = [t for t in subterms
                               if t.kind is Kind.EQ
                               and t.args[0].sort.is_array]

    def add_formula(self, f: Term) -> None:
        self.formulas.append(f)
        self._refresh()

    def ordinal_key(self, t: Term) -> int:
        return self.ordinal.get(t, len(self.ordinal) + t.id)

    # -- propagation map ---------------------------------------------------

    def has_step(self, dest: Term, t: Term) -> bool:
        return (dest, t) in self.steps

    def step(self, dest: Term, t: Term) -> tuple[Optional[Term], Term]:
        try:
            return self.steps[(dest, t)]
        except KeyError:
            raise UndefinedStep(
                f"no propagation of {t!r} to {dest!r} recorded") from None

    def set_step(self, dest: Term, t: Term, reason: Optional[Term],
                 source: Term, rule: str) -> None:
        key = (dest, t)
        if key in self.steps:
            raise InternalError(f"propagation step {key} recorded twice")
        if self.debug:
            if source is not dest and (source, t) not in self.steps:
                raise InternalError(
                    "step source does not point at an earlier entry")
            if reason is not None and not self.interp.eval(reason):
                raise InternalError(
                    "step reason is false under the current interpretation")
        self.steps[key] = (reason, source)
        self.step_rule[key] = rule

    def reset(self) -> None:
        """Discard the candidate interpretation and all recorded steps."""
        self.interp = None
        self.steps.clear()
        self.step_rule.clear()


def init_steps(cfg: Configuration) -> Configuration:
    """Record the self-evident starting points of propagation: every
    read at the array it reads from, a virtual read of every store at
    its updated index, and every constant array at itself."""
    if cfg.interp is None:
        raise InternalError("init_steps needs a candidate interpretation")
    m = cfg.manager
    for r in cfg.reads:
        if not cfg.has_step(r.array, r):
            cfg.set_step(r.array, r, None, r.array, INIT_READ)
    for s in cfg.stores:
        read = m.mk_select(s, s.index)
        if not cfg.has_step(s, read):
            cfg.set_step(s, read, None, s, INIT_WRITE)
    for c in cfg.const_arrays:
        if not cfg.has_step(c, c):
            cfg.set_step(c, c, None, c, INIT_CONST)
    return cfg


def exists_fresh_index(interp: Interpretation,
                       index_terms: Iterable[Term],
                       sort: Sort) -> bool:
    """True iff some value of ``sort`` differs from the value of every
    given index term under ``interp``."""
    used = {interp.value(k) for k in index_terms}
    return len(used) < domain_size(sort)


def compute_updated_indices(cfg: Configuration, dest: Term,
                            const: Term) -> tuple[Term, ...]:
    """The index terms of all stores crossed while propagating the
    constant array ``const`` to ``dest``, in first-seen term order.

    A cell of ``dest`` is only known to hold the default of ``const``
    if its index differs from every index returned here.
    """
    _require_step(cfg, dest, const)
    out: list[Term] = []
    cur = dest
    while True:
        reason, src = cfg.steps[(cur, const)]
        if src is cur:
            break
        if reason is None:
            # The hop crossed a store; pick up its updated index.
            if src.kind is Kind.STORE and src.array is cur:
                out.append(src.index)
            elif cur.kind is Kind.STORE and cur.array is src:
                out.append(cur.index)
            else:
                raise InternalError(
                    f"unjustified hop {cur!r} <- {src!r} crosses no store")
        cur = src
    return _canonical_indices(cfg, out)


def _canonical_indices(cfg: Configuration,
                       indices: Iterable[Term]) -> tuple[Term, ...]:
    unique = dict.fromkeys(indices)
    return tuple(sorted(unique, key=cfg.ordinal_key))


def _require_step(cfg: Configuration, dest: Term, t: Term) -> None:
    if (dest, t) not in cfg.steps:
        raise UndefinedStep(
            f"no propagation of {t!r} to {dest!r} recorded")


@dataclass(frozen=True)
class ReasonTrace:
    """The justification for one propagated fact: the conjunction of
    the non-trivial literals along its propagation path, ordered from
    the origin of the path toward its destination.

    For a default-value fact the trace also carries the store indices
    crossed along *that same path*; the soundness claim — destination
    agrees with the default everywhere off the crossed indices — only
    holds for the literals and indices of one path taken together.
    """

    literals: tuple[Term, ...]
    updated_indices: tuple[Term, ...] = ()

    def formula(self, manager: TermManager) -> Term:
        if not self.literals:
            return manager.mk_value(manager.bool_sort, 1)
        if len(self.literals) == 1:
            return self.literals[0]
        return manager.mk_and(self.literals)


def compute_reason(cfg: Configuration, dest: Term, t: Term, *,
                   replay: bool = False) -> ReasonTrace:
    """The justification for propagating ``t`` to ``dest``.

    With ``replay`` the recorded path is ignored and a shortest
    justification is re-derived from the current interpretation; both
    variants are valid, but the replayed one can be shorter and can
    cross a different set of store indices.
    """
    lits, idx = _conflict_path(cfg, dest, t, replay)
    return ReasonTrace(tuple(lits), _canonical_indices(cfg, idx))


def _stored_path(cfg: Configuration, dest: Term,
                 t: Term) -> tuple[list[Term], list[Term]]:
    """Walk the recorded source links; returns (literals, store indices)
    with literals ordered origin-first."""
    _require_step(cfg, dest, t)
    lits: list[Term] = []
    indices: list[Term] = []
    cur = dest
    while True:
        reason, src = cfg.steps[(cur, t)]
        if reason is not None:
            lits.append(reason)
        elif src is not cur:
            if src.kind is Kind.STORE and src.array is cur:
                indices.append(src.index)
            elif cur.kind is Kind.STORE and cur.array is src:
                indices.append(cur.index)
        if src is cur:
            break
        cur = src
    lits.reverse()
    return lits, indices


def _replayed_path(cfg: Configuration, dest: Term,
                   t: Term) -> Optional[tuple[list[Term], list[Term]]]:
    """Re-derive a shortest justification for propagating ``t`` to
    ``dest`` under the current interpretation, breadth-first from the
    propagation origin.  Returns None if no path exists (which cannot
    happen while the recorded path's premises still hold)."""
    interp = cfg.interp
    m = cfg.manager
    origin = t.array if t.kind is Kind.SELECT else t
    if dest is origin:
        return [], []
    start: tuple[list[Term], list[Term]] = ([], [])
    queue: deque[tuple[Term, list[Term], list[Term]]] = deque()
    queue.append((origin, *start))
    seen = {origin}

    def neighbours(node: Term, indices: list[Term]):
        if t.kind is Kind.SELECT:
            i = t.index
            if node.kind is Kind.STORE and \
                    interp.value(i) != interp.value(node.index):
                yield (node.array,
                       m.mk_not(m.mk_eq(i, node.index)), None)
            for s in cfg.stores:
                if s.array is node and \
                        interp.value(i) != interp.value(s.index):
                    yield s, m.mk_not(m.mk_eq(i, s.index)), None
            for e in cfg.array_eq_atoms:
                other = _eq_other_side(e, node)
                if other is not None and interp.eval(e):
                    yield other, e, None
        else:
            for e in cfg.array_eq_atoms:
                other = _eq_other_side(e, node)
                if other is not None and interp.eval(e):
                    yield other, e, None
            sort = t.sort.index
            if node.kind is Kind.STORE and exists_fresh_index(
                    interp, indices + [node.index], sort):
                yield node.array, None, node.index
            for s in cfg.stores:
                if s.array is node and exists_fresh_index(
                        interp, indices + [s.index], sort):
                    yield s, None, s.index

    while queue:
        node, lits, indices = queue.popleft()
        for nxt, lit, idx in neighbours(node, indices):
            if nxt in seen:
                continue
            nlits = lits + [lit] if lit is not None else list(lits)
            nidx = indices + [idx] if idx is not None else list(indices)
            if nxt is dest:
                return nlits, nidx
            seen.add(nxt)
            queue.append((nxt, nlits, nidx))
    return None


def _eq_other_side(eq_atom: Term, node: Term) -> Optional[Term]:
    lhs, rhs = eq_atom.args
    if lhs is node and rhs is not node:
        return rhs
    if rhs is node and lhs is not node:
        return lhs
    return None


def _conflict_path(cfg: Configuration, dest: Term, t: Term,
                   replay: bool) -> tuple[list[Term], list[Term]]:
    """The (literals, store indices) pair used to justify a lemma about
    the propagation of ``t`` to ``dest``."""
    _require_step(cfg, dest, t)
    if replay:
        replayed = _replayed_path(cfg, dest, t)
        if replayed is not None:
            return replayed
        if cfg.debug:
            raise InternalError(
                f"replay found no justification for {t!r} at {dest!r}")
    return _stored_path(cfg, dest, t)


# ---------------------------------------------------------------------------
# Propagation to fixpoint
# ---------------------------------------------------------------------------


def propagate_fixpoint(cfg: Configuration) -> Configuration:
    """Apply the propagation rules until no rule can record a new step.

    Rules are tried in a fixed priority: reads crossing stores first,
    then copies across equalities that hold under the interpretation,
    then defaults crossing stores; within one priority, entries are
    visited in the order they were recorded.  After every new step the
    scan restarts, which makes saturation deterministic.
    """
    while _apply_one(cfg):
        pass
    return cfg


def _apply_one(cfg: Configuration) -> bool:
    interp = cfg.interp
    m = cfg.manager
    entries = list(cfg.steps)

    # Priority 1: reads cross stores whose updated index differs.
    for dest, t in entries:
        if t.kind is not Kind.SELECT:
            continue
        i = t.index
        if dest.kind is Kind.STORE and not cfg.has_step(dest.array, t) \
                and interp.value(i) != interp.value(dest.index):
            cfg.set_step(dest.array, t,
                         m.mk_not(m.mk_eq(i, dest.index)), dest, READ_DOWN)
            return True
        for s in cfg.stores:
            if s.array is dest and not cfg.has_step(s, t) \
                    and interp.value(i) != interp.value(s.index):
                cfg.set_step(s, t,
                             m.mk_not(m.mk_eq(i, s.index)), dest, READ_UP)
                return True

    # Priority 2: anything propagated copies across a true equality.
    for dest, t in entries:
        for e in cfg.array_eq_atoms:
            other = _eq_other_side(e, dest)
            if other is None or cfg.has_step(other, t):
                continue
            if not interp.eval(e):
                continue
            to_right = e.args[0] is dest
            if t.kind is Kind.SELECT:
                rule = READ_EQ_RIGHT if to_right else READ_EQ_LEFT
            else:
                rule = CONST_EQ_RIGHT if to_right else CONST_EQ_LEFT
            cfg.set_step(other, t, e, dest, rule)
            return True

    # Priority 3: defaults cross stores while a cell off the updated
    # indices still exists.
    for dest, t in entries:
        if t.kind is not Kind.CONST_ARRAY:
            continue
        sort = t.sort.index
        crossed = list(compute_updated_indices(cfg, dest, t))
        if dest.kind is Kind.STORE and not cfg.has_step(dest.array, t) \
                and exists_fresh_index(interp, crossed + [dest.index], sort):
            cfg.set_step(dest.array, t, None, dest, CONST_DOWN)
            return True
        for s in cfg.stores:
            if s.array is dest and not cfg.has_step(s, t) \
                    and exists_fresh_index(interp, crossed + [s.index], sort):
                cfg.set_step(s, t, None, dest, CONST_UP)
                return True

    return False


# ---------------------------------------------------------------------------
# Conflict detection and lemmas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConflictInfo:
    """A detected contradiction between propagated facts and the
    candidate interpretation, with the lemma that rules it out."""

    rule: str
    lemma: Term


def check_conflicts(cfg: Configuration, *,
                    witnessed: Optional[set[Term]] = None,
                    replay: bool = True,
                    apply: bool = True) -> Optional[ConflictInfo]:
    """Scan for a contradiction under the current interpretation.

    The four conflict kinds are scanned in a fixed order (read against
    a default, two reads at one array, a falsified array equality
    without a witness read, two defaults at one array) and the first
    hit produces one lemma.  With ``apply`` (the default) the lemma is
    appended to the formula set and the propagation state is reset;
    ``witnessed`` carries the equality atoms that already received an
    extensionality witness and must outlive every reset.
    """
    info = _find_conflict(cfg, set() if witnessed is None else witnessed,
                          replay)
    if info is not None and apply:
        cfg.add_formula(info.lemma)
        cfg.reset()
    return info


def _find_conflict(cfg: Configuration, witnessed: set[Term],
                   replay: bool) -> Optional[ConflictInfo]:
    interp = cfg.interp
    m = cfg.manager

    # 1. A read reached a constant array whose default disagrees.
    for dest, t in cfg.steps:
        if dest.kind is Kind.CONST_ARRAY and t.kind is Kind.SELECT \
                and interp.value(t) != interp.value(dest.default):
            lits, _ = _conflict_path(cfg, dest, t, replay)
            lemma = _implication(m, lits, m.mk_eq(t, dest.default))
            return _checked(cfg, ConflictInfo(LEMMA_READ_OVER_CONST, lemma))

    pos = {key: k for k, key in enumerate(cfg.steps)}

    # 2. Two reads reached one array, their indices agree, their values
    #    do not.
    for dest, t1, t2 in _entry_pairs(cfg, pos, Kind.SELECT):
        if interp.value(t1.index) != interp.value(t2.index):
            continue
        if interp.value(t1) == interp.value(t2):
            continue
        lits1, _ = _conflict_path(cfg, dest, t1, replay)
        lits2, _ = _conflict_path(cfg, dest, t2, replay)
        ante = lits1 + lits2
        if t1.index is not t2.index:
            ante.append(m.mk_eq(t1.index, t2.index))
        lemma = _implication(m, ante, m.mk_eq(t1, t2))
        return _checked(cfg, ConflictInfo(LEMMA_READ_CONGRUENCE, lemma))

    # 3. A falsified array equality that has no witness read yet.
    for e in cfg.array_eq_atoms:
        if e in witnessed or interp.eval(e):
            continue
        witnessed.add(e)
        lhs, rhs = e.args
        k = m.mk_const(f"__ext_k_{e.id}", lhs.sort.index)
        diff = m.mk_not(m.mk_eq(m.mk_select(lhs, k), m.mk_select(rhs, k)))
        lemma = m.mk_implies(m.mk_not(e), diff)
        return ConflictInfo(LEMMA_EXTENSIONALITY, lemma)

    # 4. Two constant arrays with different defaults reached one array
    #    and some cell escapes both updated-index sets.
    for dest, c1, c2 in _entry_pairs(cfg, pos, Kind.CONST_ARRAY):
        if cfg.ordinal_key(c2) < cfg.ordinal_key(c1):
            c1, c2 = c2, c1
        if interp.value(c1.default) == interp.value(c2.default):
            continue
        sort = c1.sort.index
        idx1 = list(compute_updated_indices(cfg, dest, c1))
        idx2 = list(compute_updated_indices(cfg, dest, c2))
        if not exists_fresh_index(interp, idx1 + idx2, sort):
            continue
        lits1, lits2 = None, None
        if replay:
            r1 = _replayed_path(cfg, dest, c1)
            r2 = _replayed_path(cfg, dest, c2)
            if r1 is not None and r2 is not None and exists_fresh_index(
                    interp, r1[1] + r2[1], sort):
                lits1, idx1 = r1[0], _canonical_indices(cfg, r1[1])
                lits2, idx2 = r2[0], _canonical_indices(cfg, r2[1])
        if lits1 is None or lits2 is None:
            lits1, raw1 = _stored_path(cfg, dest, c1)
            lits2, raw2 = _stored_path(cfg, dest, c2)
            idx1 = _canonical_indices(cfg, raw1)
            idx2 = _canonical_indices(cfg, raw2)
        ante = list(lits1) + list(lits2)
        multiset = list(idx1) + list(idx2)
        if multiset:
            ante.append(m.mk_not(
                m.mk_distinct_n(domain_size(sort), multiset)))
        lemma = _implication(m, ante, m.mk_eq(c1.default, c2.default))
        return _checked(cfg, ConflictInfo(LEMMA_CONST_CONGRUENCE, lemma))

    return None


def _entry_pairs(cfg: Configuration, pos: dict[tuple[Term, Term], int],
                 kind: Kind):
    """Pairs of propagation entries of one kind sharing a destination,
    ordered by when the later entry of the pair was recorded."""
    by_dest: dict[Term, list[Term]] = {}
    for dest, t in cfg.steps:
        if t.kind is kind:
            by_dest.setdefault(dest, []).append(t)
    pairs = []
    for dest, ts in by_dest.items():
        for late in range(1, len(ts)):
            for early in range(late):
                pairs.append((pos[(dest, ts[late])],
                              pos[(dest, ts[early])],
                              dest, ts[early], ts[late]))
    pairs.sort(key=lambda q: (q[0], q[1]))
    for _, _, dest, t1, t2 in pairs:
        yield dest, t1, t2


def _implication(m: TermManager, antecedent: Sequence[Term],
                 consequent: Term) -> Term:
    lits = list(dict.fromkeys(antecedent))
    if not lits:
        return consequent
    if len(lits) == 1:
        return m.mk_implies(lits[0], consequent)
    return m.mk_implies(m.mk_and(lits), consequent)


def _checked(cfg: Configuration, info: ConflictInfo) -> ConflictInfo:
    """In debug mode, insist that a lemma actually rules out the
    interpretation that produced it (witness lemmas are exempt: their
    fresh reads have no value yet)."""
    if cfg.debug and cfg.interp.eval(info.lemma):
        raise InternalError(
            f"{info.rule} lemma does not exclude the interpretation")
    return info


# ---------------------------------------------------------------------------
# Model construction
# ---------------------------------------------------------------------------


def build_model(cfg: Configuration) -> Model:
    """Read a full model off a saturated, conflict-free configuration.

    Scalar constants take their interpretation values.  Array tables
    are built cell by cell: every read propagated to an array pins the
    cell at its index value, and every constant array propagated to it
    pins each cell whose index value differs from all crossed store
    indices to the default.  Pins are then shared across the store
    terms of the formula set — a store result and its base agree on
    every cell except the stored one — and across the array equality
    atoms the interpretation satisfies, because a cell left free in
    one array may be forced through such a link by a pin on the other
    side.  Any cell still free afterwards holds the all-zero element.
    Disagreeing pins are impossible after saturation, so they raise
    :class:`IllDefinedModel` to flag an engine bug.
    """
    interp = cfg.interp
    if interp is None:
        raise InternalError("build_model needs a candidate interpretation")
    cells = _CellSolver(cfg)
    model = Model()
    for t in iter_subterms(cfg.formulas):
        if t.kind is not Kind.CONSTANT:
            continue
        if t.sort.is_array:
            model.set(t, cells.table(t))
        else:
            model.set(t, interp.value(t))
    return model


class _CellSolver:
    """Joint value assignment for the cells of all array terms.

    A cell is one index position of one array term.  Cells are united
    across every store term (result and base share all positions but
    the stored one) and across every array equality atom the
    interpretation satisfies (both sides share all positions); reads
    and constant-array defaults recorded in the propagation map pin
    united groups to element values.
    """

    def __init__(self, cfg: Configuration):
        interp = cfg.interp
        self.interp = interp
        self._parent: dict[tuple[Term, int], tuple[Term, int]] = {}
        self._value: dict[tuple[Term, int], int] = {}
        for t in iter_subterms(cfg.formulas):
            if t.kind is Kind.STORE:
                at = interp.value(t.index)
                for x in range(domain_size(t.sort.index)):
                    if x != at:
                        self._union((t, x), (t.array, x))
            elif (t.kind is Kind.EQ and t.args[0].sort.is_array
                    and interp.eval(t)):
                lhs, rhs = t.args
                for x in range(domain_size(lhs.sort.index)):
                    self._union((lhs, x), (rhs, x))
        for (dest, t) in cfg.steps:
            if t.kind is Kind.SELECT:
                self._pin((dest, interp.value(t.index)), interp.value(t))
            elif t.kind is Kind.CONST_ARRAY:
                blocked = {interp.value(k)
                           for k in compute_updated_indices(cfg, dest, t)}
                val = interp.value(t.default)
                for x in range(domain_size(t.sort.index)):
                    if x not in blocked:
                        self._pin((dest, x), val)

    def _find(self, cell: tuple[Term, int]) -> tuple[Term, int]:
        parent = self._parent
        root = cell
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(cell, cell) != root:
            cell, parent[cell] = parent[cell], root
        return root

    def _union(self, c1: tuple[Term, int], c2: tuple[Term, int]) -> None:
        r1, r2 = self._find(c1), self._find(c2)
        if r1 == r2:
            return
        v1, v2 = self._value.get(r1), self._value.get(r2)
        if v1 is not None and v2 is not None and v1 != v2:
            raise IllDefinedModel(
                f"linked cells at index {c1[1]} of {c1[0]!r} and {c2[0]!r} "
                f"carry the distinct values {v1} and {v2}")
        self._parent[r1] = r2
        if v2 is None and v1 is not None:
            self._value[r2] = v1
        self._value.pop(r1, None)

    def _pin(self, cell: tuple[Term, int], val: int) -> None:
        root = self._find(cell)
        old = self._value.setdefault(root, val)
        if old != val:
            raise IllDefinedModel(
                f"cell at index {cell[1]} of {cell[0]!r} is pinned to "
                f"both {old} and {val}")

    def table(self, array: Term) -> tuple:
        default = zero_value(array.sort.element)
        return tuple(self._value.get(self._find((array, x)), default)
                     for x in range(domain_size(array.sort.index)))


# ---------------------------------------------------------------------------
# The refinement loop
# ---------------------------------------------------------------------------


@dataclass
class SolveStats:
    """Counters describing one :func:`check_sat` run."""

    refinements: int = 0
    iterations: int = 0
    lemma_counts: dict[str, int] = field(default_factory=dict)
    lemma_history: list[tuple[str, Term]] = field(default_factory=list)
    pi_size: int = 0
    ground_conflicts: int = 0
    replay_reasons: bool = True

    def record(self, info: ConflictInfo) -> None:
        self.refinements += 1
        self.lemma_counts[info.rule] = self.lemma_counts.get(info.rule, 0) + 1
        self.lemma_history.append((info.rule, info.lemma))

    def lines(self) -> list[str]:
        out = [f"refinements: {self.refinements}",
               f"iterations: {self.iterations}"]
        for rule in LEMMA_RULES:
            out.append(f"lemmas.{rule}: {self.lemma_counts.get(rule, 0)}")
        out.append(f"propagation-steps: {self.pi_size}")
        out.append("replay-reasons: "
                   + ("on" if self.replay_reasons else "off"))
        out.append("distinct-encoding: eager")
        out.append(f"ground-conflicts: {self.ground_conflicts}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass
class SolveResult:
    """Verdict of :func:`check_sat`: ``sat`` with a model, ``unsat``,
    or ``unknown`` when the ground budget ran out."""

    verdict: str
    model: Optional[Model]
    stats: SolveStats


def check_sat(manager: TermManager, assertions: Iterable[Term], *,
              seed: int = 0,
              budget: Optional[int] = None,
              replay_reasons: bool = True,
              debug_checks: bool = True,
              max_refinements: Optional[int] = None,
              on_saturation: Optional[Callable[[Configuration], None]] = None,
              ) -> SolveResult:
    """Decide the assertions and, when satisfiable, build a model.

    ``seed`` fixes the ground solver's choices, ``budget`` caps its
    conflicts per candidate (exhaustion yields verdict ``unknown``),
    ``max_refinements`` caps lemma iterations (exceeding it raises
    :class:`ResourceLimit`), and ``on_saturation`` is called with the
    configuration after every saturation, before conflicts are checked.
    """
    assertions = list(assertions)
    flat = flatten(manager, assertions)
    cfg = Configuration(manager, flat.all_formulas, debug=debug_checks)
    stats = SolveStats(replay_reasons=replay_reasons)
    witnessed: set[Term] = set()
    while True:
        stats.iterations += 1
        ground = solve_ground(manager, cfg.formulas, seed=seed, budget=budget)
        stats.ground_conflicts += ground.conflicts
        if ground.verdict is None:
            return SolveResult("unknown", None, stats)
        if ground.verdict == "unsat":
            return SolveResult("unsat", None, stats)
        cfg.interp = ground.interpretation
        init_steps(cfg)
        propagate_fixpoint(cfg)
        stats.pi_size = len(cfg.steps)
        if on_saturation is not None:
            on_saturation(cfg)
        info = check_conflicts(cfg, witnessed=witnessed,
                               replay=replay_reasons)
        if info is None:
            model = complete_model(build_model(cfg), assertions)
            if debug_checks:
                for scope in (assertions, cfg.formulas):
                    outcome = validate_model(model, scope)
                    if not outcome:
                        raise InternalError(
                            "constructed model fails "
                            f"{outcome.failing_assertion!r}")
            return SolveResult("sat", model, stats)
        stats.record(ConflictInfo(
            info.rule, substitute(manager, info.lemma, flat.definitions)))
        if max_refinements is not None and stats.refinements > max_refinements:
            raise ResourceLimit(
                f"refinement limit of {max_refinements} exceeded")
