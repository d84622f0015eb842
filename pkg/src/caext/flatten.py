"""Rewrite assertions into flat literals plus fresh-constant definitions.

A *leaf* is an uninterpreted constant, a value literal, or a constant
array whose default is a leaf.  A literal is flat when it is a Boolean
leaf, an equality or distinct_N over leaves, an equality between a leaf
and a single application over leaves, or a negation of one of these.
Boolean structure (and/or/not/implies/ite over Bool) is preserved;
non-Boolean ites are compiled into a fresh constant with two guarded
equalities.  The conjunction of the result is equisatisfiable with the
input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .terms import Kind, Term, TermManager

_APP_KINDS = (Kind.SELECT, Kind.STORE)
_STRUCTURE = (Kind.NOT, Kind.AND, Kind.OR, Kind.IMPLIES)


def is_leaf(t: Term) -> bool:
    """Constants, values, and constant arrays over such defaults."""
    if t.kind in (Kind.CONSTANT, Kind.VALUE):
        return True
    if t.kind is Kind.CONST_ARRAY:
        return t.default.kind in (Kind.CONSTANT, Kind.VALUE)
    return False


def is_flat_application(t: Term) -> bool:
    """A single select/store/const-array layer over leaves."""
    if t.kind in _APP_KINDS:
        return all(is_leaf(a) for a in t.args)
    if t.kind is Kind.CONST_ARRAY:
        return is_leaf(t.default)
    return False


def is_flat_atom(t: Term, *, allow_application: bool) -> bool:
    if t.sort.is_bool and is_leaf(t):
        return True
    if t.kind is Kind.EQ:
        lhs, rhs = t.args
        if is_leaf(lhs) and is_leaf(rhs):
            return True
        if allow_application:
            return ((is_leaf(lhs) and is_flat_application(rhs))
                    or (is_flat_application(lhs) and is_leaf(rhs)))
        return False
    if t.kind is Kind.DISTINCT_N:
        return all(is_leaf(a) for a in t.args)
    return False


def is_flat_formula(t: Term) -> bool:
    """Boolean structure over flat atoms.

    The one-application equality form is only admitted as a positive
    top-level unit; underneath any connective, atoms are leaf-only, so
    negated array equalities are always constant-vs-constant.
    """
    if is_flat_atom(t, allow_application=True):
        return True
    return _flat_sub(t)


def _flat_sub(t: Term) -> bool:
    if is_flat_atom(t, allow_application=False):
        return True
    if t.kind in _STRUCTURE or (t.kind is Kind.ITE and t.sort.is_bool):
        return all(_flat_sub(a) for a in t.args)
    return False


@dataclass
class FlatResult:
    """Flattened formulas plus the definitions introduced on the way."""

    formulas: list[Term]
    definitions: dict[Term, Term]
    manager: TermManager = field(repr=False)

    @property
    def definition_units(self) -> list[Term]:
        m = self.manager
        return [m.mk_eq(x, d) for x, d in self.definitions.items()]

    @property
    def all_formulas(self) -> list[Term]:
        return self.definition_units + self.formulas

    def is_flat(self) -> bool:
        return all(is_flat_formula(f) for f in self.all_formulas)


class _Flattener:
    def __init__(self, m: TermManager):
        self.m = m
        self.definitions: dict[Term, Term] = {}
        self.guards: list[Term] = []
        self._names: dict[Term, Term] = {}

    def name(self, t: Term) -> Term:
        """Reduce ``t`` to a leaf, introducing definitions as needed."""
        if is_leaf(t):
            return t
        cached = self._names.get(t)
        if cached is not None:
            return cached
        m = self.m
        if t.sort.is_bool and t.kind not in _APP_KINDS:
            # A Boolean formula in a term position: bind it to a fresh
            # constant with an iff guard.
            body = self.formula(t)
            fresh = m.fresh_const(m.bool_sort)
            self.guards.append(m.mk_implies(fresh, body))
            self.guards.append(m.mk_implies(body, fresh))
        elif t.kind is Kind.CONST_ARRAY:
            fresh = m.mk_const_array(t.sort, self.name(t.default))
        elif t.kind in _APP_KINDS:
            app = m.mk_term(t.kind, [self.name(a) for a in t.args],
                            sort=t.sort)
            fresh = m.fresh_const(t.sort)
            self.definitions[fresh] = app
        elif t.kind is Kind.ITE:
            cond = self.formula(t.args[0])
            then_leaf = self.name(t.args[1])
            else_leaf = self.name(t.args[2])
            fresh = m.fresh_const(t.sort)
            self.guards.append(m.mk_implies(cond, m.mk_eq(fresh, then_leaf)))
            self.guards.append(
                m.mk_implies(m.mk_not(cond), m.mk_eq(fresh, else_leaf)))
        else:
            raise AssertionError(f"cannot name {t!r}")
        self._names[t] = fresh
        return fresh

    def atom(self, t: Term) -> Term:
        m = self.m
        if t.kind is Kind.EQ:
            lhs, rhs = (self.name(a) for a in t.args)
            return m.mk_eq(lhs, rhs)
        if t.kind is Kind.DISTINCT_N:
            return m.mk_distinct_n(t.n, [self.name(a) for a in t.args])
        return self.name(t)  # Boolean-sorted constant, value, or read

    def formula(self, t: Term) -> Term:
        m = self.m
        if t.kind in _STRUCTURE or (t.kind is Kind.ITE and t.sort.is_bool):
            return m.mk_term(t.kind, [self.formula(a) for a in t.args])
        return self.atom(t)

    def unit(self, t: Term) -> Term:
        """A top-level assertion; already-flat atoms pass through."""
        if is_flat_atom(t, allow_application=True):
            return t
        return self.formula(t)


def flatten(m: TermManager, assertions: Iterable[Term]) -> FlatResult:
    """Flatten ``assertions`` into an equisatisfiable set of flat
    formulas plus definitions."""
    fl = _Flattener(m)
    units = [fl.unit(a) for a in assertions]
    return FlatResult(units + fl.guards, fl.definitions, m)
