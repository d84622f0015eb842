"""Models, term evaluation, and model validation.

A model assigns every uninterpreted constant a concrete value:

* scalar constants map to an ``int`` (Bool uses 0/1, bit-vectors use
  their unsigned bit pattern);
* array constants map to a ``tuple`` of element values of length
  ``domain_size(index sort)``, indexed by the index value.

:func:`eval_term` implements the standard semantics, including
extensional array equality (two arrays are equal iff their tables
agree on every index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import UnassignedConstant
from .terms import Kind, Sort, Term, domain_size, free_constants

Value = Union[int, tuple]


def zero_value(sort: Sort) -> Value:
    """The all-zero value of a sort: 0, or the constant-zero table."""
    if sort.is_array:
        return (0,) * domain_size(sort.index)
    return 0


@dataclass
class Model:
    """A finite assignment of constants to values."""

    values: dict[Term, Value] = field(default_factory=dict)

    def __getitem__(self, const: Term) -> Value:
        try:
            return self.values[const]
        except KeyError:
            raise UnassignedConstant(
                f"model does not assign constant {const!r}") from None

    def __contains__(self, const: Term) -> bool:
        return const in self.values

    def set(self, const: Term, value: Value) -> None:
        self.values[const] = value

    def items(self):
        return self.values.items()


def eval_term(model: Model, term: Term,
              _cache: Optional[dict] = None) -> Value:
    """Evaluate ``term`` under ``model``.

    Returns an ``int`` for scalar-sorted terms and a table ``tuple`` for
    array-sorted terms.  Raises :class:`UnassignedConstant` when the
    model is silent about a constant that occurs in ``term``.
    """
    cache: dict[Term, Value] = {} if _cache is None else _cache

    def go(t: Term) -> Value:
        hit = cache.get(t)
        if hit is not None or t in cache:
            return hit  # type: ignore[return-value]
        k = t.kind
        if k is Kind.CONSTANT:
            v = model[t]
        elif k is Kind.VALUE:
            v = t.value  # type: ignore[assignment]
        elif k is Kind.SELECT:
            table = go(t.array)
            v = table[go(t.index)]  # type: ignore[index]
        elif k is Kind.STORE:
            table = list(go(t.array))  # type: ignore[arg-type]
            table[go(t.index)] = go(t.stored_value)  # type: ignore[index]
            v = tuple(table)
        elif k is Kind.CONST_ARRAY:
            v = (go(t.default),) * domain_size(t.sort.index)
        elif k is Kind.EQ:
            v = int(go(t.args[0]) == go(t.args[1]))
        elif k is Kind.NOT:
            v = 1 - go(t.args[0])  # type: ignore[operator]
        elif k is Kind.AND:
            v = int(all(go(a) for a in t.args))
        elif k is Kind.OR:
            v = int(any(go(a) for a in t.args))
        elif k is Kind.IMPLIES:
            v = int(bool(go(t.args[1])) or not go(t.args[0]))
        elif k is Kind.ITE:
            v = go(t.args[1]) if go(t.args[0]) else go(t.args[2])
        elif k is Kind.DISTINCT_N:
            v = int(len({go(a) for a in t.args}) >= (t.n or 1))
        else:  # pragma: no cover - all kinds handled above
            raise AssertionError(f"unhandled kind {k}")
        cache[t] = v
        return v

    return go(term)


@dataclass
class ValidationResult:
    """Outcome of checking a model against a list of assertions."""

    ok: bool
    failing_assertion: Optional[Term] = None

    def __bool__(self) -> bool:
        return self.ok


def validate_model(model: Model, assertions: Iterable[Term]) -> ValidationResult:
    """Check that every assertion evaluates to true under ``model``.

    Returns the first failing assertion, if any.
    """
    cache: dict = {}
    for a in assertions:
        if not eval_term(model, a, cache):
            return ValidationResult(False, a)
    return ValidationResult(True)


def complete_model(model: Model, assertions: Iterable[Term]) -> Model:
    """Extend ``model`` with all-zero values for any constant of
    ``assertions`` it does not assign."""
    for c in free_constants(assertions):
        if c not in model:
            model.set(c, zero_value(c.sort))
    return model
