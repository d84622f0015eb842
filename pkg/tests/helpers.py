"""Shared builders for the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from caext import TermManager, Term


@dataclass
class Example2:
    """The two-chain regression formula over BV2 indices and Bool
    elements, with all its constants exposed for per-test tweaks."""

    m: TermManager
    phi: list[Term] = field(default_factory=list)

    def __post_init__(self):
        m = self.m
        bv2 = m.bv_sort(2)
        b = m.bool_sort
        self.asort = m.array_sort(bv2, b)
        self.a = m.mk_const("a", self.asort)
        self.i1, self.j1 = m.mk_const("i1", bv2), m.mk_const("j1", bv2)
        self.i2, self.j2 = m.mk_const("i2", bv2), m.mk_const("j2", bv2)
        self.u1, self.u2 = m.mk_const("u1", b), m.mk_const("u2", b)
        self.u3, self.u4 = m.mk_const("u3", b), m.mk_const("u4", b)
        self.v, self.w = m.mk_const("v", b), m.mk_const("w", b)
        self.cv = m.mk_const_array(self.asort, self.v)
        self.cw = m.mk_const_array(self.asort, self.w)
        self.phi = [
            m.mk_eq(m.mk_store(self.cv, self.i1, self.u1),
                    m.mk_store(self.a, self.j1, self.u2)),
            m.mk_eq(m.mk_store(self.a, self.i2, self.u3),
                    m.mk_store(self.cw, self.j2, self.u4)),
        ]

    @property
    def v_ne_w(self) -> Term:
        return self.m.mk_not(self.m.mk_eq(self.v, self.w))


def store_chain(m: TermManager, base: Term, pairs) -> Term:
    """Nest stores over ``base``; ``pairs`` is a list of (index, value)."""
    t = base
    for i, u in pairs:
        t = m.mk_store(t, i, u)
    return t


def fresh_chain(m: TermManager, base: Term, n: int, tag: str) -> Term:
    """Nest ``n`` stores of fresh constants over ``base``."""
    idx_sort = base.sort.index
    elem_sort = base.sort.element
    pairs = [(m.mk_const(f"{tag}_i{k}", idx_sort),
              m.mk_const(f"{tag}_e{k}", elem_sort)) for k in range(n)]
    return store_chain(m, base, pairs)


def random_instance(seed: int, *, max_scalars: int = 4, max_arrays: int = 2,
                    n_assertions: int = 3):
    """A small deterministic random instance for engine cross-checks.

    Kept deliberately tiny so even the pointwise scalar oracle engine
    finishes instantly.
    """
    rng = random.Random(seed)
    m = TermManager()
    b = m.bool_sort
    idx_sort = rng.choice([b, m.bv_sort(1), m.bv_sort(2)])
    elem_sort = rng.choice([b, m.bv_sort(1)])
    asort = m.array_sort(idx_sort, elem_sort)

    arrays = [m.mk_const(f"a{k}", asort)
              for k in range(rng.randint(1, max_arrays))]
    idxs = [m.mk_const(f"i{k}", idx_sort)
            for k in range(rng.randint(1, max_scalars // 2))]
    elems = [m.mk_const(f"e{k}", elem_sort)
             for k in range(rng.randint(1, max_scalars // 2))]

    def some_index():
        if rng.random() < 0.3:
            from caext import domain_size
            return m.mk_value(idx_sort, rng.randrange(domain_size(idx_sort)))
        return rng.choice(idxs)

    def some_elem():
        if rng.random() < 0.3:
            from caext import domain_size
            return m.mk_value(elem_sort, rng.randrange(domain_size(elem_sort)))
        return rng.choice(elems)

    def array_term(depth: int) -> Term:
        r = rng.random()
        if depth <= 0 or r < 0.4:
            if r < 0.15:
                return m.mk_const_array(asort, some_elem())
            return rng.choice(arrays)
        return m.mk_store(array_term(depth - 1), some_index(), some_elem())

    def bool_term(depth: int) -> Term:
        r = rng.random()
        if depth <= 0 or r < 0.35:
            choice = rng.randrange(3)
            if choice == 0:
                return m.mk_eq(array_term(1), array_term(1))
            if choice == 1:
                return m.mk_eq(some_elem(),
                               m.mk_select(array_term(1), some_index()))
            return m.mk_eq(some_index(), some_index())
        if r < 0.55:
            return m.mk_not(bool_term(depth - 1))
        if r < 0.75:
            return m.mk_and([bool_term(depth - 1), bool_term(depth - 1)])
        return m.mk_or([bool_term(depth - 1), bool_term(depth - 1)])

    assertions = [bool_term(2) for _ in range(n_assertions)]
    return m, assertions
