"""Ideals with cached Gröbner bases, and the ideal operations built on them."""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

from .groebner import Budget, BudgetExhausted, Engine, MonomialOrder, DEFAULT_BUDGET
from .poly import Polynomial, Ring, parse_many, format_poly


def _fresh(ring: Ring, stem: str) -> str:
    i = 0
    while f"{stem}{i}" in ring.index:
        i += 1
    return f"{stem}{i}"


class Ideal:
    def __init__(self, ring: Ring, gens: Iterable[Polynomial]):
        gens = [g.to_ring(ring) if g.ring != ring else g for g in gens]
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        self._gb: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, texts: Sequence[str], ring: Ring | None = None) -> "Ideal":
        ring, polys = parse_many(texts, ring)
        return cls(ring, polys)

    def __repr__(self):
        return f"Ideal({self.ring.names}, [{', '.join(map(format_poly, self.gens))}])"

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __add__(self, other: "Ideal | Iterable[Polynomial]") -> "Ideal":
        extra = other.gens if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.gens + tuple(extra))

    def to_ring(self, ring: Ring) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def default_order(self) -> MonomialOrder:
        return MonomialOrder.degrevlex(self.ring.nvars)

    # Gröbner data -----------------------------------------------------
    def _basis_data(self, order: MonomialOrder | None, budget: Budget | None):
        order = order or self.default_order()
        with self._lock:
            hit = self._gb.get(order)
            if hit is not None:
                return hit
        eng = Engine(self.ring, order, budget)
        elems = eng.groebner([eng.from_poly(g) for g in self.gens])
        data = (eng, elems)
        with self._lock:
            self._gb.setdefault(order, data)
        return data

    def groebner(self, order: MonomialOrder | None = None, budget: Budget | None = None) -> list[Polynomial]:
        eng, elems = self._basis_data(order, budget)
        return [eng.to_poly(eng.elem_dict(g)) for g in elems]

    def reduce(self, g: Polynomial, order: MonomialOrder | None = None, budget: Budget | None = None) -> Polynomial:
        eng, elems = self._basis_data(order, budget)
        return eng.to_poly(eng.reduce(eng.from_poly(g.to_ring(self.ring)), elems))

    def contains(self, g: Polynomial, budget: Budget | None = None) -> bool:
        eng, elems = self._basis_data(None, budget)
        return not eng.reduce(eng.from_poly(g.to_ring(self.ring)), elems)

    def is_unit(self, budget: Budget | None = None) -> bool:
        return self.contains(self.ring.one(), budget)

    def reduced_gens(self, budget: Budget | None = None) -> list[Polynomial]:
        """The reduced degrevlex Gröbner basis: a canonical generating set."""
        return self.groebner(None, budget)


def groebner_basis(I: Ideal, order: MonomialOrder | None = None, budget: Budget | None = None) -> list[Polynomial]:
    return I.groebner(order, budget)


def normal_form(g: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of ``g`` modulo ``basis``, which must already be a Gröbner basis under ``order``."""
    ring = g.ring
    order = order or MonomialOrder.degrevlex(ring.nvars)
    eng = Engine(ring, order, Budget.unlimited())
    elems = [eng.make_elem(eng.from_poly(b)) for b in basis if b]
    return eng.to_poly(eng.reduce(eng.from_poly(g), elems))


def ideal_contains(I: Ideal, g: Polynomial, budget: Budget | None = None) -> bool:
    return I.contains(g, budget)


def ideal_equal(I: Ideal, J: Ideal, budget: Budget | None = None) -> bool:
    if I.ring != J.ring:
        raise ValueError(f"ideals live in different rings: {I.ring} vs {J.ring}")
    return all(J.contains(g, budget) for g in I.gens) and all(I.contains(g, budget) for g in J.gens)


def eliminate(I: Ideal, names: Iterable[str], budget: Budget | None = None) -> Ideal:
    """I intersected with the polynomial ring on the remaining variables."""
    names = set(names)
    for n in names:
        if n not in I.ring:
            raise ValueError(f"{n} is not a variable of {I.ring}")
    small = I.ring.drop(names)
    if not names:
        return Ideal(small, I.gens)
    front = [I.ring.index[n] for n in names]
    order = MonomialOrder.block(I.ring.nvars, front)
    kept = []
    for g in I.groebner(order, budget):
        if not (g.variables() & names):
            kept.append(g.to_ring(small))
    return Ideal(small, kept)


def _saturate_extended(I: Ideal, f: Polynomial, budget) -> Ideal:
    t = _fresh(I.ring, "t")
    big = I.ring.extend([t], front=True)
    tv = big.var(t)
    J = Ideal(big, [g.to_ring(big) for g in I.gens] + [tv * f.to_ring(big) - 1])
    return eliminate(J, [t], budget).to_ring(I.ring)


def exact_quotient(g: Polynomial, f: Polynomial) -> Polynomial:
    """g / f, assuming f divides g exactly."""
    ring = g.ring
    eng = Engine(ring, MonomialOrder.degrevlex(ring.nvars), Budget.unlimited())
    fe = eng.make_elem(eng.from_poly(f))
    lc_f = f.terms[eng.order.unpack(fe.lexp)]
    rem = eng.from_poly(g)
    quot = {}
    guard = eng.order.guard
    while rem:
        m = max(rem)
        e = eng.exps[m]
        d = e - fe.lexp
        if d < 0 or d & guard:
            raise ArithmeticError("divisor does not divide")
        c = rem.pop(m)
        dk = m - fe.lkey
        eng.exps[dk] = d
        quot[dk] = quot.get(dk, 0) + c
        for k, ex, gc in fe.tail:
            nk = k + dk
            eng.exps.setdefault(nk, ex + d)
            v = rem.get(nk, 0) - c * gc
            if v:
                rem[nk] = v
            else:
                rem.pop(nk, None)
    # quot is g / (f / lc_f); rescale
    terms = {}
    for k, c in quot.items():
        q = c / lc_f
        if q.denominator != 1:
            raise ArithmeticError("non-integral quotient")
        terms[eng.order.unpack(eng.exps[k])] = int(q)
    return Polynomial(ring, terms)


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    t = _fresh(I.ring, "t")
    big = I.ring.extend([t], front=True)
    tv = big.var(t)
    gens = [tv * g.to_ring(big) for g in I.gens] + [(1 - tv) * g.to_ring(big) for g in J.gens]
    return eliminate(Ideal(big, gens), [t], budget).to_ring(I.ring)


def colon(I: Ideal, f: Polynomial, budget: Budget | None = None) -> Ideal:
    """I : f, via I ∩ (f) divided by f."""
    cap = intersect(I, Ideal(I.ring, [f]), budget)
    return Ideal(I.ring, [exact_quotient(g, f) for g in cap.gens])


def _saturate_colon(I: Ideal, f: Polynomial, budget) -> Ideal:
    cur = Ideal(I.ring, I.reduced_gens(budget))
    while True:
        nxt = colon(cur, f, budget)
        nxt = Ideal(I.ring, nxt.reduced_gens(budget))
        if nxt.gens == cur.gens:
            return cur
        cur = nxt


def _saturate_revlex(I: Ideal, f: Polynomial, budget) -> Ideal:
    # Bayer: with f the last variable under degrevlex, divide the basis by powers of f
    (name,) = f.variables()
    if f != I.ring.var(name) or I.ring.names[-1] != name:
        raise ValueError("revlex saturation needs f to be the last ring variable")
    i = I.ring.nvars - 1
    out = []
    for g in I.groebner(None, budget):
        k = min(e[i] for e in g.terms)
        out.append(Polynomial(I.ring, {e[:i] + (e[i] - k,): c for e, c in g.terms.items()}))
    return Ideal(I.ring, out)


SATURATION_METHODS = {
    "extended": _saturate_extended,
    "colon": _saturate_colon,
    "revlex": _saturate_revlex,
}


def saturate(I: Ideal, f: Polynomial, method: str = "extended", budget: Budget | None = None) -> Ideal:
    """I : f^infinity."""
    if not f:
        raise ValueError("cannot saturate by zero")
    if not I.gens:
        return I
    return SATURATION_METHODS[method](I, f.to_ring(I.ring), budget)


def radical_contains(I: Ideal, g: Polynomial, budget: Budget | None = None) -> bool:
    """Rabinowitsch: g is in the radical iff 1 lies in I + (t*g - 1)."""
    t = _fresh(I.ring, "t")
    big = I.ring.extend([t], front=True)
    J = Ideal(big, [h.to_ring(big) for h in I.gens] + [big.var(t) * g.to_ring(big) - 1])
    return J.is_unit(budget)


def specialize(I: Ideal, name: str, value: int) -> Ideal:
    """Substitute an integer for one variable (used for p -> prime spot checks)."""
    return Ideal(I.ring.drop([name]), [g.specialize(name, value) for g in I.gens])


__all__ = [
    "Budget",
    "BudgetExhausted",
    "DEFAULT_BUDGET",
    "Ideal",
    "colon",
    "eliminate",
    "exact_quotient",
    "groebner_basis",
    "ideal_contains",
    "ideal_equal",
    "intersect",
    "normal_form",
    "radical_contains",
    "saturate",
    "specialize",
]
