"""Buchberger's algorithm over the rationals.

Monomials are packed into two Python ints: an order key (comparison of keys
is comparison in the term order, and keys add under multiplication) and an
exponent word with guard bits used for divisibility tests.  Coefficients are
gmpy2 rationals; basis elements are kept monic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

from .poly import Polynomial, Ring

KEY_BITS = 24
EXP_BITS = 16
MAX_EXP = (1 << (EXP_BITS - 1)) - 1


class BudgetExhausted(RuntimeError):
    """Raised when a Gröbner computation exceeds its resource caps."""


@dataclass
class Budget:
    max_basis: int = 4000
    max_steps: int = 2_000_000

    @classmethod
    def unlimited(cls):
        return cls(max_basis=10**9, max_steps=10**12)


DEFAULT_BUDGET = Budget()


class MonomialOrder:
    """A term order given by nonnegative integer weight rows compared lexicographically.

    Every order used here is degrevlex on one or two blocks of variables, and
    for those the rows are 0/1 prefix-sum indicators.
    """

    def __init__(self, nvars: int, rows: list[tuple[int, ...]], name: str):
        self.nvars = nvars
        self.rows = [tuple(r) for r in rows]
        self.name = name
        m = len(self.rows)
        self.key_weights = [
            sum(r[i] << (KEY_BITS * (m - 1 - k)) for k, r in enumerate(self.rows)) for i in range(nvars)
        ]
        self.exp_weights = [1 << (EXP_BITS * i) for i in range(nvars)]
        self.guard = sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(nvars))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(self.rows))

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    @staticmethod
    def _degrevlex_rows(nvars: int, block: list[int]) -> list[tuple[int, ...]]:
        rows = [tuple(1 if i in block else 0 for i in range(nvars))]
        # prefix sums S_{m-1}, ..., S_1 of the block, most significant first
        for cut in range(len(block) - 1, 0, -1):
            chosen = set(block[:cut])
            rows.append(tuple(1 if i in chosen else 0 for i in range(nvars)))
        return rows

    @classmethod
    def degrevlex(cls, nvars: int) -> "MonomialOrder":
        return cls(nvars, cls._degrevlex_rows(nvars, list(range(nvars))), "degrevlex")

    @classmethod
    def block(cls, nvars: int, front: list[int]) -> "MonomialOrder":
        """Elimination order: degrevlex on ``front``, ties broken by degrevlex on the rest."""
        front = sorted(front)
        back = [i for i in range(nvars) if i not in front]
        rows = cls._degrevlex_rows(nvars, front) if front else []
        rows += cls._degrevlex_rows(nvars, back) if back else []
        return cls(nvars, rows, f"block{tuple(front)}")

    def key(self, e) -> int:
        return sum(k * w for k, w in zip(e, self.key_weights))

    def packed(self, e) -> int:
        if any(k > MAX_EXP for k in e):
            raise BudgetExhausted("exponent too large for packed monomials")
        return sum(k << (EXP_BITS * i) for i, k in enumerate(e))

    def unpack(self, packed: int) -> tuple[int, ...]:
        mask = (1 << EXP_BITS) - 1
        return tuple((packed >> (EXP_BITS * i)) & mask for i in range(self.nvars))


class _Elem:
    """A monic basis polynomial: lead data plus tail terms (key, exp, coeff)."""

    __slots__ = ("lkey", "lexp", "tail", "sugar", "lead_tuple")

    def __init__(self, lkey, lexp, tail, sugar, lead_tuple):
        self.lkey = lkey
        self.lexp = lexp
        self.tail = tail
        self.sugar = sugar
        self.lead_tuple = lead_tuple


class Engine:
    """Polynomial arithmetic on packed monomials for one ring and order."""

    def __init__(self, ring: Ring, order: MonomialOrder, budget: Budget | None = None):
        if order.nvars != ring.nvars:
            raise ValueError("order does not match ring")
        self.ring = ring
        self.order = order
        self.budget = budget or DEFAULT_BUDGET
        self.exps: dict[int, int] = {}  # order key -> packed exponents
        self.steps = 0

    # conversion -------------------------------------------------------
    def from_poly(self, f: Polynomial) -> dict:
        out = {}
        order = self.order
        for e, c in f.terms.items():
            k = order.key(e)
            self.exps[k] = order.packed(e)
            out[k] = _Q(c)
        return out

    def to_poly(self, d: dict) -> Polynomial:
        if not d:
            return self.ring.zero()
        den = 1
        for c in d.values():
            q = Fraction(int(c.numerator), int(c.denominator))
            den = den * q.denominator // _gcd(den, q.denominator)
        terms = {}
        for k, c in d.items():
            e = self.order.unpack(self.exps[k])
            terms[e] = int(c * den)
        return Polynomial(self.ring, terms).primitive()

    def degree(self, k: int) -> int:
        return sum(self.order.unpack(self.exps[k]))

    def make_elem(self, d: dict, sugar: int | None = None) -> _Elem:
        lk = max(d)
        lc = d[lk]
        inv = 1 / lc
        exps = self.exps
        tail = [(k, exps[k], c * inv) for k, c in d.items() if k != lk]
        tail.sort(reverse=True)
        if sugar is None:
            sugar = max(self.degree(k) for k in d)
        lt = self.order.unpack(exps[lk])
        return _Elem(lk, exps[lk], tail, sugar, lt)

    def elem_dict(self, g: _Elem) -> dict:
        d = {g.lkey: _Q(1)}
        for k, _, c in g.tail:
            d[k] = c
        return d

    # reduction -------------------------------------------------------
    def _find_divisor(self, e: int, basis):
        guard = self.order.guard
        for g in basis:
            d = e - g.lexp
            if d >= 0 and not d & guard:
                return g
        return None

    def reduce(self, f: dict, basis, full: bool = True) -> dict:
        """Normal form of ``f`` (a dict key -> coeff) modulo a list of _Elem."""
        f = dict(f)
        r = {}
        exps = self.exps
        guard = self.order.guard
        max_steps = self.budget.max_steps
        while f:
            m = max(f)
            e = exps[m]
            g = None
            for cand in basis:
                d = e - cand.lexp
                if d >= 0 and not d & guard:
                    g = cand
                    break
            if g is None:
                if not full:
                    r.update(f)
                    return r
                r[m] = f.pop(m)
                continue
            c = f.pop(m)
            dk = m - g.lkey
            de = e - g.lexp
            for k, ex, gc in g.tail:
                nk = k + dk
                if nk not in exps:
                    exps[nk] = ex + de
                v = f.get(nk)
                if v is None:
                    f[nk] = -c * gc
                else:
                    v = v - c * gc
                    if v:
                        f[nk] = v
                    else:
                        del f[nk]
            self.steps += 1
            if self.steps > max_steps:
                raise BudgetExhausted(f"reduction step budget {max_steps} exhausted")
        return r

    def spoly(self, a: _Elem, b: _Elem) -> dict:
        lcm = tuple(map(max, a.lead_tuple, b.lead_tuple))
        lkey = self.order.key(lcm)
        lexp = self.order.packed(lcm)
        out = {}
        exps = self.exps
        for g, sign in ((a, 1), (b, -1)):
            dk = lkey - g.lkey
            de = lexp - g.lexp
            for k, ex, c in g.tail:
                nk = k + dk
                if nk not in exps:
                    exps[nk] = ex + de
                v = out.get(nk, 0) + sign * c
                if v:
                    out[nk] = v
                else:
                    out.pop(nk, None)
        return out

    # Buchberger ------------------------------------------------------
    def groebner(self, polys: list[dict]) -> list[_Elem]:
        """Reduced Gröbner basis of the ideal generated by ``polys``."""
        basis: list[_Elem] = []
        active: list[int] = []  # indices into basis still part of G
        pairs: list = []
        pair_set = set()
        counter = 0
        lcm_key = self.order.key

        def lcm_tuple(a, b):
            return tuple(map(max, a.lead_tuple, b.lead_tuple))

        def divides(s, t):
            return all(x <= y for x, y in zip(s, t))

        def coprime(a, b):
            return not any(x and y for x, y in zip(a.lead_tuple, b.lead_tuple))

        def add(h_elem):
            nonlocal counter, active
            h = len(basis)
            basis.append(h_elem)
            # Gebauer-Moeller update
            cands = []
            for g in active:
                cands.append((g, lcm_tuple(basis[g], h_elem)))
            keep = []
            for idx, (g, l) in enumerate(cands):
                if coprime(basis[g], h_elem):
                    keep.append((g, l, True))
                    continue
                redundant = False
                for jdx, (g2, l2) in enumerate(cands):
                    if jdx == idx:
                        continue
                    if divides(l2, l) and (l2 != l or jdx < idx):
                        redundant = True
                        break
                if not redundant:
                    keep.append((g, l, False))
            # drop old pairs made redundant by h
            ht = h_elem.lead_tuple
            for pr in list(pair_set):
                i, j = pr
                l = lcm_tuple(basis[i], basis[j])
                if divides(ht, l):
                    li = lcm_tuple(basis[i], h_elem)
                    lj = lcm_tuple(basis[j], h_elem)
                    if li != l and lj != l:
                        pair_set.discard(pr)
            for g, l, cop in keep:
                if cop:
                    continue
                pr = (g, h)
                pair_set.add(pr)
                sug = max(basis[g].sugar - sum(basis[g].lead_tuple), h_elem.sugar - sum(ht)) + sum(l)
                heapq.heappush(pairs, (sug, lcm_key(l), counter, pr))
                counter += 1
            active = [g for g in active if not divides(ht, basis[g].lead_tuple)] + [h]
            if len(active) > self.budget.max_basis:
                raise BudgetExhausted(f"basis size budget {self.budget.max_basis} exhausted")

        # initial interreduction keeps the input small
        todo = sorted((p for p in polys if p), key=lambda d: max(d))
        for d in todo:
            cur = [basis[g] for g in active]
            r = self.reduce(d, cur)
            if r:
                add(self.make_elem(r))
                if not basis[-1].lead_tuple or not any(basis[-1].lead_tuple):
                    return [basis[-1]]

        while pairs:
            _, _, _, pr = heapq.heappop(pairs)
            if pr not in pair_set:
                continue
            pair_set.discard(pr)
            i, j = pr
            s = self.spoly(basis[i], basis[j])
            if not s:
                continue
            cur = [basis[g] for g in active]
            r = self.reduce(s, cur)
            if r:
                sug = max(basis[i].sugar - sum(basis[i].lead_tuple), basis[j].sugar - sum(basis[j].lead_tuple))
                sug += sum(lcm_tuple(basis[i], basis[j]))
                e = self.make_elem(r, sug)
                if not any(e.lead_tuple):
                    return [self.make_elem({self.order.key((0,) * self.order.nvars): _Q(1)})]
                add(e)
        return self._reduced([basis[g] for g in active])

    def _reduced(self, G: list[_Elem]) -> list[_Elem]:
        # minimal basis, then tail-reduce each element
        G = sorted(G, key=lambda g: g.lkey)
        minimal = []
        for g in G:
            if not any(
                all(x <= y for x, y in zip(h.lead_tuple, g.lead_tuple)) for h in minimal
            ):
                minimal.append(g)
        out = []
        for g in minimal:
            others = [h for h in minimal if h is not g]
            tail = {k: c for k, _, c in g.tail}
            red = self.reduce(tail, others) if tail else {}
            red[g.lkey] = _Q(1)
            out.append(self.make_elem(red, g.sugar))
        out.sort(key=lambda g: g.lkey, reverse=True)
        return out

    def is_groebner(self, G: list[_Elem]) -> bool:
        """Buchberger's criterion: every S-polynomial reduces to zero."""
        for a in range(len(G)):
            for b in range(a + 1, len(G)):
                s = self.spoly(G[a], G[b])
                if s and self.reduce(s, G):
                    return False
        return True


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
