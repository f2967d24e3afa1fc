"""Exact multivariate polynomials over the integers in named variables.

The prime ``p`` is an ordinary ring variable here.  Rings are ordered tuples
of variable names; by convention ``p`` comes last, which makes the default
degrevlex order treat it as the smallest variable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _name_key(name: str):
    # p last, then letters, then numeric suffix
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)", name)
    if m is None:
        return (1, name, 0)
    head, tail = m.groups()
    return (1 if name == "p" else 0, head, int(tail) if tail else -1)


def sort_names(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_name_key))


class Ring:
    """An ordered list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not _NAME_RE.fullmatch(n):
                raise ValueError(f"bad variable name {n!r}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    @classmethod
    def sorted(cls, names: Iterable[str]) -> "Ring":
        return cls(sort_names(names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def __contains__(self, name):
        return name in self.index

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def extend(self, extra: Iterable[str], front: bool = False) -> "Ring":
        extra = [n for n in extra if n not in self.index]
        return Ring(tuple(extra) + self.names if front else self.names + tuple(extra))

    def drop(self, names: Iterable[str]) -> "Ring":
        names = set(names)
        return Ring(n for n in self.names if n not in names)

    def __call__(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero ints."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, int]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.ring.index[name]
        return max(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def content(self) -> int:
        return reduce(gcd, self.terms.values(), 0)

    def primitive(self) -> "Polynomial":
        """Divide out the content and make the leading coefficient positive."""
        if not self.terms:
            return self
        g = self.content()
        lead = self.terms[max(self.terms, key=_degrevlex_key)]
        if lead < 0:
            g = -g
        return Polynomial(self.ring, {e: c // g for e, c in self.terms.items()})

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def scale_div(self, d: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"{d} does not divide {self}")
            out[e] = q
        return Polynomial(self.ring, out)

    # -- calculus / substitution --------------------------------------
    def diff(self, name: str) -> "Polynomial":
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, t)

    def subs(self, values: Mapping[str, "Polynomial | int"], ring: Ring | None = None) -> "Polynomial":
        """Substitute polynomials (in ``ring``) for variables.

        Variables not in ``values`` are carried over by name into ``ring``.
        """
        ring = ring or self.ring
        images = []
        for n in self.ring.names:
            v = values.get(n)
            if v is None:
                images.append(ring.var(n))
            elif isinstance(v, int):
                images.append(ring.const(v))
            else:
                images.append(v)
        powers: list[dict[int, Polynomial]] = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        total = ring.zero()
        acc: dict = {}
        for e, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + tc
        total = Polynomial(ring, acc)
        return total

    def to_ring(self, ring: Ring) -> "Polynomial":
        """Re-express in a ring containing all variables used here."""
        if ring == self.ring:
            return self
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(ring.index.get(n))
        t = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.names[i]} not in {ring}")
                    ne[j] = k
            t[tuple(ne)] = c
        return Polynomial(ring, t)

    def rename(self, mapping: Mapping[str, str], ring: Ring) -> "Polynomial":
        t = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    n = self.ring.names[i]
                    ne[ring.index[mapping.get(n, n)]] += k
            t[tuple(ne)] = c
        return Polynomial(ring, t)

    def specialize(self, name: str, value: int) -> "Polynomial":
        """Evaluate one variable at an integer, dropping it from the ring."""
        ring = self.ring.drop([name])
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            ne = e[:i] + e[i + 1:]
            t[ne] = t.get(ne, 0) + c * value ** e[i]
        return Polynomial(ring, t)

    # -- text ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: _degrevlex_key(it[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def _degrevlex_key(e: tuple):
    return (sum(e), tuple(-x for x in reversed(e)))


def format_monomial(names, e) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(f.sorted_terms()):
        mono = format_monomial(f.ring.names, e)
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class ParseError(ValueError):
    def __init__(self, msg, text, pos):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.position = pos


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("num", int(num), start))
        elif name is not None:
            toks.append(("name", name, start))
        else:
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_poly(text: str, ring: Ring) -> Polynomial:
    """Parse ``+ - * ^ ( )`` expressions with integer constants.

    Juxtaposition is not multiplication; write ``X0*Y0``.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        sign = 1
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            t = take()
            if t[0] != "num":
                raise ParseError("expected integer exponent", text, t[2])
            base = base ** t[1]
        return base

    def atom():
        kind, val, pos = take()
        if kind == "num":
            return ring.const(val)
        if kind == "name":
            if val not in ring.index:
                raise ParseError(f"unknown variable {val!r}", text, pos)
            return ring.var(val)
        if kind == "op" and val == "(":
            inner = expr()
            k, v, p2 = take()
            if (k, v) != ("op", ")"):
                raise ParseError("expected ')'", text, p2)
            return inner
        if kind == "op" and val == "-":
            return -factor()
        raise ParseError(f"unexpected token {val!r}", text, pos)

    result = expr()
    if peek()[0] != "end":
        raise ParseError("trailing input", text, peek()[2])
    return result


def names_in(text: str) -> set[str]:
    return {t[1] for t in _tokenize(text) if t[0] == "name"}


def parse_many(texts: Iterable[str], ring: Ring | None = None) -> tuple[Ring, list[Polynomial]]:
    texts = list(texts)
    if ring is None:
        used = set()
        for t in texts:
            used |= names_in(t)
        ring = Ring.sorted(used)
    return ring, [parse_poly(t, ring) for t in texts]


def from_fractions(ring: Ring, terms: Mapping[tuple, Fraction]) -> Polynomial:
    """Clear denominators of a rational polynomial, returning its primitive part."""
    den = 1
    for c in terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return Polynomial(ring, {e: int(c * den) for e, c in terms.items()}).primitive()


# -- matrices ------------------------------------------------------------

class PolyMatrix:
    """Small dense matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: Ring, rows):
        rows = [[e if isinstance(e, Polynomial) else ring.const(e) for e in r] for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.ring = ring
        self.rows = rows

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "PolyMatrix":
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n, m = self.shape
        m2, k = other.shape
        if m != m2:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ring.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(k):
                acc = zero
                for t in range(m):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def entries(self) -> list[Polynomial]:
        return [e for r in self.rows for e in r]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def to_ring(self, ring: Ring) -> "PolyMatrix":
        return PolyMatrix(ring, [[e.to_ring(ring) for e in r] for r in self.rows])

    def det(self) -> Polynomial:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        return _det(self.rows, list(range(n)), {})

    def trace(self) -> Polynomial:
        return sum((self.rows[i][i] for i in range(len(self.rows))), self.ring.zero())

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [list(c) for c in zip(*self.rows)])

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    __repr__ = __str__


def _det(rows, cols, memo, start=0):
    # Laplace expansion along successive rows, memoised on the column set
    if not cols:
        return rows[0][0].ring.one() if rows else None
    key = (start, tuple(cols))
    if key in memo:
        return memo[key]
    row = rows[start]
    acc = row[cols[0]].ring.zero()
    for pos, c in enumerate(cols):
        entry = row[c]
        if not entry:
            continue
        sub = _det(rows, cols[:pos] + cols[pos + 1:], memo, start + 1)
        if sub:
            acc = acc + entry * sub if pos % 2 == 0 else acc - entry * sub
    memo[key] = acc
    return acc


def jacobian(gens: list[Polynomial], names: list[str]) -> PolyMatrix:
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    return PolyMatrix(ring, [[g.diff(n) for n in names] for g in gens])


def minors(M: PolyMatrix, k: int) -> list[Polynomial]:
    """All k x k minors, rows-major over row subsets then column subsets."""
    n, m = M.shape
    if not 1 <= k <= min(n, m):
        raise ValueError(f"minor size {k} out of range for {M.shape}")
    out = []
    for rsel in combinations(range(n), k):
        sub = [M.rows[r] for r in rsel]
        memo: dict = {}
        for csel in combinations(range(m), k):
            out.append(_det(sub, list(csel), memo))
    return out
