"""Combinatorial genes: digits, the rule solver, equivalence, clusters and fibers."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from . import weyl
from .weyl import ID, W0, ShapeData, cyc

A, B, AB, O = "A", "B", "AB", "O"
SYMBOLS = (A, B, AB, O)


class DegenerateInput(ValueError):
    pass


class GeneError(ValueError):
    pass


class ZeroRing(GeneError):
    """Some column of the gene is (O, O): the deformation ring vanishes."""


@dataclass(frozen=True)
class Gene:
    entries: tuple

    def __post_init__(self):
        e = tuple(self.entries)
        if len(e) % 2 or not e:
            raise GeneError("a gene has an even, positive number of entries")
        for x in e:
            if x not in SYMBOLS:
                raise GeneError(f"bad gene symbol {x!r}")
        object.__setattr__(self, "entries", e)

    @property
    def f(self) -> int:
        return len(self.entries) // 2

    def __getitem__(self, j: int) -> str:
        return self.entries[cyc(j, len(self.entries))]

    def __len__(self):
        return len(self.entries)

    def column(self, j: int) -> tuple:
        """(X_{j+f}, X_j), top over bottom."""
        return (self[j + self.f], self[j])

    def swap(self) -> "Gene":
        flip = {A: B, B: A}
        return Gene(tuple(flip.get(x, x) for x in self.entries))

    def shift(self, n: int = 1) -> "Gene":
        """X'_{j'} = X_{j'+n}."""
        return Gene(tuple(self[j + n] for j in range(len(self))))

    def text(self) -> str:
        f = self.f
        return " ".join(self.entries[f:]) + " / " + " ".join(self.entries[:f])

    @classmethod
    def parse(cls, text: str) -> "Gene":
        top, _, bottom = text.partition("/")
        top, bottom = top.split(), bottom.split()
        if len(top) != len(bottom):
            raise GeneError(f"rows of {text!r} differ in length")
        return cls(tuple(bottom) + tuple(top))

    def __str__(self):
        return self.text()


# -- digits -------------------------------------------------------------------

def vi_residue(gamma: int, h: int, p: int, f: int) -> int:
    q = p**f
    S = sum(p**j for j in range(f))
    if h % (q + 1) == 0:
        raise DegenerateInput("h is divisible by p^f + 1")
    if (h - 2 * gamma - S) % (q - 1) == 0:
        raise DegenerateInput("h - 2*gamma - sum p^j is divisible by p^f - 1")
    return (h - (q + 1) * (h - gamma - S)) % (q * q - 1)


def digits_of_residue(value: int, p: int, f: int) -> tuple:
    mod = p ** (2 * f) - 1
    value %= mod
    if value == 0:
        raise DegenerateInput("zero residue has no digit expansion")
    out = []
    for _ in range(2 * f):
        value, d = divmod(value, p)
        out.append(d)
    return tuple(reversed(out))


def digits(gamma: int, h: int, p: int, f: int) -> tuple:
    """(v_0, ..., v_{2f-1}), most significant first."""
    return digits_of_residue(vi_residue(gamma, h, p, f), p, f)


# -- the rule solver ----------------------------------------------------------

def _rule(v: int, next_is_o: bool) -> str:
    if v == 0:
        return AB if next_is_o else A
    if v == 1:
        return O if next_is_o else B
    return O


def satisfies_rules(X: Gene, v) -> bool:
    return all(X[j] == _rule(v[j], X[j + 1] == O) for j in range(len(v)))


def club1(X: Gene) -> bool:
    return all(X[j] in (AB, O) for j in range(len(X)) if X[j + 1] == O)


def club2(X: Gene) -> bool:
    return all(X[j] in (A, B, O) for j in range(len(X)) if X[j + 1] != O)


def club3(X: Gene) -> bool:
    return any(X[j] == O or X[j] != X[j + 1] for j in range(len(X)))


def club4(X: Gene) -> bool:
    return all(X.column(j) != (O, O) for j in range(X.f))


def is_gene(X: Gene) -> bool:
    return club1(X) and club2(X) and club3(X)


def _from_pattern(v, pattern) -> Gene | None:
    n = len(v)
    X = tuple(_rule(v[j], pattern[cyc(j + 1, n)]) for j in range(n))
    if all((X[j] == O) == pattern[j] for j in range(n)):
        return Gene(X)
    return None


def _solve_propagate(v) -> list[Gene]:
    n = len(v)
    starts = [j for j in range(n) if v[j] != 1]
    if not starts:
        return [Gene((O,) * n), Gene((B,) * n)]
    pattern = [None] * n
    j0 = starts[0]
    pattern[j0] = v[j0] >= 2
    j = j0
    for _ in range(n - 1):
        prev = cyc(j - 1, n)
        pattern[prev] = v[prev] >= 2 or (v[prev] == 1 and pattern[j])
        j = prev
    X = _from_pattern(v, pattern)
    return [X] if X is not None else []


def _solve_exhaustive(v) -> list[Gene]:
    # a rule-satisfying tuple is fixed by which entries are O
    out = []
    for pattern in product((False, True), repeat=len(v)):
        X = _from_pattern(v, pattern)
        if X is not None:
            out.append(X)
    return out


def gene_from_digits(v) -> Gene:
    v = tuple(v)
    if not v or len(v) % 2:
        raise GeneError("need an even number of digits")
    if not any(v):
        raise DegenerateInput("all-zero digit vector")
    sols = _solve_exhaustive(v) if len(v) <= 12 else _solve_propagate(v)
    sols = [X for X in sols if club3(X)]
    if len(sols) != 1:
        raise GeneError(f"digits {v} give {len(sols)} genes satisfying the rules and club 3")
    return sols[0]


def gene(gamma: int, h: int, p: int, f: int) -> Gene:
    return gene_from_digits(digits(gamma, h, p, f))


# -- equivalence --------------------------------------------------------------

def gene_orbit(X: Gene) -> set:
    """Closure under the global A<->B swap and the shift by one."""
    seen = {X}
    queue = deque([X])
    while queue:
        Y = queue.popleft()
        for Z in (Y.swap(), Y.shift(1)):
            if Z not in seen:
                seen.add(Z)
                queue.append(Z)
    return seen


def gene_equivalent(X: Gene, Y: Gene) -> bool:
    if len(X) != len(Y):
        return False
    return Y in gene_orbit(X)


def canonical(X: Gene) -> Gene:
    return min(gene_orbit(X), key=lambda g: g.entries)


# -- clusters -----------------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    start: int  # j0, in Z/2f
    pivot: int  # l, the first O after the AB
    end: int  # j1, in Z/2f (lifted so start <= pivot - 1 < pivot <= end)

    def span(self, f: int) -> list[int]:
        """Indices of J covered, from start to end."""
        return [cyc(j, f) for j in range(self.start, self.end + 1)]


def clusters(X: Gene) -> list[Cluster] | None:
    """The cluster decomposition of X, or None when X has no O entries."""
    if not club4(X):
        raise ZeroRing("zero deformation ring: some column is (O, O)")
    n, f = len(X), X.f
    if all(x in (A, B) for x in X.entries):
        return None
    found = []
    for a in range(n):
        if X[a] != AB:
            continue
        ell = a + 1
        if X[ell] != O:
            raise GeneError(f"AB at {a} not followed by O")
        end = ell
        while X[end + 1] == O:
            end += 1
            if end - ell > n:
                raise GeneError("all-O gene has no cluster decomposition")
        start = a
        while O not in X.column(start):
            start -= 1
            if a - start > n:
                raise GeneError("no O before the AB")
        found.append(Cluster(start, ell, end))
    # keep one representative per J-interval (the same cluster can be read in both rows)
    seen = {}
    for c in found:
        key = (cyc(c.start, f), c.end - c.start)
        seen.setdefault(key, c)
    out = sorted(seen.values(), key=lambda c: cyc(c.start, f))
    total = sum(c.end - c.start for c in out)
    if total != f:
        raise GeneError(f"clusters of {X.text()} do not partition the circle")
    for c, d in zip(out, out[1:] + out[:1]):
        if cyc(c.end, f) != cyc(d.start, f):
            raise GeneError(f"clusters of {X.text()} do not chain")
    return out


# -- triples ------------------------------------------------------------------

def gene_residue(shape: ShapeData) -> int:
    p, f = shape.p, shape.f
    v = weyl.vprime_tuple(shape)
    return sum(v[j] * p ** (2 * f - 1 - j) for j in range(2 * f)) % (p ** (2 * f) - 1)


def gene_of_triple(shape: ShapeData) -> Gene:
    return gene_from_digits(digits_of_residue(gene_residue(shape), shape.p, shape.f))


def local_tuple(shape: ShapeData, j: int):
    """(s_{j+1}, s_orient,j, Sigma_j, z_{j+1}, w_{j+1}, type at j+1, (v'_{j+f}, v'_j)).

    The digit pair at j is governed by the vertex j+1, so that is the vertex reported.
    """
    from .models import classify_vertex

    f = shape.f
    nxt = cyc(j + 1, f)
    zs = shape.z()
    sig = weyl.sigma_perms(shape)
    v = weyl.vprime_tuple(shape, check_branch=False)
    return (
        shape.s[nxt],
        weyl.partial_orientation(shape.s, j),
        sig[j],
        zs[nxt].w,
        shape.w[nxt],
        classify_vertex(shape.w[nxt], shape.s[nxt], shape.k[nxt]),
        (v[j + f], v[j]),
    )


def branch_shapes(p: int, f: int, kmax: int) -> Iterable[ShapeData]:
    for sh in weyl.small_shapes(p, f, kmax):
        if weyl.in_gene_branch(sh):
            yield sh


def enumerate_fiber(X: Gene, p: int, kmax: int, exact: bool = False) -> list[ShapeData]:
    """Shapes with k_j <= kmax whose gene is equivalent (or equal, if ``exact``) to X."""
    if not (is_gene(X) and club4(X)):
        raise GeneError(f"{X.text()} is not a valid gene")
    if kmax > (p + 1) // 2:
        raise ValueError("kmax exceeds (p+1)/2")
    orbit = {X} if exact else gene_orbit(X)
    return [sh for sh in branch_shapes(p, X.f, kmax) if gene_of_triple(sh) in orbit]


def all_genes(f: int) -> list[Gene]:
    """Every 2f-tuple satisfying clubs 1-4."""
    out = []
    for e in product(SYMBOLS, repeat=2 * f):
        X = Gene(e)
        if is_gene(X) and club4(X):
            out.append(X)
    return out
