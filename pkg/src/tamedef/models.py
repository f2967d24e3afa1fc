"""Ring presentations attached to a shape: vertex types, fragments, naive and saturated models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import (
    Budget,
    Ideal,
    PolyMatrix,
    Polynomial,
    Ring,
    ideal_equal,
    jacobian,
    minors,
    saturate,
)
from .algebra.poly import parse_poly, sort_names
from .weyl import ID, W0, IrregularType, ShapeData, cyc

TYPE_I, TYPE_II, TYPE_0 = "I", "II", "0"
VERTEX_TYPES = (TYPE_I, TYPE_II, TYPE_0)

# (w, s) pairs that stay type II when k = 1
_TYPE_II_AT_ONE = {("t_eta", ID), ("w0_t_eta", ID), ("t_w0eta", W0)}


class EmptyDeformationRing(ValueError):
    pass


def classify_vertex(w: str, s: str, k: int) -> str:
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if k == 0:
        return TYPE_0
    if k > 1 or (w, s) in _TYPE_II_AT_ONE:
        return TYPE_II
    return TYPE_I


def vertex_data(shape: ShapeData) -> list[tuple[str, str]]:
    """(type, w) for each j."""
    return [(classify_vertex(shape.w[j], shape.s[j], shape.k[j]), shape.w[j]) for j in range(shape.f)]


# -- fragments ----------------------------------------------------------------

@dataclass(frozen=True)
class Fragment:
    vertices: tuple  # (i, i-1, ..., o)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def interior(self) -> tuple:
        return self.vertices[1:-1]


def fragmentation(types: Sequence[str]) -> list[Fragment]:
    f = len(types)
    ends = [j for j in range(f) if types[j] != TYPE_0]
    if not ends:
        raise IrregularType("irregular type: every vertex has type 0")
    if f == 1:
        return [Fragment((0,))]
    out = []
    for i in ends:
        path = [i]
        j = cyc(i - 1, f)
        while types[j] == TYPE_0:
            path.append(j)
            j = cyc(j - 1, f)
        path.append(j)
        out.append(Fragment(tuple(path)))
    return sorted(out, key=lambda fr: fr.start)


# -- framing ------------------------------------------------------------------

IDENTITY, DIAGONAL, FULL = "identity", "diagonal", "full"

FRAMING_MODES = ("irreducible", "reducible-diagonal", "full-matrix", "full-endpoints")


@dataclass(frozen=True)
class Framing:
    """Per-vertex shape of the matrix standing in for kappa_j^{-1}."""

    kinds: tuple

    @classmethod
    def named(cls, mode: str, types: Sequence[str]) -> "Framing":
        f = len(types)
        if mode == "irreducible":
            kinds = [IDENTITY] * f
        elif mode == "reducible-diagonal":
            kinds = [DIAGONAL] + [IDENTITY] * (f - 1)
        elif mode == "full-matrix":
            kinds = [FULL] + [IDENTITY] * (f - 1)
        elif mode == "full-endpoints":
            # generic matrices at every fragment end; interior factors stay unframed
            kinds = [FULL if t != TYPE_0 else IDENTITY for t in types]
        else:
            raise ValueError(f"unknown framing {mode!r}; expected one of {FRAMING_MODES}")
        return cls(tuple(kinds))

    def names(self, j: int) -> list[str]:
        kind = self.kinds[j]
        if kind == DIAGONAL:
            return [f"a{j}", f"d{j}"]
        if kind == FULL:
            return [f"a{j}", f"b{j}", f"c{j}", f"d{j}"]
        return []

    def matrix(self, j: int, ring: Ring) -> PolyMatrix | None:
        kind = self.kinds[j]
        if kind == IDENTITY:
            return None
        v = ring.var
        if kind == DIAGONAL:
            return PolyMatrix(ring, [[v(f"a{j}"), ring.zero()], [ring.zero(), v(f"d{j}")]])
        return PolyMatrix(ring, [[v(f"a{j}"), v(f"b{j}")], [v(f"c{j}"), v(f"d{j}")]])

    def point(self, j: int) -> dict:
        kind = self.kinds[j]
        if kind == IDENTITY:
            return {}
        if kind == DIAGONAL:
            return {f"a{j}": 1, f"d{j}": 1}
        return {f"a{j}": 1, f"b{j}": 0, f"c{j}": 0, f"d{j}": 1}


# -- local matrices -----------------------------------------------------------

def vertex_variables(vtype: str, w: str, j: int) -> list[str]:
    if vtype == TYPE_I:
        return [f"X{j}", f"Y{j}", f"Z{j}"]
    if vtype == TYPE_II:
        # the final matrix at t_w0eta is constant, so Y_j would be a free variable
        return [f"X{j}"] if w == "t_w0eta" else [f"X{j}", f"Y{j}"]
    return [f"X{j}"]


def quadric(ring: Ring, j: int) -> Polynomial:
    x, y, z = ring.var(f"X{j}"), ring.var(f"Y{j}"), ring.var(f"Z{j}")
    p = ring.var("p")
    return (p - y) * y - x * z


def local_matrices(vtype: str, w: str, j: int, ring: Ring, framing: Framing | None = None) -> dict:
    """Initial/final (types I, II) or transition (type 0) matrices at vertex j."""
    p = ring.var("p")
    zero, one = ring.zero(), ring.one()
    X = ring.var(f"X{j}")
    M = lambda rows: PolyMatrix(ring, rows)  # noqa: E731
    out = {}
    if vtype == TYPE_II:
        out["initial"] = M([[one], [-X]])
        if w == "t_eta":
            out["final"] = M([[ring.var(f"Y{j}"), -p]])
        elif w == "w0_t_eta":
            out["final"] = M([[-p, ring.var(f"Y{j}")]])
        else:
            out["final"] = M([[zero, one]])
    elif vtype == TYPE_I:
        Y, Z = ring.var(f"Y{j}"), ring.var(f"Z{j}")
        out["initial"] = M([[Y, -X], [-Z, p - Y]])
        if w == "t_eta":
            out["final"] = M([[p - Y, -Z], [-X, Y]])
        elif w == "w0_t_eta":
            out["final"] = M([[Y, -X], [-Z, p - Y]])
        else:
            out["final"] = M([[p - Y, X], [Z, Y]])
        out["quadric"] = quadric(ring, j)
    elif vtype == TYPE_0:
        if w == "t_eta":
            out["transition"] = M([[one, zero], [-X, p]])
        elif w == "w0_t_eta":
            out["transition"] = M([[zero, -one], [-p, X]])
        else:
            out["transition"] = M([[p, -X], [zero, one]])
    else:
        raise ValueError(f"unknown vertex type {vtype!r}")
    kappa = framing.matrix(j, ring) if framing else None
    if kappa is not None:
        for key in ("final", "transition"):
            if key in out:
                out[key] = out[key] * kappa
    return out


# -- model presentations ------------------------------------------------------

@dataclass
class ModelPresentation:
    ring: Ring
    gens: list
    stage: str = "raw"
    log: list = field(default_factory=list)
    completion_point: dict = field(default_factory=dict)
    # bookkeeping carried along for the Jacobian and comparison code
    vertices: tuple = ()
    framing: Framing | None = None
    relative_dim: int | None = None

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.gens)

    @property
    def variables(self) -> list[str]:
        return [n for n in self.ring.names if n != "p"]

    def used_variables(self) -> set[str]:
        out = set()
        for g in self.gens:
            out |= g.variables()
        out.discard("p")
        return out

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "stage": self.stage,
            "generators": [str(g) for g in self.gens],
            "substitution_log": list(self.log),
            "completion_point": dict(self.completion_point),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModelPresentation":
        for key in ("variables", "stage", "generators"):
            if key not in data:
                raise ValueError(f"model JSON: missing field {key!r}")
        if data["stage"] not in ("raw", "normalized", "saturated"):
            raise ValueError(f"model JSON: stage: unknown value {data['stage']!r}")
        ring = Ring(list(data["variables"]) + ["p"])
        gens = []
        for n, text in enumerate(data["generators"]):
            try:
                gens.append(parse_poly(text, ring))
            except ValueError as exc:
                raise ValueError(f"model JSON: generators[{n}]: {exc}") from None
        return cls(ring, gens, data["stage"], list(data.get("substitution_log", [])),
                   dict(data.get("completion_point", {})))

    def replace(self, **changes) -> "ModelPresentation":
        values = dict(self.__dict__)
        values.update(changes)
        return ModelPresentation(**values)


def _as_vertices(shape_or_vertices) -> list[tuple[str, str]]:
    if isinstance(shape_or_vertices, ShapeData):
        return vertex_data(shape_or_vertices)
    out = []
    for vtype, w in shape_or_vertices:
        if vtype not in VERTEX_TYPES:
            raise ValueError(f"unknown vertex type {vtype!r}")
        out.append((vtype, w))
    return out


def model_ring(vertices, framing: Framing) -> Ring:
    names = []
    for j, (vtype, w) in enumerate(vertices):
        names += vertex_variables(vtype, w, j)
        names += framing.names(j)
    return Ring(sort_names(names + ["p"]))


def fragment_ideal(fragment: Fragment, vertices, ring: Ring, framing: Framing | None = None) -> list[Polynomial]:
    """Entries of M_out,o * T_{o+1} * ... * T_{i-1} * M_in,i."""
    i, o = fragment.start, fragment.end
    mats = {j: local_matrices(vertices[j][0], vertices[j][1], j, ring, framing) for j in set(fragment.vertices)}
    prod = mats[o]["final"]
    for j in reversed(fragment.interior):
        prod = prod * mats[j]["transition"]
    prod = prod * mats[i]["initial"]
    return [e for e in prod.entries() if e]


def naive_model(shape_or_vertices, framing: Framing | str = "irreducible") -> ModelPresentation:
    vertices = _as_vertices(shape_or_vertices)
    types = [t for t, _ in vertices]
    if isinstance(framing, str):
        framing = Framing.named(framing, types)
    frags = fragmentation(types)
    ring = model_ring(vertices, framing)
    gens = []
    for fr in frags:
        gens += fragment_ideal(fr, vertices, ring, framing)
    n_quadrics = 0
    for j, (vtype, _) in enumerate(vertices):
        if vtype == TYPE_I:
            gens.append(quadric(ring, j))
            n_quadrics += 1
    point = {}
    for j in range(len(vertices)):
        point.update(framing.point(j))
    codim = len(frags) + n_quadrics
    return ModelPresentation(
        ring, gens, "raw", [], completion_point_of(ring, point),
        tuple(vertices), framing, ring.nvars - 1 - codim,
    )


def completion_point_of(ring: Ring, values: dict) -> dict:
    """Generators of the maximal ideal, as text."""
    gens = []
    for n in ring.names:
        c = values.get(n, 0)
        gens.append(n if c == 0 else f"{n} - {c}")
    return {"maximal_ideal": gens}


# -- normalization ------------------------------------------------------------

def _linear_solve(g: Polynomial, var: str):
    """If g = c*var + q with c = +-1 and q free of var, return -q/c."""
    i = g.ring.index[var]
    coeff, rest = None, {}
    for e, c in g.terms.items():
        if e[i] == 0:
            rest[e] = c
        elif e[i] == 1 and sum(e) == 1:
            coeff = c
        else:
            return None
    if coeff not in (1, -1):
        return None
    return Polynomial(g.ring, {e: -c * coeff for e, c in rest.items()})


def _shift_candidates(g: Polynomial, var: str) -> Iterable[Polynomial]:
    """Polynomials q with var -> var + q cancelling a term of g (q divisible by p)."""
    ring = g.ring
    i, ip = ring.index[var], ring.index["p"]
    for e1, c1 in g.terms.items():
        if e1[i] != 1 or c1 not in (1, -1):
            continue
        m = e1[:i] + (0,) + e1[i + 1:]
        for e2, c2 in g.terms.items():
            if e2 == e1 or e2[i] != 0:
                continue
            r = tuple(a - b for a, b in zip(e2, m))
            # pure powers of p are skipped: they would only move the quadric's normal form
            if min(r) < 0 or r[ip] < 1 or sum(r) == r[ip]:
                continue
            yield Polynomial(ring, {r: -c2 * c1})


def _size(gens) -> int:
    return sum(len(g) for g in gens)


def _clean(gens) -> list[Polynomial]:
    out = []
    for g in gens:
        if not g:
            continue
        g = g.primitive()
        if g not in out:
            out.append(g)
    return out


def normalize(m: ModelPresentation) -> ModelPresentation:
    ring, gens, log = m.ring, _clean(m.gens), list(m.log)
    changed = True
    while changed:
        changed = False
        # (a) eliminate a variable that some generator solves for
        for var in ring.names:
            if var == "p":
                continue
            for n, g in enumerate(gens):
                value = _linear_solve(g, var)
                if value is None:
                    continue
                small = ring.drop([var])
                value = value.to_ring(small)
                rest = gens[:n] + gens[n + 1:]
                gens = _clean([h.subs({var: value}, small) for h in rest])
                log.append({"kind": "eliminate", "variable": var, "value": str(value)})
                ring = small
                changed = True
                break
            if changed:
                break
        if changed:
            continue
        # (b) shifts var -> var + p*q that shorten the presentation
        size = _size(gens)
        for var in ring.names:
            if var == "p":
                continue
            x = ring.var(var)
            for g in gens:
                for delta in _shift_candidates(g, var):
                    trial = _clean([h.subs({var: x + delta}, ring) for h in gens])
                    if _size(trial) < size:
                        gens = trial
                        log.append({"kind": "shift", "variable": var, "delta": str(delta)})
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return m.replace(ring=ring, gens=gens, stage="normalized", log=log)


def undo_normalization(m: ModelPresentation, target: Ring) -> Ideal:
    """Replay the substitution log backwards, giving an ideal of ``target``."""
    gens = [g.to_ring(target) for g in m.gens]
    for entry in reversed(m.log):
        var = entry["variable"]
        if entry["kind"] == "shift":
            delta = parse_poly(entry["delta"], target)
            gens = [g.subs({var: target.var(var) - delta}, target) for g in gens]
        elif entry["kind"] == "eliminate":
            gens.append(target.var(var) - parse_poly(entry["value"], target))
    return Ideal(target, gens)


# -- saturation ---------------------------------------------------------------

def saturated_model(m: ModelPresentation, method: str = "extended", budget: Budget | None = None) -> ModelPresentation:
    sat = saturate(m.ideal, m.ring.var("p"), method=method, budget=budget)
    gens = Ideal(m.ring, sat.gens).reduced_gens(budget)
    return m.replace(gens=gens, stage="saturated")


def deformation_presentation(shape: ShapeData, mode: str = "irreducible", normalized: bool = True,
                             budget: Budget | None = None) -> ModelPresentation:
    if mode == "irreducible":
        from . import genes, weyl

        if weyl.in_gene_branch(shape) and not genes.club4(genes.gene_of_triple(shape)):
            raise EmptyDeformationRing("empty deformation ring: the gene has an (O, O) column")
    m = naive_model(shape, mode)
    if normalized:
        m = normalize(m)
    return saturated_model(m, budget=budget)


# -- the Jacobian bound -------------------------------------------------------

def singular_exponent(m: ModelPresentation) -> int:
    types = [t for t, _ in m.vertices]
    n_I = types.count(TYPE_I)
    return 2 * n_I + len(types) + len(fragmentation(types))


def default_codim(m: ModelPresentation) -> int:
    types = [t for t, _ in m.vertices]
    return len(fragmentation(types)) + types.count(TYPE_I)


def singular_ideal(m: ModelPresentation, c: int | None = None, blocks: bool | None = None,
                   max_minors: int = 3000) -> Ideal:
    """J_c + I for a raw model.

    With ``blocks`` the minors are restricted to one row per fragment plus the
    quadrics, and one column from each fragment's framing block and each type I
    vertex. That is a sub-ideal of J_c, so membership in it is still a proof of
    membership in J_c.
    """
    if m.stage != "raw":
        raise ValueError("singular_ideal needs the raw presentation")
    c = default_codim(m) if c is None else c
    names = [n for n in m.ring.names if n != "p"]
    J = jacobian(list(m.gens), names)
    nrows, ncols = len(m.gens), len(names)
    full_count = _binom(nrows, c) * _binom(ncols, c)
    if blocks is None:
        blocks = full_count > max_minors
    if not blocks:
        return Ideal(m.ring, list(m.gens) + minors(J, c))
    row_groups, col_groups = _block_structure(m, names)
    out = set()
    col_index = {n: k for k, n in enumerate(names)}
    for rows in itertools.product(*row_groups):
        for cols in itertools.product(*col_groups):
            sub = PolyMatrix(m.ring, [[J.rows[r][col_index[n]] for n in cols] for r in rows])
            d = sub.det()
            if d:
                out.add(d)
    return Ideal(m.ring, list(m.gens) + sorted(out, key=str))


def _block_structure(m: ModelPresentation, names):
    vertices = list(m.vertices)
    types = [t for t, _ in vertices]
    frags = fragmentation(types)
    row_groups, col_groups = [], []
    idx = 0
    ring = m.ring
    for fr in frags:
        entries = fragment_ideal(fr, vertices, ring, m.framing)
        row_groups.append(list(range(idx, idx + len(entries))))
        idx += len(entries)
        kappa = m.framing.names(fr.end) if m.framing else []
        if not kappa:
            raise ValueError("block minors need a framing matrix at every fragment end")
        col_groups.append(kappa)
    for j, t in enumerate(types):
        if t == TYPE_I:
            row_groups.append([idx])
            idx += 1
            col_groups.append([f"X{j}", f"Z{j}", f"Y{j}"])
    if idx != len(m.gens):
        raise ValueError("generators do not follow the raw layout")
    return row_groups, col_groups


def _binom(n, k):
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


# -- comparison ---------------------------------------------------------------

EQUAL, EQUAL_AFTER_SUBSTITUTION, DISTINCT, INCONCLUSIVE = (
    "equal", "equal-after-substitution", "distinct", "inconclusive")


@dataclass
class Verdict:
    verdict: str
    substitution: dict = field(default_factory=dict)
    detail: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "substitution": self.substitution, "detail": self.detail}


def _rank(rows) -> int:
    from fractions import Fraction

    mat = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(mat[0]) if mat else 0
    while rank < len(mat) and col < ncols:
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                q = mat[r][col] / mat[rank][col]
                mat[r] = [a - q * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def trim(m: ModelPresentation) -> ModelPresentation:
    """Drop variables that no generator uses (they are formal power series variables)."""
    used = m.used_variables()
    ring = Ring([n for n in m.ring.names if n in used or n == "p"])
    return m.replace(ring=ring, gens=[g.to_ring(ring) for g in m.gens])


def krull_dim(I: Ideal) -> int:
    """Dimension of the affine scheme cut out by I, from the leading monomials."""
    gb = I.groebner()
    n = I.ring.nvars
    if any(g.is_constant() for g in gb):
        return -1
    leads = [g.sorted_terms()[0][0] for g in gb]
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in leads]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def invariants(m: ModelPresentation) -> dict:
    """Embedding codimensions of the local ring at the origin and of its special fibre.

    Ranks are taken over the rationals, which agrees with the residue field once p is large.
    """
    m = trim(m)
    ring = m.ring
    ip = ring.index["p"]
    n = ring.nvars
    rows_full, rows_special = [], []
    for g in m.ideal.reduced_gens():
        if g.constant_term():
            return {"on_variety": False}
        lin = [0] * n
        for e, c in g.terms.items():
            if sum(e) == 1:
                lin[e.index(1)] = c
        rows_full.append(lin)
        special = Polynomial(ring, {e: c for e, c in g.terms.items() if e[ip] == 0})
        row = [0] * n
        for e, c in special.terms.items():
            if sum(e) == 1:
                row[e.index(1)] = c
        rows_special.append(row)
    dim = krull_dim(m.ideal)
    edim = n - _rank(rows_full)
    edim_special = n - 1 - _rank(rows_special)
    return {"on_variety": True, "embedding_codim": edim - dim, "special_embedding_codim": edim_special - (dim - 1)}


def _type_i_vertices(m: ModelPresentation) -> list[int]:
    names = set(m.ring.names)
    out = []
    for n in names:
        if n.startswith("Z") and n[1:].isdigit():
            j = int(n[1:])
            if {f"X{j}", f"Y{j}"} <= names:
                out.append(j)
    return sorted(out)


def _swap_vertex(gens, ring: Ring, j: int):
    p = ring.var("p")
    images = {f"X{j}": ring.var(f"Z{j}"), f"Z{j}": ring.var(f"X{j}"), f"Y{j}": p - ring.var(f"Y{j}")}
    return [g.subs(images, ring) for g in gens]


def _prepare(m: ModelPresentation) -> ModelPresentation:
    if m.stage == "raw":
        m = normalize(m)
    if m.stage != "saturated":
        m = saturated_model(m)
    # saturation can expose new unit-linear relations, so repeat until stable
    while True:
        n = normalize(m)
        if n.ring == m.ring and n.gens == m.gens:
            break
        m = saturated_model(n)
    return trim(m)


def compare_models(m1: ModelPresentation, m2: ModelPresentation, max_candidates: int = 20000,
                   budget: Budget | None = None) -> Verdict:
    """Decide whether two models present the same ring up to the documented substitutions."""
    a, b = _prepare(m1), _prepare(m2)
    if a.ring == b.ring and ideal_equal(a.ideal, b.ideal, budget):
        return Verdict(EQUAL)
    inv_a, inv_b = invariants(a), invariants(b)
    if inv_a != inv_b:
        return Verdict(DISTINCT, detail=f"invariants differ: {inv_a} vs {inv_b}")
    va, vb = a.variables, b.variables
    if len(va) != len(vb):
        return Verdict(INCONCLUSIVE, detail="different numbers of variables with equal invariants")
    target = b.ideal
    tried = 0
    swaps = _type_i_vertices(a)
    for sign_budget in (0, 1):
        sign_sets = [()] if sign_budget == 0 else [(v,) for v in va]
        for swap_set in _subsets(swaps):
            gens = list(a.gens)
            for j in swap_set:
                gens = _swap_vertex(gens, a.ring, j)
            for signs in sign_sets:
                flipped = [g.subs({v: -a.ring.var(v) for v in signs}, a.ring) for g in gens] if signs else gens
                for perm in _bijections(va, vb):
                    tried += 1
                    if tried > max_candidates:
                        return Verdict(INCONCLUSIVE, detail=f"gave up after {max_candidates} substitutions")
                    mapping = dict(zip(va, perm))
                    renamed = [g.rename(mapping, b.ring) for g in flipped]
                    if not all(target.contains(g, budget) for g in renamed):
                        continue
                    if ideal_equal(Ideal(b.ring, renamed), target, budget):
                        sub = {"rename": {k: v for k, v in mapping.items() if k != v}}
                        if swap_set:
                            sub["swap_type_I"] = list(swap_set)
                        if signs:
                            sub["negate"] = list(signs)
                        return Verdict(EQUAL_AFTER_SUBSTITUTION, sub)
    return Verdict(INCONCLUSIVE, detail="no substitution in the search space matched")


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _bijections(src, dst):
    # same-letter assignments first, since most matches only relabel indices
    letter = lambda n: n.rstrip("0123456789")  # noqa: E731
    for perm in itertools.permutations(dst):
        if all(letter(s) == letter(d) for s, d in zip(src, perm)):
            yield perm
    for perm in itertools.permutations(dst):
        if not all(letter(s) == letter(d) for s, d in zip(src, perm)):
            yield perm
