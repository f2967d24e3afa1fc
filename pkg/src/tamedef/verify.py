"""Verification suites: golden tables, worked examples and property sweeps, reported case by case."""

from __future__ import annotations

import hashlib
import itertools
import json
import random
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from . import genes, models, weyl
from .algebra import (
    Budget,
    BudgetExhausted,
    Ideal,
    Polynomial,
    Ring,
    ideal_equal,
    jacobian,
    minors,
    parse_poly,
    radical_contains,
    saturate,
)
from .algebra.poly import _degrevlex_key

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def load_data(name: str) -> dict:
    with resources.files("tamedef.data").joinpath(name).open() as fh:
        return json.load(fh)


def ideal_hash(gens) -> str:
    text = "\n".join(sorted(str(g) for g in gens))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class CaseResult:
    name: str
    status: str
    seconds: float = 0.0
    detail: str = ""
    expected: dict = field(default_factory=dict)
    hash: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "seconds": round(self.seconds, 3)}
        for key in ("detail", "expected", "hash"):
            if getattr(self, key):
                out[key] = getattr(self, key)
        return out


@dataclass
class Report:
    suite: str
    cases: list

    @property
    def status(self) -> str:
        states = {c.status for c in self.cases}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[self.status]

    def failures(self) -> list:
        return [c for c in self.cases if c.status != PASS]

    def to_json(self) -> dict:
        return {"suite": self.suite, "status": self.status, "cases": [c.to_json() for c in self.cases]}

    def summary(self) -> str:
        counts = defaultdict(int)
        for c in self.cases:
            counts[c.status] += 1
        total = sum(c.seconds for c in self.cases)
        parts = ", ".join(f"{counts[s]} {s}" for s in (PASS, FAIL, INCONCLUSIVE) if counts[s])
        lines = [f"{self.suite}: {self.status.upper()} ({parts}; {total:.1f}s)"]
        for c in self.failures():
            lines.append(f"  {c.status}: {c.name}: {c.detail}")
        return "\n".join(lines)


def _run_one(name: str, fn: Callable, kwargs: dict) -> CaseResult:
    start = time.perf_counter()
    try:
        out = fn(**kwargs)
    except BudgetExhausted as exc:
        out = CaseResult(name, INCONCLUSIVE, detail=f"budget exhausted: {exc}")
    out.name = name
    out.seconds = time.perf_counter() - start
    return out


def run_cases(suite: str, cases, workers: int = 1) -> Report:
    """cases: (name, function, kwargs) triples; functions must be importable for workers > 1."""
    cases = list(cases)
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, *zip(*cases)))
    else:
        results = [_run_one(*c) for c in cases]
    return Report(suite, results)


def _verdict(ok: bool, detail: str = "", **extra) -> CaseResult:
    return CaseResult("", PASS if ok else FAIL, detail=detail, **extra)


# -- golden tables ------------------------------------------------------------

def _common_ring(*name_sets) -> Ring:
    names = set()
    for s in name_sets:
        names |= set(s)
    return Ring.sorted(names | {"p"})


def table_row_case(side: str, row: int, which: str, budget: Budget | None = None) -> CaseResult:
    data = load_data("f3_examples.json")[side]
    rec = next(r for r in data["rows"] if r["row"] == row)
    m = models.normalize(models.naive_model([tuple(v) for v in rec["vertices"]]))
    if which == "saturated":
        m = models.saturated_model(m, budget=budget)
    ring = _common_ring(rec["ring"], m.ring.names)
    expected = Ideal(ring, [parse_poly(t, ring) for t in rec[which]])
    got = Ideal(ring, [g.to_ring(ring) for g in m.gens])
    ok = ideal_equal(got, expected, budget)
    detail = "" if ok else "computed " + "; ".join(map(str, m.gens))
    cite = {"citation": f"{data['citation']}, row {row}", "generators": rec[which]}
    return _verdict(ok, detail, expected=cite, hash=ideal_hash(m.gens))


def cdm_tables(workers: int = 1, budget: Budget | None = None, sides=("left", "right")) -> Report:
    data = load_data("f3_examples.json")
    cases = []
    for side in sides:
        for rec in data[side]["rows"]:
            for which in ("naive", "saturated"):
                name = f"{side} row {rec['row']} {which}"
                cases.append((name, table_row_case, {"side": side, "row": rec["row"], "which": which, "budget": budget}))
    return run_cases("cdm-tables", cases, workers)


# -- f = 1 worked examples ----------------------------------------------------

def _renamed_model(case: dict, renaming: dict):
    m = models.naive_model([tuple(v) for v in case["vertices"]], case["framing"])
    ring = Ring.sorted(renaming.get(n, n) for n in m.ring.names)
    return Ideal(ring, [g.rename(renaming, ring) for g in m.gens])


def _jacobian_ideal(rels: list, ring: Ring) -> Ideal:
    names = [n for n in ring.names if n != "p"]
    return Ideal(ring, list(rels) + minors(jacobian(list(rels), names), 2))


def f1_case(case: str, budget: Budget | None = None) -> CaseResult:
    data = load_data("f1_cases.json")
    entry = data[case]
    raw = _renamed_model(entry, data["renaming"])
    R = raw.ring
    p = R.var("p")
    checks = {}
    if case == "case1":
        rels = [parse_poly(t, R) for t in entry["saturated"]]
        sat = saturate(raw, p, budget=budget)
        checks["saturation"] = ideal_equal(sat, Ideal(R, rels), budget)
        checks["saturation by colons"] = ideal_equal(saturate(raw, p, "colon", budget), Ideal(R, rels), budget)
    else:
        rels = [parse_poly(t, R) for t in entry["relations"]]
        checks["already saturated"] = ideal_equal(saturate(raw, p, budget=budget), raw, budget)
        checks["relations present the raw ideal"] = ideal_equal(Ideal(R, rels), raw, budget)
    J = _jacobian_ideal(rels, R)
    e = entry["jacobian_power"]
    checks[f"p^{e} in minors + relations"] = J.contains(p**e, budget)
    point = Ideal(R, [R.var(v) for v in entry["radical"]])
    for v in entry["radical"]:
        checks[f"{v} in the radical"] = radical_contains(J, R.var(v), budget)
    checks["minors + relations inside the point"] = all(point.contains(g, budget) for g in J.gens)
    bad = [k for k, v in checks.items() if not v]
    cite = {"citation": f"{data['citation']}, {case}"}
    return _verdict(not bad, "failed: " + ", ".join(bad) if bad else "", expected=cite, hash=ideal_hash(rels))


def f1_examples(workers: int = 1, budget: Budget | None = None) -> Report:
    cases = [(c, f1_case, {"case": c, "budget": budget}) for c in ("case1", "case2")]
    return run_cases("f1", cases, workers)


# -- the Jacobian bound -------------------------------------------------------

def elkik_case(shape: dict, budget: Budget | None = None) -> CaseResult:
    sh = weyl.ShapeData.from_json(shape)
    m = models.naive_model(sh, "full-endpoints")
    J = models.singular_ideal(m)
    e = models.singular_exponent(m)
    p = m.ring.var("p")
    ok = J.contains(p**e, budget)
    weak = J.contains(p ** (4 * sh.f), budget)
    return _verdict(ok and weak, f"exponent {e}" + ("" if weak else "; p^4f not reached"))


def _regular(sh) -> bool:
    return any(k > 0 for k in sh.k)


def elkik(workers: int = 1, budget: Budget | None = None, seed: int = 0, sample: int = 50, p: int = 11) -> Report:
    cases = []
    for sh in weyl.small_shapes(p, 1, 3):
        if _regular(sh):
            cases.append((f"f=1 {sh.w} {sh.s} k={sh.k}", elkik_case, {"shape": sh.to_json(), "budget": budget}))
    pool = [sh for sh in weyl.small_shapes(p, 2, 3) if _regular(sh)]
    for sh in random.Random(seed).sample(pool, min(sample, len(pool))):
        cases.append((f"f=2 {sh.w} {sh.s} k={sh.k}", elkik_case, {"shape": sh.to_json(), "budget": budget}))
    return run_cases("elkik", cases, workers)


# -- generic shapes -----------------------------------------------------------

def generator_kind(g: Polynomial) -> str:
    """'linear', 'xy' (c*X*Y +- p) or 'other'."""
    ip = g.ring.index["p"]
    deg = lambda e: sum(e) - e[ip]  # noqa: E731
    if all(deg(e) <= 1 for e in g.terms) and any(deg(e) == 1 for e in g.terms):
        return "linear"
    if len(g.terms) == 2:
        (e1, c1), (e2, c2) = sorted(g.terms.items(), key=lambda t: deg(t[0]))
        is_p = deg(e1) == 0 and e1[ip] == 1 and c1 in (1, -1)
        is_xy = deg(e2) == 2 and e2[ip] == 0 and max(e2) == 1
        if is_p and is_xy and c2 in (1, -1):
            return "xy"
    return "other"


def generic_case(f: int, p: int = 11, ks=(2, 3), budget: Budget | None = None) -> CaseResult:
    bad, count = [], 0
    for sh in weyl.small_shapes(p, f, max(ks)):
        if not all(k in ks for k in sh.k):
            continue
        count += 1
        m = models.saturated_model(models.normalize(models.naive_model(sh)), budget=budget)
        kinds = [generator_kind(g) for g in m.gens]
        if "other" in kinds or kinds.count("xy") > f:
            bad.append(f"{sh.w} {sh.s} k={sh.k}: " + "; ".join(map(str, m.gens)))
    detail = f"{count} shapes" + ("; " + " | ".join(bad[:5]) if bad else "")
    return _verdict(not bad, detail)


def generic(workers: int = 1, budget: Budget | None = None, fmax: int = 3) -> Report:
    cases = [(f"f={f}", generic_case, {"f": f, "budget": budget}) for f in range(1, fmax + 1)]
    return run_cases("generic", cases, workers)


# -- gene laws and fibers -----------------------------------------------------

def admissible_pairs(p: int, f: int, n: int, seed: int):
    """n random (gamma, h) satisfying the digit hypotheses, with h * p^f also admissible."""
    rng = random.Random(seed)
    q = p**f
    out = []
    while len(out) < n:
        gamma, h = rng.randrange(q - 1), rng.randrange(q * q - 1)
        try:
            genes.digits(gamma, h, p, f)
            genes.digits(gamma, h * q, p, f)
        except genes.DegenerateInput:
            continue
        out.append((gamma, h))
    return out


def gene_law_case(p: int, f: int, n: int = 1000, seed: int = 0, swap_with_shift: bool = False) -> CaseResult:
    """Swap law X(gamma', h) = swap X(gamma, h), shift law X(gamma, p^f h) = X(gamma, h) shifted by f, clubs 1-3.

    With ``swap_with_shift`` the swap law is checked in the form swap(shift_f X) instead.
    """
    q = p**f
    S = sum(p**j for j in range(f))
    fails = defaultdict(list)
    for gamma, h in admissible_pairs(p, f, n, seed):
        X = genes.gene(gamma, h, p, f)
        gamma2 = (h - gamma - S) % (q - 1)
        want = X.swap().shift(f) if swap_with_shift else X.swap()
        if genes.gene(gamma2, h, p, f) != want:
            fails["swap"].append((gamma, h))
        if genes.gene(gamma, h * q, p, f) != X.shift(f):
            fails["shift"].append((gamma, h))
        if not genes.is_gene(X):
            fails["clubs"].append((gamma, h))
    detail = f"{n} samples"
    for law, bad in fails.items():
        detail += f"; {law} law fails on {len(bad)}, first at (gamma, h) = {bad[0]}"
    return _verdict(not fails, detail)


def fiber_tuples(p: int, f: int, kmax: int) -> dict:
    """Local tuples seen at each gene column, over every shape in the gene branch."""
    seen = defaultdict(set)
    for sh in genes.branch_shapes(p, f, kmax):
        X = genes.gene_of_triple(sh)
        for j in range(f):
            seen[X.column(j)].add(genes.local_tuple(sh, j))
    return seen


def _matches(pattern: dict, tup) -> bool:
    keys = ("s_next", "s_orient", "sigma", "z_next", "w", "type")
    if any(pattern[k] is not None and pattern[k] != v for k, v in zip(keys, tup)):
        return False
    for want, v in zip(pattern["vprime"], tup[6]):
        if want == "<0" and not v < 0:
            return False
        if want == ">=2" and not v >= 2:
            return False
        if isinstance(want, int) and want != v:
            return False
    return True


def fiber_case(p: int = 11, f: int = 1, kmax: int = 3, strict: bool = True) -> CaseResult:
    """Compare observed local tuples with the listed ones; strict also demands every listed tuple occur."""
    data = load_data("column_constraints.json")
    seen = fiber_tuples(p, f, kmax)
    extra, missing = [], []
    listed = {tuple(c["column"]): c["tuples"] for c in data["columns"]}
    for col, pats in listed.items():
        tuples = seen.get(col, set())
        extra += [f"{col}: {t}" for t in tuples if not any(_matches(pt, t) for pt in pats)]
    for col, pats in listed.items():
        got = seen.get(col, set())
        missing += [f"{col}: {pt}" for pt in pats if not any(_matches(pt, t) for t in got)]
    ok = not extra and (not strict or not missing)
    detail = f"{len(extra)} extra, {len(missing)} missing"
    if extra:
        detail += "; extra " + " | ".join(extra[:3])
    if missing and strict:
        detail += "; missing " + " | ".join(missing[:3])
    return _verdict(ok, detail, expected={"citation": data["citation"]})


def gene_laws(workers: int = 1, budget: Budget | None = None, seed: int = 0, samples: int = 1000) -> Report:
    cases = [
        (f"gene laws p={p} f={f}", gene_law_case, {"p": p, "f": f, "n": samples, "seed": seed})
        for p, f in ((5, 1), (7, 2), (11, 3))
    ]
    cases.append(("swap-after-shift law p=11 f=3", gene_law_case,
                  {"p": 11, "f": 3, "n": samples, "seed": seed, "swap_with_shift": True}))
    cases.append(("fiber tuples p=11 f=1 exact", fiber_case, {"p": 11, "f": 1, "kmax": 3, "strict": True}))
    cases.append(("fiber tuples p=11 f=2 no extras", fiber_case, {"p": 11, "f": 2, "kmax": 3, "strict": False}))
    return run_cases("genes", cases, workers)


# -- gene independence --------------------------------------------------------

def gene_classes(p: int, f: int, kmax: int) -> dict:
    classes = defaultdict(list)
    for sh in genes.branch_shapes(p, f, kmax):
        X = genes.gene_of_triple(sh)
        if genes.club4(X):
            classes[genes.canonical(X)].append(sh)
    return classes


def indep_case(shapes: list, budget: Budget | None = None) -> CaseResult:
    # shapes with literally identical saturated presentations need no comparison
    forms = {}
    for d in shapes:
        m = models.deformation_presentation(weyl.ShapeData.from_json(d), budget=budget)
        forms.setdefault(tuple(sorted(str(g) for g in models.trim(m).gens)), m)
    reps = list(forms.values())
    status, notes = PASS, []
    for a, b in itertools.combinations(reps, 2):
        v = models.compare_models(a, b, budget=budget)
        if v.verdict == models.DISTINCT:
            status = FAIL
            notes.append(v.detail)
        elif v.verdict == models.INCONCLUSIVE and status == PASS:
            status = INCONCLUSIVE
            notes.append(v.detail)
    detail = f"{len(shapes)} shapes, {len(reps)} distinct presentations"
    return CaseResult("", status, detail=detail + ("; " + "; ".join(notes[:3]) if notes else ""),
                      hash=ideal_hash(reps[0].gens) if reps else "")


def indep(workers: int = 1, budget: Budget | None = None, p: int = 23, f: int = 2, kmax: int = 3) -> Report:
    cases = [
        (X.text(), indep_case, {"shapes": [sh.to_json() for sh in shs], "budget": budget})
        for X, shs in sorted(gene_classes(p, f, kmax).items(), key=lambda it: it[0].entries)
    ]
    return run_cases("indep", cases, workers)


# -- the Gröbner kernel -------------------------------------------------------

def _lead(g: Polynomial):
    return max(g.terms, key=_degrevlex_key)


def _reduce_naive(g: Polynomial, basis: list) -> Polynomial:
    """Full reduction by plain term-by-term division, integer-scaled; independent of the engine."""
    ring = g.ring
    leads = [(_lead(b), b) for b in basis]
    rem = ring.zero()
    while g:
        e = _lead(g)
        c = g.terms[e]
        for le, b in leads:
            if all(x >= y for x, y in zip(e, le)):
                lc = b.terms[le]
                mono = Polynomial(ring, {tuple(x - y for x, y in zip(e, le)): c})
                g = g * lc - mono * b
                rem = rem * lc
                break
        else:
            rem = rem + Polynomial(ring, {e: c})
            g = g - Polynomial(ring, {e: c})
    return rem


def spair_check(basis: list) -> bool:
    """Every S-polynomial of the basis reduces to zero under degrevlex."""
    for a, b in itertools.combinations(basis, 2):
        la, lb = _lead(a), _lead(b)
        lcm = tuple(max(x, y) for x, y in zip(la, lb))
        ma = Polynomial(a.ring, {tuple(x - y for x, y in zip(lcm, la)): b.terms[lb]})
        mb = Polynomial(a.ring, {tuple(x - y for x, y in zip(lcm, lb)): a.terms[la]})
        if _reduce_naive(ma * a - mb * b, basis):
            return False
    return True


def random_ideal(rng: random.Random) -> tuple[Ideal, Polynomial]:
    n = rng.randint(2, 4)
    ring = Ring(["x", "y", "z", "w"][:n])
    gens = []
    for _ in range(rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            d = rng.randint(0, 3)
            e = [0] * n
            for _ in range(d):
                e[rng.randrange(n)] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + rng.choice([-3, -2, -1, 1, 2, 3])
        g = Polynomial(ring, terms)
        if g:
            gens.append(g)
    if not gens:
        gens = [ring.var("x")]
    return Ideal(ring, gens), ring.var(rng.choice(ring.names))


def kernel_case(seed: int, n: int = 200, budget: Budget | None = None) -> CaseResult:
    rng = random.Random(seed)
    bad = []
    for i in range(n):
        I, f = random_ideal(rng)
        a = saturate(I, f, "extended", budget)
        b = saturate(I, f, "colon", budget)
        if not ideal_equal(a, b, budget):
            bad.append(f"saturation differs for {I} by {f}")
        if not spair_check(I.groebner(budget=budget)):
            bad.append(f"S-pair check fails for {I}")
    return _verdict(not bad, f"{n} ideals" + ("; " + "; ".join(bad[:3]) if bad else ""))


def kernel(workers: int = 1, budget: Budget | None = None, seed: int = 0, samples: int = 200) -> Report:
    return run_cases("kernel", [("random ideals", kernel_case, {"seed": seed, "n": samples, "budget": budget})], workers)


SUITES = {
    "cdm-tables": cdm_tables,
    "f1": f1_examples,
    "elkik": elkik,
    "genes": gene_laws,
    "generic": generic,
    "indep": indep,
    "kernel": kernel,
}
