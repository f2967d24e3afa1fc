import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tamedef import genes, models, verify, weyl
from tamedef.genes import A, AB, B, O, Gene, GeneError
from tamedef.weyl import cyc


def rules_oracle(v):
    """Every 2f-tuple obeying the five digit rules, found by brute force over all 4^(2f) tuples."""
    n = len(v)
    out = []
    for X in product(genes.SYMBOLS, repeat=n):
        ok = True
        for j in range(n):
            nxt_o = X[(j + 1) % n] == O
            if v[j] == 0:
                want = AB if nxt_o else A
            elif v[j] == 1:
                want = O if nxt_o else B
            else:
                want = O
            if X[j] != want:
                ok = False
                break
        if ok:
            out.append(Gene(X))
    return out


# -- digits -------------------------------------------------------------------

def test_digits_of_six():
    assert genes.digits_of_residue(6, 5, 1) == (1, 1)


def test_digits_example():
    # -5h + 6 gamma + 6 mod 24 at (gamma, h) = (1, 2) is 2
    assert genes.digits(1, 2, 5, 1) == (0, 2)


@pytest.mark.parametrize("gamma, h", [(0, 6), (0, 12)])
def test_digits_rejects_h_divisible(gamma, h):
    with pytest.raises(genes.DegenerateInput, match="p\\^f \\+ 1"):
        genes.digits(gamma, h, 5, 1)


def test_digits_rejects_second_congruence():
    with pytest.raises(genes.DegenerateInput, match="p\\^f - 1"):
        genes.digits(0, 1, 5, 1)


@given(st.sampled_from([(5, 1), (7, 2), (11, 3)]), st.integers(0, 10**9), st.integers(0, 10**9))
@settings(max_examples=200, deadline=None)
def test_digits_expand_the_residue(pf, gamma, h):
    p, f = pf
    gamma %= p**f - 1
    h %= p ** (2 * f) - 1
    try:
        v = genes.digits(gamma, h, p, f)
    except genes.DegenerateInput:
        return
    value = sum(d * p ** (2 * f - 1 - j) for j, d in enumerate(v))
    assert value % (p ** (2 * f) - 1) == genes.vi_residue(gamma, h, p, f)
    assert all(0 <= d < p for d in v)


# -- the solver ---------------------------------------------------------------

def test_gene_from_digits_examples():
    assert genes.gene_from_digits((0, 2)).entries == (AB, O)
    assert genes.gene_from_digits((1, 1)).entries == (O, O)
    assert genes.gene_from_digits((2, 3, 4, 5)).entries == (O,) * 4


def test_b_b_candidate_fails_club3():
    assert Gene((B, B)) in rules_oracle((1, 1))
    assert not genes.club3(Gene((B, B)))


@pytest.mark.parametrize("f", [1, 2, 3])
def test_solver_matches_brute_force(f):
    for v in product(range(3), repeat=2 * f):
        if not any(v):
            continue
        expected = [X for X in rules_oracle(v) if genes.club3(X)]
        assert len(expected) == 1
        assert genes.gene_from_digits(v) == expected[0]


@given(st.lists(st.integers(0, 4), min_size=2, max_size=10).filter(lambda v: len(v) % 2 == 0 and any(v)))
@settings(max_examples=200, deadline=None)
def test_propagation_solver_agrees_with_exhaustive(v):
    ex = [X for X in genes._solve_exhaustive(v) if genes.club3(X)]
    pr = [X for X in genes._solve_propagate(v) if genes.club3(X)]
    assert ex == pr


@given(st.lists(st.integers(0, 6), min_size=2, max_size=8).filter(lambda v: len(v) % 2 == 0 and any(v)))
@settings(max_examples=200, deadline=None)
def test_solver_output_obeys_rules_and_clubs(v):
    X = genes.gene_from_digits(v)
    assert genes.satisfies_rules(X, v)
    assert genes.is_gene(X)


def test_all_zero_digits_rejected():
    with pytest.raises(genes.DegenerateInput):
        genes.gene_from_digits((0, 0))


# -- text format and equivalence ----------------------------------------------

def test_text_format_rows():
    X = Gene((A, A, AB, O, B, B))
    assert X.text() == "O B B / A A AB"
    assert Gene.parse("O B B / A A AB") == X


def test_parse_rejects_ragged_rows():
    with pytest.raises(GeneError):
        Gene.parse("O B / A")


def test_equivalence_examples():
    X = Gene((A, B, O, AB))
    assert genes.gene_equivalent(X, X)
    assert genes.gene_equivalent(X, X.swap())
    assert genes.gene_equivalent(X, X.shift(X.f))


gene_strategy = st.integers(0, 10**6).map(lambda s: random.Random(s).choice(genes.all_genes(2)))


@given(gene_strategy, gene_strategy, gene_strategy)
@settings(max_examples=60, deadline=None)
def test_equivalence_is_an_equivalence_relation(X, Y, Z):
    assert genes.gene_equivalent(X, X)
    assert genes.gene_equivalent(X, Y) == genes.gene_equivalent(Y, X)
    if genes.gene_equivalent(X, Y) and genes.gene_equivalent(Y, Z):
        assert genes.gene_equivalent(X, Z)


def test_canonical_is_class_invariant():
    for X in genes.all_genes(2):
        assert all(genes.canonical(Y) == genes.canonical(X) for Y in genes.gene_orbit(X))


# -- clusters -----------------------------------------------------------------

def test_no_o_means_no_clusters():
    assert genes.clusters(Gene((A, B, B, A))) is None


def test_zero_ring_detected():
    with pytest.raises(genes.ZeroRing, match="zero deformation ring"):
        genes.clusters(Gene((O, AB, O, AB)))


def test_single_cluster_example():
    # columns (O/A), (B/A), (B/AB): bottom A A AB, top O B B
    cs = genes.clusters(Gene.parse("O B B / A A AB"))
    assert [(c.start, c.pivot, c.end) for c in cs] == [(0, 3, 3)]
    assert sorted(set(cs[0].span(3))) == [0, 1, 2]


@pytest.mark.parametrize("f", [1, 2, 3])
def test_clusters_partition_the_circle(f):
    for X in genes.all_genes(f):
        cs = genes.clusters(X)
        if cs is None:
            continue
        assert sum(c.end - c.start for c in cs) == f
        for c, d in zip(cs, cs[1:] + cs[:1]):
            assert cyc(c.end, f) == cyc(d.start, f)
        for c in cs:
            assert X[c.pivot - 1] == AB and X[c.pivot] == O


@pytest.mark.parametrize("p, f", [(11, 2), (7, 3)])
def test_cluster_starts_are_type_ii(p, f):
    # the vertex read off a gene column j is vertex j + 1
    for sh in genes.branch_shapes(p, f, 3):
        X = genes.gene_of_triple(sh)
        if not genes.club4(X):
            continue
        types = [t for t, _ in models.vertex_data(sh)]
        for c in genes.clusters(X) or []:
            assert types[cyc(c.start + 1, f)] == models.TYPE_II


# -- triples and fibers -------------------------------------------------------

def test_a_over_o_columns_use_listed_tuples():
    data = verify.load_data("column_constraints.json")
    listed = next(c["tuples"] for c in data["columns"] if c["column"] == [A, O])
    hits = 0
    for sh in genes.branch_shapes(7, 3, 3):
        X = genes.gene_of_triple(sh)
        for j in range(3):
            if X.column(j) == (A, O):
                t = genes.local_tuple(sh, j)
                assert any(verify._matches(pt, t) for pt in listed)
                hits += t == (weyl.ID, weyl.W0, weyl.ID, weyl.ID, "t_w0eta", "I", (0, 0))
    assert hits > 0


def test_gene_of_triple_outputs_are_genes():
    for sh in genes.branch_shapes(11, 2, 3):
        assert genes.is_gene(genes.gene_of_triple(sh))


def test_fiber_members_refeed():
    X = Gene.parse("O / AB")
    fib = genes.enumerate_fiber(X, 11, 3)
    assert fib
    for sh in fib:
        assert genes.gene_equivalent(genes.gene_of_triple(sh), X)


def test_fiber_rejects_large_kmax():
    with pytest.raises(ValueError):
        genes.enumerate_fiber(Gene.parse("O / AB"), 5, 4)


def test_swap_and_shift_give_equivalent_genes():
    rng = random.Random(3)
    for p, f in ((5, 1), (7, 2), (11, 3)):
        q = p**f
        S = sum(p**j for j in range(f))
        for _ in range(200):
            gamma, h = rng.randrange(q - 1), rng.randrange(q * q - 1)
            try:
                X = genes.gene(gamma, h, p, f)
                Y = genes.gene((h - gamma - S) % (q - 1), h, p, f)
            except genes.DegenerateInput:
                continue
            assert genes.gene_equivalent(X, Y)
            assert Y == X.swap().shift(f)
