import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from tamedef import genes, models, weyl
from tamedef.algebra import Ideal, PolyMatrix, Ring, ideal_equal, parse_poly
from tamedef.models import (
    DISTINCT,
    EQUAL,
    EQUAL_AFTER_SUBSTITUTION,
    TYPE_0,
    TYPE_I,
    TYPE_II,
    Fragment,
    ModelPresentation,
    classify_vertex,
    fragment_ideal,
    fragmentation,
    local_matrices,
    naive_model,
    normalize,
    saturated_model,
)
from tamedef.verify import load_data
from tamedef.weyl import ID, W0, IrregularType, ShapeData

ROW1 = [(TYPE_II, "t_eta"), (TYPE_0, "w0_t_eta"), (TYPE_II, "t_eta")]


def polys(ring, *texts):
    return [parse_poly(t, ring) for t in texts]


def same_ideal(gens, texts):
    ring = gens[0].ring
    return ideal_equal(Ideal(ring, gens), Ideal(ring, polys(ring, *texts)))


# -- vertices and fragments ---------------------------------------------------

@pytest.mark.parametrize("w, s, k, expected", [
    ("t_eta", W0, 1, TYPE_I),
    ("t_eta", ID, 1, TYPE_II),
    ("w0_t_eta", ID, 1, TYPE_II),
    ("t_w0eta", W0, 1, TYPE_II),
    ("t_w0eta", ID, 1, TYPE_I),
    ("w0_t_eta", W0, 1, TYPE_I),
    ("t_eta", W0, 2, TYPE_II),
    ("t_w0eta", ID, 0, TYPE_0),
])
def test_classify_vertex(w, s, k, expected):
    assert classify_vertex(w, s, k) == expected


def test_fragmentation_single_end():
    assert fragmentation([TYPE_II, TYPE_0, TYPE_0]) == [Fragment((0, 2, 1, 0))]


def test_fragmentation_two_ends():
    assert fragmentation([TYPE_II, TYPE_0, TYPE_II]) == [Fragment((0, 2)), Fragment((2, 1, 0))]


def test_fragmentation_f1_singleton():
    assert fragmentation([TYPE_I]) == [Fragment((0,))]


def test_fragmentation_rejects_all_zero():
    with pytest.raises(IrregularType, match="irregular type"):
        fragmentation([TYPE_0, TYPE_0])


@given(st.lists(st.sampled_from([TYPE_I, TYPE_II, TYPE_0]), min_size=2, max_size=6))
def test_fragments_cover_the_circle(types):
    if all(t == TYPE_0 for t in types):
        return
    frs = fragmentation(types)
    f = len(types)
    edges = []
    for fr in frs:
        assert types[fr.start] != TYPE_0 and types[fr.end] != TYPE_0
        assert all(types[j] == TYPE_0 for j in fr.interior)
        edges += list(zip(fr.vertices, fr.vertices[1:]))
    assert sorted(edges) == sorted((j, (j - 1) % f) for j in range(f))


# -- local matrices -----------------------------------------------------------

R1 = Ring(["X0", "Y0", "Z0", "p"])


def test_type_0_transition():
    m = local_matrices(TYPE_0, "t_eta", 0, R1)["transition"]
    assert m == PolyMatrix(R1, [[R1.one(), R1.zero()], [-R1.var("X0"), R1.var("p")]])


def test_type_ii_w0_t_eta():
    m = local_matrices(TYPE_II, "w0_t_eta", 0, R1)
    assert m["initial"] == PolyMatrix(R1, [[R1.one()], [-R1.var("X0")]])
    assert m["final"] == PolyMatrix(R1, [[-R1.var("p"), R1.var("Y0")]])


@pytest.mark.parametrize("w", list(weyl.SHAPE_NAMES))
def test_type_i_matrices(w):
    m = local_matrices(TYPE_I, w, 0, R1)
    q = Ideal(R1, [m["quadric"]])
    for key in ("initial", "final"):
        assert q.contains(m[key].det())
        assert m[key].trace() == R1.var("p")


@pytest.mark.parametrize("w", list(weyl.SHAPE_NAMES))
def test_type_0_determinant_is_p(w):
    det = local_matrices(TYPE_0, w, 0, R1)["transition"].det()
    assert det in (R1.var("p"), -R1.var("p"))


def _all_fragments(f):
    for combo in itertools.product([(t, w) for t in (TYPE_I, TYPE_II, TYPE_0) for w in weyl.SHAPE_NAMES], repeat=f):
        types = [t for t, _ in combo]
        if all(t == TYPE_0 for t in types):
            continue
        yield list(combo), fragmentation(types)


@pytest.mark.parametrize("f", [2, 3])
def test_interior_products_have_determinant_power_of_p(f):
    for vertices, frs in _all_fragments(f):
        ring = models.model_ring(vertices, models.Framing.named("irreducible", [t for t, _ in vertices]))
        p = ring.var("p")
        for fr in frs:
            prod = PolyMatrix.identity(ring, 2)
            for j in reversed(fr.interior):
                prod = prod * local_matrices(*vertices[j], j, ring)["transition"]
            m = len(fr.interior)
            assert prod.det() in (p**m, -(p**m))


# -- naive models -------------------------------------------------------------

def test_row1_fragments():
    m = naive_model(ROW1)
    ring = m.ring
    a = fragment_ideal(Fragment((2, 1, 0)), ROW1, ring)
    b = fragment_ideal(Fragment((0, 2)), ROW1, ring)
    assert a == polys(ring, "p^2 + X2*Y0 + p*X1*X2")
    assert b == polys(ring, "Y2 + p*X0")


def test_row1_naive_model():
    m = naive_model(ROW1)
    assert same_ideal(m.gens, ["Y2 + p*X0", "p^2 + X2*Y0 + p*X1*X2"])


def test_empty_interior_between_t_eta_vertices():
    vertices = [(TYPE_II, "t_eta"), (TYPE_II, "t_eta")]
    m = naive_model(vertices)
    assert fragment_ideal(Fragment((1, 0)), vertices, m.ring) == polys(m.ring, "Y0 + p*X1")


def test_generic_adjacent_fragments_forms():
    # every final x initial product between type II vertices
    for wi, wo in itertools.product(weyl.SHAPE_NAMES, repeat=2):
        vertices = [(TYPE_II, wo), (TYPE_II, wi)]
        m = naive_model(vertices)
        (g,) = fragment_ideal(Fragment((1, 0)), vertices, m.ring)
        kind = models_kind(g)
        assert kind in ("linear", "xy", "constant")


def models_kind(g):
    from tamedef.verify import generator_kind

    if g.is_constant():
        return "constant"
    return generator_kind(g)


def test_raw_model_has_one_quadric_per_type_i():
    vertices = [(TYPE_I, "t_eta"), (TYPE_0, "t_eta"), (TYPE_I, "t_w0eta")]
    m = naive_model(vertices)
    quads = [models.quadric(m.ring, j) for j in (0, 2)]
    assert m.gens[-2:] == quads


# -- normalization ------------------------------------------------------------

def test_normalize_row1():
    n = normalize(naive_model(ROW1))
    assert [str(g) for g in n.gens] == ["X2*Y0 + p^2"]
    assert n.variables == ["X0", "X1", "X2", "Y0"]
    assert [e["kind"] for e in n.log] == ["eliminate", "shift"]
    assert n.log[0]["variable"] == "Y2" and n.log[1]["variable"] == "Y0"


def test_normalize_fixpoint():
    n = normalize(naive_model(ROW1))
    again = normalize(n)
    assert again.gens == n.gens and again.log == n.log


def _random_vertices(rng, f):
    while True:
        v = [(rng.choice([TYPE_I, TYPE_II, TYPE_0]), rng.choice(weyl.SHAPE_NAMES)) for _ in range(f)]
        if any(t != TYPE_0 for t, _ in v):
            return v


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_normalize_is_undone_by_its_log(seed):
    rng = random.Random(seed)
    m = naive_model(_random_vertices(rng, rng.randint(1, 3)))
    n = normalize(m)
    back = models.undo_normalization(n, m.ring)
    assert ideal_equal(back, m.ideal)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_saturation_is_idempotent(seed):
    rng = random.Random(seed)
    m = saturated_model(normalize(naive_model(_random_vertices(rng, rng.randint(1, 3)))))
    again = saturated_model(m)
    assert ideal_equal(m.ideal, again.ideal)
    assert m.stage == "saturated"


# -- JSON ---------------------------------------------------------------------

def test_json_round_trip():
    m = saturated_model(normalize(naive_model([(TYPE_I, "t_eta"), (TYPE_0, "t_w0eta"), (TYPE_II, "w0_t_eta")])))
    data = m.to_json()
    assert set(data) == {"variables", "stage", "generators", "substitution_log", "completion_point"}
    back = ModelPresentation.from_json(data)
    assert ideal_equal(back.ideal, m.ideal)


def test_json_errors_name_the_field():
    with pytest.raises(ValueError, match="generators\\[1\\]"):
        ModelPresentation.from_json({"variables": ["X0"], "stage": "raw", "generators": ["X0", "X0 +"]})
    with pytest.raises(ValueError, match="stage"):
        ModelPresentation.from_json({"variables": [], "stage": "cooked", "generators": []})


# -- deformation presentations ------------------------------------------------

def test_branch_shapes_never_have_zero_columns():
    assert all(genes.club4(genes.gene_of_triple(sh)) for sh in genes.branch_shapes(11, 2, 3))


def test_empty_deformation_ring(monkeypatch):
    sh = next(genes.branch_shapes(11, 1, 3))
    monkeypatch.setattr(genes, "gene_of_triple", lambda _: genes.Gene((genes.O, genes.O)))
    with pytest.raises(models.EmptyDeformationRing, match="empty deformation ring"):
        models.deformation_presentation(sh)


def test_diagonal_framing_adds_units_at_zero():
    sh = ShapeData(11, (W0, ID), ((1, 0), (2, 0)), ("t_eta", "t_w0eta"))
    m = models.deformation_presentation(sh, "reducible-diagonal")
    assert {"a0", "d0"} <= set(m.ring.names)
    assert "a0 - 1" in m.completion_point["maximal_ideal"]


# -- the Jacobian bound -------------------------------------------------------

def test_smooth_presentation_singular_ideal_is_unit():
    vertices = [(TYPE_II, "t_eta"), (TYPE_II, "t_eta")]
    m = naive_model(vertices)
    assert models.singular_ideal(m).is_unit()


def test_block_minors_are_a_subideal():
    sh = ShapeData(11, (W0,), ((1, 0),), ("w0_t_eta",))
    m = naive_model(sh, "full-endpoints")
    full = models.singular_ideal(m, blocks=False)
    part = models.singular_ideal(m, blocks=True)
    assert all(full.contains(g) for g in part.gens)


def test_exponent_formula():
    m = naive_model([(TYPE_I, "t_eta"), (TYPE_0, "t_eta"), (TYPE_II, "t_eta")], "full-endpoints")
    assert models.singular_exponent(m) == 2 * 1 + 3 + 2


# -- comparison ---------------------------------------------------------------

def test_compare_self_is_equal():
    m = saturated_model(normalize(naive_model(ROW1)))
    assert models.compare_models(m, m).verdict == EQUAL


def test_compare_different_variable_counts_is_distinct():
    a = saturated_model(normalize(naive_model(ROW1)))
    row6 = next(r for r in load_data("f3_examples.json")["left"]["rows"] if r["row"] == 6)
    b = saturated_model(normalize(naive_model([tuple(v) for v in row6["vertices"]])))
    assert len(models.trim(a).variables) != len(models.trim(b).variables)
    assert models.compare_models(a, b).verdict == DISTINCT


def test_compare_reports_inconclusive_rather_than_guessing():
    a = saturated_model(normalize(naive_model(ROW1)))
    b = saturated_model(normalize(naive_model([(TYPE_I, "t_eta"), (TYPE_II, "t_eta"), (TYPE_II, "t_eta")])))
    assert models.invariants(a) == models.invariants(b)
    assert models.compare_models(a, b).verdict == models.INCONCLUSIVE


def test_compare_detects_type_i_swap():
    # vertex 0 keeps all of X0, Y0, Z0 after normalization here
    sh = [(TYPE_I, "t_eta"), (TYPE_I, "t_w0eta")]
    a = models.trim(saturated_model(normalize(naive_model(sh))))
    assert 0 in models._type_i_vertices(a)
    swapped = models._swap_vertex(a.gens, a.ring, 0)
    b = a.replace(gens=Ideal(a.ring, swapped).reduced_gens())
    v = models.compare_models(a, b)
    assert v.verdict in (EQUAL, EQUAL_AFTER_SUBSTITUTION)


def test_row1_gene_fiber_members_compare_equal():
    data = [sh for sh in genes.branch_shapes(11, 3, 2)]
    target = genes.gene_of_triple(next(sh for sh in data if models.vertex_data(sh) == ROW1))
    fiber = [sh for sh in data if genes.gene_equivalent(genes.gene_of_triple(sh), target)]
    rng = random.Random(5)
    sample = rng.sample(fiber, min(6, len(fiber)))
    ms = [models.deformation_presentation(sh) for sh in sample]
    for a, b in itertools.combinations(ms, 2):
        assert models.compare_models(a, b).verdict in (EQUAL, EQUAL_AFTER_SUBSTITUTION)
