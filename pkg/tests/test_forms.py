"""One-forms: validation, integrals, periods, primitives, deck labels."""

import random
from fractions import Fraction

import pytest

from relcat import (
    OneForm,
    ValidationError,
    barycentric_subdivide,
    build_pair,
    d,
    deck_labeling,
    integrate,
    periods,
    primitive,
    product_pair,
    restrict,
    validate,
)
from relcat.forms import chain_integrate, form_from_json, form_to_json, subdivide_form

from oracles import loop_label_sum, partition_sum_integral

C3_EDGES = [[0, 1], [1, 2], [0, 2]]


def circle():
    return build_pair(C3_EDGES)


def angular_form(pair=None):
    pair = pair or circle()
    return OneForm(pair, {(0, 1): Fraction(1), (1, 2): Fraction(1), (0, 2): Fraction(-1)})


def torus():
    return product_pair(circle(), circle())


def torus_first_factor_form():
    t = torus()
    base = angular_form()
    values = {}
    for i, j in t.edges():
        a, _ = divmod(i, 3)
        c, _ = divmod(j, 3)
        values[(i, j)] = base.value(a, c) if a != c else Fraction(0)
    return OneForm(t, values)


def random_potential(pair, rng):
    return {v: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for v in pair.vertices()}


def test_validate_no_constraints_on_circle():
    form = OneForm(circle(), {(0, 1): Fraction(1), (1, 2): Fraction(1), (0, 2): Fraction(1)})
    assert validate(form) == []


def test_validate_filled_triangle():
    tri = build_pair([[0, 1, 2]])
    ok = OneForm(tri, {(0, 1): Fraction(1), (1, 2): Fraction(1), (0, 2): Fraction(2)})
    assert validate(ok) == []
    bad = OneForm(tri, {(0, 1): Fraction(1), (1, 2): Fraction(1), (0, 2): Fraction(1)})
    assert validate(bad) == [(0, 1, 2)]


def test_missing_edge_value_raises():
    with pytest.raises(ValidationError):
        OneForm(circle(), {(0, 1): Fraction(1)})


def test_d_differences():
    form = d(circle(), {0: Fraction(0), 1: Fraction(2), 2: Fraction(5)})
    assert form.values[(0, 1)] == 2
    assert form.values[(1, 2)] == 3
    assert form.values[(0, 2)] == 5


def test_d_constant_is_zero_and_valid():
    tri = build_pair([[0, 1, 2]])
    assert d(tri, {0: 1, 1: 1, 2: 1}).is_zero()
    rng = random.Random(3)
    for _ in range(10):
        assert validate(d(tri, random_potential(tri, rng))) == []


def test_integrate_loop_matches_partition_sum():
    form = angular_form()
    loop = [0, 1, 2, 0]
    assert integrate(form, loop) == 3
    assert integrate(form, loop) == partition_sum_integral(form, loop)


def test_integrate_constant_path():
    assert integrate(angular_form(), [1, 1]) == 0


def test_integrate_exact_telescopes():
    form = d(circle(), {0: Fraction(0), 1: Fraction(2), 2: Fraction(5)})
    assert integrate(form, [0, 1, 2]) == 5


def test_integrate_hexagon_angular_model():
    # two angular charts around the circle, each edge worth one sixth-turn
    hexagon = build_pair([[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [0, 5]])
    values = {e: Fraction(1) for e in hexagon.edges()}
    values[(0, 5)] = Fraction(-1)
    form = OneForm(hexagon, values)
    loop = [0, 1, 2, 3, 4, 5, 0]
    total = integrate(form, loop)
    assert total == 6
    assert total == sum(form.value(u, v) for u, v in zip(loop, loop[1:]))


def test_integrate_rejects_non_edge_step():
    hexagon = build_pair([[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [0, 5]])
    values = {e: Fraction(1) for e in hexagon.edges()}
    form = OneForm(hexagon, values)
    with pytest.raises(ValidationError):
        integrate(form, [0, 3])


def test_periods_circle():
    pv = periods(angular_form())
    assert pv.scalar_values() == (3,)
    assert pv.rank == 1
    assert pv.lattice == ((Fraction(3),),)


def test_periods_exact_form_vanish():
    rng = random.Random(5)
    form = d(circle(), random_potential(circle(), rng))
    pv = periods(form)
    assert all(v == (0,) for v in pv.values)
    assert pv.rank == 0


def test_periods_torus_first_factor():
    pv = periods(torus_first_factor_form())
    scalars = sorted({abs(v[0]) for v in pv.values})
    assert pv.rank == 1
    assert 3 in scalars
    assert pv.lattice == ((Fraction(3),),)


def test_periods_of_form_tuple_rank_two():
    # wedge-like theta graph: two independent loops with independent tuples
    wedge = build_pair([[0, 1], [1, 2], [0, 2], [0, 3], [1, 3]])
    f1 = OneForm(
        wedge,
        {(0, 1): Fraction(1), (1, 2): Fraction(1), (0, 2): Fraction(-1),
         (0, 3): Fraction(0), (1, 3): Fraction(0)},
    )
    f2 = OneForm(
        wedge,
        {(0, 1): Fraction(0), (1, 2): Fraction(0), (0, 2): Fraction(0),
         (0, 3): Fraction(1), (1, 3): Fraction(-1)},
    )
    pv = periods((f1, f2))
    assert pv.rank == 2


def test_primitive_round_trip():
    pot = {0: Fraction(0), 1: Fraction(2), 2: Fraction(5)}
    form = d(circle(), pot)
    assert primitive(form) == pot


def test_primitive_none_for_nonzero_period():
    assert primitive(angular_form()) is None


def test_primitive_zero_form():
    zero = OneForm(circle(), {e: Fraction(0) for e in circle().edges()})
    assert primitive(zero) == {0: Fraction(0), 1: Fraction(0), 2: Fraction(0)}


def test_restrict_torus_form_to_first_factor_circle():
    t = torus()
    form = torus_first_factor_form()
    # first-factor circle at second coordinate 0: vertices 0, 3, 6
    sub = build_pair([[0, 3], [3, 6], [0, 6]], vertex_count=t.vertex_count)
    res = restrict(form, sub)
    pv = periods(res)
    assert pv.rank == 1
    assert abs(pv.scalar_values()[0]) == 3


def test_restrict_exact_stays_exact():
    rng = random.Random(11)
    t = torus()
    form = d(t, random_potential(t, rng))
    sub = build_pair([[0, 3], [3, 6], [0, 6]], vertex_count=t.vertex_count)
    assert primitive(restrict(form, sub)) is not None


def test_restrict_to_vertex_is_zero():
    sub = build_pair([[0]], vertex_count=3)
    res = restrict(angular_form(), sub)
    assert res.values == {}


def test_restrict_rejects_non_subcomplex():
    sub = build_pair([[0, 1], [1, 3]])
    with pytest.raises(ValidationError):
        restrict(angular_form(), sub)


def test_deck_labeling_circle():
    lab = deck_labeling(angular_form())
    assert lab.rank == 1
    assert (0, 1) in lab.tree_edges and (1, 2) in lab.tree_edges
    assert lab.label(2, 0) == (1,)
    assert lab.label(0, 2) == (-1,)
    assert lab.pairing((1,)) == (Fraction(3),)


def test_deck_labeling_exact_form_empty():
    rng = random.Random(13)
    form = d(circle(), random_potential(circle(), rng))
    lab = deck_labeling(form)
    assert lab.rank == 0
    assert all(l == () for l in lab.labels.values())


def test_deck_labeling_torus():
    form = torus_first_factor_form()
    lab = deck_labeling(form)
    assert lab.rank == 1
    # second-factor loop at first coordinate 0: vertices 0,1,2
    assert lab.path_label([0, 1, 2, 0]) == (0,)
    # first-factor loop pairs to the full period
    label = lab.path_label([0, 3, 6, 0])
    assert lab.pairing(label) == (Fraction(3),)


def test_label_pairing_reproduces_integrals_on_loops():
    rng = random.Random(17)
    form = torus_first_factor_form()
    lab = deck_labeling(form)
    t = form.pair
    adjacency = {v: [] for v in t.vertices()}
    for u, v in t.edges():
        adjacency[u].append(v)
        adjacency[v].append(u)
    for _ in range(25):
        walk = [rng.choice(t.vertices())]
        for _ in range(rng.randint(2, 12)):
            walk.append(rng.choice(adjacency[walk[-1]]))
        # close up through a tree-ish return: just walk back the same way
        loop = walk + walk[-2::-1]
        assert lab.pairing(loop_label_sum(lab, loop)) == (integrate(form, loop),)


def test_homologous_paths_integrate_equally():
    rng = random.Random(19)
    t = torus()
    form = torus_first_factor_form()
    tris = t.simplices(2)
    for _ in range(50):
        path = [0, 1, 2, 0]
        base_chain = {}
        for u, v in zip(path, path[1:]):
            e = (min(u, v), max(u, v))
            base_chain[e] = base_chain.get(e, Fraction(0)) + (1 if u < v else -1)
        perturbed = dict(base_chain)
        for _ in range(rng.randint(1, 4)):
            tri = rng.choice(tris)
            coeff = Fraction(rng.randint(-3, 3))
            for i in range(3):
                face = tri[:i] + tri[i + 1 :]
                perturbed[face] = perturbed.get(face, Fraction(0)) + coeff * (-1) ** i
        assert chain_integrate(form, perturbed) == chain_integrate(form, base_chain)


def test_rerouted_path_across_triangle_same_integral():
    tri = build_pair([[0, 1, 2]])
    rng = random.Random(23)
    form = d(tri, random_potential(tri, rng))
    assert integrate(form, [0, 2]) == integrate(form, [0, 1, 2])


def test_loop_integral_of_exact_form_is_zero():
    rng = random.Random(29)
    t = torus()
    for _ in range(10):
        form = d(t, random_potential(t, rng))
        assert integrate(form, [0, 3, 6, 0]) == 0


def test_periods_invariant_under_exact_perturbation():
    rng = random.Random(31)
    form = torus_first_factor_form()
    base = periods(form)
    for _ in range(10):
        perturbed = form + d(form.pair, random_potential(form.pair, rng))
        assert periods(perturbed).values == base.values


def test_subdivided_form_integrates_like_base():
    base = angular_form()
    sd, sdmap = barycentric_subdivide(circle())
    form = subdivide_form(base, sdmap)
    assert validate(form) == []
    loop = sdmap.subdivide_path([0, 1, 2, 0])
    assert integrate(form, loop) == integrate(base, [0, 1, 2, 0])
    assert periods(form).lattice == periods(base).lattice


def test_form_json_round_trip():
    form = angular_form()
    again = form_from_json(circle(), form_to_json(form))
    assert again.values == form.values


def test_form_json_rejects_garbage():
    with pytest.raises(ValidationError):
        form_from_json(circle(), {"edges": {"0-1": "x/y"}})
