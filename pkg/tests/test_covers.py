import itertools

import pytest

from altsep import permgroup
from altsep.covers import (
    CoverPlan,
    HypothesisNotSatisfiedError,
    build_separating_cover,
    chain_gadget,
    choose_prime,
    mover_gadget,
    permutation_rep,
    word_action,
)
from altsep.factors import coset_graph, embed_Y_component
from altsep.graphs import (
    build_graph,
    canonical_pair,
    components,
    is_connected,
    saturation_defects,
)
from altsep.subgroups import build_subgroup_graph, hypothesis_check
from altsep.words import x_alphabet, x_letter as x, y_alphabet, y_letter as y

from conftest import make_spec
from oracles import reidemeister_schreier


# -- gadgets -----------------------------------------------------------------------


def test_chain_of_four_matches_interval_picture():
    g = chain_gadget(4, 2, 1)
    assert len(g.vertices) == 4
    assert sum(1 for p in g.pairs if p[2] == x(1)) == 3
    assert sum(1 for p in g.pairs if p[2] == x(2) and p[0] == p[1]) == 4
    defects = saturation_defects(g, x_alphabet(2))
    assert {(d.vertex, str(d.missing)) for d in defects} == {(0, "x1^-1"), (3, "x1")}


def test_chain_degenerate_single_vertex():
    g = chain_gadget(1, 2, 1)
    assert len(g.vertices) == 1
    defects = saturation_defects(g, x_alphabet(2))
    assert {str(d.missing) for d in defects} == {"x1", "x1^-1"}


def test_chain_rank_three_counts():
    g = chain_gadget(3, 3, 1)
    assert len(g.vertices) == 3
    assert sum(1 for p in g.pairs if p[2] == x(1)) == 2
    loops = [p for p in g.pairs if p[0] == p[1]]
    assert len(loops) == 6  # x2 and x3 at each of the three vertices


def test_chain_non_connect_letters_fix_everything():
    g = chain_gadget(5, 3, 2)
    for i in (1, 3):
        for v in g.vertices:
            assert g.step(v, x(i)) == v


def test_mover_plus_minus_matches_picture():
    g = mover_gadget((1, -1), 2, 1, 2)
    assert len(g.vertices) == 4
    assert (0, 0, x(1)) not in g.pairs
    assert (2, 2, x(1)) in g.pairs and (3, 3, x(1)) in g.pairs  # sign +1 on x1
    # sign -1 on the move letter: a directed 4-cycle of x2 edges
    cycle = {(u, w) for u, w, letter in g.pairs if letter == x(2)}
    assert cycle == {(0, 1), (1, 2), (2, 3), (3, 0)}
    defects = saturation_defects(g, x_alphabet(2))
    assert {(d.vertex, str(d.missing)) for d in defects} == {(0, "x1^-1"), (1, "x1")}


def test_mover_plus_plus_double_transposition():
    g = mover_gadget((1, 1), 2, 1, 2)
    images = {v: g.step(v, x(2)) for v in g.vertices}
    assert images == {0: 2, 2: 0, 1: 3, 3: 1}


def test_mover_defects_for_every_sign_vector():
    for signs in itertools.product((1, -1), repeat=3):
        g = mover_gadget(signs, 3, 1, 2)
        defects = saturation_defects(g, x_alphabet(3))
        assert {(d.vertex, str(d.missing)) for d in defects} == {(0, "x1^-1"), (1, "x1")}
        # the move letter permutes the four vertices nontrivially
        assert any(g.step(v, x(2)) != v for v in g.vertices)


def test_mover_parameter_validation():
    with pytest.raises(ValueError):
        mover_gadget((1,), 2, 1, 2)
    with pytest.raises(ValueError):
        mover_gadget((1, 1), 2, 1, 1)
    with pytest.raises(ValueError):
        chain_gadget(0, 2, 1)


# -- prime plans --------------------------------------------------------------------


def test_choose_prime_first_plans():
    first = next(iter(choose_prime(2)))
    assert (first.degree, first.chain_length) == (7, 1)
    first = next(iter(choose_prime(7)))
    assert (first.degree, first.chain_length) == (13, 2)
    first = next(iter(choose_prime(8)))
    assert (first.degree, first.chain_length) == (13, 1)


def test_choose_prime_ascending_and_consistent():
    plans = list(itertools.islice(choose_prime(5), 5))
    degrees = [p.degree for p in plans]
    assert degrees == sorted(degrees)
    for plan in plans:
        assert plan.degree == plan.base_size + plan.chain_length + 4


def test_cover_plan_validation():
    with pytest.raises(ValueError):
        CoverPlan(2, 8, 2)  # not prime
    with pytest.raises(ValueError):
        CoverPlan(2, 7, 2)  # degree mismatch


# -- permutation representation -------------------------------------------------------


def test_permutation_rep_one_vertex_cover(z2):
    g = build_graph([0], [(0, 0, x(1)), (0, 0, x(2)), (0, 0, y(1))], 0)
    images = permutation_rep(g, 2, 1)
    assert all(permgroup.is_identity(p) for p in images.values())


def test_permutation_rep_regular_finite_cover(z2):
    g = coset_graph(z2, frozenset([z2.identity]))
    # saturate the free side so the representation is total
    from altsep.factors import complete_X_cover

    g = complete_X_cover(g, 2)
    images = permutation_rep(g, 2, 1)
    assert images["y1"] == (1, 0)
    assert permgroup.is_identity(permgroup.compose(images["y1"], images["y1"]))


def test_permutation_rep_requires_saturation(z2):
    g = build_graph([0, 1], [(0, 1, x(1))], 0)
    with pytest.raises(ValueError):
        permutation_rep(g, 2, 1)


# -- full pipeline ----------------------------------------------------------------------


def run_pipeline(spec, **kwargs):
    built = build_subgroup_graph(spec)
    verdict = hypothesis_check(built.graph, spec.free.rank)
    result = build_separating_cover(spec, built.graph, verdict, **kwargs)
    return built, result


def test_pipeline_trivial_subgroup(z2):
    spec = make_spec(z2, separate_words=[(x(1),)])
    built, result = run_pipeline(spec)
    assert result.plan.base_size == 2
    assert result.plan.degree == 7 and result.plan.chain_length == 1
    assert len(result.cover.graph.vertices) == 7
    assert result.image_type in ("alternating", "symmetric")
    move = result.images[f"x{result.params.move_letter}"]
    assert len(permgroup.support(move)) <= result.plan.base_size + 4


def test_pipeline_conjugated_pair(s3):
    spec = make_spec(
        s3,
        subgroup_words=[(y(1), x(1, -1), y(1)), (x(1), x(2), x(1, -1))],
        separate_words=[(y(2),)],
    )
    built, result = run_pipeline(spec)
    graph = result.cover.graph
    # the based graph embeds edge by edge
    for u, w, letter in built.graph.pairs:
        mapped = canonical_pair(
            result.cover.embedding[u], result.cover.embedding[w], letter
        )
        assert mapped in graph.pairs
    # generator loops act trivially on the base, the separator does not
    positions = {v: i for i, v in enumerate(sorted(graph.vertices))}
    base_point = positions[result.cover.embedding[built.graph.base]]
    for word in spec.subgroup_words:
        assert word_action(result.images, word, base_point) == base_point
    assert word_action(result.images, (y(2),), base_point) != base_point


def test_pipeline_rejects_saturated_kernel(z2):
    flip = 1
    generators = reidemeister_schreier(z2, 2, 1, [flip, flip], [z2.identity])
    spec = make_spec(z2, subgroup_words=generators, separate_words=[(x(1),)])
    built = build_subgroup_graph(spec)
    verdict = hypothesis_check(built.graph, 2)
    with pytest.raises(HypothesisNotSatisfiedError):
        build_separating_cover(spec, built.graph, verdict)


def test_pipeline_cover_certificates(z2, s3):
    specs = [
        make_spec(z2, separate_words=[(x(1),)]),
        make_spec(z2, subgroup_words=[(x(1), x(1))], separate_words=[(x(1),)]),
        make_spec(
            s3,
            subgroup_words=[(y(1), x(1, -1), y(1)), (x(1), x(2), x(1, -1))],
            separate_words=[(y(2),)],
        ),
        make_spec(z2, subgroup_words=[(y(1),)], separate_words=[(x(2), y(1))]),
    ]
    for spec in specs:
        built, result = run_pipeline(spec)
        graph = result.cover.graph
        table = spec.finite
        assert len(graph.vertices) == result.plan.degree
        assert saturation_defects(graph, x_alphabet(spec.free.rank)) == []
        assert saturation_defects(graph, y_alphabet(table.num_generators)) == []
        assert is_connected(graph)
        for component, _anchor in components(graph, "y"):
            cover, embedding = embed_Y_component(table, component)
            assert len(embedding) == len(cover.vertices)
        _orbits, transitive = permgroup.orbit_transitive(
            list(result.images.values()), result.plan.degree
        )
        assert transitive


def test_pipeline_respects_sign_vector(z2):
    spec = make_spec(z2, separate_words=[(x(1),)])
    built, result = run_pipeline(spec, signs=(1, -1))
    assert result.params.signs == (1, -1)
    assert result.image_type in ("alternating", "symmetric")


def test_pipeline_honors_prime_cap(z2):
    from altsep.covers import CoverSearchExhaustedError

    spec = make_spec(z2, separate_words=[(x(1),)])
    built = build_subgroup_graph(spec)
    verdict = hypothesis_check(built.graph, 2)
    with pytest.raises(CoverSearchExhaustedError):
        build_separating_cover(spec, built.graph, verdict, max_prime=5)


def test_pipeline_connect_letter_follows_first_defect(z2):
    # x1 saturated on the witness, x2 not: the bridge must use x2 and the
    # move letter falls back to x1
    spec = make_spec(
        z2,
        subgroup_words=[(x(1),), (x(2), x(1), x(2, -1))],
        separate_words=[(y(1),)],
    )
    built, result = run_pipeline(spec)
    assert result.params.connect_letter == 2
    assert result.params.move_letter == 1
    assert result.image_type in ("alternating", "symmetric")


def test_pipeline_rank_three(z3):
    spec = make_spec(z3, subgroup_words=[(x(1), x(1))], separate_words=[(x(3),)], rank=3)
    built, result = run_pipeline(spec)
    graph = result.cover.graph
    assert saturation_defects(graph, x_alphabet(3)) == []
    assert len(graph.vertices) == result.plan.degree
    move = result.images[f"x{result.params.move_letter}"]
    assert len(permgroup.support(move)) <= result.plan.base_size + 4


def test_relation_soundness_of_the_action(s3):
    # words spelling the same element of the finite factor act identically
    spec = make_spec(
        s3,
        subgroup_words=[(y(1), x(1, -1), y(1))],
        separate_words=[(y(2),)],
    )
    built, result = run_pipeline(spec)
    degree = result.plan.degree
    words = [
        (y(1),), (y(2),), (y(1), y(1)), (y(1), y(2)), (y(2), y(1)),
        (y(1), y(1), y(1)), (y(2), y(2)), (y(1, -1),), (y(2), y(1), y(2)),
    ]
    by_element = {}
    for word in words:
        element = s3.word_element(word)
        image = tuple(word_action(result.images, word, point) for point in range(degree))
        by_element.setdefault(element, image)
        assert by_element[element] == image
    # the identity relations really collapse
    assert by_element.get(s3.identity) is None or permgroup.is_identity(
        by_element[s3.identity]
    )
