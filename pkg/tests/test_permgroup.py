import random

import pytest

from altsep import permgroup as pg

from oracles import exhaustive_closure


def from_cycles(text, degree):
    return pg.parse_cycles(text, degree)


# -- algebra -------------------------------------------------------------------


def test_compose_matches_path_tracing():
    # apply p then q, like following two edges in a row
    p = from_cycles("(1 2)", 3)
    q = from_cycles("(2 3)", 3)
    assert pg.compose(p, q) == from_cycles("(1 3 2)", 3)


def test_compose_with_inverse_is_identity():
    sigma = from_cycles("(1 4 2)(3 5)", 5)
    assert pg.is_identity(pg.compose(sigma, pg.inverse(sigma)))


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        pg.compose((0, 1), (0, 1, 2))


def test_parity():
    assert pg.parity(from_cycles("(1 2 3)", 3)) == "even"
    assert pg.parity(from_cycles("(1 2)", 2)) == "odd"
    assert pg.parity(pg.identity_perm(4)) == "even"


def test_parity_is_a_homomorphism():
    rng = random.Random(3)
    for _ in range(40):
        images = list(range(6))
        rng.shuffle(images)
        p = tuple(images)
        rng.shuffle(images)
        q = tuple(images)
        sign = {"even": 1, "odd": -1}
        assert sign[pg.parity(pg.compose(p, q))] == sign[pg.parity(p)] * sign[pg.parity(q)]


def test_support():
    sigma = from_cycles("(1 2)(4 5)", 6)
    assert pg.support(sigma) == (0, 1, 3, 4)


# -- orbits ---------------------------------------------------------------------


def test_orbit_transitive_cycle():
    orbits, transitive = pg.orbit_transitive([from_cycles("(1 2 3 4 5)", 5)], 5)
    assert transitive and orbits == [tuple(range(5))]


def test_orbit_partition():
    orbits, transitive = pg.orbit_transitive([from_cycles("(1 2)", 4)], 4)
    assert not transitive
    assert orbits == [(0, 1), (2,), (3,)]


# -- order ---------------------------------------------------------------------


def test_bsgs_order_trivial_cases():
    assert pg.bsgs_order([], 4) == 1
    assert pg.bsgs_order([from_cycles("(1 2 3)", 3)], 3) == 3


def test_bsgs_order_s4():
    gens = [from_cycles("(1 2)", 4), from_cycles("(1 2 3 4)", 4)]
    assert pg.bsgs_order(gens, 4) == 24
    assert len(exhaustive_closure(gens, 4)) == 24


def test_bsgs_matches_exhaustive_closure_on_a_selection():
    cases = [
        ([  # dihedral of order 8
            from_cycles("(1 2 3 4)", 4), from_cycles("(1 3)", 4)], 4),
        ([from_cycles("(1 2 3 4 5)", 5), from_cycles("(1 2 3)", 5)], 5),  # A5
        ([from_cycles("(1 2)", 5), from_cycles("(1 2 3 4 5)", 5)], 5),  # S5
        ([from_cycles("(1 2)(3 4)", 5), from_cycles("(1 3)(2 4)", 5)], 5),  # V4
        ([from_cycles("(1 2 3)", 7), from_cycles("(4 5 6 7)", 7)], 7),  # product
        ([from_cycles("(1 2 3 4 5 6)", 6), from_cycles("(2 6)(3 5)", 6)], 6),  # D12
    ]
    for gens, degree in cases:
        assert pg.bsgs_order(gens, degree) == len(exhaustive_closure(gens, degree))


def test_bsgs_order_random_generator_sets():
    rng = random.Random(11)
    for _ in range(15):
        degree = rng.randint(3, 7)
        gens = []
        for _ in range(rng.randint(1, 3)):
            images = list(range(degree))
            rng.shuffle(images)
            gens.append(tuple(images))
        assert pg.bsgs_order(gens, degree) == len(exhaustive_closure(gens, degree))


# -- recognition -------------------------------------------------------------------


def test_recognize_alternating_five():
    gens = [from_cycles("(1 2 3 4 5)", 5), from_cycles("(1 2 3)", 5)]
    assert len(exhaustive_closure(gens, 5)) == 60
    assert pg.recognize_alt_sym(gens, 5) == pg.ALTERNATING


def test_recognize_symmetric_five():
    gens = [from_cycles("(1 2)", 5), from_cycles("(1 2 3 4 5)", 5)]
    assert len(exhaustive_closure(gens, 5)) == 120
    assert pg.recognize_alt_sym(gens, 5) == pg.SYMMETRIC


def test_recognize_other():
    assert pg.recognize_alt_sym([from_cycles("(1 2)(3 4)", 5)], 5) == pg.OTHER


def test_recognize_never_symmetric_on_even_generators():
    rng = random.Random(5)
    for _ in range(10):
        degree = rng.randint(4, 7)
        gens = []
        for _ in range(2):
            images = list(range(degree))
            rng.shuffle(images)
            perm = tuple(images)
            if pg.parity(perm) == "odd":
                # make it even by one extra transposition
                fix = list(perm)
                fix[0], fix[1] = fix[1], fix[0]
                perm = tuple(fix)
            gens.append(perm)
        assert pg.recognize_alt_sym(gens, degree) != pg.SYMMETRIC


def test_recognition_requires_degree_three():
    with pytest.raises(ValueError):
        pg.recognize_alt_sym([(1, 0)], 2)


# -- cycle notation -------------------------------------------------------------------


def test_cycle_notation_round_trip():
    for text in ["(1 2 3)(4 5)", "()", "(2 7)", "(1 3 5)(2 4 6)"]:
        perm = pg.parse_cycles(text, 7)
        assert pg.parse_cycles(pg.format_cycles(perm), 7) == perm


def test_format_identity():
    assert pg.format_cycles(pg.identity_perm(5)) == "()"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        pg.parse_cycles("(1 2", 3)
    with pytest.raises(ValueError):
        pg.parse_cycles("1 2 3", 3)
    with pytest.raises(ValueError):
        pg.parse_cycles("(1 2)(2 3)", 3)
    with pytest.raises(ValueError):
        pg.parse_cycles("(1 9)", 3)
