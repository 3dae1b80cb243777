import random

import pytest

from arrtopo.braids import (GroupPresentation, apply_letter, artin_action, braid_inverse, braid_monodromy,
                            braids_equal, burau_equal, conjugating_braids, full_twist, generic_shear, local_braids,
                            presentation_complement, presentation_monodromy, presentation_wiring,
                            projectivize_presentation, pure_generator, wiring_diagram)
from arrtopo.catalog import catalog_lookup, default_catalog
from arrtopo.jumploci import Character, diagonal_characters, local_system_h1
from arrtopo.scalar import find_cyclotomic_prime

REAL = [n for n in default_catalog() if catalog_lookup(n)[0].is_real]


def test_braid_relations():
    assert braids_equal([1, 2, 1], [2, 1, 2], 3)
    assert braids_equal([1, 3], [3, 1], 4)
    assert not braids_equal([1, 2], [2, 1], 3)
    assert braids_equal([1, -1], [], 3)


def test_artin_action_fixes_product():
    rng = random.Random(0)
    for _ in range(20):
        b = [rng.choice([1, 2, 3, -1, -2, -3]) for _ in range(8)]
        assert artin_action(b, [1, 2, 3, 4]) == [1, 2, 3, 4]


def test_artin_action_inverse():
    b = [1, -2, 3, 2, 2, -1]
    w = [1, 3, -2, 4]
    assert artin_action(braid_inverse(b), artin_action(b, w)) == w
    assert apply_letter(1, [1]) == [1, 2, -1]


def test_full_twist_is_central():
    D = full_twist(range(1, 5))
    for s in (1, 2, 3):
        assert braids_equal(D + [s], [s] + D, 4)
    assert braids_equal(full_twist([1, 2]), pure_generator(1, 2), 2)
    assert braids_equal(D, [1, 2, 3] * 4, 4)


def test_burau_screen_agrees_with_artin():
    rng = random.Random(1)
    for _ in range(30):
        b = [rng.choice([1, 2, -1, -2]) for _ in range(6)]
        c = [rng.choice([1, 2, -1, -2]) for _ in range(6)]
        assert burau_equal(b, c, 3) == braids_equal(b, c, 3)


@pytest.mark.parametrize("name", default_catalog())
def test_loop_product_is_full_twist(name):
    A, _ = catalog_lookup(name)
    loops = local_braids(braid_monodromy(A))
    prod = [x for b in loops for x in b]
    assert burau_equal(prod, full_twist(range(1, A.n + 1)), A.n)


@pytest.mark.parametrize("name", REAL)
def test_wiring_loops_are_full_twist(name):
    A, _ = catalog_lookup(name)
    w = wiring_diagram(A)
    assert len(w.events) == len(A.flats2)
    loops = [braid_inverse(d) + full_twist(e.I) + d for e, d in zip(w.events, conjugating_braids(w))]
    assert burau_equal([x for b in loops for x in b], full_twist(range(1, A.n + 1)), A.n)


def _profile(P, n, count=15, seed=1):
    ctx = find_cyclotomic_prime(60)
    p = ctx.p
    rng = random.Random(seed)
    out = []
    Q = projectivize_presentation(P)
    for _ in range(count):
        v = [ctx.power(rng.randrange(60)) for _ in range(n - 1)]
        prod = 1
        for x in v:
            prod = prod * x % p
        out.append(local_system_h1(Q, Character(v + [pow(prod, p - 2, p)], p)))
    ctx2 = find_cyclotomic_prime(n)
    out += [local_system_h1(Q, c) for c in diagonal_characters(n, n, ctx2)]
    return out


@pytest.mark.parametrize("name", REAL)
def test_wiring_and_monodromy_agree(name):
    A, _ = catalog_lookup(name)
    assert _profile(presentation_wiring(A), A.n) == _profile(presentation_monodromy(A), A.n)


@pytest.mark.parametrize("name", ["braid-A3", "ceva3", "pappus-1"])
def test_isotopy_robustness(name):
    A, _ = catalog_lookup(name)
    assert _profile(presentation_monodromy(A, seed=0), A.n) == _profile(presentation_monodromy(A, seed=5), A.n)


@pytest.mark.parametrize("name", default_catalog())
def test_complement_abelianization(name):
    A, _ = catalog_lookup(name)
    P = presentation_complement(A)
    assert P.is_commutator_relators()
    assert P.abelianization() == (A.n, [])
    assert projectivize_presentation(P).abelianization() == (A.n - 1, [])


def test_generic_shear_record():
    A, _ = catalog_lookup("B3")
    lines, xs, rec = generic_shear(A)
    assert len(lines) == A.n and len(xs) == len(A.flats2)
    assert len(set(xs)) == len(xs)


def test_presentation_words():
    P = GroupPresentation(2, [[1, 2, -1, -2]])
    assert P.word_str(P.relators[0]) == "x1x2x1^-1x2^-1"
    assert P.abelianization() == (2, [])
