import random
from fractions import Fraction

import pytest

from linfty import (
    Element,
    GradedSpace,
    InputError,
    MultiMap,
    check_morphism,
    check_relations,
    cohomology,
    compose,
    identity_morphism,
    is_quasi_iso,
    lift_coderivation,
    lift_morphism,
    make_linfty,
    reduced_coproduct,
)
from linfty.morphism import MorphismComponents, project
from linfty.grading import canonicalize_word

from conftest import (
    SMALL_SPACES,
    random_candidate,
    random_component_family,
    random_valid_structure,
)

F = Fraction


def test_identity_lift_is_identity(heisenberg):
    idm = identity_morphism(heisenberg)
    lift = lift_morphism(idm)
    for word in heisenberg.words():
        image = lift.on_word(word)
        assert image.terms == {word: F(1)}


def test_f1_only_multiplicative():
    space = GradedSpace([("a", 0), ("b", 1)])
    setting = make_linfty(space, {}, cap=3)
    f1 = MultiMap.from_entries(
        space, space, 1, 0, {("a",): {"a": F(2)}, ("b",): {"b": F(3)}}
    )
    morphism = MorphismComponents(setting, setting, {1: f1})
    lift = lift_morphism(morphism)
    word, _ = canonicalize_word(("a", "b"), space)
    assert lift.on_word(word).terms == {word: F(6)}


def test_coalgebra_map_law_random():
    rng = random.Random(19)
    for trial in range(12):
        src_space = SMALL_SPACES[trial % len(SMALL_SPACES)]
        tgt_space = SMALL_SPACES[(trial + 1) % len(SMALL_SPACES)]
        source = random_candidate(src_space, 4, rng)
        target = random_candidate(tgt_space, 4, rng)
        morphism = MorphismComponents(
            source, target, random_component_family(source, target, 4, rng)
        )
        lift = lift_morphism(morphism)
        for word in source.words():
            lhs = {}
            for w2, c in lift.on_word(word).terms.items():
                if w2.weight < 2:
                    continue
                for (lw, rw), s in reduced_coproduct(w2, tgt_space).items():
                    key = (lw, rw)
                    lhs[key] = lhs.get(key, F(0)) + c * s
            rhs = {}
            for (lw, rw), s in reduced_coproduct(word, src_space).items():
                for w2, c2 in lift.on_word(lw).terms.items():
                    for w3, c3 in lift.on_word(rw).terms.items():
                        key = (w2, w3)
                        rhs[key] = rhs.get(key, F(0)) + s * c2 * c3
            assert {k: v for k, v in lhs.items() if v} == {
                k: v for k, v in rhs.items() if v
            }


def test_round_trip_projection():
    rng = random.Random(29)
    for trial in range(8):
        space = SMALL_SPACES[trial % len(SMALL_SPACES)]
        setting = random_candidate(space, 4, rng)
        morphism = MorphismComponents(
            setting, setting, random_component_family(setting, setting, 4, rng)
        )
        lift = lift_morphism(morphism)
        for word in setting.words():
            got = project(lift.on_word(word))
            want = morphism.component(word.weight).value(word)
            if got is None:
                got = Element.zero(space, want.degree)
            assert got == want


def test_check_morphism_identity(heisenberg):
    assert check_morphism(identity_morphism(heisenberg)).passed


def test_check_morphism_non_chain_map(two_term):
    abelian = make_linfty(GradedSpace([("x", 1)]), {}, cap=3)
    f1 = MultiMap.from_entries(
        two_term.space, abelian.space, 1, 0, {("b",): {"x": F(1)}}
    )
    report = check_morphism(MorphismComponents(two_term, abelian, {1: f1}))
    assert not report.passed
    assert all(w.weight == 1 for w in report.residuals)


def test_check_morphism_between_abelians_anything_goes():
    rng = random.Random(41)
    space = GradedSpace([("a", 0), ("b", 1), ("c", 2)])
    left = make_linfty(space, {}, cap=3)
    right = make_linfty(space, {}, cap=3)
    comps = random_component_family(left, right, 3, rng)
    assert check_morphism(MorphismComponents(left, right, comps)).passed


def test_check_morphism_iff_full_lift_commutes():
    rng = random.Random(53)
    for trial in range(10):
        space = SMALL_SPACES[trial % len(SMALL_SPACES)]
        setting = random_valid_structure(space, 3, rng)
        morphism = MorphismComponents(
            setting, setting, random_component_family(setting, setting, 3, rng)
        )
        report = check_morphism(morphism)
        lift = lift_morphism(morphism)
        q = lift_coderivation(setting)
        full_zero = all(
            (q.apply(lift.on_word(w)) - lift.apply(q.on_word(w))).is_zero()
            for w in setting.words()
        )
        assert report.passed == full_zero


def test_compose_with_identity(heisenberg):
    rng = random.Random(61)
    comps = random_component_family(heisenberg, heisenberg, 4, rng)
    morphism = MorphismComponents(heisenberg, heisenberg, comps)
    idm = identity_morphism(heisenberg)
    assert compose(idm, morphism) == morphism
    assert compose(morphism, idm) == morphism


def test_compose_weight_two_formula():
    rng = random.Random(67)
    space = SMALL_SPACES[1]
    setting = make_linfty(space, {}, cap=3)
    f = MorphismComponents(
        setting, setting, random_component_family(setting, setting, 3, rng)
    )
    g = MorphismComponents(
        setting, setting, random_component_family(setting, setting, 3, rng)
    )
    gf = compose(g, f)
    lift_f, lift_g, lift_gf = lift_morphism(f), lift_morphism(g), lift_morphism(gf)
    for word in setting.words():
        assert lift_g.apply(lift_f.on_word(word)) == lift_gf.on_word(word)
    # weight 1 is plain composition
    for name in space.names:
        word, _ = canonicalize_word((name,), space)
        assert gf.component(1).value(word) == g.component(1).apply(
            [f.component(1).value(word)]
        )


def test_compose_associative():
    rng = random.Random(71)
    space = SMALL_SPACES[0]
    setting = make_linfty(space, {}, cap=3)

    def rand_morphism():
        return MorphismComponents(
            setting, setting, random_component_family(setting, setting, 3, rng)
        )

    f, g, h = rand_morphism(), rand_morphism(), rand_morphism()
    assert compose(compose(h, g), f) == compose(h, compose(g, f))


def test_compose_rejects_mismatch(heisenberg, two_term):
    idh = identity_morphism(heisenberg)
    with pytest.raises(InputError):
        compose(idh, identity_morphism(two_term))


def test_cohomology_abelian(two_term_with_h):
    abelian = make_linfty(two_term_with_h.space, {}, cap=3)
    report = cohomology(abelian)
    assert report.dimensions == {0: 1, 1: 2}


def test_cohomology_acyclic(two_term):
    report = cohomology(two_term)
    assert report.nonzero_degrees() == []


def test_cohomology_with_survivor(two_term_with_h):
    report = cohomology(two_term_with_h)
    assert report.dimensions == {0: 0, 1: 1}
    assert report.representatives[1] == [
        Element(two_term_with_h.space, 1, {"c": F(1)})
    ]


def test_quasi_iso_identity(heisenberg):
    assert is_quasi_iso(identity_morphism(heisenberg)).verdict


def test_quasi_iso_zero_between_acyclics(two_term):
    zero = MorphismComponents(two_term, two_term, {})
    assert check_morphism(zero).passed
    assert is_quasi_iso(zero).verdict


def test_quasi_iso_zero_with_cohomology(two_term_with_h):
    zero = MorphismComponents(two_term_with_h, two_term_with_h, {})
    assert check_morphism(zero).passed
    report = is_quasi_iso(zero)
    assert not report.verdict
    assert report.per_degree[1] is False


def test_weight_one_chain_map_property():
    rng = random.Random(73)
    space = SMALL_SPACES[0]
    setting = random_valid_structure(space, 3, rng)
    idm = identity_morphism(setting)
    report = check_morphism(idm)
    assert report.passed
    q1 = setting.maps.get(1)
    f1 = idm.component(1)
    if q1 is not None:
        for name in space.names:
            word, _ = canonicalize_word((name,), space)
            lhs = q1.apply([f1.value(word)])
            rhs = f1.apply([q1.value(word)])
            assert lhs == rhs
