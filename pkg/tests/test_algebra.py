import random
from fractions import Fraction

import pytest

from linfty import (
    Element,
    GradedSpace,
    MultiMap,
    StructureError,
    check_relations,
    from_dgla,
    lift_coderivation,
    lower_central_series,
    make_linfty,
    reduced_coproduct,
    unshuffle_residual,
    wedge_basis,
)
from linfty.grading import CoalgebraElement, canonicalize_word

from conftest import SMALL_SPACES, endomorphism_dgla, random_candidate

F = Fraction


def residual_via_lift(structure, word):
    lift = lift_coderivation(structure)
    image = lift.apply(lift.on_word(word))
    out = Element.zero(structure.space, word.degree + 3 - word.weight)
    for w, c in image.terms.items():
        if w.weight == 1:
            out = out + Element.basis(structure.space, w.factors[0], c)
    return out


def test_make_linfty_rejects_wrong_degree():
    # a weight-1 structure map must have degree 1, not 0
    space = GradedSpace([("x", 1), ("z", 2)])
    word, _ = canonicalize_word(("x",), space)
    q1_bad = MultiMap(space, space, 1, 0, {word: Element.basis(space, "x")})
    with pytest.raises(StructureError):
        make_linfty(space, {1: q1_bad}, cap=2)


def test_make_linfty_accepts_heisenberg(heisenberg):
    assert heisenberg.maps[2].evaluate(("x", "y")) == Element(
        heisenberg.space, 2, {"z": F(1)}
    )


def test_weight_one_degree_rule():
    # Q_1 of degree 1 is accepted: 2 - n with n = 1
    space = GradedSpace([("x", 1), ("z", 2)])
    q1 = MultiMap.from_entries(space, space, 1, 1, {("x",): {"z": F(1)}})
    structure = make_linfty(space, {1: q1}, cap=2)
    assert structure.maps[1].degree == 1


def test_abelian_passes(heisenberg):
    abelian = make_linfty(heisenberg.space, {}, cap=4)
    assert check_relations(abelian).passed


def test_q1_square_failure_reported():
    space = GradedSpace([("a", 0), ("b", 1), ("c", 2)])
    q1 = MultiMap.from_entries(
        space, space, 1, 1, {("a",): {"b": F(1)}, ("b",): {"c": F(1)}}
    )
    report = check_relations(make_linfty(space, {1: q1}, cap=3))
    assert not report.passed
    weight_one = [w for w in report.residuals if w.weight == 1]
    assert any(report.residuals[w] == Element(space, 2, {"c": F(1)}) for w in weight_one)


def test_heisenberg_relations(heisenberg):
    assert check_relations(heisenberg).passed


def test_lift_projection_consistency(heisenberg, end_dgla):
    for structure in (heisenberg, end_dgla):
        lift = lift_coderivation(structure)
        for word in structure.words():
            projected = Element.zero(
                structure.space, word.degree + 2 - word.weight
            )
            for w, c in lift.on_word(word).terms.items():
                if w.weight == 1:
                    projected = projected + Element.basis(
                        structure.space, w.factors[0], c
                    )
            assert projected == structure.map_at(word.weight).value(word)


def test_lift_heisenberg_example(heisenberg):
    lift = lift_coderivation(heisenberg)
    word, _ = canonicalize_word(("x", "y"), heisenberg.space)
    image = lift.on_word(word)
    zword, _ = canonicalize_word(("z",), heisenberg.space)
    assert image.terms == {zword: F(1)}


def test_coderivation_law():
    rng = random.Random(3)
    for trial in range(15):
        space = SMALL_SPACES[trial % len(SMALL_SPACES)]
        structure = random_candidate(space, 4, rng)
        lift = lift_coderivation(structure)
        for word in structure.words():
            lhs = {}
            for w2, c in lift.on_word(word).terms.items():
                if w2.weight < 2:
                    continue
                for (lw, rw), s in reduced_coproduct(w2, space).items():
                    key = (lw, rw)
                    lhs[key] = lhs.get(key, F(0)) + c * s
            rhs = {}
            for (lw, rw), s in reduced_coproduct(word, space).items():
                for w2, c in lift.on_word(lw).terms.items():
                    key = (w2, rw)
                    rhs[key] = rhs.get(key, F(0)) + s * c
                crossing = -1 if (lw.degree - lw.weight) % 2 else 1
                for w2, c in lift.on_word(rw).terms.items():
                    key = (lw, w2)
                    rhs[key] = rhs.get(key, F(0)) + s * crossing * c
            assert {k: v for k, v in lhs.items() if v} == {
                k: v for k, v in rhs.items() if v
            }


def test_oracle_duality_randomized():
    rng = random.Random(11)
    for trial in range(30):
        space = SMALL_SPACES[trial % len(SMALL_SPACES)]
        structure = random_candidate(space, 4, rng)
        for word in structure.words():
            assert residual_via_lift(structure, word) == unshuffle_residual(
                structure, word
            )


def test_from_dgla_end_complex(end_dgla):
    assert check_relations(end_dgla).passed


def test_from_dgla_zero_maps():
    space = GradedSpace([("a", 0), ("b", 1)])
    structure = from_dgla(space, None, None, cap=3)
    assert check_relations(structure).passed
    assert not structure.maps


def test_from_dgla_two_term():
    space = GradedSpace([("a", 0), ("b", 1)])
    d = MultiMap.from_entries(space, space, 1, 1, {("a",): {"b": F(1)}})
    structure = from_dgla(space, d, None, cap=3)
    assert check_relations(structure).passed


def test_from_dgla_sl2(sl2):
    assert check_relations(sl2).passed


def test_from_dgla_violations_detected(sl2):
    space = sl2.space
    # broken Jacobi
    bad_bracket = MultiMap.from_entries(
        space,
        space,
        2,
        0,
        {
            ("e", "f"): {"h": F(1)},
            ("e", "h"): {"e": F(-2)},
            ("f", "h"): {"f": F(3)},
        },
    )
    assert not check_relations(from_dgla(space, None, bad_bracket, cap=3)).passed

    # differential not squaring to zero
    abc = GradedSpace([("a", 0), ("b", 1), ("c", 2)])
    bad_d = MultiMap.from_entries(
        abc, abc, 1, 1, {("a",): {"b": F(1)}, ("b",): {"c": F(1)}}
    )
    assert not check_relations(from_dgla(abc, bad_d, None, cap=3)).passed

    # differential that is not a derivation of the bracket
    end = endomorphism_dgla()
    broken_d = MultiMap.from_entries(
        end.space, end.space, 1, 1, {("e00",): {"e10": F(1)}}
    )
    assert not check_relations(
        from_dgla(end.space, broken_d, end.maps[2], cap=3)
    ).passed


def test_lower_central_abelian():
    space = GradedSpace([("x", 1)])
    chain = lower_central_series(make_linfty(space, {}, cap=2))
    assert chain.nilpotent and chain.depth == 2


def test_lower_central_two_step():
    space = GradedSpace([("w", 0), ("x", 1), ("y", 1)])
    q2 = MultiMap.from_entries(space, space, 2, 0, {("w", "x"): {"y": F(1)}})
    structure = make_linfty(space, {2: q2}, cap=3)
    chain = lower_central_series(structure)
    assert chain.nilpotent and chain.depth == 3
    level2 = chain.spanning_elements(2)
    assert level2 == [Element(space, 1, {"y": F(1)})]


def test_lower_central_non_nilpotent(non_nilpotent):
    chain = lower_central_series(non_nilpotent)
    assert not chain.nilpotent
    assert chain.stabilized
    assert chain.verdict() == "not within bound"
    level2 = chain.spanning_elements(2)
    assert level2 == [Element(non_nilpotent.space, 1, {"v": F(1)})]


def test_lower_central_q1_stability(step_nilpotent, two_term):
    for structure in (step_nilpotent, two_term):
        chain = lower_central_series(structure)
        q1 = structure.maps.get(1)
        if q1 is None:
            continue
        for level in range(1, len(chain.subspaces) + 1):
            spanning = chain.spanning_elements(level)
            rows = {e: q1.apply([e]) for e in spanning}
            for image in rows.values():
                if image.is_zero():
                    continue
                names = structure.space.basis_of_degree(image.degree)
                vec = [F(image.coeffs.get(n, 0)) for n in names]
                from linfty import linalg

                level_rows = chain.subspaces[level - 1].get(image.degree, [])
                assert linalg.in_span([list(r) for r in level_rows], vec)


def test_report_names_cap(heisenberg):
    assert "cap 4" in check_relations(heisenberg).summary()
