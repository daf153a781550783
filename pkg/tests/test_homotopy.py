import random
from fractions import Fraction
from itertools import combinations

import pytest

from linfty import (
    Element,
    GradedSpace,
    MultiMap,
    PathDegreeOverflow,
    PolyPath,
    build_convolution,
    build_path_algebra,
    check_homotopy,
    gauge_to_homotopy,
    identity_morphism,
    koszul_sign,
    morphism_to_mc,
    unsplit_residual,
)
from linfty.homotopy import (
    HomotopyElement,
    PathAlgebra,
    PathElement,
    evolution_residual,
    flatness_residual,
)
from linfty.perturbation import PerturbationRequest, direction_element, flow_morphism

F = Fraction


def random_path_element(space, degree, rng, max_power=2, density=0.6):
    even = {}
    odd = {}
    for power in range(max_power + 1):
        combo = {
            n: F(rng.randint(-2, 2))
            for n in space.basis_of_degree(degree)
            if rng.random() < density
        }
        combo = {n: c for n, c in combo.items() if c}
        if combo:
            even[power] = Element(space, degree, combo)
        combo = {
            n: F(rng.randint(-2, 2))
            for n in space.basis_of_degree(degree - 1)
            if rng.random() < density
        }
        combo = {n: c for n, c in combo.items() if c}
        if combo:
            odd[power] = Element(space, degree - 1, combo)
    return PathElement(
        space, degree, PolyPath(space, degree, even), PolyPath(space, degree - 1, odd)
    )


def test_path_relations_on_probes(end_dgla):
    rng = random.Random(307)
    algebra = build_path_algebra(end_dgla, t_cap=20)
    space = end_dgla.space
    for _ in range(25):
        n_rel = rng.choice([1, 2, 3])
        degrees = [rng.choice([-1, 0, 1, 2]) for _ in range(n_rel)]
        elements = [random_path_element(space, d, rng) for d in degrees]
        total = None
        for i in range(1, n_rel + 1):
            j = n_rel - i + 1
            coeff_sign = -1 if (i * (j - 1)) % 2 else 1
            for chosen in combinations(range(n_rel), i):
                rest = [p for p in range(n_rel) if p not in chosen]
                sign = koszul_sign(list(chosen) + rest, degrees)
                inner = algebra.q_eval(i, [elements[p] for p in chosen])
                outer = algebra.q_eval(j, [inner] + [elements[p] for p in rest])
                term = outer.scale(F(coeff_sign * sign))
                total = term if total is None else total + term
        assert total is not None and total.is_zero()


def test_embedding_and_projections(end_dgla):
    algebra = build_path_algebra(end_dgla)
    x = Element(end_dgla.space, 1, {"e10": F(3)})
    embedded = algebra.embed(x)
    assert algebra.at_time(embedded, F(0)) == x
    assert algebra.at_time(embedded, F(1)) == x


def test_projections_are_componentwise_morphisms(end_dgla):
    # evaluating at a time commutes with the extended structure maps
    rng = random.Random(311)
    algebra = build_path_algebra(end_dgla, t_cap=20)
    space = end_dgla.space
    for _ in range(10):
        n = rng.choice([1, 2])
        degrees = [rng.choice([-1, 0, 1]) for _ in range(n)]
        elements = [random_path_element(space, d, rng, max_power=1) for d in degrees]
        out = algebra.q_eval(n, elements)
        for t in (F(0), F(1)):
            direct = algebra.at_time(out, t)
            q = end_dgla.maps.get(n)
            projected = [algebra.at_time(e, t) for e in elements]
            want = (
                q.apply(projected)
                if q is not None
                else Element.zero(space, sum(degrees) + 2 - n)
            )
            assert direct == want


def test_embedded_elements_have_no_derivative_term(end_dgla):
    algebra = build_path_algebra(end_dgla)
    x = Element(end_dgla.space, 0, {"e00": F(1)})
    out = algebra.q_eval(1, [algebra.embed(x)])
    assert out.odd.is_zero()


def test_leibniz_on_linear_path(end_dgla):
    algebra = build_path_algebra(end_dgla)
    g = Element(end_dgla.space, 0, {"e00": F(1)})
    linear = PathElement(
        end_dgla.space, 0, PolyPath(end_dgla.space, 0, {1: g}), None
    )
    out = algebra.q_eval(1, [linear])
    assert out.even == PolyPath(
        end_dgla.space, 1, {1: end_dgla.maps[1].apply([g])}
    )
    assert out.odd == PolyPath.constant(g)


def test_dt_squared_vanishes(end_dgla):
    algebra = build_path_algebra(end_dgla)
    odd_only = PathElement(
        end_dgla.space,
        1,
        None,
        PolyPath.constant(Element(end_dgla.space, 0, {"e00": F(1)})),
    )
    assert algebra.q_eval(2, [odd_only, odd_only]).is_zero()


def test_degree_guard():
    space = GradedSpace([("a", 0), ("b", 1)])
    q1 = MultiMap.from_entries(space, space, 1, 1, {("a",): {"b": F(1)}})
    from linfty import make_linfty

    structure = make_linfty(space, {1: q1}, cap=3)
    algebra = PathAlgebra(structure, t_cap=1)
    high = PathElement(
        space, 0, PolyPath(space, 0, {2: Element(space, 0, {"a": F(1)})}), None
    )
    with pytest.raises(PathDegreeOverflow):
        algebra.q_eval(1, [high])


@pytest.fixture
def flowed_pair(two_term):
    idm = identity_morphism(two_term)
    correction = MultiMap.from_entries(
        two_term.space, two_term.space, 2, -2, {("b", "b"): {"a": F(1)}}
    )
    perturbed, _, conv = flow_morphism(PerturbationRequest(idm, 2, correction))
    return idm, perturbed, conv, correction


def test_gauge_homotopy_verifies(flowed_pair):
    idm, perturbed, conv, correction = flowed_pair
    h = gauge_to_homotopy(idm, direction_element(conv, 2, correction))
    report = check_homotopy(idm, perturbed, h)
    assert report.passed
    assert "cap 3" in report.summary()


def test_gauge_homotopy_h1_constant(flowed_pair):
    idm, perturbed, conv, correction = flowed_pair
    h = gauge_to_homotopy(idm, direction_element(conv, 2, correction))
    xi = conv.hom_to_element(direction_element(conv, 2, correction))
    assert h.h1 == PolyPath.constant(xi)
    assert h.endpoint(F(0)) == morphism_to_mc(idm)


def test_constant_homotopy(flowed_pair):
    idm, _, conv, _ = flowed_pair
    h = gauge_to_homotopy(idm, conv.zero_hom(0))
    report = check_homotopy(idm, idm, h)
    assert report.passed


def test_unsplit_equals_split(flowed_pair):
    idm, perturbed, conv, correction = flowed_pair
    h = gauge_to_homotopy(idm, direction_element(conv, 2, correction))
    combined = unsplit_residual(h)
    assert combined.even == flatness_residual(h)
    # recorded convention: the dt part carries the opposite sign
    assert combined.odd == evolution_residual(h).scale(F(-1))
    assert combined.is_zero()


def test_corrupted_h1_detected(flowed_pair):
    idm, perturbed, conv, correction = flowed_pair
    h = gauge_to_homotopy(idm, direction_element(conv, 2, correction))
    extra = MultiMap.from_entries(
        idm.source.space, idm.target.space, 1, -1, {("b",): {"a": F(1)}}
    )
    bad_h1 = h.h1 + PolyPath.constant(
        conv.hom_to_element(direction_element(conv, 1, extra))
    )
    corrupted = HomotopyElement(conv, h.h0, bad_h1)
    report = check_homotopy(idm, perturbed, corrupted)
    assert not report.passed
    assert not evolution_residual(corrupted).is_zero()
    assert flatness_residual(corrupted).is_zero()
    combined = unsplit_residual(corrupted)
    assert combined.even.is_zero() and not combined.odd.is_zero()


def test_wrong_endpoint_detected(flowed_pair):
    idm, perturbed, conv, correction = flowed_pair
    h = gauge_to_homotopy(idm, direction_element(conv, 2, correction))
    report = check_homotopy(perturbed, perturbed, h)
    assert not report.passed
    assert not report.starts_at_first
