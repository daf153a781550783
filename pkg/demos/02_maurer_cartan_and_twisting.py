# Curvature of degree-1 elements, flatness, and twisting.

from fractions import Fraction

from linfty import (
    Element,
    GradedSpace,
    MultiMap,
    check_relations,
    make_linfty,
    mc_element,
    mc_residual,
    twist,
)

F = Fraction

space = GradedSpace([("x", 1), ("y", 1), ("z", 2)])
q2 = MultiMap.from_entries(space, space, 2, 0, {("x", "y"): {"z": F(1)}})
heis = make_linfty(space, {2: q2}, cap=4)

# The curvature of a*x + b*y is a*b*z, so flatness means a*b = 0.
for a, b in [(2, 3), (2, 0), (0, 5)]:
    pi = Element(space, 1, {"x": F(a), "y": F(b)})
    print("curvature of %d*x + %d*y:" % (a, b), repr(mc_residual(heis, pi)))

# Twisting by the flat element x turns the pairing with x into a
# differential: the twisted weight-1 map sends y to z.
pi = mc_element(heis, Element(space, 1, {"x": F(1)}))
twisted = twist(heis, pi)
print("twisted weight-1 map on y:", repr(twisted.maps[1].evaluate(("y",))))
print("twisted weight-1 map on x:", repr(twisted.maps[1].evaluate(("x",))))
print("twisted structure:", check_relations(twisted).summary())

# Twisting back by -x recovers the original structure maps exactly.
back = twist(twisted, mc_element(twisted, Element(space, 1, {"x": F(-1)})))
print("twist by x then by -x restores the maps:", back.maps == heis.maps)
