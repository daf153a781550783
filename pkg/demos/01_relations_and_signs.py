# Graded words, Koszul signs, structure maps and the relation check.
#
# Everything runs over exact rationals; a structure is a family of
# weight-n maps of degree 2 - n on a finite graded basis, and the relation
# check projects the squared coderivation back to the basis.

from fractions import Fraction

from linfty import (
    GradedSpace,
    MultiMap,
    canonicalize_word,
    check_relations,
    from_dgla,
    koszul_sign,
    make_linfty,
    wedge_basis,
)

F = Fraction

# The sign convention in one line: swapping adjacent arguments of degrees
# p and q costs -(-1)**(p*q).  Equal even-degree factors therefore square
# to zero while odd-degree factors may repeat.
print("swap two degree-1 entries:", koszul_sign((1, 0), (1, 1)))
print("swap degrees 1 and 2:     ", koszul_sign((1, 0), (1, 2)))

V = GradedSpace([("a", 0), ("b", 1)])
print("canonicalize (b, a):", canonicalize_word(("b", "a"), V))
print("canonicalize (a, a):", canonicalize_word(("a", "a"), V))
print("weight-3 words over {a:0, b:1}:", [w.factors for w in wedge_basis(V, 3)])
print()

# A nilpotent structure: x ^ y -> z with |x| = |y| = 1, |z| = 2.
heis_space = GradedSpace([("x", 1), ("y", 1), ("z", 2)])
q2 = MultiMap.from_entries(heis_space, heis_space, 2, 0, {("x", "y"): {"z": F(1)}})
heis = make_linfty(heis_space, {2: q2}, cap=4)
print("Heisenberg-type:", check_relations(heis).summary())

# A Lie algebra goes in through from_dgla with no sign twist at all.
sl2_space = GradedSpace([("e", 0), ("f", 0), ("h", 0)])
bracket = MultiMap.from_entries(
    sl2_space,
    sl2_space,
    2,
    0,
    {
        ("e", "f"): {"h": F(1)},
        ("e", "h"): {"e": F(-2)},
        ("f", "h"): {"f": F(2)},
    },
)
print("sl2:", check_relations(from_dgla(sl2_space, None, bracket, cap=4)).summary())

# Breaking one structure constant breaks the Jacobi identity, and the
# report names the offending words.
broken = MultiMap.from_entries(
    sl2_space,
    sl2_space,
    2,
    0,
    {
        ("e", "f"): {"h": F(1)},
        ("e", "h"): {"e": F(-2)},
        ("f", "h"): {"f": F(3)},
    },
)
print(check_relations(from_dgla(sl2_space, None, broken, cap=3)).summary())

# A differential that does not square to zero fails at weight one.
abc = GradedSpace([("a", 0), ("b", 1), ("c", 2)])
q1 = MultiMap.from_entries(abc, abc, 1, 1, {("a",): {"b": F(1)}, ("b",): {"c": F(1)}})
print(check_relations(make_linfty(abc, {1: q1}, cap=3)).summary())
