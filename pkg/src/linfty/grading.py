"""Exact graded linear algebra over the rationals.

A graded space is a finite ordered list of named basis elements with integer
degrees.  Multilinear maps follow the antisymmetric sign convention in which
transposing two adjacent arguments of degrees p and q costs ``-(-1)**(p*q)``.
Under this convention a product repeating an even-degree element vanishes
while odd-degree elements may repeat, so the weight-n words below are the
basis of the n-th graded wedge power.

>>> V = GradedSpace([("a", 0), ("b", 1)])
>>> koszul_sign((1, 0), (0, 1))
-1
>>> canonicalize_word(("b", "a"), V)
(Word(('a', 'b'), degree=1), -1)
>>> [w.factors for w in wedge_basis(V, 2)]
[('a', 'b'), ('b', 'b')]
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


class InputError(ValueError):
    """Bad argument: unknown basis name, length mismatch, wrong degree."""


class StructureError(ValueError):
    """A structure map violates its declared weight/degree contract."""


def _inversion_pairs(perm: Sequence[int]):
    n = len(perm)
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                yield perm[j], perm[i]


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of rearranging graded symbols, one ``-(-1)**(p*q)`` per swap.

    ``permutation[k]`` is the original position (0-based) of the symbol that
    ends up in slot k; ``degrees`` are indexed by original position.

    >>> koszul_sign((0, 1), (1, 2))
    1
    >>> koszul_sign((1, 0), (1, 1))
    1
    >>> koszul_sign((1, 0), (1, 2))
    -1
    """
    if sorted(permutation) != list(range(len(degrees))):
        raise InputError(
            "permutation of length %d does not match %d degrees"
            % (len(permutation), len(degrees))
        )
    exponent = 0
    inversions = 0
    for a, b in _inversion_pairs(permutation):
        inversions += 1
        exponent += degrees[a] * degrees[b]
    # sgn(permutation) times the classical Koszul sign.
    return -1 if (exponent + inversions) % 2 else 1


def classical_koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Classical Koszul sign: ``(-1)**(p*q)`` per adjacent transposition."""
    exponent = sum(degrees[a] * degrees[b] for a, b in _inversion_pairs(permutation))
    return -1 if exponent % 2 else 1


def desuspension_sign(degrees: Sequence[int]) -> int:
    """Sign of pulling one suspension out of each tensor factor in turn.

    Equals ``(-1)**sum(degrees[i] for i < j)`` over pairs i < j; it converts
    between the convention above and the classical one on shifted degrees.
    """
    exponent = 0
    running = 0
    for d in reversed(degrees):
        exponent += running * d
        running += 1
    return -1 if exponent % 2 else 1


class GradedSpace:
    """Finite basis with integer degrees; declaration order is canonical.

    >>> V = GradedSpace([("x", 1), ("y", 1), ("z", 2)])
    >>> V.degree("z")
    2
    >>> V.dimension(1)
    2
    """

    def __init__(self, basis: Iterable[tuple[str, int]]):
        names = []
        degrees = {}
        for name, degree in basis:
            if name in degrees:
                raise InputError("duplicate basis name %r" % name)
            names.append(name)
            degrees[name] = int(degree)
        self.names: tuple[str, ...] = tuple(names)
        self._degrees: dict[str, int] = degrees
        self._order: dict[str, int] = {n: i for i, n in enumerate(names)}

    def degree(self, name: str) -> int:
        try:
            return self._degrees[name]
        except KeyError:
            raise InputError("unknown basis name %r" % name) from None

    def index(self, name: str) -> int:
        return self._order[name]

    def degrees_of(self, names: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.degree(n) for n in names)

    def dimension(self, degree: int | None = None) -> int:
        if degree is None:
            return len(self.names)
        return sum(1 for n in self.names if self._degrees[n] == degree)

    def basis_of_degree(self, degree: int) -> tuple[str, ...]:
        return tuple(n for n in self.names if self._degrees[n] == degree)

    def degrees_present(self) -> tuple[int, ...]:
        return tuple(sorted(set(self._degrees.values())))

    def __contains__(self, name: str) -> bool:
        return name in self._degrees

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedSpace)
            and self.names == other.names
            and self._degrees == other._degrees
        )

    def __hash__(self):
        return hash((self.names, tuple(self._degrees[n] for n in self.names)))

    def __repr__(self):
        inside = ", ".join("%s:%d" % (n, self._degrees[n]) for n in self.names)
        return "GradedSpace(%s)" % inside


class Word:
    """Canonical product of basis names: sorted, no even-degree repeats."""

    __slots__ = ("factors", "degree")

    def __init__(self, factors: tuple[str, ...], degree: int):
        self.factors = factors
        self.degree = degree

    @property
    def weight(self) -> int:
        return len(self.factors)

    def suspended_degree(self) -> int:
        # Degree of the word inside the coalgebra it generates.
        return self.degree + 1 - len(self.factors)

    def __eq__(self, other):
        return isinstance(other, Word) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __lt__(self, other: "Word"):
        return (len(self.factors), self.factors) < (len(other.factors), other.factors)

    def __repr__(self):
        return "Word(%r, degree=%d)" % (self.factors, self.degree)

    def label(self) -> str:
        return "^".join(self.factors)


def canonicalize_word(
    factors: Sequence[str], space: GradedSpace
) -> tuple[Word | None, int]:
    """Sort ``factors`` into canonical order, tracking the sign.

    Returns ``(word, sign)``, or ``(None, 0)`` when the word vanishes because
    an even-degree name repeats.

    >>> V = GradedSpace([("a", 0), ("b", 1)])
    >>> canonicalize_word(("a", "a"), V)
    (None, 0)
    >>> canonicalize_word(("b", "b"), V)
    (Word(('b', 'b'), degree=2), 1)
    """
    degrees = space.degrees_of(factors)
    order = [space.index(n) for n in factors]
    seen = set()
    for name in factors:
        if name in seen and space.degree(name) % 2 == 0:
            return None, 0
        seen.add(name)
    perm = sorted(range(len(factors)), key=lambda i: (order[i], i))
    sign = koszul_sign(perm, degrees)
    sorted_names = tuple(factors[i] for i in perm)
    return Word(sorted_names, sum(degrees)), sign


def wedge_basis(space: GradedSpace, weight: int) -> list[Word]:
    """All canonical words of the given weight, in deterministic order.

    >>> V = GradedSpace([("a", 0), ("b", 1)])
    >>> [w.factors for w in wedge_basis(V, 3)]
    [('a', 'b', 'b'), ('b', 'b', 'b')]
    """
    if weight < 1:
        raise InputError("weight must be >= 1, got %d" % weight)
    words: list[Word] = []

    def extend(prefix: list[str], start: int):
        if len(prefix) == weight:
            degree = sum(space.degree(n) for n in prefix)
            words.append(Word(tuple(prefix), degree))
            return
        for i in range(start, len(space.names)):
            name = space.names[i]
            if space.degree(name) % 2 == 0 and name in prefix:
                continue
            prefix.append(name)
            extend(prefix, i)
            prefix.pop()

    extend([], 0)
    return words


def _coeff_is_zero(c) -> bool:
    return not c


class Element:
    """Homogeneous element of a graded space: name -> exact coefficient.

    Coefficients are ``Fraction`` in ordinary use; any exact ring element
    supporting ``+``, ``-``, ``*`` and truthiness works (polynomial
    coefficients ride through the same code paths).
    """

    __slots__ = ("space", "degree", "coeffs")

    def __init__(self, space: GradedSpace, degree: int, coeffs: Mapping | None = None):
        self.space = space
        self.degree = degree
        clean = {}
        for name, c in (coeffs or {}).items():
            if space.degree(name) != degree:
                raise InputError(
                    "basis name %r has degree %d, element declared degree %d"
                    % (name, space.degree(name), degree)
                )
            if not _coeff_is_zero(c):
                clean[name] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, space: GradedSpace, degree: int) -> "Element":
        return cls(space, degree, {})

    @classmethod
    def basis(cls, space: GradedSpace, name: str, coeff=Fraction(1)) -> "Element":
        return cls(space, space.degree(name), {name: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: self.space.index(kv[0]))

    def __add__(self, other: "Element") -> "Element":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for name, c in other.coeffs.items():
            coeffs[name] = coeffs.get(name, 0) + c
        return Element(self.space, self.degree, coeffs)

    def __sub__(self, other: "Element") -> "Element":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for name, c in other.coeffs.items():
            coeffs[name] = coeffs.get(name, 0) - c
        return Element(self.space, self.degree, coeffs)

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def scale(self, scalar) -> "Element":
        if _coeff_is_zero(scalar):
            return Element(self.space, self.degree, {})
        return Element(
            self.space, self.degree, {n: scalar * c for n, c in self.coeffs.items()}
        )

    def _check_compatible(self, other: "Element"):
        if self.space != other.space or self.degree != other.degree:
            raise InputError("elements live in different spaces or degrees")

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.space == other.space
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join("%s*%s" % (c, n) for n, c in self.items())


def parse_combination(space: GradedSpace, terms: Mapping[str, Fraction]) -> Element:
    """Build an element from name -> coefficient, inferring the degree."""
    degrees = {space.degree(n) for n, c in terms.items() if c}
    if not degrees:
        raise InputError("cannot infer degree of an empty combination")
    if len(degrees) > 1:
        raise InputError("combination mixes degrees %s" % sorted(degrees))
    return Element(space, degrees.pop(), dict(terms))


class MultiMap:
    """Weight-n graded-antisymmetric multilinear map, stored sparsely.

    Values live on canonical words only; evaluation on an arbitrary tuple is
    the canonicalization sign times the stored value, zero when the tuple
    canonicalizes to zero.  A weight-n map of degree d sends a word of degree
    w to an element of degree w + d.
    """

    def __init__(
        self,
        source: GradedSpace,
        target: GradedSpace,
        weight: int,
        degree: int,
        values: Mapping[Word, Element] | None = None,
    ):
        if weight < 1:
            raise InputError("map weight must be >= 1")
        self.source = source
        self.target = target
        self.weight = weight
        self.degree = degree
        self.values: dict[Word, Element] = {}
        for word, value in (values or {}).items():
            self._store(word, value)

    def _store(self, word: Word, value: Element):
        if len(word.factors) != self.weight:
            raise StructureError(
                "word %r has weight %d, map has weight %d"
                % (word.factors, len(word.factors), self.weight)
            )
        if value.degree != word.degree + self.degree:
            raise StructureError(
                "value on %r has degree %d, expected %d"
                % (word.factors, value.degree, word.degree + self.degree)
            )
        if not value.is_zero():
            self.values[word] = value

    @classmethod
    def from_entries(
        cls,
        source: GradedSpace,
        target: GradedSpace,
        weight: int,
        degree: int,
        entries: Mapping[Sequence[str], Mapping[str, Fraction]],
    ) -> "MultiMap":
        """Build from raw tuples; entries on non-canonical tuples are signed in."""
        m = cls(source, target, weight, degree)
        for names, combo in entries.items():
            word, sign = canonicalize_word(tuple(names), source)
            if word is None:
                raise InputError("entry on %r, which canonicalizes to zero" % (names,))
            value = parse_combination(target, combo).scale(Fraction(sign))
            expected = word.degree + degree
            if value.degree != expected:
                raise StructureError(
                    "value on %r has degree %d, expected %d"
                    % (names, value.degree, expected)
                )
            current = m.values.get(word)
            m._store(word, value if current is None else current + value)
        return m

    def value(self, word: Word) -> Element:
        got = self.values.get(word)
        if got is None:
            return Element.zero(self.target, word.degree + self.degree)
        return got

    def evaluate(self, names: Sequence[str]) -> Element:
        """Value on an arbitrary ordered tuple of basis names."""
        word, sign = canonicalize_word(tuple(names), self.source)
        if word is None:
            degree = sum(self.source.degree(n) for n in names) + self.degree
            return Element.zero(self.target, degree)
        return self.value(word).scale(Fraction(sign))

    def apply(self, elements: Sequence[Element]) -> Element:
        """Multilinear evaluation on elements (expanded over their supports)."""
        if len(elements) != self.weight:
            raise InputError(
                "map of weight %d applied to %d arguments"
                % (self.weight, len(elements))
            )
        degree = sum(e.degree for e in elements) + self.degree
        total = Element.zero(self.target, degree)
        stack = [((), Fraction(1))]
        for e in elements:
            stack = [
                (names + (n,), c * coeff)
                for names, c in stack
                for n, coeff in e.coeffs.items()
            ]
        for names, c in stack:
            term = self.evaluate(names)
            if not term.is_zero():
                total = total + term.scale(c)
        return total

    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> list[Word]:
        return sorted(self.values, key=lambda w: w.factors)

    def __eq__(self, other):
        return (
            isinstance(other, MultiMap)
            and self.source == other.source
            and self.target == other.target
            and self.weight == other.weight
            and self.degree == other.degree
            and self.values == other.values
        )

    def __repr__(self):
        return "MultiMap(weight=%d, degree=%d, %d entries)" % (
            self.weight,
            self.degree,
            len(self.values),
        )


class CoalgebraElement:
    """Sparse combination of canonical words across weights 1..cap."""

    __slots__ = ("space", "terms")

    def __init__(self, space: GradedSpace, terms: Mapping[Word, Fraction] | None = None):
        self.space = space
        self.terms: dict[Word, Fraction] = {
            w: c for w, c in (terms or {}).items() if not _coeff_is_zero(c)
        }

    @classmethod
    def from_word(cls, space: GradedSpace, word: Word, coeff=Fraction(1)):
        return cls(space, {word: coeff})

    def add_term(self, word: Word, coeff):
        if _coeff_is_zero(coeff):
            return
        new = self.terms.get(word, 0) + coeff
        if _coeff_is_zero(new):
            self.terms.pop(word, None)
        else:
            self.terms[word] = new

    def __add__(self, other: "CoalgebraElement") -> "CoalgebraElement":
        out = CoalgebraElement(self.space, dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other: "CoalgebraElement") -> "CoalgebraElement":
        out = CoalgebraElement(self.space, dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, -c)
        return out

    def scale(self, scalar) -> "CoalgebraElement":
        if _coeff_is_zero(scalar):
            return CoalgebraElement(self.space)
        return CoalgebraElement(
            self.space, {w: scalar * c for w, c in self.terms.items()}
        )

    def weight_part(self, weight: int) -> "CoalgebraElement":
        return CoalgebraElement(
            self.space, {w: c for w, c in self.terms.items() if w.weight == weight}
        )

    def weights(self) -> tuple[int, ...]:
        return tuple(sorted({w.weight for w in self.terms}))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].factors)

    def __eq__(self, other):
        return (
            isinstance(other, CoalgebraElement)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*(%s)" % (c, w.label()) for w, c in self.items())


def subword(word: Word, positions: Sequence[int], space: GradedSpace) -> Word:
    """Sub-word at the given (sorted) positions; stays canonical."""
    names = tuple(word.factors[i] for i in positions)
    return Word(names, sum(space.degree(n) for n in names))


def unshuffle_sign(word: Word, positions: Sequence[int], space: GradedSpace) -> int:
    """Sign (in this module's convention) of moving ``positions`` to the front."""
    rest = [i for i in range(word.weight) if i not in positions]
    perm = list(positions) + rest
    return koszul_sign(perm, space.degrees_of(word.factors))


def reduced_coproduct(
    word: Word, space: GradedSpace
) -> dict[tuple[Word, Word], int]:
    """Two-block splittings with suspension-consistent signs.

    This is the coproduct for which the coderivation lift satisfies
    Delta o Q = (Q (x) id + id (x) Q) o Delta, the tensor crossing using the
    degree ``plain - weight`` of the first factor.  Reporting-level
    splittings signed purely by :func:`koszul_sign` live in the convolution
    module instead.
    """
    m = word.weight
    degrees = space.degrees_of(word.factors)
    chi_in = desuspension_sign(degrees)
    shifted = [d - 1 for d in degrees]
    out: dict[tuple[Word, Word], int] = {}
    for r in range(1, m):
        for left in combinations(range(m), r):
            right = tuple(i for i in range(m) if i not in left)
            arrangement = list(left) + list(right)
            sign = chi_in * classical_koszul_sign(arrangement, shifted)
            ldeg = [degrees[i] for i in left]
            rdeg = [degrees[i] for i in right]
            sign *= desuspension_sign(ldeg) * desuspension_sign(rdeg)
            lword = Word(tuple(word.factors[i] for i in left), sum(ldeg))
            rword = Word(tuple(word.factors[i] for i in right), sum(rdeg))
            key = (lword, rword)
            out[key] = out.get(key, 0) + sign
    return {k: s for k, s in out.items() if s}
