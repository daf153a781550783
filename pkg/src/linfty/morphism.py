"""Morphisms of L-infinity structures as weight-indexed component maps.

A morphism from (L, Q) to (L', Q') is a collection F_n of weight-n maps of
degree 1 - n.  It lifts to a map of the truncated coalgebras by summing over
unordered set partitions of a word, each block fed to the component of its
size.  Compatibility with the two coderivations is measured per weight by

    residual_n = pr o (Q' F - F Q) restricted to weight n,

which vanishes for every weight up to the cap exactly when the lift commutes
with the coderivations on the whole truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from .grading import (
    CoalgebraElement,
    Element,
    GradedSpace,
    InputError,
    MultiMap,
    StructureError,
    Word,
    canonicalize_word,
    classical_koszul_sign,
    desuspension_sign,
    subword,
    wedge_basis,
)
from .algebra import LInftyStructure, check_relations, lift_coderivation
from . import linalg


class MorphismComponents:
    """Component maps {F_n} of a morphism between two structures."""

    def __init__(
        self,
        source: LInftyStructure,
        target: LInftyStructure,
        components: Mapping[int, MultiMap],
    ):
        if source.cap != target.cap:
            raise InputError(
                "source cap %d and target cap %d differ" % (source.cap, target.cap)
            )
        self.source = source
        self.target = target
        self.cap = source.cap
        self.components: dict[int, MultiMap] = {}
        for n, f in sorted(components.items()):
            if f is None or f.is_zero():
                continue
            if n != f.weight:
                raise StructureError("component at weight %d has weight %d" % (n, f.weight))
            if n > self.cap:
                raise StructureError("component weight %d exceeds cap %d" % (n, self.cap))
            if f.degree != 1 - n:
                raise StructureError(
                    "component of weight %d has degree %d, expected %d"
                    % (n, f.degree, 1 - n)
                )
            if f.source != source.space or f.target != target.space:
                raise StructureError("component %d maps between the wrong spaces" % n)
            self.components[n] = f
        self.verified = False

    def component(self, n: int) -> MultiMap:
        got = self.components.get(n)
        if got is None:
            return MultiMap(self.source.space, self.target.space, n, 1 - n)
        return got

    def __eq__(self, other):
        return (
            isinstance(other, MorphismComponents)
            and self.source.space == other.source.space
            and self.target.space == other.target.space
            and self.components == other.components
        )

    def __repr__(self):
        return "MorphismComponents(weights=%s, cap=%d)" % (
            sorted(self.components),
            self.cap,
        )


def identity_morphism(structure: LInftyStructure) -> MorphismComponents:
    space = structure.space
    values = {}
    for name in space.names:
        word = Word((name,), space.degree(name))
        values[word] = Element.basis(space, name)
    f1 = MultiMap(space, space, 1, 0, values)
    morphism = MorphismComponents(structure, structure, {1: f1})
    morphism.verified = True
    return morphism


def _set_partitions(items: tuple[int, ...]):
    """Unordered partitions into nonempty blocks, blocks ordered by minimum."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1 :]


class MorphismLift:
    """Coalgebra-map extension of the components to the truncation."""

    def __init__(self, morphism: MorphismComponents):
        self.morphism = morphism
        self._cache: dict[Word, CoalgebraElement] = {}

    def on_word(self, word: Word) -> CoalgebraElement:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        F = self.morphism
        src = F.source.space
        tgt = F.target.space
        m = word.weight
        degrees = src.degrees_of(word.factors)
        chi_in = desuspension_sign(degrees)
        out = CoalgebraElement(tgt)
        for blocks in _set_partitions(tuple(range(m))):
            arrangement = [i for block in blocks for i in block]
            shifted = classical_koszul_sign(
                arrangement, [degrees[i] - 1 for i in range(m)]
            )
            sign = chi_in * shifted
            vals: list[Element] = []
            ok = True
            for block in blocks:
                comp = F.components.get(len(block))
                if comp is None:
                    ok = False
                    break
                sign *= desuspension_sign([degrees[i] for i in block])
                val = comp.value(subword(word, block, src))
                if val.is_zero():
                    ok = False
                    break
                vals.append(val)
            if not ok:
                continue
            sign *= desuspension_sign([v.degree for v in vals])
            for combo in product(*(v.items() for v in vals)):
                names = tuple(name for name, _ in combo)
                coeff = Fraction(sign)
                for _, c in combo:
                    coeff *= c
                new_word, csign = canonicalize_word(names, tgt)
                if new_word is None:
                    continue
                out.add_term(new_word, coeff * csign)
        self._cache[word] = out
        return out

    def apply(self, element: CoalgebraElement) -> CoalgebraElement:
        out = CoalgebraElement(self.morphism.target.space)
        for word, coeff in element.terms.items():
            out = out + self.on_word(word).scale(coeff)
        return out


def lift_morphism(morphism: MorphismComponents) -> MorphismLift:
    return MorphismLift(morphism)


def project(element: CoalgebraElement) -> Element | None:
    """Cogenerator (weight-1) part of a coalgebra element, None when empty."""
    parts = [(w, c) for w, c in element.terms.items() if w.weight == 1]
    if not parts:
        return None
    degree = parts[0][0].degree
    out = Element.zero(element.space, degree)
    for w, c in parts:
        out = out + Element.basis(element.space, w.factors[0], c)
    return out


@dataclass
class MorphismReport:
    cap: int
    residuals: dict[Word, Element] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.residuals

    def residuals_at_weight(self, n: int) -> dict[Word, Element]:
        return {w: e for w, e in self.residuals.items() if w.weight == n}

    def summary(self) -> str:
        if self.passed:
            return "morphism compatible up to weight cap %d" % self.cap
        lines = ["morphism residuals up to weight cap %d:" % self.cap]
        for word in sorted(self.residuals, key=lambda w: (w.weight, w.factors)):
            lines.append("  %s -> %r" % (word.label(), self.residuals[word]))
        return "\n".join(lines)


def _require_verified(structure: LInftyStructure, label: str):
    if not structure.verified:
        report = check_relations(structure)
        if not report.passed:
            raise StructureError("%s fails its relation check" % label)


def check_morphism(morphism: MorphismComponents) -> MorphismReport:
    """Per-weight compatibility residuals of the lifted morphism."""
    _require_verified(morphism.source, "source structure")
    _require_verified(morphism.target, "target structure")
    lift = lift_morphism(morphism)
    q_src = lift_coderivation(morphism.source)
    q_tgt = lift_coderivation(morphism.target)
    report = MorphismReport(cap=morphism.cap)
    for word in morphism.source.words():
        left = q_tgt.apply(lift.on_word(word))
        right = lift.apply(q_src.on_word(word))
        residual = project(left - right)
        if residual is not None and not residual.is_zero():
            report.residuals[word] = residual
    morphism.verified = report.passed
    return report


def compose(g: MorphismComponents, f: MorphismComponents) -> MorphismComponents:
    """Components of g after f, by lifting f and projecting through g."""
    if f.target.space != g.source.space or f.target.cap != g.source.cap:
        raise InputError("middle structures of the composition do not match")
    lift_f = lift_morphism(f)
    components: dict[int, MultiMap] = {}
    for n in range(1, f.cap + 1):
        values: dict[Word, Element] = {}
        for word in wedge_basis(f.source.space, n):
            image = lift_f.on_word(word)
            total = Element.zero(g.target.space, word.degree + 1 - n)
            for w, c in image.terms.items():
                comp = g.components.get(w.weight)
                if comp is None:
                    continue
                total = total + comp.value(w).scale(c)
            if not total.is_zero():
                values[word] = total
        if values:
            components[n] = MultiMap(
                f.source.space, g.target.space, n, 1 - n, values
            )
    out = MorphismComponents(f.source, g.target, components)
    out.verified = f.verified and g.verified
    return out


@dataclass
class CohomologyReport:
    """Exact ranks of the weight-1 differential, with chosen representatives."""

    space: GradedSpace
    dimensions: dict[int, int]
    representatives: dict[int, list[Element]]
    kernels: dict[int, list[list[Fraction]]]
    images: dict[int, list[list[Fraction]]]

    def dimension(self, degree: int) -> int:
        return self.dimensions.get(degree, 0)

    def nonzero_degrees(self) -> list[int]:
        return sorted(d for d, v in self.dimensions.items() if v)

    def summary(self) -> str:
        if not self.nonzero_degrees():
            return "cohomology vanishes"
        return ", ".join(
            "dim H^%d = %d" % (d, self.dimensions[d]) for d in self.nonzero_degrees()
        )


def _q1_matrix(structure: LInftyStructure, degree: int) -> list[list[Fraction]]:
    """Rows indexed by degree-d basis names, giving Q_1 coordinates in degree d+1."""
    space = structure.space
    q1 = structure.maps.get(1)
    source_names = space.basis_of_degree(degree)
    target_names = space.basis_of_degree(degree + 1)
    rows = []
    for name in source_names:
        if q1 is None:
            rows.append([Fraction(0)] * len(target_names))
            continue
        value = q1.evaluate((name,))
        rows.append([Fraction(value.coeffs.get(t, 0)) for t in target_names])
    return rows


def cohomology(structure: LInftyStructure) -> CohomologyReport:
    """Per-degree cohomology of the weight-1 differential, exact over Q."""
    _require_verified(structure, "structure")
    space = structure.space
    degrees = space.degrees_present()
    dims: dict[int, int] = {}
    reps: dict[int, list[Element]] = {}
    kernels: dict[int, list[list[Fraction]]] = {}
    images: dict[int, list[list[Fraction]]] = {}
    for d in degrees:
        names = space.basis_of_degree(d)
        outgoing = _q1_matrix(structure, d)
        ncols_out = len(outgoing[0]) if outgoing else 0
        transposed = [
            [outgoing[r][c] for r in range(len(names))] for c in range(ncols_out)
        ]
        kernel = linalg.nullspace(transposed, len(names))
        incoming = _q1_matrix(structure, d - 1)
        image = linalg.reduce_spanning_set(incoming) if incoming else []
        image = [row for row in image if any(x != 0 for x in row)]
        kernels[d] = kernel
        images[d] = image
        dims[d] = len(kernel) - len(image)
        chosen: list[Element] = []
        spanning = [list(r) for r in image]
        for vec in kernel:
            if not linalg.in_span(spanning, vec):
                spanning.append(vec)
                chosen.append(
                    Element(space, d, {n: c for n, c in zip(names, vec) if c})
                )
        reps[d] = chosen
    return CohomologyReport(space, dims, reps, kernels, images)


@dataclass
class QuasiIsoReport:
    per_degree: dict[int, bool]

    @property
    def verdict(self) -> bool:
        return all(self.per_degree.values())

    def summary(self) -> str:
        if self.verdict:
            return "quasi-isomorphism: yes"
        bad = sorted(d for d, ok in self.per_degree.items() if not ok)
        return "quasi-isomorphism: no (degrees %s)" % bad


def is_quasi_iso(morphism: MorphismComponents) -> QuasiIsoReport:
    """Whether the weight-1 component induces isomorphisms on cohomology."""
    src_h = cohomology(morphism.source)
    tgt_h = cohomology(morphism.target)
    f1 = morphism.components.get(1)
    per_degree: dict[int, bool] = {}
    degrees = sorted(set(src_h.nonzero_degrees()) | set(tgt_h.nonzero_degrees()))
    tgt_space = morphism.target.space
    for d in degrees:
        sdim = src_h.dimension(d)
        tdim = tgt_h.dimension(d)
        if sdim != tdim:
            per_degree[d] = False
            continue
        tgt_names = tgt_space.basis_of_degree(d)
        rep_rows = [
            [Fraction(r.coeffs.get(n, 0)) for n in tgt_names]
            for r in tgt_h.representatives[d]
        ]
        image_rows = tgt_h.images[d]
        induced: list[list[Fraction]] = []
        degenerate = False
        for rep in src_h.representatives[d]:
            mapped = (
                f1.apply([rep]) if f1 is not None else Element.zero(tgt_space, d)
            )
            vec = [Fraction(mapped.coeffs.get(n, 0)) for n in tgt_names]
            coeffs = linalg.solve(rep_rows + image_rows, vec)
            if coeffs is None:
                degenerate = True
                break
            induced.append(coeffs[: len(rep_rows)])
        if degenerate:
            per_degree[d] = False
            continue
        per_degree[d] = linalg.rank(induced) == sdim if sdim else True
    return QuasiIsoReport(per_degree)
