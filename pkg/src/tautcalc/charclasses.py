"""Characteristic-class calculus on graded polynomials: Newton's identities
between Chern classes and power sums, Pontrjagin classes, additive and
multiplicative classes of a power series, and the single-class extraction
of an even series."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import FormalSeries, Scalar
from .graded import GeneratorSet, GradedPoly, apply_series_as_polynomial


class ClassVector:
    """Chern classes c_1..c_d of a rank-d bundle as graded ring elements;
    c_0 = 1 is implicit and deg c_j = j is enforced."""

    def __init__(self, gens: GeneratorSet, classes: Sequence[GradedPoly]):
        self.gens = gens
        self.classes = list(classes)
        for j, c in enumerate(self.classes, start=1):
            if c.gens != gens:
                raise ValueError("class over wrong generator set")
            if not c.is_zero() and (not c.is_homogeneous() or c.max_degree() != j):
                raise ValueError(f"c_{j} must be homogeneous of degree {j}")

    @classmethod
    def standard(cls, gens: GeneratorSet, names: Sequence[str]) -> "ClassVector":
        return cls(gens, [GradedPoly.generator(gens, n) for n in names])

    @property
    def rank(self) -> int:
        return len(self.classes)

    def chern(self, j: int) -> GradedPoly:
        if j == 0:
            return GradedPoly.constant(self.gens, 1)
        if 1 <= j <= self.rank:
            return self.classes[j - 1]
        return GradedPoly.zero(self.gens)

    def total(self) -> GradedPoly:
        acc = GradedPoly.constant(self.gens, 1)
        for c in self.classes:
            acc = acc + c
        return acc

    def dual(self) -> "ClassVector":
        return ClassVector(self.gens,
                           [c * Fraction((-1) ** j)
                            for j, c in enumerate(self.classes, start=1)])


def ch_from_c(classes: ClassVector, up_to: int) -> list[GradedPoly]:
    """Power sums s_k = k! ch^[k] for k = 1..up_to, by Newton's identities:
    s_k = sum_{i<k} (-1)^(i-1) c_i s_{k-i} + (-1)^(k-1) k c_k."""
    sums: list[GradedPoly] = []
    for k in range(1, up_to + 1):
        acc = classes.chern(k) * Fraction((-1) ** (k - 1) * k)
        for i in range(1, k):
            ci = classes.chern(i)
            if not ci.is_zero():
                acc = acc + ci * sums[k - i - 1] * Fraction((-1) ** (i - 1))
        sums.append(acc)
    return sums


def c_from_ch(power_sums: Sequence[GradedPoly], rank: int,
              gens: GeneratorSet) -> ClassVector:
    """Invert Newton's identities: recover c_1..c_rank from s_1..s_rank."""
    classes: list[GradedPoly] = []
    for k in range(1, rank + 1):
        acc = power_sums[k - 1]
        for i in range(1, k):
            acc = acc + classes[i - 1] * power_sums[k - i - 1] * Fraction((-1) ** i)
        classes.append(acc * Fraction((-1) ** (k - 1), k))
    return ClassVector(gens, classes)


def pontrjagin_from_c(classes: ClassVector, up_to: int | None = None) -> list[GradedPoly]:
    """Pontrjagin classes p_k defined by sum (-z^2)^k p_k = c(z) c(-z):
    p_k = (-1)^k [degree 2k of total(c) * total(c-dual)]."""
    d = classes.rank
    if up_to is None:
        up_to = d
    product = classes.total() * classes.dual().total()
    out = []
    for k in range(1, up_to + 1):
        out.append(product.graded_component(2 * k) * Fraction((-1) ** k))
    return out


def pontrjagin_direct(classes: ClassVector, k: int) -> GradedPoly:
    """Cross-check form p_k = c_k^2 + 2 sum_{l<k} (-1)^(k+l) c_l c_{2k-l}."""
    acc = classes.chern(k) * classes.chern(k)
    for l in range(0, k):
        term = classes.chern(l) * classes.chern(2 * k - l)
        acc = acc + term * Fraction(2 * (-1) ** (k + l))
    return acc


def additive_class(series: FormalSeries, classes: ClassVector,
                   max_degree: int) -> GradedPoly:
    """sum_k f_k k! ch^[k] for a series f with zero constant term."""
    if series.coefficient(0):
        raise ValueError("additive class needs zero constant term")
    top = min(series.order, max_degree)
    sums = ch_from_c(classes, top)

    def image(j: int) -> GradedPoly:
        if j > top:
            return GradedPoly.zero(classes.gens)
        return sums[j - 1]

    return apply_series_as_polynomial(series, image, classes.gens, max_degree)


def multiplicative_class(series: FormalSeries, classes: ClassVector,
                         max_degree: int) -> GradedPoly:
    """exp(additive class of log Q) for a series Q with Q(0) = 1; equals the
    product of Q over the Chern roots."""
    if series.coefficient(0) != Scalar.coerce(1):
        raise ValueError("multiplicative class needs constant term 1")
    exponent = additive_class(series.log(), classes, max_degree)
    result = GradedPoly.constant(classes.gens, 1)
    term = GradedPoly.constant(classes.gens, 1)
    n = 1
    while True:
        term = term.mul_truncated(exponent, max_degree) * Fraction(1, n)
        if term.is_zero():
            break
        result = result + term
        n += 1
    return result


def cauchy_single_class(series: FormalSeries) -> FormalSeries:
    """For an even series Q with Q(0) = 1, the series whose z^k coefficient is
    the coefficient of the single class p_k in the associated multiplicative
    class: Q(sqrt(-z)) * d/dz [ z / Q(sqrt(-z)) ]."""
    if not series.is_even():
        raise ValueError("single-class extraction needs an even series")
    if series.coefficient(0) != Scalar.coerce(1):
        raise ValueError("single-class extraction needs constant term 1")
    qm = series.compose_even()
    inv = qm.inverse()
    z = FormalSeries.identity(qm.var, qm.order)
    return qm * (z * inv).derivative()


def single_class_slots(series: FormalSeries, up_to: int,
                       slot_name: str = "p") -> GradedPoly:
    """Reference route for the single-class coefficients: compute the full
    multiplicative class on formal classes p_1..p_N (one slot per Pontrjagin
    class, z^2 -> slot weight 1) and keep only the linear-in-slot part by
    reducing in the ring where all slot products vanish.

    Returns a polynomial in the slot generators whose p_k coefficient should
    match cauchy_single_class(series) at z^k.
    """
    from .quotient import RingPresentation, QuotientRing

    if not series.is_even():
        raise ValueError("even series required")
    gens = GeneratorSet([(f"{slot_name}{k}", k) for k in range(1, up_to + 1)])
    # Q(x) = S(x^2) with S = compose_even twisted back to +: the slot classes
    # play the elementary symmetric functions of the squared Chern roots.
    s_pos = FormalSeries(series.var, series.order // 2,
                         {k: c * Fraction((-1) ** k)
                          for k, c in series.compose_even().coefficients().items()})
    slots = ClassVector.standard(gens, list(gens.names))
    full = multiplicative_class(s_pos, slots, up_to)
    relations = []
    for i in range(1, up_to + 1):
        for j in range(i, up_to + 1):
            if i + j <= up_to:
                relations.append(GradedPoly.generator(gens, f"{slot_name}{i}")
                                 * GradedPoly.generator(gens, f"{slot_name}{j}"))
    if relations:
        ring = QuotientRing(RingPresentation(gens, relations, up_to),
                            track_witnesses=False)
        return ring.normal_form(full)
    return full
