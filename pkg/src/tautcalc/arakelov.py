"""Two-component arithmetic tautological rings with square-zero form part.

Elements are pairs (z, a(alpha + phi*gamma)): a polynomial part in the lifted
classes C1..Cd and a form part in the classical classes u1..ud plus the
special degree-(d-1) form gamma.  The grading pairs ring degree k with form
degree k-1; products of two form parts vanish.

Two quotients are modelled:

* the abelian-scheme ring: lifted Pontrjagin classes reduce to explicit
  zeta-derivative/harmonic/log-2 multiples of the odd Chern character forms,
  and the top lifted Chern class reduces to a(gamma);
* the Lagrangian-Grassmannian ring: the dual-square relation acquires odd
  harmonic coefficients (exact rationals or formal h symbols).

Reduction tracks ideal-membership cofactors on the polynomial side and pushes
each eliminated relation occurrence into the form part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping

from .scalars import (Scalar, ZERO, LOG2, harmonic, harmonic_symbol,
                      zeta_negative_odd, zeta_prime_symbol)
from .graded import GeneratorSet, GradedPoly, Monomial
from .quotient import QuotientRing, ReductionError, RingPresentation
from .charclasses import ClassVector, ch_from_c, pontrjagin_from_c


# ---------------------------------------------------------------------------
# Classical tautological ring
# ---------------------------------------------------------------------------


def dual_square_relation(gens: GeneratorSet) -> GradedPoly:
    """(1 + sum u_j)(1 + sum (-1)^j u_j) - 1 over the given generators."""
    total = GradedPoly.constant(gens, 1)
    alternating = GradedPoly.constant(gens, 1)
    for name, degree in zip(gens.names, gens.degrees):
        g = GradedPoly.generator(gens, name)
        total = total + g
        alternating = alternating + g * Fraction((-1) ** degree)
    return total * alternating - GradedPoly.constant(gens, 1)


def tautological_presentation(d: int, top_degree: int | None = None) -> RingPresentation:
    """Presentation of the rank-d tautological ring: generators u1..ud with
    the dual-square relation and u_d = 0."""
    if d < 1:
        raise ValueError("d must be positive")
    gens = GeneratorSet([(f"u{j}", j) for j in range(1, d + 1)])
    if top_degree is None:
        top_degree = d * (d - 1) // 2 + 1
    relations = [GradedPoly.generator(gens, f"u{d}")]
    rel = dual_square_relation(gens)
    if not rel.is_zero():
        relations.insert(0, rel)
    return RingPresentation(gens, relations, top_degree)


def tautological_ring(d: int, top_degree: int | None = None,
                      track_witnesses: bool = False) -> QuotientRing:
    return QuotientRing(tautological_presentation(d, top_degree), track_witnesses)


def lagrangian_degree(d: int) -> int:
    """Projective degree of the rank-(d-1) Lagrangian Grassmannian:
    (d(d-1)/2)! / prod_{k<d} (2k-1)!!."""
    if d < 2:
        raise ValueError("d must be at least 2")
    num = factorial(d * (d - 1) // 2)
    den = 1
    for k in range(1, d):
        m = 2 * k - 1
        while m > 1:
            den *= m
            m -= 2
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("degree formula did not divide evenly")
    return q


# ---------------------------------------------------------------------------
# Arithmetic classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArithClass:
    """Element z + a(alpha + phi*gamma) of an arithmetic tautological ring."""

    ring: "ArithRing"
    z: GradedPoly
    a: GradedPoly
    g: GradedPoly

    def __add__(self, other: "ArithClass") -> "ArithClass":
        self._check(other)
        return ArithClass(self.ring, self.z + other.z, self.a + other.a,
                          self.g + other.g)

    def __sub__(self, other: "ArithClass") -> "ArithClass":
        self._check(other)
        return ArithClass(self.ring, self.z - other.z, self.a - other.a,
                          self.g - other.g)

    def __neg__(self) -> "ArithClass":
        return ArithClass(self.ring, -self.z, -self.a, -self.g)

    def __mul__(self, other) -> "ArithClass":
        if isinstance(other, (int, Fraction, Scalar)):
            return ArithClass(self.ring, self.z * other, self.a * other,
                              self.g * other)
        self._check(other)
        ring = self.ring
        z = self.z.mul_truncated(other.z, ring.cap)
        w1, w2 = ring.omega(self.z), ring.omega(other.z)
        a = (w1.mul_truncated(other.a, ring.cap - 1)
             + w2.mul_truncated(self.a, ring.cap - 1))
        g_cap = ring.cap - ring.gamma_degree if ring.gamma_degree else -1
        g = (w1.mul_truncated(other.g, g_cap) + w2.mul_truncated(self.g, g_cap)
             if g_cap >= 0 else GradedPoly.zero(ring.agens))
        return ArithClass(ring, z, a, g)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ArithClass":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _check(self, other: "ArithClass"):
        if other.ring is not self.ring:
            raise ValueError("classes from different rings")

    def is_zero(self) -> bool:
        return self.z.is_zero() and self.a.is_zero() and self.g.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ArithClass):
            return NotImplemented
        return (self.ring is other.ring and self.z == other.z
                and self.a == other.a and self.g == other.g)

    def component(self, k: int) -> "ArithClass":
        """Ring-degree-k part: polynomial degree k, form degree k-1, and the
        gamma coefficient in form degree k - gamma_degree."""
        g = (self.g.graded_component(k - self.ring.gamma_degree)
             if self.ring.gamma_degree and k >= self.ring.gamma_degree
             else GradedPoly.zero(self.ring.agens))
        return ArithClass(self.ring, self.z.graded_component(k),
                          self.a.graded_component(k - 1) if k >= 1
                          else GradedPoly.zero(self.ring.agens), g)

    def drop_gamma(self) -> "ArithClass":
        return ArithClass(self.ring, self.z, self.a,
                          GradedPoly.zero(self.ring.agens))

    def symbol_degree(self) -> int:
        return max(self.z.symbol_degree(), self.a.symbol_degree(),
                   self.g.symbol_degree())

    def render(self, latex: bool = False) -> str:
        ring = self.ring
        znames = ring.display_znames(latex)
        anames = ring.display_anames(latex)
        gname = "\\gamma" if latex else "g"
        parts = []
        if not self.z.is_zero():
            parts.append(self.z.render(latex, znames))
        inner = []
        if not self.a.is_zero():
            inner.append(self.a.render(latex, anames))
        if not self.g.is_zero():
            if self.g == GradedPoly.constant(ring.agens, 1):
                inner.append(gname)
            else:
                phi = self.g.render(latex, anames)
                inner.append((f"({phi})" if (" " in phi) else phi)
                             + ("" if latex else "*") + gname)
        if inner:
            parts.append("a(" + " + ".join(inner) + ")")
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {"zpart": self.z.to_json(), "apart": self.a.to_json(),
                "gamma_part": self.g.to_json()}

    @classmethod
    def from_json(cls, ring: "ArithRing", data: Mapping) -> "ArithClass":
        return cls(ring,
                   GradedPoly.from_json(ring.zgens, data["zpart"]),
                   GradedPoly.from_json(ring.agens, data["apart"]),
                   GradedPoly.from_json(ring.agens, data["gamma_part"]))


@dataclass(frozen=True)
class ArithRelation:
    """Rewriting rule zpoly = a(apart + gpart * gamma)."""
    zpoly: GradedPoly
    apart: GradedPoly
    gpart: GradedPoly


class ArithRing:
    """Shared machinery of the two arithmetic quotients."""

    d: int
    cap: int
    gamma_degree: int | None
    zgens: GeneratorSet
    agens: GeneratorSet
    relations: list[ArithRelation]
    zq: QuotientRing
    aq: QuotientRing

    def _setup(self, d: int, n_gens: int, cap: int, gamma_degree: int | None,
               a_top_relations: int):
        self.d = d
        self.cap = cap
        self.gamma_degree = gamma_degree
        self.zgens = GeneratorSet([(f"C{j}", j) for j in range(1, n_gens + 1)])
        self.agens = GeneratorSet([(f"u{j}", j) for j in range(1, n_gens + 1)])
        a_rels: list[GradedPoly] = []
        rel = dual_square_relation(self.agens)
        if not rel.is_zero():
            a_rels.append(rel)
        if a_top_relations:
            a_rels.append(GradedPoly.generator(self.agens, f"u{n_gens}"))
        self.aq = QuotientRing(
            RingPresentation(self.agens, a_rels, max(cap - 1, max(self.agens.degrees))),
            track_witnesses=False)
        self._omega_map = {f"C{j}": f"u{j}" for j in range(1, n_gens + 1)}

    def _finish(self):
        pres = RingPresentation(self.zgens, [r.zpoly for r in self.relations],
                                self.cap)
        self.zq = QuotientRing(pres, track_witnesses=True)

    # -- constructors of elements -------------------------------------------

    def zero(self) -> ArithClass:
        z = GradedPoly.zero(self.zgens)
        a = GradedPoly.zero(self.agens)
        return ArithClass(self, z, a, a)

    def one(self) -> ArithClass:
        return ArithClass(self, GradedPoly.constant(self.zgens, 1),
                          GradedPoly.zero(self.agens),
                          GradedPoly.zero(self.agens))

    def lifted(self, j: int) -> ArithClass:
        """The lifted generator C_j as a ring element."""
        return self.from_z(GradedPoly.generator(self.zgens, f"C{j}"))

    def from_z(self, poly: GradedPoly) -> ArithClass:
        zero = GradedPoly.zero(self.agens)
        return ArithClass(self, poly, zero, zero)

    def from_a(self, poly: GradedPoly) -> ArithClass:
        zero_z = GradedPoly.zero(self.zgens)
        return ArithClass(self, zero_z, poly, GradedPoly.zero(self.agens))

    def from_gamma(self, poly: GradedPoly | int = 1) -> ArithClass:
        if self.gamma_degree is None:
            raise ValueError("this ring has no gamma class")
        if isinstance(poly, int):
            poly = GradedPoly.constant(self.agens, poly)
        zero_z = GradedPoly.zero(self.zgens)
        return ArithClass(self, zero_z, GradedPoly.zero(self.agens), poly)

    # -- structure -----------------------------------------------------------

    def omega(self, poly: GradedPoly) -> GradedPoly:
        """Forget the arithmetic lift: rename C_j to u_j."""
        return poly.rename(self.agens, self._omega_map)

    def dual_a(self, poly: GradedPoly) -> GradedPoly:
        """Dualize a form polynomial: each form-degree-f monomial gains (-1)^f."""
        out = GradedPoly.zero(self.agens)
        for mono, coeff in poly.items():
            sign = Fraction((-1) ** self.agens.degree_of(mono))
            out = out + GradedPoly.monomial(self.agens, mono, coeff * sign)
        return out

    def a_power_sums(self, up_to: int) -> list[GradedPoly]:
        classes = ClassVector.standard(self.agens, list(self.agens.names))
        return ch_from_c(classes, up_to)

    def z_power_sums(self, up_to: int) -> list[GradedPoly]:
        classes = ClassVector.standard(self.zgens, list(self.zgens.names))
        return ch_from_c(classes, up_to)

    # -- reduction -----------------------------------------------------------

    def reduce_detailed(self, x: ArithClass):
        """Canonical form plus the raw (pre-reduction) form contributions."""
        if x.ring is not self:
            raise ValueError("class from another ring")
        z = x.z.truncate(self.cap)
        nf, cof = self.zq.reduce_with_cofactors(z)
        raw_a, raw_g = self._form_contributions(cof)
        raw_a = raw_a + x.a
        raw_g = raw_g + x.g
        a = self.aq.normal_form(raw_a.truncate(self.cap - 1))
        if self.gamma_degree is not None:
            g = self.aq.normal_form(raw_g.truncate(self.cap - self.gamma_degree))
        else:
            if not raw_g.is_zero():
                raise ReductionError("gamma part in a ring without gamma")
            g = raw_g
        return ArithClass(self, nf, a, g), raw_a, raw_g

    def reduce(self, x: ArithClass) -> ArithClass:
        return self.reduce_detailed(x)[0]

    def _form_contributions(self, cofactors: Mapping[tuple[int, int], GradedPoly]):
        a = GradedPoly.zero(self.agens)
        g = GradedPoly.zero(self.agens)
        for (ri, _), cof in cofactors.items():
            rel = self.relations[ri]
            w = self.omega(cof)
            if not rel.apart.is_zero():
                a = a + w.mul_truncated(rel.apart, self.cap - 1)
            if not rel.gpart.is_zero():
                g = g + w.mul_truncated(
                    rel.gpart, self.cap - (self.gamma_degree or 0))
        return a, g

    def reduce_variants(self, x: ArithClass, count: int = 3) -> list[ArithClass]:
        """Reductions of a class whose polynomial part lies in the relation
        ideal, computed from distinct witness solutions."""
        z = x.z.truncate(self.cap)
        witnesses = self.zq.alternative_witnesses(z, count)
        out = []
        for w in witnesses:
            raw_a, raw_g = self._form_contributions(w.cofactors)
            a = self.aq.normal_form((raw_a + x.a).truncate(self.cap - 1))
            g_cap = self.cap - self.gamma_degree if self.gamma_degree else 0
            g = (self.aq.normal_form((raw_g + x.g).truncate(g_cap))
                 if self.gamma_degree else raw_g + x.g)
            out.append(ArithClass(self, GradedPoly.zero(self.zgens), a, g))
        return out

    # -- display helpers -----------------------------------------------------

    def display_znames(self, latex: bool) -> dict[str, str]:
        if latex:
            return {f"C{j}": f"\\hat{{c}}_{{{j}}}" for j in range(1, len(self.zgens) + 1)}
        return {f"C{j}": f"C{j}" for j in range(1, len(self.zgens) + 1)}

    def display_anames(self, latex: bool) -> dict[str, str]:
        if latex:
            return {f"u{j}": f"c_{{{j}}}" for j in range(1, len(self.agens) + 1)}
        return {f"u{j}": f"c{j}" for j in range(1, len(self.agens) + 1)}


def _bracket(k: int) -> Scalar:
    """2 Z(2k-1)/zeta(1-2k) + H(2k-1) - 2 log2 / (1 - 4^-k), exact."""
    z = zeta_negative_odd(k)
    return (zeta_prime_symbol(k) * (Fraction(2) / z)
            + Scalar.from_rational(harmonic(2 * k - 1))
            - LOG2 * Fraction(2 * 4**k, 4**k - 1))


class AbelianTautRing(ArithRing):
    """Arithmetic tautological ring of the rank-d Hodge bundle.

    Polynomial relations: every Pontrjagin polynomial p_k(C) rewrites to the
    form rho_k = (-1)^k (2 Z(2k-1)/zeta(1-2k) + H(2k-1) - 2 log2/(1-4^-k))
    times the odd power sum s_{2k-1}(u), and C_d rewrites to a(gamma).
    Form relations are the classical ones: p_k(u) = 0, u_d = 0.
    """

    def __init__(self, d: int, cap: int | None = None):
        if d < 1:
            raise ValueError("d must be positive")
        if d > 7 and cap is None:
            raise ValueError("d > 7 needs an explicit working-degree override")
        if cap is None:
            cap = d * (d - 1) // 2 + 1
        self._setup(d, d, cap, gamma_degree=d, a_top_relations=True)
        zc = ClassVector.standard(self.zgens, list(self.zgens.names))
        pontrjagin = pontrjagin_from_c(zc, min(d, cap // 2))
        odd_sums = self.a_power_sums(max(0, min(2 * (cap // 2) - 1, cap - 1)))
        self.relations = []
        self.rho: dict[int, GradedPoly] = {}
        for k in range(1, cap // 2 + 1):
            if k > d:
                break
            zpoly = pontrjagin[k - 1]
            if zpoly.is_zero():
                continue
            s = self.aq.normal_form(odd_sums[2 * k - 2].truncate(self.cap - 1))
            rho = s * _bracket(k) * Fraction((-1) ** k)
            self.rho[k] = rho
            self.relations.append(ArithRelation(zpoly, rho,
                                                GradedPoly.zero(self.agens)))
        if d <= cap:
            self.relations.append(ArithRelation(
                GradedPoly.generator(self.zgens, f"C{d}"),
                GradedPoly.zero(self.agens),
                GradedPoly.constant(self.agens, 1)))
        self._finish()


class LagrangianArithRing(ArithRing):
    """Arithmetic ring of the rank-(d-1) Lagrangian Grassmannian.

    The dual-square relation on the lifted classes picks up odd harmonic
    coefficients on the form side: p_k(C) rewrites to
    (-1)^(k+1) h(2k-1) s_{2k-1}(u), with h either the exact harmonic number
    or a formal symbol.
    """

    def __init__(self, d: int, harmonic_mode: str = "exact",
                 cap: int | None = None):
        if d < 2:
            raise ValueError("d must be at least 2")
        if harmonic_mode not in ("exact", "formal"):
            raise ValueError("harmonic_mode must be 'exact' or 'formal'")
        self.harmonic_mode = harmonic_mode
        n = d - 1
        if cap is None:
            cap = d * (d - 1) // 2 + 1
        self._setup(d, n, cap, gamma_degree=None, a_top_relations=False)
        zc = ClassVector.standard(self.zgens, list(self.zgens.names))
        pontrjagin = pontrjagin_from_c(zc, min(n, cap // 2))
        odd_sums = self.a_power_sums(max(0, min(2 * (cap // 2) - 1, cap - 1)))
        self.relations = []
        for k in range(1, min(n, cap // 2) + 1):
            zpoly = pontrjagin[k - 1]
            if zpoly.is_zero():
                continue
            if harmonic_mode == "exact":
                coeff: Scalar | Fraction = harmonic(2 * k - 1)
            else:
                coeff = harmonic_symbol(k)
            s = self.aq.normal_form(odd_sums[2 * k - 2].truncate(self.cap - 1))
            apart = s * coeff * Fraction((-1) ** (k + 1))
            self.relations.append(ArithRelation(zpoly, apart,
                                                GradedPoly.zero(self.agens)))
        self._finish()


# ---------------------------------------------------------------------------
# Critical power and height operations
# ---------------------------------------------------------------------------


@dataclass
class CriticalPowerResult:
    d: int
    exponent: int
    reduced: ArithClass
    r: Scalar
    phi: GradedPoly          # reduced gamma coefficient, squarefree basis
    phi_raw: GradedPoly      # gamma coefficient straight from the witness
    socle_monomial: Monomial
    socle_coordinate: Fraction


def c1_critical_power(d: int, ring: AbelianTautRing | None = None) -> CriticalPowerResult:
    """Reduce C1^(1 + d(d-1)/2) and split the result as
    a(r * u1^(d(d-1)/2) + phi * gamma)."""
    ring = ring or AbelianTautRing(d)
    top = d * (d - 1) // 2
    power = GradedPoly.monomial(ring.zgens, ring.zgens.single("C1", top + 1))
    reduced, _, raw_g = ring.reduce_detailed(ring.from_z(power))
    if not reduced.z.is_zero():
        raise ReductionError("critical power kept a polynomial part; "
                             "shape of the reduction is violated")
    basis = ring.aq.monomial_basis(top)
    if len(basis) != 1:
        raise ReductionError("socle is not one-dimensional")
    socle = basis[0]
    if any(mono != socle for mono, _ in reduced.a.items()):
        raise ReductionError("form part not proportional to the socle")
    u1_top = ring.aq.normal_form(
        GradedPoly.monomial(ring.agens, ring.agens.single("u1", top)))
    lam = u1_top.coefficient(socle).rational_part()
    if top > 0 and not lam:
        raise ReductionError("u1^top vanished in the classical ring")
    r = reduced.a.coefficient(socle) / lam if top > 0 else reduced.a.coefficient(socle)
    phi = reduced.g
    expected_phi_degree = (d - 1) * (d - 2) // 2
    if not phi.is_zero() and phi.max_degree() != expected_phi_degree:
        raise ReductionError("gamma coefficient has the wrong form degree")
    return CriticalPowerResult(d, top + 1, reduced, r, phi, raw_g, socle, lam)


def harmonic_substitution(d: int) -> dict[str, Scalar]:
    """h(2k-1) -> -2 Z(2k-1)/zeta(1-2k) - H(2k-1) + 2 log2/(1-4^-k)."""
    out = {}
    for k in range(1, d * (d - 1) // 4 + 2):
        out[f"h{2 * k - 1}"] = -_bracket(k)
    return out


@dataclass
class HeightPolynomialResult:
    d: int
    height: Scalar               # linear form in the h symbols
    substituted: Scalar          # equals the abelian-route r_d
    socle_coordinate: Fraction


def height_polynomial(d: int, ring: LagrangianArithRing | None = None) -> HeightPolynomialResult:
    """Top form coefficient of C1^(1 + d(d-1)/2) in the formal-harmonic
    Lagrangian ring, normalized against u1^top; substituting the
    zeta-derivative brackets for the h symbols yields r_d."""
    if d < 2:
        raise ValueError("d must be at least 2")
    ring = ring or LagrangianArithRing(d, "formal")
    top = d * (d - 1) // 2
    power = GradedPoly.monomial(ring.zgens, ring.zgens.single("C1", top + 1))
    reduced = ring.reduce(ring.from_z(power))
    if not reduced.z.is_zero():
        raise ReductionError("critical power kept a polynomial part")
    basis = ring.aq.monomial_basis(top)
    socle = basis[0]
    u1_top = ring.aq.normal_form(
        GradedPoly.monomial(ring.agens, ring.agens.single("u1", top)))
    lam = u1_top.coefficient(socle).rational_part()
    height = reduced.a.coefficient(socle) / lam
    substituted = height.substitute(harmonic_substitution(d))
    return HeightPolynomialResult(d, height, substituted, lam)


# ---------------------------------------------------------------------------
# Even Chern character
# ---------------------------------------------------------------------------


@dataclass
class ChEvenReport:
    d: int
    degrees: list[int]
    matches: list[bool]
    intermediate_matches: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.matches) and all(self.intermediate_matches)


def ch_even_check(d: int, ring: AbelianTautRing | None = None) -> ChEvenReport:
    """Compare, in every even ring degree, the reduced even Chern character
    of the lifted classes with the rank minus the additive defect class of
    the form classes, and with the single-Pontrjagin shortcut."""
    from .scalars import ch_even_defect_series
    from .charclasses import additive_class

    ring = ring or AbelianTautRing(d)
    cap = ring.cap
    z_sums = ring.z_power_sums(cap) if cap >= 1 else []
    defect = ch_even_defect_series(max(cap - 1, 1))
    a_classes = ClassVector.standard(ring.agens, list(ring.agens.names))
    defect_poly = (additive_class(defect, a_classes, cap - 1)
                   if cap >= 2 else GradedPoly.zero(ring.agens))
    expected_total = -ring.aq.normal_form(defect_poly)

    zc = ClassVector.standard(ring.zgens, list(ring.zgens.names))
    pontrjagin = pontrjagin_from_c(zc, cap // 2) if cap >= 2 else []

    degrees, matches, inter = [], [], []
    for m in range(2, cap + 1, 2):
        k = m // 2
        route1 = ring.reduce(ring.from_z(z_sums[m - 1] * Fraction(1, factorial(m))))
        expected = expected_total.graded_component(m - 1)
        ok = (route1.z.is_zero() and route1.g.is_zero()
              and route1.a == expected)
        # Shortcut through the k-th Pontrjagin relation.
        route3 = ring.reduce(ring.from_z(
            pontrjagin[k - 1] * Fraction((-1) ** (k + 1), 2 * factorial(2 * k - 1))))
        degrees.append(m)
        matches.append(ok)
        inter.append(route1 == route3)
    return ChEvenReport(d, degrees, matches, inter)


# ---------------------------------------------------------------------------
# Proportionality map
# ---------------------------------------------------------------------------


@dataclass
class ProportionalityReport:
    d: int
    constructed: bool                     # a compatible map was found
    diagnosis: str                        # why construction failed, if it did
    form_unit: Scalar | None              # image scale of the constant form
    generator_images: dict[int, ArithClass]
    relation_residues: list[tuple[str, ArithClass]]

    @property
    def ok(self) -> bool:
        return (self.constructed
                and all(res.is_zero() for _, res in self.relation_residues))


def _solve_rational_system(rows: list[tuple[dict[int, Fraction], Scalar]],
                           n_vars: int) -> list[Scalar] | None:
    """Solve a rational linear system with Scalar right-hand sides; free
    variables are set to zero.  Returns None when inconsistent."""
    pivots: dict[int, tuple[dict[int, Fraction], Scalar]] = {}
    for entries, rhs in rows:
        entries = dict(entries)
        while entries:
            lead = min(entries)
            if lead in pivots:
                factor = entries[lead]
                prow, prhs = pivots[lead]
                for c, v in prow.items():
                    new = entries.get(c, Fraction(0)) - factor * v
                    if new:
                        entries[c] = new
                    else:
                        entries.pop(c, None)
                rhs = rhs - prhs * factor
                continue
            inv = Fraction(1) / entries[lead]
            entries = {c: v * inv for c, v in entries.items()}
            rhs = rhs * inv
            pivots[lead] = (entries, rhs)
            break
        else:
            if rhs:
                return None
    solution = [ZERO] * n_vars
    for lead in sorted(pivots, reverse=True):
        row, rhs = pivots[lead]
        acc = rhs
        for c, v in row.items():
            if c != lead:
                acc = acc - solution[c] * v
        solution[lead] = acc
    return solution


class _MapSolver:
    """Degreewise construction of the proportionality map.

    Generator images take the shape h(C_k) = (-1)^k C_k + a(B_k) with the
    constant form mapping to e0 times itself.  Images of even degree are
    forced by the even relation components below d; the remaining relation
    components give an exact linear system for the odd correction forms B
    and e0 (the form ideal has square zero, so everything stays linear).
    """

    def __init__(self, ring: AbelianTautRing):
        self.ring = ring
        self.d = ring.d
        aq = ring.aq
        self.var_index: dict[tuple[int, Monomial], int] = {}
        for k in range(1, self.d, 2):
            for mono in aq.monomial_basis(k - 1):
                self.var_index[(k, mono)] = len(self.var_index)
        self.e0_index = len(self.var_index)
        sums = ring.a_power_sums(max(2 * self.d - 3, 1))
        self._s_nf = [aq.normal_form(s.truncate(aq.top_degree)) for s in sums]

    def _harmonic_rhs(self, degree: int, e0: Scalar) -> ArithClass:
        # Image of the degree-2k component of 1 - a(sum H s): the dual flips
        # the odd power sum, leaving +e0 H s.
        s = self._s_nf[degree - 2]
        return self.ring.from_a(s * (harmonic(degree - 1) * e0))

    def _build(self, assign, e0: Scalar):
        ring, d = self.ring, self.d
        X: dict[int, ArithClass] = {0: ring.one()}
        for k in range(1, d):
            if k % 2 == 1:
                z = GradedPoly.generator(ring.zgens, f"C{k}") * Fraction(-1)
                terms = {m: assign(k, m) for m in ring.aq.monomial_basis(k - 1)}
                x = ArithClass(ring, z,
                               GradedPoly(ring.agens, terms),
                               GradedPoly.zero(ring.agens))
            else:
                half = k // 2
                x = self._harmonic_rhs(k, e0) - (X[half] * X[half]) * Fraction((-1) ** half)
                for i in range(1, half):
                    x = x - (X[i] * X[k - i]) * Fraction(2 * (-1) ** i)
                x = x * Fraction(1, 2)
            X[k] = ring.reduce(x).drop_gamma()
        conditions = []
        for degree in range(d + (d % 2), 2 * (d - 1) + 1, 2):
            half = degree // 2
            acc = self._harmonic_rhs(degree, e0)
            if half < d:
                acc = acc - (X[half] * X[half]) * Fraction((-1) ** half)
            for i in range(max(1, degree - d + 1), half):
                acc = acc - (X[i] * X[degree - i]) * Fraction(2 * (-1) ** i)
            conditions.append((degree, ring.reduce(acc).drop_gamma()))
        return X, conditions

    def solve(self):
        """Returns (images, e0) or (None, diagnosis)."""
        aq = self.ring.aq
        base_x, base_c = self._build(lambda k, m: ZERO, ZERO)
        for degree, cond in base_c:
            if not cond.z.is_zero():
                return None, (f"polynomial part of the degree-{degree} "
                              "condition does not vanish")
        for k in range(2, self.d, 2):
            expected = GradedPoly.generator(self.ring.zgens, f"C{k}")
            if base_x[k].z != expected:
                return None, f"forced image of C{k} has a mixed polynomial part"
        rowmap = [(i, mono) for i, (degree, _) in enumerate(base_c)
                  for mono in aq.monomial_basis(degree - 1)]

        def column(j: int):
            if j == self.e0_index:
                probe_c = self._build(lambda k, m: ZERO, Scalar.coerce(1))[1]
            else:
                key = next(kk for kk, jj in self.var_index.items() if jj == j)
                probe_c = self._build(
                    lambda k, m: Fraction(1) if (k, m) == key else ZERO, ZERO)[1]
            col = {}
            for ri, (ci, mono) in enumerate(rowmap):
                delta = (probe_c[ci][1].a.coefficient(mono)
                         - base_c[ci][1].a.coefficient(mono))
                if delta:
                    col[ri] = delta.rational_part()
            return col

        n_vars = self.e0_index + 1
        cols = {j: column(j) for j in range(n_vars)}
        pinned_rows = []
        free_rows = []
        for ri, (ci, mono) in enumerate(rowmap):
            entries = {j: cols[j][ri] for j in range(n_vars) if ri in cols[j]}
            rhs = -base_c[ci][1].a.coefficient(mono)
            free_rows.append((entries, rhs))
            entries_pinned = {j: v for j, v in entries.items() if j != self.e0_index}
            rhs_pinned = rhs - entries.get(self.e0_index, Fraction(0))
            pinned_rows.append((entries_pinned, rhs_pinned))

        solution = _solve_rational_system(pinned_rows, n_vars)
        if solution is not None:
            e0: Scalar = Scalar.coerce(1)
        else:
            solution = _solve_rational_system(free_rows, n_vars)
            if solution is None:
                return None, ("no correction forms make every relation "
                              "component vanish: the linear system is "
                              "inconsistent over the exact scalars")
            e0 = solution[self.e0_index]
            if not e0:
                return None, "only the degenerate map with e0 = 0 survives"
        images, conditions = self._build(
            lambda k, m: solution[self.var_index[(k, m)]], e0)
        for degree, cond in conditions:
            if not cond.is_zero():
                return None, f"residual condition at degree {degree}"
        return (images, e0), ""


def proportionality_map_check(d: int,
                              abelian: AbelianTautRing | None = None,
                              lagrangian: LagrangianArithRing | None = None) -> ProportionalityReport:
    """Construct the proportionality map from the exact Lagrangian ring to
    the abelian ring modulo (a(gamma)) and push every relation through it.

    The generator images are re-verified by an independent sweep: each
    relation component of the source is evaluated at the images and reduced;
    success means every residue is exactly zero.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    A = abelian or AbelianTautRing(d)
    R = lagrangian or LagrangianArithRing(d, "exact")

    solved, diagnosis = _MapSolver(A).solve()
    if solved is None:
        images = {k: ArithClass(A, GradedPoly.generator(A.zgens, f"C{k}")
                                * Fraction((-1) ** k),
                                GradedPoly.zero(A.agens),
                                GradedPoly.zero(A.agens))
                  for k in range(1, d)}
        e0: Scalar | None = None
        constructed = False
    else:
        full_images, e0 = solved
        images = {k: v for k, v in full_images.items() if 1 <= k < d}
        constructed = True

    def push_z(poly: GradedPoly) -> ArithClass:
        acc = A.zero()
        for mono, coeff in poly.items():
            term = A.one()
            for i, e in enumerate(mono):
                if e:
                    term = term * images[i + 1] ** e
            acc = acc + term * coeff
        return acc

    unit = e0 if e0 is not None else Scalar.coerce(1)
    residues: list[tuple[str, ArithClass]] = []
    for idx, rel in enumerate(R.relations):
        if rel.apart.symbol_degree() != 0:
            raise ValueError("proportionality check needs the exact ring")
        image = push_z(rel.zpoly) - A.from_a(
            A.dual_a(rel.apart.rename(A.agens)) * unit)
        red = A.reduce(image).drop_gamma()
        residues.append((f"lifted relation {idx + 1}", red))
    for idx, rel in enumerate(R.aq.presentation.relations):
        image = A.from_a(A.dual_a(rel.rename(A.agens)) * unit)
        red = A.reduce(image).drop_gamma()
        residues.append((f"form relation {idx + 1}", red))
    return ProportionalityReport(d, constructed, diagnosis, e0, images, residues)
