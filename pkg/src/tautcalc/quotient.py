"""Finite graded quotient rings by degreewise exact linear algebra.

Each degree gets its own row-reduced relation span over Q, with bookkeeping
that expresses every pivot row as an explicit combination of
(relation component) x (multiplier monomial) products.  Normal forms,
preferred bases, ideal-membership witnesses and null combinations (distinct
witness solutions) all fall out of the same elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import Scalar, ZERO
from .graded import (GeneratorSet, GradedPoly, Monomial, is_squarefree,
                     monomial_sort_key, monomials_of_degree, _mul_mono)


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class RingPresentation:
    """Generators, relations and a mandatory working-degree cap.

    Relations may be mixed-degree; they are split into homogeneous components
    (each component is a relation of the graded ring).  Relation coefficients
    must be rational: the linear algebra runs over Q.
    """

    gens: GeneratorSet
    relations: tuple[GradedPoly, ...]
    top_degree: int

    def __init__(self, gens: GeneratorSet, relations: Iterable[GradedPoly],
                 top_degree: int):
        rels = tuple(relations)
        for r in rels:
            if r.is_zero():
                raise ValueError("zero relation")
            if r.gens != gens:
                raise ValueError("relation over wrong generator set")
            for _, c in r.items():
                if not c.is_rational():
                    raise ValueError("relation coefficients must be rational")
        if rels and top_degree < max(gens.degrees):
            raise ValueError("top degree below maximal generator degree")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "top_degree", top_degree)


@dataclass(frozen=True)
class RelationSlot:
    """Homogeneous component of a presentation relation."""
    relation_index: int
    component_degree: int
    poly: GradedPoly


@dataclass
class Witness:
    """Certificate target = sum_slots cofactor * component + residue.

    Cofactors are keyed by (relation index, component degree); for
    homogeneous relations this is just the relation index with its degree.
    """

    target: GradedPoly
    cofactors: dict[tuple[int, int], GradedPoly]
    residue: GradedPoly
    _ring: "QuotientRing" = field(repr=False, default=None)

    def expand(self) -> GradedPoly:
        """Re-expand the certificate in the free ring."""
        acc = GradedPoly.zero(self.target.gens)
        for (ri, cd), cof in self.cofactors.items():
            acc = acc + cof * self._ring.slot_poly(ri, cd)
        return acc + self.residue

    def verify(self) -> bool:
        return self.expand() == self.target

    def by_relation(self) -> dict[int, GradedPoly]:
        """Cofactors keyed by relation index; requires each used relation to
        be homogeneous (single component)."""
        out: dict[int, GradedPoly] = {}
        for (ri, _), cof in self.cofactors.items():
            if ri in out:
                raise ValueError("relation has several components; "
                                 "use slot-keyed cofactors")
            out[ri] = cof
        return out


class _Row:
    __slots__ = ("entries", "combo")

    def __init__(self, entries: dict[int, Fraction], combo: dict[int, Fraction] | None):
        self.entries = entries
        self.combo = combo


@dataclass
class DimensionReport:
    dims: list[int]
    total: int
    socle_degree: int
    socle_dim: int


class QuotientRing:
    """Graded quotient with per-degree reduction data.

    Construction eliminates, in every degree up to the cap, the span of all
    (relation component) x (monomial) products.  Pivoting prefers to
    eliminate non-squarefree monomials, so squarefree monomials with small
    graded-lex keys survive as the preferred basis.
    """

    def __init__(self, presentation: RingPresentation, track_witnesses: bool = True):
        self.presentation = presentation
        self.gens = presentation.gens
        self.top_degree = presentation.top_degree
        self.track_witnesses = track_witnesses
        self.slots: list[RelationSlot] = []
        self._slot_lookup: dict[tuple[int, int], int] = {}
        for ri, rel in enumerate(presentation.relations):
            for deg, comp in rel.degree_components().items():
                slot = RelationSlot(ri, deg, comp)
                self._slot_lookup[(ri, deg)] = len(self.slots)
                self.slots.append(slot)
        self._monomials: list[list[Monomial]] = []
        self._monomial_index: list[dict[Monomial, int]] = []
        self._elim_rank: list[dict[int, int]] = []
        self._pivots: list[dict[int, _Row]] = []
        self._labels: list[list[tuple[int, Monomial]]] = []
        self._null_combos: list[list[dict[int, Fraction]]] = []
        self._basis: list[list[Monomial]] = []
        self._subset_cache: dict[frozenset[int], QuotientRing] = {}
        for k in range(self.top_degree + 1):
            self._build_degree(k)

    # -- construction --------------------------------------------------------

    def slot_poly(self, relation_index: int, component_degree: int) -> GradedPoly:
        return self.slots[self._slot_lookup[(relation_index, component_degree)]].poly

    def _build_degree(self, k: int):
        monos = monomials_of_degree(self.gens, k)
        index = {m: i for i, m in enumerate(monos)}
        self._monomials.append(monos)
        self._monomial_index.append(index)

        # Elimination preference: non-squarefree monomials first (in graded-lex
        # order), then squarefree ones largest-key-first, so small squarefree
        # keys are kept as basis whenever possible.
        def elim_key(col: int):
            m = monos[col]
            if is_squarefree(m):
                return (1, m)
            return (0, tuple(-e for e in m))

        order = sorted(range(len(monos)), key=elim_key)
        rank = {col: pos for pos, col in enumerate(order)}
        self._elim_rank.append(rank)

        labels: list[tuple[int, Monomial]] = []
        pivots: dict[int, _Row] = {}
        nulls: list[dict[int, Fraction]] = []

        for si, slot in enumerate(self.slots):
            rem = k - slot.component_degree
            if rem < 0:
                continue
            for mult in monomials_of_degree(self.gens, rem):
                entries: dict[int, Fraction] = {}
                for mono, coeff in slot.poly.items():
                    entries[index[_mul_mono(mono, mult)]] = coeff.rational_part()
                label_idx = len(labels)
                labels.append((si, mult))
                combo = {label_idx: Fraction(1)} if self.track_witnesses else None
                self._insert_row(entries, combo, pivots, rank, nulls)

        self._labels.append(labels)
        self._pivots.append(pivots)
        self._null_combos.append(nulls)
        basis_cols = sorted(set(range(len(monos))) - set(pivots),
                            key=lambda c: monomial_sort_key(self.gens, monos[c]))
        self._basis.append([monos[c] for c in basis_cols])

    def _insert_row(self, entries, combo, pivots, rank, nulls):
        while entries:
            present = [c for c in entries if c in pivots]
            if present:
                c = min(present, key=rank.__getitem__)
                factor = entries[c]
                row = pivots[c]
                _row_axpy(entries, -factor, row.entries)
                if combo is not None and row.combo is not None:
                    _combo_axpy(combo, -factor, row.combo)
                continue
            lead = min(entries, key=rank.__getitem__)
            inv = Fraction(1) / entries[lead]
            if inv != 1:
                entries = {c: v * inv for c, v in entries.items()}
                if combo is not None:
                    combo = {l: q * inv for l, q in combo.items()}
            # Keep full reduction: clear the new column from existing rows so
            # every pivot row mentions no other pivot column.
            for other in pivots.values():
                factor = other.entries.get(lead)
                if factor:
                    _row_axpy(other.entries, -factor, entries)
                    if combo is not None and other.combo is not None:
                        _combo_axpy(other.combo, -factor, combo)
            pivots[lead] = _Row(entries, combo)
            return
        if combo is not None and combo:
            nulls.append(combo)

    # -- reduction -----------------------------------------------------------

    def monomial_basis(self, degree: int) -> list[Monomial]:
        self._check_degree(degree)
        return list(self._basis[degree])

    def _check_degree(self, degree: int):
        if degree > self.top_degree:
            raise ReductionError(
                f"degree {degree} exceeds working degree {self.top_degree}")

    def normal_form(self, poly: GradedPoly) -> GradedPoly:
        nf, _ = self._reduce(poly, with_cofactors=False)
        return nf

    def reduce_with_cofactors(self, poly: GradedPoly) -> tuple[GradedPoly, dict[tuple[int, int], GradedPoly]]:
        if not self.track_witnesses:
            raise ReductionError("ring built without witness tracking")
        return self._reduce(poly, with_cofactors=True)

    def _reduce(self, poly: GradedPoly, with_cofactors: bool):
        if poly.gens != self.gens:
            raise ReductionError("polynomial over wrong generator set")
        self._check_degree(poly.max_degree())
        nf = GradedPoly.zero(self.gens)
        cof: dict[tuple[int, int], dict[Monomial, Scalar]] = {}
        for k, comp in poly.degree_components().items():
            index = self._monomial_index[k]
            vec: dict[int, Scalar] = {index[m]: c for m, c in comp.items()}
            pivots = self._pivots[k]
            labels = self._labels[k]
            for col in sorted(pivots, key=self._elim_rank[k].__getitem__):
                factor = vec.get(col)
                if not factor:
                    continue
                row = pivots[col]
                for c2, val in row.entries.items():
                    new = vec.get(c2, ZERO) - factor * val
                    if new:
                        vec[c2] = new
                    else:
                        vec.pop(c2, None)
                if with_cofactors:
                    for label_idx, q in row.combo.items():
                        si, mult = labels[label_idx]
                        slot = self.slots[si]
                        key = (slot.relation_index, slot.component_degree)
                        bucket = cof.setdefault(key, {})
                        new = bucket.get(mult, ZERO) + factor * q
                        if new:
                            bucket[mult] = new
                        else:
                            bucket.pop(mult, None)
            monos = self._monomials[k]
            nf = nf + GradedPoly(self.gens, {monos[c]: v for c, v in vec.items()})
        cofactors = {key: GradedPoly(self.gens, terms)
                     for key, terms in cof.items() if terms}
        return nf, cofactors

    # -- witnesses -----------------------------------------------------------

    def membership_witness(self, poly: GradedPoly,
                           relation_indices: Sequence[int] | None = None) -> Witness:
        """Express poly in the ideal generated by the chosen relations.

        The solve is degreewise and may be underdetermined; the first
        deterministic solution is returned.  Raises if poly is not in the
        span of the chosen subset.
        """
        ring, relabel = self._subset_ring(relation_indices)
        nf, cof = ring.reduce_with_cofactors(poly)
        if not nf.is_zero():
            raise ReductionError("not in ideal: nonzero residue "
                                 f"{nf.render()}")
        if relabel is not None:
            cof = {(relabel[ri], cd): p for (ri, cd), p in cof.items()}
        witness = Witness(poly, cof, nf, self)
        # Every produced certificate is machine-checked by re-expansion.
        if not witness.verify():
            raise ReductionError("witness failed to re-expand to its target")
        return witness

    def _subset_ring(self, relation_indices: Sequence[int] | None):
        if relation_indices is None:
            return self, None
        key = frozenset(relation_indices)
        if key == frozenset(range(len(self.presentation.relations))):
            return self, None
        cached = self._subset_cache.get(key)
        if cached is None:
            chosen = [self.presentation.relations[i] for i in sorted(key)]
            pres = RingPresentation(self.gens, chosen, self.top_degree)
            cached = QuotientRing(pres, track_witnesses=True)
            self._subset_cache[key] = cached
        return cached, dict(enumerate(sorted(key)))

    def alternative_witnesses(self, poly: GradedPoly, count: int = 3,
                              relation_indices: Sequence[int] | None = None) -> list[Witness]:
        """Distinct solutions of the (possibly underdetermined) witness system:
        the deterministic solution perturbed by null combinations of the
        relation rows.  Returns as many distinct witnesses as exist, up to
        count."""
        ring, relabel = self._subset_ring(relation_indices)
        base = self.membership_witness(poly, relation_indices)
        out = [base]
        degrees = sorted(poly.degree_components())
        scale = 1
        while len(out) < count:
            added = False
            for k in degrees:
                for null in ring._null_combos[k]:
                    if len(out) >= count:
                        break
                    cand = _perturb(base, null, ring, relabel, k,
                                    Fraction(scale), self)
                    if all(cand.cofactors != w.cofactors for w in out):
                        out.append(cand)
                        added = True
            if not added:
                break
            scale += 1
        return out

    # -- reports -------------------------------------------------------------

    def dimension_report(self) -> DimensionReport:
        dims = [len(b) for b in self._basis]
        socle = 0
        for k, d in enumerate(dims):
            if d:
                socle = k
        return DimensionReport(dims, sum(dims), socle, dims[socle])

    def audit_dump(self) -> dict:
        """Per-degree bases and reduction matrices, JSON-ready."""
        def mono_name(m: Monomial) -> str:
            if not any(m):
                return "1"
            return "*".join(f"{n}^{e}" if e > 1 else n
                            for n, e in zip(self.gens.names, m) if e)

        degrees = []
        for k in range(self.top_degree + 1):
            monos = self._monomials[k]
            rows = {}
            for col, row in sorted(self._pivots[k].items()):
                rows[mono_name(monos[col])] = {
                    mono_name(monos[c]): str(v)
                    for c, v in sorted(row.entries.items())}
            degrees.append({
                "degree": k,
                "monomials": [mono_name(m) for m in monos],
                "basis": [mono_name(m) for m in self._basis[k]],
                "reduction_rows": rows,
            })
        return {"generators": [{"name": n, "degree": d}
                               for n, d in zip(self.gens.names, self.gens.degrees)],
                "top_degree": self.top_degree,
                "degrees": degrees}


def _row_axpy(target: dict[int, Fraction], factor: Fraction, source: dict[int, Fraction]):
    for c, v in source.items():
        new = target.get(c, Fraction(0)) + factor * v
        if new:
            target[c] = new
        else:
            target.pop(c, None)


def _combo_axpy(target: dict[int, Fraction], factor: Fraction, source: dict[int, Fraction]):
    for l, q in source.items():
        new = target.get(l, Fraction(0)) + factor * q
        if new:
            target[l] = new
        else:
            target.pop(l, None)


def _perturb(base: Witness, null: dict[int, Fraction], ring: QuotientRing,
             relabel: dict[int, int] | None, degree: int, scale: Fraction,
             parent: QuotientRing) -> Witness:
    cofactors = dict(base.cofactors)
    labels = ring._labels[degree]
    for label_idx, q in null.items():
        si, mult = labels[label_idx]
        slot = ring.slots[si]
        ri = slot.relation_index if relabel is None else relabel[slot.relation_index]
        key = (ri, slot.component_degree)
        cur = cofactors.get(key, GradedPoly.zero(base.target.gens))
        cofactors[key] = cur + GradedPoly.monomial(base.target.gens, mult, q * scale)
    cofactors = {k: p for k, p in cofactors.items() if not p.is_zero()}
    return Witness(base.target, cofactors, base.residue, parent)
