import json
import random
from fractions import Fraction

import pytest

from tautcalc.scalars import Scalar, zeta_prime_symbol
from tautcalc.graded import GeneratorSet, GradedPoly
from tautcalc.quotient import (QuotientRing, ReductionError, RingPresentation)
from tautcalc.arakelov import tautological_ring, lagrangian_degree


def u(ring_or_gens, name):
    gens = getattr(ring_or_gens, "gens", ring_or_gens)
    return GradedPoly.generator(gens, name)


def test_r2_basis_and_dimension():
    ring = tautological_ring(2)
    rep = ring.dimension_report()
    assert rep.total == 2
    assert ring.monomial_basis(0) == [(0, 0)]
    assert ring.monomial_basis(1) == [(1, 0)]
    assert ring.monomial_basis(2) == []
    assert rep.socle_degree == 1 and rep.socle_dim == 1


def test_r4_total_dimension():
    assert tautological_ring(4).dimension_report().total == 8


def test_free_ring():
    gens = GeneratorSet([("u1", 1)])
    ring = QuotientRing(RingPresentation(gens, [], 2))
    assert ring.monomial_basis(0) == [(0,)]
    assert ring.monomial_basis(1) == [(1,)]
    assert ring.monomial_basis(2) == [(2,)]


def test_normal_form_examples_d3():
    ring = tautological_ring(3)
    u1, u2 = u(ring, "u1"), u(ring, "u2")
    assert ring.normal_form(u1 * u1) == u2 * 2
    assert ring.normal_form(u1 ** 4).is_zero()


def test_normal_form_newton_d4():
    # 3! ch^[3] reduces to -c1^3/2 + 3 c3, i.e. -u1*u2 + 3*u3 in the basis
    ring = tautological_ring(4)
    u1, u2, u3 = u(ring, "u1"), u(ring, "u2"), u(ring, "u3")
    s3 = u1 ** 3 - u1 * u2 * 3 + u3 * 3
    reduced = ring.normal_form(s3)
    assert reduced == -(u1 * u2) + u3 * 3
    # and agrees with reducing -c1^3/2 + 3 c3 directly
    assert reduced == ring.normal_form(u1 ** 3 * Fraction(-1, 2) + u3 * 3)


def test_normal_form_idempotent_linear():
    ring = tautological_ring(4)
    rng = random.Random(5)
    gens = ring.gens
    for _ in range(30):
        terms = {}
        for _ in range(5):
            mono = tuple(rng.randrange(3) for _ in range(4))
            if gens.degree_of(mono) <= ring.top_degree:
                terms[mono] = Fraction(rng.randrange(-5, 6))
        p = GradedPoly(gens, terms)
        q = GradedPoly(gens, {m: 2 * c for m, c in terms.items()})
        nf = ring.normal_form(p)
        assert ring.normal_form(nf) == nf
        assert ring.normal_form(p + q) == nf + ring.normal_form(q)
        prod_rule = ring.normal_form(
            ring.normal_form(p).mul_truncated(ring.normal_form(q), ring.top_degree))
        assert ring.normal_form(p.mul_truncated(q, ring.top_degree)) == prod_rule


def test_membership_witness_d2_explicit():
    gens = GeneratorSet([("u1", 1), ("u2", 2)])
    p_rel = u(gens, "u1") * u(gens, "u1") - u(gens, "u2") * 2
    ring = QuotientRing(RingPresentation(gens, [p_rel, u(gens, "u2")], 2))
    target = u(gens, "u1") * u(gens, "u1")
    w = ring.membership_witness(target)
    assert w.verify()
    assert w.residue.is_zero()
    by_rel = w.by_relation()
    assert by_rel[0] == GradedPoly.constant(gens, 1)
    assert by_rel[1] == GradedPoly.constant(gens, 2)


def test_membership_witness_d3_cofactors():
    # u1^4 against the three homogeneous relations; cofactors reduce to the
    # displayed combination 2 c1^2 (p1-part) + 4 (p2-part) + 8 c1 (u3-part).
    gens = GeneratorSet([(f"u{j}", j) for j in range(1, 4)])
    u1, u2, u3 = (u(gens, f"u{j}") for j in (1, 2, 3))
    p1 = u1 * u1 - u2 * 2
    p2 = u2 * u2 - u1 * u3 * 2
    ring = QuotientRing(RingPresentation(gens, [p1, p2, u3], 4))
    w = ring.membership_witness(u1 ** 4)
    assert w.verify()
    classical = tautological_ring(3)
    reduce = classical.normal_form
    by_rel = w.by_relation()
    assert reduce(by_rel[0]) == reduce(u1 * u1 * 2)
    assert reduce(by_rel[1]) == GradedPoly.constant(gens, 4)
    assert reduce(by_rel.get(2, GradedPoly.zero(gens))) == reduce(u1 * 8)


def test_membership_witness_zero_and_failure():
    ring = tautological_ring(3, track_witnesses=True)
    w = ring.membership_witness(GradedPoly.zero(ring.gens))
    assert not w.cofactors and w.residue.is_zero()
    u1 = u(ring, "u1")
    with pytest.raises(ReductionError):
        ring.membership_witness(u1)  # nonzero normal form
    with pytest.raises(ReductionError):
        tautological_ring(3).reduce_with_cofactors(u1)  # witness-free build


def test_membership_witness_subset():
    # u1^2 is not in the ideal generated by u3 alone
    gens = GeneratorSet([(f"u{j}", j) for j in range(1, 4)])
    u1, u2, u3 = (u(gens, f"u{j}") for j in (1, 2, 3))
    p1 = u1 * u1 - u2 * 2
    ring = QuotientRing(RingPresentation(gens, [p1, u3], 4))
    with pytest.raises(ReductionError):
        ring.membership_witness(u1 * u1, relation_indices=[1])
    w = ring.membership_witness(p1 * u1, relation_indices=[0])
    assert w.verify()
    assert set(ri for ri, _ in w.cofactors) == {0}


def test_dimension_reports():
    r3 = tautological_ring(3).dimension_report()
    assert r3.dims[:4] == [1, 1, 1, 1] and r3.total == 4
    assert r3.socle_degree == 3
    assert tautological_ring(5).dimension_report().total == 16
    r2 = tautological_ring(2).dimension_report()
    assert r2.socle_degree == 1 and r2.socle_dim == 1


def test_dimensions_match_expected_through_7():
    for d in range(2, 8):
        rep = tautological_ring(d).dimension_report()
        assert rep.total == 2 ** (d - 1)
        assert rep.socle_degree == d * (d - 1) // 2
        assert rep.socle_dim == 1


def test_socle_coordinate_is_lagrangian_degree():
    for d in range(2, 7):
        ring = tautological_ring(d)
        top = d * (d - 1) // 2
        nf = ring.normal_form(GradedPoly.monomial(
            ring.gens, ring.gens.single("u1", top)))
        coord = nf.coefficient(ring.monomial_basis(top)[0])
        assert coord == Scalar.from_rational(lagrangian_degree(d))


def test_alternative_witnesses_reexpand():
    ring = tautological_ring(4, track_witnesses=True)
    u1 = u(ring, "u1")
    witnesses = ring.alternative_witnesses(u1 ** 7, 3)
    assert len(witnesses) >= 3
    seen = set()
    for w in witnesses:
        assert w.verify()
        seen.add(tuple(sorted((key, tuple(sorted(p.items())))
                              for key, p in w.cofactors.items())))
    assert len(seen) == len(witnesses)


def test_degree_overflow():
    ring = tautological_ring(2)
    with pytest.raises(ReductionError):
        ring.normal_form(u(ring, "u1") ** 5)


def test_scalar_coefficients_reduce():
    ring = tautological_ring(3)
    u1 = u(ring, "u1")
    z = zeta_prime_symbol(1)
    nf = ring.normal_form(u1 * u1 * z)
    assert nf == u(ring, "u2") * (z * 2)


def test_mixed_degree_relation_components():
    # one mixed relation: its homogeneous parts act independently
    gens = GeneratorSet([("u1", 1), ("u2", 2)])
    u1, u2 = u(gens, "u1"), u(gens, "u2")
    mixed = u1 * u1 - u2 * 2 + u2 * u2
    ring = QuotientRing(RingPresentation(gens, [mixed], 4))
    assert ring.normal_form(u1 * u1) == u2 * 2
    assert ring.normal_form(u2 * u2).is_zero()
    w = ring.membership_witness(u2 * u2)
    assert w.verify()
    assert (0, 4) in w.cofactors
    both = ring.membership_witness(mixed)
    assert both.verify()
    assert {(0, 2), (0, 4)} <= set(both.cofactors)
    with pytest.raises(ValueError):
        both.by_relation()  # two components of the same relation were used


def test_rejects_irrational_relations():
    gens = GeneratorSet([("u1", 1)])
    bad = u(gens, "u1") * zeta_prime_symbol(1)
    with pytest.raises(ValueError):
        RingPresentation(gens, [bad], 2)


def test_audit_dump_serializable():
    ring = tautological_ring(3)
    dump = ring.audit_dump()
    text = json.dumps(dump)
    doc = json.loads(text)
    assert doc["top_degree"] == 4
    degree2 = doc["degrees"][2]
    assert degree2["basis"] == ["u2"]
    assert "u1^2" in degree2["reduction_rows"]
