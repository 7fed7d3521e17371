"""Tests for the structure-map derivation and axiom certification."""

import pytest
from hypothesis import given, settings, strategies as st

from anss3.hopfalg import (
    El,
    StructureMaps,
    axiom_check,
    derive_structure_maps,
    el_mul,
    el_one,
    gen_count,
    key_degree,
)


@pytest.fixture(scope="module")
def maps():
    return derive_structure_maps(52, 5)


@pytest.fixture(scope="module")
def maps_big():
    return derive_structure_maps(160, 5)


def test_gen_count():
    assert gen_count(52) == 2
    assert gen_count(160) == 3
    assert gen_count(5) == 1


def test_eta_r_v1(maps):
    # eta_R(v1) = v1 + 3 t1, exactly
    assert maps.eta_r_gen[0].terms == {
        (((1, 0, 0)), ((0, 0, 0),)): 1,
        (((0, 0, 0)), ((1, 0, 0),)): 3,
    }


def test_eta_r_v2_mod3(maps):
    # eta_R(v2) = v2 + v1 t1^3 - v1^3 t1 mod 3
    reduced = {k: c % 3 for k, c in maps.eta_r_gen[1].terms.items() if c % 3}
    assert reduced == {
        ((0, 1, 0), ((0, 0, 0),)): 1,
        ((1, 0, 0), ((3, 0, 0),)): 1,
        ((3, 0, 0), ((1, 0, 0),)): 2,
    }


def test_coproduct_t1_primitive_mod_decomposables(maps):
    assert maps.coprod_gen[0].terms == {
        ((0, 0, 0), ((1, 0, 0), (0, 0, 0))): 1,
        ((0, 0, 0), ((0, 0, 0), (1, 0, 0))): 1,
    }


def test_integrality_is_enforced(maps_big):
    # the derivation ran through v3/t3 without a fractional residue
    assert len(maps_big.eta_r_gen) == 3
    for el in maps_big.eta_r_gen + maps_big.coprod_gen:
        assert el.is_homogeneous() is not None


def test_homogeneous_degrees(maps):
    assert maps.eta_r_gen[0].is_homogeneous() == 4
    assert maps.eta_r_gen[1].is_homogeneous() == 16
    assert maps.coprod_gen[1].is_homogeneous() == 16


class TestAxioms:
    def test_certification_passes(self, maps):
        rep = axiom_check(maps)
        assert rep.ok, rep.failures

    def test_certification_passes_extended(self, maps_big):
        rep = axiom_check(maps_big)
        assert rep.ok, rep.failures

    def test_mutated_coproduct_fails(self, maps):
        # negative control: adding t1^2 (x) t1 to the coproduct of t2 must
        # break coassociativity in degree 16 (and nothing should mask it)
        bad = StructureMaps(
            T=maps.T,
            N=maps.N,
            k=maps.k,
            eta_r_gen=[e.copy() for e in maps.eta_r_gen],
            coprod_gen=[e.copy() for e in maps.coprod_gen],
        )
        bad.coprod_gen[1].add_term(((0, 0, 0), ((2, 0, 0), (1, 0, 0))), 1)
        rep = axiom_check(bad)
        assert not rep.ok
        assert any(
            f.identity == "coassociativity" and f.degree == 16 for f in rep.failures
        )

    def test_symmetric_perturbation_caught_by_unit_compat(self, maps):
        # t1 (x) t1 alone is coassociative (it is a generator change), so the
        # certification must catch it through the unit-compatibility law
        bad = StructureMaps(
            T=maps.T,
            N=maps.N,
            k=maps.k,
            eta_r_gen=[e.copy() for e in maps.eta_r_gen],
            coprod_gen=[e.copy() for e in maps.coprod_gen],
        )
        bad.coprod_gen[1].add_term(((0, 0, 0), ((1, 0, 0), (1, 0, 0))), 1)
        rep = axiom_check(bad)
        assert not rep.ok
        assert any(f.identity == "right-unit-compatibility" for f in rep.failures)

    def test_mutated_eta_r_fails(self, maps):
        bad = StructureMaps(
            T=maps.T,
            N=maps.N,
            k=maps.k,
            eta_r_gen=[e.copy() for e in maps.eta_r_gen],
            coprod_gen=[e.copy() for e in maps.coprod_gen],
        )
        # drop the t-free part of eta_R(v2): counit law breaks
        bad.eta_r_gen[1].add_term(((0, 1, 0), ((0, 0, 0),)), -1)
        rep = axiom_check(bad)
        assert not rep.ok
        assert any(f.identity == "counit-eta_R" for f in rep.failures)


class TestMigration:
    def test_migrate_through_one_slot(self, maps):
        # gamma (x) v1*delta = gamma*eta_R(v1) (x) delta:
        # migrating v1 past slot t1 gives v1*(t1 (x) .) + 3*(t1^2 (x) .)
        out = maps.migrate((1, 0, 0), (((1, 0, 0)),))
        assert out == {
            ((1, 0, 0), ((1, 0, 0),)): 1,
            ((0, 0, 0), ((2, 0, 0),)): 3,
        }

    def test_concat_degree_additive(self, maps):
        a = El(1, maps.N, {((1, 0, 0), ((1, 0, 0),)): 1})
        b = El(1, maps.N, {((0, 1, 0), ((3, 0, 0),)): 2})
        c = maps.concat(a, b)
        assert c.arity == 2
        assert c.is_homogeneous() == a.is_homogeneous() + b.is_homogeneous()

    @given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
    @settings(max_examples=30, deadline=None)
    def test_concat_associative(self, e1, e2, e3):
        maps = derive_structure_maps(52, 5)
        a = El(1, 5, {((e1, 0, 0), ((1, 0, 0),)): 1})
        b = El(1, 5, {((e2, 0, 0), ((0, 1, 0),)): 1})
        c = El(1, 5, {((0, e3, 0), ((2, 0, 0),)): 1})
        left = maps.concat(maps.concat(a, b), c)
        right = maps.concat(a, maps.concat(b, c))
        assert left == right


def test_serialization_roundtrip(maps):
    text = maps.to_json()
    again = StructureMaps.from_json(text)
    assert again.eta_r_gen == maps.eta_r_gen
    assert again.coprod_gen == maps.coprod_gen
    assert "3*m_n" in text  # convention recorded in the artifact
