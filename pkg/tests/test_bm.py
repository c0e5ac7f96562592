import pytest
from hypothesis import given, settings

from conftest import bm_graphs, make_bm_edge, make_bm_loop, make_bm_two_corollas
from grafcat.bm import (
    BMGraph,
    BMMorphism,
    bm_corolla,
    bm_edges,
    bm_identity,
    bm_point,
    bm_tails,
    classify_bm,
    commute_bm,
    compose_bm,
    contracted_pairs,
    factorise_bm,
    find_bm_isomorphisms,
    ghost_graph,
    is_bm_isomorphic,
    validate_bm_graph,
    validate_bm_morphism,
)
from grafcat.oracle import enumerate_bm_morphisms


# -- graphs --------------------------------------------------------------------

def test_graph_validation(LOOP, E2):
    for g in (LOOP, E2, bm_point(), bm_corolla(2)):
        assert validate_bm_graph(g).ok
    bad = BMGraph({"v"}, {"f"}, {"f": "w"}, {"f": "f"})
    assert not validate_bm_graph(bad).ok


def test_tails_and_edges(LOOP, E2):
    assert bm_tails(bm_corolla(2)) == {"1", "2"}
    assert bm_tails(LOOP) == set()
    assert bm_edges(LOOP) == {frozenset({"f1", "f2"})}
    assert bm_edges(E2) == {frozenset({"e1", "e2"})}


# -- morphism classification ------------------------------------------------------

def test_identity_is_everything(LOOP):
    c = classify_bm(bm_identity(LOOP))
    assert c.is_isomorphism and c.is_grafting and c.is_compression
    assert c.is_contraction and c.is_merger


def test_grafting_loop(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    assert validate_bm_morphism(graft).ok
    c = classify_bm(graft)
    assert c.is_grafting and not c.is_compression and not c.is_isomorphism


def test_contraction_of_loop(LOOP):
    contract = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})
    assert validate_bm_morphism(contract).ok
    c = classify_bm(contract)
    assert c.is_compression and c.is_contraction
    assert not c.is_merger and not c.is_grafting
    assert contracted_pairs(contract) == {frozenset({"f1", "f2"})}


def test_merger_of_points():
    pp = BMGraph({"u", "w"}, set(), {}, {})
    merge = BMMorphism(pp, bm_point(), {}, {"u": "v", "w": "v"}, {})
    assert validate_bm_morphism(merge).ok
    c = classify_bm(merge)
    assert c.is_merger and c.is_compression
    assert not c.is_contraction and not c.is_grafting


def test_edge_contraction(E2):
    m = BMMorphism(E2, bm_point(), {}, {"u": "v", "w": "v"}, {"e1": "e2", "e2": "e1"})
    assert validate_bm_morphism(m).ok
    assert classify_bm(m).is_contraction


# -- validation clauses -------------------------------------------------------------

def test_virtual_must_match_actual_pairing():
    four = BMGraph(
        {"v"}, {"a", "b", "c", "d"},
        {f: "v" for f in "abcd"},
        {"a": "b", "b": "a", "c": "d", "d": "c"},
    )
    bad = BMMorphism(four, bm_point(), {}, {"v": "v"},
                     {"a": "c", "c": "a", "b": "d", "d": "b"})
    rep = validate_bm_morphism(bad)
    assert not rep.ok
    assert any("virtual-matches-actual" in p for p in rep.problems)


def test_image_must_be_edge_closed(LOOP):
    bad = BMMorphism(LOOP, bm_corolla(1), {"1": "f1"}, {"v": "v"}, {"f2": "f2"})
    rep = validate_bm_morphism(bad)
    assert not rep.ok
    assert any("image-closed" in p for p in rep.problems)


def test_virtual_must_be_fixpoint_free(LOOP):
    bad = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f1", "f2": "f2"})
    assert not validate_bm_morphism(bad).ok


def test_flag_map_must_be_injective(E2):
    bad = BMMorphism(E2, bm_corolla(2), {"1": "e1", "2": "e1"}, {"u": "v", "w": "v"}, {})
    assert not validate_bm_morphism(bad).ok


# -- composition ---------------------------------------------------------------------

def test_unit_laws(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    assert compose_bm(bm_identity(bm_corolla(2)), graft) == graft
    assert compose_bm(graft, bm_identity(LOOP)) == graft


def test_composite_carries_virtual_edge(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    contract = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})
    comp = compose_bm(graft, contract)
    assert validate_bm_morphism(comp).ok
    assert comp.virtual_involution == {"1": "2", "2": "1"}
    assert comp.flag_map == {} and comp.vertex_map == {"v": "v"}


def test_associativity_on_chain(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    contract = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})
    left = compose_bm(compose_bm(graft, contract), bm_identity(bm_point()))
    right = compose_bm(graft, compose_bm(contract, bm_identity(bm_point())))
    assert left == right


def test_non_composable_rejected(LOOP, E2):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    ident = bm_identity(E2)
    with pytest.raises(ValueError):
        compose_bm(graft, ident)


# -- factorisation ---------------------------------------------------------------------

def test_factorise_composite(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    contract = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})
    comp = compose_bm(graft, contract)
    mid, g1, c1 = factorise_bm(comp)
    assert validate_bm_graph(mid).ok
    assert is_bm_isomorphic(mid, LOOP)
    assert classify_bm(g1).is_grafting
    assert classify_bm(c1).is_compression
    assert compose_bm(g1, c1) == comp
    assert ghost_graph(comp) == mid


def test_factorise_pure_grafting(LOOP):
    graft = BMMorphism(bm_corolla(2), LOOP, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
    mid, g2, c2 = factorise_bm(graft)
    assert is_bm_isomorphic(mid, LOOP)
    assert classify_bm(c2).is_isomorphism
    assert compose_bm(g2, c2) == graft


def test_commute_compression_past_grafting(LOOP):
    contract = BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})
    mid, g3, c3 = commute_bm(contract, bm_identity(bm_point()))
    assert classify_bm(g3).is_grafting
    assert classify_bm(c3).is_compression
    assert compose_bm(g3, c3) == compose_bm(contract, bm_identity(bm_point()))


def test_factorise_all_morphisms_between_small_graphs(LOOP, E2, CC):
    graphs = [bm_point(), bm_corolla(1), bm_corolla(2), LOOP, E2, CC]
    seen = 0
    for tau in graphs:
        for rho in graphs:
            for h in enumerate_bm_morphisms(tau, rho):
                mid, g, c = factorise_bm(h)
                assert classify_bm(g).is_grafting
                assert classify_bm(c).is_compression
                assert compose_bm(g, c) == h
                seen += 1
    assert seen > 20


# -- isomorphisms -------------------------------------------------------------------------

def test_automorphism_counts(LOOP, E2):
    assert len(find_bm_isomorphisms(bm_corolla(2), bm_corolla(2))) == 2
    assert len(find_bm_isomorphisms(LOOP, LOOP)) == 2
    assert len(find_bm_isomorphisms(E2, E2)) == 2
    assert len(find_bm_isomorphisms(bm_point(), bm_point())) == 1
    assert find_bm_isomorphisms(bm_corolla(2), LOOP) == []
    assert not is_bm_isomorphic(bm_corolla(2), LOOP)


def test_isomorphisms_validate(E2):
    for iso in find_bm_isomorphisms(E2, E2):
        assert validate_bm_morphism(iso).ok
        assert classify_bm(iso).is_isomorphism


# -- properties ----------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(bm_graphs(max_vertices=2, max_valence=3))
def test_random_bm_graphs_validate(g):
    assert validate_bm_graph(g).ok


@settings(max_examples=30, deadline=None)
@given(bm_graphs(max_vertices=2, max_valence=2))
def test_identity_factorises_trivially(g):
    mid, graft, compress = factorise_bm(bm_identity(g))
    assert is_bm_isomorphic(mid, g)
    assert compose_bm(graft, compress) == bm_identity(g)


@settings(max_examples=25, deadline=None)
@given(bm_graphs(max_vertices=2, max_valence=2))
def test_random_factorisation(g):
    targets = [bm_point(), make_bm_loop(), make_bm_edge(), make_bm_two_corollas()]
    for rho in targets:
        for h in enumerate_bm_morphisms(g, rho):
            mid, graft, compress = factorise_bm(h)
            assert classify_bm(graft).is_grafting
            assert classify_bm(compress).is_compression
            assert compose_bm(graft, compress) == h
