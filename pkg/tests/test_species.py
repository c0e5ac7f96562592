import itertools

import pytest

from grafcat.graph_core import (
    corolla,
    find_isomorphisms,
    local_interface,
    ports,
    relabel,
    validate_graph,
)
from grafcat.kleisli import _refine_with_cover
from grafcat.species import (
    Decoration,
    GraphicalSpecies,
    act,
    canonical_label,
    decorated_isomorphic,
    element_profile,
    evaluate_species,
    graphs_with_ports,
    monad_mult_element,
    monad_unit,
    operation_profile,
    operations_of_arity,
    transport_decoration,
    truncated_free,
    validate_decoration,
    validate_species,
)

# free species: directed graphs with one binary-multiplication generator
SP = GraphicalSpecies(
    colours=frozenset({"in", "out"}),
    colour_involution={"in": "out", "out": "in"},
    operations={"m": ("in", "in", "out")},
)


def _coset_name(q):
    swapped = tuple({0: 1, 1: 0}.get(v, v) for v in q)
    rep = min(q, swapped)
    return "c" if q[2] == 2 else "c" + "".join(str(i) for i in rep)


def make_commutative_species():
    # commutative multiplication: operations are cosets of the slot swap
    ops = {}
    for q in itertools.permutations(range(3)):
        ops[_coset_name(q)] = tuple(("in", "in", "out")[q[i]] for i in range(3))
    action = {}
    for name in ops:
        base_q = (0, 1, 2) if name == "c" else tuple(int(ch) for ch in name[1:])
        for p in itertools.permutations(range(3)):
            q = tuple(base_q[p[i]] for i in range(3))
            action[(name, p)] = _coset_name(q)
    return GraphicalSpecies(
        frozenset({"in", "out"}), {"in": "out", "out": "in"}, ops, action
    )


CSP = make_commutative_species()


# -- species validation -----------------------------------------------------------

def test_species_validate():
    assert validate_species(SP).ok
    assert validate_species(CSP).ok


def test_bad_profile_colour_rejected():
    bad = GraphicalSpecies(frozenset({"in"}), {"in": "in"}, {"m": ("in", "up")})
    assert not validate_species(bad).ok


def test_broken_action_table_rejected():
    # arbitrary-representative naming breaks composition of the action
    ops = dict(CSP.operations)
    action = dict(CSP.action)
    some_key = next(k for k, v in action.items() if k[1] != (0, 1, 2) and v != k[0])
    action[some_key] = some_key[0]
    assert not validate_species(
        GraphicalSpecies(CSP.colours, dict(CSP.colour_involution), ops, action)
    ).ok


# -- the symmetric-group action ------------------------------------------------------

def test_action_laws():
    for p in itertools.permutations(range(3)):
        assert operation_profile(SP, act(SP, "m", p)) == tuple(
            SP.operations["m"][p[i]] for i in range(3)
        )
        for q in itertools.permutations(range(3)):
            pq = tuple(p[q[i]] for i in range(3))
            assert act(SP, act(SP, "m", p), q) == act(SP, "m", pq)
    assert act(SP, "m", (0, 1, 2)) == "m"


def test_arity_counts():
    assert len(operations_of_arity(SP, 3)) == 6
    assert operations_of_arity(SP, 2) == {}
    assert len(operations_of_arity(CSP, 3)) == 3


def test_canonical_label_is_orbit_invariant():
    arcs = ("a", "b", "c")
    base = canonical_label(SP, "m", arcs)
    for p in itertools.permutations(range(3)):
        moved = canonical_label(
            SP, act(SP, "m", p), tuple(arcs[p[i]] for i in range(3))
        )
        assert moved == base


# -- decorations ----------------------------------------------------------------------

def test_corolla_evaluation_counts():
    c3 = corolla(3)
    decs = evaluate_species(SP, c3)
    assert len(decs) == 6
    for dec in decs:
        assert validate_decoration(SP, c3, dec).ok
    assert len(evaluate_species(CSP, c3)) == 3


def test_decorated_iso_vs_port_fixing():
    c3 = corolla(3)
    col = {"1": "in", "1*": "out", "2": "in", "2*": "out", "3": "out", "3*": "in"}
    d1 = Decoration(col, {"v": canonical_label(SP, "m", ("1", "2", "3"))})
    d2 = Decoration(dict(col), {"v": canonical_label(SP, "m", ("2", "1", "3"))})
    assert validate_decoration(SP, c3, d1).ok
    assert validate_decoration(SP, c3, d2).ok
    assert d1 != d2
    assert decorated_isomorphic(SP, c3, d1, c3, d2)
    assert not decorated_isomorphic(SP, c3, d1, c3, d2, fix_ports=True)


def test_non_canonical_label_rejected():
    c3 = corolla(3)
    col = {"1": "in", "1*": "out", "2": "in", "2*": "out", "3": "out", "3*": "in"}
    lab = canonical_label(SP, "m", ("1", "2", "3"))
    twisted = type(lab)(act(SP, lab.operation, (1, 0, 2)), lab.arcs_by_slot)
    if twisted != lab:
        assert not validate_decoration(SP, c3, Decoration(col, {"v": twisted})).ok


def test_transport_decoration_roundtrip():
    c3 = corolla(3)
    dec = evaluate_species(SP, c3)[0]
    moved = relabel(c3, {a: "x" + a for a in c3.arcs})
    for iso in find_isomorphisms(c3, moved):
        dec2 = transport_decoration(SP, dec, iso)
        assert validate_decoration(SP, moved, dec2).ok
        assert decorated_isomorphic(SP, c3, dec, moved, dec2)


# -- the unit -----------------------------------------------------------------------------

def test_monad_unit():
    g, dec = monad_unit(SP, "m")
    assert validate_graph(g).ok
    assert validate_decoration(SP, g, dec).ok
    assert element_profile(SP, g, dec) == ("in", "in", "out")
    assert ports(g) == {"1", "2", "3"}


# -- truncated free algebra ----------------------------------------------------------------

def test_graphs_with_ports_shapes():
    gs = graphs_with_ports([3], 3, 1)
    assert len(gs) == 1 and len(gs[0].vertices) == 1
    gs2 = graphs_with_ports([3], 2, 2)
    for g in gs2:
        assert ports(g) == {"1", "2"}
        assert validate_graph(g).ok


def test_unit_graph_appears_at_two_ports():
    gs = graphs_with_ports([3], 2, 1)
    assert any(not g.vertices for g in gs)


def flat_decorated_count(sp, n_ports, max_v) -> int:
    """Independent recount: list every decoration of every admissible
    graph, then dedup by pairwise port-fixing decorated isomorphism."""
    arities = sorted({len(p) for p in sp.operations.values()})
    reps = []
    for g in graphs_with_ports(arities, n_ports, max_v):
        kept = []
        for dec in evaluate_species(sp, g):
            if not any(
                decorated_isomorphic(sp, g, d0, g, dec, fix_ports=True)
                for d0 in kept
            ):
                kept.append(dec)
        reps.extend((g, d) for d in kept)
    return len(reps)


def test_truncated_free_counts_frozen():
    elems = truncated_free(SP, 2, 2)
    assert len(elems) == 10
    hist = {}
    for g, dec in elems:
        assert validate_graph(g).ok
        assert validate_decoration(SP, g, dec).ok
        hist[len(g.vertices)] = hist.get(len(g.vertices), 0) + 1
    assert hist == {0: 2, 2: 8}
    assert len(truncated_free(SP, 3, 1)) == 6
    assert len(truncated_free(SP, 1, 2)) == 2
    assert len(truncated_free(CSP, 3, 1)) == 3


def test_truncated_free_matches_flat_recount():
    for sp, n_ports, max_v in [
        (SP, 2, 2), (SP, 3, 1), (SP, 1, 2), (CSP, 3, 1), (CSP, 2, 2),
    ]:
        assert len(truncated_free(sp, n_ports, max_v)) == flat_decorated_count(
            sp, n_ports, max_v
        )


def test_truncated_free_has_no_duplicates():
    elems = truncated_free(SP, 2, 2)
    for i, (g1, d1) in enumerate(elems):
        for g2, d2 in elems[i + 1:]:
            assert not decorated_isomorphic(SP, g1, d1, g2, d2, fix_ports=True)


# -- multiplication ---------------------------------------------------------------------------

def test_left_unit_law():
    # grafting an element into a bare corolla flattens to the element itself
    S, dec_S = truncated_free(SP, 3, 1)[0]
    n = len(ports(S))
    cn = corolla(n)
    outer_col = {}
    for k in range(1, n + 1):
        c = dec_S.arc_colouring[str(k)]
        outer_col[str(k)] = c
        outer_col[str(k) + "*"] = SP.colour_involution[c]
    bij = {str(k): str(k) for k in range(1, n + 1)}
    ref, dec_out = monad_mult_element(SP, cn, outer_col, {"v": (S, bij)}, {"v": dec_S})
    assert validate_decoration(SP, ref.target, dec_out).ok
    strip = {a: a.removeprefix("v.") for a in ref.target.arcs}
    back = relabel(
        ref.target,
        strip,
        {f: f.removeprefix("v.") for f in ref.target.flags},
        {w: w.removeprefix("v.") for w in ref.target.vertices},
    )
    assert back == S
    assert {strip[a]: c for a, c in dec_out.arc_colouring.items()} == dec_S.arc_colouring


def test_right_unit_law():
    # replacing every vertex by its own unit corolla flattens back
    R, dec_R = next(e for e in truncated_free(SP, 2, 2) if len(e[0].vertices) == 2)
    assignment = {}
    decorations = {}
    for x in sorted(R.vertices):
        label = dec_R.vertex_labels[x]
        gx, dx = monad_unit(SP, label.operation)
        assignment[x] = (
            gx, {str(k): a for k, a in enumerate(label.arcs_by_slot, start=1)}
        )
        decorations[x] = dx
    ref, dec_back = monad_mult_element(SP, R, dec_R.arc_colouring, assignment, decorations)
    assert validate_decoration(SP, ref.target, dec_back).ok
    assert decorated_isomorphic(SP, ref.target, dec_back, R, dec_R)


def port_vertices(g):
    flag_of = {g.embed[f]: f for f in g.flags}
    return {g.incidence[flag_of[g.involution[p]]] for p in ports(g)}


def nested_instance():
    """Outer 2-star, middle double-edge pair, inner corollas: one full
    three-layer stack for the associativity check."""
    outer = corolla(2)
    outer_col = {"1": "in", "1*": "out", "2": "in", "2*": "out"}
    mid = next(
        g for g in graphs_with_ports([3], 2, 2)
        if len(g.vertices) == 2 and port_vertices(g) == g.vertices
    )
    mid_col = next(
        dec.arc_colouring for dec in evaluate_species(SP, mid)
        if dec.arc_colouring["1"] == "in" and dec.arc_colouring["2"] == "in"
    )
    inner_assign = {}
    inner_decs = {}
    for w in sorted(mid.vertices):
        iface = sorted(local_interface(mid, w))
        gw = corolla(len(iface))
        colw = {}
        for k, a in enumerate(iface, start=1):
            colw[str(k)] = mid_col[a]
            colw[str(k) + "*"] = SP.colour_involution[mid_col[a]]
        slots = sorted(range(1, len(iface) + 1), key=lambda k: colw[str(k)] != "in")
        labelw = canonical_label(SP, "m", tuple(str(k) for k in slots))
        inner_assign[w] = (gw, {str(k): a for k, a in enumerate(iface, start=1)})
        inner_decs[w] = Decoration(colw, {"v": labelw})
    return outer, outer_col, mid, mid_col, inner_assign, inner_decs


def test_multiplication_associativity_instance():
    outer, outer_col, mid, mid_col, inner_assign, inner_decs = nested_instance()

    # inner first: flatten the middle layer, then graft into the outer star
    refA1, decA1 = monad_mult_element(SP, mid, mid_col, inner_assign, inner_decs)
    midA = refA1.target
    bijA = {refA1.arc_map[q]: q for q in ("1", "2")}
    refA2, decA = monad_mult_element(
        SP, outer, outer_col, {"v": (midA, bijA)}, {"v": decA1}
    )

    # outer first: graft the middle structurally, then flatten once
    rsref, rscover = _refine_with_cover(outer, {"v": (mid, {"1": "1", "2": "2"})})
    colRS = {rscover.arc_map["v." + a]: c for a, c in mid_col.items()}
    assignB = {}
    decsB = {}
    for w in sorted(mid.vertices):
        gw, bijw = inner_assign[w]
        assignB["v." + w] = (
            gw, {q: rscover.arc_map["v." + a] for q, a in bijw.items()}
        )
        decsB["v." + w] = inner_decs[w]
    refB2, decB = monad_mult_element(SP, rsref.target, colRS, assignB, decsB)

    assert validate_decoration(SP, refA2.target, decA).ok
    assert validate_decoration(SP, refB2.target, decB).ok
    assert decorated_isomorphic(SP, refA2.target, decA, refB2.target, decB)


def test_colour_mismatch_rejected():
    S, dec_S = truncated_free(SP, 3, 1)[0]
    n = len(ports(S))
    outer_col = {}
    for k in range(1, n + 1):
        c = dec_S.arc_colouring[str(k)]
        outer_col[str(k)] = SP.colour_involution[c]      # deliberately flipped
        outer_col[str(k) + "*"] = c
    bij = {str(k): str(k) for k in range(1, n + 1)}
    with pytest.raises(ValueError):
        monad_mult_element(SP, corolla(n), outer_col, {"v": (S, bij)}, {"v": dec_S})
