"""
Refinements, duality, pushouts
==============================

A refinement replaces each vertex of a coarse graph by a whole graph
with the same interface.  Refinements are dual to reduced covers: a
cover's source decomposes into pieces, one per target vertex, and a
refinement's pieces sum to a cover.  Pushing a refinement out along a
cover is the engine behind cospan composition.
"""

from grafcat.etale import glue_ports, reduced_covers_of
from grafcat.graph_core import (
    JKGraph,
    corolla,
    disjoint_union,
    inner_edges,
    is_isomorphic,
    ports,
)
from grafcat.kleisli import (
    cover_to_refinement,
    identity_refinement,
    pieces,
    pushout_gen_rc,
    refine,
    refinement_to_cover,
    validate_refinement,
)

# refine a loop by replacing its vertex with a two-vertex path
loop = JKGraph(
    arcs={"l1", "l2"},
    flags={"f1", "f2"},
    vertices={"v"},
    involution={"l1": "l2", "l2": "l1"},
    embed={"f1": "l1", "f2": "l2"},
    incidence={"f1": "v", "f2": "v"},
)
path = JKGraph(
    arcs={"p", "p*", "q", "q*", "e", "e*"},
    flags={"m_p", "m_e", "n_e", "n_q"},
    vertices={"m", "n"},
    involution={"p": "p*", "p*": "p", "q": "q*", "q*": "q", "e": "e*", "e*": "e"},
    embed={"m_p": "p*", "m_e": "e", "n_e": "e*", "n_q": "q*"},
    incidence={"m_p": "m", "m_e": "m", "n_e": "n", "n_q": "n"},
)
r = refine(loop, {"v": (path, {"p": "l2", "q": "l1"})})
print("refinement valid:", validate_refinement(r).ok)
print("refined graph has vertices:", sorted(r.target.vertices))
print("refined graph has no ports:", not ports(r.target))

# the refinement remembers its pieces
for x, (piece, bij) in pieces(r).items():
    print(f"piece at {x}: {len(piece.vertices)} vertices, interface {sorted(bij)}")

# duality: a refinement sums to a cover, a cover regroups to a refinement
rc = refinement_to_cover(r)
print("\ncover source is the disjoint path:", is_isomorphic(rc.source, path))
back = cover_to_refinement(rc)
print("regrouped refinement targets the same graph:", back.target == r.target)

# the full cover lattice of the refined graph, one cover per edge subset
print("covers of the refined 2-cycle:", len(reduced_covers_of(r.target)))

# pushout: transport a refinement along a gluing of its source
pair, _, _ = disjoint_union(corolla(1), corolla(1))
glued, weld = glue_ports(pair, "L.1", "R.1")
expand = refine(
    pair,
    {
        "L.v": (corolla(["z"]), {"z": "L.1"}),
        "R.v": (corolla(["w"]), {"w": "R.1"}),
    },
)
moved, weld2 = pushout_gen_rc(expand, weld)
print("\npushout source is the glued graph:", moved.source == glued)
print("pushout target welded the refined ports:", len(inner_edges(moved.target)))
print("identity refinement pushes to itself:", pushout_gen_rc(
    identity_refinement(pair), weld
)[0].target == glued)
