"""
Graphs with open ends
=====================

A graph here is a diagram of finite sets: arcs carrying a fixpoint-free
involution, flags embedded into the arcs, and an incidence map sending
flags to vertices.  Edges are involution orbits; an arc that no flag
reaches is a port, an open end through which the graph composes with
the outside world.
"""

from grafcat.graph_core import (
    JKGraph,
    components,
    corolla,
    disjoint_union,
    edges,
    elements,
    find_isomorphisms,
    inner_edges,
    is_connected,
    is_effective,
    local_interface,
    ports,
    recompose_elements,
    unit_graph,
    validate_graph,
)

# the corolla: one vertex with n open edges, the basic building block
c3 = corolla(3)
print("corolla(3) arcs:", sorted(c3.arcs))
print("corolla(3) ports:", sorted(ports(c3)))
print("corolla(3) interface at v:", sorted(local_interface(c3, "v")))

# a loop: one vertex whose two flags close up into a single inner edge
loop = JKGraph(
    arcs={"l1", "l2"},
    flags={"f1", "f2"},
    vertices={"v"},
    involution={"l1": "l2", "l2": "l1"},
    embed={"f1": "l1", "f2": "l2"},
    incidence={"f1": "v", "f2": "v"},
)
report = validate_graph(loop)
print("\nloop valid:", report.ok)
print("loop edges:", [sorted(e) for e in edges(loop)])
print("loop inner edges:", [sorted(e) for e in inner_edges(loop)])
print("loop has no ports:", not ports(loop))

# the unit graph is a single free-floating edge; it is not effective
# because its edge touches no vertex
print("\nunit graph effective:", is_effective(unit_graph()))
print("loop effective:", is_effective(loop))

# graphs decompose into connected components
both, _, _ = disjoint_union(corolla(2), loop)
print("\ncomponents of corolla(2) + loop:", len(components(both)))
print("disjoint union connected:", is_connected(both))

# every effective graph is glued from elementary pieces: its edges and
# its vertex stars; the recipe can be replayed to rebuild the graph
recipe = elements(loop)
rebuilt = recompose_elements(recipe)
isos = find_isomorphisms(rebuilt, loop)
print("\nloop rebuilt from elements, isomorphisms found:", len(isos))

# isomorphism search respects all three levels at once
print("corolla(2) self-isomorphisms:", len(find_isomorphisms(corolla(2), corolla(2))))
