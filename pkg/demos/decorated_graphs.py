"""
Decorated graphs and the free monad
===================================

A graphical species assigns colours to edge ends and symmetric
operation sets to vertex shapes.  Decorating a graph means colouring
its arcs consistently and labelling each vertex with an operation whose
profile matches the local colours.  Substituting decorated graphs into
vertices and flattening is the multiplication of a monad, associative
up to decorated isomorphism and unital on the nose.
"""

from grafcat.graph_core import corolla, local_interface, ports
from grafcat.species import (
    GraphicalSpecies,
    act,
    canonical_label,
    decorated_isomorphic,
    evaluate_species,
    monad_mult_element,
    monad_unit,
    operation_profile,
    truncated_free,
    validate_species,
)

# a species with one binary and one ternary generator over two colours
sp = GraphicalSpecies(
    colours=frozenset({"in", "out"}),
    colour_involution={"in": "out", "out": "in"},
    operations={"b": ("in", "out"), "m": ("in", "in", "out")},
)
print("species valid:", validate_species(sp).ok)
print("profile of m:", operation_profile(sp, "m"))

# the symmetric group acts by permuting slots; for a free species the
# twisted operations get systematic names
twisted = act(sp, "m", (1, 0, 2))
print("m twisted by a swap:", twisted, "with profile", operation_profile(sp, twisted))
print("vertex labels store the least representative:", canonical_label(
    sp, twisted, ("a2", "a1", "a3")
))

# every decoration of a 3-corolla: colourings matched with operations
decs = evaluate_species(sp, corolla(3))
print("\ndecorations of the 3-corolla:", len(decs))
print("one of them, labels:", decs[0].vertex_labels)

# the truncated free monad: decorated connected graphs with fixed ports
elems = truncated_free(sp, 2, 2)
print("\nfree monad elements with 2 ports, up to 2 vertices:", len(elems))

# substituting and flattening: put a decorated element into a corolla
S, dec_S = next(e for e in elems if len(e[0].vertices) == 2)
n = len(ports(S))
outer_col = {}
for k in range(1, n + 1):
    c = dec_S.arc_colouring[str(k)]
    outer_col[str(k)] = c
    outer_col[str(k) + "*"] = sp.colour_involution[c]
bij = {str(k): str(k) for k in range(1, n + 1)}
ref, dec_flat = monad_mult_element(
    sp, corolla(n), outer_col, {"v": (S, bij)}, {"v": dec_S}
)
print("\nflattened graph vertices:", sorted(ref.target.vertices))
print("flattening into a bare corolla is the left unit:", decorated_isomorphic(
    sp, ref.target, dec_flat, S, dec_S
))

# the right unit: replace each vertex by the unit corolla of its label
assignment = {}
decorations = {}
for x in sorted(S.vertices):
    label = dec_S.vertex_labels[x]
    gx, dx = monad_unit(sp, label.operation)
    assignment[x] = (gx, {str(k): a for k, a in enumerate(label.arcs_by_slot, start=1)})
    decorations[x] = dx
ref_u, dec_u = monad_mult_element(sp, S, dec_S.arc_colouring, assignment, decorations)
print("unit substitution flattens back:", decorated_isomorphic(
    sp, ref_u.target, dec_u, S, dec_S
))
