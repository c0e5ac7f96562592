"""
Morphisms between graphs
========================

In the flag/vertex presentation a morphism runs contravariantly on
flags and covariantly on vertices, with a virtual involution matching
the flags it forgets.  Every morphism factors as a grafting (welding
tails into edges) followed by a compression (collapsing subgraphs to
vertices), and the factorisation is unique up to a unique comparison
isomorphism.
"""

from grafcat.bm import (
    BMGraph,
    BMMorphism,
    bm_corolla,
    classify_bm,
    commute_bm,
    compose_bm,
    factorise_bm,
    find_bm_isomorphisms,
    validate_bm_morphism,
)

# a loop with one vertex and two flags forming an inner edge
loop = BMGraph(
    vertices={"v"},
    flags={"f1", "f2"},
    boundary={"f1": "v", "f2": "v"},
    involution={"f1": "f2", "f2": "f1"},
)

# grafting: weld the two tails of a 2-corolla into the loop's edge
star = bm_corolla(2)
graft = BMMorphism(
    source=star,
    target=loop,
    flag_map={"f1": "1", "f2": "2"},
    vertex_map={"v": "v"},
    virtual_involution={},
)
print("graft valid:", validate_bm_morphism(graft).ok)
print("graft classified:", classify_bm(graft))

# contraction: collapse the loop's edge, leaving a single bare vertex
point = BMGraph(vertices={"v"}, flags=set(), boundary={}, involution={})
contract = BMMorphism(
    source=loop,
    target=point,
    flag_map={},
    vertex_map={"v": "v"},
    virtual_involution={"f1": "f2", "f2": "f1"},
)
print("\ncontract valid:", validate_bm_morphism(contract).ok)
print("contract classified:", classify_bm(contract))

# composition runs the graft and then the contraction
total = compose_bm(graft, contract)
print("\ncomposite virtual involution:", total.virtual_involution)
print("composite classified:", classify_bm(total))

# every morphism factors through its ghost graph
mid, g, c = factorise_bm(total)
print("\nghost graph flags:", sorted(mid.flags))
print("factor classes:", classify_bm(g), classify_bm(c))
print("factors compose back exactly:", compose_bm(g, c) == total)

# two factorisations of the same morphism are linked by exactly one
# comparison isomorphism
mid2, g2, c2 = factorise_bm(total)
comparisons = [
    u
    for u in find_bm_isomorphisms(mid, mid2)
    if compose_bm(g, u) == g2 and compose_bm(u, c2) == c
]
print("comparison isomorphisms:", len(comparisons))

# a compression followed by a grafting can be swapped into
# grafting-then-compression with the same composite: contract the
# barbell's inner edge down to the star, then graft into the loop
barbell = BMGraph(
    vertices={"a", "b"},
    flags={"s", "e1", "e2", "t"},
    boundary={"s": "a", "e1": "a", "e2": "b", "t": "b"},
    involution={"s": "s", "e1": "e2", "e2": "e1", "t": "t"},
)
squeeze = BMMorphism(
    source=barbell,
    target=star,
    flag_map={"1": "s", "2": "t"},
    vertex_map={"a": "v", "b": "v"},
    virtual_involution={"e1": "e2", "e2": "e1"},
)
print("\nsqueeze classified:", classify_bm(squeeze))
swapped_mid, g3, c3 = commute_bm(squeeze, graft)
print("swap has grafting first:", classify_bm(g3).is_grafting)
print("swap composes to the same map:", compose_bm(g3, c3) == compose_bm(squeeze, graft))
