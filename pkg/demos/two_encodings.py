"""
One category, two presentations
===============================

The same graphs-with-open-ends category shows up in two dresses: the
flag/vertex presentation, and a cospan presentation where a morphism is
a reduced cover into an apex together with a refinement out of it.  The
translation is exact in both directions, down to equality of morphisms,
and composition on the cospan side happens by pushout.
"""

from grafcat.bm import BMGraph, BMMorphism, bm_corolla, compose_bm
from grafcat.cospan_equiv import (
    compose_cospan,
    cospan_equal,
    cospan_factorise,
    phi,
    phi1_graph,
    phi1_graph_inv,
    phi_inv,
    validate_cospan,
)
from grafcat.graph_core import inner_edges, ports

# translate a graph: tails grow companion arcs and become ports
star = bm_corolla(2)
jk = phi1_graph(star)
print("star translated, arcs:", sorted(jk.arcs))
print("star translated, ports:", sorted(ports(jk)))
print("object roundtrip is exact:", phi1_graph_inv(jk) == star)

# translate a morphism: the composite of a grafting and a contraction
loop = BMGraph(
    vertices={"v"},
    flags={"f1", "f2"},
    boundary={"f1": "v", "f2": "v"},
    involution={"f1": "f2", "f2": "f1"},
)
point = BMGraph(vertices={"v"}, flags=set(), boundary={}, involution={})
graft = BMMorphism(star, loop, {"f1": "1", "f2": "2"}, {"v": "v"}, {})
contract = BMMorphism(loop, point, {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})

c_graft = phi(graft)
print("\ngraft as cospan is valid:", validate_cospan(c_graft).ok)
print("cover leg glues the star's ports:", len(inner_edges(c_graft.apex)))
print("morphism roundtrip is exact:", phi_inv(c_graft) == graft)

# composition translates to pushout composition of cospans
c_contract = phi(contract)
both_routes_agree = cospan_equal(
    compose_cospan(c_graft, c_contract), phi(compose_bm(graft, contract))
)
print("\ncompose-then-translate equals translate-then-compose:", both_routes_agree)

# a cospan splits back into its two legs: a pure cover cospan followed
# by a pure refinement cospan
total = phi(compose_bm(graft, contract))
cover_part, refine_part = cospan_factorise(total)
print("\nfactorised composite recombines:", cospan_equal(
    compose_cospan(cover_part, refine_part), total
))
print("roundtrip of the composite is exact:", phi_inv(total) == compose_bm(graft, contract))
