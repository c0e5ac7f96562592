"""The bridge between the two graph encodings.

A vertex/flag graph (bm module) becomes an arc/flag/vertex graph
(graph_core) by doubling: every flag becomes an arc, and every tail gets
a freshly named companion arc so that the involution is fixpoint-free.
Ports of the arc picture correspond to tails, inner edges to edges.

A morphism of vertex/flag graphs tau -> rho factors as a grafting
followed by a compression through its ghost graph sigma.  On the arc
side the grafting becomes a reduced cover out of the picture of tau, and
the compression becomes a refinement out of the picture of rho, giving a
cospan

    phi(tau) --cover--> phi(sigma) <--refinement-- phi(rho).

phi translates morphisms to cospans and phi_inv translates back; the two
are mutually inverse on the nose, and composition on one side matches
composition (by pushout) on the other up to cospan equality.  This
module provides the cospan category and both translations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bm import (
    BMGraph,
    BMMorphism,
    bm_tails,
    compose_bm,
    factorise_bm,
)
from .etale import (
    EtaleMorphism,
    ReducedCover,
    compose_covers,
    compose_etale,
    identity_cover,
    iso_etale,
    validate_reduced_cover,
)
from .graph_core import (
    JKGraph,
    ValidationReport,
    embed_image,
    find_isomorphisms,
    validate_graph,
)
from .kleisli import (
    Refinement,
    FlaggedSubgraphRef,
    compose_refinements,
    identity_refinement,
    pushout_gen_rc,
    transport_refinement,
    validate_refinement,
)


def _tail_copy(t: str, taken: set[str]) -> str:
    c = t + "^"
    while c in taken:
        c += "^"
    return c


def tail_companions(g: BMGraph) -> dict[str, str]:
    """The deterministic fresh arc name given to each tail's open end."""
    taken = set(g.flags)
    out = {}
    for t in sorted(bm_tails(g)):
        c = _tail_copy(t, taken)
        taken.add(c)
        out[t] = c
    return out


def phi1_graph(g: BMGraph) -> JKGraph:
    """The arc picture of a vertex/flag graph: flags become arcs (with
    the embedding the identity), tails gain companion port arcs."""
    comp = tail_companions(g)
    arcs = set(g.flags) | set(comp.values())
    involution = {}
    for f in g.flags:
        t = g.involution[f]
        involution[f] = comp[f] if t == f else t
    for t, c in comp.items():
        involution[c] = t
    return JKGraph(
        arcs,
        set(g.flags),
        set(g.vertices),
        involution,
        {f: f for f in g.flags},
        dict(g.boundary),
    )


def phi1_graph_inv(g: JKGraph) -> BMGraph:
    """Read a vertex/flag graph off any arc picture without isolated
    edges: flags keep their names, inner edges restore the pairing and
    ports become tails."""
    im = set(g.embed.values())
    flag_of_arc = {a: h for h, a in g.embed.items()}
    involution = {}
    for h in g.flags:
        partner = g.involution[g.embed[h]]
        involution[h] = flag_of_arc[partner] if partner in im else h
    return BMGraph(set(g.vertices), set(g.flags), dict(g.incidence), involution)


def phi1_mor(m: BMMorphism) -> ReducedCover:
    """The arc picture of a grafting tau -> sigma: a reduced cover
    phi1(tau) -> phi1(sigma) gluing the companion ports of the tails
    that the grafting pairs up."""
    src_jk = phi1_graph(m.source)
    tgt_jk = phi1_graph(m.target)
    inv = {f: x for x, f in m.flag_map.items()}  # F_tau -> F_sigma
    comp_src = tail_companions(m.source)
    comp_tgt = tail_companions(m.target)
    tgt_inv = m.target.involution
    arc_map = {}
    for f in m.source.flags:
        arc_map[f] = inv[f]
    for t, c in comp_src.items():
        u = inv[t]
        arc_map[c] = comp_tgt[u] if tgt_inv[u] == u else tgt_inv[u]
    flag_map = {f: inv[f] for f in m.source.flags}
    vertex_map = dict(m.vertex_map)
    return ReducedCover(EtaleMorphism(src_jk, tgt_jk, arc_map, flag_map, vertex_map))


def phi1_mor_inv(rc: ReducedCover) -> BMMorphism:
    """Read a grafting off a reduced cover between arc pictures."""
    src = phi1_graph_inv(rc.source)
    tgt = phi1_graph_inv(rc.target)
    flag_map = {x: h for h, x in rc.flag_map.items()}
    return BMMorphism(src, tgt, flag_map, dict(rc.vertex_map), {})


def phi2_mor(m: BMMorphism) -> Refinement:
    """The arc picture of a compression sigma -> rho: a refinement
    phi1(rho) -> phi1(sigma) whose piece at each rho-vertex is the
    sigma-subgraph its fibre spans."""
    src_jk = phi1_graph(m.target)  # picture of rho
    tgt_jk = phi1_graph(m.source)  # picture of sigma
    sigma, rho = m.source, m.target
    comp_rho = tail_companions(rho)
    comp_sigma = tail_companions(sigma)
    vertex_map = {
        x: frozenset(v for v in sigma.vertices if m.vertex_map[v] == x) for x in rho.vertices
    }
    flag_map = {
        g: FlaggedSubgraphRef(vertex_map[rho.boundary[g]], m.flag_map[g]) for g in rho.flags
    }
    arc_map = {}
    for g in rho.flags:
        arc_map[g] = m.flag_map[g]
    for t, c in comp_rho.items():
        arc_map[c] = comp_sigma[m.flag_map[t]]
    return Refinement(src_jk, tgt_jk, arc_map, vertex_map, flag_map)


def phi2_mor_inv(r: Refinement) -> BMMorphism:
    """Read a compression off a refinement between arc pictures."""
    sigma = phi1_graph_inv(r.target)
    rho = phi1_graph_inv(r.source)
    flag_map = {g: r.flag_map[g].flag for g in rho.flags}
    vertex_map = {}
    for x, w in r.vertex_map.items():
        for v in w:
            vertex_map[v] = x
    image = set(flag_map.values())
    virtual = {
        f: sigma.involution[f] for f in sigma.flags if f not in image
    }
    return BMMorphism(sigma, rho, flag_map, vertex_map, virtual)


@dataclass(frozen=True)
class GraphCospan:
    """A cover/refinement cospan: the arc-picture form of a morphism.

    Runs from the cover's source to the refinement's source through the
    shared apex."""

    left: ReducedCover
    right: Refinement

    @property
    def source(self) -> JKGraph:
        return self.left.source

    @property
    def apex(self) -> JKGraph:
        return self.left.target

    @property
    def target(self) -> JKGraph:
        return self.right.source


def validate_cospan(c: GraphCospan) -> ValidationReport:
    problems = []
    rep = validate_reduced_cover(c.left)
    if not rep.ok:
        problems.append("left: " + "; ".join(rep.problems))
    rep = validate_refinement(c.right)
    if not rep.ok:
        problems.append("right: " + "; ".join(rep.problems))
    if c.left.target != c.right.target:
        problems.append("apex: the two legs land in different graphs")
    return ValidationReport(tuple(problems))


def identity_cospan(g: JKGraph) -> GraphCospan:
    return GraphCospan(identity_cover(g), identity_refinement(g))


def compose_cospan(c1: GraphCospan, c2: GraphCospan) -> GraphCospan:
    """Composite of c1: T -> R and c2: R -> Q by pushing the right leg
    of c1 out against the left leg of c2."""
    if c1.target != c2.source:
        raise ValueError("cospans are not composable: feet differ")
    gen_out, rc_out = pushout_gen_rc(c1.right, c2.left)
    left = compose_covers(c1.left, rc_out)
    right = compose_refinements(c2.right, gen_out)
    return GraphCospan(left, right)


def cospan_equal(c1: GraphCospan, c2: GraphCospan) -> bool:
    """Same feet, and an isomorphism of apexes commuting with both legs."""
    if c1.source != c2.source or c1.target != c2.target:
        return False
    for iso in find_isomorphisms(c1.apex, c2.apex):
        mid = iso_etale(c1.apex, c2.apex, iso)
        if compose_etale(c1.left.morphism, mid) != c2.left.morphism:
            continue
        if transport_refinement(c1.right, iso, c2.apex) == c2.right:
            return True
    return False


def cospan_factorise(c: GraphCospan) -> tuple[GraphCospan, GraphCospan]:
    """Split a cospan into a pure-cover cospan followed by a
    pure-refinement cospan (composing back to it)."""
    apex = c.apex
    return (
        GraphCospan(c.left, identity_refinement(apex)),
        GraphCospan(identity_cover(apex), c.right),
    )


def phi(m: BMMorphism) -> GraphCospan:
    """Translate a vertex/flag morphism into its cover/refinement
    cospan through the arc picture of its ghost graph."""
    _, graft, compress = factorise_bm(m)
    return GraphCospan(phi1_mor(graft), phi2_mor(compress))


def phi_inv(c: GraphCospan) -> BMMorphism:
    """Translate a cover/refinement cospan back into a vertex/flag
    morphism: read a grafting off the left leg, a compression off the
    right leg, and compose."""
    graft = phi1_mor_inv(c.left)
    compress = phi2_mor_inv(c.right)
    return compose_bm(graft, compress)
