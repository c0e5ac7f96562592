"""Refinements of graphs, and the generic/free calculus built on them.

A refinement R -> S exhibits S as the result of replacing every vertex
of R by a graph (the piece at that vertex) and gluing the pieces along
the edges of R.  It is recorded by three maps:

    arc_map:     arcs of R    -> arcs of S
    vertex_map:  vertices x   -> the nonempty set W_x of S-vertices the
                                 piece at x occupies (the W_x partition
                                 the vertices of S)
    flag_map:    flags g at x -> a reference (W_x, h) naming the flag h
                                 of S where the piece meets the slot of g

Pieces may glue to themselves: an inner edge of S both of whose flags
are chosen by flags at the same x comes from a loop edge of R, and the
piece is recovered by cutting that edge open.  The flags of the piece at
x that are not chosen must pair up internally; this closure clause,
together with the commuting squares below, is what makes the pieces glue
back to exactly S.

Refinements are the generic morphisms of a Kleisli category whose free
morphisms are etale maps; this module also provides the generic/free
factorisation data, the pushout of a refinement against a reduced
cover, and decision procedures for equality of the composites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .etale import (
    EtaleMorphism,
    ReducedCover,
    compose_etale,
    cut_edges,
    decompose_reduced_cover,
    glue_ports,
    identity_cover,
    identity_etale,
    iso_etale,
    open_subgraph,
    replay_gluings,
    validate_etale,
)
from .graph_core import (
    GraphIso,
    JKGraph,
    ValidationReport,
    corolla,
    find_isomorphisms,
    inner_edges,
    isolated_edges,
    local_interface,
    ports,
    prefix_graph,
    relabel,
    validate_graph,
)


class FlaggedSubgraphRef(NamedTuple):
    """A vertex-spanned subgraph of the target together with one of its
    flags: where a piece sits and where it meets one slot."""

    vertex_set: frozenset[str]
    flag: str


@dataclass(frozen=True)
class Refinement:
    source: JKGraph
    target: JKGraph
    arc_map: dict[str, str]
    vertex_map: dict[str, frozenset[str]]
    flag_map: dict[str, FlaggedSubgraphRef]

    def __post_init__(self):
        object.__setattr__(self, "arc_map", dict(self.arc_map))
        object.__setattr__(
            self, "vertex_map", {x: frozenset(w) for x, w in self.vertex_map.items()}
        )
        object.__setattr__(
            self,
            "flag_map",
            {g: FlaggedSubgraphRef(frozenset(ref[0]), ref[1]) for g, ref in self.flag_map.items()},
        )


def _chosen_flags(r: Refinement, x: str) -> dict[str, str]:
    """flag of R at x -> the chosen flag of the target."""
    return {g: r.flag_map[g].flag for g in r.source.flags if r.source.incidence[g] == x}


def validate_refinement(r: Refinement) -> ValidationReport:
    problems = []
    for rep, name in ((validate_graph(r.source), "source"), (validate_graph(r.target), "target")):
        if not rep.ok:
            problems.append(f"{name}-invalid: " + "; ".join(rep.problems))
    if problems:
        return ValidationReport(tuple(problems))
    src, tgt = r.source, r.target
    for g, name in ((src, "source"), (tgt, "target")):
        if isolated_edges(g):
            problems.append(
                f"{name}-isolated: refinements run between graphs without isolated edges"
            )
    if set(r.arc_map) != set(src.arcs) or not set(r.arc_map.values()) <= set(tgt.arcs):
        problems.append("arc-map: not a total map from source arcs to target arcs")
    if set(r.vertex_map) != set(src.vertices) or not all(
        w <= set(tgt.vertices) for w in r.vertex_map.values()
    ):
        problems.append("vertex-map: not a total map from source vertices to target vertex sets")
    if set(r.flag_map) != set(src.flags) or not all(
        ref.flag in tgt.flags for ref in r.flag_map.values()
    ):
        problems.append("flag-map: not a total map from source flags to flagged subgraphs")
    if problems:
        return ValidationReport(tuple(problems))
    covered: dict[str, str] = {}
    for x in sorted(src.vertices):
        w = r.vertex_map[x]
        if not w:
            problems.append(f"pieces: the piece at {x!r} occupies no vertices")
        for v in sorted(w):
            if v in covered:
                problems.append(f"partition: target vertex {v!r} lies in two pieces")
            covered[v] = x
    if set(covered) != set(tgt.vertices):
        missing = sorted(set(tgt.vertices) - set(covered))
        problems.append(f"partition: target vertices {missing} lie in no piece")
    for g in sorted(src.flags):
        w, h = r.flag_map[g]
        if w != r.vertex_map[src.incidence[g]]:
            problems.append(f"right-square: flag {g!r} does not land in its vertex's piece")
        if tgt.incidence[h] not in w:
            problems.append(f"flag-in-piece: chosen flag for {g!r} sits outside the piece")
        if r.arc_map[src.embed[g]] != tgt.embed[h]:
            problems.append(f"left-square: embed squares do not commute at flag {g!r}")
    for x in sorted(src.vertices):
        chosen = _chosen_flags(r, x)
        if len(set(chosen.values())) != len(chosen):
            problems.append(f"pullback: two flags at {x!r} choose the same target flag")
    for a in sorted(src.arcs):
        if r.arc_map[src.involution[a]] != tgt.involution[r.arc_map[a]]:
            problems.append(f"involution: arc map does not commute with involutions at {a!r}")
    src_ports, tgt_ports = ports(src), ports(tgt)
    port_image = {r.arc_map[a] for a in src_ports}
    if len(port_image) != len(src_ports) or port_image != tgt_ports:
        problems.append("ports: arc map is not a bijection from source ports to target ports")
    if problems:
        return ValidationReport(tuple(problems))
    for x in sorted(src.vertices):
        w = r.vertex_map[x]
        chosen = set(_chosen_flags(r, x).values())
        piece_flags = {h for h in tgt.flags if tgt.incidence[h] in w}
        interior = piece_flags - chosen
        interior_arcs = {tgt.embed[h] for h in interior}
        for h in sorted(interior):
            if tgt.involution[tgt.embed[h]] not in interior_arcs:
                problems.append(
                    f"closure: unchosen flag {h!r} of the piece at {x!r} reaches outside it"
                )
    return ValidationReport(tuple(problems))


def identity_refinement(g: JKGraph) -> Refinement:
    return Refinement(
        g,
        g,
        {a: a for a in g.arcs},
        {v: frozenset({v}) for v in g.vertices},
        {h: FlaggedSubgraphRef(frozenset({g.incidence[h]}), h) for h in g.flags},
    )


def _piece_data(r: Refinement, x: str) -> tuple[JKGraph, dict[str, str], ReducedCover]:
    """The piece at x: the spanned subgraph with self-glued edges cut,
    its port interface, and the cut quotient back onto the span."""
    src, tgt = r.source, r.target
    span, _ = open_subgraph(tgt, r.vertex_map[x])
    chosen = _chosen_flags(r, x)
    chosen_set = set(chosen.values())
    flag_of_arc = {a: h for h, a in span.embed.items()}
    self_glued = {
        e for e in inner_edges(span) if all(flag_of_arc[a] in chosen_set for a in e)
    }
    piece, cut_cover = cut_edges(span, self_glued)
    bij = {}
    for g, h in chosen.items():
        port = piece.involution[piece.embed[h]]
        bij[port] = src.involution[src.embed[g]]
    return piece, bij, cut_cover


def pieces(r: Refinement) -> dict[str, tuple[JKGraph, dict[str, str]]]:
    """The piece at each source vertex, with its interface.

    Returns x -> (piece, bij) where the piece is the subgraph of the
    target spanned by W_x with its self-glued edges cut open, and bij
    sends each port of the piece to the source arc pointing into x along
    the corresponding flag.
    """
    return {x: _piece_data(r, x)[:2] for x in sorted(r.source.vertices)}


def _disjoint_pieces(
    assignment: dict[str, tuple[JKGraph, dict[str, str]]],
) -> tuple[JKGraph, dict[str, dict[str, str]]]:
    """Sum the pieces with per-vertex prefixes; returns the sum and, for
    each x, the prefixed copy of its port interface."""
    arcs: set[str] = set()
    flags: set[str] = set()
    vertices: set[str] = set()
    involution: dict[str, str] = {}
    embed: dict[str, str] = {}
    incidence: dict[str, str] = {}
    interfaces: dict[str, dict[str, str]] = {}
    for x in sorted(assignment):
        piece, bij = assignment[x]
        copy, maps = prefix_graph(piece, x + ".")
        if arcs & copy.arcs or flags & copy.flags or vertices & copy.vertices:
            raise ValueError(f"piece labels collide after prefixing with {x + '.'!r}")
        arcs |= copy.arcs
        flags |= copy.flags
        vertices |= copy.vertices
        involution.update(copy.involution)
        embed.update(copy.embed)
        incidence.update(copy.incidence)
        interfaces[x] = {maps.arc_map[q]: a for q, a in bij.items()}
    total = JKGraph(arcs, flags, vertices, involution, embed, incidence)
    return total, interfaces


def refine(r: JKGraph, assignment: dict[str, tuple[JKGraph, dict[str, str]]]) -> Refinement:
    """Replace each vertex of r by its assigned piece and glue along the
    edges of r; returns the refinement of r by the glued graph.

    assignment maps each vertex x to (piece, bij) with bij a bijection
    from the piece's ports to the arcs pointing into x.
    """
    refinement, _ = _refine_with_cover(r, assignment)
    return refinement


def _refine_with_cover(
    r: JKGraph, assignment: dict[str, tuple[JKGraph, dict[str, str]]]
) -> tuple[Refinement, ReducedCover]:
    """refine(), also returning the gluing quotient from the summed
    prefixed pieces onto the refined graph."""
    rep = validate_graph(r)
    if not rep.ok:
        raise ValueError("invalid graph: " + "; ".join(rep.problems))
    if isolated_edges(r):
        raise ValueError("cannot refine a graph with isolated edges")
    if set(assignment) != set(r.vertices):
        raise ValueError("assignment must cover exactly the vertices")
    for x in sorted(assignment):
        piece, bij = assignment[x]
        prep = validate_graph(piece)
        if not prep.ok:
            raise ValueError(f"piece at {x!r} invalid: " + "; ".join(prep.problems))
        if (not piece.vertices and not piece.arcs) or isolated_edges(piece):
            raise ValueError(f"piece at {x!r} must be nonempty without isolated edges")
        if set(bij) != ports(piece):
            raise ValueError(f"interface at {x!r} is not defined on the piece's ports")
        if len(set(bij.values())) != len(bij) or set(bij.values()) != local_interface(r, x):
            raise ValueError(f"interface at {x!r} is not a bijection onto the incoming arcs")

    total, interfaces = _disjoint_pieces(assignment)
    slot = {}  # incoming arc of r -> prefixed piece port occupying that slot
    for x, iface in interfaces.items():
        for q, a in iface.items():
            slot[a] = q

    glued = total
    cover = identity_cover(total)
    for e in sorted(inner_edges(r), key=lambda e: tuple(sorted(e))):
        a1, a2 = sorted(e)
        q1 = slot[r.involution[a1]]
        q2 = slot[r.involution[a2]]
        glued, step = glue_ports(glued, cover.arc_map[q1], cover.arc_map[q2])
        cover = ReducedCover(compose_etale(cover.morphism, step.morphism))

    vertex_map = {}
    flag_map = {}
    arc_map = {}
    flag_of_arc = {a: h for h, a in total.embed.items()}
    for x in sorted(r.vertices):
        piece, _ = assignment[x]
        vertex_map[x] = frozenset(x + "." + v for v in piece.vertices)
    for g in sorted(r.flags):
        x = r.incidence[g]
        a = r.embed[g]
        q = slot[r.involution[a]]
        h = flag_of_arc[total.involution[q]]
        flag_map[g] = FlaggedSubgraphRef(vertex_map[x], h)
        arc_map[a] = cover.arc_map[total.embed[h]]
        arc_map[r.involution[a]] = cover.arc_map[q]
    refinement = Refinement(r, glued, arc_map, vertex_map, flag_map)
    return refinement, cover


def compose_refinements(r1: Refinement, r2: Refinement) -> Refinement:
    """The composite of r1: R -> S and r2: S -> T: each piece of r1 is
    refined in turn by the pieces of r2 sitting over it."""
    if r1.target != r2.source:
        raise ValueError("refinements are not composable: middle graphs differ")
    vertex_map = {
        x: frozenset(v for w in r1.vertex_map[x] for v in r2.vertex_map[w])
        for x in r1.vertex_map
    }
    flag_map = {
        g: FlaggedSubgraphRef(
            vertex_map[r1.source.incidence[g]], r2.flag_map[r1.flag_map[g].flag].flag
        )
        for g in r1.flag_map
    }
    arc_map = {a: r2.arc_map[b] for a, b in r1.arc_map.items()}
    return Refinement(r1.source, r2.target, arc_map, vertex_map, flag_map)


def transport_refinement(r: Refinement, iso: GraphIso, new_target: JKGraph) -> Refinement:
    """Push a refinement forward along an isomorphism of its target."""
    return Refinement(
        r.source,
        new_target,
        {a: iso.arc_map[b] for a, b in r.arc_map.items()},
        {x: frozenset(iso.vertex_map[v] for v in w) for x, w in r.vertex_map.items()},
        {
            g: FlaggedSubgraphRef(
                frozenset(iso.vertex_map[v] for v in ref.vertex_set), iso.flag_map[ref.flag]
            )
            for g, ref in r.flag_map.items()
        },
    )


def refinement_to_cover(r: Refinement) -> ReducedCover:
    """The sum of the pieces, mapping onto the target: a refinement seen
    as a single reduced cover that remembers only the pieces."""
    assignment = {}
    cut_covers = {}
    for x in sorted(r.source.vertices):
        piece, bij, cut_cover = _piece_data(r, x)
        assignment[x] = (piece, bij)
        cut_covers[x] = cut_cover
    total, _ = _disjoint_pieces(assignment)
    arc_map = {}
    flag_map = {}
    vertex_map = {}
    for x in sorted(assignment):
        pfx = x + "."
        cc = cut_covers[x]
        for a, b in cc.arc_map.items():
            arc_map[pfx + a] = b
        for h in cc.source.flags:
            flag_map[pfx + h] = h
        for v in cc.source.vertices:
            vertex_map[pfx + v] = v
    return ReducedCover(EtaleMorphism(total, r.target, arc_map, flag_map, vertex_map))


def cover_to_refinement(rc: ReducedCover) -> Refinement:
    """The refinement whose pieces are the connected components of the
    cover's source, with one corolla-shaped vertex per component (named
    after the component's least vertex, with the component's own port
    labels)."""
    from .graph_core import components

    src, tgt = rc.source, rc.target
    comps = components(src)
    arcs: set[str] = set()
    flags: set[str] = set()
    vertices: set[str] = set()
    involution: dict[str, str] = {}
    embed: dict[str, str] = {}
    incidence: dict[str, str] = {}
    comp_vertex = {}
    for comp in comps:
        if not comp.vertices:
            raise ValueError("cover source has an isolated edge component")
        name = min(comp.vertices)
        comp_vertex[name] = comp
        cor = relabel(corolla(sorted(ports(comp))), vertex_map={"v": name})
        if arcs & set(cor.arcs) or flags & set(cor.flags) or name in vertices:
            raise ValueError("component port labels collide across components")
        arcs |= set(cor.arcs)
        flags |= set(cor.flags)
        vertices |= set(cor.vertices)
        involution.update(cor.involution)
        embed.update(cor.embed)
        incidence.update(cor.incidence)
    summed = JKGraph(arcs, flags, vertices, involution, embed, incidence)

    # ports of the source glued pairwise onto inner edges of the target
    glue_steps = decompose_reduced_cover(rc)
    coarse = summed
    cover = identity_cover(summed)
    for p, q in glue_steps:
        coarse, step = glue_ports(coarse, cover.arc_map[p], cover.arc_map[q])
        cover = ReducedCover(compose_etale(cover.morphism, step.morphism))

    vertex_map = {
        name: frozenset(rc.vertex_map[u] for u in comp.vertices)
        for name, comp in comp_vertex.items()
    }
    ref_flag_map = {}
    arc_map = {}
    for name, comp in comp_vertex.items():
        for p in sorted(ports(comp)):
            # the flag of the source across p's edge, and its image below
            h_p = next(h for h in comp.flags if comp.embed[h] == src.involution[p])
            ref_flag_map[p + "*"] = FlaggedSubgraphRef(vertex_map[name], rc.flag_map[h_p])
            arc_map[cover.arc_map[p + "*"]] = rc.arc_map[src.embed[h_p]]
            arc_map[cover.arc_map[p]] = rc.arc_map[p]
    return Refinement(coarse, tgt, arc_map, vertex_map, ref_flag_map)


def pushout_gen_rc(gen: Refinement, rc: ReducedCover) -> tuple[Refinement, ReducedCover]:
    """Push out a refinement gen: R -> S against a reduced cover
    rc: R -> R' sharing its source.  Returns (gen': R' -> S',
    rc': S -> S') closing the square; when rc is an identity the inputs
    come back unchanged."""
    if gen.source != rc.source:
        raise ValueError("pushout needs a refinement and a cover with a common source")
    steps = decompose_reduced_cover(rc)
    transported = [tuple(sorted((gen.arc_map[p], gen.arc_map[q]))) for p, q in steps]
    new_target, rc_out = replay_gluings(gen.target, transported)

    vmap_inv = {w: v for v, w in rc.vertex_map.items()}
    fmap_inv = {k: h for h, k in rc.flag_map.items()}
    vertex_map = {w: gen.vertex_map[vmap_inv[w]] for w in rc.target.vertices}
    flag_map = {
        k: FlaggedSubgraphRef(vertex_map[rc.target.incidence[k]], gen.flag_map[fmap_inv[k]].flag)
        for k in rc.target.flags
    }
    arc_map = {}
    for a in rc.source.arcs:
        arc_map[rc.arc_map[a]] = rc_out.arc_map[gen.arc_map[a]]
    gen_out = Refinement(rc.target, new_target, arc_map, vertex_map, flag_map)
    return gen_out, rc_out


@dataclass(frozen=True)
class KleisliMorphism:
    """A morphism presented by its generic/free factorisation: a
    refinement followed by an etale map out of the refined graph."""

    generic: Refinement
    free: EtaleMorphism

    @property
    def source(self) -> JKGraph:
        return self.generic.source

    @property
    def target(self) -> JKGraph:
        return self.free.target


def kleisli_morphism(generic: Refinement, free: EtaleMorphism) -> KleisliMorphism:
    if generic.target != free.source:
        raise ValueError("generic and free parts do not meet in the middle")
    return KleisliMorphism(generic, free)


def generic_free_parts(k: KleisliMorphism) -> tuple[Refinement, EtaleMorphism]:
    return k.generic, k.free


def generic_kleisli(r: Refinement) -> KleisliMorphism:
    return KleisliMorphism(r, identity_etale(r.target))


def free_kleisli(m: EtaleMorphism) -> KleisliMorphism:
    return KleisliMorphism(identity_refinement(m.source), m)


def is_generic(k: KleisliMorphism) -> bool:
    """Free part invertible: the morphism is a refinement in disguise."""
    m = k.free
    return (
        validate_etale(m).ok
        and len(m.vertex_map) == len(m.target.vertices)
        and len(set(m.vertex_map.values())) == len(m.vertex_map)
        and len(m.arc_map) == len(m.target.arcs)
        and len(set(m.arc_map.values())) == len(m.arc_map)
    )


def compose_cover_then_refinement(rc: ReducedCover, u: Refinement) -> KleisliMorphism:
    """The composite of the free morphism of a reduced cover rc: T -> R
    with a refinement u: R -> U, again in generic/free form: T is
    refined by the pieces of u pulled back along rc, and the glued
    result maps onto U."""
    if rc.target != u.source:
        raise ValueError("cover and refinement are not composable")
    src = rc.source
    assignment = {}
    u_cut_arcs: dict[str, str] = {}
    for x in sorted(src.vertices):
        v = rc.vertex_map[x]
        piece, bij, cut_cover = _piece_data(u, v)
        local_inv = {rc.arc_map[a]: a for a in local_interface(src, x)}
        assignment[x] = (piece, {q: local_inv[b] for q, b in bij.items()})
        for a, b in cut_cover.arc_map.items():
            u_cut_arcs[x + "." + a] = b
    refinement, glue_cover = _refine_with_cover(src, assignment)
    mid = refinement.target

    flag_map = {}
    vertex_map = {}
    for x in sorted(src.vertices):
        for w in assignment[x][0].vertices:
            vertex_map[x + "." + w] = w
        for h in assignment[x][0].flags:
            flag_map[x + "." + h] = h
    arc_map = {}
    for a, alpha in glue_cover.arc_map.items():
        b = u_cut_arcs[a]
        if arc_map.setdefault(alpha, b) != b:
            raise ValueError("gluing did not match the target's edges")
    free = EtaleMorphism(mid, u.target, arc_map, flag_map, vertex_map)
    return KleisliMorphism(refinement, free)


def kleisli_equal(k1: KleisliMorphism, k2: KleisliMorphism) -> bool:
    """Equality of generic/free presentations: same endpoints, and an
    isomorphism of middles commuting with both parts."""
    if k1.source != k2.source or k1.target != k2.target:
        return False
    for iso in find_isomorphisms(k1.generic.target, k2.generic.target):
        if transport_refinement(k1.generic, iso, k2.generic.target) != k2.generic:
            continue
        mid_iso = iso_etale(k1.generic.target, k2.generic.target, iso)
        if compose_etale(mid_iso, k2.free) == k1.free:
            return True
    return False
