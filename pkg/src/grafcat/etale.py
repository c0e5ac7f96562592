"""Etale maps between arc/flag/vertex graphs, and reduced covers.

An etale map is a levelwise map of diagrams whose arc component commutes
with the involutions and whose flag/vertex square is a pullback: around
every vertex of the source it restricts to a valence-preserving bijection
of flags.  Reduced covers are the etale maps that are jointly surjective
on edges and vertices and bijective on vertices; they are exactly the
quotient maps that glue ports together in pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph_core import (
    JKGraph,
    ValidationReport,
    edges,
    embed_image,
    inner_edges,
    isolated_edges,
    ports,
    validate_graph,
)


@dataclass(frozen=True)
class EtaleMorphism:
    """Levelwise maps from source to target."""

    source: JKGraph
    target: JKGraph
    arc_map: dict[str, str]
    flag_map: dict[str, str]
    vertex_map: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "arc_map", dict(self.arc_map))
        object.__setattr__(self, "flag_map", dict(self.flag_map))
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))


def validate_etale(m: EtaleMorphism) -> ValidationReport:
    """Check the etale clauses; the report lists each violated one."""
    problems = []
    for rep, name in ((validate_graph(m.source), "source"), (validate_graph(m.target), "target")):
        if not rep.ok:
            problems.append(f"{name}-invalid: " + "; ".join(rep.problems))
    if problems:
        return ValidationReport(tuple(problems))
    src, tgt = m.source, m.target
    if set(m.arc_map) != set(src.arcs) or not set(m.arc_map.values()) <= set(tgt.arcs):
        problems.append("arc-map: not a total map from source arcs to target arcs")
    if set(m.flag_map) != set(src.flags) or not set(m.flag_map.values()) <= set(tgt.flags):
        problems.append("flag-map: not a total map from source flags to target flags")
    if set(m.vertex_map) != set(src.vertices) or not set(m.vertex_map.values()) <= set(tgt.vertices):
        problems.append("vertex-map: not a total map from source vertices to target vertices")
    if problems:
        return ValidationReport(tuple(problems))
    for a in sorted(src.arcs):
        if m.arc_map[src.involution[a]] != tgt.involution[m.arc_map[a]]:
            problems.append(f"involution: arc map does not commute with involutions at {a!r}")
    for h in sorted(src.flags):
        if m.arc_map[src.embed[h]] != tgt.embed[m.flag_map[h]]:
            problems.append(f"left-square: embed squares do not commute at flag {h!r}")
        if m.vertex_map[src.incidence[h]] != tgt.incidence[m.flag_map[h]]:
            problems.append(f"right-square: incidence squares do not commute at flag {h!r}")
    for v in sorted(src.vertices):
        image = [m.flag_map[h] for h in src.flags_at(v)]
        expected = tgt.flags_at(m.vertex_map[v])
        if sorted(image) != expected:
            problems.append(
                f"pullback: flags at {v!r} do not map bijectively onto flags at {m.vertex_map[v]!r}"
            )
    return ValidationReport(tuple(problems))


def identity_etale(g: JKGraph) -> EtaleMorphism:
    return EtaleMorphism(
        g, g, {a: a for a in g.arcs}, {h: h for h in g.flags}, {v: v for v in g.vertices}
    )


def iso_etale(source: JKGraph, target: JKGraph, iso) -> EtaleMorphism:
    """An isomorphism (a GraphIso or anything with the three maps),
    repackaged as an etale morphism."""
    return EtaleMorphism(
        source, target, dict(iso.arc_map), dict(iso.flag_map), dict(iso.vertex_map)
    )


def compose_etale(m1: EtaleMorphism, m2: EtaleMorphism) -> EtaleMorphism:
    """The composite m2 after m1 (m1 first)."""
    if m1.target != m2.source:
        raise ValueError("etale maps are not composable: middle graphs differ")
    return EtaleMorphism(
        m1.source,
        m2.target,
        {a: m2.arc_map[b] for a, b in m1.arc_map.items()},
        {h: m2.flag_map[k] for h, k in m1.flag_map.items()},
        {v: m2.vertex_map[w] for v, w in m1.vertex_map.items()},
    )


def is_injective_etale(m: EtaleMorphism) -> bool:
    return (
        len(set(m.arc_map.values())) == len(m.arc_map)
        and len(set(m.flag_map.values())) == len(m.flag_map)
        and len(set(m.vertex_map.values())) == len(m.vertex_map)
    )


def open_subgraph(g: JKGraph, vertex_set) -> tuple[JKGraph, EtaleMorphism]:
    """The open subgraph spanned by a nonempty vertex subset, with its
    inclusion.  The inclusion is etale and levelwise injective."""
    W = set(vertex_set)
    if not W:
        raise ValueError("empty vertex set spans no effective subgraph")
    if not W <= set(g.vertices):
        raise ValueError(f"not a vertex subset: {sorted(W - set(g.vertices))}")
    flags = {h for h in g.flags if g.incidence[h] in W}
    arcs = set()
    for h in flags:
        a = g.embed[h]
        arcs.add(a)
        arcs.add(g.involution[a])
    sub = JKGraph(
        arcs,
        flags,
        W,
        {a: g.involution[a] for a in arcs},
        {h: g.embed[h] for h in flags},
        {h: g.incidence[h] for h in flags},
    )
    incl = EtaleMorphism(
        sub, g, {a: a for a in arcs}, {h: h for h in flags}, {v: v for v in W}
    )
    return sub, incl


@dataclass(frozen=True)
class ReducedCover:
    """A covering etale map that is bijective on vertices."""

    morphism: EtaleMorphism

    @property
    def source(self) -> JKGraph:
        return self.morphism.source

    @property
    def target(self) -> JKGraph:
        return self.morphism.target

    @property
    def arc_map(self) -> dict[str, str]:
        return self.morphism.arc_map

    @property
    def flag_map(self) -> dict[str, str]:
        return self.morphism.flag_map

    @property
    def vertex_map(self) -> dict[str, str]:
        return self.morphism.vertex_map


def is_covering_family(ms: list[EtaleMorphism]) -> bool:
    """Jointly surjective on edges and on vertices (common target)."""
    if not ms:
        return False
    tgt = ms[0].target
    if any(m.target != tgt for m in ms):
        raise ValueError("covering family members must share a target")
    hit_vertices = {w for m in ms for w in m.vertex_map.values()}
    hit_edges = set()
    for m in ms:
        for e in edges(m.source):
            hit_edges.add(frozenset(m.arc_map[a] for a in e))
    return hit_vertices == set(tgt.vertices) and hit_edges == edges(tgt)


def validate_reduced_cover(rc: ReducedCover) -> ValidationReport:
    problems = list(validate_etale(rc.morphism).problems)
    if problems:
        return ValidationReport(tuple(problems))
    if isolated_edges(rc.source) or isolated_edges(rc.target):
        problems.append("isolated-edges: reduced covers live between graphs without isolated edges")
    if not is_covering_family([rc.morphism]):
        problems.append("covering: not jointly surjective on edges and vertices")
    vm = rc.morphism.vertex_map
    if len(set(vm.values())) != len(vm):
        problems.append("reduced: vertex map is not injective")
    return ValidationReport(tuple(problems))


def is_reduced_cover(m: EtaleMorphism) -> bool:
    return validate_reduced_cover(ReducedCover(m)).ok


def reduced_cover(m: EtaleMorphism) -> ReducedCover:
    rc = ReducedCover(m)
    rep = validate_reduced_cover(rc)
    if not rep.ok:
        raise ValueError("not a reduced cover: " + "; ".join(rep.problems))
    return rc


def identity_cover(g: JKGraph) -> ReducedCover:
    return ReducedCover(identity_etale(g))


def compose_covers(c1: ReducedCover, c2: ReducedCover) -> ReducedCover:
    return ReducedCover(compose_etale(c1.morphism, c2.morphism))


def glue_ports(g: JKGraph, a: str, b: str) -> tuple[JKGraph, ReducedCover]:
    """Identify ports a and b, merging their edges into one inner edge.

    The two new arc classes are {a, i(b)} and {i(a), b}, each named by
    its lexicographically least member.  The quotient map is a reduced
    cover.
    """
    im = embed_image(g)
    for x in (a, b):
        if x not in g.arcs or x in im:
            raise ValueError(f"not a port: {x!r}")
    ia, ib = g.involution[a], g.involution[b]
    if b in (a, ia):
        raise ValueError("ports must lie on two distinct edges")
    for x, px in ((a, ia), (b, ib)):
        if px not in im:
            raise ValueError(f"port {x!r} lies on an isolated edge")
    rename = {a: min(a, ib), ib: min(a, ib), ia: min(ia, b), b: min(ia, b)}
    ra = lambda x: rename.get(x, x)
    arcs = {ra(x) for x in g.arcs}
    involution = {ra(x): ra(y) for x, y in g.involution.items()}
    quotient = JKGraph(
        arcs,
        g.flags,
        g.vertices,
        involution,
        {h: ra(x) for h, x in g.embed.items()},
        dict(g.incidence),
    )
    q = EtaleMorphism(
        g,
        quotient,
        {x: ra(x) for x in g.arcs},
        {h: h for h in g.flags},
        {v: v for v in g.vertices},
    )
    return quotient, ReducedCover(q)


def decompose_reduced_cover(rc: ReducedCover) -> list[tuple[str, str]]:
    """The port gluings that rebuild the cover, one per target inner edge
    hit twice, ordered by the edge's sorted arc labels.  Replaying
    glue_ports over the list reconstructs the cover up to isomorphism of
    the target."""
    m = rc.morphism
    src, tgt = m.source, m.target
    flag_of_arc_t = {a: h for h, a in tgt.embed.items()}
    preimage_flag = {m.flag_map[h]: h for h in src.flags}
    steps = []
    for e in sorted(inner_edges(tgt), key=lambda e: tuple(sorted(e))):
        y1, y2 = sorted(e)
        h1 = preimage_flag[flag_of_arc_t[y1]]
        h2 = preimage_flag[flag_of_arc_t[y2]]
        a1, a2 = src.embed[h1], src.embed[h2]
        if src.involution[a1] == a2:
            continue  # hit by a single source edge
        steps.append(tuple(sorted((src.involution[a1], src.involution[a2]))))
    return steps


def replay_gluings(g: JKGraph, steps: list[tuple[str, str]]) -> tuple[JKGraph, ReducedCover]:
    """Apply a sequence of port gluings, composing the quotient maps."""
    current = g
    cover = identity_cover(g)
    for p, q in steps:
        current, step = glue_ports(current, cover.arc_map[p], cover.arc_map[q])
        cover = compose_covers(cover, step)
    return current, cover


def _fresh(label: str, used: set[str]) -> str:
    candidate = label + "^"
    while candidate in used:
        candidate += "^"
    return candidate


def cut_edges(g: JKGraph, cut: set[frozenset[str]]) -> tuple[JKGraph, ReducedCover]:
    """Sever the given inner edges of g into pairs of ports; the map
    back to g is a reduced cover hitting each cut edge twice."""
    inner = inner_edges(g)
    for e in cut:
        if e not in inner:
            raise ValueError(f"not an inner edge: {tuple(sorted(e))}")
    used = set(g.arcs)
    involution = dict(g.involution)
    arcs = set(g.arcs)
    arc_map = {x: x for x in g.arcs}
    for e in sorted(cut, key=lambda e: tuple(sorted(e))):
        a1, a2 = sorted(e)
        c1 = _fresh(a1, used)
        used.add(c1)
        c2 = _fresh(a2, used)
        used.add(c2)
        arcs |= {c1, c2}
        involution[a1] = c1
        involution[c1] = a1
        involution[a2] = c2
        involution[c2] = a2
        arc_map[c1] = a2
        arc_map[c2] = a1
    source = JKGraph(arcs, g.flags, g.vertices, involution, dict(g.embed), dict(g.incidence))
    m = EtaleMorphism(
        source, g, arc_map, {h: h for h in g.flags}, {v: v for v in g.vertices}
    )
    return source, ReducedCover(m)


def reduced_covers_of(x: JKGraph) -> list[ReducedCover]:
    """All reduced covers of x up to isomorphism, one per subset of its
    inner edges; they form a boolean lattice of size 2^(number of inner
    edges)."""
    if not validate_graph(x).ok:
        raise ValueError("invalid graph")
    if isolated_edges(x):
        raise ValueError("reduced covers are only formed over graphs without isolated edges")
    inner = sorted(inner_edges(x), key=lambda e: tuple(sorted(e)))
    covers = []
    for r in range(len(inner) + 1):
        for combo in itertools.combinations(inner, r):
            covers.append(cut_edges(x, set(combo))[1])
    return covers
