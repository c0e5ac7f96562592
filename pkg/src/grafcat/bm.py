"""Graphs encoded as vertex/flag structures, and their morphisms.

Here a graph is a quadruple (V, F, boundary, involution): flags are
half-edges attached to vertices by the boundary map, and the involution
j: F -> F pairs flags into edges.  Fixpoints of j are tails (open ends);
free orbits are edges.

A morphism tau -> rho runs covariantly on vertices and contravariantly
on flags: it is a triple

    flag_map:    F_rho -> F_tau   injective,
    vertex_map:  V_tau -> V_rho   surjective,
    virtual_involution:  a fixpoint-free involution on the flags of tau
                         missed by flag_map.

Flags outside the image are contracted; the virtual involution groups
them into contracted edges, reusing the actual pairing where one exists
and pairing leftover tails among themselves.  Such a pair of paired
tails is a virtual edge: an edge that exists only in the eyes of the
morphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph_core import ValidationReport, _UnionFind


@dataclass(frozen=True)
class BMGraph:
    """A vertex/flag graph: boundary F -> V, involution j: F -> F."""

    vertices: frozenset[str]
    flags: frozenset[str]
    boundary: dict[str, str]
    involution: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "flags", frozenset(self.flags))
        object.__setattr__(self, "boundary", dict(self.boundary))
        object.__setattr__(self, "involution", dict(self.involution))

    def flags_at(self, v: str) -> list[str]:
        return sorted(f for f in self.flags if self.boundary[f] == v)


EMPTY_BM = BMGraph(frozenset(), frozenset(), {}, {})


def validate_bm_graph(g: BMGraph) -> ValidationReport:
    problems = []
    if set(g.boundary) != set(g.flags):
        problems.append("boundary-domain: boundary must be defined on exactly the flags")
    else:
        for f in sorted(g.flags):
            if g.boundary[f] not in g.vertices:
                problems.append(f"boundary-image: boundary of {f!r} is not a vertex")
    if set(g.involution) != set(g.flags):
        problems.append("involution-domain: involution must be defined on exactly the flags")
    else:
        for f in sorted(g.flags):
            t = g.involution[f]
            if t not in g.flags:
                problems.append(f"involution-image: j({f!r}) = {t!r} is not a flag")
            elif g.involution[t] != f:
                problems.append(f"involution: j(j({f!r})) != {f!r}")
    return ValidationReport(tuple(problems))


def bm_tails(g: BMGraph) -> set[str]:
    return {f for f in g.flags if g.involution[f] == f}


def bm_edges(g: BMGraph) -> set[frozenset[str]]:
    return {frozenset((f, g.involution[f])) for f in g.flags if g.involution[f] != f}


def bm_point() -> BMGraph:
    return BMGraph({"v"}, set(), {}, {})


def bm_corolla(n: int) -> BMGraph:
    flags = [str(i) for i in range(1, n + 1)]
    return BMGraph({"v"}, set(flags), {f: "v" for f in flags}, {f: f for f in flags})


@dataclass(frozen=True)
class BMMorphism:
    """A morphism of vertex/flag graphs; see the module docstring.

    flag_map sends each flag of the target to the source flag it comes
    from; virtual_involution pairs up the source flags outside its image.
    """

    source: BMGraph
    target: BMGraph
    flag_map: dict[str, str]
    vertex_map: dict[str, str]
    virtual_involution: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flag_map", dict(self.flag_map))
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        object.__setattr__(self, "virtual_involution", dict(self.virtual_involution))

    def contracted_flags(self) -> set[str]:
        """Source flags missed by the flag map."""
        return set(self.source.flags) - set(self.flag_map.values())


def contracted_pairs(m: BMMorphism) -> set[frozenset[str]]:
    """The contracted edges: orbits of the virtual involution (actual
    edges of the source where both halves survive in it)."""
    return {frozenset((f, t)) for f, t in m.virtual_involution.items()}


def validate_bm_morphism(m: BMMorphism) -> ValidationReport:
    problems = []
    for rep, name in (
        (validate_bm_graph(m.source), "source"),
        (validate_bm_graph(m.target), "target"),
    ):
        if not rep.ok:
            problems.append(f"{name}-invalid: " + "; ".join(rep.problems))
    if problems:
        return ValidationReport(tuple(problems))
    src, tgt = m.source, m.target
    if set(m.flag_map) != set(tgt.flags) or not set(m.flag_map.values()) <= set(src.flags):
        problems.append("flag-map: not a total map from target flags to source flags")
    if set(m.vertex_map) != set(src.vertices) or not set(m.vertex_map.values()) <= set(
        tgt.vertices
    ):
        problems.append("vertex-map: not a total map from source vertices to target vertices")
    if problems:
        return ValidationReport(tuple(problems))
    image = set(m.flag_map.values())
    if len(image) != len(m.flag_map):
        problems.append("flag-injective: flag map identifies two target flags")
    if set(m.vertex_map.values()) != set(tgt.vertices):
        problems.append("vertex-surjective: some target vertex has empty fibre")
    for f in sorted(image):
        if src.involution[f] not in image and src.involution[f] != f:
            problems.append(f"image-closed: {f!r} is hit but its partner is not")
    comp = set(src.flags) - image
    vi = m.virtual_involution
    if set(vi) != comp:
        problems.append(
            "virtual-involution: must be defined on exactly the flags outside the image"
        )
    else:
        for f in sorted(comp):
            t = vi[f]
            if t not in comp or vi.get(t) != f:
                problems.append(f"virtual-involution: not an involution of the complement at {f!r}")
            elif t == f:
                problems.append(f"virtual-involution: fixes {f!r}")
            elif src.involution[f] != f and src.involution[f] != t:
                problems.append(
                    f"virtual-matches-actual: {f!r} is half of an actual edge but is "
                    "virtually paired elsewhere"
                )
    if problems:
        return ValidationReport(tuple(problems))
    inv = {f: x for x, f in m.flag_map.items()}
    for x in sorted(tgt.flags):
        if m.vertex_map[src.boundary[m.flag_map[x]]] != tgt.boundary[x]:
            problems.append(f"boundary: boundaries disagree at target flag {x!r}")
    for pair in sorted(contracted_pairs(m), key=sorted):
        f, t = sorted(pair)
        if m.vertex_map[src.boundary[f]] != m.vertex_map[src.boundary[t]]:
            problems.append(
                f"contracted-ends: contracted pair ({f!r}, {t!r}) straddles two target vertices"
            )
    for f in sorted(image):
        t = src.involution[f]
        if t != f and t in image and tgt.involution[inv[f]] != inv[t]:
            problems.append(f"edge-pullback: source edge ({f!r}, {t!r}) does not pull back")
    return ValidationReport(tuple(problems))


def bm_identity(g: BMGraph) -> BMMorphism:
    return BMMorphism(
        g, g, {f: f for f in g.flags}, {v: v for v in g.vertices}, {}
    )


def compose_bm(m1: BMMorphism, m2: BMMorphism) -> BMMorphism:
    """The composite of m1: tau -> sigma and m2: sigma -> rho.

    Vertices compose forward, flags backward; the composite misses the
    flags m1 misses plus the m1-images of the flags m2 misses, and its
    virtual involution is m1's on the former and m2's transported along
    m1's flag map on the latter.
    """
    if m1.target != m2.source:
        raise ValueError("morphisms are not composable: middle graphs differ")
    flag_map = {x: m1.flag_map[m2.flag_map[x]] for x in m2.flag_map}
    vertex_map = {v: m2.vertex_map[m1.vertex_map[v]] for v in m1.vertex_map}
    virtual = dict(m1.virtual_involution)
    for f, t in m2.virtual_involution.items():
        virtual[m1.flag_map[f]] = m1.flag_map[t]
    return BMMorphism(m1.source, m2.target, flag_map, vertex_map, virtual)


@dataclass(frozen=True)
class BMClassification:
    """Which of the distinguished morphism classes a morphism lands in."""

    is_isomorphism: bool
    is_grafting: bool
    is_compression: bool
    is_contraction: bool
    is_merger: bool


def classify_bm(m: BMMorphism) -> BMClassification:
    """Classify a (valid) morphism.

    grafting: bijective on flags and vertices (only the pairing grows);
    compression: restricts to a bijection of tails;
    contraction: a compression whose vertex fibres are connected by
        contracted edges;
    merger: a compression under which edges correspond to edges;
    isomorphism: a grafting that is also a compression.
    """
    src, tgt = m.source, m.target
    grafting = len(m.flag_map) == len(src.flags) and len(
        set(m.vertex_map.values())
    ) == len(src.vertices)
    src_tails = bm_tails(src)
    tgt_tails = bm_tails(tgt)
    compression = {m.flag_map[x] for x in tgt_tails} == src_tails
    contraction = compression and _fibres_connected(m)
    merger = compression and _edges_onto(m)
    return BMClassification(
        is_isomorphism=grafting and compression,
        is_grafting=grafting,
        is_compression=compression,
        is_contraction=contraction,
        is_merger=merger,
    )


def _fibres_connected(m: BMMorphism) -> bool:
    src = m.source
    if not src.vertices:
        return True
    uf = _UnionFind(src.vertices)
    for pair in contracted_pairs(m):
        f, t = tuple(pair)
        uf.union(src.boundary[f], src.boundary[t])
    fibre_root: dict[str, str] = {}
    for v in sorted(src.vertices):
        w = m.vertex_map[v]
        r = uf.find(v)
        if fibre_root.setdefault(w, r) != r:
            return False
    return True


def _edges_onto(m: BMMorphism) -> bool:
    src, tgt = m.source, m.target
    hit = set()
    for e in bm_edges(tgt):
        x, y = tuple(e)
        f, t = m.flag_map[x], m.flag_map[y]
        if src.involution[f] != t:
            return False  # a target edge made of source tails
        hit.add(frozenset((f, t)))
    return hit == bm_edges(src)


def is_bm_isomorphism(m: BMMorphism) -> bool:
    c = classify_bm(m)
    return c.is_isomorphism


def ghost_graph(m: BMMorphism) -> BMGraph:
    """The intermediate graph of the grafting/compression factorisation:
    the source's vertices and flags, re-paired so that the pairing of the
    target is pulled back across the image and the virtual edges become
    actual."""
    src, tgt = m.source, m.target
    involution = {}
    for x in tgt.flags:
        involution[m.flag_map[x]] = m.flag_map[tgt.involution[x]]
    involution.update(m.virtual_involution)
    return BMGraph(src.vertices, src.flags, dict(src.boundary), involution)


def factorise_bm(m: BMMorphism) -> tuple[BMGraph, BMMorphism, BMMorphism]:
    """Split m into a grafting followed by a compression through its
    ghost graph.  The two parts compose back to m on the nose."""
    mid = ghost_graph(m)
    graft = BMMorphism(
        m.source,
        mid,
        {f: f for f in m.source.flags},
        {v: v for v in m.source.vertices},
        {},
    )
    compress = BMMorphism(
        mid, m.target, dict(m.flag_map), dict(m.vertex_map), dict(m.virtual_involution)
    )
    return mid, graft, compress


def commute_bm(m1: BMMorphism, m2: BMMorphism) -> tuple[BMGraph, BMMorphism, BMMorphism]:
    """Rewrite a compression followed by a grafting as a grafting
    followed by a compression (with the same composite)."""
    if not classify_bm(m1).is_compression:
        raise ValueError("first morphism must be a compression")
    if not classify_bm(m2).is_grafting:
        raise ValueError("second morphism must be a grafting")
    return factorise_bm(compose_bm(m1, m2))


def _bm_vertex_signature(g: BMGraph, v: str) -> tuple[int, int, int]:
    flags = g.flags_at(v)
    tails = sum(1 for f in flags if g.involution[f] == f)
    loops = sum(1 for f in flags if g.involution[f] != f and g.boundary[g.involution[f]] == v)
    return (len(flags), tails, loops)


def find_bm_isomorphisms(g1: BMGraph, g2: BMGraph) -> list[BMMorphism]:
    """All isomorphisms g1 -> g2, as morphism triples."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.flags) != len(g2.flags):
        return []
    sig1 = {v: _bm_vertex_signature(g1, v) for v in g1.vertices}
    sig2 = {v: _bm_vertex_signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return []
    vs1 = sorted(g1.vertices)
    found = []
    for ws in itertools.permutations(sorted(g2.vertices)):
        if any(sig1[v] != sig2[w] for v, w in zip(vs1, ws)):
            continue
        vmap = dict(zip(vs1, ws))
        per_vertex = []
        for v in vs1:
            fs1 = g1.flags_at(v)
            fs2 = g2.flags_at(vmap[v])
            per_vertex.append([list(zip(fs1, perm)) for perm in itertools.permutations(fs2)])
        for choice in itertools.product(*per_vertex):
            fmap = {f: x for pairs in choice for f, x in pairs}
            if all(fmap[g1.involution[f]] == g2.involution[fmap[f]] for f in fmap):
                inverse = {x: f for f, x in fmap.items()}
                found.append(BMMorphism(g1, g2, inverse, vmap, {}))
    return found


def is_bm_isomorphic(g1: BMGraph, g2: BMGraph) -> bool:
    return bool(find_bm_isomorphisms(g1, g2))
