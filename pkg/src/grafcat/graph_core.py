"""Graphs with open-ended edges, encoded as arc/flag/vertex diagrams.

A graph is a diagram of finite sets

    A <--s-- H --p--> V

where A is a set of arcs carrying a fixpoint-free involution i, H is a
set of flags (half-edges attached to vertices), V is a set of vertices,
s is injective and p is arbitrary.  An edge is an involution orbit
{a, i(a)}.  An arc in the image of s points away from the vertex of its
flag; arcs outside the image of s are ports (open ends).  An edge with
both arcs in the image of s is inner, an edge with neither arc in the
image is isolated.

All identifiers are opaque strings and all maps are explicit finite
dicts.  Values are treated as immutable after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural validation: empty problem list means valid."""

    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


class LevelMaps(NamedTuple):
    """A levelwise assignment of arcs, flags and vertices (three dicts)."""

    arc_map: dict[str, str]
    flag_map: dict[str, str]
    vertex_map: dict[str, str]


@dataclass(frozen=True)
class JKGraph:
    """An arc/flag/vertex diagram.

    involution: A -> A, embed: H -> A (the map s), incidence: H -> V
    (the map p).
    """

    arcs: frozenset[str]
    flags: frozenset[str]
    vertices: frozenset[str]
    involution: dict[str, str]
    embed: dict[str, str]
    incidence: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        object.__setattr__(self, "flags", frozenset(self.flags))
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "involution", dict(self.involution))
        object.__setattr__(self, "embed", dict(self.embed))
        object.__setattr__(self, "incidence", dict(self.incidence))

    def flags_at(self, v: str) -> list[str]:
        return sorted(h for h in self.flags if self.incidence[h] == v)

    def valence(self, v: str) -> int:
        return sum(1 for h in self.flags if self.incidence[h] == v)


EMPTY_GRAPH = JKGraph(frozenset(), frozenset(), frozenset(), {}, {}, {})


def validate_graph(g: JKGraph) -> ValidationReport:
    """Check the diagram clauses; the report lists each violated one."""
    problems = []
    if set(g.involution) != set(g.arcs):
        problems.append("involution-domain: involution must be defined on exactly the arcs")
    else:
        for a in sorted(g.arcs):
            b = g.involution[a]
            if b not in g.arcs:
                problems.append(f"involution-image: i({a!r}) = {b!r} is not an arc")
            elif g.involution[b] != a:
                problems.append(f"involution: i(i({a!r})) != {a!r}")
            elif b == a:
                problems.append(f"fixpoint-free: involution fixes arc {a!r}")
    if set(g.embed) != set(g.flags):
        problems.append("embed-domain: embed must be defined on exactly the flags")
    else:
        seen: dict[str, str] = {}
        for h in sorted(g.flags):
            a = g.embed[h]
            if a not in g.arcs:
                problems.append(f"embed-image: s({h!r}) = {a!r} is not an arc")
            elif a in seen:
                problems.append(f"s injective: flags {seen[a]!r} and {h!r} share arc {a!r}")
            else:
                seen[a] = h
    if set(g.incidence) != set(g.flags):
        problems.append("incidence-domain: incidence must be defined on exactly the flags")
    else:
        for h in sorted(g.flags):
            if g.incidence[h] not in g.vertices:
                problems.append(f"incidence-image: p({h!r}) is not a vertex")
    return ValidationReport(tuple(problems))


def embed_image(g: JKGraph) -> set[str]:
    return set(g.embed.values())


def edges(g: JKGraph) -> set[frozenset[str]]:
    """The involution orbits, as unordered arc pairs."""
    return {frozenset((a, g.involution[a])) for a in g.arcs}


def inner_edges(g: JKGraph) -> set[frozenset[str]]:
    im = embed_image(g)
    return {e for e in edges(g) if all(a in im for a in e)}


def ports(g: JKGraph) -> set[str]:
    im = embed_image(g)
    return {a for a in g.arcs if a not in im}


def isolated_edges(g: JKGraph) -> set[frozenset[str]]:
    im = embed_image(g)
    return {e for e in edges(g) if all(a not in im for a in e)}


def local_interface(g: JKGraph, v: str) -> set[str]:
    """The arcs pointing toward v, one for each flag at v."""
    if v not in g.vertices:
        raise ValueError(f"unknown vertex {v!r}")
    return {g.involution[g.embed[h]] for h in g.flags if g.incidence[h] == v}


def is_effective(g: JKGraph) -> bool:
    """Nonempty and without isolated edges."""
    nonempty = bool(g.arcs or g.vertices)
    return nonempty and not isolated_edges(g)


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller representative for determinism
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def components(g: JKGraph) -> list[JKGraph]:
    """Connected components, sorted by their least vertex or arc label."""
    edge_keys = {e: tuple(sorted(e)) for e in edges(g)}
    nodes = [("v", v) for v in g.vertices] + [("e", k) for k in edge_keys.values()]
    uf = _UnionFind(nodes)
    arc_edge = {a: edge_keys[frozenset((a, g.involution[a]))] for a in g.arcs}
    for h in g.flags:
        uf.union(("v", g.incidence[h]), ("e", arc_edge[g.embed[h]]))
    groups: dict[tuple, list] = {}
    for node in nodes:
        groups.setdefault(uf.find(node), []).append(node)
    comps = []
    for group in groups.values():
        vs = {x for kind, x in group if kind == "v"}
        eks = [x for kind, x in group if kind == "e"]
        arcs = {a for k in eks for a in k}
        flags = {h for h in g.flags if g.incidence[h] in vs}
        comps.append(
            JKGraph(
                arcs,
                flags,
                vs,
                {a: g.involution[a] for a in arcs},
                {h: g.embed[h] for h in flags},
                {h: g.incidence[h] for h in flags},
            )
        )
    comps.sort(key=lambda c: min(itertools.chain(sorted(c.vertices), sorted(c.arcs)), default=""))
    return comps


def is_connected(g: JKGraph) -> bool:
    return (bool(g.arcs) or bool(g.vertices)) and len(components(g)) == 1


def unit_graph() -> JKGraph:
    """The graph with one edge and nothing else (two swapped arcs)."""
    return JKGraph({"a1", "a2"}, set(), set(), {"a1": "a2", "a2": "a1"}, {}, {})


def corolla(n: int | Iterable[str]) -> JKGraph:
    """One vertex with the given ports; flag labels get a * suffix."""
    if isinstance(n, int):
        port_labels = [str(i) for i in range(1, n + 1)]
    else:
        port_labels = sorted(str(x) for x in n)
        if len(set(port_labels)) != len(port_labels):
            raise ValueError("duplicate port labels")
    flag_arcs = [p + "*" for p in port_labels]
    if set(port_labels) & set(flag_arcs):
        raise ValueError("port labels collide with their * companions")
    involution = {}
    for p, q in zip(port_labels, flag_arcs):
        involution[p] = q
        involution[q] = p
    return JKGraph(
        set(port_labels) | set(flag_arcs),
        set(flag_arcs),
        {"v"},
        involution,
        {q: q for q in flag_arcs},
        {q: "v" for q in flag_arcs},
    )


def is_elementary(g: JKGraph) -> bool:
    """Connected with no inner edges: a unit graph or a corolla."""
    return is_connected(g) and not inner_edges(g)


def relabel(
    g: JKGraph,
    arc_map: dict[str, str] | None = None,
    flag_map: dict[str, str] | None = None,
    vertex_map: dict[str, str] | None = None,
) -> JKGraph:
    """Apply bijective renamings to the three levels (identity if omitted)."""
    am = arc_map or {}
    fm = flag_map or {}
    vm = vertex_map or {}
    ra = lambda a: am.get(a, a)
    rf = lambda h: fm.get(h, h)
    rv = lambda v: vm.get(v, v)
    return JKGraph(
        {ra(a) for a in g.arcs},
        {rf(h) for h in g.flags},
        {rv(v) for v in g.vertices},
        {ra(a): ra(b) for a, b in g.involution.items()},
        {rf(h): ra(a) for h, a in g.embed.items()},
        {rf(h): rv(v) for h, v in g.incidence.items()},
    )


def prefix_graph(g: JKGraph, pfx: str) -> tuple[JKGraph, LevelMaps]:
    """Prepend pfx to every label; returns the copy and the renaming."""
    maps = LevelMaps(
        {a: pfx + a for a in g.arcs},
        {h: pfx + h for h in g.flags},
        {v: pfx + v for v in g.vertices},
    )
    return relabel(g, *maps), maps


def disjoint_union(g1: JKGraph, g2: JKGraph) -> tuple[JKGraph, LevelMaps, LevelMaps]:
    """Sum of two graphs; labels get L. and R. prefixes.

    Returns the sum together with the two levelwise inclusions, which
    are etale and levelwise injective.
    """
    left, lm = prefix_graph(g1, "L.")
    right, rm = prefix_graph(g2, "R.")
    total = JKGraph(
        left.arcs | right.arcs,
        left.flags | right.flags,
        left.vertices | right.vertices,
        {**left.involution, **right.involution},
        {**left.embed, **right.embed},
        {**left.incidence, **right.incidence},
    )
    return total, lm, rm


@dataclass(frozen=True)
class GluingRecipe:
    """How a graph is glued from corollas and unit edges.

    vertex_elements maps each vertex to its spanned corolla-shaped
    subgraph, edge_elements maps each edge key (sorted arc pair) to a
    unit-shaped graph, and incidences records, for every arc in the
    embed image, which vertex element absorbs that side of the edge.
    """

    vertex_elements: dict[str, JKGraph]
    edge_elements: dict[tuple[str, str], JKGraph]
    incidences: tuple[tuple[tuple[str, str], str, str], ...]


def elements(g: JKGraph) -> GluingRecipe:
    """Decompose g into its vertex and edge elements."""
    vertex_elements = {}
    for v in sorted(g.vertices):
        flags = {h for h in g.flags if g.incidence[h] == v}
        arcs = set()
        for h in flags:
            a = g.embed[h]
            arcs.add(a)
            arcs.add(g.involution[a])
        vertex_elements[v] = JKGraph(
            arcs,
            flags,
            {v},
            {a: g.involution[a] for a in arcs},
            {h: g.embed[h] for h in flags},
            {h: v for h in flags},
        )
    edge_elements = {}
    for e in edges(g):
        key = tuple(sorted(e))
        a, b = key
        edge_elements[key] = JKGraph({a, b}, set(), set(), {a: b, b: a}, {}, {})
    incidences = []
    for h in sorted(g.flags):
        a = g.embed[h]
        key = tuple(sorted((a, g.involution[a])))
        incidences.append((key, a, g.incidence[h]))
    incidences.sort()
    return GluingRecipe(vertex_elements, edge_elements, tuple(incidences))


def recompose_elements(recipe: GluingRecipe) -> JKGraph:
    """Glue the recipe back together; the result is isomorphic to the
    original graph (with namespaced labels)."""
    pieces: dict[str, JKGraph] = {}
    for v, elem in recipe.vertex_elements.items():
        pieces[f"V[{v}]"], _ = prefix_graph(elem, f"V[{v}].")
    for key, elem in recipe.edge_elements.items():
        name = f"E[{key[0]},{key[1]}]"
        pieces[name], _ = prefix_graph(elem, name + ".")
    all_arcs = {a for piece in pieces.values() for a in piece.arcs}
    uf = _UnionFind(all_arcs)
    for key, a, v in recipe.incidences:
        ename = f"E[{key[0]},{key[1]}]"
        b = key[0] if key[1] == a else key[1]
        uf.union(f"{ename}.{a}", f"V[{v}].{a}")
        uf.union(f"{ename}.{b}", f"V[{v}].{b}")
    cls = {a: uf.find(a) for a in all_arcs}
    arcs = set(cls.values())
    involution = {}
    embed = {}
    incidence = {}
    flags = set()
    vertices = set()
    for piece in pieces.values():
        vertices |= piece.vertices
        flags |= piece.flags
        for a, b in piece.involution.items():
            involution[cls[a]] = cls[b]
        for h, a in piece.embed.items():
            embed[h] = cls[a]
        incidence.update(piece.incidence)
    return JKGraph(arcs, flags, vertices, involution, embed, incidence)


@dataclass(frozen=True)
class GraphIso:
    """A levelwise bijection commuting with involution, embed and incidence."""

    arc_map: dict[str, str]
    flag_map: dict[str, str]
    vertex_map: dict[str, str]


def _vertex_signature(g: JKGraph, v: str, im: set[str]) -> tuple:
    n_port = 0
    n_loop = 0
    n_inner = 0
    for h in g.flags_at(v):
        partner = g.involution[g.embed[h]]
        if partner not in im:
            n_port += 1
        else:
            n_inner += 1
            h2 = next(k for k, a in g.embed.items() if a == partner)
            if g.incidence[h2] == v:
                n_loop += 1
    return (g.valence(v), n_port, n_inner, n_loop)


def _iso_gen(g1: JKGraph, g2: JKGraph) -> Iterator[GraphIso]:
    if (
        len(g1.arcs) != len(g2.arcs)
        or len(g1.flags) != len(g2.flags)
        or len(g1.vertices) != len(g2.vertices)
    ):
        return
    im1, im2 = embed_image(g1), embed_image(g2)
    iso1 = sorted(tuple(sorted(e)) for e in isolated_edges(g1))
    iso2 = sorted(tuple(sorted(e)) for e in isolated_edges(g2))
    if len(iso1) != len(iso2) or len(ports(g1)) != len(ports(g2)):
        return
    sig1 = {v: _vertex_signature(g1, v, im1) for v in g1.vertices}
    sig2 = {v: _vertex_signature(g2, v, im2) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return
    vs1 = sorted(g1.vertices)
    flag_of_arc1 = {a: h for h, a in g1.embed.items()}
    flag_of_arc2 = {a: h for h, a in g2.embed.items()}

    def extend_vertices(idx: int, vmap: dict[str, str], used: set[str]):
        if idx == len(vs1):
            yield from extend_flags(0, vmap, {}, {})
            return
        v = vs1[idx]
        for w in sorted(g2.vertices - used):
            if sig1[v] == sig2[w]:
                vmap[v] = w
                used.add(w)
                yield from extend_vertices(idx + 1, vmap, used)
                used.discard(w)
                del vmap[v]

    def undo(changes, fmap, amap):
        for kind, key in changes:
            if kind == "f":
                del fmap[key]
            else:
                del amap[key]

    def assign_flag(h: str, h2: str, vmap, fmap, amap) -> list[tuple] | None:
        """Try fmap[h] = h2, recording changes; None on inconsistency."""
        changes = [("f", h)]
        fmap[h] = h2

        def fail():
            undo(changes, fmap, amap)
            return None

        a, a2 = g1.embed[h], g2.embed[h2]
        for x, y in ((a, a2), (g1.involution[a], g2.involution[a2])):
            if x in amap:
                if amap[x] != y:
                    return fail()
            else:
                if y in amap.values():
                    return fail()
                amap[x] = y
                changes.append(("a", x))
        pa, pa2 = g1.involution[a], g2.involution[a2]
        if (pa in im1) != (pa2 in im2):
            return fail()
        if pa in im1:
            k1, k2 = flag_of_arc1[pa], flag_of_arc2[pa2]
            if k1 in fmap and fmap[k1] != k2:
                return fail()
            if vmap[g1.incidence[k1]] != g2.incidence[k2]:
                return fail()
        return changes

    hs1 = sorted(g1.flags, key=lambda h: (g1.incidence[h], h))

    def extend_flags(idx: int, vmap, fmap, amap):
        if idx == len(hs1):
            yield from extend_isolated(0, vmap, fmap, dict(amap))
            return
        h = hs1[idx]
        if h in fmap:
            yield from extend_flags(idx + 1, vmap, fmap, amap)
            return
        target_v = vmap[g1.incidence[h]]
        for h2 in g2.flags_at(target_v):
            if h2 in fmap.values():
                continue
            changes = assign_flag(h, h2, vmap, fmap, amap)
            if changes is not None:
                yield from extend_flags(idx + 1, vmap, fmap, amap)
                undo(changes, fmap, amap)

    def extend_isolated(idx: int, vmap, fmap, amap):
        if idx == len(iso1):
            yield GraphIso(dict(amap), dict(fmap), dict(vmap))
            return
        x, y = iso1[idx]
        for e2 in iso2:
            if e2[0] in amap.values():
                continue
            for x2, y2 in (e2, (e2[1], e2[0])):
                amap[x], amap[y] = x2, y2
                yield from extend_isolated(idx + 1, vmap, fmap, amap)
                del amap[x], amap[y]

    yield from extend_vertices(0, {}, set())


def find_isomorphisms(g1: JKGraph, g2: JKGraph) -> list[GraphIso]:
    """All isomorphisms g1 -> g2, in a deterministic order."""
    return list(_iso_gen(g1, g2))


def is_isomorphic(g1: JKGraph, g2: JKGraph) -> bool:
    return next(_iso_gen(g1, g2), None) is not None
