"""Exhaustive small-scale enumeration and the equivalence check.

Everything here works by brute force from first principles: graphs are
generated from raw combinatorial data (valence lists and involutions),
morphisms by filtering all candidate triples through the validator, and
cospans by combining all port matchings with all refinements.  The main
entry point check_equivalence compares, for every ordered pair of graphs
within bounds, the morphisms of the vertex/flag encoding against the
cover/refinement cospans of the arc encoding, and verifies that the
translation phi is a bijection between the two."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bm import (
    BMGraph,
    BMMorphism,
    is_bm_isomorphic,
    validate_bm_morphism,
)
from .cospan_equiv import (
    GraphCospan,
    cospan_equal,
    phi,
    phi_inv,
    validate_cospan,
)
from .etale import ReducedCover, replay_gluings, validate_reduced_cover
from .graph_core import JKGraph, ports, validate_graph
from .kleisli import FlaggedSubgraphRef, Refinement, validate_refinement


@dataclass(frozen=True)
class EnumBounds:
    max_vertices: int
    max_flags: int
    apex_bound: int | None = None


def _involutions(items: list[str]):
    """All involutions of items, as dicts (fixpoints allowed)."""
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for sub in _involutions(rest):
        yield {first: first, **sub}
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for sub in _involutions(remaining):
            yield {first: partner, partner: first, **sub}


def _valence_lists(n_vertices: int, max_flags: int):
    """Weakly decreasing valence assignments with a bounded total."""
    def rec(i: int, cap: int, budget: int, acc: list[int]):
        if i == n_vertices:
            yield tuple(acc)
            return
        for d in range(min(cap, budget), -1, -1):
            acc.append(d)
            yield from rec(i + 1, d, budget - d, acc)
            acc.pop()

    yield from rec(0, max_flags, max_flags, [])


def enumerate_bm_graphs(max_vertices: int, max_flags: int) -> list[BMGraph]:
    """All vertex/flag graphs within the bounds, one per isomorphism
    class, in a deterministic order."""
    found: list[BMGraph] = []
    for n_v in range(max_vertices + 1):
        vertices = [f"v{i}" for i in range(1, n_v + 1)]
        if n_v == 0:
            found.append(BMGraph(set(), set(), {}, {}))
            continue
        for valences in _valence_lists(n_v, max_flags):
            flags = []
            boundary = {}
            k = 0
            for v, d in zip(vertices, valences):
                for _ in range(d):
                    k += 1
                    f = f"f{k}"
                    flags.append(f)
                    boundary[f] = v
            for involution in _involutions(flags):
                g = BMGraph(set(vertices), set(flags), boundary, involution)
                if not any(is_bm_isomorphic(g, h) for h in found):
                    found.append(g)
    return found


def _surjections(domain: list[str], codomain: list[str]):
    if not codomain:
        if not domain:
            yield {}
        return
    for values in itertools.product(codomain, repeat=len(domain)):
        if set(values) == set(codomain):
            yield dict(zip(domain, values))


def _perfect_matchings(items: list[str]):
    """Fixpoint-free involutions of items, as dicts."""
    if not items:
        yield {}
        return
    if len(items) % 2:
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for sub in _perfect_matchings(remaining):
            yield {first: partner, partner: first, **sub}


def enumerate_bm_morphisms(tau: BMGraph, rho: BMGraph) -> list[BMMorphism]:
    """All morphisms tau -> rho, by filtering every candidate triple."""
    out = []
    tau_flags = sorted(tau.flags)
    rho_flags = sorted(rho.flags)
    if len(rho_flags) > len(tau_flags):
        return []
    for image in itertools.permutations(tau_flags, len(rho_flags)):
        flag_map = dict(zip(rho_flags, image))
        complement = sorted(set(tau_flags) - set(image))
        for vertex_map in _surjections(sorted(tau.vertices), sorted(rho.vertices)):
            for virtual in _perfect_matchings(complement):
                m = BMMorphism(tau, rho, flag_map, vertex_map, virtual)
                if validate_bm_morphism(m).ok:
                    out.append(m)
    return out


def _partial_matchings(items: list[str]):
    """All sets of disjoint unordered pairs drawn from items."""
    if len(items) < 2:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _partial_matchings(rest):
        yield sub
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for sub in _partial_matchings(remaining):
            yield [(first, partner)] + sub


def covers_from(t: JKGraph) -> list[ReducedCover]:
    """All reduced covers with source t: one per partial matching of its
    ports (the matched pairs are glued)."""
    out = []
    for matching in _partial_matchings(sorted(ports(t))):
        steps = [tuple(sorted(pair)) for pair in sorted(matching)]
        _, cover = replay_gluings(t, steps)
        out.append(cover)
    return out


def enumerate_refinements(r: JKGraph, s: JKGraph) -> list[Refinement]:
    """All refinements r -> s, by solving for the flag choices edge by
    edge and filtering through the validator."""
    if len(r.vertices) > len(s.vertices) or len(r.flags) > len(s.flags):
        return []
    if len(ports(r)) != len(ports(s)):
        return []
    out = []
    r_vertices = sorted(r.vertices)
    s_flag_of_arc = {a: h for h, a in s.embed.items()}

    # group the flags of r into edge leaders and their forced partners
    leaders = []
    partner_of: dict[str, str] = {}
    for g in sorted(r.flags):
        a = r.involution[r.embed[g]]
        if a in set(r.embed.values()):
            g2 = next(h for h in r.flags if r.embed[h] == a)
            if g2 < g:
                partner_of[g2] = g
                continue
        leaders.append(g)

    for vm in _surjections(sorted(s.vertices), r_vertices):
        vertex_map = {x: frozenset(v for v, y in vm.items() if y == x) for x in r_vertices}
        flags_in_piece = {
            x: [h for h in sorted(s.flags) if s.incidence[h] in vertex_map[x]]
            for x in r_vertices
        }

        def candidates(g: str):
            return flags_in_piece[r.incidence[g]]

        def build(idx: int, chosen: dict[str, str]):
            if idx == len(leaders):
                arc_map = {}
                ok = True
                for g, h in chosen.items():
                    arc_map[r.embed[g]] = s.embed[h]
                    back = s.involution[s.embed[h]]
                    partner_arc = r.involution[r.embed[g]]
                    if arc_map.setdefault(partner_arc, back) != back:
                        ok = False
                        break
                if ok and set(arc_map) == set(r.arcs):
                    ref = Refinement(
                        r,
                        s,
                        arc_map,
                        vertex_map,
                        {
                            g: FlaggedSubgraphRef(vertex_map[r.incidence[g]], h)
                            for g, h in chosen.items()
                        },
                    )
                    if validate_refinement(ref).ok:
                        out.append(ref)
                return
            g = leaders[idx]
            for h in candidates(g):
                if h in chosen.values():
                    continue
                step = {g: h}
                if g in partner_of:
                    g2 = partner_of[g]
                    back = s.involution[s.embed[h]]
                    h2 = s_flag_of_arc.get(back)
                    if h2 is None or h2 in chosen.values() or h2 == h:
                        continue
                    if h2 not in candidates(g2):
                        continue
                    step[g2] = h2
                build(idx + 1, {**chosen, **step})

        build(0, {})
    return out


def enumerate_cospans(
    t: JKGraph, r: JKGraph, apex_bound: int | None = None
) -> list[GraphCospan]:
    """All cover/refinement cospans from t to r whose apex has at most
    apex_bound vertices (every apex reachable from t has exactly t's
    vertex count, so any bound at least that is exhaustive)."""
    out = []
    for cover in covers_from(t):
        apex = cover.target
        if apex_bound is not None and len(apex.vertices) > apex_bound:
            continue
        for ref in enumerate_refinements(r, apex):
            c = GraphCospan(cover, ref)
            if not any(cospan_equal(c, prev) for prev in out):
                out.append(c)
    return out


@dataclass(frozen=True)
class PairResult:
    """The comparison for one ordered pair of graphs."""

    tau_index: int
    rho_index: int
    bm_count: int
    cospan_count: int
    translation_injective: bool
    translation_surjective: bool
    roundtrip_exact: bool

    @property
    def ok(self) -> bool:
        return (
            self.bm_count == self.cospan_count
            and self.translation_injective
            and self.translation_surjective
            and self.roundtrip_exact
        )


@dataclass(frozen=True)
class EquivalenceReport:
    bounds: EnumBounds
    graphs: tuple[BMGraph, ...]
    pairs: tuple[PairResult, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.pairs)

    @property
    def total_bm(self) -> int:
        return sum(p.bm_count for p in self.pairs)

    @property
    def total_cospans(self) -> int:
        return sum(p.cospan_count for p in self.pairs)


def check_pair(
    tau: BMGraph, rho: BMGraph, ti: int, ri: int, apex_bound: int | None
) -> PairResult:
    from .cospan_equiv import phi1_graph

    homs = enumerate_bm_morphisms(tau, rho)
    cospans = enumerate_cospans(phi1_graph(tau), phi1_graph(rho), apex_bound)
    images = []
    roundtrip = True
    for h in homs:
        c = phi(h)
        if not validate_cospan(c).ok or phi_inv(c) != h:
            roundtrip = False
        images.append(c)
    injective = all(
        not cospan_equal(images[i], images[j])
        for i in range(len(images))
        for j in range(i + 1, len(images))
    )
    surjective = all(
        any(cospan_equal(c, img) for img in images) for c in cospans
    )
    return PairResult(
        ti, ri, len(homs), len(cospans), injective, surjective, roundtrip
    )


def check_equivalence(
    max_vertices: int,
    max_flags: int,
    apex_bound: int | None = None,
    progress=None,
) -> EquivalenceReport:
    """Compare the two encodings over every ordered pair of graphs in
    bounds.  progress, if given, is called with each PairResult as it is
    produced."""
    bounds = EnumBounds(max_vertices, max_flags, apex_bound)
    graphs = enumerate_bm_graphs(max_vertices, max_flags)
    results = []
    for ti, tau in enumerate(graphs):
        for ri, rho in enumerate(graphs):
            res = check_pair(tau, rho, ti, ri, apex_bound)
            results.append(res)
            if progress is not None:
                progress(res)
    return EquivalenceReport(bounds, tuple(graphs), tuple(results))
