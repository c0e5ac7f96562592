"""Graphical species: local decorating data for graphs, and the free
monad they generate.

A graphical species consists of a set of colours with an involution
(what an arc can carry; the two arcs of an edge carry paired colours)
and, for each arity n, a set of operations with an n-tuple profile (the
colours of the in-pointing arcs at the n slots) acted on by slot
permutations.  By default the action is free: the listed operations are
generators, and their formal relabelings gen@p are distinct operations.

A decoration of a graph colours every arc equivariantly and labels every
vertex with an operation whose profile matches the colours of the arcs
pointing into the vertex, one per slot.  Labels are kept in a canonical
form (least representative of the action orbit), so decorations compare
by equality.

Evaluating a species on a graph lists its decorations; the truncated
free construction lists decorated graphs with a given number of ports;
the unit turns an operation into a decorated corolla and the
multiplication flattens a graph whose vertices are labelled by decorated
graphs, by refining and transporting the decorations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .graph_core import (
    GraphIso,
    JKGraph,
    ValidationReport,
    corolla,
    edges,
    find_isomorphisms,
    is_connected,
    local_interface,
    ports,
    validate_graph,
)
from .kleisli import Refinement, _refine_with_cover


@dataclass(frozen=True)
class GraphicalSpecies:
    """Colours with involution, and profiled operations per arity.

    operations maps a name to its profile.  With action=None the species
    is freely generated: every slot permutation of a listed operation is
    a further operation named gen@p (p one-based, comma separated).  An
    explicit action must list every operation and give a total table
    (name, p) -> name."""

    colours: frozenset[str]
    colour_involution: dict[str, str]
    operations: dict[str, tuple[str, ...]]
    action: dict[tuple[str, tuple[int, ...]], str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "colours", frozenset(self.colours))
        object.__setattr__(self, "colour_involution", dict(self.colour_involution))
        object.__setattr__(
            self, "operations", {n: tuple(p) for n, p in self.operations.items()}
        )
        if self.action is not None:
            object.__setattr__(
                self,
                "action",
                {(n, tuple(p)): m for (n, p), m in self.action.items()},
            )


def validate_species(sp: GraphicalSpecies) -> ValidationReport:
    problems = []
    for c in sorted(sp.colours):
        d = sp.colour_involution.get(c)
        if d not in sp.colours or sp.colour_involution.get(d) != c:
            problems.append(f"colour-involution: not an involution at {c!r}")
    if set(sp.colour_involution) != set(sp.colours):
        problems.append("colour-involution: must be defined on exactly the colours")
    for name, profile in sorted(sp.operations.items()):
        if not set(profile) <= set(sp.colours):
            problems.append(f"profile: operation {name!r} uses unknown colours")
        if sp.action is None and "@" in name:
            problems.append(f"operation-name: generator {name!r} may not contain '@'")
    if sp.action is not None:
        for name, profile in sorted(sp.operations.items()):
            n = len(profile)
            for p in itertools.permutations(range(n)):
                m = sp.action.get((name, p))
                if m is None or m not in sp.operations:
                    problems.append(f"action: missing or unknown image for {name!r} under {p}")
                    continue
                if sp.operations[m] != tuple(profile[p[i]] for i in range(n)):
                    problems.append(f"action: profile not respected for {name!r} under {p}")
            ident = tuple(range(n))
            if sp.action.get((name, ident)) != name:
                problems.append(f"action: identity permutation must fix {name!r}")
        for (name, p), m in sorted(sp.action.items()):
            n = len(sp.operations.get(name, ()))
            for q in itertools.permutations(range(n)):
                pq = tuple(p[q[i]] for i in range(n))
                lhs = sp.action.get((m, q))
                rhs = sp.action.get((name, pq))
                if lhs != rhs:
                    problems.append(
                        f"action: composition fails at {name!r} under {p} then {q}"
                    )
    return ValidationReport(tuple(problems))


def _render_perm(p: tuple[int, ...]) -> str:
    return ",".join(str(i + 1) for i in p)


def act(sp: GraphicalSpecies, name: str, p: tuple[int, ...]) -> str:
    """The operation name behind slot i of the permuted operation is
    slot p[i] of the original: profiles satisfy
    profile(act(name, p))[i] == profile(name)[p[i]]."""
    p = tuple(p)
    if sp.action is not None:
        return sp.action[(name, p)]
    if "@" in name:
        base, tail = name.split("@", 1)
        q = tuple(int(k) - 1 for k in tail.split(","))
        p = tuple(q[p[i]] for i in range(len(p)))
    else:
        base = name
    if p == tuple(range(len(p))):
        return base
    return f"{base}@{_render_perm(p)}"


def operation_profile(sp: GraphicalSpecies, name: str) -> tuple[str, ...]:
    if name in sp.operations:
        return sp.operations[name]
    if sp.action is None and "@" in name:
        base, tail = name.split("@", 1)
        q = tuple(int(k) - 1 for k in tail.split(","))
        profile = sp.operations[base]
        return tuple(profile[q[i]] for i in range(len(q)))
    raise KeyError(name)


def operations_of_arity(sp: GraphicalSpecies, n: int) -> dict[str, tuple[str, ...]]:
    """Every operation of arity n (for a free species: all relabelings
    of the generators)."""
    out = {}
    for name, profile in sp.operations.items():
        if len(profile) != n:
            continue
        if sp.action is not None:
            out[name] = profile
            continue
        for p in itertools.permutations(range(n)):
            m = act(sp, name, p)
            out[m] = operation_profile(sp, m)
    return out


class VertexLabel(NamedTuple):
    """An operation at a vertex with its slots filled by the arcs
    pointing in; stored in canonical (orbit-least) form."""

    operation: str
    arcs_by_slot: tuple[str, ...]


def canonical_label(sp: GraphicalSpecies, operation: str, arcs_by_slot: Iterable[str]) -> VertexLabel:
    arcs = tuple(arcs_by_slot)
    n = len(arcs)
    best = min(
        (act(sp, operation, p), tuple(arcs[p[i]] for i in range(n)))
        for p in itertools.permutations(range(n))
    )
    return VertexLabel(*best)


@dataclass(frozen=True)
class Decoration:
    """An equivariant arc colouring plus a canonical label per vertex."""

    arc_colouring: dict[str, str]
    vertex_labels: dict[str, VertexLabel]

    def __post_init__(self):
        object.__setattr__(self, "arc_colouring", dict(self.arc_colouring))
        object.__setattr__(self, "vertex_labels", dict(self.vertex_labels))


def validate_decoration(sp: GraphicalSpecies, g: JKGraph, dec: Decoration) -> ValidationReport:
    problems = []
    if set(dec.arc_colouring) != set(g.arcs):
        problems.append("colouring-domain: colouring must be defined on exactly the arcs")
    elif not set(dec.arc_colouring.values()) <= set(sp.colours):
        problems.append("colouring-image: unknown colour")
    else:
        for a in sorted(g.arcs):
            if dec.arc_colouring[g.involution[a]] != sp.colour_involution[dec.arc_colouring[a]]:
                problems.append(f"colouring: edge of {a!r} is not colour-paired")
    if set(dec.vertex_labels) != set(g.vertices):
        problems.append("labels-domain: one label per vertex required")
        return ValidationReport(tuple(problems))
    if problems:
        return ValidationReport(tuple(problems))
    for v in sorted(g.vertices):
        label = dec.vertex_labels[v]
        try:
            profile = operation_profile(sp, label.operation)
        except KeyError:
            problems.append(f"label: unknown operation at {v!r}")
            continue
        if set(label.arcs_by_slot) != local_interface(g, v) or len(
            set(label.arcs_by_slot)
        ) != len(label.arcs_by_slot):
            problems.append(f"label: slots at {v!r} do not list the arcs pointing in")
            continue
        if tuple(dec.arc_colouring[a] for a in label.arcs_by_slot) != profile:
            problems.append(f"label: colours at {v!r} do not match the profile")
            continue
        if canonical_label(sp, label.operation, label.arcs_by_slot) != label:
            problems.append(f"label: not in canonical form at {v!r}")
    return ValidationReport(tuple(problems))


def _edge_colourings(sp: GraphicalSpecies, g: JKGraph):
    keys = sorted(tuple(sorted(e)) for e in edges(g))
    for choice in itertools.product(sorted(sp.colours), repeat=len(keys)):
        colouring = {}
        for (a, b), c in zip(keys, choice):
            colouring[a] = c
            colouring[b] = sp.colour_involution[c]
        yield colouring


def _vertex_label_options(
    sp: GraphicalSpecies, g: JKGraph, v: str, colouring: dict[str, str]
) -> list[VertexLabel]:
    interface = sorted(local_interface(g, v))
    n = len(interface)
    seen = []
    for name, profile in sorted(operations_of_arity(sp, n).items()):
        for arcs in itertools.permutations(interface):
            if tuple(colouring[a] for a in arcs) != profile:
                continue
            label = canonical_label(sp, name, arcs)
            if label not in seen:
                seen.append(label)
    return seen


def evaluate_species(sp: GraphicalSpecies, g: JKGraph) -> list[Decoration]:
    """All decorations of g, in a deterministic order."""
    rep = validate_graph(g)
    if not rep.ok:
        raise ValueError("invalid graph: " + "; ".join(rep.problems))
    out = []
    for colouring in _edge_colourings(sp, g):
        options = []
        for v in sorted(g.vertices):
            opts = _vertex_label_options(sp, g, v, colouring)
            if not opts:
                break
            options.append((v, opts))
        else:
            for combo in itertools.product(*(opts for _, opts in options)):
                labels = {v: label for (v, _), label in zip(options, combo)}
                out.append(Decoration(colouring, labels))
    return out


def transport_decoration(sp: GraphicalSpecies, dec: Decoration, iso: GraphIso) -> Decoration:
    colouring = {iso.arc_map[a]: c for a, c in dec.arc_colouring.items()}
    labels = {}
    for v, label in dec.vertex_labels.items():
        arcs = tuple(iso.arc_map[a] for a in label.arcs_by_slot)
        labels[iso.vertex_map[v]] = canonical_label(sp, label.operation, arcs)
    return Decoration(colouring, labels)


def decorated_isomorphic(
    sp: GraphicalSpecies,
    g1: JKGraph,
    dec1: Decoration,
    g2: JKGraph,
    dec2: Decoration,
    fix_ports: bool = False,
) -> bool:
    """Some isomorphism g1 -> g2 carries dec1 to dec2 (optionally fixing
    every port by name)."""
    for iso in find_isomorphisms(g1, g2):
        if fix_ports and any(iso.arc_map[p] != p for p in ports(g1)):
            continue
        if transport_decoration(sp, dec1, iso) == dec2:
            return True
    return False


def monad_unit(sp: GraphicalSpecies, operation: str) -> tuple[JKGraph, Decoration]:
    """The decorated corolla of an operation: ports named 1..n carry the
    profile colours."""
    profile = operation_profile(sp, operation)
    n = len(profile)
    g = corolla(n)
    colouring = {}
    for k, c in enumerate(profile, start=1):
        colouring[str(k)] = c
        colouring[str(k) + "*"] = sp.colour_involution[c]
    label = canonical_label(sp, operation, tuple(str(k) for k in range(1, n + 1)))
    return g, Decoration(colouring, {"v": label})


def _stub_graphs(allowed_valences: list[int], n_ports: int, n_vertices: int):
    """Connected graphs with the given port names 1..n and n_vertices
    vertices whose valences are allowed; raw, with duplicates."""
    port_names = [str(i) for i in range(1, n_ports + 1)]
    for valences in itertools.product(sorted(allowed_valences), repeat=n_vertices):
        if sum(valences) < n_ports or (sum(valences) - n_ports) % 2:
            continue
        flags = []
        incidence = {}
        for i, d in enumerate(valences, start=1):
            for j in range(1, d + 1):
                f = f"v{i}.{j}"
                flags.append(f)
                incidence[f] = f"v{i}"
        stub_arcs = [f + "*" for f in flags]
        items = stub_arcs + port_names

        def matchings(rest: list[str]):
            if not rest:
                yield {}
                return
            first, tail = rest[0], rest[1:]
            for k, partner in enumerate(tail):
                if first in port_names and partner in port_names:
                    continue  # a port-port edge would be isolated
                remaining = tail[:k] + tail[k + 1 :]
                for sub in matchings(remaining):
                    yield {first: partner, partner: first, **sub}

        for involution in matchings(items):
            g = JKGraph(
                set(items),
                set(flags),
                {f"v{i}" for i in range(1, n_vertices + 1)},
                involution,
                {f: f + "*" for f in flags},
                incidence,
            )
            if is_connected(g):
                yield g


def _port_fixing_isomorphic(g1: JKGraph, g2: JKGraph) -> bool:
    return any(
        all(iso.arc_map[p] == p for p in ports(g1)) for iso in find_isomorphisms(g1, g2)
    )


def graphs_with_ports(
    allowed_valences: list[int], n_ports: int, max_vertices: int
) -> list[JKGraph]:
    """Connected graphs with ports 1..n and at most max_vertices
    vertices of allowed valences, one per port-fixing isomorphism class.
    For two ports this includes the vertexless unit graph."""
    out = []
    if n_ports == 2:
        out.append(JKGraph({"1", "2"}, set(), set(), {"1": "2", "2": "1"}, {}, {}))
    for n_v in range(1, max_vertices + 1):
        for g in _stub_graphs(allowed_valences, n_ports, n_v):
            if not any(_port_fixing_isomorphic(g, h) for h in out):
                out.append(g)
    return out


def truncated_free(
    sp: GraphicalSpecies, n_ports: int, max_vertices: int
) -> list[tuple[JKGraph, Decoration]]:
    """The decorated connected graphs with ports 1..n and a bounded
    number of vertices, one per port-fixing decorated isomorphism class:
    the free monad on the species, truncated."""
    arities = sorted({len(p) for p in sp.operations.values()})
    elements: list[tuple[JKGraph, Decoration]] = []
    for g in graphs_with_ports(arities, n_ports, max_vertices):
        kept: list[Decoration] = []
        for dec in evaluate_species(sp, g):
            if not any(
                decorated_isomorphic(sp, g, dec, g, prev, fix_ports=True) for prev in kept
            ):
                kept.append(dec)
        elements.extend((g, dec) for dec in kept)
    return elements


def element_profile(sp: GraphicalSpecies, g: JKGraph, dec: Decoration) -> tuple[str, ...]:
    """The boundary colours of a decorated graph with ports 1..n."""
    return tuple(dec.arc_colouring[str(k)] for k in range(1, len(ports(g)) + 1))


def monad_mult_element(
    sp: GraphicalSpecies,
    r: JKGraph,
    outer_colouring: dict[str, str],
    assignment: dict[str, tuple[JKGraph, dict[str, str]]],
    decorations: dict[str, Decoration],
) -> tuple[Refinement, Decoration]:
    """Flatten one element of the free monad applied twice: a graph r
    whose vertices are labelled by decorated graphs (via the refine
    assignment) becomes the refined graph with the transported
    decoration.  The outer colouring must agree with each piece's
    boundary colours along its interface."""
    for a in r.arcs:
        c = outer_colouring.get(a)
        if c not in sp.colours:
            raise ValueError(f"outer colouring misses arc {a!r}")
        if outer_colouring[r.involution[a]] != sp.colour_involution[c]:
            raise ValueError(f"outer colouring is not edge-paired at {a!r}")
    for x in sorted(assignment):
        piece, bij = assignment[x]
        dec = decorations[x]
        rep = validate_decoration(sp, piece, dec)
        if not rep.ok:
            raise ValueError(f"decoration at {x!r} invalid: " + "; ".join(rep.problems))
        for q, a in bij.items():
            if dec.arc_colouring[q] != outer_colouring[a]:
                raise ValueError(
                    f"piece at {x!r} disagrees with the outer colouring at port {q!r}"
                )
    refinement, cover = _refine_with_cover(r, assignment)
    colouring: dict[str, str] = {}
    for x in sorted(assignment):
        piece, _ = assignment[x]
        dec = decorations[x]
        for a, c in dec.arc_colouring.items():
            target = cover.arc_map[x + "." + a]
            if colouring.setdefault(target, c) != c:
                raise ValueError("glued arcs received conflicting colours")
    labels = {}
    for x in sorted(assignment):
        piece, _ = assignment[x]
        dec = decorations[x]
        for w, label in dec.vertex_labels.items():
            arcs = tuple(cover.arc_map[x + "." + a] for a in label.arcs_by_slot)
            labels[x + "." + w] = canonical_label(sp, label.operation, arcs)
    return refinement, Decoration(colouring, labels)
