"""Separatrix diagrams of Morse flows as combinatorial maps.

A diagram is an embedded directed multigraph: typed singular points as
vertices, colored separatrices and boundary trajectories as edges, plus a
rotation system (a counterclockwise cyclic order of darts at every vertex)
that fixes the embedding into an orientable surface.  The boundary of the
surface is encoded by ordinary ``BND_ARC`` edges; each hole is recovered as
a face consisting purely of arc darts.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence


class VertexKind(enum.Enum):
    """Kinds of singular points, interior and boundary."""

    INT_SOURCE = "int_source"
    INT_SADDLE = "int_saddle"
    INT_SINK = "int_sink"
    BND_SOURCE = "bnd_source"
    BND_SADDLE_IN = "bnd_saddle_in"
    BND_SADDLE_OUT = "bnd_saddle_out"
    BND_SINK = "bnd_sink"

    @property
    def is_boundary(self) -> bool:
        return self in BOUNDARY_KINDS

    @property
    def is_saddle(self) -> bool:
        return self in SADDLE_KINDS


SADDLE_KINDS = frozenset(
    {VertexKind.INT_SADDLE, VertexKind.BND_SADDLE_IN, VertexKind.BND_SADDLE_OUT}
)
SOURCE_KINDS = frozenset({VertexKind.INT_SOURCE, VertexKind.BND_SOURCE})
SINK_KINDS = frozenset({VertexKind.INT_SINK, VertexKind.BND_SINK})
BOUNDARY_KINDS = frozenset(
    {
        VertexKind.BND_SOURCE,
        VertexKind.BND_SADDLE_IN,
        VertexKind.BND_SADDLE_OUT,
        VertexKind.BND_SINK,
    }
)
#: Sources of the boundary-restricted flow (two outgoing arcs).
EMITTER_KINDS = frozenset({VertexKind.BND_SOURCE, VertexKind.BND_SADDLE_IN})
#: Sinks of the boundary-restricted flow (two incoming arcs).
ABSORBER_KINDS = frozenset({VertexKind.BND_SINK, VertexKind.BND_SADDLE_OUT})


class EdgeKind(enum.Enum):
    RED = "red"  # stable separatrix: source -> saddle
    GREEN = "green"  # unstable separatrix: saddle -> sink
    BND_ARC = "bnd_arc"  # boundary trajectory: emitter -> absorber


class Dart(NamedTuple):
    """One end of one edge: ``"t"`` sits at the tail vertex, ``"h"`` at the head."""

    edge: str
    end: str

    def reversed(self) -> "Dart":
        return Dart(self.edge, "h" if self.end == "t" else "t")

    def __str__(self) -> str:
        return f"{self.edge}.{self.end}"


class DiagramError(ValueError):
    """Base class for structural errors raised while building diagrams."""


class DuplicateId(DiagramError):
    pass


class DanglingEndpoint(DiagramError):
    pass


class RotationMismatch(DiagramError):
    pass


class DisconnectedDiagram(DiagramError):
    pass


@dataclass(frozen=True)
class SeparatrixDiagram:
    """An immutable separatrix diagram.

    ``vertices`` is an ordered tuple of ``(vertex id, kind)``; ``edges`` of
    ``(edge id, tail id, head id, kind)``; ``rotation`` stores, per vertex and
    in vertex order, the cyclic dart sequence rebased at its least dart.
    """

    vertices: tuple[tuple[str, VertexKind], ...]
    edges: tuple[tuple[str, str, str, EdgeKind], ...]
    rotation: tuple[tuple[str, tuple[Dart, ...]], ...]

    # -- lookups ----------------------------------------------------------

    def vertex_kinds(self) -> dict[str, VertexKind]:
        return dict(self.vertices)

    def edge_table(self) -> dict[str, tuple[str, str, EdgeKind]]:
        return {eid: (tail, head, kind) for eid, tail, head, kind in self.edges}

    def rotation_map(self) -> dict[str, tuple[Dart, ...]]:
        return dict(self.rotation)

    def darts(self) -> list[Dart]:
        out = []
        for eid, _, _, _ in self.edges:
            out.append(Dart(eid, "t"))
            out.append(Dart(eid, "h"))
        return out

    def vertex_of(self, dart: Dart) -> str:
        tail, head, _ = self.edge_table()[dart.edge]
        return tail if dart.end == "t" else head

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def kind_counts(self) -> dict[VertexKind, int]:
        counts = {kind: 0 for kind in VertexKind}
        for _, kind in self.vertices:
            counts[kind] += 1
        return counts

    def successor(self) -> dict[Dart, Dart]:
        """Rotation successor map over all darts."""
        nxt: dict[Dart, Dart] = {}
        for _, cycle in self.rotation:
            for i, d in enumerate(cycle):
                nxt[d] = cycle[(i + 1) % len(cycle)]
        return nxt

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {vid: set() for vid, _ in self.vertices}
        for _, tail, head, _ in self.edges:
            adj[tail].add(head)
            adj[head].add(tail)
        seen = {self.vertices[0][0]}
        stack = [self.vertices[0][0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def _normalize_cycle(cycle: Sequence[Dart]) -> tuple[Dart, ...]:
    if not cycle:
        return ()
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def build_diagram(
    vertices: Iterable[tuple[str, VertexKind]],
    edges: Iterable[tuple[str, str, str, EdgeKind]],
    rotation: Mapping[str, Sequence[Dart]],
) -> SeparatrixDiagram:
    """Assemble and structurally check a diagram.

    Enforces dart/rotation consistency only; vertex and edge kind constraints
    are the job of :func:`validate`.  Rotation cycles are rebased to start at
    their least dart, so equal diagrams serialize identically.
    """
    vlist = [(vid, kind) for vid, kind in vertices]
    elist = [(eid, tail, head, kind) for eid, tail, head, kind in edges]

    vids = [vid for vid, _ in vlist]
    if len(set(vids)) != len(vids):
        raise DuplicateId("duplicate vertex id")
    eids = [eid for eid, _, _, _ in elist]
    if len(set(eids)) != len(eids):
        raise DuplicateId("duplicate edge id")

    vset = set(vids)
    for eid, tail, head, _ in elist:
        if tail not in vset or head not in vset:
            raise DanglingEndpoint(f"edge {eid} references a missing vertex")

    # Darts expected at each vertex.
    expected: dict[str, set[Dart]] = {vid: set() for vid in vids}
    for eid, tail, head, _ in elist:
        expected[tail].add(Dart(eid, "t"))
        expected[head].add(Dart(eid, "h"))

    for vid in rotation:
        if vid not in vset:
            raise RotationMismatch(f"rotation given for unknown vertex {vid}")

    cycles: list[tuple[str, tuple[Dart, ...]]] = []
    for vid in vids:
        cyc = [Dart(d[0], d[1]) for d in rotation.get(vid, ())]
        if len(set(cyc)) != len(cyc):
            raise RotationMismatch(f"rotation at {vid} repeats a dart")
        if set(cyc) != expected[vid]:
            raise RotationMismatch(
                f"rotation at {vid} does not list exactly the incident darts"
            )
        cycles.append((vid, _normalize_cycle(cyc)))

    return SeparatrixDiagram(tuple(vlist), tuple(elist), tuple(cycles))


@dataclass(frozen=True)
class TopologyReport:
    """Face structure and derived surface invariants.

    ``face_walks`` lists every orbit of the face-successor map, hole walks
    included; ``hole_faces`` is the all-arc subset.  ``euler_characteristic``
    is that of the bounded surface (hole walks do not count as cells), so a
    torus with one hole reports -1, with ``genus`` satisfying
    ``euler_characteristic == 2 - 2*genus - boundary_count``.
    """

    face_walks: tuple[tuple[Dart, ...], ...]
    hole_faces: tuple[tuple[Dart, ...], ...]
    euler_characteristic: int
    genus: int
    boundary_count: int
    connected: bool

    @property
    def num_faces(self) -> int:
        """Interior cells only."""
        return len(self.face_walks) - len(self.hole_faces)


def trace_faces(diagram: SeparatrixDiagram) -> TopologyReport:
    """Trace the faces of the rotation system.

    Faces are orbits of ``next(d) = successor(reverse(d))``.  Each walk starts
    at its least dart and walks are sorted by starting dart, so the report is
    deterministic under re-tracing.
    """
    nxt = diagram.successor()
    ekind = {eid: kind for eid, _, _, kind in diagram.edges}

    walks: list[tuple[Dart, ...]] = []
    seen: set[Dart] = set()
    for start in sorted(diagram.darts()):
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        cur = nxt[start.reversed()]
        while cur != start:
            walk.append(cur)
            seen.add(cur)
            cur = nxt[cur.reversed()]
        walks.append(_normalize_cycle(walk))
    walks.sort(key=lambda w: w[0] if w else None)

    holes = tuple(
        w for w in walks if w and all(ekind[d.edge] is EdgeKind.BND_ARC for d in w)
    )
    num_v = diagram.n_vertices
    num_e = diagram.n_edges
    f_all = len(walks)
    b = len(holes)
    chi_closed = num_v - num_e + f_all
    genus = (2 - chi_closed) // 2
    return TopologyReport(
        face_walks=tuple(walks),
        hole_faces=holes,
        euler_characteristic=num_v - num_e + (f_all - b),
        genus=genus,
        boundary_count=b,
        connected=diagram.is_connected(),
    )


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    offender: str | None = None

    def __str__(self) -> str:
        where = f" [{self.offender}]" if self.offender else ""
        return f"{self.rule}: {self.detail}{where}"


@dataclass(frozen=True)
class ValidationVerdict:
    valid: bool
    violations: tuple[Violation, ...]

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return self.valid


#: Allowed (tail kinds, head kinds) per edge kind.
_EDGE_TYPING = {
    EdgeKind.RED: (SOURCE_KINDS, frozenset({VertexKind.INT_SADDLE, VertexKind.BND_SADDLE_IN})),
    EdgeKind.GREEN: (frozenset({VertexKind.INT_SADDLE, VertexKind.BND_SADDLE_OUT}), SINK_KINDS),
    EdgeKind.BND_ARC: (EMITTER_KINDS, ABSORBER_KINDS),
}


def _profile_violations(diagram: SeparatrixDiagram) -> list[Violation]:
    out: list[Violation] = []
    ekind = {eid: kind for eid, _, _, kind in diagram.edges}
    for vid, cycle in diagram.rotation:
        kind = diagram.vertex_kinds()[vid]
        slots = [(ekind[d.edge], d.end) for d in cycle]
        arcs = [i for i, (ek, _) in enumerate(slots) if ek is EdgeKind.BND_ARC]

        def bad(msg: str) -> None:
            out.append(Violation("V1", msg, vid))

        if kind is VertexKind.INT_SOURCE:
            if any(s != (EdgeKind.RED, "t") for s in slots):
                bad("interior source must carry only outgoing red darts")
        elif kind is VertexKind.INT_SINK:
            if any(s != (EdgeKind.GREEN, "h") for s in slots):
                bad("interior sink must carry only incoming green darts")
        elif kind is VertexKind.INT_SADDLE:
            if Counter(slots) != Counter(
                [(EdgeKind.RED, "h"), (EdgeKind.RED, "h"), (EdgeKind.GREEN, "t"), (EdgeKind.GREEN, "t")]
            ):
                bad("interior saddle needs 2 incoming red and 2 outgoing green darts")
            elif any(
                slots[i][0] is slots[(i + 1) % 4][0] for i in range(len(slots))
            ):
                bad("saddle rotation must alternate red/green")
        elif kind is VertexKind.BND_SOURCE:
            if slots.count((EdgeKind.BND_ARC, "t")) != 2 or any(
                s not in ((EdgeKind.BND_ARC, "t"), (EdgeKind.RED, "t")) for s in slots
            ):
                bad("boundary source needs 2 outgoing arcs plus outgoing reds")
        elif kind is VertexKind.BND_SINK:
            if slots.count((EdgeKind.BND_ARC, "h")) != 2 or any(
                s not in ((EdgeKind.BND_ARC, "h"), (EdgeKind.GREEN, "h")) for s in slots
            ):
                bad("boundary sink needs 2 incoming arcs plus incoming greens")
        elif kind is VertexKind.BND_SADDLE_IN:
            if Counter(slots) != Counter(
                [(EdgeKind.BND_ARC, "t"), (EdgeKind.BND_ARC, "t"), (EdgeKind.RED, "h")]
            ):
                bad("in-saddle needs 2 outgoing arcs and 1 incoming red")
        elif kind is VertexKind.BND_SADDLE_OUT:
            if Counter(slots) != Counter(
                [(EdgeKind.BND_ARC, "h"), (EdgeKind.BND_ARC, "h"), (EdgeKind.GREEN, "t")]
            ):
                bad("out-saddle needs 2 incoming arcs and 1 outgoing green")

        if kind in BOUNDARY_KINDS and len(arcs) == 2 and len(cycle) > 2:
            i, j = arcs
            if not (j - i == 1 or (i == 0 and j == len(cycle) - 1)):
                bad("the two boundary-arc darts must be adjacent in the rotation")
    return out


def validate(
    diagram: SeparatrixDiagram, genus: int = 1, boundaries: int = 1
) -> ValidationVerdict:
    """Check that a well-formed diagram is a Morse-flow diagram on the surface.

    Rules: V1 vertex dart profiles, V2 edge endpoint typing, V3 connectivity,
    V4 boundary arcs form exactly ``boundaries`` cycles covering all boundary
    vertices, V5 hole faces match the boundary circles, V6 every interior face
    is a parallel-flow cell (exactly two direction switches, source-kind and
    sink-kind corners), V7 genus, V8 Poincare-Hopf count on the double.
    Invalidity is reported, never raised.
    """
    violations: list[Violation] = []
    vkinds = diagram.vertex_kinds()

    violations.extend(_profile_violations(diagram))

    for eid, tail, head, kind in diagram.edges:
        tails, heads = _EDGE_TYPING[kind]
        if vkinds[tail] not in tails or vkinds[head] not in heads:
            violations.append(
                Violation("V2", f"{kind.value} edge has illegal endpoints", eid)
            )

    if not diagram.is_connected():
        violations.append(Violation("V3", "underlying graph is disconnected"))

    # V4: arc cycles.
    arc_next: dict[str, str] = {}
    arc_ok = True
    boundary_vertices = {vid for vid, k in diagram.vertices if k in BOUNDARY_KINDS}
    arcs_at: dict[str, list[str]] = {vid: [] for vid in boundary_vertices}
    for eid, tail, head, kind in diagram.edges:
        if kind is EdgeKind.BND_ARC:
            for vid in (tail, head):
                if vid in arcs_at:
                    arcs_at[vid].append(eid)
    if any(len(v) != 2 for v in arcs_at.values()):
        arc_ok = False
    if arc_ok:
        # Walk edge-to-edge through shared endpoints.
        unused = {eid for eid, _, _, k in diagram.edges if k is EdgeKind.BND_ARC}
        cycles = 0
        covered: set[str] = set()
        while unused:
            start = min(unused)
            cycles += 1
            cur = start
            prev_vertex = diagram.edge_table()[cur][0]
            while True:
                unused.discard(cur)
                tail, head, _ = diagram.edge_table()[cur]
                nxt_vertex = head if prev_vertex == tail else tail
                covered.add(prev_vertex)
                covered.add(nxt_vertex)
                candidates = [e for e in arcs_at[nxt_vertex] if e != cur]
                if len(candidates) != 1:
                    arc_ok = False
                    break
                cur = candidates[0]
                prev_vertex = nxt_vertex
                if cur == start:
                    break
            if not arc_ok:
                break
        if arc_ok and (cycles != boundaries or covered != boundary_vertices):
            arc_ok = False
    if not arc_ok:
        violations.append(
            Violation(
                "V4",
                f"boundary arcs do not form exactly {boundaries} cycles over the boundary vertices",
            )
        )

    report = trace_faces(diagram)
    ekind = {eid: kind for eid, _, _, kind in diagram.edges}

    # V5: hole faces.
    hole_edges: list[str] = [d.edge for w in report.hole_faces for d in w]
    arc_edges = [eid for eid, _, _, k in diagram.edges if k is EdgeKind.BND_ARC]
    if len(report.hole_faces) != boundaries or sorted(hole_edges) != sorted(arc_edges):
        violations.append(
            Violation(
                "V5",
                f"expected {boundaries} hole faces covering each boundary arc once, "
                f"got {len(report.hole_faces)}",
            )
        )

    # V6: interior faces are parallel-flow cells.
    holes = set(report.hole_faces)
    for walk in report.face_walks:
        if walk in holes:
            continue
        ok, why = _is_cell(diagram, walk)
        if not ok:
            violations.append(Violation("V6", why, str(walk[0])))

    # V7: genus.
    if diagram.is_connected() and report.genus != genus:
        violations.append(
            Violation("V7", f"genus {report.genus} != expected {genus}")
        )

    # V8: Poincare-Hopf on the double.
    summary = double(diagram)
    want = 2 * (2 * genus + boundaries - 1) - 2
    if summary.saddles - summary.nodes != want:
        violations.append(
            Violation(
                "V8",
                f"double has S-N = {summary.saddles - summary.nodes}, expected {want}",
            )
        )

    return ValidationVerdict(valid=not violations, violations=tuple(violations))


def _is_cell(diagram: SeparatrixDiagram, walk: Sequence[Dart]) -> tuple[bool, str]:
    """Check the two-switch parallel-flow condition on one face walk.

    A dart is traversed along its edge direction when it is a tail dart.  The
    cyclic along/against word must switch exactly twice, with the
    against-to-along corner at a source-kind vertex and the along-to-against
    corner at a sink-kind vertex.
    """
    n = len(walk)
    if n == 0:
        return False, "empty face walk"
    along = [d.end == "t" for d in walk]
    switches = [i for i in range(n) if along[i] != along[(i - 1) % n]]
    if len(switches) != 2:
        return False, f"face has {len(switches)} direction switches, expected 2"
    vkinds = diagram.vertex_kinds()
    for i in switches:
        corner = vkinds[diagram.vertex_of(walk[i])]
        if along[i] and corner not in SOURCE_KINDS:
            return False, "cell corner starting the flow is not a source"
        if not along[i] and corner not in SINK_KINDS:
            return False, "cell corner ending the flow is not a sink"
    return True, ""


@dataclass(frozen=True)
class DoubleSummary:
    """Singular-point counts on the double of the surface.

    Interior points double, boundary points do not; the Euler characteristic
    of the double equals nodes minus saddles.
    """

    vertices_total: int
    saddles: int
    nodes: int
    euler_characteristic: int


def double(diagram: SeparatrixDiagram) -> DoubleSummary:
    counts = diagram.kind_counts()
    interior = (
        counts[VertexKind.INT_SOURCE]
        + counts[VertexKind.INT_SADDLE]
        + counts[VertexKind.INT_SINK]
    )
    boundary = diagram.n_vertices - interior
    saddles = 2 * counts[VertexKind.INT_SADDLE] + counts[VertexKind.BND_SADDLE_IN] + counts[
        VertexKind.BND_SADDLE_OUT
    ]
    nodes = 2 * (counts[VertexKind.INT_SOURCE] + counts[VertexKind.INT_SINK]) + counts[
        VertexKind.BND_SOURCE
    ] + counts[VertexKind.BND_SINK]
    return DoubleSummary(
        vertices_total=2 * interior + boundary,
        saddles=saddles,
        nodes=nodes,
        euler_characteristic=nodes - saddles,
    )


_REVERSE_VKIND = {
    VertexKind.INT_SOURCE: VertexKind.INT_SINK,
    VertexKind.INT_SINK: VertexKind.INT_SOURCE,
    VertexKind.INT_SADDLE: VertexKind.INT_SADDLE,
    VertexKind.BND_SOURCE: VertexKind.BND_SINK,
    VertexKind.BND_SINK: VertexKind.BND_SOURCE,
    VertexKind.BND_SADDLE_IN: VertexKind.BND_SADDLE_OUT,
    VertexKind.BND_SADDLE_OUT: VertexKind.BND_SADDLE_IN,
}
_REVERSE_EKIND = {
    EdgeKind.RED: EdgeKind.GREEN,
    EdgeKind.GREEN: EdgeKind.RED,
    EdgeKind.BND_ARC: EdgeKind.BND_ARC,
}


def reverse_flow(diagram: SeparatrixDiagram) -> SeparatrixDiagram:
    """Reverse the direction of every trajectory.

    Edge directions flip, red and green swap, sources and sinks swap, the two
    boundary-saddle kinds swap; rotations keep their cyclic order (each dart
    trades tail for head on its own edge).  An involution up to relabeling.
    """
    vertices = [(vid, _REVERSE_VKIND[kind]) for vid, kind in diagram.vertices]
    edges = [
        (eid, head, tail, _REVERSE_EKIND[kind])
        for eid, tail, head, kind in diagram.edges
    ]
    rotation = {
        vid: [d.reversed() for d in cycle] for vid, cycle in diagram.rotation
    }
    return build_diagram(vertices, edges, rotation)


def mirror(diagram: SeparatrixDiagram) -> SeparatrixDiagram:
    """Reverse the global orientation: every rotation cycle runs backwards."""
    rotation = {vid: list(reversed(cycle)) for vid, cycle in diagram.rotation}
    return build_diagram(diagram.vertices, diagram.edges, rotation)


def relabel(
    diagram: SeparatrixDiagram,
    vertex_map: Mapping[str, str],
    edge_map: Mapping[str, str],
) -> SeparatrixDiagram:
    """Rename vertices and edges; the underlying map is unchanged."""
    vertices = [(vertex_map[vid], kind) for vid, kind in diagram.vertices]
    edges = [
        (edge_map[eid], vertex_map[tail], vertex_map[head], kind)
        for eid, tail, head, kind in diagram.edges
    ]
    rotation = {
        vertex_map[vid]: [Dart(edge_map[d.edge], d.end) for d in cycle]
        for vid, cycle in diagram.rotation
    }
    return build_diagram(vertices, edges, rotation)
