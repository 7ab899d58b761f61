"""Canonical codes and isomorphism of separatrix diagrams.

Two diagrams are topologically equivalent when some kind-preserving
relabeling maps one rotation system onto the other.  The quotient is
configurable: orientation-reversing homeomorphisms (mirror) and flow
reversal can each be identified or kept distinct.

The code is the lexicographically least breadth-first certificate over all
start darts of the diagram and of its mirrored/reversed companions when the
quotient includes them.  Neighbor order inside the traversal follows the
rotation, so the embedding participates in the certificate; that is what
separates inequivalent flows with isomorphic underlying graphs.
"""
from __future__ import annotations

from dataclasses import dataclass

from .diagram import (
    Dart,
    DisconnectedDiagram,
    EdgeKind,
    SeparatrixDiagram,
    VertexKind,
    build_diagram,
    mirror,
    reverse_flow,
)


@dataclass(frozen=True)
class QuotientConfig:
    """Which homeomorphisms are identified when comparing diagrams."""

    identify_mirror: bool = True
    identify_reverse: bool = False


#: Calibrated default: orientation-reversing homeomorphisms are identified,
#: reversed flows are listed separately.  Calibrated against the flow counts
#: 1/3/21 on the torus with one hole (see README).
DEFAULT_QUOTIENT = QuotientConfig(identify_mirror=True, identify_reverse=False)

_VK_CODE = {kind: i for i, kind in enumerate(VertexKind)}
_EK_CODE = {kind: i for i, kind in enumerate(EdgeKind)}


class _Encoded:
    """Dense integer encoding of a diagram: darts 2e (tail) and 2e+1 (head)."""

    __slots__ = ("succ", "vert", "vkind", "ekind", "n_darts", "vids", "eids")

    def __init__(self, diagram: SeparatrixDiagram):
        eindex = {eid: i for i, (eid, _, _, _) in enumerate(diagram.edges)}
        vindex = {vid: i for i, (vid, _) in enumerate(diagram.vertices)}
        self.eids = [eid for eid, _, _, _ in diagram.edges]
        self.vids = [vid for vid, _ in diagram.vertices]
        self.n_darts = 2 * len(diagram.edges)
        self.succ = [-1] * self.n_darts
        self.vert = [-1] * self.n_darts
        self.vkind = [0] * len(diagram.vertices)
        self.ekind = [0] * len(diagram.edges)
        for vid, kind in diagram.vertices:
            self.vkind[vindex[vid]] = _VK_CODE[kind]
        for eid, tail, head, kind in diagram.edges:
            e = eindex[eid]
            self.ekind[e] = _EK_CODE[kind]
            self.vert[2 * e] = vindex[tail]
            self.vert[2 * e + 1] = vindex[head]
        for vid, cycle in diagram.rotation:
            for i, d in enumerate(cycle):
                nd = cycle[(i + 1) % len(cycle)]
                self.succ[_dart_int(eindex, d)] = _dart_int(eindex, nd)

    def certificate(self, start: int) -> bytes:
        """BFS certificate with darts renumbered in discovery order."""
        num = {start: 0}
        order = [start]
        out = bytearray()
        qi = 0
        while qi < len(order):
            d = order[qi]
            qi += 1
            nxt = self.succ[d]
            rev = d ^ 1
            for nb in (nxt, rev):
                if nb not in num:
                    num[nb] = len(num)
                    order.append(nb)
            out.extend(
                (
                    num[nxt],
                    num[rev],
                    self.vkind[self.vert[d]],
                    self.ekind[d >> 1],
                    d & 1,
                )
            )
        return bytes(out)


def _dart_int(eindex: dict[str, int], d: Dart) -> int:
    return 2 * eindex[d.edge] + (0 if d.end == "t" else 1)


def _variants(diagram: SeparatrixDiagram, q: QuotientConfig) -> list[SeparatrixDiagram]:
    out = [diagram]
    if q.identify_mirror:
        out.append(mirror(diagram))
    if q.identify_reverse:
        out.append(reverse_flow(diagram))
    if q.identify_mirror and q.identify_reverse:
        out.append(mirror(reverse_flow(diagram)))
    return out


def canonical_code(diagram: SeparatrixDiagram, q: QuotientConfig = DEFAULT_QUOTIENT) -> bytes:
    """Total, relabeling-invariant key for the diagram's equivalence class."""
    if not diagram.is_connected():
        raise DisconnectedDiagram("canonical codes require a connected diagram")
    best: bytes | None = None
    for variant in _variants(diagram, q):
        enc = _Encoded(variant)
        for start in range(enc.n_darts):
            cert = enc.certificate(start)
            if best is None or cert < best:
                best = cert
    if best is None:
        # Edgeless diagram: encode the vertex kind multiset alone.
        best = bytes(sorted(_VK_CODE[k] for _, k in diagram.vertices))
    return best


def canonical_form(
    diagram: SeparatrixDiagram, q: QuotientConfig = DEFAULT_QUOTIENT
) -> SeparatrixDiagram:
    """A canonical representative: relabeled along the winning traversal.

    Idempotent under re-canonicalization: equivalent diagrams produce
    byte-identical forms.
    """
    if not diagram.is_connected():
        raise DisconnectedDiagram("canonical form requires a connected diagram")
    best: bytes | None = None
    winner: tuple[SeparatrixDiagram, _Encoded, int] | None = None
    for variant in _variants(diagram, q):
        enc = _Encoded(variant)
        for start in range(enc.n_darts):
            cert = enc.certificate(start)
            if best is None or cert < best:
                best = cert
                winner = (variant, enc, start)
    if winner is None:
        return diagram
    variant, enc, start = winner

    # Renumber darts in BFS discovery order, then vertices and edges by first
    # appearance.
    num = {start: 0}
    order = [start]
    qi = 0
    while qi < len(order):
        d = order[qi]
        qi += 1
        for nb in (enc.succ[d], d ^ 1):
            if nb not in num:
                num[nb] = len(num)
                order.append(nb)

    vmap: dict[int, str] = {}
    emap: dict[int, str] = {}
    for d in order:
        v = enc.vert[d]
        if v not in vmap:
            vmap[v] = f"v{len(vmap)}"
        e = d >> 1
        if e not in emap:
            emap[e] = f"e{len(emap)}"

    old_vids = {i: vid for i, vid in enumerate(enc.vids)}
    old_eids = {i: eid for i, eid in enumerate(enc.eids)}
    from .diagram import relabel  # local import to avoid cycle at module load

    relabeled = relabel(
        variant,
        {old_vids[i]: name for i, name in vmap.items()},
        {old_eids[i]: name for i, name in emap.items()},
    )
    # Re-sort vertex and edge lists into the new name order for stable output.
    vorder = sorted(relabeled.vertices, key=lambda t: int(t[0][1:]))
    eorder = sorted(relabeled.edges, key=lambda t: int(t[0][1:]))
    return build_diagram(vorder, eorder, relabeled.rotation_map())


def are_isomorphic(
    a: SeparatrixDiagram,
    b: SeparatrixDiagram,
    q: QuotientConfig = DEFAULT_QUOTIENT,
) -> bool:
    return canonical_code(a, q) == canonical_code(b, q)


@dataclass(frozen=True)
class SymmetrySummary:
    """Self-equivalences of one flow under reversal and mirroring."""

    self_reverse: bool
    self_mirror: bool


def symmetries(
    diagram: SeparatrixDiagram, include_mirror: bool = False
) -> SymmetrySummary:
    """Report whether the flow equals its reversal and its mirror image.

    ``include_mirror`` widens the reversal test to allow an orientation flip
    on top of the reversal, matching a mirror-quotiented census.
    """
    q = QuotientConfig(identify_mirror=include_mirror, identify_reverse=False)
    self_reverse = canonical_code(diagram, q) == canonical_code(reverse_flow(diagram), q)
    strict = QuotientConfig(identify_mirror=False, identify_reverse=False)
    self_mirror = canonical_code(diagram, strict) == canonical_code(mirror(diagram), strict)
    return SymmetrySummary(self_reverse=self_reverse, self_mirror=self_mirror)
