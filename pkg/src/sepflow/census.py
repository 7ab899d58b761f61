"""Exhaustive generation of Morse flows with a fixed number of singular points.

The generator walks, for every admissible distribution of singular-point
kinds: the cyclic arrangements of the boundary circles, the wiring of saddle
separatrix slots to sources and sinks, and the rotation systems at the
nodes.  Faces are traced incrementally while node rotations are being built,
so a branch dies as soon as it closes a face that is not a parallel-flow
cell.  Survivors are deduplicated by canonical code.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, fields

from .canon import DEFAULT_QUOTIENT, QuotientConfig, canonical_code, canonical_form
from .diagram import (
    ABSORBER_KINDS,
    EMITTER_KINDS,
    SINK_KINDS,
    SOURCE_KINDS,
    Dart,
    EdgeKind,
    SeparatrixDiagram,
    VertexKind,
    build_diagram,
    validate,
)

_KIND_ORDER = (
    VertexKind.INT_SOURCE,
    VertexKind.INT_SADDLE,
    VertexKind.INT_SINK,
    VertexKind.BND_SOURCE,
    VertexKind.BND_SADDLE_IN,
    VertexKind.BND_SADDLE_OUT,
    VertexKind.BND_SINK,
)


@dataclass(frozen=True, order=True)
class PointBudget:
    """How many singular points of each kind a flow carries."""

    n_int_source: int = 0
    n_int_saddle: int = 0
    n_int_sink: int = 0
    n_bnd_source: int = 0
    n_bnd_saddle_in: int = 0
    n_bnd_saddle_out: int = 0
    n_bnd_sink: int = 0

    @property
    def total(self) -> int:
        return sum(getattr(self, f.name) for f in fields(self))

    @property
    def boundary_total(self) -> int:
        return (
            self.n_bnd_source
            + self.n_bnd_saddle_in
            + self.n_bnd_saddle_out
            + self.n_bnd_sink
        )

    @property
    def interior_total(self) -> int:
        return self.total - self.boundary_total

    @property
    def emitters(self) -> int:
        return self.n_bnd_source + self.n_bnd_saddle_in

    @property
    def absorbers(self) -> int:
        return self.n_bnd_sink + self.n_bnd_saddle_out

    def kind_list(self) -> list[VertexKind]:
        counts = {
            VertexKind.INT_SOURCE: self.n_int_source,
            VertexKind.INT_SADDLE: self.n_int_saddle,
            VertexKind.INT_SINK: self.n_int_sink,
            VertexKind.BND_SOURCE: self.n_bnd_source,
            VertexKind.BND_SADDLE_IN: self.n_bnd_saddle_in,
            VertexKind.BND_SADDLE_OUT: self.n_bnd_saddle_out,
            VertexKind.BND_SINK: self.n_bnd_sink,
        }
        out: list[VertexKind] = []
        for kind in _KIND_ORDER:
            out.extend([kind] * counts[kind])
        return out


def point_multisets(n: int, surface: tuple[int, int] = (1, 1)) -> list[PointBudget]:
    """All kind distributions compatible with the surface, in lexicographic order.

    Constraints: the boundary carries equally many emitters and absorbers, at
    least one per boundary circle; the Poincare-Hopf index count holds on the
    double; there is at least one source-kind and one sink-kind point.
    """
    genus, boundaries = surface
    target = 2 * (2 * genus + boundaries - 1) - 2  # S - N on the double
    out = []
    for i_src in range(n + 1):
        for i_sad in range(n + 1 - i_src):
            for i_snk in range(n + 1 - i_src - i_sad):
                rest = n - i_src - i_sad - i_snk
                for b_src in range(rest + 1):
                    for b_in in range(rest + 1 - b_src):
                        for b_out in range(rest + 1 - b_src - b_in):
                            b_snk = rest - b_src - b_in - b_out
                            if b_src + b_in != b_snk + b_out:
                                continue
                            if b_src + b_in < boundaries:
                                continue
                            saddles = 2 * i_sad + b_in + b_out
                            nodes = 2 * (i_src + i_snk) + b_src + b_snk
                            if saddles - nodes != target:
                                continue
                            if i_src + b_src < 1 or i_snk + b_snk < 1:
                                continue
                            out.append(
                                PointBudget(
                                    n_int_source=i_src,
                                    n_int_saddle=i_sad,
                                    n_int_sink=i_snk,
                                    n_bnd_source=b_src,
                                    n_bnd_saddle_in=b_in,
                                    n_bnd_saddle_out=b_out,
                                    n_bnd_sink=b_snk,
                                )
                            )
    return sorted(out)


# ---------------------------------------------------------------------------
# circle layouts


def _set_partitions(items: list[int], blocks: int):
    """Partitions of ``items`` into ``blocks`` nonempty unordered blocks."""
    if blocks == 1:
        yield [list(items)]
        return
    if len(items) < blocks:
        return
    first, rest = items[0], items[1:]
    # first goes into a block possibly alone
    for smaller in _set_partitions(rest, blocks - 1):
        yield [[first]] + smaller
    for smaller in _set_partitions(rest, blocks):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1 :]


def _distribute(items: list[int], sizes: list[int]):
    """Splits of ``items`` into labeled blocks of the given sizes."""
    if not sizes:
        yield ()
        return
    for subset in itertools.combinations(items, sizes[0]):
        rest = [x for x in items if x not in subset]
        for tail in _distribute(rest, sizes[1:]):
            yield (list(subset),) + tail


def _circle_layouts(emitters: list[int], absorbers: list[int], boundaries: int):
    """Cyclic alternating emitter/absorber arrangements, one per circle.

    Each circle starts at its least emitter, which pins the free rotation of
    the cyclic representation without losing arrangements.
    """
    if len(emitters) != len(absorbers) or len(emitters) < boundaries:
        return
    for e_blocks in _set_partitions(sorted(emitters), boundaries):
        e_blocks = sorted((sorted(b) for b in e_blocks), key=lambda b: b[0])
        sizes = [len(b) for b in e_blocks]
        for a_blocks in _distribute(sorted(absorbers), sizes):
            per_circle_options = []
            for eb, ab in zip(e_blocks, a_blocks):
                opts = []
                for pe in itertools.permutations(eb[1:]):
                    es = (eb[0],) + pe
                    for pa in itertools.permutations(ab):
                        circle = []
                        for e, a in zip(es, pa):
                            circle.append(e)
                            circle.append(a)
                        opts.append(tuple(circle))
                per_circle_options.append(opts)
            for combo in itertools.product(*per_circle_options):
                yield tuple(combo)


# ---------------------------------------------------------------------------
# symmetry quotient on the wiring


def _symmetry_group(kinds: list[VertexKind], int_saddles: list[int]):
    """Relabelings preserving kinds: same-kind vertex permutations crossed
    with the per-saddle swap of its two (red, green) slot pairs."""
    by_kind: dict[VertexKind, list[int]] = {}
    for i, k in enumerate(kinds):
        by_kind.setdefault(k, []).append(i)
    classes = [ix for ix in by_kind.values() if len(ix) > 1]
    identity = tuple(range(len(kinds)))
    vperms = [identity]
    for ix in classes:
        new = []
        for perm in itertools.permutations(ix):
            mapping = dict(zip(ix, perm))
            for base in vperms:
                new.append(tuple(mapping.get(v, base[v]) if v in mapping else base[v] for v in range(len(kinds))))
        # composition above is over disjoint supports, so this is a product
        vperms = new
    group = []
    for vperm in vperms:
        for mask in itertools.product((False, True), repeat=len(int_saddles)):
            swaps = frozenset(s for s, m in zip(int_saddles, mask) if m)
            group.append((vperm, swaps))
    return group


def _normalize_circles(circles) -> tuple:
    out = []
    for c in circles:
        best = min(tuple(c[i:] + c[:i]) for i in range(0, len(c), 2))
        out.append(best)
    return tuple(sorted(out))


def _encode_state(circles, red_map, green_map) -> tuple:
    return (
        _normalize_circles(circles),
        tuple(sorted(red_map.items())),
        tuple(sorted(green_map.items())),
    )


def _act(g, circles, red_map, green_map):
    vperm, swaps = g
    circles2 = [tuple(vperm[v] for v in c) for c in circles]

    def move(slot_map):
        out = {}
        for (s, j), v in slot_map.items():
            j2 = 1 - j if s in swaps else j
            out[(vperm[s], j2)] = vperm[v]
        return out

    return circles2, move(red_map), move(green_map)


# ---------------------------------------------------------------------------
# embedding search


def _search(budget: PointBudget, surface: tuple[int, int]):
    """Yield every valid labeled diagram for the budget (duplicates included)."""
    genus, boundaries = surface
    kinds = budget.kind_list()
    nv = len(kinds)
    emitters = [i for i, k in enumerate(kinds) if k in EMITTER_KINDS]
    absorbers = [i for i, k in enumerate(kinds) if k in ABSORBER_KINDS]
    int_saddles = [i for i, k in enumerate(kinds) if k is VertexKind.INT_SADDLE]
    in_saddles = [i for i, k in enumerate(kinds) if k is VertexKind.BND_SADDLE_IN]
    out_saddles = [i for i, k in enumerate(kinds) if k is VertexKind.BND_SADDLE_OUT]
    sources = [i for i, k in enumerate(kinds) if k in SOURCE_KINDS]
    sinks = [i for i, k in enumerate(kinds) if k in SINK_KINDS]
    int_sources = [i for i, k in enumerate(kinds) if k is VertexKind.INT_SOURCE]
    int_sinks = [i for i, k in enumerate(kinds) if k is VertexKind.INT_SINK]

    red_slots = [(s, j) for s in int_saddles for j in (0, 1)] + [
        (v, 0) for v in in_saddles
    ]
    green_slots = [(s, j) for s in int_saddles for j in (0, 1)] + [
        (v, 0) for v in out_saddles
    ]
    if red_slots and not sources:
        return
    if green_slots and not sinks:
        return

    group = _symmetry_group(kinds, int_saddles)

    red_choices = (
        list(itertools.product(sources, repeat=len(red_slots))) if red_slots else [()]
    )
    green_choices = (
        list(itertools.product(sinks, repeat=len(green_slots))) if green_slots else [()]
    )

    for circles in _circle_layouts(emitters, absorbers, boundaries):
        for red in red_choices:
            # every interior source must feed something, else disconnected
            if any(v not in red for v in int_sources):
                continue
            red_map = dict(zip(red_slots, red))
            for green in green_choices:
                if any(v not in green for v in int_sinks):
                    continue
                green_map = dict(zip(green_slots, green))
                base = _encode_state(circles, red_map, green_map)
                if any(
                    _encode_state(*_act(g, circles, red_map, green_map)) < base
                    for g in group
                ):
                    continue
                yield from _embed(
                    kinds,
                    circles,
                    red_slots,
                    red,
                    green_slots,
                    green,
                    genus,
                    boundaries,
                )


def _embed(kinds, circles, red_slots, red_asgn, green_slots, green_asgn, genus, b_target):
    nv = len(kinds)
    edges: list[tuple[int, int, int]] = []  # (tail, head, kind-code 0=red 1=green 2=arc)

    circle_arcs = []
    for circle in circles:
        m = len(circle)
        arcs = []
        for i in range(m):
            u, w = circle[i], circle[(i + 1) % m]
            tail, head = (u, w) if kinds[u] in EMITTER_KINDS else (w, u)
            arcs.append(len(edges))
            edges.append((tail, head, 2))
        circle_arcs.append(arcs)

    red_edge = {}
    for slot, src in zip(red_slots, red_asgn):
        red_edge[slot] = len(edges)
        edges.append((src, slot[0], 0))
    green_edge = {}
    for slot, snk in zip(green_slots, green_asgn):
        green_edge[slot] = len(edges)
        edges.append((slot[0], snk, 1))

    ne = len(edges)
    nd = 2 * ne
    dv = [0] * nd
    ek = [0] * ne
    for e, (t, h, k) in enumerate(edges):
        dv[2 * e] = t
        dv[2 * e + 1] = h
        ek[e] = k
    v_darts: list[list[int]] = [[] for _ in range(nv)]
    for d in range(nd):
        v_darts[dv[d]].append(d)
    if any(not ds for ds in v_darts):
        return

    is_source_v = [kinds[v] in SOURCE_KINDS for v in range(nv)]
    is_sink_v = [kinds[v] in SINK_KINDS for v in range(nv)]

    def dart_of(e: int, v: int) -> int:
        return 2 * e if edges[e][0] == v else 2 * e + 1

    # Forced rotations shared by both hole-walk directions.
    forced_base: list[tuple[int, int]] = []
    for s in (v for v in range(nv) if kinds[v] is VertexKind.INT_SADDLE):
        r0h = 2 * red_edge[(s, 0)] + 1
        r1h = 2 * red_edge[(s, 1)] + 1
        g0t = 2 * green_edge[(s, 0)]
        g1t = 2 * green_edge[(s, 1)]
        forced_base += [(r0h, g0t), (g0t, r1h), (r1h, g1t), (g1t, r0h)]

    results: list[SeparatrixDiagram] = []

    for deltas in itertools.product((1, -1), repeat=len(circles)):
        forced = list(forced_base)
        pin: dict[int, tuple[int, int]] = {}
        for circle, arcs, delta in zip(circles, circle_arcs, deltas):
            m = len(circle)
            for i in range(m):
                if delta == 1:
                    v = circle[(i + 1) % m]
                    p = dart_of(arcs[i], v)
                    q = dart_of(arcs[(i + 1) % m], v)
                else:
                    v = circle[i]
                    p = dart_of(arcs[i], v)
                    q = dart_of(arcs[(i - 1) % m], v)
                pin[v] = (p, q)
        free: list[tuple[int, list[int], list[int]]] = []
        for v in range(nv):
            kind = kinds[v]
            if kind is VertexKind.INT_SADDLE:
                continue
            if kind in (VertexKind.BND_SADDLE_IN, VertexKind.BND_SADDLE_OUT):
                p, q = pin[v]
                (w,) = [d for d in v_darts[v] if d not in (p, q)]
                forced += [(p, q), (q, w), (w, p)]
            elif kind in EMITTER_KINDS or kind in ABSORBER_KINDS:
                p, q = pin[v]
                pool = sorted(d for d in v_darts[v] if d not in (p, q))
                forced.append((p, q))
                if pool:
                    free.append((v, [p, q], pool))
                else:
                    forced.append((q, p))
            else:  # interior node
                pool = sorted(v_darts[v])
                anchor = pool[0]
                if len(pool) == 1:
                    forced.append((anchor, anchor))
                else:
                    free.append((v, [anchor], pool[1:]))
        free.sort(key=lambda t: (len(t[2]), t[0]))

        sigma = [-1] * nd
        state = {"holes": 0, "faces": 0}

        def trace(start: int):
            seq = [start]
            cur = start
            while True:
                nxt = sigma[cur ^ 1]
                if nxt < 0:
                    return None
                if nxt == start:
                    return seq
                seq.append(nxt)
                cur = nxt
                if len(seq) > nd:
                    raise RuntimeError("face trace runaway")

        def assign(x: int, t: int) -> int:
            """0 = rejected; 1 = set, no face closed; 2 = hole closed; 3 = cell closed."""
            sigma[x] = t
            seq = trace(t)
            if seq is None:
                return 1
            if all(ek[d >> 1] == 2 for d in seq):
                if state["holes"] == b_target:
                    sigma[x] = -1
                    return 0
                state["holes"] += 1
                state["faces"] += 1
                return 2
            n = len(seq)
            along = [(d & 1) == 0 for d in seq]
            switches = [i for i in range(n) if along[i] != along[i - 1]]
            ok = len(switches) == 2
            if ok:
                for i in switches:
                    v = dv[seq[i]]
                    if along[i]:
                        ok = ok and is_source_v[v]
                    else:
                        ok = ok and is_sink_v[v]
            if not ok:
                sigma[x] = -1
                return 0
            state["faces"] += 1
            return 3

        def undo(x: int, token: int) -> None:
            sigma[x] = -1
            if token == 2:
                state["holes"] -= 1
                state["faces"] -= 1
            elif token == 3:
                state["faces"] -= 1

        def finalize() -> None:
            if state["holes"] != b_target:
                return
            if nv - ne + state["faces"] != 2 - 2 * genus:
                return
            seen = {0}
            stack = [0]
            while stack:
                d = stack.pop()
                for nb in (sigma[d], d ^ 1):
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            if len(seen) != nd:
                return
            results.append(_to_diagram(kinds, edges, sigma, v_darts, genus, b_target))

        def place_vertex(fi: int) -> None:
            if fi == len(free):
                finalize()
                return
            _, seq0, pool = free[fi]
            place_dart(fi, list(seq0), pool)

        def place_dart(fi: int, seq: list[int], pool: list[int]) -> None:
            if not pool:
                x = seq[-1]
                token = assign(x, seq[0])
                if token:
                    place_vertex(fi + 1)
                    undo(x, token)
                return
            x = seq[-1]
            for d in pool:
                token = assign(x, d)
                if token:
                    seq.append(d)
                    place_dart(fi, seq, [y for y in pool if y != d])
                    seq.pop()
                    undo(x, token)

        setup_ok = True
        for x, t in forced:
            if not assign(x, t):
                setup_ok = False
                break
        if setup_ok:
            place_vertex(0)
        for d in results:
            yield d
        results.clear()


def _to_diagram(kinds, edges, sigma, v_darts, genus, b_target) -> SeparatrixDiagram:
    ekind = {0: EdgeKind.RED, 1: EdgeKind.GREEN, 2: EdgeKind.BND_ARC}
    vertices = [(f"v{i}", kinds[i]) for i in range(len(kinds))]
    pub_edges = [
        (f"e{j}", f"v{t}", f"v{h}", ekind[k]) for j, (t, h, k) in enumerate(edges)
    ]

    def to_dart(d: int) -> Dart:
        return Dart(f"e{d >> 1}", "t" if d % 2 == 0 else "h")

    rotation = {}
    for v, darts in enumerate(v_darts):
        start = min(darts)
        cycle = [start]
        cur = sigma[start]
        while cur != start:
            cycle.append(cur)
            cur = sigma[cur]
        rotation[f"v{v}"] = [to_dart(d) for d in cycle]

    diagram = build_diagram(vertices, pub_edges, rotation)
    verdict = validate(diagram, genus=genus, boundaries=b_target)
    if not verdict.valid:
        raise RuntimeError(
            "search produced a diagram the validator rejects: "
            + "; ".join(str(v) for v in verdict.violations)
        )
    return diagram


def enumerate_flows(
    n: int,
    surface: tuple[int, int] = (1, 1),
    quotient: QuotientConfig | None = None,
    up_to: bool = False,
) -> list[SeparatrixDiagram]:
    """One canonical representative per equivalence class of valid flows.

    Returns diagrams in canonical form, sorted by canonical code; two runs
    produce identical output.  With ``up_to`` the census covers every point
    count from the minimum feasible up to ``n``.
    """
    q = DEFAULT_QUOTIENT if quotient is None else quotient
    counts = range(2, n + 1) if up_to else [n]
    classes: dict[bytes, SeparatrixDiagram] = {}
    for m in counts:
        for budget in point_multisets(m, surface):
            for diagram in _search(budget, surface):
                code = canonical_code(diagram, q)
                if code not in classes:
                    classes[code] = canonical_form(diagram, q)
    return [classes[c] for c in sorted(classes)]
