"""Brute-force oracles for isomorphism and recounting.

These share only the diagram structures with the fast path: no canonical-code
machinery is reused, so agreement between the two is meaningful evidence.
"""
from __future__ import annotations

import itertools

from .canon import QuotientConfig
from .diagram import (
    Dart,
    EdgeKind,
    SeparatrixDiagram,
    VertexKind,
    mirror,
    reverse_flow,
)


class TooLarge(ValueError):
    pass


def _cyclic_eq(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(all(a[(i + k) % n] == b[i] for i in range(n)) for k in range(n))


def _iso_between(a: SeparatrixDiagram, b: SeparatrixDiagram) -> bool:
    """Exhaustive search for a kind-preserving map of a onto b that carries
    rotations to rotations as cyclic sequences."""
    akinds = a.vertex_kinds()
    bkinds = b.vertex_kinds()
    if sorted(k.value for k in akinds.values()) != sorted(
        k.value for k in bkinds.values()
    ):
        return False

    by_kind_a: dict[VertexKind, list[str]] = {}
    by_kind_b: dict[VertexKind, list[str]] = {}
    for vid, k in a.vertices:
        by_kind_a.setdefault(k, []).append(vid)
    for vid, k in b.vertices:
        by_kind_b.setdefault(k, []).append(vid)
    if set(by_kind_a) != set(by_kind_b):
        return False
    kinds = sorted(by_kind_a, key=lambda k: k.value)
    if any(len(by_kind_a[k]) != len(by_kind_b[k]) for k in kinds):
        return False

    aedges = a.edges
    bedges = b.edges
    if len(aedges) != len(bedges):
        return False
    arot = a.rotation_map()
    brot = b.rotation_map()

    for images in itertools.product(
        *(itertools.permutations(by_kind_b[k]) for k in kinds)
    ):
        vmap: dict[str, str] = {}
        for k, image in zip(kinds, images):
            vmap.update(dict(zip(by_kind_a[k], image)))

        # Group edges into parallel classes keyed by mapped endpoints + kind.
        aclass: dict[tuple, list[str]] = {}
        for eid, tail, head, kind in aedges:
            aclass.setdefault((vmap[tail], vmap[head], kind), []).append(eid)
        bclass: dict[tuple, list[str]] = {}
        for eid, tail, head, kind in bedges:
            bclass.setdefault((tail, head, kind), []).append(eid)
        if set(aclass) != set(bclass):
            continue
        if any(len(aclass[c]) != len(bclass[c]) for c in aclass):
            continue

        classes = sorted(aclass)
        perms_per_class = [
            list(itertools.permutations(bclass[c])) for c in classes
        ]
        found = False
        for combo in itertools.product(*perms_per_class):
            emap: dict[str, str] = {}
            for c, perm in zip(classes, combo):
                emap.update(dict(zip(aclass[c], perm)))

            def dmap(d: Dart) -> Dart:
                return Dart(emap[d.edge], d.end)

            if all(
                _cyclic_eq(tuple(dmap(d) for d in arot[vid]), brot[vmap[vid]])
                for vid in arot
            ):
                found = True
                break
        if found:
            return True
    return False


def brute_force_iso(
    a: SeparatrixDiagram,
    b: SeparatrixDiagram,
    q: QuotientConfig = QuotientConfig(identify_mirror=True, identify_reverse=False),
) -> bool:
    """Oracle isomorphism test by exhaustion over kind-preserving bijections."""
    if 2 * (a.n_edges + b.n_edges) > 80:
        raise TooLarge("brute-force isomorphism is limited to 40 darts per diagram")
    variants = [b]
    if q.identify_mirror:
        variants.append(mirror(b))
    if q.identify_reverse:
        variants.append(reverse_flow(b))
    if q.identify_mirror and q.identify_reverse:
        variants.append(mirror(reverse_flow(b)))
    return any(_iso_between(a, v) for v in variants)


def exhaustive_recount(
    n: int,
    surface: tuple[int, int] = (1, 1),
    q: QuotientConfig | None = None,
) -> int:
    """Recount equivalence classes using only the brute-force oracle."""
    from .canon import DEFAULT_QUOTIENT
    from .census import point_multisets, _search

    if n > 6:
        raise TooLarge("exhaustive recount is limited to n <= 6")
    quotient = DEFAULT_QUOTIENT if q is None else q
    reps: list[SeparatrixDiagram] = []
    for budget in point_multisets(n, surface):
        for diagram in _search(budget, surface):
            if not any(brute_force_iso(diagram, r, quotient) for r in reps):
                reps.append(diagram)
    return len(reps)
