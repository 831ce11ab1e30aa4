"""Cycle-and-linkage configurations: segments, convexity, segment trees,
parallel segment classes, and tilted-grid extraction.

All region reasoning happens on face sets of the host embedding: a segment's
chords, its zone, and the tree of regions are computed by dual reachability
with the relevant paths acting as barriers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .concentric import ConcentricCycles
from .oracle import Linkage
from .plane import (
    CheckResult,
    Cycle,
    DiskRegion,
    Edge,
    PlaneGraph,
    PlaneGraphError,
    norm_edge,
)


class ConfigError(PlaneGraphError):
    """Configuration violates a structural precondition."""


class TypeRelationError(ConfigError):
    """The parallelism relation failed to be an equivalence on this instance."""


@dataclass(frozen=True)
class CLConfiguration:
    """Concentric cycles paired with a linkage whose terminals avoid the outer disc."""

    graph: PlaneGraph
    cycles: ConcentricCycles
    linkage: Linkage

    def __post_init__(self):
        self.linkage.check_in(self.graph)
        outer = self.cycles.outer_disc()
        bad = self.linkage.terminals & outer.vertices
        if bad:
            raise ConfigError(f"linkage terminals {sorted(bad)} lie in the outer disc")

    @property
    def depth(self) -> int:
        return self.cycles.depth

    def outer_cycle(self) -> Cycle:
        return self.cycles.cycles[-1]

    def outer_disc(self) -> DiskRegion:
        return self.cycles.outer_disc()


@dataclass(frozen=True)
class Chord:
    """Closed span of a chord: vertex indices [start, end] within the segment."""

    level: int
    start: int
    end: int
    semichords: int


@dataclass(frozen=True)
class Segment:
    """Maximal piece of a linkage path inside the outer disc."""

    index: int
    path_index: int
    vertices: tuple[int, ...]
    eccentricity: int
    extremal: bool
    chords: tuple[Chord, ...]
    zone_faces: Optional[frozenset[int]]

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(
            norm_edge(a, b) for a, b in zip(self.vertices, self.vertices[1:])
        )

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[-1])

    def chords_at(self, level: int) -> list[Chord]:
        return [c for c in self.chords if c.level == level]


# -- element-walk helpers ---------------------------------------------------------


def _component_runs(path: tuple[int, ...], v_in, e_in) -> list[tuple[int, int]]:
    """Maximal runs [a,b] of included vertices joined by included edges."""
    runs = []
    i = 0
    n = len(path)
    while i < n:
        if not v_in(path[i]):
            i += 1
            continue
        j = i
        while j + 1 < n and e_in(path[j], path[j + 1]) and v_in(path[j + 1]):
            j += 1
        runs.append((i, j))
        i = j + 1
    return runs


def _chord_runs(seg: tuple[int, ...], v_inside, e_inside) -> list[tuple[int, int]]:
    """Closed spans [a,b] of maximal open components; runs start and end on edges."""
    n = len(seg)
    runs = []
    i = 0
    while i < n - 1:
        if not e_inside(seg[i], seg[i + 1]):
            i += 1
            continue
        j = i
        while j + 1 < n - 1 and v_inside(seg[j + 1]) and e_inside(seg[j + 1], seg[j + 2]):
            j += 1
        runs.append((i, j + 1))
        i = j + 1
    return runs


def _count_semichord_runs(seg, span, v_out, e_out) -> int:
    """Components of the open chord minus the inner disc, counted element-wise."""
    a, b = span
    elements = []
    for i in range(a, b):
        elements.append(("e", (seg[i], seg[i + 1])))
        if i + 1 < b:
            elements.append(("v", seg[i + 1]))
    count = 0
    prev_out = False
    for kind, item in elements:
        is_out = e_out(*item) if kind == "e" else v_out(item)
        if is_out and not prev_out:
            count += 1
        prev_out = is_out
    return count


def _face_components(
    g: PlaneGraph, faces: frozenset[int], barrier_edges: frozenset[Edge]
) -> list[frozenset[int]]:
    """Components of the face set under shared-edge adjacency minus barriers."""
    comps = []
    left = set(faces)
    while left:
        start = min(left)
        comp = {start}
        queue = deque([start])
        left.discard(start)
        while queue:
            f = queue.popleft()
            for u, v in g.faces()[f]:
                e = norm_edge(u, v)
                if e in barrier_edges:
                    continue
                other = g.face_of_dart((v, u))
                if other in left:
                    left.discard(other)
                    comp.add(other)
                    queue.append(other)
        comps.append(frozenset(comp))
    return comps


def _closure_vertices(g: PlaneGraph, faces: frozenset[int]) -> frozenset[int]:
    out: set[int] = set()
    for f in faces:
        out |= g.face_vertices(f)
    return frozenset(out)


def _closure_edges(g: PlaneGraph, faces: frozenset[int]) -> frozenset[Edge]:
    out: set[Edge] = set()
    for f in faces:
        out |= g.face_edges(f)
    return frozenset(out)


# -- segments ----------------------------------------------------------------------


def segments(q: CLConfiguration) -> list[Segment]:
    """All maximal intersections of linkage paths with the outer disc."""
    g = q.graph
    outer = q.outer_disc()
    r = q.depth
    discs = q.cycles.discs
    cyc_vsets = [c.vertex_set for c in q.cycles.cycles]
    cyc_esets = [c.edges for c in q.cycles.cycles]
    out: list[Segment] = []
    for pi, path in enumerate(q.linkage.paths):
        runs = _component_runs(
            tuple(path),
            lambda v: v in outer.vertices,
            lambda a, b: norm_edge(a, b) in outer.edges,
        )
        for a, b in runs:
            seg_vertices = tuple(path[a : b + 1])
            if not (seg_vertices[0] in cyc_vsets[r] and seg_vertices[-1] in cyc_vsets[r]):
                raise ConfigError(
                    f"segment {seg_vertices} does not start and end on the outer cycle"
                )
            ecc = min(
                (i for i in range(r + 1) if any(v in cyc_vsets[i] for v in seg_vertices)),
                default=r,
            )
            chords: list[Chord] = []
            for lvl in range(r + 1):
                disc = discs[lvl]
                v_inside = lambda v, d=disc, cv=cyc_vsets[lvl]: v in d.vertices and v not in cv
                e_inside = (
                    lambda x, y, d=disc, ce=cyc_esets[lvl]: norm_edge(x, y) in d.edges
                    and norm_edge(x, y) not in ce
                )
                for span in _chord_runs(seg_vertices, v_inside, e_inside):
                    semis = 0
                    if lvl >= 1:
                        inner = discs[lvl - 1]
                        semis = _count_semichord_runs(
                            seg_vertices,
                            span,
                            lambda v, d=inner: v not in d.vertices,
                            lambda x, y, d=inner: norm_edge(x, y) not in d.edges,
                        )
                    chords.append(Chord(lvl, span[0], span[1], semis))
            seg = Segment(
                index=len(out),
                path_index=pi,
                vertices=seg_vertices,
                eccentricity=ecc,
                extremal=(ecc == r),
                chords=tuple(chords),
                zone_faces=None,
            )
            out.append(seg)
    # zones for 0-chord-free segments
    central_face = min(q.cycles.discs[0].faces)
    finished: list[Segment] = []
    for seg in out:
        zone: Optional[frozenset[int]] = None
        if not seg.chords_at(0):
            comps = _face_components(g, outer.faces, seg.edges)
            non_central = [c for c in comps if central_face not in c]
            zone = frozenset().union(*non_central) if non_central else frozenset()
        finished.append(
            Segment(
                seg.index,
                seg.path_index,
                seg.vertices,
                seg.eccentricity,
                seg.extremal,
                seg.chords,
                zone,
            )
        )
    return finished


# -- convexity ----------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexityReport:
    ok: bool
    segment_index: Optional[int] = None
    clause: str = ""
    level: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def is_convex(q: CLConfiguration, segs: Optional[list[Segment]] = None) -> ConvexityReport:
    """Check the no-0-chord, unique-chord, two-semichord, and nesting clauses."""
    if segs is None:
        segs = segments(q)
    g = q.graph
    r = q.depth
    by_ecc: dict[int, list[Segment]] = {}
    for s in segs:
        by_ecc.setdefault(s.eccentricity, []).append(s)
    for s in segs:
        if s.chords_at(0):
            return ConvexityReport(False, s.index, "i", 0)
        for lvl in range(1, r + 1):
            at = s.chords_at(lvl)
            if len(at) > 1:
                return ConvexityReport(False, s.index, "ii.a", lvl)
            if at:
                if not any(v in q.cycles.cycles[lvl - 1].vertex_set for v in s.vertices):
                    return ConvexityReport(False, s.index, "ii.b", lvl)
                if at[0].semichords != 2:
                    return ConvexityReport(False, s.index, "ii.c", lvl)
        if s.eccentricity < r:
            assert s.zone_faces is not None
            zone_v = _closure_vertices(g, s.zone_faces)
            zone_e = _closure_edges(g, s.zone_faces)
            found = False
            for other in by_ecc.get(s.eccentricity + 1, ()):
                if other.index == s.index:
                    continue
                if set(other.vertices) <= zone_v and other.edges <= zone_e:
                    found = True
                    break
            if not found:
                return ConvexityReport(False, s.index, "iii", s.eccentricity)
    return ConvexityReport(True)


def is_touch_free(q: CLConfiguration) -> bool:
    """No linkage path meets the outer cycle in exactly one component."""
    outer = q.outer_cycle()
    vset = outer.vertex_set
    eset = outer.edges
    for path in q.linkage.paths:
        runs = _component_runs(
            tuple(path), lambda v: v in vset, lambda a, b: norm_edge(a, b) in eset
        )
        if len(runs) == 1:
            return False
    return True


def count_extremal(q: CLConfiguration, segs: Optional[list[Segment]] = None) -> int:
    if segs is None:
        segs = segments(q)
    return sum(1 for s in segs if s.extremal)


# -- out-structure -------------------------------------------------------------------


@dataclass(frozen=True)
class Hair:
    path_index: int
    vertices: tuple[int, ...]
    terminal: int
    attach: int
    kind: str  # "invading" | "bouncing"


@dataclass(frozen=True)
class OutStructure:
    flying_hairs: tuple[tuple[int, ...], ...]
    hairs: tuple[Hair, ...]
    out_segments: tuple[tuple[int, ...], ...]
    caves: tuple[frozenset[int], ...]  # face groups of out(L)
    flying_terminals: frozenset[int]
    invading_terminals: frozenset[int]
    bouncing_terminals: frozenset[int]


def out_structure(q: CLConfiguration, segs: Optional[list[Segment]] = None) -> OutStructure:
    """Decompose the linkage outside the outer disc and classify terminals."""
    g = q.graph
    outer_c = q.outer_cycle()
    outer_d = q.outer_disc()
    if segs is None:
        segs = segments(q)
    cyc_v = outer_c.vertex_set
    cyc_e = outer_c.edges
    inside_only_edges = outer_d.edges - cyc_e
    out_edges = set(cyc_e)
    for e in q.linkage.edges:
        if e not in inside_only_edges:
            out_edges.add(e)
    degree: dict[int, int] = {}
    for u, v in out_edges:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1

    flying: list[tuple[int, ...]] = []
    hairs: list[Hair] = []
    out_segs: list[tuple[int, ...]] = []
    t0: set[int] = set()
    t1: set[int] = set()
    t2: set[int] = set()
    for pi, path in enumerate(q.linkage.paths):
        contacts = [i for i, v in enumerate(path) if v in cyc_v]
        if not contacts:
            flying.append(tuple(path))
            t0.update((path[0], path[-1]))
            continue
        first, last = contacts[0], contacts[-1]
        for end_idx, term_idx in ((first, 0), (last, len(path) - 1)):
            term = path[term_idx]
            piece = (
                tuple(path[term_idx : end_idx + 1])
                if term_idx < end_idx
                else tuple(path[end_idx : term_idx + 1])
            )
            attach = path[end_idx]
            deg = degree.get(attach, 0)
            if deg >= 4:
                kind = "bouncing"
                t2.add(term)
            else:
                kind = "invading"
                t1.add(term)
            hairs.append(Hair(pi, piece, term, attach, kind))
        for a, b in zip(contacts, contacts[1:]):
            if b == a + 1 and norm_edge(path[a], path[b]) in cyc_e:
                continue
            sub = tuple(path[a : b + 1])
            internal = sub[1:-1]
            sub_edges = {norm_edge(x, y) for x, y in zip(sub, sub[1:])}
            if any(v in outer_d.vertices for v in internal) or (
                sub_edges & inside_only_edges
            ):
                continue
            out_segs.append(sub)

    # faces of out(L): group host faces crossing only non-out edges
    all_faces = frozenset(range(len(g.faces())))
    groups = _face_components(g, all_faces, frozenset(out_edges))
    central_face = min(q.cycles.discs[0].faces)
    disc_group = next(grp for grp in groups if central_face in grp)
    extremal_pieces = [s for s in segs if s.extremal]
    caves: list[frozenset[int]] = []
    for grp in groups:
        if grp == disc_group:
            continue
        grp_edges = _closure_edges(g, grp)
        grp_verts = _closure_vertices(g, grp)
        boundary_pieces: list[tuple[int, ...]] = []
        for piece in out_segs:
            pe = {norm_edge(a, b) for a, b in zip(piece, piece[1:])}
            if pe <= grp_edges:
                boundary_pieces.append(piece)
        for s in extremal_pieces:
            if len(s.vertices) == 1:
                if s.vertices[0] in grp_verts:
                    boundary_pieces.append(s.vertices)
            elif s.edges <= grp_edges:
                boundary_pieces.append(s.vertices)
        if boundary_pieces and _pieces_connected(boundary_pieces):
            caves.append(grp)
    return OutStructure(
        tuple(flying),
        tuple(hairs),
        tuple(out_segs),
        tuple(caves),
        frozenset(t0),
        frozenset(t1),
        frozenset(t2),
    )


def _pieces_connected(pieces: list[tuple[int, ...]]) -> bool:
    verts = [set(p) for p in pieces]
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(len(pieces)):
            if j not in seen and verts[i] & verts[j]:
                seen.add(j)
                queue.append(j)
    if len(seen) != len(pieces):
        return False
    return True


# -- segment tree ---------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentTree:
    """Rooted region tree with extra leaves for extremal segments.

    Node 0 is the root (central region); `kinds[i]` is "face" or "extremal";
    face nodes carry their region's face set in `regions`.
    """

    parent: tuple[int, ...]
    kinds: tuple[str, ...]
    regions: tuple[Optional[frozenset[int]], ...]
    segment_of_edge: tuple[Optional[int], ...]  # segment index labeling edge to parent
    height: int
    real_height: int
    dilation: int
    leaves: int


def segment_tree(q: CLConfiguration, segs: Optional[list[Segment]] = None) -> SegmentTree:
    """Weak dual of the inside structure, rooted at the central region."""
    if segs is None:
        segs = segments(q)
    conv = is_convex(q, segs)
    if not conv:
        raise ConfigError(
            f"segment tree needs a convex configuration "
            f"(segment {conv.segment_index} violates clause {conv.clause})"
        )
    g = q.graph
    outer = q.outer_disc()
    barriers = frozenset().union(*(s.edges for s in segs)) if segs else frozenset()
    comps = _face_components(g, outer.faces, barriers)
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for f in comp:
            comp_of[f] = ci
    central_face = min(q.cycles.discs[0].faces)
    root_comp = comp_of[central_face]

    tree_adj: dict[int, dict[int, int]] = {i: {} for i in range(len(comps))}
    for s in segs:
        if s.extremal:
            continue
        pairs: set[tuple[int, int]] = set()
        for u, v in s.edges:
            fa = g.face_of_dart((u, v))
            fb = g.face_of_dart((v, u))
            if fa in comp_of and fb in comp_of:
                ca, cb = comp_of[fa], comp_of[fb]
                if ca != cb:
                    pairs.add((min(ca, cb), max(ca, cb)))
        if len(pairs) != 1:
            raise ConfigError(
                f"segment {s.index} separates {len(pairs)} region pairs; "
                "the inside structure is not a tree"
            )
        (a, b) = pairs.pop()
        tree_adj[a][b] = s.index
        tree_adj[b][a] = s.index

    # orient from the root
    order = [root_comp]
    parent_comp: dict[int, Optional[int]] = {root_comp: None}
    seg_to_parent: dict[int, Optional[int]] = {root_comp: None}
    queue = deque([root_comp])
    while queue:
        x = queue.popleft()
        for y, sidx in sorted(tree_adj[x].items()):
            if y not in parent_comp:
                parent_comp[y] = x
                seg_to_parent[y] = sidx
                order.append(y)
                queue.append(y)
    if len(order) != len(comps):
        raise ConfigError("inside regions are not connected through segments")

    node_of_comp = {c: i for i, c in enumerate(order)}
    parent = [-1] * len(order)
    kinds = ["face"] * len(order)
    regions: list[Optional[frozenset[int]]] = [comps[c] for c in order]
    seg_labels: list[Optional[int]] = [None] * len(order)
    for c in order:
        if parent_comp[c] is not None:
            parent[node_of_comp[c]] = node_of_comp[parent_comp[c]]
            seg_labels[node_of_comp[c]] = seg_to_parent[c]

    # extremal leaves hang under weak-dual leaf regions
    tminus_degree = {c: len(tree_adj[c]) for c in range(len(comps))}
    for s in segs:
        if not s.extremal:
            continue
        host_comp = _extremal_region(g, q, s, comp_of)
        if host_comp is None or tminus_degree[host_comp] > 1:
            continue
        parent.append(node_of_comp[host_comp])
        kinds.append("extremal")
        regions.append(None)
        seg_labels.append(s.index)

    n = len(parent)
    children: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parent):
        if p >= 0:
            children[p].append(i)
    depth = [0] * n
    for i in range(1, n):
        depth[i] = depth[parent[i]] + 1
    leaf_nodes = [i for i in range(n) if not children[i]]
    height = max((depth[i] for i in leaf_nodes), default=0)
    deg = [len(children[i]) + (1 if parent[i] >= 0 else 0) for i in range(n)]
    real_height = 0
    for leaf in leaf_nodes:
        cnt = 0
        x = leaf
        while x != -1:
            if deg[x] > 2:
                cnt += 1
            x = parent[x]
        real_height = max(real_height, cnt + 1)
    dilation = _dilation(parent, children, deg)
    return SegmentTree(
        tuple(parent),
        tuple(kinds),
        tuple(regions),
        tuple(seg_labels),
        height,
        real_height,
        dilation,
        len(leaf_nodes),
    )


def _extremal_region(g, q, s: Segment, comp_of: dict[int, int]) -> Optional[int]:
    if len(s.vertices) >= 2:
        for u, v in s.edges:
            for f in g.faces_of_edge((u, v)):
                if f in comp_of:
                    return comp_of[f]
        return None
    v = s.vertices[0]
    for f, comp in comp_of.items():
        if v in g.face_vertices(f):
            return comp
    return None


def _dilation(parent, children, deg) -> int:
    n = len(parent)
    best = 0
    # chains: maximal paths whose internal vertices have degree 2 and are not the root
    for i in range(n):
        for j in range(i + 1, n):
            path = _tree_path(parent, i, j)
            if path is None:
                continue
            internal = path[1:-1]
            if all(deg[x] == 2 and x != 0 for x in internal):
                best = max(best, len(path) - 1)
    return best


def _tree_path(parent, a, b) -> Optional[list[int]]:
    anc_a = []
    x = a
    while x != -1:
        anc_a.append(x)
        x = parent[x]
    anc_set = set(anc_a)
    x = b
    path_b = []
    while x not in anc_set:
        path_b.append(x)
        x = parent[x]
    meet = x
    path_a = []
    y = a
    while y != meet:
        path_a.append(y)
        y = parent[y]
    return path_a + [meet] + list(reversed(path_b))


# -- parallel segments and types --------------------------------------------------------


def _cyclic_positions(q: CLConfiguration) -> dict[int, int]:
    return {v: i for i, v in enumerate(q.outer_cycle().vertices)}


def _arc_vertices(cyc: tuple[int, ...], a: int, b: int) -> frozenset[int]:
    """Vertices of the outer cycle from position a to b inclusive, forward."""
    n = len(cyc)
    out = [cyc[a % n]]
    i = a
    while i % n != b % n:
        i += 1
        out.append(cyc[i % n])
    return frozenset(out)


def _arc_edge(cyc: tuple[int, ...], a: int, b: int, skip: frozenset[Edge]) -> Optional[Edge]:
    n = len(cyc)
    i = a
    while i % n != b % n:
        e = norm_edge(cyc[i % n], cyc[(i + 1) % n])
        if e not in skip:
            return e
        i += 1
    return None


def parallel(
    q: CLConfiguration,
    s1: Segment,
    s2: Segment,
    segs: list[Segment],
    _pos: Optional[dict[int, int]] = None,
) -> bool:
    """The paper's three-clause parallelism test for two distinct segments."""
    if s1.index == s2.index:
        return True
    g = q.graph
    cyc = q.outer_cycle().vertices
    pos = _pos if _pos is not None else _cyclic_positions(q)
    pts: list[tuple[int, int]] = []  # (position, owner)
    for owner, s in ((1, s1), (2, s2)):
        for v in set(s.endpoints):
            pts.append((pos[v], owner))
    pts.sort()
    owners = [o for _, o in pts]
    changes = sum(1 for i in range(len(pts)) if owners[i] != owners[(i + 1) % len(pts)])
    if changes != 2:
        raise ConfigError(
            f"segments {s1.index} and {s2.index} interleave on the outer cycle"
        )
    # the two owner-change gaps are the connecting arcs
    arcs: list[tuple[int, int]] = []
    for i in range(len(pts)):
        j = (i + 1) % len(pts)
        if owners[i] != owners[j]:
            arcs.append((pts[i][0], pts[j][0]))
    for a, b in arcs:
        arc_set = _arc_vertices(cyc, a, b)
        for other in segs:
            if other.index in (s1.index, s2.index):
                continue
            x, y = other.endpoints
            if x in arc_set and y in arc_set:
                return False
    # clause (3): the region between the segments must not contain disc 0
    barriers = s1.edges | s2.edges
    outer_faces = q.outer_disc().faces
    comps = _face_components(g, outer_faces, frozenset(barriers))
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for f in comp:
            comp_of[f] = ci
    central = comp_of[min(q.cycles.discs[0].faces)]
    a, b = arcs[0]
    probe = _arc_edge(cyc, a, b, frozenset(barriers))
    if probe is None:
        return True
    inner_faces = [f for f in g.faces_of_edge(probe) if f in comp_of]
    if not inner_faces:
        return True
    between = comp_of[inner_faces[0]]
    return between != central


def segment_types(q: CLConfiguration, segs: Optional[list[Segment]] = None) -> list[list[Segment]]:
    """Equivalence classes of the parallelism relation, transitivity verified."""
    if segs is None:
        segs = segments(q)
    n = len(segs)
    pos = _cyclic_positions(q)
    rel = [[False] * n for _ in range(n)]
    for i in range(n):
        rel[i][i] = True
        for j in range(i + 1, n):
            p = parallel(q, segs[i], segs[j], segs, pos)
            rel[i][j] = rel[j][i] = p
    for i in range(n):
        for j in range(n):
            if not rel[i][j]:
                continue
            for k in range(n):
                if rel[j][k] and not rel[i][k]:
                    raise TypeRelationError(
                        f"parallelism is not transitive on segments "
                        f"({segs[i].index}, {segs[j].index}, {segs[k].index})"
                    )
    classes: list[list[Segment]] = []
    assigned = [False] * n
    for i in range(n):
        if assigned[i]:
            continue
        members = [j for j in range(n) if rel[i][j]]
        for j in members:
            assigned[j] = True
        classes.append([segs[j] for j in members])
    return classes


# -- cyclic connectivity helper ----------------------------------------------------------


def cyclically_connected(g: PlaneGraph, edge_set: frozenset[Edge]) -> bool:
    """Every two edges linked via consecutive-in-rotation adjacencies."""
    edges = sorted(edge_set)
    if len(edges) <= 1:
        return True
    adj: dict[Edge, set[Edge]] = {e: set() for e in edges}
    for v in g.vertices:
        rot = g.rotation[v]
        d = len(rot)
        if d < 2:
            continue
        for i in range(d):
            e1 = norm_edge(v, rot[i])
            e2 = norm_edge(v, rot[(i + 1) % d])
            if e1 in adj and e2 in adj and e1 != e2:
                adj[e1].add(e2)
                adj[e2].add(e1)
    seen = {edges[0]}
    queue = deque([edges[0]])
    while queue:
        e = queue.popleft()
        for f in adj[e]:
            if f not in seen:
                seen.add(f)
                queue.append(f)
    return len(seen) == len(edges)


# -- reduced pairs ------------------------------------------------------------------------


class ReductionUnsupported(ConfigError):
    """Contraction would create parallel edges; host outside the simple-graph regime."""


def reduce_configuration(q: CLConfiguration) -> CLConfiguration:
    """Contract every linkage edge lying on a cycle (the reduced pair).

    Cheapness, tightness, and convexity verdicts are invariant under this
    contraction; tests exercise that invariance.
    """
    g = q.graph
    cycle_edges: set[Edge] = set()
    for c in q.cycles.cycles:
        cycle_edges |= c.edges
    doomed = sorted(q.linkage.edges & cycle_edges)
    if not doomed:
        return q
    rot: dict[int, list[int]] = {v: list(g.rotation[v]) for v in g.vertices}
    alias = {v: v for v in g.vertices}

    def find(v: int) -> int:
        while alias[v] != v:
            alias[v] = alias[alias[v]]
            v = alias[v]
        return v

    for u0, v0 in doomed:
        u, v = find(u0), find(v0)
        if u == v:
            continue
        common = (set(rot[u]) & set(rot[v])) - {u, v}
        if common:
            raise ReductionUnsupported(
                f"contracting ({u},{v}) duplicates edges to {sorted(common)[:3]}"
            )
        iu = rot[u].index(v)
        iv = rot[v].index(u)
        merged = (
            rot[u][iu + 1 :]
            + rot[u][:iu]
            + rot[v][iv + 1 :]
            + rot[v][:iv]
        )
        for w in rot[v]:
            if w != u:
                rot[w][rot[w].index(v)] = u
        rot[u] = merged
        del rot[v]
        alias[v] = u

    survivors = sorted(rot)
    remap = {old: i + 1 for i, old in enumerate(survivors)}

    def mapped(v: int) -> int:
        return remap[find(v)]

    new_rot = {remap[v]: [mapped(w) for w in rot[v]] for v in rot}
    new_edges = sorted(
        {norm_edge(mapped(a), mapped(b)) for a, b in g.edges if find(a) != find(b)}
    )
    outer = None
    if g.outer_dart is not None:
        for a, b in g.faces()[g.outer_face()]:
            if find(a) != find(b):
                outer = (mapped(a), mapped(b))
                break
    g2 = PlaneGraph(len(survivors), new_edges, new_rot, outer)

    def collapse(seq) -> tuple[int, ...]:
        out = []
        for v in seq:
            mv = mapped(v)
            if not out or out[-1] != mv:
                out.append(mv)
        return tuple(out)

    new_cycles = []
    for c in q.cycles.cycles:
        seq = list(collapse(c.vertices))
        if len(seq) > 1 and seq[0] == seq[-1]:
            seq.pop()
        if len(seq) < 3:
            raise ReductionUnsupported("a cycle degenerates under contraction")
        new_cycles.append(Cycle(tuple(seq)))
    from .concentric import make_concentric

    cc2 = make_concentric(g2, new_cycles)
    new_paths = tuple(collapse(p) for p in q.linkage.paths)
    return CLConfiguration(g2, cc2, Linkage(new_paths))


# -- tilted grids ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TiltedGrid:
    """Two orthogonal path families whose contraction is a square grid."""

    x_paths: tuple[tuple[int, ...], ...]
    z_paths: tuple[tuple[int, ...], ...]

    @property
    def capacity(self) -> int:
        return len(self.x_paths)

    def intersection(self, i: int, j: int) -> tuple[frozenset[int], frozenset[Edge]]:
        xi = self.x_paths[i - 1]
        zj = self.z_paths[j - 1]
        xv, zv = set(xi), set(zj)
        xe = {norm_edge(a, b) for a, b in zip(xi, xi[1:])}
        ze = {norm_edge(a, b) for a, b in zip(zj, zj[1:])}
        return frozenset(xv & zv), frozenset(xe & ze)


def perimeter_cycle(u: TiltedGrid) -> Cycle:
    """X_1 + Z_1 + X_r + Z_r assembled into a simple cycle."""
    r = u.capacity
    if r < 2:
        raise ConfigError("perimeter needs capacity >= 2")
    edge_set: set[Edge] = set()
    for p in (u.x_paths[0], u.x_paths[-1], u.z_paths[0], u.z_paths[-1]):
        edge_set.update(norm_edge(a, b) for a, b in zip(p, p[1:]))
    deg: dict[int, list[int]] = {}
    for a, b in edge_set:
        deg.setdefault(a, []).append(b)
        deg.setdefault(b, []).append(a)
    if any(len(nb) != 2 for nb in deg.values()):
        raise ConfigError("perimeter paths do not close into a cycle")
    start = min(deg)
    seq = [start]
    prev = None
    cur = start
    while True:
        a, b = deg[cur]
        nxt = a if a != prev else b
        if nxt == start:
            break
        seq.append(nxt)
        prev, cur = cur, nxt
    if len(seq) != len(deg):
        raise ConfigError("perimeter is not a single cycle")
    return Cycle(tuple(seq))


def verify_tilted_grid(
    g: PlaneGraph, u: TiltedGrid, linkage: Optional[Linkage] = None
) -> CheckResult:
    """Full invariant check; with a linkage, also checks tidiness."""
    problems: list[str] = []
    r = u.capacity
    if len(u.z_paths) != r:
        return CheckResult(False, ("X and Z families differ in size",))
    for fam_name, fam in (("X", u.x_paths), ("Z", u.z_paths)):
        used: set[int] = set()
        for p in fam:
            if len(set(p)) != len(p):
                problems.append(f"{fam_name} path revisits a vertex")
            for a, b in zip(p, p[1:]):
                if not g.has_edge(a, b):
                    problems.append(f"{fam_name} path uses non-edge ({a},{b})")
            if used & set(p):
                problems.append(f"{fam_name} paths are not vertex-disjoint")
            used |= set(p)
    if problems:
        return CheckResult(False, tuple(problems))
    spans_x: dict[tuple[int, int], tuple[int, int]] = {}
    spans_z: dict[tuple[int, int], tuple[int, int]] = {}
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            vs, es = u.intersection(i, j)
            if not vs:
                problems.append(f"intersection ({i},{j}) is empty")
                continue
            xi = u.x_paths[i - 1]
            idxs = sorted(k for k, v in enumerate(xi) if v in vs)
            if idxs[-1] - idxs[0] != len(idxs) - 1:
                problems.append(f"intersection ({i},{j}) is not contiguous along X_{i}")
            zj = u.z_paths[j - 1]
            jdxs = sorted(k for k, v in enumerate(zj) if v in vs)
            if jdxs[-1] - jdxs[0] != len(jdxs) - 1:
                problems.append(f"intersection ({i},{j}) is not contiguous along Z_{j}")
            if len(es) != len(vs) - 1:
                problems.append(f"intersection ({i},{j}) is not a path")
            spans_x[(i, j)] = (idxs[0], idxs[-1])
            spans_z[(i, j)] = (jdxs[0], jdxs[-1])
            if (i in (1, r)) and (j in (1, r)) and es:
                problems.append(f"corner intersection ({i},{j}) has edges")
    if problems:
        return CheckResult(False, tuple(problems))
    for i in range(1, r + 1):
        spans = [spans_x[(i, j)] for j in range(1, r + 1)]
        fwd = all(spans[j][1] < spans[j + 1][0] for j in range(r - 1))
        rev = all(spans[j][0] > spans[j + 1][1] for j in range(r - 1))
        if not (fwd or rev):
            problems.append(f"intersections along X_{i} are out of order")
        xi = u.x_paths[i - 1]
        lo = min(s[0] for s in spans)
        hi = max(s[1] for s in spans)
        if lo != 0 or hi != len(xi) - 1:
            problems.append(f"X_{i} has a tail beyond its extreme intersections")
    for j in range(1, r + 1):
        spans = [spans_z[(i, j)] for i in range(1, r + 1)]
        fwd = all(spans[i][1] < spans[i + 1][0] for i in range(r - 1))
        rev = all(spans[i][0] > spans[i + 1][1] for i in range(r - 1))
        if not (fwd or rev):
            problems.append(f"intersections along Z_{j} are out of order")
        zj = u.z_paths[j - 1]
        lo = min(s[0] for s in spans)
        hi = max(s[1] for s in spans)
        if lo != 0 or hi != len(zj) - 1:
            problems.append(f"Z_{j} has a tail beyond its extreme intersections")
    if problems:
        return CheckResult(False, tuple(problems))
    if linkage is not None and r >= 2:
        from .plane import closed_interior

        disc = closed_interior(g, perimeter_cycle(u))
        zv = frozenset(v for p in u.z_paths for v in p)
        ze = frozenset(
            norm_edge(a, b) for p in u.z_paths for a, b in zip(p, p[1:])
        )
        lv = linkage.vertices & disc.vertices
        le = linkage.edges & disc.edges
        if lv != zv:
            problems.append(
                f"tidiness: linkage meets the disc in {len(lv)} vertices, expected {len(zv)}"
            )
        if le != ze:
            problems.append("tidiness: linkage edges in the disc differ from the Z family")
    return CheckResult(not problems, tuple(problems))


class TiltedGridConstructionError(ConfigError):
    pass


def extract_tilted_grid(
    q: CLConfiguration, cls: list[Segment], segs: Optional[list[Segment]] = None
) -> TiltedGrid:
    """Build an L-tidy tilted grid of capacity ceil(|cls|/2) from a parallel class."""
    if not cls:
        raise ConfigError("empty segment class")
    g = q.graph
    ordered = sorted(cls, key=lambda s: s.eccentricity)
    eccs = [s.eccentricity for s in ordered]
    for a, b in zip(eccs, eccs[1:]):
        if b != a + 1:
            raise TiltedGridConstructionError(
                f"class eccentricities {eccs} do not form a consecutive run"
            )
    m = len(ordered)
    mprime = (m + 1) // 2
    if mprime == 1:
        s = ordered[0]
        deepest = q.cycles.cycles[s.eccentricity]
        meet = [v for v in s.vertices if v in deepest.vertex_set]
        if not meet:
            raise TiltedGridConstructionError("segment misses its eccentricity cycle")
        v = meet[0]
        u = TiltedGrid(((v,),), ((v,),))
        return u
    for s in ordered[:mprime]:
        deepest = q.cycles.cycles[s.eccentricity]
        hits = [v for v in s.vertices if v in deepest.vertex_set]
        run = all(
            g.has_edge(a, b) or a == b
            for a, b in zip(hits, hits[1:])
        )
        if not hits:
            raise TiltedGridConstructionError("segment misses its eccentricity cycle")
    s1, sm = ordered[0], ordered[mprime - 1]
    a_idx = eccs[mprime - 1]  # innermost annulus cycle index
    b_idx = a_idx + mprime - 1
    if b_idx > q.depth:
        raise TiltedGridConstructionError("annulus exceeds the cycle family")
    ann_faces = q.cycles.discs[b_idx].faces - q.cycles.discs[a_idx].faces
    # region between s1 and sm
    barriers = s1.edges | sm.edges
    outer_faces = q.outer_disc().faces
    comps = _face_components(g, outer_faces, frozenset(barriers))
    comp_of = {}
    for ci, comp in enumerate(comps):
        for f in comp:
            comp_of[f] = ci
    pos = _cyclic_positions(q)
    cyc = q.outer_cycle().vertices
    pts = []
    for owner, s in ((1, s1), (2, sm)):
        for v in set(s.endpoints):
            pts.append((pos[v], owner))
    pts.sort()
    owners = [o for _, o in pts]
    arcs = []
    for i in range(len(pts)):
        j = (i + 1) % len(pts)
        if owners[i] != owners[j]:
            arcs.append((pts[i][0], pts[j][0]))
    if len(arcs) != 2:
        raise TiltedGridConstructionError("class endpoints interleave on the outer cycle")
    probe = _arc_edge(cyc, arcs[0][0], arcs[0][1], frozenset(barriers))
    if probe is None:
        raise TiltedGridConstructionError("degenerate between-region")
    inner = [f for f in g.faces_of_edge(probe) if f in comp_of]
    between = comps[comp_of[inner[0]]]
    ds_and_ann = frozenset(between) & ann_faces
    delta_comps = _face_components(g, ds_and_ann, frozenset())
    if not delta_comps:
        raise TiltedGridConstructionError("empty annulus crossing")
    delta = min(delta_comps, key=lambda c: min(c))
    delta_edges = _closure_edges(g, delta)

    def crop(path_vertices: tuple[int, ...], closed: bool) -> tuple[int, ...]:
        n = len(path_vertices)
        idx_edges = []
        rng = range(n) if closed else range(n - 1)
        for k in rng:
            a, b = path_vertices[k], path_vertices[(k + 1) % n]
            if norm_edge(a, b) in delta_edges:
                idx_edges.append(k)
        if not idx_edges:
            raise TiltedGridConstructionError("a family path misses the crop region")
        if closed:
            # contiguous arc on the cycle, possibly wrapping
            marks = set(idx_edges)
            start = None
            for k in idx_edges:
                if (k - 1) % n not in marks:
                    start = k
                    break
            if start is None:
                raise TiltedGridConstructionError("cycle crop is the whole cycle")
            seq = [path_vertices[start]]
            k = start
            while k in marks:
                seq.append(path_vertices[(k + 1) % n])
                k = (k + 1) % n
            return tuple(seq)
        lo, hi = min(idx_edges), max(idx_edges)
        if idx_edges != list(range(lo, hi + 1)):
            raise TiltedGridConstructionError("path crop is not contiguous")
        return tuple(path_vertices[lo : hi + 2])

    x_paths = []
    for lvl in range(a_idx, b_idx + 1):
        x_paths.append(crop(q.cycles.cycles[lvl].vertices, closed=True))
    z_paths = []
    for s in ordered[:mprime]:
        z_paths.append(crop(s.vertices, closed=False))
    # orient: X_1 innermost; align Z order along X paths by position
    u = TiltedGrid(tuple(x_paths), tuple(z_paths))
    u = _orient_tilted(u)
    check = verify_tilted_grid(g, u, q.linkage)
    if not check:
        raise TiltedGridConstructionError(
            f"extracted grid failed verification: {check.problems[:3]}"
        )
    return u


def _orient_tilted(u: TiltedGrid) -> TiltedGrid:
    """Normalize path directions so intersections run in increasing order."""
    r = u.capacity
    x_paths = list(u.x_paths)
    z_paths = list(u.z_paths)
    if r < 2:
        return u
    # order Z along X_1: sort z indices by position of intersection on X_1
    x1 = x_paths[0]
    posx1 = {v: k for k, v in enumerate(x1)}

    def z_key(zp):
        hits = [posx1[v] for v in zp if v in posx1]
        return min(hits) if hits else 1 << 30

    z_paths.sort(key=z_key)
    z1 = z_paths[0]
    posz1 = {v: k for k, v in enumerate(z1)}

    def x_key(xp):
        hits = [posz1[v] for v in xp if v in posz1]
        return min(hits) if hits else 1 << 30

    x_paths.sort(key=x_key)
    # flip paths so that intersections increase
    x1 = x_paths[0]
    posx1 = {v: k for k, v in enumerate(x1)}
    for j in range(len(z_paths)):
        zp = z_paths[j]
        hits = [k for k, v in enumerate(zp) if v in set(x_paths[0])]
        if hits and hits[0] > len(zp) - 1 - hits[-1]:
            z_paths[j] = tuple(reversed(zp))
    zset0 = set(z_paths[0])
    for i in range(len(x_paths)):
        xp = x_paths[i]
        hits = [k for k, v in enumerate(xp) if v in zset0]
        if hits and hits[0] > len(xp) - 1 - hits[-1]:
            x_paths[i] = tuple(reversed(xp))
    return TiltedGrid(tuple(x_paths), tuple(z_paths))
