"""Constructive rerouting: boundary patterns in grids, disk untangling, and
linkage improvement over tilted grids.

`route_pattern` realizes a non-crossing boundary matching inside a square
grid with the explicit staircase construction (down/right/up for side edges,
rank-staggered descents for crossing edges). `untangle_disk` replaces the
lines of a vertical crossing by fewer non-crossing chords, checked by
reassembling the outside linkage. `improve_over_tilted_grid` composes the
two through the contraction/lift between a tilted grid and its
representation grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .clconfig import ConfigError, TiltedGrid, perimeter_cycle
from .oracle import Linkage
from .plane import (
    CheckResult,
    Cycle,
    DiskRegion,
    Edge,
    PlaneGraph,
    PlaneGraphError,
    TopologicalMinorModel,
    closed_interior,
    grid_vertex,
    make_grid,
    norm_edge,
    verify_topological_minor,
)

Label = tuple[str, int]  # ("up" | "down", column)


class PatternError(ValueError):
    """Boundary pattern violates the routing preconditions."""


@dataclass(frozen=True)
class BoundaryPattern:
    """1-regular matching on the labels up_1..up_k, down_1..down_k.

    Valid patterns are non-crossing with respect to the boundary order
    up_1..up_k, down_k..down_1 (equivalently: adding the consecutive
    boundary edges keeps the graph outerplanar), and every same-side edge
    spans an odd column gap so its length (|i-j|+1)/2 is an integer.
    """

    k: int
    edges: frozenset[frozenset[Label]]

    def __post_init__(self):
        seen: set[Label] = set()
        for e in self.edges:
            if len(e) != 2:
                raise PatternError(f"pattern edge {set(e)} is not a pair")
            for side, i in e:
                if side not in ("up", "down") or not 1 <= i <= self.k:
                    raise PatternError(f"bad label {(side, i)}")
                if (side, i) in seen:
                    raise PatternError(f"label {(side, i)} matched twice")
                seen.add((side, i))

    def is_perfect(self) -> bool:
        return len(self.edges) == self.k

    def covered(self) -> frozenset[Label]:
        return frozenset(l for e in self.edges for l in e)


def _boundary_position(label: Label, k: int) -> int:
    """Position along the cyclic order up_1..up_k, down_k..down_1."""
    side, i = label
    return i - 1 if side == "up" else 2 * k - i


def validate_pattern(p: BoundaryPattern) -> None:
    """Reject crossing pairs and even-gap side edges, naming the offender."""
    k = p.k
    intervals = []
    for e in p.edges:
        a, b = sorted(_boundary_position(l, k) for l in e)
        intervals.append((a, b, e))
    for (a1, b1, e1), (a2, b2, e2) in itertools.combinations(intervals, 2):
        if (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1):
            raise PatternError(f"edges {set(e1)} and {set(e2)} cross")
    for e in p.edges:
        (s1, i), (s2, j) = sorted(e)
        if s1 == s2 and (abs(i - j) % 2) == 0:
            raise PatternError(
                f"same-side edge {set(e)} has even gap; length (|i-j|+1)/2 "
                "is not an integer"
            )


def _pin(g: PlaneGraph, k: int, label: Label) -> int:
    side, i = label
    row = 1 if side == "up" else k
    return grid_vertex(k, k, row, i)


def route_pattern(k: int, pattern: BoundaryPattern) -> TopologicalMinorModel:
    """Vertex-disjoint paths in the k x k grid realizing the pattern.

    Side edges use the (l-1, 2l-1, l-1) staircase at their nesting depth;
    crossing edges descend, jog at a rank-staggered middle row, and descend
    again. Partial matchings (unmatched labels allowed) route the same way
    with the jog rows packed below the deepest side staircase.
    """
    if pattern.k != k:
        raise PatternError(f"pattern is for side {pattern.k}, not {k}")
    validate_pattern(pattern)
    g = make_grid(k, k)
    up_edges, down_edges, crossing = [], [], []
    for e in pattern.edges:
        sides = sorted(e)
        (sa, ia), (sb, ib) = sides
        if sa == sb == "up":
            up_edges.append((min(ia, ib), max(ia, ib), e))
        elif sa == sb == "down":
            down_edges.append((min(ia, ib), max(ia, ib), e))
        else:
            down_i = ia if sa == "down" else ib
            up_i = ib if sa == "down" else ia
            crossing.append((up_i, down_i, e))
    b_c = len(crossing)
    q = max(len(up_edges), len(down_edges))
    if 2 * q + b_c > k:
        raise PatternError(
            f"pattern needs {2 * q + b_c} rows but the grid has only {k}"
        )

    def depth(pairs, a, b) -> int:
        return 1 + max(
            (depth(pairs, a2, b2) for a2, b2, _ in pairs if a < a2 and b2 < b),
            default=0,
        )

    phi1: dict[frozenset[Label], tuple[int, ...]] = {}

    def realize(coords: list[tuple[int, int]]) -> tuple[int, ...]:
        return tuple(grid_vertex(k, k, r, c) for r, c in coords)

    for i, j, e in up_edges:
        if pattern.is_perfect():
            l = (j - i + 1) // 2
        else:
            l = depth(up_edges, i, j)
        coords = (
            [(r, i) for r in range(1, l + 1)]
            + [(l, c) for c in range(i + 1, j + 1)]
            + [(r, j) for r in range(l - 1, 0, -1)]
        )
        phi1[e] = realize(coords)
    for i, j, e in down_edges:
        if pattern.is_perfect():
            l = (j - i + 1) // 2
        else:
            l = depth(down_edges, i, j)
        coords = (
            [(r, i) for r in range(k, k - l, -1)]
            + [(k - l + 1, c) for c in range(i + 1, j + 1)]
            + [(r, j) for r in range(k - l + 2, k + 1)]
        )
        phi1[e] = realize(coords)
    cross_up_cols = sorted(u for u, _, _ in crossing)
    for up_i, down_j, e in crossing:
        rank = cross_up_cols.index(up_i) + 1
        stretch = down_j - up_i
        if stretch >= 0:
            jog = 1 + q + b_c - rank
            cols = range(up_i + 1, down_j + 1)
        else:
            jog = 1 + q + rank - 1
            cols = range(up_i - 1, down_j - 1, -1)
        coords = (
            [(r, up_i) for r in range(1, jog + 1)]
            + [(jog, c) for c in cols]
            + [(r, down_j) for r in range(jog + 1, k + 1)]
        )
        if len(coords) <= 1:
            raise PatternError(f"degenerate crossing edge {set(e)}")
        phi1[e] = realize(coords)

    phi0 = {label: _pin(g, k, label) for label in pattern.covered()}
    model = TopologicalMinorModel(phi0, phi1)
    check = verify_route(k, pattern, model)
    if not check:
        raise PatternError(f"internal: routing failed verification: {check.problems[:3]}")
    return model


def verify_route(k: int, pattern: BoundaryPattern, model: TopologicalMinorModel) -> CheckResult:
    """Independent check: paths in-grid, pinned, pairwise internally disjoint."""
    g = make_grid(k, k)
    problems: list[str] = []
    for e in pattern.edges:
        path = model.phi1.get(e)
        if path is None:
            problems.append(f"missing path for {set(e)}")
            continue
        ends = {path[0], path[-1]}
        want = {_pin(g, k, l) for l in e}
        if ends != want:
            problems.append(f"path for {set(e)} not pinned to {want}")
    base = verify_topological_minor(g, model, [tuple(e) for e in pattern.edges])
    if not base:
        problems.extend(base.problems)
    return CheckResult(not problems, tuple(problems))


def all_boundary_patterns(k: int):
    """Every valid perfect pattern on grid side k (non-crossing matchings)."""
    order = [("up", i) for i in range(1, k + 1)] + [
        ("down", i) for i in range(k, 0, -1)
    ]

    def rec(labels: tuple[Label, ...]):
        if not labels:
            yield frozenset()
            return
        first = labels[0]
        for idx in range(1, len(labels), 2):
            partner = labels[idx]
            left = labels[1:idx]
            right = labels[idx + 1 :]
            for a in rec(left):
                for b in rec(right):
                    yield a | b | {frozenset({first, partner})}

    for edges in rec(tuple(order)):
        p = BoundaryPattern(k, edges)
        try:
            validate_pattern(p)
        except PatternError:
            continue
        yield p


# -- vertical crossings and untangling --------------------------------------------------


@dataclass(frozen=True)
class VerticalCrossing:
    """Lines of a linkage stacked across a disk, with up/down boundary ends."""

    disk: DiskRegion
    lines: tuple[tuple[int, ...], ...]  # ordered from the first simplicial face
    up: tuple[int, ...]  # up boundary endpoint of lines[i]
    down: tuple[int, ...]


def vertical_crossing(g: PlaneGraph, linkage: Linkage, disk: DiskRegion) -> VerticalCrossing:
    """Classify the linkage's trace on the disk, or raise ConfigError.

    The components of linkage-on-disk must be boundary-to-boundary paths
    whose endpoints stack along the boundary cycle (palindromic endpoint
    order), i.e. the chord structure has exactly two simplicial faces.
    """
    boundary = disk.cycle
    bverts = boundary.vertex_set
    lines: list[tuple[int, ...]] = []
    for path in linkage.paths:
        from .clconfig import _component_runs

        runs = _component_runs(
            tuple(path),
            lambda v: v in disk.vertices,
            lambda a, b: norm_edge(a, b) in disk.edges,
        )
        for a, b in runs:
            piece = tuple(path[a : b + 1])
            if piece[0] not in bverts or piece[-1] not in bverts:
                raise ConfigError(f"disk trace {piece} does not join boundary points")
            lines.append(piece)
    if not lines:
        raise ConfigError("linkage does not meet the disk")
    # read endpoint labels around the boundary
    occupied: dict[int, int] = {}
    for idx, piece in enumerate(lines):
        for v in (piece[0], piece[-1]):
            if v in occupied and len(piece) > 1:
                raise ConfigError(f"two lines share boundary point {v}")
            occupied[v] = idx
    seq = [occupied[v] for v in boundary.vertices if v in occupied]
    if len(seq) != 2 * len(lines):
        # single-vertex lines contribute one boundary point twice
        raise ConfigError("boundary endpoints do not pair up")
    n = len(lines)
    for shift in range(2 * n):
        rot = seq[shift:] + seq[:shift]
        first, second = rot[:n], rot[n:]
        if sorted(first) == list(range(n)) and first == list(reversed(second)):
            order = first
            # boundary vertices in the same rotation
            pts = [v for v in boundary.vertices if v in occupied]
            pts = pts[shift:] + pts[:shift]
            up_of = {order[i]: pts[i] for i in range(n)}
            down_of = {second[i]: pts[n + i] for i in range(n)}
            ordered_lines = tuple(lines[i] for i in order)
            up = tuple(up_of[i] for i in order)
            down = tuple(down_of[i] for i in order)
            return VerticalCrossing(disk, ordered_lines, up, down)
    raise ConfigError("lines do not stack: the crossing is not vertical")


def _noncrossing_partial_matchings(points: list[int]):
    """All non-crossing partial matchings on points in cyclic order, by size."""
    n = len(points)

    def rec(idx: tuple[int, ...]):
        if not idx:
            yield frozenset()
            return
        first = idx[0]
        # first stays unmatched
        for rest in rec(idx[1:]):
            yield rest
        for pos in range(1, len(idx)):
            partner = idx[pos]
            inside = idx[1:pos]
            outside = idx[pos + 1 :]
            for a in rec(inside):
                for b in rec(outside):
                    yield a | b | {frozenset({first, partner})}

    seen = set()
    for m in rec(tuple(range(n))):
        if m in seen:
            continue
        seen.add(m)
        yield frozenset(
            frozenset({points[i] for i in pair}) for pair in m
        )


@dataclass(frozen=True)
class Untangling:
    chords: tuple[tuple[int, int], ...]  # non-crossing boundary connections
    kept_pieces: tuple[tuple[int, ...], ...]  # outside sub-linkage R


def _outside_atoms(linkage: Linkage, disk: DiskRegion) -> list[tuple[int, ...]]:
    """Maximal linkage runs outside the closed disk, split at boundary contacts.

    Atoms keep their boundary endpoints but contain no disk edges; runs
    along the boundary cycle itself are dropped (the kept sub-linkage must
    live in the graph with the closed disk removed).
    """
    atoms: list[tuple[int, ...]] = []
    bverts = disk.cycle.vertex_set
    for path in linkage.paths:
        cur: list[int] = []
        for v in path:
            if v in disk.vertices and v not in bverts:
                if len(cur) >= 2:
                    atoms.append(tuple(cur))
                cur = []
                continue
            if cur:
                e = norm_edge(cur[-1], v)
                if e in disk.edges:
                    if len(cur) >= 2:
                        atoms.append(tuple(cur))
                    cur = []
                elif v in bverts:
                    cur.append(v)
                    atoms.append(tuple(cur))
                    cur = []
                    continue
            if not cur and v in bverts:
                cur = [v]
                continue
            cur.append(v)
        if len(cur) >= 2:
            atoms.append(tuple(cur))
        elif len(cur) == 1 and cur[0] not in bverts:
            atoms.append(tuple(cur))
    return [a for a in atoms if len(a) >= 2 or a[0] not in bverts]


def _abstract_disjoint_paths(adj: dict[int, list[tuple[int, int]]], pairs, n_edges: int):
    """Vertex-disjoint paths over labeled edges; returns used edge ids or None."""
    used_vertices: set[int] = set(v for p in pairs for v in p)
    used_edges: set[int] = set()
    order = list(pairs)

    def route(i: int):
        if i == len(order):
            return True
        s, t = order[i]

        def walk(v: int) -> bool:
            if v == t:
                return route(i + 1)
            for w, eid in sorted(adj.get(v, ())):
                if eid in used_edges:
                    continue
                if w != t and (w in used_vertices):
                    continue
                used_edges.add(eid)
                if w != t:
                    used_vertices.add(w)
                if walk(w):
                    return True
                used_edges.discard(eid)
                if w != t:
                    used_vertices.discard(w)
            return False

        if walk(s):
            return True
        return False

    for s, t in order:
        if s not in adj or t not in adj:
            return None
    if route(0):
        return used_edges
    return None


def untangle_disk(
    g: PlaneGraph,
    linkage: Linkage,
    disk: DiskRegion,
    k: int,
    budget: int = 200_000,
    attach_points: Optional[list[int]] = None,
) -> Optional[Untangling]:
    """Replace the disk trace by fewer non-crossing chords, or None.

    Exhaustively searches non-crossing partial matchings on the boundary
    attachment points (smallest first); a candidate is accepted when some
    sub-collection of the strictly-outside linkage runs plus the chords
    forms disjoint paths realizing the original pattern.
    """
    crossing = vertical_crossing(g, linkage, disk)
    r = len(crossing.lines)
    if len(linkage.paths) != k:
        raise ConfigError(f"linkage has {len(linkage.paths)} paths, caller said {k}")
    if r <= 2 ** k:
        raise ConfigError(f"need more than 2^{k} lines, got {r}")
    atoms = _outside_atoms(linkage, disk)
    pattern = linkage.pattern
    if attach_points is None:
        attach_points = sorted(set(crossing.up) | set(crossing.down))
    boundary_pts = [v for v in disk.cycle.vertices if v in set(attach_points)]
    pairs = [tuple(sorted(p)) for p in sorted((sorted(x) for x in pattern))]
    spent = 0
    candidates = sorted(
        _noncrossing_partial_matchings(boundary_pts),
        key=lambda m: (len(m), sorted(sorted(pair) for pair in m)),
    )
    for matching in candidates:
        spent += 1
        if spent > budget:
            return None
        if len(matching) >= r:
            continue
        chords = tuple(tuple(sorted(pair)) for pair in sorted(matching, key=sorted))
        adj: dict[int, list[tuple[int, int]]] = {}
        for eid, atom in enumerate(atoms):
            a, b = atom[0], atom[-1]
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))
        for cid, (a, b) in enumerate(chords):
            eid = len(atoms) + cid
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))
        used = _abstract_disjoint_paths(adj, pairs, len(atoms) + len(chords))
        if used is None:
            continue
        if not all(len(atoms) + cid in used for cid in range(len(chords))):
            continue  # prefer matchings with no redundant chords
        kept = tuple(atoms[eid] for eid in sorted(used) if eid < len(atoms))
        return Untangling(chords, kept)
    return None


# -- improvement over tilted grids --------------------------------------------------------


class ImprovementError(ConfigError):
    pass


def tilted_grid_structure(g: PlaneGraph, u: TiltedGrid):
    """Intersection paths plus connector subpaths, keyed for lifting.

    Returns (ipaths, connectors): ipaths[(i,j)] is the ordered vertex run of
    I_{i,j} along X_i; connectors[("x", i, j)] joins I_{i,j} to I_{i,j+1}
    along X_i inclusively of both junction endpoints, and similarly
    connectors[("z", j, i)] along Z_j.
    """
    r = u.capacity
    ipaths: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            vs, _ = u.intersection(i, j)
            xi = u.x_paths[i - 1]
            run = [v for v in xi if v in vs]
            ipaths[(i, j)] = tuple(run)
    connectors: dict[tuple, tuple[int, ...]] = {}
    for i in range(1, r + 1):
        xi = u.x_paths[i - 1]
        pos = {v: t for t, v in enumerate(xi)}
        for j in range(1, r):
            a_end = max(ipaths[(i, j)], key=lambda v: pos[v])
            b_start = min(ipaths[(i, j + 1)], key=lambda v: pos[v])
            connectors[("x", i, j)] = tuple(xi[pos[a_end] : pos[b_start] + 1])
    for j in range(1, r + 1):
        zj = u.z_paths[j - 1]
        pos = {v: t for t, v in enumerate(zj)}
        for i in range(1, r):
            a_end = max(ipaths[(i, j)], key=lambda v: pos[v])
            b_start = min(ipaths[(i + 1, j)], key=lambda v: pos[v])
            connectors[("z", j, i)] = tuple(zj[pos[a_end] : pos[b_start] + 1])
    return ipaths, connectors


def _lift_rep_path(rep_path, ipaths, connectors, entry_vertex):
    """Lift a representation-grid path to host vertices.

    rep_path is a list of (row, col) grid coordinates; entry_vertex is the
    host vertex where the lifted path must start (a Z endpoint inside the
    first intersection).
    """
    lifted: list[int] = [entry_vertex]

    def extend_through(seq: tuple[int, ...]):
        if not seq:
            return
        if lifted[-1] == seq[0]:
            lifted.extend(seq[1:])
        elif lifted[-1] == seq[-1]:
            lifted.extend(reversed(seq[:-1]))
        else:
            raise ImprovementError("lift discontinuity")

    for (r1, c1), (r2, c2) in zip(rep_path, rep_path[1:]):
        if r1 == r2:
            j = min(c1, c2)
            conn = connectors[("x", r1, j)]
        else:
            i = min(r1, r2)
            conn = connectors[("z", c1, i)]
        cur_cell = ipaths[(r1, c1)]
        # walk within the current intersection to the connector end
        if conn[0] in cur_cell:
            target = conn[0]
        elif conn[-1] in cur_cell:
            target = conn[-1]
        else:
            raise ImprovementError("connector does not touch the intersection")
        _walk_within(lifted, cur_cell, target)
        extend_through(conn if conn[0] == lifted[-1] else tuple(reversed(conn)))
    return lifted


def _walk_within(lifted: list[int], cell: tuple[int, ...], target: int):
    cur = lifted[-1]
    if cur == target:
        return
    pos = {v: i for i, v in enumerate(cell)}
    if cur not in pos or target not in pos:
        raise ImprovementError("lift left its intersection cell")
    a, b = pos[cur], pos[target]
    step = 1 if b > a else -1
    for t in range(a + step, b + step, step):
        lifted.append(cell[t])


def improve_over_tilted_grid(
    g: PlaneGraph, linkage: Linkage, u: TiltedGrid, budget: int = 200_000
) -> Optional[Linkage]:
    """Equivalent linkage with strictly fewer Z-family edges, or None.

    Requires the grid to be linkage-tidy with capacity above 2^(number of
    paths); composes untangling on the real disk with the staircase routing
    on the representation grid, lifted back through the intersections.
    """
    from .clconfig import verify_tilted_grid

    k = len(linkage.paths)
    m = u.capacity
    if m <= 2 ** k:
        raise ImprovementError(f"capacity {m} is not above 2^{k}")
    check = verify_tilted_grid(g, u, linkage)
    if not check:
        raise ImprovementError(f"tilted grid is not tidy: {check.problems[:2]}")
    disk = closed_interior(g, perimeter_cycle(u))
    untangled = untangle_disk(g, linkage, disk, k, budget=budget)
    if untangled is None:
        return None
    ipaths, connectors = tilted_grid_structure(g, u)
    # label boundary host vertices by the grid's own orientation:
    # Z_j's endpoint on X_1 is up_j, its endpoint on X_m is down_j
    label_of: dict[int, Label] = {}
    for j, zp in enumerate(u.z_paths, start=1):
        top_cell = set(ipaths[(1, j)])
        bot_cell = set(ipaths[(m, j)])
        top = zp[0] if zp[0] in top_cell else zp[-1]
        bot = zp[-1] if zp[-1] in bot_cell else zp[0]
        if top not in top_cell or bot not in bot_cell or top == bot:
            raise ImprovementError(f"Z path {j} does not join the two extreme rows")
        label_of[top] = ("up", j)
        label_of[bot] = ("down", j)
    host_of_label = {lab: v for v, lab in label_of.items()}
    pattern_edges = frozenset(
        frozenset({label_of[a], label_of[b]}) for a, b in untangled.chords
    )
    bp = BoundaryPattern(m, pattern_edges)
    model = route_pattern(m, bp)
    new_paths = list(untangled.kept_pieces)
    coords = {grid_vertex(m, m, r, c): (r, c) for r in range(1, m + 1) for c in range(1, m + 1)}
    lifted_chords: dict[tuple[int, int], tuple[int, ...]] = {}
    for e, rep in model.phi1.items():
        labels = sorted(e)
        rep_cells = [coords[v] for v in rep]
        first_label = labels[0]
        entry = host_of_label[first_label]
        if coords[model.phi0[first_label]] != rep_cells[0]:
            rep_cells = list(reversed(rep_cells))
            first_label = labels[1] if coords[model.phi0[labels[1]]] == rep_cells[0] else first_label
            entry = host_of_label[first_label]
        lifted = _lift_rep_path(rep_cells, ipaths, connectors, entry)
        other = next(l for l in e if l != first_label)
        target = host_of_label[other]
        last_cell = ipaths[rep_cells[-1]]
        _walk_within(lifted, last_cell, target)
        a, b = sorted((lifted[0], lifted[-1]))
        lifted_chords[(a, b)] = tuple(lifted)
    # stitch kept pieces and lifted chords into paths
    new_linkage = _stitch(new_paths, lifted_chords)
    if new_linkage.pattern != linkage.pattern:
        raise ImprovementError("stitched linkage changed the pattern")
    new_linkage.check_in(g)
    z_edges = frozenset(
        norm_edge(a, b) for p in u.z_paths for a, b in zip(p, p[1:])
    )
    before = len(z_edges & linkage.edges)
    after = len(z_edges & new_linkage.edges)
    if after >= before:
        raise ImprovementError(f"Z-edge count did not drop ({before} -> {after})")
    return new_linkage


def _stitch(pieces, chords: dict[tuple[int, int], tuple[int, ...]]) -> Linkage:
    segments = [tuple(p) for p in pieces] + list(chords.values())
    by_end: dict[int, list[int]] = {}
    for idx, s in enumerate(segments):
        for v in (s[0], s[-1]):
            by_end.setdefault(v, []).append(idx)
    used = [False] * len(segments)
    paths = []
    for idx, s in enumerate(segments):
        if used[idx]:
            continue
        # extend both ways
        chain = list(s)
        used[idx] = True
        for _ in range(2):
            extended = True
            while extended:
                extended = False
                end = chain[-1]
                for j in by_end.get(end, []):
                    if used[j]:
                        continue
                    t = segments[j]
                    if t[0] == end:
                        chain.extend(t[1:])
                    else:
                        chain.extend(reversed(t[:-1]))
                    used[j] = True
                    extended = True
                    break
            chain.reverse()
        paths.append(tuple(chain))
    return Linkage(tuple(paths))
