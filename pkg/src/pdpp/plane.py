"""Embedded planar graphs: rotation systems, faces, cycles, disc regions, grids.

A plane graph is stored combinatorially as a rotation system (clockwise
neighbor order per vertex) plus a designated dart on the unbounded face.
All region queries (interior/exterior of a cycle) are answered by dual-graph
reachability, never by coordinates.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Edge = tuple[int, int]
Dart = tuple[int, int]


class PlaneGraphError(ValueError):
    """Structural problem with a plane graph or one of its derived objects."""


class EmbeddingError(PlaneGraphError):
    """Rotation system does not describe a planar (genus-0) embedding."""


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus a human-readable list of violations."""

    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


class PlaneGraph:
    """Simple undirected plane graph with dense vertex ids 1..n.

    Immutable after construction; every derived object (faces, regions)
    is computed from the rotation system and cached.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Edge],
        rotation: dict[int, Sequence[int]],
        outer_dart: Optional[Dart],
        grid_shape: Optional[tuple[int, int]] = None,
        grid_coords: Optional[dict[int, tuple[int, int]]] = None,
    ):
        self.n = n
        self.edges: frozenset[Edge] = frozenset(norm_edge(u, v) for u, v in edges)
        self.rotation: dict[int, tuple[int, ...]] = {
            v: tuple(rotation.get(v, ())) for v in range(1, n + 1)
        }
        self.outer_dart = outer_dart
        self.grid_shape = grid_shape
        self.grid_coords = grid_coords
        self._validate()
        self._faces: Optional[tuple[tuple[Dart, ...], ...]] = None
        self._face_of: Optional[dict[Dart, int]] = None
        self._outer_face_id: Optional[int] = None

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        return dict(self.rotation)

    # -- validation ------------------------------------------------------

    def _validate(self) -> None:
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise PlaneGraphError(f"edge ({u},{v}) out of vertex range 1..{self.n}")
            if u == v:
                raise PlaneGraphError(f"loop at vertex {u} not allowed")
        nbr_sets = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nbr_sets[u].add(v)
            nbr_sets[v].add(u)
        for v in self.vertices:
            rot = self.rotation[v]
            if len(rot) != len(set(rot)):
                raise PlaneGraphError(f"rotation at {v} repeats a neighbor")
            if set(rot) != nbr_sets[v]:
                raise PlaneGraphError(
                    f"rotation at {v} is not a permutation of its neighbors"
                )
        if self.m > 0:
            if self.outer_dart is None:
                raise PlaneGraphError("graphs with edges need an outer-face dart")
            u, v = self.outer_dart
            if not self.has_edge(u, v):
                raise PlaneGraphError(f"outer dart {self.outer_dart} is not an edge")
        # Genus-0 check: Euler's formula with the unbounded face counted once.
        # Dart orbits repeat the unbounded face once per edge-bearing component;
        # isolated vertices trace no orbit at all.
        f = self._count_faces_raw()
        comps = connected_components(self)
        c = len(comps)
        edged = sum(1 for comp in comps if any(self.rotation[v] for v in comp))
        true_faces = f - (edged - 1) if edged else 1
        if self.n - self.m + true_faces != 1 + c:
            raise EmbeddingError(
                f"rotation system is not planar: n={self.n} m={self.m} "
                f"faces={true_faces} components={c}"
            )

    def _next_dart(self, dart: Dart) -> Dart:
        u, v = dart
        rot = self.rotation[v]
        i = rot.index(u)
        return (v, rot[(i + 1) % len(rot)])

    def _count_faces_raw(self) -> int:
        seen: set[Dart] = set()
        count = 0
        for u in self.vertices:
            for v in self.rotation[u]:
                if (u, v) in seen:
                    continue
                count += 1
                d = (u, v)
                while d not in seen:
                    seen.add(d)
                    d = self._next_dart(d)
        return count

    # -- faces -----------------------------------------------------------

    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        """All faces as dart orbits of the rotation system, deterministically ordered."""
        if self._faces is None:
            orbits: list[tuple[Dart, ...]] = []
            seen: set[Dart] = set()
            for u in self.vertices:
                for v in self.rotation[u]:
                    if (u, v) in seen:
                        continue
                    orbit = []
                    d = (u, v)
                    while d not in seen:
                        seen.add(d)
                        orbit.append(d)
                        d = self._next_dart(d)
                    orbits.append(tuple(orbit))
            orbits.sort(key=lambda o: min(o))
            self._faces = tuple(orbits)
            self._face_of = {}
            for i, orbit in enumerate(self._faces):
                for d in orbit:
                    self._face_of[d] = i
        return self._faces

    def face_of_dart(self, dart: Dart) -> int:
        self.faces()
        assert self._face_of is not None
        return self._face_of[dart]

    def outer_face(self) -> int:
        """Index of the unbounded face (the face containing the outer dart)."""
        if self._outer_face_id is None:
            if self.m == 0:
                self._outer_face_id = 0 if self.faces() else -1
            else:
                assert self.outer_dart is not None
                self._outer_face_id = self.face_of_dart(self.outer_dart)
        return self._outer_face_id

    def face_vertices(self, face_id: int) -> frozenset[int]:
        return frozenset(u for u, _ in self.faces()[face_id])

    def face_edges(self, face_id: int) -> frozenset[Edge]:
        return frozenset(norm_edge(u, v) for u, v in self.faces()[face_id])

    def faces_of_edge(self, e: Edge) -> tuple[int, int]:
        """The (at most two distinct) face ids on either side of e."""
        u, v = e
        return (self.face_of_dart((u, v)), self.face_of_dart((v, u)))

    def num_faces(self) -> int:
        comps = connected_components(self)
        edged = sum(1 for comp in comps if any(self.rotation[v] for v in comp))
        return len(self.faces()) - (edged - 1) if edged else 1


# -- traversal helpers ---------------------------------------------------


def connected_components(g: PlaneGraph) -> list[frozenset[int]]:
    seen: set[int] = set()
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        seen.add(s)
        while queue:
            v = queue.popleft()
            for w in g.rotation[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def bfs_distances(g: PlaneGraph, sources: Iterable[int]) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        v = queue.popleft()
        for w in g.rotation[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def shortest_path(g: PlaneGraph, s: int, t: int, blocked: frozenset[int] = frozenset()) -> Optional[list[int]]:
    """Shortest s-t path avoiding `blocked` internal vertices, or None."""
    if s == t:
        return [s]
    prev: dict[int, int] = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in sorted(g.rotation[v]):
            if w in prev or (w in blocked and w != t):
                continue
            prev[w] = v
            if w == t:
                path = [t]
                while path[-1] != s:
                    path.append(prev[path[-1]])
                path.reverse()
                return path
            queue.append(w)
    return None


# -- cycles and disc regions ----------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A cycle given by its vertex sequence (first vertex not repeated)."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise PlaneGraphError(f"cycle needs >= 3 vertices, got {self.vertices}")
        if len(set(self.vertices)) != len(self.vertices):
            raise PlaneGraphError("cycle repeats a vertex")

    @property
    def edges(self) -> frozenset[Edge]:
        vs = self.vertices
        return frozenset(
            norm_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))
        )

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def normalized(self) -> "Cycle":
        """Canonical rotation/direction, for equality tests."""
        vs = self.vertices
        k = vs.index(min(vs))
        fwd = vs[k:] + vs[:k]
        rev = (fwd[0],) + tuple(reversed(fwd[1:]))
        return Cycle(min(fwd, rev))

    def __len__(self) -> int:
        return len(self.vertices)


def check_cycle(g: PlaneGraph, c: Cycle) -> None:
    for e in c.edges:
        if e not in g.edges:
            raise PlaneGraphError(f"cycle step {e} is not an edge of the graph")


@dataclass(frozen=True)
class DiskRegion:
    """Closed interior (or exterior) of a cycle: vertices, edges and faces.

    `vertices`/`edges` include the cycle itself when `closed` is True;
    `faces` are the strictly enclosed face ids.
    """

    cycle: Cycle
    side: str  # "interior" | "exterior"
    closed: bool
    vertices: frozenset[int]
    edges: frozenset[Edge]
    faces: frozenset[int]

    def open_vertices(self) -> frozenset[int]:
        return self.vertices - self.cycle.vertex_set

    def open_edges(self) -> frozenset[Edge]:
        return self.edges - self.cycle.edges

    def contains_vertex(self, v: int) -> bool:
        return v in self.vertices

    def contains_edge(self, e: Edge) -> bool:
        return norm_edge(*e) in self.edges

    def is_subset_of(self, other: "DiskRegion") -> bool:
        return self.faces <= other.faces and self.vertices <= other.vertices

    def is_proper_subset_of(self, other: "DiskRegion") -> bool:
        return self.is_subset_of(other) and (
            self.faces != other.faces or self.vertices != other.vertices
        )


def interior_faces(g: PlaneGraph, c: Cycle) -> frozenset[int]:
    """Face ids strictly inside c, by dual reachability from the outer face."""
    check_cycle(g, c)
    cyc_edges = c.edges
    nfaces = len(g.faces())
    outside: set[int] = set()
    start = g.outer_face()
    queue = deque([start])
    outside.add(start)
    while queue:
        f = queue.popleft()
        for u, v in g.faces()[f]:
            e = norm_edge(u, v)
            if e in cyc_edges:
                continue
            other = g.face_of_dart((v, u))
            if other not in outside:
                outside.add(other)
                queue.append(other)
    return frozenset(range(nfaces)) - frozenset(outside)


def closed_interior(g: PlaneGraph, c: Cycle) -> DiskRegion:
    """Closed interior of c: everything drawn inside or on the cycle."""
    inner = interior_faces(g, c)
    verts = set(c.vertex_set)
    for f in inner:
        verts |= g.face_vertices(f)
    edges = set(c.edges)
    for f in inner:
        edges |= g.face_edges(f)
    # Edges with both endpoints on the cycle but drawn outside must be dropped;
    # an edge is interior iff one of its sides is an interior face.
    edges = {
        e
        for e in edges
        if e in c.edges or any(fi in inner for fi in g.faces_of_edge(e))
    }
    # Isolated components embedded elsewhere never enter a cycle's interior
    # unless face-tracing put them there; rotation systems place each extra
    # component in the unbounded face by convention.
    return DiskRegion(
        cycle=c,
        side="interior",
        closed=True,
        vertices=frozenset(verts),
        edges=frozenset(edges),
        faces=inner,
    )


def open_exterior_vertices(g: PlaneGraph, region: DiskRegion) -> frozenset[int]:
    return frozenset(g.vertices) - region.vertices


# -- grids -----------------------------------------------------------------


def grid_vertex(rows: int, cols: int, r: int, c: int) -> int:
    return (r - 1) * cols + c


def make_grid(rows: int, cols: int) -> PlaneGraph:
    """The rows x cols grid with its canonical embedding.

    Vertex ids are row-major starting at 1; the unbounded face is the one
    bounded by the outer cycle whenever the grid has more than two faces.
    """
    if rows < 1 or cols < 1:
        raise PlaneGraphError("grid dimensions must be positive")
    n = rows * cols
    edges = []
    rotation: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    coords = {}
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            v = grid_vertex(rows, cols, r, c)
            coords[v] = (r, c)
            # clockwise when drawn with row 1 on top: up, right, down, left
            for rr, cc in ((r - 1, c), (r, c + 1), (r + 1, c), (r, c - 1)):
                if 1 <= rr <= rows and 1 <= cc <= cols:
                    w = grid_vertex(rows, cols, rr, cc)
                    rotation[v].append(w)
                    if v < w:
                        edges.append((v, w))
    outer: Optional[Dart] = None
    if rows >= 2 and cols >= 2:
        outer = (grid_vertex(rows, cols, 1, 1), grid_vertex(rows, cols, 1, 2))
    elif cols >= 2:
        outer = (1, 2)
    elif rows >= 2:
        outer = (1, 1 + cols)
    return PlaneGraph(
        n, edges, rotation, outer, grid_shape=(rows, cols), grid_coords=coords
    )


def detect_grid(g: PlaneGraph) -> Optional[tuple[tuple[int, int], dict[int, tuple[int, int]]]]:
    """Recognize a full grid and recover coordinates, or None.

    The outer face boundary is split at its four degree-2 corners into the
    grid's sides, giving the first row and column; the interior fills
    diagonally (each cell is the common unseen neighbor of its north and
    west cells). The final edge set is checked exactly.
    """
    if g.n == 1:
        return (1, 1), {1: (1, 1)}
    nbr = {v: set(g.rotation[v]) for v in g.vertices}
    degs = sorted(len(nbr[v]) for v in g.vertices)
    if degs and degs[-1] > 4:
        return None
    if degs and degs[-1] <= 2 and g.m == g.n - 1:
        # a path graph is a 1 x n grid
        ends = [v for v in g.vertices if len(nbr[v]) == 1]
        if len(ends) != 2:
            return None
        coords = {}
        prev, cur = None, min(ends)
        for j in range(1, g.n + 1):
            coords[cur] = (1, j)
            nxt = [w for w in nbr[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        if len(coords) != g.n:
            return None
        return (1, g.n), coords
    corners = [v for v in g.vertices if len(nbr[v]) == 2]
    if len(corners) != 4 or g.outer_dart is None:
        return None
    boundary = [u for u, _ in g.faces()[g.outer_face()]]
    if len(boundary) != len(set(boundary)):
        return None
    # split the boundary cycle at the corners into the four sides
    corner_pos = [i for i, v in enumerate(boundary) if v in set(corners)]
    if len(corner_pos) != 4:
        return None
    start = corner_pos[0]
    boundary = boundary[start:] + boundary[:start]
    corner_pos = [i for i, v in enumerate(boundary) if v in set(corners)]
    sides = []
    for a, b in zip(corner_pos, corner_pos[1:] + [len(boundary)]):
        sides.append(boundary[a : b + 1] if b < len(boundary) else boundary[a:] + [boundary[0]])
    if len(sides) != 4:
        return None
    if len(sides[0]) != len(sides[2]) or len(sides[1]) != len(sides[3]):
        return None
    cols = len(sides[0])
    rows = len(sides[1])
    if rows * cols != g.n:
        return None
    coords: dict[int, tuple[int, int]] = {}
    at: dict[tuple[int, int], int] = {}
    for j, v in enumerate(sides[0], start=1):
        coords[v] = (1, j)
        at[(1, j)] = v
    for i, v in enumerate(sides[3][::-1], start=1):
        if v in coords and coords[v] != (1, 1) and i > 1:
            return None
        coords[v] = (i, 1)
        at[(i, 1)] = v
    for r in range(2, rows + 1):
        for c in range(2, cols + 1):
            north = at.get((r - 1, c))
            west = at.get((r, c - 1))
            if north is None or west is None:
                return None
            common = [w for w in (nbr[north] & nbr[west]) if w not in coords]
            if len(common) != 1:
                return None
            v = common[0]
            coords[v] = (r, c)
            at[(r, c)] = v
    if len(coords) != g.n:
        return None
    want_edges = set()
    for (r, c), v in at.items():
        for rr, cc in ((r + 1, c), (r, c + 1)):
            if (rr, cc) in at:
                want_edges.add(norm_edge(v, at[(rr, cc)]))
    if want_edges != set(g.edges):
        return None
    return (rows, cols), coords


def grid_corners(g: PlaneGraph) -> frozenset[int]:
    if g.grid_shape is None:
        raise PlaneGraphError("not a grid built by make_grid")
    rows, cols = g.grid_shape
    if rows < 2 or cols < 2:
        raise PlaneGraphError("corners are defined for grids with rows, cols >= 2")
    return frozenset(v for v in g.vertices if g.degree(v) == 2)


def centers(g: PlaneGraph) -> frozenset[int]:
    """Vertices at maximum distance from the grid's corner set."""
    corners = grid_corners(g)
    dist = bfs_distances(g, corners)
    best = max(dist.values())
    return frozenset(v for v, d in dist.items() if d == best)


def grid_position_map(g: PlaneGraph) -> dict[tuple[int, int], int]:
    if g.grid_shape is None or g.grid_coords is None:
        raise PlaneGraphError("not a recognized grid")
    return {rc: v for v, rc in g.grid_coords.items()}


def grid_ring(g: PlaneGraph, offset: int) -> Cycle:
    """The cycle at `offset` steps in from the grid boundary (offset 0 = outer cycle)."""
    rows, cols = g.grid_shape if g.grid_shape else (0, 0)
    at = grid_position_map(g)
    r0, r1 = 1 + offset, rows - offset
    c0, c1 = 1 + offset, cols - offset
    if r1 - r0 < 1 or c1 - c0 < 1:
        raise PlaneGraphError(f"grid has no ring at offset {offset}")
    seq: list[int] = []
    for c in range(c0, c1 + 1):
        seq.append(at[(r0, c)])
    for r in range(r0 + 1, r1 + 1):
        seq.append(at[(r, c1)])
    for c in range(c1 - 1, c0 - 1, -1):
        seq.append(at[(r1, c)])
    for r in range(r1 - 1, r0, -1):
        seq.append(at[(r, c0)])
    return Cycle(tuple(seq))


def outer_cycle(g: PlaneGraph) -> Cycle:
    return grid_ring(g, 0)


# -- minor models -----------------------------------------------------------


@dataclass(frozen=True)
class GridMinorModel:
    """Branch sets realizing a grid_rows x grid_cols grid minor in a host graph."""

    grid_rows: int
    grid_cols: int
    phi: dict[tuple[int, int], frozenset[int]] = field(hash=False)

    def side(self) -> int:
        return min(self.grid_rows, self.grid_cols)

    def grid_positions(self) -> list[tuple[int, int]]:
        return [
            (r, c)
            for r in range(1, self.grid_rows + 1)
            for c in range(1, self.grid_cols + 1)
        ]

    def all_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for s in self.phi.values():
            out |= s
        return frozenset(out)


def _connected_in(g: PlaneGraph, vs: frozenset[int]) -> bool:
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g.rotation[v]:
            if w in vs and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(vs)


def verify_minor_model(g: PlaneGraph, model: GridMinorModel) -> CheckResult:
    """Check disjointness, connectivity, and adjacency of a grid minor model."""
    problems: list[str] = []
    positions = model.grid_positions()
    for pos in positions:
        if pos not in model.phi:
            problems.append(f"missing branch set for grid vertex {pos}")
            return CheckResult(False, tuple(problems))
    seen: dict[int, tuple[int, int]] = {}
    for pos in positions:
        bs = model.phi[pos]
        if not bs:
            problems.append(f"empty branch set at {pos}")
        for v in bs:
            if not 1 <= v <= g.n:
                problems.append(f"branch set at {pos} mentions unknown vertex {v}")
            elif v in seen:
                problems.append(f"vertex {v} shared by branch sets {seen[v]} and {pos}")
            else:
                seen[v] = pos
    if problems:
        return CheckResult(False, tuple(problems))
    for pos in positions:
        if not _connected_in(g, model.phi[pos]):
            problems.append(f"branch set at {pos} is not connected")
    for r, c in positions:
        for nb in ((r + 1, c), (r, c + 1)):
            if nb in model.phi:
                a, b = model.phi[(r, c)], model.phi[nb]
                if not any(g.has_edge(u, v) for u in a for v in b):
                    problems.append(f"no edge between branch sets {(r, c)} and {nb}")
    return CheckResult(not problems, tuple(problems))


@dataclass(frozen=True)
class TopologicalMinorModel:
    """Injective vertex map plus internally disjoint host paths per pattern edge."""

    phi0: dict[object, int] = field(hash=False)
    phi1: dict[object, tuple[int, ...]] = field(hash=False)


def verify_topological_minor(
    g: PlaneGraph,
    model: TopologicalMinorModel,
    pattern_edges: Iterable[tuple[object, object]],
) -> CheckResult:
    problems: list[str] = []
    vals = list(model.phi0.values())
    if len(set(vals)) != len(vals):
        problems.append("phi0 is not injective")
    for key, path in model.phi1.items():
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                problems.append(f"path for {key} uses non-edge ({a},{b})")
        if len(set(path)) != len(path):
            problems.append(f"path for {key} revisits a vertex")
    for x, y in pattern_edges:
        key = frozenset((x, y))
        path = model.phi1.get(key)
        if path is None:
            problems.append(f"no path for pattern edge {set(key)}")
            continue
        ends = {path[0], path[-1]}
        if ends != {model.phi0[x], model.phi0[y]}:
            problems.append(f"path for {set(key)} has wrong endpoints {ends}")
    paths = list(model.phi1.values())
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            shared = set(paths[i]) & set(paths[j])
            endpoints = {paths[i][0], paths[i][-1]} & {paths[j][0], paths[j][-1]}
            bad = shared - endpoints
            if bad:
                problems.append(
                    f"paths {i} and {j} share internal vertices {sorted(bad)}"
                )
    return CheckResult(not problems, tuple(problems))


# -- construction from arbitrary edge lists ---------------------------------


def plane_graph_from_edges(
    n: int,
    edges: Iterable[Edge],
    rotation: Optional[dict[int, Sequence[int]]] = None,
    outer_dart: Optional[Dart] = None,
) -> PlaneGraph:
    """Build a plane graph, computing an embedding when none is given.

    Non-planar input is a hard error.
    """
    edge_list = sorted({norm_edge(u, v) for u, v in edges})
    if rotation is not None:
        if outer_dart is None and edge_list:
            g0 = PlaneGraph(n, edge_list, rotation, edge_list[0])
            outer_dart = _largest_face_dart(g0)
        return PlaneGraph(n, edge_list, rotation, outer_dart)

    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(1, n + 1))
    G.add_edges_from(edge_list)
    ok, emb = nx.check_planarity(G)
    if not ok:
        raise EmbeddingError("input graph is not planar")
    rot = {v: list(emb.neighbors_cw_order(v)) for v in range(1, n + 1)}
    if not edge_list:
        return PlaneGraph(n, edge_list, rot, None)
    g0 = PlaneGraph(n, edge_list, rot, edge_list[0])
    return PlaneGraph(n, edge_list, rot, _largest_face_dart(g0), None)


def _largest_face_dart(g: PlaneGraph) -> Dart:
    faces = g.faces()
    best = max(range(len(faces)), key=lambda i: (len(faces[i]), -min(faces[i])[0]))
    return min(faces[best])


def delete_vertices(g: PlaneGraph, doomed: Iterable[int]) -> tuple[PlaneGraph, dict[int, int]]:
    """Remove vertices, re-index densely, and return (graph, old->new map)."""
    doomed_set = set(doomed)
    keep = [v for v in g.vertices if v not in doomed_set]
    remap = {old: i + 1 for i, old in enumerate(keep)}
    edges = [
        (remap[u], remap[v]) for u, v in g.edges if u not in doomed_set and v not in doomed_set
    ]
    rotation = {
        remap[v]: [remap[w] for w in g.rotation[v] if w not in doomed_set] for v in keep
    }
    outer: Optional[Dart] = None
    if edges:
        if g.outer_dart is not None:
            of = g.faces()[g.outer_face()]
            for u, v in of:
                if u not in doomed_set and v not in doomed_set:
                    outer = (remap[u], remap[v])
                    break
        if outer is None:
            g_tmp = PlaneGraph(len(keep), edges, rotation, sorted(edges)[0])
            outer = _largest_face_dart(g_tmp)
    return PlaneGraph(len(keep), edges, rotation, outer), remap


# -- geometric builder (used by ring-shaped showcase hosts) ------------------


def plane_graph_from_points(
    points: dict[int, tuple[float, float]],
    edges: Iterable[Edge],
) -> PlaneGraph:
    """Plane graph from straight-line coordinates: rotations by clockwise angle.

    The caller guarantees the drawing is crossing-free; the Euler check
    rejects anything else.
    """
    n = max(points)
    if set(points) != set(range(1, n + 1)):
        raise PlaneGraphError("point ids must be dense 1..n")
    edge_list = sorted({norm_edge(u, v) for u, v in edges})
    nbrs: dict[int, list[int]] = {v: [] for v in points}
    for u, v in edge_list:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = {}
    for v, lst in nbrs.items():
        x0, y0 = points[v]
        lst.sort(key=lambda w: -math.atan2(points[w][1] - y0, points[w][0] - x0))
        rotation[v] = lst
    if not edge_list:
        return PlaneGraph(n, edge_list, rotation, None)
    # Outer dart: trace the face of the dart leaving the lexicographically
    # extreme point; the unbounded face is the one with the larger span.
    ext = max(points, key=lambda v: (points[v][0], points[v][1]))
    if not rotation[ext]:
        raise PlaneGraphError("extreme point is isolated; cannot pick outer face")
    g0 = PlaneGraph(n, edge_list, rotation, (ext, rotation[ext][0]))
    faces = g0.faces()
    # The unbounded face of a straight-line drawing attains the maximum
    # x-coordinate and turns clockwise around it; both candidate faces at the
    # extreme vertex are compared by signed area of the traced polygon.
    cands = {g0.face_of_dart((ext, w)) for w in rotation[ext]}
    cands |= {g0.face_of_dart((w, ext)) for w in rotation[ext]}
    def signed_area(face_id: int) -> float:
        poly = [points[u] for u, _ in faces[face_id]]
        s = 0.0
        for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
            s += x1 * y2 - x2 * y1
        return s
    outer_id = min(cands, key=signed_area)  # clockwise trace => negative area
    return PlaneGraph(n, edge_list, rotation, faces[outer_id][0])
