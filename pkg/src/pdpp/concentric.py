"""Concentric cycle families: construction from grid minors and tightening.

Tightening is constructive (dual min-cut searches for strictly smaller
enclosing cycles, iterated to a fixed point); `verify_tight` is the
independent oracle that re-checks both tightness clauses by exhaustive
cycle enumeration. The two never share code paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .plane import (
    CheckResult,
    Cycle,
    DiskRegion,
    Edge,
    GridMinorModel,
    PlaneGraph,
    PlaneGraphError,
    closed_interior,
    norm_edge,
    verify_minor_model,
)


class InsufficientGridError(ValueError):
    """Grid side too small for the requested concentric family."""


class CycleBudgetExceeded(RuntimeError):
    """Exhaustive cycle enumeration ran over budget."""


@dataclass(frozen=True)
class ConcentricCycles:
    """Cycles C_0..C_r, innermost first, each inside the open interior of the next."""

    cycles: tuple[Cycle, ...]
    discs: tuple[DiskRegion, ...]

    @property
    def depth(self) -> int:
        return len(self.cycles) - 1

    def outer_disc(self) -> DiskRegion:
        return self.discs[-1]


def make_concentric(g: PlaneGraph, cycles: Iterable[Cycle]) -> ConcentricCycles:
    cyc = tuple(cycles)
    if not cyc:
        raise PlaneGraphError("need at least one cycle")
    discs = tuple(closed_interior(g, c) for c in cyc)
    for i in range(len(cyc) - 1):
        inner, outer = discs[i], discs[i + 1]
        if cyc[i].vertex_set & cyc[i + 1].vertex_set:
            raise PlaneGraphError(
                f"cycle {i} touches cycle {i + 1}; not concentric"
            )
        if not inner.vertices <= (outer.vertices - cyc[i + 1].vertex_set):
            raise PlaneGraphError(f"cycle {i} is not inside the open interior of disc {i + 1}")
        if not inner.faces < outer.faces:
            raise PlaneGraphError(f"disc {i} is not properly nested in disc {i + 1}")
    return ConcentricCycles(cyc, discs)


# -- unit-capacity max-flow on the contracted dual -------------------------------


class _DualCut:
    """Min edge-cut machinery over the dual graph with some crossings forbidden.

    Faces joined by a forbidden (non-candidate) edge are contracted together;
    the remaining crossings have unit capacity, so a minimum source-sink cut
    corresponds to a cycle through candidate edges enclosing the source side.
    """

    def __init__(self, g: PlaneGraph, allowed: frozenset[Edge]):
        self.g = g
        self.allowed = allowed
        nfaces = len(g.faces())
        self.parent = list(range(nfaces))
        for e in g.edges:
            if e not in allowed:
                a, b = g.faces_of_edge(e)
                self._union(a, b)
        self.arcs: dict[int, list[tuple[int, Edge]]] = {}
        for e in sorted(allowed):
            a, b = (self._find(f) for f in g.faces_of_edge(e))
            if a == b:
                continue
            self.arcs.setdefault(a, []).append((b, e))
            self.arcs.setdefault(b, []).append((a, e))

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def node(self, face: int) -> int:
        return self._find(face)

    def min_cut_cycle(self, sources: set[int], sinks: set[int]) -> Optional[set[Edge]]:
        """Edges of a minimum cut separating sources from sinks, or None."""
        src = {self._find(f) for f in sources}
        snk = {self._find(f) for f in sinks}
        if src & snk:
            return None
        flow: dict[tuple[int, int, Edge], int] = {}

        def residual(a: int, b: int, e: Edge) -> int:
            return 1 - flow.get((a, b, e), 0) + flow.get((b, a, e), 0)

        while True:
            prev: dict[int, tuple[int, Edge]] = {}
            queue = deque(src)
            seen = set(src)
            reached = None
            while queue and reached is None:
                x = queue.popleft()
                for y, e in self.arcs.get(x, ()):
                    if y in seen or residual(x, y, e) <= 0:
                        continue
                    seen.add(y)
                    prev[y] = (x, e)
                    if y in snk:
                        reached = y
                        break
                    queue.append(y)
            if reached is None:
                side = seen
                break
            y = reached
            while y not in src:
                x, e = prev[y]
                back = flow.get((y, x, e), 0)
                if back > 0:
                    flow[(y, x, e)] = back - 1
                else:
                    flow[(x, y, e)] = flow.get((x, y, e), 0) + 1
                y = x
        cut: set[Edge] = set()
        for x in side:
            for y, e in self.arcs.get(x, ()):
                if y not in side:
                    cut.add(e)
        return cut or None


def _cycle_from_edge_set(edges: set[Edge]) -> Optional[Cycle]:
    """Order a 2-regular connected edge set into a Cycle, else None."""
    deg: dict[int, list[int]] = {}
    for u, v in edges:
        deg.setdefault(u, []).append(v)
        deg.setdefault(v, []).append(u)
    if any(len(nb) != 2 for nb in deg.values()):
        return None
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
        if len(seq) > len(edges):
            return None
    if len(seq) != len(edges):
        return None
    return Cycle(tuple(seq))


# -- tightening -------------------------------------------------------------------


def _shrink_innermost(g: PlaneGraph, d0: DiskRegion) -> Optional[Cycle]:
    """A cycle whose closed interior is properly inside d0, or None."""
    if len(d0.faces) <= 1:
        return None
    allowed = frozenset(d0.edges)
    cutter = _DualCut(g, allowed)
    outside = set(range(len(g.faces()))) - set(d0.faces)
    for f_in in sorted(d0.faces):
        for f_out in sorted(d0.faces):
            if f_in == f_out:
                continue
            cut = cutter.min_cut_cycle({f_in}, {f_out} | outside)
            if cut is None:
                continue
            cyc = _cycle_from_edge_set(cut)
            if cyc is None:
                continue
            region = closed_interior(g, cyc)
            if region.is_proper_subset_of(d0) and region.faces:
                return cyc
    return None


def _slip_between(
    g: PlaneGraph, inner: DiskRegion, outer: DiskRegion
) -> Optional[Cycle]:
    """A cycle in outer minus inner strictly separating them, or None."""
    allowed = frozenset(
        e for e in outer.edges if not (set(e) & inner.vertices)
    )
    if not allowed:
        return None
    cutter = _DualCut(g, allowed)
    all_faces = set(range(len(g.faces())))
    outside = all_faces - set(outer.faces)
    between = set(outer.faces) - set(inner.faces)
    for f_out in sorted(between):
        cut = cutter.min_cut_cycle(set(inner.faces), {f_out} | outside)
        if cut is None:
            continue
        cyc = _cycle_from_edge_set(cut)
        if cyc is None:
            continue
        region = closed_interior(g, cyc)
        if not inner.faces <= region.faces:
            continue
        if not (region.faces < outer.faces):
            continue
        if cyc.vertex_set & inner.vertices:
            continue
        if not (region.vertices <= outer.vertices and region.edges <= outer.edges):
            continue
        return cyc
    return None


def tighten(g: PlaneGraph, cc: ConcentricCycles) -> ConcentricCycles:
    """Fixed point of the two shrink rules; discs only ever lose faces."""
    cycles = list(cc.cycles)
    changed = True
    while changed:
        changed = False
        discs = [closed_interior(g, c) for c in cycles]
        smaller = _shrink_innermost(g, discs[0])
        if smaller is not None:
            cycles[0] = smaller
            changed = True
            continue
        for i in range(len(cycles) - 1):
            slip = _slip_between(g, discs[i], discs[i + 1])
            if slip is not None:
                cycles[i + 1] = slip
                changed = True
                break
    return make_concentric(g, cycles)


# -- the independent exhaustive tightness check -----------------------------------


def _iter_cycles(g: PlaneGraph, budget: int):
    """Every simple cycle of g exactly once (DFS with minimum-root canonicity)."""
    spent = [0]
    adj = {v: sorted(g.rotation[v]) for v in g.vertices}
    for root in sorted(g.vertices):
        path = [root]
        on_path = {root}

        def walk():
            spent[0] += 1
            if spent[0] > budget:
                raise CycleBudgetExceeded(f"over {budget} steps enumerating cycles")
            v = path[-1]
            for w in adj[v]:
                if w < root:
                    continue
                if w == root and len(path) >= 3 and path[1] < path[-1]:
                    yield Cycle(tuple(path))
                if w not in on_path and w != root:
                    path.append(w)
                    on_path.add(w)
                    yield from walk()
                    on_path.discard(w)
                    path.pop()

        yield from walk()


def verify_tight(g: PlaneGraph, cc: ConcentricCycles, budget: int = 200_000) -> CheckResult:
    """Exhaustively re-check surface minimality and the annulus condition."""
    problems: list[str] = []
    discs = cc.discs
    for cyc in _iter_cycles(g, budget):
        region = closed_interior(g, cyc)
        if region.is_proper_subset_of(discs[0]):
            problems.append(
                f"disc 0 is not surface minimal: cycle {cyc.vertices} fits inside"
            )
            break
        for i in range(len(discs) - 1):
            inner, outer = discs[i], discs[i + 1]
            if cyc.vertex_set & inner.vertices:
                continue
            if not (cyc.vertex_set <= outer.vertices and cyc.edges <= outer.edges):
                continue
            if cyc.normalized() == cc.cycles[i + 1].normalized():
                continue
            if inner.faces <= region.faces and region.faces < outer.faces:
                problems.append(
                    f"cycle {cyc.vertices} slips between discs {i} and {i + 1}"
                )
                break
        if problems:
            break
    return CheckResult(not problems, tuple(problems))


# -- extraction from a grid minor ---------------------------------------------------


def lemma_side_requirement(depth: int, forbidden_count: int) -> int:
    """Minimum grid side for depth+1 concentric cycles avoiding the forbidden set."""
    s = forbidden_count + 1
    root = int(s ** 0.5)
    while root * root < s:
        root += 1
    while (root - 1) * (root - 1) >= s:
        root -= 1
    return 2 * (depth + 1) * root


def _ring_positions(block_r0: int, block_c0: int, side: int, ring: int) -> list[tuple[int, int]]:
    """Grid positions of the ring-th ring (0 innermost) of a side x side block."""
    half = side // 2
    r0 = block_r0 + half - ring - 1
    c0 = block_c0 + half - ring - 1
    r1 = block_r0 + half + ring
    c1 = block_c0 + half + ring
    out = []
    for c in range(c0, c1 + 1):
        out.append((r0, c))
    for r in range(r0 + 1, r1 + 1):
        out.append((r, c1))
    for c in range(c1 - 1, c0 - 1, -1):
        out.append((r1, c))
    for r in range(r1 - 1, r0, -1):
        out.append((r, c0))
    return out


def _cycle_through_branch_sets(
    g: PlaneGraph, sets: list[frozenset[int]]
) -> Optional[Cycle]:
    """A host cycle visiting each branch set once, joined by inter-set edges."""
    k = len(sets)
    links: list[tuple[int, int]] = []
    for i in range(k):
        a, b = sets[i], sets[(i + 1) % k]
        found = None
        for u in sorted(a):
            for v in sorted(b):
                if g.has_edge(u, v):
                    found = (u, v)
                    break
            if found:
                break
        if found is None:
            return None
        links.append(found)
    seq: list[int] = []
    for i in range(k):
        entry = links[(i - 1) % k][1]
        exit_ = links[i][0]
        sub = _path_within(g, sets[i], entry, exit_)
        if sub is None:
            return None
        seq.extend(sub)
    if len(seq) < 3 or len(set(seq)) != len(seq):
        return None
    return Cycle(tuple(seq))


def _path_within(g: PlaneGraph, allowed: frozenset[int], s: int, t: int) -> Optional[list[int]]:
    if s == t:
        return [s]
    prev = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in sorted(g.rotation[v]):
            if w not in allowed or w in prev:
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


def concentric_from_grid(
    g: PlaneGraph,
    model: GridMinorModel,
    forbidden: frozenset[int],
    depth: int,
    do_tighten: bool = True,
) -> ConcentricCycles:
    """depth+1 tight concentric cycles whose outer disc avoids `forbidden`.

    Requires grid side >= 2*(depth+1)*ceil(sqrt(|forbidden|+1)); the side
    bound is asserted here, at the single extraction call site.
    """
    side = model.side()
    need = lemma_side_requirement(depth, len(forbidden))
    if side < need:
        raise InsufficientGridError(
            f"grid side {side} < required {need} for depth {depth} "
            f"avoiding {len(forbidden)} vertices"
        )
    check = verify_minor_model(g, model)
    if not check:
        raise PlaneGraphError(f"grid model failed verification: {check.problems[:3]}")
    block = 2 * (depth + 1)
    per_axis = side // block
    for bi in range(per_axis):
        for bj in range(per_axis):
            r0 = 1 + bi * block
            c0 = 1 + bj * block
            block_sets = [
                model.phi[(r, c)]
                for r in range(r0, r0 + block)
                for c in range(c0, c0 + block)
            ]
            if any(s & forbidden for s in block_sets):
                continue
            cycles: list[Cycle] = []
            ok = True
            for ring in range(depth + 1):
                sets = [
                    model.phi[pos] for pos in _ring_positions(r0, c0, block, ring)
                ]
                cyc = _cycle_through_branch_sets(g, sets)
                if cyc is None:
                    ok = False
                    break
                cycles.append(cyc)
            if not ok:
                continue
            try:
                cc = make_concentric(g, cycles)
            except PlaneGraphError:
                try:
                    cc = make_concentric(g, list(reversed(cycles)))
                except PlaneGraphError:
                    continue
            if cc.outer_disc().vertices & forbidden:
                continue
            if do_tighten:
                cc = tighten(g, cc)
                if cc.outer_disc().vertices & forbidden:
                    continue
            return cc
    raise InsufficientGridError(
        "no block of the grid model yields a concentric family avoiding the forbidden set"
    )
