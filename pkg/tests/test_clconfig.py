import math

import pytest

from conftest import cheap_configuration, corpus_host

from pdpp.clconfig import (
    CLConfiguration,
    ConfigError,
    count_extremal,
    cyclically_connected,
    extract_tilted_grid,
    is_convex,
    is_touch_free,
    out_structure,
    reduce_configuration,
    segment_tree,
    segment_types,
    segments,
    verify_tilted_grid,
)
from pdpp.concentric import make_concentric, tighten, verify_tight
from pdpp.gallery import ring_cycle, ring_lattice, shortcut_annulus_host
from pdpp.oracle import Linkage, linkage_cost
from pdpp.plane import Cycle, plane_graph_from_points


def two_ring_host(sectors=6):
    g, vid = ring_lattice(3, sectors)
    cc = make_concentric(g, [ring_cycle(vid, 0, sectors), ring_cycle(vid, 1, sectors)])
    return g, vid, cc


class TestSegments:
    def test_empty_linkage(self):
        g, vid, cc = two_ring_host()
        q = CLConfiguration(g, cc, Linkage(()))
        assert segments(q) == []
        assert is_convex(q)
        assert count_extremal(q) == 0

    def test_crossing_path_single_segment(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        segs = segments(q)
        assert len(segs) == 1
        assert segs[0].eccentricity == 0
        assert not segs[0].extremal

    def test_touching_run_is_extremal(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 3), vid(1, 3), vid(1, 4), vid(2, 4))
        q = CLConfiguration(g, cc, Linkage((path,)))
        segs = segments(q)
        assert len(segs) == 1
        assert segs[0].extremal
        assert segs[0].eccentricity == 1

    def test_two_visits_two_segments(self):
        g, vid, cc = two_ring_host()
        path = (
            vid(2, 0), vid(1, 0), vid(1, 1), vid(2, 1), vid(2, 2),
            vid(1, 2), vid(1, 3), vid(2, 3),
        )
        q = CLConfiguration(g, cc, Linkage((path,)))
        assert len(segments(q)) == 2

    def test_terminal_inside_disc_rejected(self):
        g, vid, cc = two_ring_host()
        with pytest.raises(ConfigError):
            CLConfiguration(g, cc, Linkage(((vid(1, 0), vid(1, 1)),)))


class TestConvexity:
    def test_double_dip_violates_unique_chord(self):
        g, vid, cc = two_ring_host(8)
        path = (
            vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1),
            vid(1, 2), vid(0, 2), vid(0, 3), vid(1, 3), vid(2, 3),
        )
        q = CLConfiguration(g, cc, Linkage((path,)))
        report = is_convex(q)
        assert not report
        assert report.clause == "ii.a"
        assert report.level == 1

    def test_bump_only_dip_violates_reach(self):
        # Cycle family skips the intermediate ring, so the dip never
        # reaches the next cycle inward.
        g, vid = ring_lattice(4, 6)
        cc = make_concentric(g, [ring_cycle(vid, 0, 6), ring_cycle(vid, 2, 6)])
        path = (vid(3, 0), vid(2, 0), vid(1, 0), vid(1, 1), vid(2, 1), vid(3, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        report = is_convex(q)
        assert not report
        assert report.clause == "ii.b"
        assert report.level == 1

    def test_three_semichords_detected(self):
        # W-shaped chord that only touches the middle cycle between bumps.
        g, vid = ring_lattice(5, 8)
        cc = make_concentric(
            g, [ring_cycle(vid, 0, 8), ring_cycle(vid, 1, 8), ring_cycle(vid, 3, 8)]
        )
        path = (
            vid(4, 0), vid(3, 0), vid(2, 0), vid(1, 0), vid(1, 1),
            vid(2, 1), vid(2, 2), vid(1, 2), vid(1, 3), vid(2, 3),
            vid(3, 3), vid(4, 3),
        )
        q = CLConfiguration(g, cc, Linkage((path,)))
        report = is_convex(q)
        assert not report
        assert report.clause == "ii.c"
        assert report.level == 2

    def test_lonely_crossing_violates_nesting(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        report = is_convex(q)
        assert not report
        assert report.clause == "iii"


class TestTouchFree:
    def test_no_contact_allowed(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        assert is_touch_free(q)

    def test_crossing_allowed(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        assert is_touch_free(q)

    def test_single_touch_rejected(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 3), vid(1, 3), vid(1, 4), vid(2, 4))
        q = CLConfiguration(g, cc, Linkage((path,)))
        assert not is_touch_free(q)


class TestOutStructure:
    def test_all_flying(self):
        g, vid, cc = two_ring_host()
        q = CLConfiguration(g, cc, Linkage(((vid(2, 0), vid(2, 1)),)))
        out = out_structure(q)
        assert len(out.flying_hairs) == 1
        assert out.flying_terminals == frozenset({vid(2, 0), vid(2, 1)})
        assert not out.hairs

    def test_crossing_gives_two_invading_hairs(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        out = out_structure(q)
        assert len(out.hairs) == 2
        assert all(h.kind == "invading" for h in out.hairs)
        assert not out.out_segments

    def test_bouncing_hair_and_cave(self):
        # Custom host: outer detour with an extra apex makes the attach
        # vertices degree 4 in the out-structure.
        pts = {}
        sectors = 6
        vid = lambda ring, s: ring * sectors + (s % sectors) + 1
        for ring in range(3):
            for s in range(sectors):
                ang = 2 * math.pi * s / sectors
                r = 1.0 + ring
                pts[vid(ring, s)] = (r * math.cos(ang), r * math.sin(ang))
        apex = 3 * sectors + 1
        ang = 2 * math.pi * 0.5 / sectors
        pts[apex] = (2.6 * math.cos(ang), 2.6 * math.sin(ang))
        edges = []
        for ring in range(3):
            for s in range(sectors):
                edges.append((vid(ring, s), vid(ring, s + 1)))
        for ring in range(2):
            for s in range(sectors):
                edges.append((vid(ring, s), vid(ring + 1, s)))
        edges += [(vid(1, 0), apex), (apex, vid(1, 1))]
        g = plane_graph_from_points(pts, edges)
        cc = make_concentric(g, [ring_cycle(vid, 0, sectors), ring_cycle(vid, 1, sectors)])
        path = (vid(2, 0), vid(1, 0), apex, vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        out = out_structure(q)
        kinds = sorted(h.kind for h in out.hairs)
        assert kinds == ["bouncing", "bouncing"]
        assert out.bouncing_terminals == frozenset({vid(2, 0), vid(2, 1)})
        assert len(out.out_segments) == 1
        # the pocket between the detour and the outer cycle is a cave
        pocket = min(out.caves, key=len)
        assert len(pocket) == 1

    def test_fig7_style_counts(self):
        # One flying path, one invading crossing, one bouncing detour.
        g, vid, cc = two_ring_host(8)
        flying = (vid(2, 4), vid(2, 5))
        crossing = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((flying, crossing)))
        out = out_structure(q)
        assert len(out.flying_hairs) == 1
        assert len(out.flying_terminals) == 2
        assert len(out.invading_terminals) == 2


class TestSegmentTree:
    def test_empty_linkage_single_node(self):
        g, vid, cc = two_ring_host()
        q = CLConfiguration(g, cc, Linkage(()))
        tree = segment_tree(q)
        assert len(tree.parent) == 1
        assert tree.height == 0

    def test_non_convex_rejected(self):
        g, vid, cc = two_ring_host()
        path = (vid(2, 0), vid(1, 0), vid(0, 0), vid(0, 1), vid(1, 1), vid(2, 1))
        q = CLConfiguration(g, cc, Linkage((path,)))
        with pytest.raises(ConfigError):
            segment_tree(q)

    def test_showcase_metrics(self, showcase):
        tree = segment_tree(showcase)
        assert tree.leaves == 11
        assert tree.dilation == 4
        assert tree.height == 8
        assert tree.real_height == 4

    def test_height_bound(self, showcase):
        tree = segment_tree(showcase)
        assert tree.height <= tree.dilation * tree.real_height


class TestTypes:
    def test_showcase_classes(self, showcase):
        classes = segment_types(showcase)
        assert len(classes) == 19
        assert sorted(len(c) for c in classes)[-1] == 4

    def test_separated_by_third_segment(self, showcase):
        # inside one class, all members are mutually parallel and consecutive
        classes = segment_types(showcase)
        big = max(classes, key=len)
        eccs = sorted(s.eccentricity for s in big)
        assert eccs == list(range(eccs[0], eccs[0] + len(big)))


class TestTiltedGrid:
    def test_extract_from_showcase_chain(self, showcase):
        segs = segments(showcase)
        classes = segment_types(showcase, segs)
        big = max(classes, key=len)
        assert len(big) == 4
        u = extract_tilted_grid(showcase, big, segs)
        assert u.capacity == 2
        assert verify_tilted_grid(showcase.graph, u, showcase.linkage)

    def test_capacity_one(self, showcase):
        segs = segments(showcase)
        classes = segment_types(showcase, segs)
        single = next(c for c in classes if len(c) == 1)
        u = extract_tilted_grid(showcase, single, segs)
        assert u.capacity == 1

    def test_five_member_class_capacity_three(self):
        # Nested chain of 5 chords with eccentricities 0..4.
        from pdpp.gallery import _Chord, _Extremal  # noqa: F401

        g, vid = ring_lattice(7, 16)
        cycles = make_concentric(g, [ring_cycle(vid, r, 16) for r in range(6)])
        paths = []
        lo = 0
        for depth, ecc in ((0, 0), (1, 1), (2, 2), (3, 3), (4, 4)):
            a = 0 + depth
            b = 15 - depth
            seq = [vid(6, a)]
            for ring in range(5, ecc - 1, -1):
                seq.append(vid(ring, a))
            for s in range(a + 1, b + 1):
                seq.append(vid(ecc, s))
            for ring in range(ecc + 1, 6):
                seq.append(vid(ring, b))
            seq.append(vid(6, b))
            paths.append(tuple(seq))
        q = CLConfiguration(g, cycles, Linkage(tuple(paths)))
        segs = segments(q)
        assert sorted(s.eccentricity for s in segs) == [0, 1, 2, 3, 4]
        classes = segment_types(q, segs)
        big = max(classes, key=len)
        assert len(big) == 5
        u = extract_tilted_grid(q, big, segs)
        assert u.capacity == 3
        assert verify_tilted_grid(q.graph, u, q.linkage)


class TestReduction:
    def test_verdicts_invariant(self):
        q = cheap_configuration(6, 2, 1, seed=0)
        assert q is not None
        if not (q.linkage.edges & frozenset().union(*(c.edges for c in q.cycles.cycles))):
            raise AssertionError("fixture seed must ride the cycles")
        q2 = reduce_configuration(q)
        assert bool(is_convex(q)) == bool(is_convex(q2))
        assert is_touch_free(q) == is_touch_free(q2)
        assert count_extremal(q) == count_extremal(q2)

    def test_cost_invariant(self):
        q = cheap_configuration(6, 2, 1, seed=0)
        assert q is not None
        q2 = reduce_configuration(q)
        assert linkage_cost(q2.linkage, list(q2.cycles.cycles)) == linkage_cost(
            q.linkage, list(q.cycles.cycles)
        )


class TestTightness:
    def test_ring_family_tight(self):
        g, vid, cc = two_ring_host()
        t = tighten(g, cc)
        assert [c.normalized() for c in t.cycles] == [c.normalized() for c in cc.cycles]
        assert verify_tight(g, cc, budget=1_000_000)

    def test_shortcut_breaks_tightness(self):
        g, vid, extra = shortcut_annulus_host()
        cc = make_concentric(g, [ring_cycle(vid, 0, 6), ring_cycle(vid, 1, 6)])
        # ring 1 plus the chord through the extra vertex slips between rings 1 and 2
        cc3 = make_concentric(
            g, [ring_cycle(vid, 0, 6), ring_cycle(vid, 1, 6), ring_cycle(vid, 2, 6)]
        )
        result = verify_tight(g, cc3, budget=1_000_000)
        assert not result
        t = tighten(g, cc3)
        assert verify_tight(g, t, budget=1_000_000)
        assert extra in t.cycles[2].vertex_set

    def test_two_rings_with_chord_still_tight_below(self):
        g, vid, extra = shortcut_annulus_host()
        cc = make_concentric(g, [ring_cycle(vid, 0, 6), ring_cycle(vid, 1, 6)])
        assert verify_tight(g, cc, budget=1_000_000)


class TestCheapImpliesConvex:
    def test_small_sweep(self):
        checked = 0
        for seed in range(6):
            q = cheap_configuration(6, 2, 1, seed=seed)
            if q is None:
                continue
            assert is_convex(q), f"seed {seed} gave a non-convex cheap configuration"
            checked += 1
        assert checked >= 4


class TestCyclicConnectivity:
    def test_star_edges_connected(self):
        g, vid, cc = two_ring_host()
        v = vid(1, 0)
        edge_set = frozenset(
            tuple(sorted((v, w))) for w in g.rotation[v]
        )
        assert cyclically_connected(g, edge_set)

    def test_far_edges_disconnected(self):
        g, vid, cc = two_ring_host()
        e1 = tuple(sorted((vid(0, 0), vid(0, 1))))
        e2 = tuple(sorted((vid(2, 3), vid(2, 4))))
        assert not cyclically_connected(g, frozenset({e1, e2}))
