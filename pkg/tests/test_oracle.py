import pytest

from pdpp.instances import DppInstance, Solution, gen_grid_instance, parse_instance
from pdpp.oracle import (
    BudgetExceeded,
    Linkage,
    Status,
    cheapest_equivalent_linkage,
    linkage_cost,
    solve_bruteforce,
    verify_solution,
)
from pdpp.plane import Cycle, grid_ring, grid_vertex, make_grid


def k2_instance():
    return parse_instance("p dpp 2 1 1\ne 1 2\nt 1 2\n")


def crossing_corner_pairs(n):
    """Pairs (a,c),(b,d) with a,b,c,d the grid corners in clockwise order."""
    g = make_grid(n, n)
    a = grid_vertex(n, n, 1, 1)
    b = grid_vertex(n, n, 1, n)
    c = grid_vertex(n, n, n, n)
    d = grid_vertex(n, n, n, 1)
    return DppInstance(g, ((a, c), (b, d)))


class TestBruteForce:
    def test_k2_yes(self):
        out = solve_bruteforce(k2_instance())
        assert out.status is Status.YES
        assert out.solution.paths == ((1, 2),)

    def test_2x2_crossing_pairs_no(self):
        out = solve_bruteforce(crossing_corner_pairs(2))
        assert out.status is Status.NO

    def test_crossing_pairs_no_in_any_grid(self):
        # With all four corners on the outer face, interleaved pairs cannot
        # be linked by disjoint paths in a planar graph; the anti-diagonal
        # separator forces both paths through the grid center.
        for n in (3, 4):
            out = solve_bruteforce(crossing_corner_pairs(n))
            assert out.status is Status.NO

    def test_noncrossing_corner_pairs_yes(self):
        g = make_grid(3, 3)
        inst = DppInstance(g, ((1, 3), (7, 9)))
        out = solve_bruteforce(inst)
        assert out.status is Status.YES
        assert verify_solution(inst, out.solution)

    def test_budget_exceeded_signalled(self):
        inst = gen_grid_instance(6, 2, 3)
        out = solve_bruteforce(inst, budget=10)
        assert out.status is Status.UNKNOWN

    def test_solutions_verify(self):
        for seed in range(8):
            inst = gen_grid_instance(4, 2, seed)
            out = solve_bruteforce(inst)
            if out.status is Status.YES:
                assert verify_solution(inst, out.solution)

    def test_deterministic(self):
        inst = gen_grid_instance(5, 2, 9)
        a = solve_bruteforce(inst)
        b = solve_bruteforce(inst)
        assert a.status == b.status
        assert a.solution == b.solution


class TestVerify:
    def test_valid(self):
        inst = k2_instance()
        assert verify_solution(inst, Solution(((1, 2),)))

    def test_shared_vertex_named(self):
        inst = crossing_corner_pairs(3)
        bad = Solution(((1, 2, 5, 8, 9), (3, 5, 7)))
        result = verify_solution(inst, bad)
        assert not result
        assert any("vertex 5" in p for p in result.problems)

    def test_non_edge_named(self):
        inst = k2_instance()
        g = inst.graph
        result = verify_solution(
            DppInstance(make_grid(2, 2), ((1, 4),)), Solution(((1, 4),))
        )
        assert not result
        assert any("non-edge (1,4)" in p for p in result.problems)


class TestCheapest:
    def test_already_on_cycles(self):
        g = make_grid(3, 3)
        ring = grid_ring(g, 0)
        link = Linkage(((1, 2, 3),))
        assert linkage_cost(link, [ring]) == 0
        best = cheapest_equivalent_linkage(g, link, [ring])
        assert linkage_cost(best, [ring]) == 0
        assert best.pattern == link.pattern

    def test_reroute_through_cycle(self):
        # Path 4-5-6 cuts across the 3x3 grid; going around the ring is free.
        g = make_grid(3, 3)
        ring = grid_ring(g, 0)
        link = Linkage(((4, 5, 6),))
        assert linkage_cost(link, [ring]) == 2
        best = cheapest_equivalent_linkage(g, link, [ring])
        assert best.pattern == link.pattern
        assert linkage_cost(best, [ring]) == 0

    def test_no_alternative(self):
        g = make_grid(1, 3)
        link = Linkage(((1, 2, 3),))
        best = cheapest_equivalent_linkage(g, link, [])
        assert best == link

    def test_cost_never_increases_and_pattern_kept(self):
        g = make_grid(3, 3)
        ring = grid_ring(g, 0)
        for path in ((1, 4, 7), (1, 2, 5, 8, 9), (3, 6, 5, 4, 7)):
            link = Linkage((path,))
            best = cheapest_equivalent_linkage(g, link, [ring])
            assert linkage_cost(best, [ring]) <= linkage_cost(link, [ring])
            assert best.pattern == link.pattern
