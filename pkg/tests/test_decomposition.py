import pytest

from pdpp.decomposition import (
    BranchDecomposition,
    TooWide,
    TreeDecomposition,
    bd_from_td,
    best_heuristic_bd,
    branch_decompose,
    branchwidth_decision,
    branchwidth_exact,
    branchwidth_lower_bound_from_tw,
    caterpillar_bd,
    find_grid_minor,
    grid_sweep_order,
    td_from_bd,
    tree_decompose,
    treewidth_exact,
    verify_branch_decomposition,
    verify_tree_decomposition,
)
from pdpp.instances import gen_random_planar
from pdpp.plane import make_grid, plane_graph_from_edges, verify_minor_model


def tree_graph():
    return plane_graph_from_edges(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])


class TestTreewidth:
    def test_exact_small(self):
        assert treewidth_exact(tree_graph()) == 1
        assert treewidth_exact(make_grid(2, 2)) == 2
        assert treewidth_exact(make_grid(3, 3)) == 3

    def test_minfill_td_verifies(self):
        for seed in range(6):
            inst = gen_random_planar(10, 16, 1, seed)
            td = tree_decompose(inst.graph)
            assert verify_tree_decomposition(inst.graph, td)

    def test_exact_td_achieves_width(self):
        g = make_grid(3, 3)
        td = tree_decompose(g, exact=True)
        assert td.width == 3
        assert verify_tree_decomposition(g, td)


class TestVerifiers:
    def test_bad_bag_detected(self):
        g = tree_graph()
        td = tree_decompose(g)
        broken = TreeDecomposition(
            td.parent, tuple(b - {4} for b in td.bags), td.width
        )
        assert not verify_tree_decomposition(g, broken)

    def test_wrong_declared_width(self):
        g = tree_graph()
        td = tree_decompose(g)
        lying = TreeDecomposition(td.parent, td.bags, td.width + 1)
        result = verify_tree_decomposition(g, lying)
        assert not result
        assert any("declared width" in p for p in result.problems)

    def test_bd_wrong_width_detected(self):
        g = make_grid(2, 2)
        bd = caterpillar_bd(g, grid_sweep_order(g))
        lying = BranchDecomposition(bd.tree_edges, bd.tau, bd.width + 1)
        assert not verify_branch_decomposition(g, lying)

    def test_bd_tau_must_cover(self):
        g = make_grid(2, 2)
        bd = caterpillar_bd(g, grid_sweep_order(g))
        tau = dict(bd.tau)
        leaf = next(iter(tau))
        tau[leaf] = (1, 4)
        assert not verify_branch_decomposition(
            g, BranchDecomposition(bd.tree_edges, tau, bd.width)
        )


class TestBranchwidth:
    def test_grid_branchwidth_exact(self):
        for k in (2, 3, 4):
            g = make_grid(k, k)
            assert not branchwidth_decision(g, k - 1)
            assert branchwidth_decision(g, k)
            assert branchwidth_exact(g) == k

    def test_sweep_matches_exact_on_grids(self):
        for k in (2, 3, 4):
            g = make_grid(k, k)
            bd = caterpillar_bd(g, grid_sweep_order(g))
            assert bd.width == k

    def test_tw_lower_bound_consistent(self):
        for k in (2, 3, 4):
            g = make_grid(k, k)
            assert branchwidth_lower_bound_from_tw(treewidth_exact(g)) <= k

    def test_single_edge(self):
        g = plane_graph_from_edges(2, [(1, 2)])
        assert branchwidth_exact(g) == 0


class TestEitherOr:
    def test_tree_low_width(self):
        g = tree_graph()
        out = branch_decompose(g, 10)
        assert isinstance(out, BranchDecomposition)
        assert out.width <= 2

    def test_4x4_with_generous_target(self):
        out = branch_decompose(make_grid(4, 4), 10)
        assert isinstance(out, BranchDecomposition)
        assert out.width >= 4

    def test_8x8_too_wide(self):
        g = make_grid(8, 8)
        out = branch_decompose(g, 2)
        assert isinstance(out, TooWide)
        assert verify_minor_model(g, out.grid_model)

    def test_emitted_decompositions_verify(self):
        for seed in range(5):
            g = gen_random_planar(9, 14, 1, seed).graph
            out = branch_decompose(g, 50)
            assert isinstance(out, BranchDecomposition)
            assert verify_branch_decomposition(g, out)


class TestTranslation:
    def test_td_from_bd_bounds(self):
        for k in (2, 3, 4):
            g = make_grid(k, k)
            bd = caterpillar_bd(g, grid_sweep_order(g))
            td = td_from_bd(g, bd)
            assert verify_tree_decomposition(g, td)
            assert td.width <= -((-3 * bd.width) // 2) - 1

    def test_single_edge_graph(self):
        g = plane_graph_from_edges(2, [(1, 2)])
        bd = best_heuristic_bd(g)
        td = td_from_bd(g, bd)
        assert td.bags[0] == frozenset({1, 2})

    def test_bd_width2_gives_td_width_le_2(self):
        g = tree_graph()
        bd = best_heuristic_bd(g)
        assert bd.width <= 2
        td = td_from_bd(g, bd)
        assert td.width <= 2


class TestGridMinor:
    def test_identity_grid(self):
        g = make_grid(3, 3)
        model = find_grid_minor(g, 3)
        assert model is not None
        assert verify_minor_model(g, model)

    def test_tree_has_no_2x2(self):
        assert find_grid_minor(tree_graph(), 2) is None

    def test_9x9_blocks(self):
        g = make_grid(9, 9)
        model = find_grid_minor(g, 3)
        assert model is not None
        assert verify_minor_model(g, model)
        assert model.grid_rows == 3

    def test_hexagon_c4(self):
        g = plane_graph_from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)])
        model = find_grid_minor(g, 2)
        assert model is not None and verify_minor_model(g, model)


class TestSandwich:
    def test_prop_sandwich_on_corpus(self):
        graphs = [
            tree_graph(),
            make_grid(2, 2),
            make_grid(3, 3),
            make_grid(2, 4),
            plane_graph_from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]),
        ]
        for seed in range(3):
            graphs.append(gen_random_planar(8, 12, 1, seed).graph)
        for g in graphs:
            tw = treewidth_exact(g)
            bw = branchwidth_exact(g)
            if bw <= 1:
                continue  # sandwich is for bw >= 2 (paths/stars degenerate)
            assert bw <= tw + 1 <= -((-3 * bw) // 2)
