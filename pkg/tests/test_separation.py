import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wallkit.complexes import build_cayley_ball, build_example1, build_example2
from wallkit.dehn import DehnMachine
from wallkit.errors import BadParams, HypothesisViolated, NotSmallCancellation, UnsettledWall
from wallkit.presentation import gen_example
from wallkit.separation import (
    cover_split,
    default_region,
    density_threshold,
    geodesic,
    geodesic_context,
    local_density_check,
    local_to_global_bound,
    neighborhood_probe,
    path_vertices,
    relator_neighborhood,
    report_to_csv,
    report_to_json,
    separation_constant,
    single_crossing_edges,
    verify_linear_separation,
)
from wallkit.walls import build_walls, wall_distance


@pytest.fixture(scope="module")
def tree():
    free = gen_example("free")
    return build_cayley_ball(free, DehnMachine(free), 3)


@pytest.fixture(scope="module")
def ex2():
    c = build_example2(2, 14)
    return c, build_walls(c)


# -- geodesics --------------------------------------------------------------------


def test_geodesic_adjacent(tree):
    u, v = tree.edges[0]
    assert geodesic(tree, u, v) == [0]
    with pytest.raises(BadParams):
        geodesic(tree, u, u)


def test_geodesic_tree_unique_path(tree):
    rng = random.Random(1)
    for _ in range(20):
        p, q = rng.sample(range(tree.nv), 2)
        path = geodesic(tree, p, q)
        assert len(path) == tree.bfs_distances(p)[q]
        verts = path_vertices(tree, p, path)
        assert verts[0] == p and verts[-1] == q


def test_geodesic_deterministic_lex_least():
    c = build_example1([1])
    a, e = c.labeled("a1"), c.labeled("e1")
    p1 = geodesic(c, a, e)
    p2 = geodesic(c, a, e)
    assert p1 == p2 and len(p1) == 8
    # lexicographically least among the shortest edge sequences: the first
    # edge is the least progressing edge id out of a1
    dq = c.bfs_distances(e)
    firsts = [eid for (v, eid) in c.adjacency()[a] if dq[v] == dq[a] - 1]
    assert p1[0] == min(firsts)


def test_example1_geodesic_length():
    c = build_example1([1])
    assert len(geodesic(c, c.labeled("a1"), c.labeled("e1"))) == 8


# -- single-crossing edges -----------------------------------------------------------


def test_tree_all_edges_single_crossing(tree):
    ws = build_walls(tree)
    ctx = geodesic_context(tree, ws, 1, tree.nv - 1)
    assert single_crossing_edges(ctx) == frozenset(ctx.edge_seq)
    assert len(ctx.single_crossing) <= wall_distance(ws, 1, tree.nv - 1).total


def test_example1_single_crossing_count():
    c = build_example1([1, 2, 3])
    ws = build_walls(c)
    for n in (1, 2, 3):
        ctx = geodesic_context(c, ws, c.labeled(f"a{n}"), c.labeled(f"e{n}"))
        A = single_crossing_edges(ctx)
        assert len(A) == 6
        assert len(A) <= wall_distance(ws, ctx.p, ctx.q).total


def test_example2_double_crossing_not_single(ex2):
    c, ws = ex2
    ctx = geodesic_context(c, ws, c.labeled("p'"), c.labeled("p''"))
    non_a = [e for e in ctx.edge_seq if e not in ctx.single_crossing]
    assert len(non_a) == 2
    for eid in non_a:
        wid = ws.wall_of_edge[eid]
        assert ctx.crossings[wid] == 2


# -- relator neighborhoods ------------------------------------------------------------


def test_single_crossing_edge_gets_trivial_neighborhood(ex2):
    c, ws = ex2
    ctx = geodesic_context(c, ws, c.labeled("p'"), c.labeled("p''"))
    eid = next(iter(ctx.single_crossing))
    ne = relator_neighborhood(eid, ctx)
    assert ne.size == 1 and ne.cell is None and ne.partner_edge is None


def test_example2_neighborhood_construction(ex2):
    c, ws = ex2
    ctx = geodesic_context(c, ws, c.labeled("p'"), c.labeled("p''"))
    non_a = sorted(e for e in ctx.edge_seq if e not in ctx.single_crossing)
    for eid in non_a:
        ne = relator_neighborhood(eid, ctx)
        assert ne.cell is not None and ne.second_cell is not None
        assert ne.size == 13  # half the cell boundary minus the shared piece
        assert ne.mate in non_a and ne.mate != eid
        # neighborhood is the maximal run of geodesic edges on the cell
        cell_edges = c.cell_edge_set(ne.cell)
        i, j = ne.span
        assert all(ctx.edge_seq[k] in cell_edges for k in range(i, j))
        if i > 0:
            assert ctx.edge_seq[i - 1] not in cell_edges
        if j < len(ctx.edge_seq):
            assert ctx.edge_seq[j] not in cell_edges


def test_neighborhood_probe_values(ex2):
    c, ws = ex2
    ctx = geodesic_context(c, ws, c.labeled("p'"), c.labeled("p''"))
    lam = Fraction(1, 6)
    for eid in (e for e in ctx.edge_seq if e not in ctx.single_crossing):
        ne = relator_neighborhood(eid, ctx)
        pr = neighborhood_probe(ne, ctx, lam)
        assert pr.applicable
        assert pr.far_ok and pr.near_ok
        assert pr.subpath_length == 13 and pr.edge_to_far == 12
        assert pr.far_bound == Fraction(28, 3)
        assert pr.near_bound == 2 * lam * 13 - 1


def test_local_density_values(ex2):
    c, ws = ex2
    assert density_threshold(Fraction(1, 6)) == Fraction(1, 6)
    assert density_threshold(Fraction(1, 8)) == Fraction(5, 12)
    ctx = geodesic_context(c, ws, c.labeled("p'"), c.labeled("p''"))
    for eid in ctx.edge_seq:
        ne = relator_neighborhood(eid, ctx)
        dc = local_density_check(ne, ctx, Fraction(1, 6))
        assert dc.holds
        if ne.cell is None:
            assert dc.ratio == 1


def test_unsettled_wall_guard():
    one = gen_example("tv", I={1}, k=7)
    c = build_cayley_ball(one, DehnMachine(one), 7)
    ws = build_walls(c)  # default margin: nothing settled
    far = max(range(c.nv), key=lambda v: c.dist[v])
    ctx = geodesic_context(c, ws, 0, far)
    with pytest.raises(UnsettledWall):
        relator_neighborhood(ctx.edge_seq[0], ctx)
    ne = relator_neighborhood(ctx.edge_seq[0], ctx, require_settled=False)
    assert ne.size >= 1


# -- cover split and the density principle ---------------------------------------------


def _disjoint(family):
    family = sorted(family)
    return all(family[i][1] <= family[i + 1][0] for i in range(len(family) - 1))


def _union_set(intervals):
    out = set()
    for a, b in intervals:
        out.update(range(a, b))
    return out


def test_cover_split_examples():
    u1, u2, cover = cover_split([(0, 2), (4, 6), (8, 9)])
    assert set(u1) | set(u2) == set(cover) == {(0, 2), (4, 6), (8, 9)}
    assert u2 == [(4, 6)]
    u1, u2, cover = cover_split([(0, 5), (1, 2)])
    assert cover == [(0, 5)] and u1 == [(0, 5)] and u2 == []
    u1, u2, cover = cover_split([(0, 2), (1, 3), (2, 4)])
    assert _union_set(cover) == _union_set([(0, 2), (1, 3), (2, 4)])
    assert _disjoint(u1) and _disjoint(u2)


intervals_strategy = st.lists(
    st.tuples(st.integers(0, 50), st.integers(1, 12)).map(lambda t: (t[0], t[0] + t[1])),
    min_size=1,
    max_size=12,
)


@settings(max_examples=300, deadline=None)
@given(intervals_strategy)
def test_cover_split_postconditions(intervals):
    u1, u2, cover = cover_split(intervals)
    assert _union_set(cover) == _union_set(intervals)
    assert set(u1) | set(u2) == set(cover)
    assert _disjoint(u1) and _disjoint(u2)
    # minimality: dropping any member loses coverage
    for i in range(len(cover)):
        rest = cover[:i] + cover[i + 1:]
        assert _union_set(rest) != _union_set(cover)


@settings(max_examples=200, deadline=None)
@given(intervals_strategy, st.sampled_from([Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)]),
       st.integers(0, 10**6))
def test_density_principle_randomized(intervals, C, seed):
    rng = random.Random(seed)
    marked = set()
    for a, b in intervals:
        need = -(-(C.numerator * (b - a)) // C.denominator)
        marked.update(rng.sample(range(a, b), need))
    rep = local_to_global_bound(marked, intervals, C)
    assert rep.holds and rep.split_holds


def test_density_principle_hypothesis_guard():
    with pytest.raises(HypothesisViolated):
        local_to_global_bound(set(), [(0, 6)], Fraction(1, 2))


def test_density_principle_adversarial_overlap():
    # heavy overlap: many intervals stacked on one another at density 1/6
    intervals = [(0, 12)] * 5 + [(6, 18), (10, 22), (11, 23)]
    marked = {0, 1, 6, 7, 10, 11, 12, 13}
    rep = local_to_global_bound(marked, intervals, Fraction(1, 6))
    assert rep.holds and rep.split_holds


# -- harness ------------------------------------------------------------------------


def test_constant_value():
    assert separation_constant(Fraction(1, 6)) == Fraction(1, 12)
    # half the local density threshold, here 5/12 at 1/8
    assert separation_constant(Fraction(1, 8)) == Fraction(5, 24)


def test_free_ball_min_ratio_one(tree):
    ws = build_walls(tree)
    rep = verify_linear_separation(tree, ws, Fraction(1, 6), region=range(tree.nv))
    assert rep.passed and rep.min_ratio == 1 and rep.mean_ratio == 1
    assert not rep.violations and not rep.inconclusive


def test_example2_positive(ex2):
    c, ws = ex2
    rep = verify_linear_separation(c, ws, Fraction(1, 6), region=range(c.nv))
    assert rep.passed
    assert rep.min_ratio >= Fraction(1, 12)
    assert all(r.dw <= r.d for r in rep.rows)


def test_example1_observe_ratios():
    c = build_example1(list(range(1, 6)))
    ws = build_walls(c)
    anchors = [c.labeled(f"a{n}") for n in range(1, 6)] + [c.labeled(f"e{n}") for n in range(1, 6)]
    rep = verify_linear_separation(c, ws, Fraction(1, 6), region=anchors, observe=True)
    assert rep.passed and rep.observe
    for n in range(1, 6):
        a, e = c.labeled(f"a{n}"), c.labeled(f"e{n}")
        row = next(r for r in rep.rows if {r.p, r.q} == {a, e})
        assert row.d == 2 * n + 6 and row.dw == 6
        assert row.ratio == Fraction(6, 2 * n + 6)


def test_harness_requires_condition_outside_observe():
    c = build_example1([1])
    ws = build_walls(c)
    with pytest.raises(NotSmallCancellation):
        verify_linear_separation(c, ws, Fraction(1, 6), region=range(6))


def test_unsettled_violations_reported_inconclusive():
    one = gen_example("tv", I={1}, k=7)
    c = build_cayley_ball(one, DehnMachine(one), 7)
    ws = build_walls(c, settled_margin=1)  # most walls unsettled
    region = list(range(0, c.nv, max(1, c.nv // 24)))
    rep = verify_linear_separation(c, ws, Fraction(1, 6), region=region)
    # dw counts settled walls only, so deep pairs undercount and would
    # violate the bound; every such pair must land in inconclusive
    assert rep.inconclusive
    assert not rep.violations and rep.passed


def test_default_region_policies():
    one = gen_example("tv", I={1}, k=7)
    c = build_cayley_ball(one, DehnMachine(one), 7)
    ws = build_walls(c)
    assert default_region(c, ws) == []  # margin 14 > radius 7
    ws_all = build_walls(c, settled_policy="all")
    free = gen_example("free")
    t = build_cayley_ball(free, DehnMachine(free), 2)
    wst = build_walls(t)
    assert default_region(t, wst) == list(range(t.nv))


def test_jobs_do_not_change_results(ex2):
    c, ws = ex2
    r1 = verify_linear_separation(c, ws, Fraction(1, 6), region=range(c.nv), jobs=1)
    r2 = verify_linear_separation(c, ws, Fraction(1, 6), region=range(c.nv), jobs=3)
    assert report_to_csv(r1) == report_to_csv(r2)
    assert report_to_json(r1) == report_to_json(r2)


def test_report_formats(ex2):
    c, ws = ex2
    rep = verify_linear_separation(c, ws, Fraction(1, 6), region=range(10), max_pairs=20, seed=3)
    csv = report_to_csv(rep)
    header, *rows = csv.strip().splitlines()
    assert header == "p,q,d,dw,ratio_num,ratio_den,settled,in_A_count"
    assert len(rows) == rep.pair_count
    for line in rows:
        parts = line.split(",")
        assert len(parts) == 8
        p, q, d, dw = map(int, parts[:4])
        assert dw <= d
    js = report_to_json(rep)
    assert '"constant": "1/12"' in js
