import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from allocation_oracle import brute_force_greedy, random_instance
from iad_agents.errors import EmptyVavpSet
from iad_agents.lccc import (
    Aircraft, Cluster, Interceptor, LcccAgent, PackageTrapezoids, RankValues, Trapezoid, VavpPoint,
    allocate_interceptors, enumerate_threat_instances, nearest_vavp, package_label, plan_rank,
    prioritize_clusters,
)


def cluster(cid, xy, mission="Strike", n=3):
    return Cluster(cid, xy, mission, tuple(Aircraft(f"{cid}-{k}", k) for k in range(1, n + 1)))


@pytest.mark.parametrize("n,label", [
    (1, "Small"), (3, "Small"), (4, "Medium"), (5, "Medium"), (8, "Medium"), (9, "Big"), (10, "Big"), (40, "Big"),
])
def test_package_labels(n, label):
    assert package_label(n) == label


def test_ties_prefer_the_larger_label():
    # 4 is 0.5 Small and 0.5 Medium; 9 is 0.5 Medium and 0.5 Big
    traps = PackageTrapezoids()
    assert traps.small(4) == traps.medium(4) == 0.5
    assert package_label(4) == "Medium" and package_label(9) == "Big"


def test_trapezoid_shape():
    t = Trapezoid(3, 5, 8, 10)
    assert [t(x) for x in (3, 4, 5, 8, 9, 10)] == [0.0, 0.5, 1.0, 1.0, 0.5, 0.0]
    with pytest.raises(ValueError):
        Trapezoid(5, 3, 8, 10)


def test_gap_in_coverage_rejected():
    with pytest.raises(ValueError):
        PackageTrapezoids(Trapezoid(0, 0, 2, 3), Trapezoid(5, 6, 8, 10), Trapezoid(8, 10, math.inf, math.inf))


@pytest.mark.parametrize("d,pkg,msn,rank", [
    (0, "Small", "Escort", 1),       # floor(0 + 0.5 + 0.5)
    (0, "Big", "Strike", 2),
    (150, "Small", "Escort", 2),     # floor(1.5 + 1) = 2
    (150, "Big", "Strike", 3),       # floor(1.5 + 2) = 3
    (250, "Medium", "Strike", 4),    # floor(2.5 + 1.5)
    (249.9, "Small", "Escort", 3),
    (700, "Big", "Strike", 9),
    (5000, "Small", "Escort", 9),
])
def test_plan_rank(d, pkg, msn, rank):
    b = plan_rank(d, pkg, msn)
    assert b.rank == rank and b.precedence == 9 - rank


def test_rank_values_swap_polarity():
    flipped = RankValues({"Small": 2, "Medium": 1, "Big": 1}, {"Strike": 1, "Escort": 2})
    assert plan_rank(150, "Big", "Strike", flipped).rank == 2


def test_nearest_vavp_and_empty_set():
    vs = [VavpPoint("V1", (0, 0)), VavpPoint("V2", (10, 0))]
    assert nearest_vavp((8, 0), vs) == (2.0, "V2")
    assert nearest_vavp((5, 0), vs)[1] == "V1"
    with pytest.raises(EmptyVavpSet):
        nearest_vavp((0, 0), [])
    with pytest.raises(EmptyVavpSet):
        prioritize_clusters([cluster("C1", (0, 0))], [])


def test_eighteen_instances_for_three_clusters():
    cs = [cluster("C1", (0, 100)), cluster("C2", (0, 300), "Escort", 6), cluster("C3", (0, 500), n=12)]
    inst = enumerate_threat_instances(cs, [VavpPoint("V", (0, 0))])
    assert len(inst) == 18
    assert len({(i.cluster_id, i.size, i.mission) for i in inst}) == 18


def test_nearer_cluster_served_first():
    vs = [VavpPoint("V", (0, 0))]
    cs = [cluster("Far", (0, 600)), cluster("Near", (0, 100))]
    assert [e.cluster_id for e in prioritize_clusters(cs, vs)] == ["Near", "Far"]


def test_equal_precedence_breaks_by_cluster_id():
    vs = [VavpPoint("V", (0, 0))]
    cs = [cluster("B", (0, 120)), cluster("A", (0, 130))]
    assert [e.cluster_id for e in prioritize_clusters(cs, vs)] == ["A", "B"]


def test_greedy_allocation_example():
    vs = [VavpPoint("V", (0, 0))]
    cs = [cluster("C1", (0, 100), n=2), cluster("C2", (0, 800), n=2)]
    icps = [Interceptor("I1", (0, 90)), Interceptor("I2", (0, 700)), Interceptor("I3", (0, 110))]
    res = allocate_interceptors(prioritize_clusters(cs, vs), icps, 0)
    assert [(a.target_id, a.interceptor_id) for a in res.assignments] == [
        ("C1-1", "I1"), ("C1-2", "I3"), ("C2-1", "I2"),
    ]
    assert res.unassigned == ["C2-2"]


def test_unavailable_interceptors_are_skipped():
    vs = [VavpPoint("V", (0, 0))]
    res = allocate_interceptors(prioritize_clusters([cluster("C", (0, 0), n=1)], vs),
                                [Interceptor("I1", (0, 0), False), Interceptor("I2", (50, 0))])
    assert res.assignments[0].interceptor_id == "I2"


def test_attack_order_uses_ranking():
    c = Cluster("C", (0, 0), "Strike", (Aircraft("x", 3), Aircraft("y", 1), Aircraft("z", 2)))
    assert [a.aircraft_id for a in c.attack_order()] == ["y", "z", "x"]


# -- oracle equivalence ----------------------------------------------------

def test_allocation_matches_oracle_on_random_instances():
    rng = random.Random(11)
    for _ in range(300):
        clusters, vavps, icps = random_instance(rng)
        res = allocate_interceptors(prioritize_clusters(clusters, vavps), icps)
        got = [(a.target_id, a.interceptor_id, a.cluster_id) for a in res.assignments]
        assert (got, res.unassigned) == brute_force_greedy(clusters, vavps, icps)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_no_double_engagement(seed):
    clusters, vavps, icps = random_instance(random.Random(seed))
    res = allocate_interceptors(prioritize_clusters(clusters, vavps), icps)
    used = [a.interceptor_id for a in res.assignments]
    targets = [a.target_id for a in res.assignments]
    assert len(used) == len(set(used))
    assert len(targets) == len(set(targets))
    assert set(used) <= {i.interceptor_id for i in icps if i.available}
    n_targets = sum(len(c.members) for c in clusters)
    assert len(targets) + len(res.unassigned) == n_targets


# -- the kernel-driven agent -----------------------------------------------

def scenario_one():
    vs = [VavpPoint("V", (0, 0))]
    cs = [cluster("C1", (0, 100), n=2), cluster("C2", (0, 800), "Escort", 2), cluster("C3", (0, 400), n=12)]
    icps = [Interceptor("I1", (0, 90)), Interceptor("I2", (0, 700)), Interceptor("I3", (0, 300))]
    return cs, vs, icps


def test_agent_agrees_with_functional_pipeline():
    cs, vs, icps = scenario_one()
    step = LcccAgent().step(cs, vs, icps, 0)
    assert [e.cluster_id for e in step.priority] == [e.cluster_id for e in prioritize_clusters(cs, vs)]
    ref = allocate_interceptors(prioritize_clusters(cs, vs), icps, 0)
    assert step.assignments == ref.assignments
    assert step.unassigned == ref.unassigned
    assert step.instances == 18


def test_agent_plan_flow_is_logged():
    cs, vs, icps = scenario_one()
    step = LcccAgent().step(cs, vs, icps, 0)
    handled = [r.get("handled_by") for r in step.records if r.kind == "event"]
    assert handled[0] == "NewClusterPlan"
    assert handled.count("AllocatePlan") == 3
    assert handled.count("NextClusterPlan") == 2
    assert handled.count("external") == len(step.assignments)
    assert [e.kind for e in step.events].count("ev3") == len(step.assignments)


def test_interceptors_stay_committed_across_ticks():
    cs, vs, icps = scenario_one()
    agent = LcccAgent()
    first = agent.step(cs, vs, icps, 0)
    second = agent.step(cs, vs, icps, 1)
    assert len(first.assignments) == 3
    assert second.assignments == []
    assert sorted(second.unassigned) == sorted(first.unassigned)


def test_agent_without_clusters_idles():
    step = LcccAgent().step([], [VavpPoint("V", (0, 0))], [], 0)
    assert step.priority == [] and step.assignments == []


@given(st.floats(0, 1e6, allow_nan=False), st.sampled_from(["Small", "Medium", "Big"]),
       st.sampled_from(["Strike", "Escort"]))
def test_rank_always_clamped(d, pkg, msn):
    assert 0 <= plan_rank(d, pkg, msn).rank <= 9


@given(st.lists(st.floats(0, 1500), min_size=2, max_size=5), st.data())
def test_closer_never_ranks_later(distances, data):
    vs = [VavpPoint("V", (0, 0))]
    cs = [cluster(f"C{k}", (0, d)) for k, d in enumerate(distances)]
    before = [e.cluster_id for e in prioritize_clusters(cs, vs)]
    k = data.draw(st.integers(0, len(cs) - 1))
    moved = list(cs)
    moved[k] = cluster(f"C{k}", (0, data.draw(st.floats(0, distances[k]))))
    after = [e.cluster_id for e in prioritize_clusters(moved, vs)]
    assert after.index(f"C{k}") <= before.index(f"C{k}")
