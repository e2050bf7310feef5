"""Brute-force restatement of cluster ranking and greedy allocation.

Shares no code with the package: memberships, ranking and the nearest
interceptor scan are written out directly.
"""

import math

from iad_agents.lccc import Aircraft, Cluster, Interceptor, RankValues, VavpPoint


def brute_force_greedy(clusters, vavps, interceptors, values=RankValues()):
    """Straight-line restatement: rank by the formula, then scan every interceptor."""
    def precedence(c):
        d = min(math.hypot(c.location[0] - v.location[0], c.location[1] - v.location[1]) for v in vavps)
        mu = {"Small": 0, "Medium": 0, "Big": 0}
        n = len(c.members)
        mu["Small"] = 1.0 if n <= 3 else (5 - n) / 2 if n < 5 else 0.0
        mu["Medium"] = 0.0 if n <= 3 or n >= 10 else (n - 3) / 2 if n < 5 else 1.0 if n <= 8 else (10 - n) / 2
        mu["Big"] = 0.0 if n <= 8 else (n - 8) / 2 if n < 10 else 1.0
        best = max(mu.values())
        label = [s for s in ("Small", "Medium", "Big") if mu[s] == best][-1]
        r = math.floor(d / 100 + values.size[label] / 2 + values.mission[c.mission] / 2)
        return 9 - min(max(r, 0), 9)

    order = sorted(clusters, key=lambda c: (-precedence(c), c.cluster_id))
    free = [i for i in interceptors if i.available]
    out, left = [], []
    for c in order:
        for a in sorted(c.members, key=lambda a: (a.ranking, a.aircraft_id)):
            best = None
            for i in free:
                d = math.hypot(c.location[0] - i.location[0], c.location[1] - i.location[1])
                if best is None or (d, i.interceptor_id) < best[0]:
                    best = ((d, i.interceptor_id), i)
            if best is None:
                left.append(a.aircraft_id)
            else:
                free.remove(best[1])
                out.append((a.aircraft_id, best[1].interceptor_id, c.cluster_id))
    return out, left


def random_instance(rng):
    vavps = [VavpPoint(f"V{k}", (rng.uniform(0, 1000), rng.uniform(0, 1000))) for k in range(rng.randint(1, 3))]
    clusters = []
    for k in range(rng.randint(1, 4)):
        n = rng.randint(1, 12)
        members = tuple(Aircraft(f"C{k}-{j}", rng.randint(1, 5)) for j in range(n))
        clusters.append(Cluster(f"C{k}", (rng.randint(0, 1000), rng.randint(0, 1000)),
                                rng.choice(["Strike", "Escort"]), members))
    icps = [Interceptor(f"I{k}", (rng.randint(0, 1000), rng.randint(0, 1000)), rng.random() < 0.8)
            for k in range(rng.randint(0, 4))]
    return clusters, vavps, icps
