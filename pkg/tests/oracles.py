"""Brute-force reference computations used only by the tests.

None of these share code with the paths they check: edges come from
pairwise tuple comparison, PID values from plain float arithmetic.
"""

import itertools
import math


def brute_force_edges(outputs, sizes, source):
    """Edge set of the characteristic graph of ``source`` by full pair enumeration."""
    others = [range(n) for i, n in enumerate(sizes) if i != source]
    edges = set()
    for u in range(sizes[source]):
        for v in range(u + 1, sizes[source]):
            for rest in itertools.product(*others):
                tu = list(rest)
                tv = list(rest)
                tu.insert(source, u)
                tv.insert(source, v)
                if outputs[tuple(tu)] != outputs[tuple(tv)]:
                    edges.add((u, v))
                    break
    return edges


def midpoint(lo, hi, bits, k):
    return lo + (k + 0.5) * (hi - lo) / 2**bits


def level(lo, hi, bits, v):
    n = 2**bits
    if v < lo:
        return 0
    if v >= hi:
        return n - 1
    return min(int(math.floor((v - lo) / ((hi - lo) / n))), n - 1)


def pid(kp, ki, kd, e, ei, ed):
    return min(max((kp * e + ki * ei) + kd * ed, 0.0), 100.0)


def entropy(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)
