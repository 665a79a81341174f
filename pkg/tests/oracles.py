"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows):
    """Permutation expansion; fine up to 7 x 7."""
    n = len(rows)
    total = 0
    for p in itertools.permutations(range(n)):
        term = perm_sign(p)
        for i in range(n):
            term *= rows[i][p[i]]
            if not term:
                break
        total += term
    if isinstance(total, Fraction) and total.denominator == 1:
        return total.numerator
    return total


def gram_by_hand(rows):
    return [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]


def tree_distances(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = []
    for s in range(n):
        d = [math.inf] * n
        d[s] = 0
        todo = [s]
        for u in todo:
            for w in adj[u]:
                if d[w] == math.inf:
                    d[w] = d[u] + 1
                    todo.append(w)
        dist.append(d)
    return dist
