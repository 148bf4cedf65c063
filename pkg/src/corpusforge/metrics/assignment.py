"""Maximum-weight one-to-one assignment (Hungarian method, shortest augmenting paths).

O(n^2 m) for an n x m matrix with n <= m; the matrix is transposed when it
has more rows than columns.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

INF = float("inf")


def _min_cost(cost: Sequence[Sequence[float]], n: int, m: int) -> List[int]:
    # potentials u (rows) and v (cols); p[j] = row matched to column j (1-based, 0 = free)
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            delta, j1 = INF, 0
            for j in range(1, m + 1):
                if not used[j]:
                    cur = row[j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta, j1 = minv[j], j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    match = [-1] * n
    for j in range(1, m + 1):
        if p[j]:
            match[p[j] - 1] = j - 1
    return match


def max_weight_assignment(weights: Sequence[Sequence[float]]) -> Tuple[float, List[Tuple[int, int]]]:
    """Return ``(total, pairs)`` maximizing the summed weight of a matching.

    Every row (or every column, whichever is fewer) is matched; with
    non-negative weights this is also the maximum over partial matchings.
    """
    n = len(weights)
    m = len(weights[0]) if n else 0
    if n == 0 or m == 0:
        return 0.0, []
    if any(len(r) != m for r in weights):
        raise ValueError("ragged weight matrix")
    transposed = n > m
    if transposed:
        weights = [[weights[i][j] for i in range(n)] for j in range(m)]
        n, m = m, n
    cost = [[-w for w in row] for row in weights]
    match = _min_cost(cost, n, m)
    pairs = [(i, j) for i, j in enumerate(match)]
    total = sum(weights[i][j] for i, j in pairs)
    if transposed:
        pairs = sorted((j, i) for i, j in pairs)
    return total, pairs
