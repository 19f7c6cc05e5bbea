"""Pure-Python majorisation kernels.

Reference implementation and fallback for the compiled ``_kernels`` module.
Both expose the same three functions with identical semantics.
"""


def partial_sum_gaps(x, y):
    """Leading partial-sum differences ``sum_{i<=k} (x_i - y_i)`` for k < n-1."""
    n = len(x)
    gaps = [0.0] * max(n - 1, 0)
    acc = 0.0
    for k in range(n - 1):
        acc += float(x[k]) - float(y[k])
        gaps[k] = acc
    return gaps


def t_transform_chain(x, y, tol=1e-12):
    """T-transforms carrying sorted ``x`` onto sorted ``y``.

    Each step picks the largest j with x_j > y_j and the smallest k > j with
    x_k < y_k, then moves ``min(x_j - y_j, y_k - x_k)`` of weight from j to k.
    Returns ``[(t, j, k), ...]`` with ``t`` in [1/2, 1].
    """
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    chain = []
    for _ in range(n):
        j = -1
        for i in range(n):
            if x[i] - y[i] > tol:
                j = i
        if j < 0:
            break
        k = -1
        for i in range(j + 1, n):
            if y[i] - x[i] > tol:
                k = i
                break
        if k < 0:
            break
        excess = x[j] - y[j]
        deficit = y[k] - x[k]
        moved = excess if excess < deficit else deficit
        t = 1.0 - moved / (x[j] - x[k])
        if excess <= deficit:
            x[j] = y[j]
            x[k] = x[k] + moved
        else:
            x[j] = x[j] - moved
            x[k] = y[k]
        chain.append((t, j, k))
    return chain


def _augment(u, adj, match_col, seen):
    for v in adj[u]:
        if not seen[v]:
            seen[v] = True
            if match_col[v] < 0 or _augment(match_col[v], adj, match_col, seen):
                match_col[v] = u
                return True
    return False


def _perfect_matching(r, n, tol):
    # larger entries first: keeps the greedy terms heavy and few
    adj = [sorted((j for j in range(n) if r[i][j] > tol), key=lambda j: (-r[i][j], j))
           for i in range(n)]
    match_col = [-1] * n
    for u in range(n):
        if not _augment(u, adj, match_col, [False] * n):
            return None
    perm = [0] * n
    for v in range(n):
        perm[match_col[v]] = v
    return perm


def birkhoff(d, tol=1e-12):
    """Greedy Birkhoff decomposition.

    Repeatedly finds a perfect matching on the entries above ``tol`` and
    subtracts its smallest entry. Returns ``(terms, residual_weight)`` where
    ``terms`` is ``[(weight, perm), ...]`` and ``perm[i]`` is the column
    matched to row ``i``.
    """
    n = len(d)
    r = [[float(d[i][j]) for j in range(n)] for i in range(n)]
    terms = []
    remaining = 1.0
    for _ in range(n * n):
        if remaining <= tol:
            break
        perm = _perfect_matching(r, n, tol)
        if perm is None:
            break
        w = r[0][perm[0]]
        imin = 0
        for i in range(1, n):
            if r[i][perm[i]] < w:
                w = r[i][perm[i]]
                imin = i
        for i in range(n):
            r[i][perm[i]] -= w
            if r[i][perm[i]] <= tol:
                r[i][perm[i]] = 0.0
        r[imin][perm[imin]] = 0.0
        remaining -= w
        terms.append((w, perm))
    return terms, remaining
