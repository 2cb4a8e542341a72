"""Smith normal form over the integers.

Sparse matrices are given column-wise: ``cols[j] = {row: value}``.  The sparse
path eliminates unit pivots (Markowitz-ordered) and hands the leftover core to
the dense routine, which works on arbitrary-precision Python ints.
"""
from __future__ import annotations

import heapq
from math import gcd


def normalize_divisors(ds) -> list:
    """Invariant factors d1 | d2 | ... (each > 1) of a direct sum of cyclic groups."""
    primes = {}
    for d in ds:
        d = abs(d)
        if d <= 1:
            continue
        p = 2
        while p * p <= d:
            while d % p == 0:
                k = 0
                while d % p == 0:
                    d //= p
                    k += 1
                primes.setdefault(p, []).append(p ** k)
            p += 1
        if d > 1:
            primes.setdefault(d, []).append(d)
    if not primes:
        return []
    for v in primes.values():
        v.sort(reverse=True)
    length = max(len(v) for v in primes.values())
    out = []
    for k in range(length):
        x = 1
        for v in primes.values():
            if k < len(v):
                x *= v[k]
        out.append(x)
    return sorted(out)


# ---------------------------------------------------------------------------
# dense

def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def dense_snf(a, certificates=False):
    """Diagonalize an integer matrix (list of rows).

    Returns ``diag`` (the nonzero diagonal, each dividing the next) and, with
    ``certificates``, unimodular ``U`` and ``V`` such that ``U @ a @ V`` is the
    diagonal matrix.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [list(map(int, row)) for row in a]
    U = _identity(m) if certificates else None
    V = _identity(n) if certificates else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            rs, rd = A[src], A[dst]
            for j in range(n):
                if rs[j]:
                    rd[j] += k * rs[j]
            if U is not None:
                us, ud = U[src], U[dst]
                for j in range(m):
                    ud[j] += k * us[j]

    def add_col(src, dst, k):
        if k:
            for row in A:
                if row[src]:
                    row[dst] += k * row[src]
            if V is not None:
                for row in V:
                    row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(t, i, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(t, j, -q)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/col t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    if certificates:
        return diag, U, V
    return diag


# ---------------------------------------------------------------------------
# sparse

def sparse_rank_divisors(cols, nrows=None):
    """(rank, divisors > 1) of a sparse integer matrix given column-wise."""
    C = {}
    R = {}
    for j, col in enumerate(cols):
        col = {i: v for i, v in col.items() if v}
        if col:
            C[j] = col
            for i, v in col.items():
                R.setdefault(i, {})[j] = v
    rank = 0
    progress = True
    while progress and C:
        progress = False
        heap = [(len(col), j) for j, col in C.items()]
        heapq.heapify(heap)
        while heap:
            ln, j = heapq.heappop(heap)
            col = C.get(j)
            if col is None:
                continue
            if len(col) != ln:
                heapq.heappush(heap, (len(col), j))
                continue
            best = None
            for i, v in col.items():
                if v == 1 or v == -1:
                    cost = len(R[i])
                    if best is None or cost < best[0]:
                        best = (cost, i, v)
                        if cost == 1:
                            break
            if best is None:
                continue
            _, r, p = best
            progress = True
            rank += 1
            prow = R.pop(r)
            pcol = C.pop(j)
            del prow[j]
            del pcol[r]
            for jj in prow:
                del C[jj][r]
            for ii in pcol:
                del R[ii][j]
            for ii, a in pcol.items():
                f = a * p
                rowi = R[ii]
                for jj, b in prow.items():
                    colj = C[jj]
                    nv = rowi.get(jj, 0) - f * b
                    if nv:
                        rowi[jj] = nv
                        colj[ii] = nv
                    else:
                        rowi.pop(jj, None)
                        colj.pop(ii, None)
                if not rowi:
                    del R[ii]
            for jj in prow:
                if not C[jj]:
                    del C[jj]
                else:
                    heapq.heappush(heap, (len(C[jj]), jj))
    if not C:
        return rank, []
    rows = sorted(R)
    cidx = sorted(C)
    ri = {r: k for k, r in enumerate(rows)}
    dense = [[0] * len(cidx) for _ in rows]
    for k, j in enumerate(cidx):
        for i, v in C[j].items():
            dense[ri[i]][k] = v
    diag = dense_snf(dense)
    return rank + len(diag), [d for d in diag if d > 1]


def smith_normal_form(matrix, certificates=False):
    """Divisors (with 1s) and rank of an integer matrix.

    ``matrix`` is a dense list of rows.  With ``certificates`` the dense routine
    is used and ``(divisors, rank, U, V)`` is returned.
    """
    if certificates:
        diag, U, V = dense_snf(matrix, certificates=True)
        return diag, len(diag), U, V
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    cols = [{i: matrix[i][j] for i in range(m) if matrix[i][j]} for j in range(n)]
    rank, tors = sparse_rank_divisors(cols, m)
    divisors = [1] * (rank - len(tors)) + sorted(tors)
    return divisors, rank


def matmul(a, b):
    n = len(b[0]) if b else 0
    return [[sum(x * b[k][j] for k, x in enumerate(row) if x) for j in range(n)] for row in a]


def det(a):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    A = [list(map(int, r)) for r in a]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


__all__ = ["dense_snf", "sparse_rank_divisors", "smith_normal_form", "normalize_divisors",
           "gcd", "matmul", "det"]
