"""Dynamic-programming tables for the abstention-aware edit distance.

Tables are filled from the end of both sequences: cell (i, j) holds the
best alignment of ref[i:] against hyp[j:]. This is the forward recurrence
applied to the reversed sequences, so cell (0, 0) carries the same minimum
g as the forward table's (N, M) corner, and the stored choices read the
alignment off left to right.

Each cell keeps its cost as an exact pair (unit edits, alpha units) plus
the match count. Two candidates are compared on
(d_units + alpha * d_alpha_units) with an absolute tolerance, then on
matches. Candidates are visited in preference order and only a strictly
better one replaces the incumbent:

    lexical column: match/substitute, delete, insert word
    placeholder column: absorb (shortest span first), delete, placeholder insert
"""

import numpy as np
from numba import njit

STOP = 0
MATCH = 1
SUBSTITUTE = 2
DELETE = 3
INSERT = 4
ABSORB = 5
PH_INSERT = 6

PH_ID = -1


def strictly_better(u1, q1, m1, u2, q2, m2, alpha, tol):
    """True if (u1, q1, m1) beats (u2, q2, m2): lower cost, then more matches."""
    diff = (u1 - u2) + alpha * (q1 - q2)
    if diff < -tol:
        return True
    if diff > tol:
        return False
    return m1 > m2


_strictly_better = njit(strictly_better)


def fill_quadratic(ref, hyp, alpha, tol, ph_token):
    """Reference table fill; the absorb term scans every span end (O(N^2 M))."""
    n, m = len(ref), len(hyp)
    units = [[0] * (m + 1) for _ in range(n + 1)]
    phs = [[0] * (m + 1) for _ in range(n + 1)]
    hits = [[0] * (m + 1) for _ in range(n + 1)]
    choice = [[STOP] * (m + 1) for _ in range(n + 1)]
    span = [[0] * (m + 1) for _ in range(n + 1)]

    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n and j == m:
                continue
            have = False
            bu = bq = bm = bc = bs = 0

            if j < m and hyp[j] != ph_token:
                if i < n:
                    if ref[i] == hyp[j]:
                        bu, bq, bm, bc = units[i + 1][j + 1], phs[i + 1][j + 1], hits[i + 1][j + 1] + 1, MATCH
                    else:
                        bu, bq, bm, bc = units[i + 1][j + 1] + 1, phs[i + 1][j + 1], hits[i + 1][j + 1], SUBSTITUTE
                    have = True
                    cu, cq, cm = units[i + 1][j] + 1, phs[i + 1][j], hits[i + 1][j]
                    if strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                        bu, bq, bm, bc = cu, cq, cm, DELETE
                cu, cq, cm = units[i][j + 1] + 1, phs[i][j + 1], hits[i][j + 1]
                if not have or strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                    bu, bq, bm, bc = cu, cq, cm, INSERT
                    have = True
            elif j < m:
                if i < n:
                    for k in range(i + 1, n + 1):
                        cu, cq, cm = units[k][j + 1], phs[k][j + 1] + (k - i), hits[k][j + 1]
                        if not have or strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                            bu, bq, bm, bc, bs = cu, cq, cm, ABSORB, k
                            have = True
                    cu, cq, cm = units[i + 1][j] + 1, phs[i + 1][j], hits[i + 1][j]
                    if strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                        bu, bq, bm, bc = cu, cq, cm, DELETE
                cu, cq, cm = units[i][j + 1], phs[i][j + 1] + 1, hits[i][j + 1]
                if not have or strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                    bu, bq, bm, bc = cu, cq, cm, PH_INSERT
                    have = True
            else:
                bu, bq, bm, bc = units[i + 1][j] + 1, phs[i + 1][j], hits[i + 1][j], DELETE

            units[i][j], phs[i][j], hits[i][j] = bu, bq, bm
            choice[i][j], span[i][j] = bc, bs

    return units, phs, hits, choice, span


@njit(cache=True)
def fill_linear(ref_ids, hyp_ids, alpha, tol):
    """Compiled table fill; the absorb term is a running best per PH column.

    For a placeholder at hyp[j], absorbing ref[i:k) costs alpha * (k - i)
    on top of cell (k, j + 1). Keying candidates by (units, alpha_units + k)
    makes the comparison independent of i, so one running best per column,
    updated as i decreases, replaces the scan over k.
    """
    n = ref_ids.shape[0]
    m = hyp_ids.shape[0]
    units = np.zeros((n + 1, m + 1), dtype=np.int64)
    phs = np.zeros((n + 1, m + 1), dtype=np.int64)
    hits = np.zeros((n + 1, m + 1), dtype=np.int64)
    choice = np.zeros((n + 1, m + 1), dtype=np.int64)
    span = np.zeros((n + 1, m + 1), dtype=np.int64)

    run_u = np.zeros(m + 1, dtype=np.int64)
    run_q = np.zeros(m + 1, dtype=np.int64)
    run_m = np.zeros(m + 1, dtype=np.int64)
    run_k = np.full(m + 1, -1, dtype=np.int64)

    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n and j == m:
                continue
            is_ph = j < m and hyp_ids[j] == PH_ID

            if is_ph and i < n:
                k = i + 1
                cu = units[k, j + 1]
                cq = phs[k, j + 1] + k
                cm = hits[k, j + 1]
                # ties go to the newest (shortest) span
                if run_k[j] < 0 or not _strictly_better(
                    run_u[j], run_q[j], run_m[j], cu, cq, cm, alpha, tol
                ):
                    run_u[j] = cu
                    run_q[j] = cq
                    run_m[j] = cm
                    run_k[j] = k

            have = False
            bu = 0
            bq = 0
            bm = 0
            bc = STOP
            bs = 0

            if j < m and not is_ph:
                if i < n:
                    if ref_ids[i] == hyp_ids[j]:
                        bu = units[i + 1, j + 1]
                        bq = phs[i + 1, j + 1]
                        bm = hits[i + 1, j + 1] + 1
                        bc = MATCH
                    else:
                        bu = units[i + 1, j + 1] + 1
                        bq = phs[i + 1, j + 1]
                        bm = hits[i + 1, j + 1]
                        bc = SUBSTITUTE
                    have = True
                    cu = units[i + 1, j] + 1
                    cq = phs[i + 1, j]
                    cm = hits[i + 1, j]
                    if _strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                        bu = cu
                        bq = cq
                        bm = cm
                        bc = DELETE
                cu = units[i, j + 1] + 1
                cq = phs[i, j + 1]
                cm = hits[i, j + 1]
                if not have or _strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                    bu = cu
                    bq = cq
                    bm = cm
                    bc = INSERT
                    have = True
            elif j < m:
                if i < n:
                    bu = run_u[j]
                    bq = run_q[j] - i
                    bm = run_m[j]
                    bc = ABSORB
                    bs = run_k[j]
                    have = True
                    cu = units[i + 1, j] + 1
                    cq = phs[i + 1, j]
                    cm = hits[i + 1, j]
                    if _strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                        bu = cu
                        bq = cq
                        bm = cm
                        bc = DELETE
                cu = units[i, j + 1]
                cq = phs[i, j + 1] + 1
                cm = hits[i, j + 1]
                if not have or _strictly_better(cu, cq, cm, bu, bq, bm, alpha, tol):
                    bu = cu
                    bq = cq
                    bm = cm
                    bc = PH_INSERT
                    have = True
            else:
                bu = units[i + 1, j] + 1
                bq = phs[i + 1, j]
                bm = hits[i + 1, j]
                bc = DELETE

            units[i, j] = bu
            phs[i, j] = bq
            hits[i, j] = bm
            choice[i, j] = bc
            span[i, j] = bs

    return units, phs, hits, choice, span
