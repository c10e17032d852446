"""Compiled search kernel for the connected-subset census.

One ESU-style enumerator (each connected variable set is generated exactly
once, rooted at its minimum id) with two modes:

* elementary mode prunes any set in which a check reaches induced degree 3;
  the pruned property is hereditary, so the walk still reaches every
  elementary set.  Only the ETS/LETS/EABS planes are valid in this mode.
* general mode enumerates every connected set and tallies all six planes.

At the final size the kernel scans extension candidates read-only and only
materializes children whose b lands inside the recording window; sets with
b above the window are classified identically but never recorded, so the
shortcut does not change any table entry.

Plane order: TS, SS, ETS, LETS, ABS, EABS.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PLANES = ("TS", "SS", "ETS", "LETS", "ABS", "EABS")
TRUNCATED_NONE = -1


@njit(nogil=True, cache=True)
def census_kernel(
    vc_indptr,
    vc_indices,
    cv_indptr,
    cv_indices,
    a_max,
    b_cap,
    elementary,
    root_lo,
    root_hi,
    max_sets,
    counts,
    status,
):
    n = vc_indptr.shape[0] - 1
    nc = cv_indptr.shape[0] - 1
    tally_all = not elementary

    dvmax = 0
    for v in range(n):
        d = vc_indptr[v + 1] - vc_indptr[v]
        if d > dvmax:
            dvmax = d
    dcmax = 0
    for c in range(nc):
        d = cv_indptr[c + 1] - cv_indptr[c]
        if d > dcmax:
            dcmax = d

    check_deg = np.zeros(nc, np.int16)
    seen = np.zeros(n, np.uint8)
    S = np.zeros(a_max + 2, np.int32)

    extcap = (a_max + 2) * (a_max * dvmax * dcmax + 4) + 16
    ext_buf = np.zeros(extcap, np.int32)
    ext_start = np.zeros(a_max + 2, np.int64)
    ext_end = np.zeros(a_max + 2, np.int64)
    news_start = np.zeros(a_max + 2, np.int64)
    cursor = np.zeros(a_max + 2, np.int64)

    tch_buf = np.zeros((a_max + 2) * max(dvmax, 1) + 4, np.int32)
    tch_lo = np.zeros(a_max + 2, np.int64)
    tch_hi = np.zeros(a_max + 2, np.int64)

    b_at = np.zeros(a_max + 2, np.int64)
    nd1_at = np.zeros(a_max + 2, np.int64)
    nbig_at = np.zeros(a_max + 2, np.int64)

    visited = np.int64(0)

    for root in range(root_lo, root_hi):
        deg_r = vc_indptr[root + 1] - vc_indptr[root]
        seen[root] = 1
        S[0] = root
        for p in range(vc_indptr[root], vc_indptr[root + 1]):
            check_deg[vc_indices[p]] = 1
        b = deg_r
        visited += 1
        if max_sets > 0 and visited > max_sets:
            status[0] = visited - 1
            status[1] = 1
            return
        if b <= b_cap:
            counts[2, 1, b] += 1
            if tally_all:
                counts[0, 1, b] += 1
                if deg_r == 0:
                    counts[1, 1, b] += 1

        if a_max >= 2 and deg_r > 0:
            e = 0
            for p in range(vc_indptr[root], vc_indptr[root + 1]):
                c = vc_indices[p]
                for q in range(cv_indptr[c], cv_indptr[c + 1]):
                    w = cv_indices[q]
                    if w > root and seen[w] == 0:
                        seen[w] = 1
                        ext_buf[e] = w
                        e += 1
            ext_start[1] = 0
            news_start[1] = 0
            ext_end[1] = e
            cursor[1] = 0
            b_at[1] = b
            nd1_at[1] = deg_r
            nbig_at[1] = 0
            tch_hi[1] = 0
            tch_ptr = np.int64(0)

            lvl = 1
            while lvl >= 1:
                if lvl == a_max - 1 and cursor[lvl] < ext_end[lvl]:
                    # Final size: read-only scan, materialize only candidates
                    # whose b lands inside the recording window.
                    b_here = b_at[lvl]
                    for t in range(cursor[lvl], ext_end[lvl]):
                        v = ext_buf[t]
                        ok = True
                        db = 0
                        for p in range(vc_indptr[v], vc_indptr[v + 1]):
                            d = check_deg[vc_indices[p]]
                            if elementary and d >= 2:
                                ok = False
                                break
                            if (d + 1) % 2 == 1:
                                db += 1
                            else:
                                db -= 1
                        if not ok or b_here + db > b_cap:
                            continue
                        # Materialize: apply, classify, tally, roll back.
                        nd1 = nd1_at[lvl]
                        nbig = nbig_at[lvl]
                        for p in range(vc_indptr[v], vc_indptr[v + 1]):
                            c = vc_indices[p]
                            d = check_deg[c]
                            check_deg[c] = d + 1
                            if d == 0:
                                nd1 += 1
                            elif d == 1:
                                nd1 -= 1
                            if d == 2:
                                nbig += 1
                        S[lvl] = v
                        size = lvl + 1
                        b2 = b_here + db
                        visited += 1
                        ets = nbig == 0
                        lets_ok = ets
                        abs_ok = True
                        for si in range(size):
                            m = S[si]
                            sat = 0
                            for p in range(vc_indptr[m], vc_indptr[m + 1]):
                                if check_deg[vc_indices[p]] % 2 == 0:
                                    sat += 1
                            dm = vc_indptr[m + 1] - vc_indptr[m]
                            if sat < 2:
                                lets_ok = False
                            if 2 * sat <= dm:
                                abs_ok = False
                            if not lets_ok and not abs_ok:
                                break
                        if ets:
                            counts[2, size, b2] += 1
                            if lets_ok:
                                counts[3, size, b2] += 1
                            if abs_ok:
                                counts[5, size, b2] += 1
                        if tally_all:
                            counts[0, size, b2] += 1
                            if nd1 == 0:
                                counts[1, size, b2] += 1
                            if abs_ok:
                                counts[4, size, b2] += 1
                        for p in range(vc_indptr[v], vc_indptr[v + 1]):
                            check_deg[vc_indices[p]] -= 1
                        if max_sets > 0 and visited > max_sets:
                            status[0] = visited
                            status[1] = size
                            return
                    cursor[lvl] = ext_end[lvl]

                if cursor[lvl] >= ext_end[lvl]:
                    # Backtrack: unmark this level's discoveries, undo the
                    # member addition that opened this level.
                    for t in range(news_start[lvl], ext_end[lvl]):
                        seen[ext_buf[t]] = 0
                    if lvl >= 2:
                        for t in range(tch_lo[lvl], tch_hi[lvl]):
                            check_deg[tch_buf[t]] -= 1
                        tch_ptr = tch_lo[lvl]
                    lvl -= 1
                    continue

                u = ext_buf[cursor[lvl]]
                cursor[lvl] += 1

                tst = tch_ptr
                ok = True
                db = 0
                dnd1 = 0
                dnbig = 0
                for p in range(vc_indptr[u], vc_indptr[u + 1]):
                    c = vc_indices[p]
                    d = check_deg[c]
                    if elementary and d >= 2:
                        ok = False
                        break
                    check_deg[c] = d + 1
                    tch_buf[tch_ptr] = c
                    tch_ptr += 1
                    if d == 0:
                        db += 1
                        dnd1 += 1
                    elif d == 1:
                        db -= 1
                        dnd1 -= 1
                    else:
                        if (d + 1) % 2 == 1:
                            db += 1
                        else:
                            db -= 1
                        if d == 2:
                            dnbig += 1
                if not ok:
                    for t in range(tst, tch_ptr):
                        check_deg[tch_buf[t]] -= 1
                    tch_ptr = tst
                    continue

                size = lvl + 1
                S[lvl] = u
                b2 = b_at[lvl] + db
                nd1 = nd1_at[lvl] + dnd1
                nbig = nbig_at[lvl] + dnbig
                visited += 1

                ets = nbig == 0
                if b2 <= b_cap:
                    lets_ok = ets
                    abs_ok = True
                    for si in range(size):
                        m = S[si]
                        sat = 0
                        for p in range(vc_indptr[m], vc_indptr[m + 1]):
                            if check_deg[vc_indices[p]] % 2 == 0:
                                sat += 1
                        dm = vc_indptr[m + 1] - vc_indptr[m]
                        if sat < 2:
                            lets_ok = False
                        if 2 * sat <= dm:
                            abs_ok = False
                        if not lets_ok and not abs_ok:
                            break
                    if ets:
                        counts[2, size, b2] += 1
                        if lets_ok:
                            counts[3, size, b2] += 1
                        if abs_ok:
                            counts[5, size, b2] += 1
                    if tally_all:
                        counts[0, size, b2] += 1
                        if nd1 == 0:
                            counts[1, size, b2] += 1
                        if abs_ok:
                            counts[4, size, b2] += 1

                if max_sets > 0 and visited > max_sets:
                    status[0] = visited
                    status[1] = size
                    return

                if size < a_max:
                    base = ext_end[lvl]
                    e2 = base
                    for t in range(cursor[lvl], ext_end[lvl]):
                        ext_buf[e2] = ext_buf[t]
                        e2 += 1
                    news2 = e2
                    for p in range(vc_indptr[u], vc_indptr[u + 1]):
                        c = vc_indices[p]
                        if check_deg[c] == 1:  # fresh: only u touches it
                            for q in range(cv_indptr[c], cv_indptr[c + 1]):
                                w = cv_indices[q]
                                if w > root and seen[w] == 0:
                                    seen[w] = 1
                                    ext_buf[e2] = w
                                    e2 += 1
                    lvl += 1
                    ext_start[lvl] = base
                    news_start[lvl] = news2
                    ext_end[lvl] = e2
                    cursor[lvl] = base
                    b_at[lvl] = b2
                    nd1_at[lvl] = nd1
                    nbig_at[lvl] = nbig
                    tch_lo[lvl] = tst
                    tch_hi[lvl] = tch_ptr
                else:
                    for t in range(tst, tch_ptr):
                        check_deg[tch_buf[t]] -= 1
                    tch_ptr = tst

        # Root teardown.
        for p in range(vc_indptr[root], vc_indptr[root + 1]):
            check_deg[vc_indices[p]] = 0
        seen[root] = 0

    status[0] = visited
    status[1] = TRUNCATED_NONE
