# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first search kernel.

Same algorithm and node accounting as ``_pysearch.run``; see that module for
the meaning of the problem tuple and the return value.
"""

from array import array
from time import perf_counter

from libc.stdlib cimport llabs


cdef inline long long _mod(long long x, long long m):
    cdef long long r = x % m
    return r + m if r < 0 else r


def run(prob, long long node_budget, double time_budget):
    (nrows, ncols, cell_row_l, cell_col_l, row_len_l, col_len_l, row_target_l, col_target_l, modulus_o,
     opt_value_l, opt_group_l, group_count_l, branch_order_l, bound_order_l, lookup_base_o, lookup_l,
     balance_o, sym_group_o, sym_cell_l, sym_last_o, cell_sign_l, cell_fix_l,
     cell_class_l, group_class_l, row_bound_class_l, col_bound_class_l) = prob

    cdef Py_ssize_t N = len(cell_row_l)
    if N == 0:
        return 0, [], 0, 0

    cdef long long[:] cell_row = array("q", cell_row_l)
    cdef long long[:] cell_col = array("q", cell_col_l)
    cdef long long[:] row_target = array("q", row_target_l)
    cdef long long[:] col_target = array("q", col_target_l)
    cdef long long[:] opt_value = array("q", opt_value_l)
    cdef long long[:] opt_group = array("q", opt_group_l)
    cdef long long[:] branch_order = array("q", branch_order_l)
    cdef long long[:] bound_order = array("q", bound_order_l)
    cdef long long[:] lookup = array("q", lookup_l)
    cdef long long[:] sym_cell = array("q", sym_cell_l)
    cdef long long[:] cell_sign = array("q", cell_sign_l)
    cdef long long[:] cell_fix = array("q", cell_fix_l)
    cdef long long[:] cell_class = array("q", cell_class_l)
    cdef long long[:] group_class = array("q", group_class_l if len(group_class_l) else [-1])
    cdef long long[:] row_bound_class = array("q", row_bound_class_l)
    cdef long long[:] col_bound_class = array("q", col_bound_class_l)
    cdef long long[:] row_sum = array("q", [0] * nrows)
    cdef long long[:] col_sum = array("q", [0] * ncols)
    cdef long long[:] row_left = array("q", row_len_l)
    cdef long long[:] col_left = array("q", col_len_l)
    cdef long long[:] row_pos = array("q", [0] * nrows)
    cdef long long[:] row_neg = array("q", [0] * nrows)
    cdef long long[:] col_pos = array("q", [0] * ncols)
    cdef long long[:] col_neg = array("q", [0] * ncols)
    cdef long long[:] row_half = array("q", [x // 2 for x in row_len_l])
    cdef long long[:] col_half = array("q", [x // 2 for x in col_len_l])
    cdef long long[:] remaining = array("q", group_count_l)
    cdef long long[:] choice = array("q", [-1] * N)
    cdef long long[:] cursor = array("q", [0] * N)
    cdef long long[:] forced = array("q", [-1] * N)

    cdef long long modulus = modulus_o
    cdef long long lookup_base = lookup_base_o
    cdef int balance = balance_o
    cdef long long sym_group = sym_group_o
    cdef long long sym_last = sym_last_o
    cdef Py_ssize_t nopts = len(opt_value_l)
    cdef Py_ssize_t nlook = len(lookup_l)

    cdef double deadline = perf_counter() + time_budget if time_budget > 0 else 0.0
    cdef long long nodes = 0
    cdef long long max_depth = 0
    cdef Py_ssize_t p = 0
    cdef bint fresh = True
    cdef Py_ssize_t r, c, cur, i, line
    cdef long long f, fv, v2, idx, o, cand, g, x, left, need, hi, lo, k, avail, take, fx, bc
    cdef bint have, bad

    while True:
        r = cell_row[p]
        c = cell_col[p]
        if fresh:
            fresh = False
            cursor[p] = 0
            f = -1
            fv = 0
            have = False
            if row_left[r] == 1:
                fv = row_target[r] - row_sum[r]
                have = True
            if col_left[c] == 1:
                v2 = col_target[c] - col_sum[c]
                if have:
                    if modulus:
                        if _mod(fv - v2, modulus):
                            f = -2
                    elif fv != v2:
                        f = -2
                else:
                    fv = v2
                    have = True
            if have and f != -2:
                if modulus:
                    fv = _mod(fv, modulus)
                idx = fv - lookup_base
                if 0 <= idx < nlook and lookup[idx] >= 0:
                    f = lookup[idx]
                else:
                    f = -2
            fx = cell_fix[p]
            if fx >= 0 and f != -2:
                if f == -1:
                    f = fx
                elif f != fx:
                    f = -2
            forced[p] = f
        else:
            o = choice[p]
            if o >= 0:
                x = opt_value[o]
                remaining[opt_group[o]] += 1
                row_sum[r] -= x
                col_sum[c] -= x
                row_left[r] += 1
                col_left[c] += 1
                if balance:
                    if x > 0:
                        row_pos[r] -= 1
                        col_pos[c] -= 1
                    else:
                        row_neg[r] -= 1
                        col_neg[c] -= 1
                choice[p] = -1

        o = -1
        f = forced[p]
        if f >= 0:
            if cursor[p] == 0:
                cursor[p] = 1
                o = f
                g = opt_group[o]
                if remaining[g] == 0 or (sym_group >= 0 and g == sym_group and not sym_cell[p]):
                    o = -1
                elif cell_class[p] >= 0 and group_class[g] != cell_class[p]:
                    o = -1
                elif cell_sign[p] and (opt_value[o] > 0) != (cell_sign[p] > 0):
                    o = -1
                elif balance:
                    x = opt_value[o]
                    if x > 0:
                        if row_pos[r] >= row_half[r] or col_pos[c] >= col_half[c]:
                            o = -1
                    elif row_neg[r] >= row_half[r] or col_neg[c] >= col_half[c]:
                        o = -1
        elif f == -1:
            cur = cursor[p]
            while cur < nopts:
                cand = branch_order[cur]
                cur += 1
                g = opt_group[cand]
                if remaining[g] == 0:
                    continue
                if sym_group >= 0 and g == sym_group and not sym_cell[p]:
                    continue
                if cell_class[p] >= 0 and group_class[g] != cell_class[p]:
                    continue
                if cell_sign[p] and (opt_value[cand] > 0) != (cell_sign[p] > 0):
                    continue
                if balance:
                    x = opt_value[cand]
                    if x > 0:
                        if row_pos[r] >= row_half[r] or col_pos[c] >= col_half[c]:
                            continue
                    elif row_neg[r] >= row_half[r] or col_neg[c] >= col_half[c]:
                        continue
                o = cand
                break
            cursor[p] = cur

        if o < 0:
            if p == 0:
                return 1, None, nodes, max_depth
            p -= 1
            continue

        x = opt_value[o]
        remaining[opt_group[o]] -= 1
        row_sum[r] += x
        col_sum[c] += x
        row_left[r] -= 1
        col_left[c] -= 1
        if balance:
            if x > 0:
                row_pos[r] += 1
                col_pos[c] += 1
            else:
                row_neg[r] += 1
                col_neg[c] += 1
        choice[p] = o
        nodes += 1
        if nodes >= node_budget:
            return 2, None, nodes, max_depth
        if deadline and (nodes & 1023) == 0 and perf_counter() > deadline:
            return 2, None, nodes, max_depth

        bad = False
        if sym_group >= 0 and p == sym_last and remaining[sym_group] > 0:
            bad = True
        for line in range(2):
            if bad:
                break
            if line == 0:
                left = row_left[r]
                need = row_target[r] - row_sum[r]
                bc = row_bound_class[p]
            else:
                left = col_left[c]
                need = col_target[c] - col_sum[c]
                bc = col_bound_class[p]
            if left == 0:
                if modulus:
                    if _mod(need, modulus):
                        bad = True
                elif need:
                    bad = True
            elif not modulus:
                hi = 0
                k = left
                i = nopts - 1
                while k > 0 and i >= 0:
                    cand = bound_order[i]
                    avail = remaining[opt_group[cand]]
                    if avail and (bc < 0 or group_class[opt_group[cand]] == bc):
                        take = avail if avail < k else k
                        hi += take * opt_value[cand]
                        k -= take
                    i -= 1
                if k > 0 or need > hi:
                    bad = True
                    break
                lo = 0
                k = left
                i = 0
                while k > 0 and i < nopts:
                    cand = bound_order[i]
                    avail = remaining[opt_group[cand]]
                    if avail and (bc < 0 or group_class[opt_group[cand]] == bc):
                        take = avail if avail < k else k
                        lo += take * opt_value[cand]
                        k -= take
                    i += 1
                if need < lo:
                    bad = True
        if bad:
            continue

        p += 1
        if p > max_depth:
            max_depth = p
        if p == N:
            return 0, [opt_value[choice[i]] for i in range(N)], nodes, max_depth
        fresh = True
