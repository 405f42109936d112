"""Pure-Python depth-first search kernel.

Mirrors ``_csearch.pyx`` step for step so both backends visit the same nodes.
Returns ``(status, values, nodes, max_depth)`` with status 0 found,
1 exhausted, 2 budget exceeded.
"""

import time


def run(prob, node_budget, time_budget):
    (nrows, ncols, cell_row, cell_col, row_len, col_len, row_target, col_target, modulus,
     opt_value, opt_group, group_count, branch_order, bound_order, lookup_base, lookup,
     balance, sym_group, sym_cell, sym_last, cell_sign, cell_fix,
     cell_class, group_class, row_bound_class, col_bound_class) = prob

    N = len(cell_row)
    nopts = len(opt_value)
    nlook = len(lookup)
    row_sum = [0] * nrows
    col_sum = [0] * ncols
    row_left = list(row_len)
    col_left = list(col_len)
    row_pos = [0] * nrows
    row_neg = [0] * nrows
    col_pos = [0] * ncols
    col_neg = [0] * ncols
    row_half = [x // 2 for x in row_len]
    col_half = [x // 2 for x in col_len]
    remaining = list(group_count)
    choice = [-1] * N
    cursor = [0] * N
    forced = [-1] * N

    deadline = time.perf_counter() + time_budget if time_budget > 0 else 0.0
    nodes = 0
    max_depth = 0
    p = 0
    fresh = True
    if N == 0:
        return 0, [], 0, 0

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
                        if (fv - v2) % modulus:
                            f = -2
                    elif fv != v2:
                        f = -2
                else:
                    fv = v2
                    have = True
            if have and f != -2:
                if modulus:
                    fv %= modulus
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

        # next admissible option
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

        # assign
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
        if deadline and (nodes & 1023) == 0 and time.perf_counter() > deadline:
            return 2, None, nodes, max_depth

        # prune
        bad = False
        if sym_group >= 0 and p == sym_last and remaining[sym_group] > 0:
            bad = True
        for line in (0, 1):
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
                if (need % modulus if modulus else need):
                    bad = True
            elif not modulus:
                # largest and smallest sums reachable with `left` more entries
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
            return 0, [opt_value[choice[q]] for q in range(N)], nodes, max_depth
        fresh = True
