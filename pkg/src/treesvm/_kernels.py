"""Hot loops: kernel rows and the SMO dual solver.

Two paths exist for the solver. ``_smo_loops`` is written as explicit scalar
loops and is compiled with numba; ``_smo_numpy`` is the same algorithm with
the per-iteration scans vectorized, for runs with numba disabled. Both use the
same pair update, row cache policy, and tie-breaking, so they select the same
working sets.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

LINEAR = 0
RBF = 1

# curvature floor for pairs with K_ii + K_jj - 2 K_ij <= 0
TAU = 1e-12


def _kernel_row_py(X, sqn, i, kind, gamma, out):
    dots = X @ X[i]
    if kind == LINEAR:
        out[:] = dots
    else:
        out[:] = np.exp(-gamma * np.maximum(sqn + sqn[i] - 2.0 * dots, 0.0))
        out[i] = 1.0


def _pair_update_py(ai, aj, yi, yj, Gi, Gj, eta, C):
    # two-variable subproblem, clipped to the box and the equality line
    if yi != yj:
        delta = (-Gi - Gj) / eta
        diff = ai - aj
        ai += delta
        aj += delta
        if diff > 0.0:
            if aj < 0.0:
                aj = 0.0
                ai = diff
        else:
            if ai < 0.0:
                ai = 0.0
                aj = -diff
        if diff > 0.0:
            if ai > C:
                ai = C
                aj = C - diff
        else:
            if aj > C:
                aj = C
                ai = C + diff
    else:
        delta = (Gi - Gj) / eta
        total = ai + aj
        ai -= delta
        aj += delta
        if total > C:
            if ai > C:
                ai = C
                aj = total - C
        else:
            if aj < 0.0:
                aj = 0.0
                ai = total
        if total > C:
            if aj > C:
                aj = C
                ai = total - C
        else:
            if ai < 0.0:
                ai = 0.0
                aj = total
    return ai, aj


def _fetch_row_py(idx, X, sqn, kind, gamma, cache, slot_row, row_slot, stamp, state):
    """Return the cache slot holding kernel row ``idx``, computing it on a miss.

    ``state`` is ``[clock, slots_in_use]``. Eviction is least-recently-used.
    """
    state[0] += 1
    s = row_slot[idx]
    if s >= 0:
        stamp[s] = state[0]
        return s
    if state[1] < cache.shape[0]:
        s = state[1]
        state[1] += 1
    else:
        s = 0
        for t in range(1, cache.shape[0]):
            if stamp[t] < stamp[s]:
                s = t
        row_slot[slot_row[s]] = -1
    _kernel_row(X, sqn, idx, kind, gamma, cache[s])
    slot_row[s] = idx
    row_slot[idx] = s
    stamp[s] = state[0]
    return s


_kernel_row = njit(_kernel_row_py)
_pair_update = njit(_pair_update_py)
_fetch_row = njit(_fetch_row_py)


def _smo_loops(X, sqn, y, kind, gamma, C, tol, max_iter, n_slots):
    n = X.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    cache = np.empty((n_slots, n))
    slot_row = np.full(n_slots, -1, dtype=np.int64)
    row_slot = np.full(n, -1, dtype=np.int64)
    stamp = np.zeros(n_slots, dtype=np.int64)
    state = np.zeros(2, dtype=np.int64)
    if kind == LINEAR:
        diag = sqn.copy()
    else:
        diag = np.ones(n)

    it = 0
    converged = False
    while it < max_iter:
        gmax = -np.inf
        gmin = np.inf
        i = -1
        j = -1
        for t in range(n):
            v = -y[t] * G[t]
            if (y[t] > 0.0 and alpha[t] < C) or (y[t] < 0.0 and alpha[t] > 0.0):
                if v > gmax:
                    gmax = v
                    i = t
            if (y[t] > 0.0 and alpha[t] > 0.0) or (y[t] < 0.0 and alpha[t] < C):
                if v < gmin:
                    gmin = v
                    j = t
        if i < 0 or j < 0 or gmax - gmin < tol:
            converged = True
            break

        si = _fetch_row(i, X, sqn, kind, gamma, cache, slot_row, row_slot, stamp, state)
        sj = _fetch_row(j, X, sqn, kind, gamma, cache, slot_row, row_slot, stamp, state)
        eta = diag[i] + diag[j] - 2.0 * cache[si, j]
        if eta <= TAU:
            eta = TAU
        ai, aj = _pair_update(alpha[i], alpha[j], y[i], y[j], G[i], G[j], eta, C)
        dai = (ai - alpha[i]) * y[i]
        daj = (aj - alpha[j]) * y[j]
        alpha[i] = ai
        alpha[j] = aj
        for t in range(n):
            G[t] += y[t] * (cache[si, t] * dai + cache[sj, t] * daj)
        it += 1
    return alpha, G, it, converged


def _smo_numpy(X, sqn, y, kind, gamma, C, tol, max_iter, n_slots):
    n = X.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    cache = np.empty((n_slots, n))
    slot_row = np.full(n_slots, -1, dtype=np.int64)
    row_slot = np.full(n, -1, dtype=np.int64)
    stamp = np.zeros(n_slots, dtype=np.int64)
    state = np.zeros(2, dtype=np.int64)
    diag = sqn.copy() if kind == LINEAR else np.ones(n)
    pos = y > 0.0
    neg = ~pos

    it = 0
    converged = False
    while it < max_iter:
        v = -y * G
        up = (pos & (alpha < C)) | (neg & (alpha > 0.0))
        low = (pos & (alpha > 0.0)) | (neg & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        vu = np.where(up, v, -np.inf)
        vl = np.where(low, v, np.inf)
        i = int(np.argmax(vu))
        j = int(np.argmin(vl))
        if vu[i] - vl[j] < tol:
            converged = True
            break

        si = _fetch_row_py(i, X, sqn, kind, gamma, cache, slot_row, row_slot, stamp, state)
        sj = _fetch_row_py(j, X, sqn, kind, gamma, cache, slot_row, row_slot, stamp, state)
        eta = max(diag[i] + diag[j] - 2.0 * cache[si, j], TAU)
        ai, aj = _pair_update_py(alpha[i], alpha[j], y[i], y[j], G[i], G[j], eta, C)
        dai = (ai - alpha[i]) * y[i]
        daj = (aj - alpha[j]) * y[j]
        alpha[i] = ai
        alpha[j] = aj
        G += y * (cache[si] * dai + cache[sj] * daj)
        it += 1
    return alpha, G, it, converged


smo_numba = njit(_smo_loops) if USE_NUMBA else None
smo_solve = smo_numba if USE_NUMBA else _smo_numpy


def kernel_row(X, sqn, i, kind, gamma):
    out = np.empty(X.shape[0])
    _kernel_row(X, sqn, i, kind, gamma, out)
    return out
