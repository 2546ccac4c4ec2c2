"""Numba twins of the kernels in ``_numpy``. Same signatures, same results
up to floating-point summation order."""

import numpy as np
from numba import njit


@njit(cache=True)
def pairwise_stats(X):
    n, m = X.shape
    k = m * (m + 1) // 2
    out = np.empty((n, k))
    for i in range(n):
        idx = 0
        for u in range(m):
            xu = X[i, u]
            out[i, idx] = -0.5 * xu * xu
            idx += 1
            for v in range(u + 1, m):
                out[i, idx] = -xu * X[i, v]
                idx += 1
    return out


@njit(cache=True)
def log_mean_exp(scores):
    n = scores.shape[0]
    top = scores[0]
    for j in range(1, n):
        if scores[j] > top:
            top = scores[j]
    total = 0.0
    for j in range(n):
        total += np.exp(scores[j] - top)
    return top + np.log(total) - np.log(n)


@njit(cache=True)
def softmax(scores):
    n = scores.shape[0]
    top = scores.max()
    out = np.empty(n)
    total = 0.0
    for j in range(n):
        out[j] = np.exp(scores[j] - top)
        total += out[j]
    for j in range(n):
        out[j] /= total
    return out


@njit(cache=True)
def loss_and_grad(U, d):
    # both products go through BLAS; the loops only cover the n-vector work
    n = U.shape[0]
    scores = np.dot(U, d)
    top = scores.max()
    total = 0.0
    for j in range(n):
        scores[j] = np.exp(scores[j] - top)
        total += scores[j]
    for j in range(n):
        scores[j] /= total
    return top + np.log(total) - np.log(n), np.dot(scores, U)


@njit(cache=True)
def sphere_grid_minmax(D, U):
    G, k = D.shape
    n = U.shape[0]
    best = np.inf
    for g in range(G):
        worst = -np.inf
        for j in range(n):
            acc = 0.0
            for v in range(k):
                acc += D[g, v] * U[j, v]
            if acc > worst:
                worst = acc
        if worst < best:
            best = worst
    return best


@njit(cache=True)
def _dot(a, b):
    acc = 0.0
    for i in range(a.shape[0]):
        acc += a[i] * b[i]
    return acc


@njit(cache=True)
def away_frank_wolfe(U, max_iter, tol):
    n, k = U.shape
    alpha = np.zeros(n)
    j0 = 0
    best = np.inf
    for j in range(n):
        nrm = _dot(U[j], U[j])
        if nrm < best:
            best = nrm
            j0 = j
    alpha[j0] = 1.0
    x = U[j0].copy()
    g = np.empty(n)
    direction = np.empty(k)
    gap = np.inf
    for it in range(max_iter):
        if it > 0 and it % 64 == 0:
            x[:] = 0.0
            for j in range(n):
                if alpha[j] > 0.0:
                    for v in range(k):
                        x[v] += alpha[j] * U[j, v]
        for j in range(n):
            g[j] = _dot(U[j], x)
        xx = _dot(x, x)
        s = 0
        for j in range(1, n):
            if g[j] < g[s]:
                s = j
        nx = np.sqrt(xx)
        if nx == 0.0:
            return alpha, x, 0.0, it, True
        gap = nx - max(0.0, g[s] / nx)
        if gap <= tol:
            return alpha, x, gap, it, True
        a = -1
        for j in range(n):
            if alpha[j] > 0.0 and (a < 0 or g[j] > g[a]):
                a = j
        toward = xx - g[s] >= g[a] - xx
        if toward:
            for v in range(k):
                direction[v] = U[s, v] - x[v]
            gmax = 1.0
        else:
            for v in range(k):
                direction[v] = x[v] - U[a, v]
            gmax = alpha[a] / (1.0 - alpha[a])
        dd = _dot(direction, direction)
        if dd == 0.0:
            return alpha, x, gap, it, False
        gamma = min(max(-_dot(x, direction) / dd, 0.0), gmax)
        for v in range(k):
            x[v] += gamma * direction[v]
        if toward:
            for j in range(n):
                alpha[j] *= 1.0 - gamma
            alpha[s] += gamma
        else:
            for j in range(n):
                alpha[j] *= 1.0 + gamma
            alpha[a] -= gamma
            if gamma == gmax:
                alpha[a] = 0.0
    return alpha, x, gap, max_iter, False


@njit(cache=True)
def _affine_min_norm(P):
    r = P.shape[0]
    mu = np.ones(r)
    if r == 1:
        return mu
    k = P.shape[1]
    B = np.empty((k, r - 1))
    for i in range(r - 1):
        for v in range(k):
            B[v, i] = P[i + 1, v] - P[0, v]
    c = np.linalg.lstsq(B, -P[0], rcond=-1.0)[0]
    total = 0.0
    for i in range(r - 1):
        mu[i + 1] = c[i]
        total += c[i]
    mu[0] = 1.0 - total
    return mu


@njit(cache=True)
def min_norm_point(U, max_iter, tol):
    n, k = U.shape
    j0 = 0
    best = np.inf
    for j in range(n):
        nrm = _dot(U[j], U[j])
        if nrm < best:
            best = nrm
            j0 = j
    corral = np.empty(n, dtype=np.int64)
    lam = np.zeros(n)
    corral[0] = j0
    lam[0] = 1.0
    size = 1
    x = U[j0].copy()
    g = np.empty(n)
    gap = np.inf
    it = 0
    for it in range(max_iter + 1):
        if it == max_iter:
            break
        for j in range(n):
            g[j] = _dot(U[j], x)
        s = 0
        for j in range(1, n):
            if g[j] < g[s]:
                s = j
        nx = np.sqrt(_dot(x, x))
        if nx == 0.0:
            gap = 0.0
            break
        gap = nx - max(0.0, g[s] / nx)
        if gap <= tol:
            break
        present = False
        for i in range(size):
            if corral[i] == s:
                present = True
        if present:
            break
        corral[size] = s
        lam[size] = 0.0
        size += 1
        while True:
            P = np.empty((size, k))
            for i in range(size):
                P[i] = U[corral[i]]
            mu = _affine_min_norm(P)
            ok = True
            for i in range(size):
                if mu[i] <= 1e-14:
                    ok = False
            if ok:
                for i in range(size):
                    lam[i] = mu[i]
                break
            theta = np.inf
            drop = -1
            for i in range(size):
                if mu[i] <= 1e-14:
                    ratio = lam[i] / (lam[i] - mu[i])
                    if ratio < theta:
                        theta = ratio
                        drop = i
            new_size = 0
            total = 0.0
            for i in range(size):
                li = lam[i] + theta * (mu[i] - lam[i])
                if i != drop and li > 1e-14:
                    corral[new_size] = corral[i]
                    lam[new_size] = li
                    total += li
                    new_size += 1
            size = new_size
            for i in range(size):
                lam[i] /= total
        x[:] = 0.0
        for i in range(size):
            for v in range(k):
                x[v] += lam[i] * U[corral[i], v]
    alpha = np.zeros(n)
    for i in range(size):
        alpha[corral[i]] = lam[i]
    return alpha, x, gap, it, gap <= tol
