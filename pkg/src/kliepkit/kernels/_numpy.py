"""Pure-numpy reference kernels.

Every function here has a twin with the same signature in ``_numba``; the
two are cross-checked in the test suite and timed in ``benchmarks/``.
"""

import numpy as np


def pairwise_stats(X):
    """Gaussian pairwise statistics, lexicographic (u, v) with u <= v.

    Diagonal entries are ``-x_u**2 / 2``, off-diagonal ``-x_u * x_v``.
    """
    X = np.asarray(X, dtype=np.float64)
    m = X.shape[1]
    iu, iv = np.triu_indices(m)
    coef = np.where(iu == iv, -0.5, -1.0)
    return X[:, iu] * X[:, iv] * coef


def log_mean_exp(scores):
    top = scores.max()
    return top + np.log(np.exp(scores - top).sum()) - np.log(scores.shape[0])


def softmax(scores):
    e = np.exp(scores - scores.max())
    return e / e.sum()


def loss_and_grad(U, d):
    """Centered KLIEP loss ``log mean_j exp(d.u_j)`` and its gradient.

    The gradient is ``sum_j w_j u_j`` with softmax weights ``w``, which
    equals ``-tbar_x + sum_j w_j t_j`` because the weights sum to one.
    """
    scores = U @ d
    top = scores.max()
    e = np.exp(scores - top)
    total = e.sum()
    loss = top + np.log(total) - np.log(scores.shape[0])
    return loss, (e / total) @ U


def sphere_grid_minmax(D, U):
    """``min_g max_j D[g] . U[j]`` over the rows of a direction grid."""
    best = np.inf
    for start in range(0, D.shape[0], 4096):
        block = D[start:start + 4096] @ U.T
        best = min(best, block.max(axis=1).min())
    return best


def away_frank_wolfe(U, max_iter, tol):
    """Min-norm point of conv{u_j} by away-step Frank-Wolfe.

    Minimizes ``||U^T a||`` over the probability simplex with exact line
    search. Stops once the distance gap ``||x|| - max(0, min_j u_j.x/||x||)``
    drops to ``tol``; the second term is the lower bound certified by the
    direction ``-x/||x||``.

    Returns ``(alpha, x, gap, iterations, converged)``.
    """
    n = U.shape[0]
    alpha = np.zeros(n)
    j0 = int(np.argmin(np.einsum("ij,ij->i", U, U)))
    alpha[j0] = 1.0
    x = U[j0].copy()
    gap = np.inf
    for it in range(max_iter):
        if it and it % 64 == 0:
            x = alpha @ U
        g = U @ x
        xx = x @ x
        s = int(np.argmin(g))
        nx = np.sqrt(xx)
        if nx == 0.0:
            return alpha, x, 0.0, it, True
        gap = nx - max(0.0, g[s] / nx)
        if gap <= tol:
            return alpha, x, gap, it, True
        active = np.flatnonzero(alpha > 0.0)
        a = int(active[np.argmax(g[active])])
        if xx - g[s] >= g[a] - xx:
            direction = U[s] - x
            gmax = 1.0
            toward = True
        else:
            direction = x - U[a]
            gmax = alpha[a] / (1.0 - alpha[a])
            toward = False
        dd = direction @ direction
        if dd == 0.0:
            return alpha, x, gap, it, False
        gamma = min(max(-(x @ direction) / dd, 0.0), gmax)
        x = x + gamma * direction
        if toward:
            alpha *= 1.0 - gamma
            alpha[s] += gamma
        else:
            alpha *= 1.0 + gamma
            alpha[a] -= gamma
            if gamma == gmax:
                alpha[a] = 0.0
    return alpha, x, gap, max_iter, False


def _affine_min_norm(P):
    """Affine weights (summing to 1) of the min-norm point of aff(rows of P)."""
    if P.shape[0] == 1:
        return np.ones(1)
    B = (P[1:] - P[0]).T
    c = np.linalg.lstsq(B, -P[0], rcond=None)[0]
    mu = np.empty(P.shape[0])
    mu[0] = 1.0 - c.sum()
    mu[1:] = c
    return mu


def min_norm_point(U, max_iter, tol):
    """Wolfe's min-norm-point algorithm over conv{u_j}.

    Same contract and stopping rule as ``away_frank_wolfe``. Each major
    cycle adds the most violating point to the corral; minor cycles move to
    the affine minimizer of the corral, dropping points whose weight would
    turn negative.
    """
    n = U.shape[0]
    j0 = int(np.argmin(np.einsum("ij,ij->i", U, U)))
    corral = [j0]
    lam = np.ones(1)
    x = U[j0].copy()
    gap = np.inf
    it = 0
    for it in range(max_iter):
        g = U @ x
        s = int(np.argmin(g))
        nx = np.sqrt(x @ x)
        if nx == 0.0:
            gap = 0.0
            break
        gap = nx - max(0.0, g[s] / nx)
        if gap <= tol or s in corral:
            break
        corral.append(s)
        lam = np.append(lam, 0.0)
        while True:
            mu = _affine_min_norm(U[corral])
            if np.all(mu > 1e-14):
                lam = mu
                break
            neg = mu <= 1e-14
            theta = np.min(lam[neg] / (lam[neg] - mu[neg]))
            lam = lam + theta * (mu - lam)
            keep = lam > 1e-14
            keep[np.argmin(np.where(neg, lam, np.inf))] = False
            corral = [c for c, kp in zip(corral, keep) if kp]
            lam = lam[keep]
            lam /= lam.sum()
        x = lam @ U[corral]
    else:
        it = max_iter
    alpha = np.zeros(n)
    alpha[corral] = lam
    return alpha, x, gap, it, bool(gap <= tol)
