"""Active-set nonnegative least squares (Lawson-Hanson)."""

import numpy as np


def nnls(A, b, max_iter=None, tol=None):
    """Minimise ``||A x - b||`` subject to ``x >= 0``.

    Returns ``(x, residual_norm)``. Columns enter the passive set one at a
    time by largest positive gradient; infeasible least-squares steps are
    cut back to the boundary, which keeps the passive columns linearly
    independent.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 3 * n + 30
    if tol is None:
        tol = 10 * np.finfo(float).eps * max(m, n) * max(1.0, np.abs(A).max()) * max(1.0, np.abs(b).max())
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    grad = A.T @ (b - A @ x)
    outer = 0
    while outer < max_iter:
        free = ~passive & (grad > tol)
        if not free.any():
            break
        j = int(np.argmax(np.where(free, grad, -np.inf)))
        passive[j] = True
        for _ in range(n + 1):
            s = np.zeros(n)
            s[passive] = np.linalg.lstsq(A[:, passive], b, rcond=None)[0]
            if np.all(s[passive] > 0):
                x = s
                break
            neg = passive & (s <= 0)
            alpha = np.min(x[neg] / (x[neg] - s[neg]))
            x = x + alpha * (s - x)
            passive &= x > tol
            x[~passive] = 0.0
            if not passive.any():
                break
        grad = A.T @ (b - A @ x)
        outer += 1
    return x, float(np.linalg.norm(A @ x - b))
