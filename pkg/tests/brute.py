"""Loop-by-loop reference evaluation of the ladder and the bound formulas.

Written directly from the defining formulas over raw entries (no row
normalization, no vectorization) so it can serve as an independent check of
the package. Works on plain floats or on ``mpmath.mpf`` values.
"""

import math


def _sqrt(x):
    return x.sqrt() if hasattr(x, "sqrt") else math.sqrt(x)


def ladder(a, T):
    n = len(a)
    N = range(n)

    def A(j, k):
        return abs(a[j][k])

    def excl(j, i):
        return [k for k in N if k != j and k != i]

    r = [max([A(j, i) / (A(j, j) - sum(A(j, k) for k in excl(j, i))) for j in N if j != i] or [0])
         for i in N]
    m = [[(A(j, i) + sum(A(j, k) for k in excl(j, i)) * r[i]) / A(j, j) if j != i else 0
          for i in N] for j in N]

    def hmax(X):
        out = []
        for i in N:
            terms = [0]
            for j in N:
                if j == i or A(j, i) == 0:
                    continue
                terms.append(A(j, i) / (A(j, j) * X[j][i] - sum(A(j, k) * X[k][i] for k in excl(j, i))))
            out.append(max(terms))
        return out

    def next_u(X, hh):
        return [[(A(j, i) + sum(A(j, k) * X[k][i] for k in excl(j, i)) * hh[i]) / A(j, j) if j != i else 0
                 for i in N] for j in N]

    h = hmax(m)
    u = [next_u(m, h)]
    p, ht, phi = [None], [None], [None]
    for t in range(1, T + 1):
        pt = [[(A(j, i) + sum(A(j, k) * u[t - 1][k][i] for k in excl(j, i))) / A(j, j) if j != i else 0
               for i in N] for j in N]
        hh = hmax(pt)
        p.append(pt)
        ht.append(hh)
        u.append(next_u(pt, hh))
        phi.append([1 / (a[i][i] - sum(A(i, j) * pt[j][i] for j in N if j != i)) for i in N])
    return {"r": r, "m": m, "h": h, "u": u, "p": p, "ht": ht, "phi": phi}


def colsum(pt, i):
    return sum(pt[k][i] for k in range(len(pt)) if k != i)


def rowmax(X, i):
    return max(X[i][j] for j in range(len(X)) if j != i)


def gamma(alpha, pt):
    n = len(alpha)
    best = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = alpha[i] + alpha[j] + _sqrt((alpha[i] - alpha[j]) ** 2
                                            + 4 * alpha[i] * alpha[j] * colsum(pt, i) * colsum(pt, j))
            best = v if best is None or v > best else best
    return 2 / best


def omega(alpha, pt):
    return 1 / max((1 + colsum(pt, i)) * alpha[i] for i in range(len(alpha)))


def low_diag(a):
    n = len(a)
    return [1 / (a[i][i] - sum(a[i][k] * a[k][i] / a[k][k] for k in range(n) if k != i)) for i in range(n)]


def gamma_tilde(a, phi, pt):
    n = len(a)
    low = low_diag(a)
    best = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            spread = max(phi[i], phi[j]) - min(low[i], low[j])
            v = phi[i] + phi[j] + _sqrt(spread**2 + 4 * phi[i] * phi[j] * colsum(pt, i) * colsum(pt, j))
            best = v if best is None or v > best else best
    return 2 / best


def omega_tilde(phi, pt):
    return 1 / max((1 + colsum(pt, i)) * phi[i] for i in range(len(phi)))


def upsilon(alpha, pt):
    n = len(alpha)
    pm = [rowmax(pt, i) for i in range(n)]
    best = max(alpha[i] + alpha[j] + _sqrt((alpha[i] - alpha[j]) ** 2
                                            + 4 * (n - 1) ** 2 * pm[i] * pm[j] * alpha[i] * alpha[j])
               for i in range(n) for j in range(n) if i != j)
    return 2 / best


def upsilon_tilde(a, phi, pt):
    n = len(a)
    pm = [rowmax(pt, i) for i in range(n)]
    best = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            psi = max(phi[i], phi[j]) - min(1 / a[i][i], 1 / a[j][j])
            v = phi[i] + phi[j] + _sqrt(psi**2 + 4 * (n - 1) ** 2 * pm[i] * pm[j] * phi[i] * phi[j])
            best = v if best is None or v > best else best
    return 2 / best


def hadamard_tight_loose(alpha, b, pt):
    n = len(alpha)
    w = [sum(b[k][i] * pt[k][i] for k in range(n) if k != i) for i in range(n)]
    tight = max(0.5 * (b[i][i] * alpha[i] + b[j][j] * alpha[j]
                       + _sqrt((b[i][i] * alpha[i] - b[j][j] * alpha[j]) ** 2 + 4 * alpha[i] * alpha[j] * w[i] * w[j]))
                for i in range(n) for j in range(n) if i != j)
    loose = max((b[i][i] + w[i]) * alpha[i] for i in range(n))
    return tight, loose
