"""Independent reference values for the frozen tests in crates/core/tests/oracles.rs.

Every group is rebuilt here from its own matrix realization; nothing is read from the
Rust code. beta(h)_j = lambda(h^-1 X_j h), the left Haar density is |det| of the
coefficients of h^-1 dh/dt_k, and W = rho / |det Jac Theta|.

    python3 tools/oracle.py
"""

import mpmath as mp
from scipy import integrate
import numpy as np

mp.mp.dps = 40


def E(n, i, j):
    m = mp.zeros(n, n)
    m[i, j] = 1
    return m


def group_element(A, t):
    h = mp.eye(A[0].rows)
    for a, x in zip(A, t):
        h = h * mp.expm(a * x)
    return h


def coeffs(basis, m):
    """Least-squares coefficients of m in a list of matrices."""
    rows = [[b[i, j] for b in basis] for i in range(m.rows) for j in range(m.cols)]
    M = mp.matrix(rows)
    v = mp.matrix([m[i, j] for i in range(m.rows) for j in range(m.cols)])
    return mp.lu_solve(M.T * M, M.T * v)


class Group:
    def __init__(self, X, A, lam, J, density=None):
        self.X, self.A, self.lam, self.J = X, A, lam, J
        self.density = density

    def beta(self, t):
        h = group_element(self.A, t)
        hi = h ** -1
        out = []
        for x in self.X:
            c = coeffs(self.X, hi * x * h)
            out.append(sum(l * ci for l, ci in zip(self.lam, c)))
        return out

    def theta(self, t):
        b = self.beta(t)
        return [b[j] for j in self.J]

    def D(self):
        r = len(self.A)
        cols = []
        for k in range(r):
            def bk(s, k=k):
                t = [mp.mpf(0)] * r
                t[k] = s
                return self.beta(t)
            cols.append([mp.diff(lambda s, j=j: bk(s)[j], 0) for j in range(len(self.X))])
        return [[cols[k][j] for k in range(r)] for j in range(len(self.X))]

    def haar_mc(self, t):
        r = len(self.A)
        h = group_element(self.A, t)
        hi = h ** -1
        cols = []
        for k in range(r):
            dh = mp.matrix(h.rows, h.cols)
            for i in range(h.rows):
                for j in range(h.cols):
                    dh[i, j] = mp.diff(lambda s: group_element(self.A, t[:k] + [s] + t[k + 1:])[i, j], t[k])
            cols.append(coeffs(self.A, hi * dh))
        M = mp.matrix([[cols[k][i] for k in range(r)] for i in range(r)])
        return abs(mp.det(M))

    def rho(self, t):
        return self.density(t) if self.density else self.haar_mc(t)

    def jac_theta(self, t):
        r = len(self.A)
        M = mp.matrix(r, r)
        for k in range(r):
            for i in range(r):
                M[i, k] = mp.diff(lambda s: self.theta(t[:k] + [s] + t[k + 1:])[i], t[k])
        return M

    def weight(self, t):
        return self.rho(t) / abs(mp.det(self.jac_theta(t)))


def affine(n, acts):
    """Translations E_{i,n} and linear parts `acts` inside (n+1)x(n+1) matrices."""
    X = [E(n + 1, i, n) for i in range(n)]
    A = []
    for a in acts:
        m = mp.zeros(n + 1, n + 1)
        for i in range(n):
            for j in range(n):
                m[i, j] = a[i][j]
        A.append(m)
    return X, A


def groups():
    g = {}
    X, A = affine(1, [[[1]]])
    g["axb"] = Group(X, A, [1], [0])
    # [A, Y] = X in the 3x3 Heisenberg algebra
    g["heisenberg"] = Group([E(3, 0, 2), E(3, 1, 2)], [E(3, 0, 1)], [1, 0], [1])
    X, A = affine(3, [[[0, -1, 0], [1, 0, 0], [0, 0, 1]]])
    g["solv_oscillator"] = Group(X, A, [0, 1, 0], [0])
    X, A = affine(2, [[[0, 1], [0, 0]], [[1, 0], [0, 1]]])
    g["toeplitz_shearlet"] = Group(X, A, [1, 0], [0, 1])
    X, A = affine(4, [[[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]])
    g["free_nilpotent_step2"] = Group(X, A, [0, 0, 0, 2], [0])
    X = [E(4, k, 3) for k in range(3)]
    A = [-(E(4, 0, 1) + E(4, 1, 2)), -E(4, 0, 2)]
    g["onb_step3"] = Group(X, A, [1, 0, 0], [1, 2])
    # gl(2) as [[0, E_ij], [0, 0]] blocks, sl(2) = (rotation, diagonal, shear) in the top block
    X = [E(4, i, 2 + j) for i in range(2) for j in range(2)]
    blocks = [[[0, -1], [1, 0]], [[1, 0], [0, -1]], [[0, 1], [0, 0]]]
    A = []
    for b in blocks:
        m = mp.zeros(4, 4)
        for i in range(2):
            for j in range(2):
                m[i, j] = b[i][j]
        A.append(m)
    g["sl2_embed"] = Group(X, A, [1, 0, 0, 1], [1, 2, 3], density=lambda t: mp.e ** (-2 * t[1]))
    return g


POINTS = {
    "axb": [[0.3], [-0.7]],
    "heisenberg": [[0.2]],
    "solv_oscillator": [[0.5], [-0.25]],
    "toeplitz_shearlet": [[0.4, -0.3], [-0.6, 0.5]],
    "free_nilpotent_step2": [[0.6]],
    "onb_step3": [[0.3, -0.2], [-0.45, 0.1]],
    "sl2_embed": [[0.1, -0.2, 0.15], [-0.3, 0.25, -0.1]],
}


def fmt(x):
    return repr(float(x))


def bspline3(x):
    x = abs(x)
    if x < 1:
        return 2 / 3 - x * x + x ** 3 / 2
    if x < 2:
        return (2 - x) ** 3 / 6
    return 0.0


def axb_coefficient(ell, kappa, delta, gc, gw, fc, fw):
    """int g(h - ell) f(h) exp(-2 pi i kappa delta e^-h) dh, after xi = e^-h."""
    def part(xi, comp):
        h = -np.log(xi)
        v = bspline3((h - ell - gc) / gw) * bspline3((h - fc) / fw) / xi
        ph = -2 * np.pi * kappa * delta * xi
        return v * (np.cos(ph) if comp == 0 else np.sin(ph))
    lo = np.exp(-(fc + 2 * fw))
    hi = np.exp(-(fc - 2 * fw))
    pts = sorted(np.exp(-(fc + k * fw)) for k in (-1, 0, 1))
    re = integrate.quad(part, lo, hi, args=(0,), points=pts, epsabs=0, epsrel=1e-13, limit=400)[0]
    im = integrate.quad(part, lo, hi, args=(1,), points=pts, epsabs=0, epsrel=1e-13, limit=400)[0]
    return re, im


def main():
    g = groups()
    for name, grp in g.items():
        print(f"== {name}")
        print("D =", [[fmt(x) for x in row] for row in grp.D()])
        for t in POINTS[name]:
            t = [mp.mpf(x) for x in t]
            print("t =", [fmt(x) for x in t])
            print("  theta  =", [fmt(x) for x in grp.theta(t)])
            print("  rho_mc =", fmt(grp.haar_mc(t)))
            print("  W      =", fmt(grp.weight(t)))
    print("== axb coefficients (ell, kappa, re, im); delta = 1/3, g bump (0.1, 0.2), f bump (0.05, 0.25)")
    for ell, kappa in [(0.0, 0), (0.0, 1), (0.15, -2), (-0.2, 3)]:
        re, im = axb_coefficient(ell, kappa, 1 / 3, 0.1, 0.2, 0.05, 0.25)
        print(ell, kappa, repr(re), repr(im))


if __name__ == "__main__":
    main()
