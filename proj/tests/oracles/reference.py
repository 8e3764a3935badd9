"""Independent dense reference computations used to freeze expected values.

Everything here is written directly from the continuous definitions with
numpy/scipy (dense matrices, scipy quadrature), sharing no code with the
C++ library. Run `python3 reference.py` to reprint the frozen values.
"""
import numpy as np
from scipy import integrate, linalg, optimize


def bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1
    out[m] = np.exp(-1.0 / (1.0 - t[m] ** 2))
    return out


def bump_integral():
    val, _ = integrate.quad(lambda t: np.exp(-1.0 / (1.0 - t * t)), -1, 1,
                            epsabs=1e-15, epsrel=1e-15, limit=200)
    return val


class Profile:
    def __init__(self, base, bumps):
        self.base = base
        self.bumps = bumps  # (amp, center, half_width)

    def drho(self, x):
        x = np.asarray(x, dtype=float)
        return sum(a * bump((x - c) / w) for a, c, w in self.bumps)

    def rho(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.full_like(x, self.base)
        for a, c, w in self.bumps:
            for i, xi in enumerate(x):
                t = (xi - c) / w
                if t <= -1:
                    continue
                t = min(t, 1.0)
                val, _ = integrate.quad(lambda s: np.exp(-1.0 / (1.0 - s * s)) if abs(s) < 1 else 0.0,
                                        -1, t, epsabs=1e-14, epsrel=1e-14, limit=200)
                out[i] += a * w * val
        return out


def grid(Lz, n):
    h = 2 * Lz / (n + 1)
    nodes = -Lz + h * np.arange(1, n + 1)
    mids = -Lz + h * (np.arange(0, n + 1) + 0.5)
    return h, nodes, mids


def diff_ops(n, h):
    # first difference nodes -> cells (n+1 x n), zero boundary values
    D = np.zeros((n + 1, n))
    for k in range(n + 1):
        if k < n:
            D[k, k] = 1.0 / h
        if k > 0:
            D[k, k - 1] = -1.0 / h
    # second difference at interior and both boundary nodes (n+2 x n), clamped
    D2 = np.zeros((n + 2, n))
    for j in range(n):
        D2[j + 1, j] = -2.0 / h ** 2
        D2[j, j] = 1.0 / h ** 2
        D2[j + 2, j] = 1.0 / h ** 2
    P = np.zeros((n + 2, n))
    P[1:n + 1, :] = np.eye(n)
    return D, D2, P


def forms(prof, Lz, n, xi, orient, M, mu, g):
    h, x, xm = grid(Lz, n)
    D, D2, P = diff_ops(n, h)
    k2 = xi[0] ** 2 + xi[1] ** 2
    rho_n = prof.rho(x)
    rho_m = prof.rho(xm)
    dr = prof.drho(x)
    mass = h * np.eye(n)
    K = h * D.T @ D
    G = h * np.diag(dr)
    if orient == "h":
        E0 = M ** 2 * xi[0] ** 2 * (mass + K / k2) - g * G
    else:
        E0 = M ** 2 * (K + h * D2.T @ D2 / k2) - g * G
    Q = k2 * P + D2
    E1 = mu * (4 * k2 * K + h * Q.T @ Q)
    J = k2 * h * np.diag(rho_n) + h * D.T @ np.diag(rho_m) @ D
    return dict(E0=E0, E1=E1, J=J, k2=k2, G=G, K=K, mass=mass, D2=D2, h=h, x=x)


def min_eig(A, B):
    w = linalg.eigh(A, B, eigvals_only=True, subset_by_index=[0, 0])
    return w[0]


def max_eig(A, B):
    n = A.shape[0]
    w = linalg.eigh(A, B, eigvals_only=True, subset_by_index=[n - 1, n - 1])
    return w[0]


def alpha(F, s):
    return min_eig(F["k2"] * F["E0"] + s * F["E1"], F["J"])


def growth(F, g, sup_ratio):
    """Fixed point s = sqrt(-alpha(s)) by Brent's method on [1e-9, 1.01 * sqrt(g sup_ratio)]."""
    f = lambda s: s - np.sqrt(max(-alpha(F, s), 0.0))
    if alpha(F, 1e-9) >= 0:
        return None
    return optimize.brentq(f, 1e-9, np.sqrt(g * sup_ratio) * 1.01, xtol=1e-14, rtol=1e-14)


def sup_ratio(prof, a, b):
    x = np.linspace(a, b, 40001)
    r = prof.drho(x) / prof.rho(x)
    i = int(np.argmax(r))
    res = optimize.minimize_scalar(lambda t: -float(prof.drho(t) / prof.rho(t)[0]),
                                   bounds=(x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]),
                                   method="bounded", options={"xatol": 1e-12})
    return -res.fun


CANONICAL = Profile(1.0, [(1.0, 0.0, 1.0)])
FINITE = Profile(5.0, [(1.0, 1.0, 0.5), (-3.0, -1.0, 0.5)])


def dirichlet_critical(prof, Lz, n, g):
    h, x, _ = grid(Lz, n)
    D, _, _ = diff_ops(n, h)
    return np.sqrt(max_eig(g * h * np.diag(prof.drho(x)), h * D.T @ D))


def critical_number_limit(prof, Lz, n, a, b, g):
    """Lz -> infinity limit at the spacing of grid(Lz, n): optimal psi is constant outside
    the support [a, b], so the problem reduces to free ends on the lattice nodes covering it.
    The constant direction is eliminated by its Schur complement (needs total jump < 0)."""
    h = 2 * Lz / (n + 1)
    j0 = int(np.floor((a + Lz) / h)) - 1
    j1 = int(np.ceil((b + Lz) / h)) + 1
    x = -Lz + h * np.arange(j0, j1 + 1)
    m = len(x)
    G = g * h * np.diag(prof.drho(x))
    Dm = (np.eye(m, k=1) - np.eye(m))[:-1] / h
    K = h * Dm.T @ Dm
    one = np.ones(m) / np.sqrt(m)
    q, _ = linalg.qr(np.column_stack([one, np.eye(m)[:, : m - 1]]))
    V = q[:, 1:m]
    a11 = one @ G @ one
    assert a11 < 0
    gv = V.T @ G @ one
    S = V.T @ G @ V - np.outer(gv, gv) / a11
    return np.sqrt(linalg.eigh(S, V.T @ K @ V, eigvals_only=True)[-1])


def s_horizontal(prof, Lz, n, xi, M, g):
    F = forms(prof, Lz, n, xi, "h", M, 0.05, g)
    c = g * F["k2"] / (M * xi[0]) ** 2
    return np.sqrt(max_eig(c * F["G"] - F["K"], F["mass"]))


def xi_vc(prof, Lz, n, M, g):
    F = forms(prof, Lz, n, (1.0, 0.0), "v", M, 0.05, g)
    H = F["h"] * F["D2"].T @ F["D2"]
    return 1.0 / np.sqrt(max_eig(g * F["G"] - M ** 2 * F["K"], M ** 2 * H))


if __name__ == "__main__":
    g, mu = 1.0, 0.05
    print("bump_integral", repr(bump_integral()))
    print("canonical sup_ratio", repr(sup_ratio(CANONICAL, -1, 1)))
    Fc = forms(CANONICAL, 8.0, 401, (1.0, 0.0), "h", 0.0, mu, g)
    print("alpha canonical xi=(1,0) M=0 s=0.1 n=401", repr(alpha(Fc, 0.1)))
    sr = sup_ratio(CANONICAL, -1, 1)
    for (xi, o, M) in [((1.0, 0.0), "h", 0.0), ((0.0, 1.0), "h", 0.3), ((1.0, 0.0), "h", 0.3),
                       ((1.0, 1.0), "v", 0.3), ((0.0, 2.0), "v", 0.3), ((1.0, 1.0), "h", 0.0)]:
        F = forms(CANONICAL, 8.0, 401, xi, o, M, mu, g)
        print("lambda", xi, o, M, repr(growth(F, g, sr)))
    print("S canonical xi=(0.5,1) M=1 n=401", repr(s_horizontal(CANONICAL, 8.0, 401, (0.5, 1.0), 1.0, g)))
    mc = dirichlet_critical(FINITE, 8.0, 401, g)
    print("finite Mc(Lz=8,n=401)", repr(mc))
    print("finite xi_vc at M=0.5 Mc(8)", repr(xi_vc(FINITE, 8.0, 401, 0.5 * mc, g)))
    print("finite Mc limit at h(8,401)", repr(critical_number_limit(FINITE, 8.0, 401, -1.5, 1.5, g)))
    print("finite Mc limit at h(8,1001)", repr(critical_number_limit(FINITE, 8.0, 1001, -1.5, 1.5, g)))
    print("canonical Mc(Lz=8,n=1001)", repr(dirichlet_critical(CANONICAL, 8.0, 1001, g)))
