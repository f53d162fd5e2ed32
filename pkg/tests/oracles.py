"""Independent symbolic curvature oracle, built on sympy.

Implements the same curvature conventions as the package (signature
(+,-,-,-), R^r_{s mu nu} = d_mu Gamma^r_{nu s} - ..., Ricci from the
1st/3rd contraction) but through symbolic differentiation of closed-form
metrics, so the two routes share no code.
"""

import numpy as np
import sympy as sp


def symbolic_metric(name, **params):
    t, r, th, ph = sp.symbols("t r theta phi")
    if name == "schwarzschild":
        M = params.get("M", 1)
        f = 1 - 2 * M / r
        return (t, r, th, ph), sp.diag(f, -1 / f, -(r**2),
                                       -(r**2) * sp.sin(th) ** 2)
    if name == "de_sitter_static":
        a = params.get("alpha", 1)
        f = 1 - r**2 / a**2
        return (t, r, th, ph), sp.diag(f, -1 / f, -(r**2),
                                       -(r**2) * sp.sin(th) ** 2)
    if name == "anti_de_sitter_static":
        a = params.get("alpha", 1)
        f = 1 + r**2 / a**2
        return (t, r, th, ph), sp.diag(f, -1 / f, -(r**2),
                                       -(r**2) * sp.sin(th) ** 2)
    if name == "frw_dust":
        a0 = params.get("a0", 1)
        x, y, z = sp.symbols("x y z")
        a2 = (a0 * t ** sp.Rational(2, 3)) ** 2
        return (t, x, y, z), sp.diag(1, -a2, -a2, -a2)
    if name == "minkowski_spherical":
        return (t, r, th, ph), sp.diag(1, -1, -(r**2),
                                       -(r**2) * sp.sin(th) ** 2)
    raise ValueError(name)


def symbolic_curvature(coords, g):
    """Christoffel, lowered Riemann, Ricci, scalar and Einstein tensors as
    numeric evaluators of the 4 coordinates."""
    n = 4
    ginv = g.inv()
    dg = [[[sp.diff(g[a, b], coords[m]) for b in range(n)] for a in range(n)]
          for m in range(n)]

    gamma = [[[
        sum(ginv[s, l] * (dg[a][l][b] + dg[b][l][a] - dg[l][a][b])
            for l in range(n)) / 2
        for b in range(n)] for a in range(n)] for s in range(n)]

    def riem_up(r_, s_, m_, n_):
        expr = sp.diff(gamma[r_][n_][s_], coords[m_]) - sp.diff(
            gamma[r_][m_][s_], coords[n_]
        )
        expr += sum(
            gamma[r_][m_][l] * gamma[l][n_][s_]
            - gamma[r_][n_][l] * gamma[l][m_][s_]
            for l in range(n)
        )
        return expr

    riem_low = [[[[
        sum(g[r_, l] * riem_up(l, s_, m_, n_) for l in range(n))
        for n_ in range(n)] for m_ in range(n)] for s_ in range(n)]
        for r_ in range(n)]
    ricci = [[sum(riem_up(l, s_, l, n_) for l in range(n))
              for n_ in range(n)] for s_ in range(n)]
    scalar = sum(ginv[s_, n_] * ricci[s_][n_]
                 for s_ in range(n) for n_ in range(n))
    einstein = [[sp.simplify(ricci[a][b] - scalar * g[a, b] / 2)
                 for b in range(n)] for a in range(n)]

    fns = {
        "christoffel": sp.lambdify(coords, gamma, "numpy"),
        "riemann_lower": sp.lambdify(coords, riem_low, "numpy"),
        "ricci": sp.lambdify(coords, ricci, "numpy"),
        "scalar": sp.lambdify(coords, scalar, "numpy"),
        "einstein": sp.lambdify(coords, einstein, "numpy"),
    }

    def evaluate(point):
        c = tuple(float(v) for v in point.coords)
        return {
            key: np.asarray(fn(*c), dtype=float) for key, fn in fns.items()
        }

    return evaluate
