"""Orthonormal tetrads, Dirac matrices, and the bispinor connection.

The flat matrices use the chirality (Weyl) representation with signature
(+,-,-,-): gamma^0 has off-diagonal identity blocks, gamma^k off-diagonal
Pauli blocks with opposite signs, and gamma5 = i g0 g1 g2 g3 = diag(-I, I).
sigma^{ab} = [gamma^a, gamma^b]/4; position-dependent matrices are tetrad
contractions gamma^al(x) = e_(a)^al gamma^a.

The bispinor connection is Gamma_al = 1/2 sigma^{ab} e_(a)^nu (nabla_al
e_(b)nu); with it the position-dependent gammas are covariantly constant:
d_s gamma^r + Gamma^r_{s l} gamma^l + [Gamma_s, gamma^r] = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SignatureError
from .geometry import (
    ETA,
    MetricAtPoint,
    MetricSpec,
    Point,
    christoffel,
    curvature,
    eval_metric,
    levi_civita,
    metric_derivatives,
)
from .numerics import STEP_FIRST, fd_step, partial4

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _weyl_gammas() -> np.ndarray:
    g = np.zeros((4, 4, 4), dtype=complex)
    g[0, :2, 2:] = np.eye(2)
    g[0, 2:, :2] = np.eye(2)
    for k in range(3):
        g[k + 1, :2, 2:] = _PAULI[k]
        g[k + 1, 2:, :2] = -_PAULI[k]
    return g


GAMMA_FLAT = _weyl_gammas()
GAMMA5 = 1j * GAMMA_FLAT[0] @ GAMMA_FLAT[1] @ GAMMA_FLAT[2] @ GAMMA_FLAT[3]

#: sigma^{ab} = [gamma^a, gamma^b]/4, frame indices raised with eta
SIGMA_FLAT = 0.25 * (
    np.einsum("aij,bjk->abik", GAMMA_FLAT, GAMMA_FLAT)
    - np.einsum("bij,ajk->abik", GAMMA_FLAT, GAMMA_FLAT)
)


def unitary_transform_gammas(u: np.ndarray) -> np.ndarray:
    """Flat gammas in an equivalent representation: U gamma^a U^dagger."""
    return np.einsum("ij,ajk,kl->ail", u, GAMMA_FLAT, u.conj().T)


@dataclass
class Tetrad:
    """Orthonormal frame: e_lower[a, al] = e^(a)_al, e_upper[a, al] = e_(a)^al."""

    e_lower: np.ndarray
    e_upper: np.ndarray


@dataclass
class GammaSet:
    """Flat and position-dependent Dirac matrices plus the volume tensor."""

    gamma_flat: np.ndarray  # [a, i, j]
    gamma5: np.ndarray
    gamma_up: np.ndarray  # gamma^al(x), [al, i, j]
    gamma_down: np.ndarray  # gamma_al(x)
    sigma_curved: np.ndarray  # sigma^{al be}(x), [al, be, i, j]
    eps_upper: np.ndarray
    eps_lower: np.ndarray
    metric: MetricAtPoint
    tetrad: Tetrad


@dataclass
class SpinConnection:
    """The four connection matrices Gamma_al(x), indexed [al, i, j]."""

    Gamma: np.ndarray


def _is_diagonal(g: np.ndarray) -> bool:
    off = g - np.diag(np.diag(g))
    return float(np.max(np.abs(off))) <= 1e-12 * max(1.0, float(np.max(np.abs(g))))


def build_tetrad(m: MetricAtPoint) -> Tetrad:
    """Tetrad with e^(a)_al eta_ab e^(b)_be = g_{al be}.

    Diagonal metrics get the diagonal-positive gauge e^(a)_al =
    sqrt(|g_al al|) delta; otherwise an eigen-decomposition with a
    deterministic sign fix is used.  Raises SignatureError unless the
    metric has exactly one positive eigendirection.
    """
    g = m.g_lower
    if _is_diagonal(g):
        d = np.diag(g)
        if not (d[0] > 0 and np.all(d[1:] < 0)):
            raise SignatureError(
                f"diagonal metric with signs {np.sign(d)} is not (+,-,-,-)"
            )
        e_lower = np.diag(np.sqrt(np.abs(d)))
        e_upper = np.diag(1.0 / np.sqrt(np.abs(d)))
        return Tetrad(e_lower=e_lower, e_upper=e_upper)

    evals, evecs = np.linalg.eigh(g)
    order = np.argsort(evals)[::-1]  # the positive eigenvalue first
    evals = evals[order]
    evecs = evecs[:, order]
    if not (evals[0] > 0 and np.all(evals[1:] < 0)):
        raise SignatureError(f"metric eigenvalues {evals} are not (+,-,-,-)")
    for a in range(4):
        col = evecs[:, a]
        pivot = np.argmax(np.abs(col))
        if col[pivot] < 0:
            evecs[:, a] = -col
    e_lower = (np.sqrt(np.abs(evals))[:, None]) * evecs.T
    e_upper = ETA @ e_lower @ m.g_upper
    return Tetrad(e_lower=e_lower, e_upper=e_upper)


def curved_gammas(t: Tetrad, m: MetricAtPoint, flat: np.ndarray = None) -> GammaSet:
    """Position-dependent Dirac matrices from a tetrad."""
    if flat is None:
        gamma_flat, gamma5 = GAMMA_FLAT, GAMMA5
    else:
        gamma_flat = flat
        gamma5 = 1j * flat[0] @ flat[1] @ flat[2] @ flat[3]
    gamma_up = np.einsum("am,aij->mij", t.e_upper, gamma_flat)
    gamma_down = np.einsum("mn,nij->mij", m.g_lower, gamma_up)
    sigma = 0.25 * (
        np.einsum("aij,bjk->abik", gamma_up, gamma_up)
        - np.einsum("bij,ajk->abik", gamma_up, gamma_up)
    )
    eps_upper, eps_lower = levi_civita(m)
    return GammaSet(
        gamma_flat=gamma_flat,
        gamma5=gamma5,
        gamma_up=gamma_up,
        gamma_down=gamma_down,
        sigma_curved=sigma,
        eps_upper=eps_upper,
        eps_lower=eps_lower,
        metric=m,
        tetrad=t,
    )


def gamma_set_at(spec: MetricSpec, x: Point, flat: np.ndarray = None) -> GammaSet:
    m = eval_metric(spec, x)
    return curved_gammas(build_tetrad(m), m, flat)


def tetrad_field(spec: MetricSpec, x: Point) -> np.ndarray:
    """e^(a)_al as a smooth field (diagonal gauge on diagonal metrics)."""
    return build_tetrad(eval_metric(spec, x)).e_lower


def _tetrad_derivatives(spec: MetricSpec, x: Point) -> np.ndarray:
    """d_mu e^(a)_al, indexed [mu, a, al].

    Diagonal metrics use the chain rule on sqrt(eta_aa g_aa) with the
    spec's metric derivatives (analytic when available); the general case
    falls back to finite differences of the tetrad field.
    """
    m = eval_metric(spec, x)
    if _is_diagonal(m.g_lower):
        dg = metric_derivatives(spec, x)
        e_diag = np.sqrt(np.abs(np.diag(m.g_lower)))
        out = np.zeros((4, 4, 4))
        for mu in range(4):
            for a in range(4):
                out[mu, a, a] = ETA[a, a] * dg[mu, a, a] / (2.0 * e_diag[a])
        return out
    return np.stack(
        [
            partial4(
                lambda c: tetrad_field(spec, Point(c, spec.chart_id)),
                x.coords,
                mu,
                fd_step(x.coords[mu], STEP_FIRST),
            )
            for mu in range(4)
        ],
        axis=0,
    )


def spin_connection(spec: MetricSpec, x: Point) -> SpinConnection:
    """Gamma_al = 1/2 sigma^{ab} e_(a)^nu (nabla_al e_(b)nu)."""
    return SpinConnection(Gamma=_spin_connection_cached(spec, tuple(x.coords)))


@lru_cache(maxsize=65536)
def _spin_connection_cached(spec, coords):
    x = Point(np.array(coords), spec.chart_id)
    m = eval_metric(spec, x)
    tet = build_tetrad(m)
    de = _tetrad_derivatives(spec, x)  # [mu, a, al] of e^(a)_al
    gam = christoffel(spec, x)
    # frame indices lowered with eta: E[b, nu] = eta_bc e^(c)_nu
    e_dn = ETA @ tet.e_lower
    de_dn = np.einsum("ba,mac->mbc", ETA, de)
    # omega[al, a, b] = e_(a)^nu (d_al E[b,nu] - Gamma^l_{al nu} E[b,l])
    nabla_e = de_dn - np.einsum("lan,bl->abn", gam, e_dn)
    omega = np.einsum("an,mbn->mab", tet.e_upper, nabla_e)
    return 0.5 * np.einsum("abij,mab->mij", SIGMA_FLAT, omega)


def spinor_commutator_curvature(spec: MetricSpec, x: Point) -> np.ndarray:
    """The curvature acting on the bispinor index: 1/2 sigma^{nu mu}(x)
    R_{mu nu be al}(x), returned as Dhat[al, be] (4x4 complex each),
    antisymmetric in (al, be)."""
    bundle = curvature(spec, x)
    gs = gamma_set_at(spec, x)
    return 0.5 * np.einsum(
        "nmij,mnba->abij", gs.sigma_curved, bundle.riemann_lower
    )


def connection_curvature_fd(spec: MetricSpec, x: Point) -> np.ndarray:
    """Independent construction of the connection curvature,
    F[al, be] = d_al Gamma_be - d_be Gamma_al + [Gamma_al, Gamma_be],
    with the derivative taken by Richardson differences of the connection
    field."""
    from .numerics import STEP_OUTER

    def gamma_at(c):
        return _spin_connection_cached(spec, tuple(c))

    dG = np.stack(
        [
            partial4(gamma_at, x.coords, mu, fd_step(x.coords[mu], STEP_OUTER),
                     richardson=True)
            for mu in range(4)
        ],
        axis=0,
    )  # dG[mu, al, i, j] = d_mu Gamma_al
    G = gamma_at(x.coords)
    comm = np.einsum("aij,bjk->abik", G, G) - np.einsum("bij,ajk->abik", G, G)
    return dG - dG.transpose(1, 0, 2, 3) + comm
