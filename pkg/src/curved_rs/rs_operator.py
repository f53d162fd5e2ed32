"""Assembly and verification of the first-order vector-bispinor operator.

The wave operator acts on a 16-component field Psi_be (vector index x
bispinor index) as  (alpha^nu D_nu + kappa beta) Psi = 0  with 4x4 blocks

    (beta)_r^s    = delta_r^s - 1/3 gamma_r gamma^s,
    (alpha^nu)_r^s = gamma^nu delta_r^s - 1/3 gamma^s delta^nu_r
                     - 1/3 gamma_r g^{nu s} + 1/3 gamma_r gamma^nu gamma^s,

D_nu = nabla_nu + Gamma_nu - i e A_nu.  The left C-multiplication and S
similarity (with S = I + a gamma gamma, S^-1 = I + b gamma gamma,
a + b + 4ab = 0) bring the operator to a closed form built from the
antisymmetric tensor; both routes are implemented and compared by tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidTransform, StencilTooCoarse
from .fields import BISPINOR, VECTOR_BISPINOR, FieldSampler
from .geometry import MetricSpec, Point, curvature, eval_metric, riemann_mixed
from .numerics import STEP_FIRST, STEP_OUTER, fd_step, partial4
from .spin_frame import (
    GammaSet,
    gamma_set_at,
    spin_connection,
    spinor_commutator_curvature,
)


@dataclass
class MassParam:
    """Mass and the operator's mass factor kappa (default i*m)."""

    m: float
    kappa: complex = None

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("mass must be >= 0")
        if self.kappa is None:
            self.kappa = 1j * self.m


@dataclass
class EMField:
    """External electromagnetic potential A_al(x) and tensor F_{al be}(x).

    When ``F`` is omitted it is derived from A by central differences of
    the curl d_al A_be - d_be A_al.
    """

    A: callable
    F: callable = None

    def field_tensor(self, x: Point) -> np.ndarray:
        if self.F is not None:
            return np.asarray(self.F(x), dtype=float)
        dA = np.stack(
            [
                partial4(
                    lambda c: np.asarray(self.A(Point(c, x.chart_id))),
                    x.coords, mu, fd_step(x.coords[mu], STEP_FIRST),
                )
                for mu in range(4)
            ],
            axis=0,
        )
        return dA - dA.T

    def potential(self, x: Point) -> np.ndarray:
        return np.asarray(self.A(x), dtype=float)


def uniform_em(F: np.ndarray) -> EMField:
    """Constant field tensor with potential A_be = -1/2 F_be_al x^al."""
    F = np.asarray(F, dtype=float)
    if np.max(np.abs(F + F.T)) > 1e-12:
        raise ValueError("field tensor must be antisymmetric")
    return EMField(
        A=lambda p: -0.5 * F @ p.coords,
        F=lambda p: F,
    )


class BlockMatrix16:
    """A 4x4 grid of 4x4 complex blocks acting on vector-bispinors.

    blocks[r, s, i, j]: r/s are the vector row/column, i/j the spinor ones.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        self.blocks = np.asarray(blocks, dtype=complex)
        if self.blocks.shape != (4, 4, 4, 4):
            raise ValueError("blocks must have shape (4, 4, 4, 4)")

    @classmethod
    def identity(cls):
        blocks = np.zeros((4, 4, 4, 4), dtype=complex)
        for r in range(4):
            blocks[r, r] = np.eye(4)
        return cls(blocks)

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=complex).reshape(4, 4, 4, 4)
        return cls(dense.transpose(0, 2, 1, 3))

    def to_dense(self) -> np.ndarray:
        return self.blocks.transpose(0, 2, 1, 3).reshape(16, 16)

    def __matmul__(self, other):
        return BlockMatrix16(
            np.einsum("rlij,lsjk->rsik", self.blocks, other.blocks)
        )

    def __add__(self, other):
        return BlockMatrix16(self.blocks + other.blocks)

    def __sub__(self, other):
        return BlockMatrix16(self.blocks - other.blocks)

    def __mul__(self, scalar):
        return BlockMatrix16(self.blocks * scalar)

    __rmul__ = __mul__

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """(M Psi)_r = sum_s block(r, s) Psi_s."""
        return np.einsum("rsij,sj->ri", self.blocks, psi)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.blocks)))


def gamma_pair_block(gs: GammaSet, coeff: complex) -> BlockMatrix16:
    """I + coeff * gamma_r gamma^s as a block matrix."""
    blocks = coeff * np.einsum(
        "rij,sjk->rsik", gs.gamma_down, gs.gamma_up
    )
    for r in range(4):
        blocks[r, r] += np.eye(4)
    return BlockMatrix16(blocks)


def build_alpha_beta(gs: GammaSet):
    """The operator blocks (alpha^nu, beta) at a point."""
    gd, gu = gs.gamma_down, gs.gamma_up
    g_up = gs.metric.g_upper
    beta = gamma_pair_block(gs, -1.0 / 3.0)

    triple = np.einsum("rij,njk,skl->nrsil", gd, gu, gu)  # gamma_r gamma^nu gamma^s
    alphas = []
    for nu in range(4):
        blocks = np.zeros((4, 4, 4, 4), dtype=complex)
        for r in range(4):
            blocks[r, r] += gu[nu]
            blocks[nu, r] += -gu[r] / 3.0  # -1/3 gamma^s delta^nu_rho
        blocks += -np.einsum("rij,s->rsij", gd, g_up[nu]) / 3.0
        blocks += triple[nu] / 3.0
        alphas.append(BlockMatrix16(blocks))
    return alphas, beta


def covariant_derivative(
    field: FieldSampler,
    spec: MetricSpec,
    x: Point,
    em: Optional[EMField] = None,
    charge: float = 1.0,
    base_step: float = STEP_FIRST,
    richardson: bool = False,
    include_spin: bool = True,
    stencil_budget: float = None,
) -> np.ndarray:
    """D_nu of a sampler at ``x``.

    Vector-bispinor fields get the Christoffel term on the vector index
    and the bispinor connection on the spinor index; bispinor fields only
    the connection (they are coordinate scalars).  Returns [nu, be, s] or
    [nu, s].  ``stencil_budget`` (optional) raises StencilTooCoarse when
    the two Richardson levels disagree beyond it.
    """

    def f(c):
        return field(Point(c, x.chart_id))

    parts = []
    for mu in range(4):
        h = fd_step(x.coords[mu], base_step)
        if stencil_budget is not None or richardson:
            d_h = partial4(f, x.coords, mu, h)
            d_h2 = partial4(f, x.coords, mu, h / 2)
            if stencil_budget is not None:
                gap = float(np.max(np.abs(d_h - d_h2)))
                if gap > stencil_budget:
                    raise StencilTooCoarse(
                        f"Richardson levels differ by {gap:.3e} along x^{mu} "
                        f"(budget {stencil_budget:.3e})"
                    )
            parts.append((4.0 * d_h2 - d_h) / 3.0 if richardson else d_h)
        else:
            parts.append(partial4(f, x.coords, mu, h))
    d = np.stack(parts, axis=0)

    value = field(x)
    if include_spin:
        G = spin_connection(spec, x).Gamma
    if field.kind == BISPINOR:
        if include_spin:
            d = d + np.einsum("nij,j->ni", G, value)
    else:
        from .geometry import christoffel

        gam = christoffel(spec, x)
        d = d - np.einsum("lnb,li->nbi", gam, value)
        if include_spin:
            d = d + np.einsum("nij,bj->nbi", G, value)
    if em is not None:
        A = em.potential(x)
        d = d - 1j * charge * np.einsum("n,...->n...", A, value)
    return d


def rs_residual(
    field: FieldSampler,
    spec: MetricSpec,
    x: Point,
    mass: MassParam,
    em: Optional[EMField] = None,
    charge: float = 1.0,
) -> np.ndarray:
    """Left side of the wave equation at ``x``: (alpha^nu D_nu + kappa beta) Psi."""
    gs = gamma_set_at(spec, x)
    alphas, beta = build_alpha_beta(gs)
    d = covariant_derivative(field, spec, x, em, charge)
    res = mass.kappa * beta.apply(field(x))
    for nu in range(4):
        res = res + alphas[nu].apply(d[nu])
    return res


def residual_sampler(field, spec, mass, em=None, charge=1.0) -> FieldSampler:
    return FieldSampler(
        lambda p: rs_residual(field, spec, p, mass, em, charge),
        VECTOR_BISPINOR,
        name=f"residual({field.name})",
    )


def divergence_combo(field, spec, x, mass, em=None, charge=1.0) -> np.ndarray:
    """The first-constraint combination D_be Psi^be - (kappa/2) gamma_be Psi^be."""
    gs = gamma_set_at(spec, x)
    d = covariant_derivative(field, spec, x, em, charge)
    div = np.einsum("nb,nbi->i", gs.metric.g_upper, d)
    trace = np.einsum("bij,bj->i", gs.gamma_up, field(x))
    return div - 0.5 * mass.kappa * trace


def contraction_identity(field, spec, x, mass, em=None, charge=1.0):
    """gamma-contraction of the residual vs (2/3) of the first-constraint
    combination; equal for arbitrary smooth fields."""
    gs = gamma_set_at(spec, x)
    res = rs_residual(field, spec, x, mass, em, charge)
    lhs = np.einsum("sij,sj->i", gs.gamma_up, res)
    rhs = (2.0 / 3.0) * divergence_combo(field, spec, x, mass, em, charge)
    return lhs, rhs


def constraint_two_residual(field, spec, x, mass, em=None, charge=1.0):
    """The algebraic constraint:
    (1/2 R_ab + i e F_ab) gamma^a Psi^b
    + [kappa^2/2 - 1/3 (R/4 + i e F_ab sigma^ab)] gamma^r Psi_r.
    """
    gs = gamma_set_at(spec, x)
    bundle = curvature(spec, x)
    psi = field(x)
    psi_up = np.einsum("bl,lj->bj", gs.metric.g_upper, psi)
    F = em.field_tensor(x) if em is not None else np.zeros((4, 4))
    coef = 0.5 * bundle.ricci + 1j * charge * F
    t1 = np.einsum("ab,aij,bj->i", coef, gs.gamma_up, psi_up)
    phi = np.einsum("rij,rj->i", gs.gamma_up, psi)
    t2 = (0.5 * mass.kappa**2 - bundle.scalar / 12.0) * phi
    if em is not None:
        fsigma = np.einsum("ab,abij->ij", F, gs.sigma_curved)
        t2 = t2 - (1j * charge / 3.0) * fsigma @ phi
    return t1 + t2


def einstein_space_factor(spec, x, mass) -> complex:
    """The scalar 1/2 (R/12 - m^2) multiplying gamma^r Psi_r when
    R_ab = (R/4) g_ab (uses kappa^2 = -m^2 under the default convention)."""
    bundle = curvature(spec, x)
    return 0.5 * (bundle.scalar / 12.0 + mass.kappa**2)


def second_covariant_comm(field, spec, x, em=None, charge=1.0):
    """[D_al, D_be] Psi by nested differences, indexed [al, be, c, s]."""

    def inner(c):
        return covariant_derivative(
            field, spec, Point(c, x.chart_id), em, charge
        )

    from .geometry import christoffel

    gam = christoffel(spec, x)
    G = spin_connection(spec, x).Gamma
    v = inner(x.coords)  # [nu, c, s]
    dv = np.stack(
        [
            partial4(inner, x.coords, mu, fd_step(x.coords[mu], STEP_OUTER),
                     richardson=True)
            for mu in range(4)
        ],
        axis=0,
    )  # [mu, nu, c, s]
    t = (
        dv
        - np.einsum("lmn,lcs->mncs", gam, v)
        - np.einsum("lmc,nls->mncs", gam, v)
        + np.einsum("mij,ncj->mnci", G, v)
    )
    if em is not None:
        A = em.potential(x)
        t = t - 1j * charge * np.einsum("m,ncs->mncs", A, v)
    return t - t.transpose(1, 0, 2, 3)


def commutator_decomposition(field, spec, x, em=None, charge=1.0):
    """Nested-difference [D_al, D_be] Psi vs its curvature/field form
    (vector curvature + spinor curvature - i e F)."""
    lhs = second_covariant_comm(field, spec, x, em, charge)
    m = eval_metric(spec, x)
    bundle = curvature(spec, x)
    rmix = riemann_mixed(bundle, m)
    dhat = spinor_commutator_curvature(spec, x)
    psi = field(x)
    # vector part: ( [nabla_a, nabla_b] Psi )_c = - R^l_{c a b} Psi_l
    rhs = -np.einsum("lcab,ls->abcs", rmix, psi)
    rhs = rhs + np.einsum("abij,cj->abci", dhat, psi)
    if em is not None:
        F = em.field_tensor(x)
        rhs = rhs - 1j * charge * np.einsum("ab,cs->abcs", F, psi)
    return lhs, rhs


def curvature_bridge(field, spec, x):
    """The standalone contraction
    -gamma^al (nabla_al nabla_be - nabla_be nabla_al) Psi^be
    = gamma^al Psi^nu R_{nu al}, with the left side by nested differences
    of Christoffel-only derivatives."""

    def inner(c):
        return covariant_derivative(
            field, spec, Point(c, x.chart_id), em=None, include_spin=False
        )

    from .geometry import christoffel

    gam = christoffel(spec, x)
    v = inner(x.coords)
    dv = np.stack(
        [
            partial4(inner, x.coords, mu, fd_step(x.coords[mu], STEP_OUTER),
                     richardson=True)
            for mu in range(4)
        ],
        axis=0,
    )
    t = (
        dv
        - np.einsum("lmn,lcs->mncs", gam, v)
        - np.einsum("lmc,nls->mncs", gam, v)
    )
    gs = gamma_set_at(spec, x)
    g_up = gs.metric.g_upper
    w = np.einsum("nc,ancs->as", g_up, t - t.transpose(1, 0, 2, 3))
    lhs = -np.einsum("aij,aj->i", gs.gamma_up, w)
    bundle = curvature(spec, x)
    psi_up = np.einsum("nl,lj->nj", g_up, field(x))
    rhs = np.einsum("na,aij,nj->i", bundle.ricci, gs.gamma_up, psi_up)
    return lhs, rhs


def derivative_chain_check(field, spec, x, mass, em=None, charge=1.0,
                           stencil_budget=None):
    """D^s applied to the residual, minus the first-constraint part, vs the
    curvature/field form; an identity for arbitrary C^3 fields.

    Left side: D^s (residual)_s - (2/3) gamma^al D_al chi - kappa chi, with
    chi the first-constraint combination.  Right side:
    -D_{al be} gamma^al Psi^be + kappa^2/2 gamma^r Psi_r
    + 1/3 sigma^{al be} D_{al be} gamma^r Psi_r, with the commutator
    D_{al be} in its algebraic curvature form.
    """
    gs = gamma_set_at(spec, x)
    res_field = residual_sampler(field, spec, mass, em, charge)
    dres = covariant_derivative(
        res_field, spec, x, em, charge,
        base_step=STEP_OUTER, richardson=True, stencil_budget=stencil_budget,
    )
    div_res = np.einsum("nb,nbi->i", gs.metric.g_upper, dres)

    chi_field = FieldSampler(
        lambda p: divergence_combo(field, spec, p, mass, em, charge),
        BISPINOR,
        name="first-constraint",
    )
    dchi = covariant_derivative(
        chi_field, spec, x, em, charge,
        base_step=STEP_OUTER, richardson=True, stencil_budget=stencil_budget,
    )
    chi = chi_field(x)
    lhs = (
        div_res
        - (2.0 / 3.0) * np.einsum("aij,aj->i", gs.gamma_up, dchi)
        - mass.kappa * chi
    )

    rhs = chain_rhs_algebraic(field, spec, x, mass, em, charge)
    return lhs, rhs


def chain_rhs_algebraic(field, spec, x, mass, em=None, charge=1.0):
    """The curvature/field form of the derivative chain:
    -D_{al be} gamma^al Psi^be + kappa^2/2 gamma^r Psi_r
    + 1/3 sigma^{al be} D_{al be} gamma^r Psi_r, with the commutator in its
    algebraic form (vector curvature + spinor curvature - i e F)."""
    gs = gamma_set_at(spec, x)
    m = eval_metric(spec, x)
    bundle = curvature(spec, x)
    rmix = riemann_mixed(bundle, m)
    dhat = spinor_commutator_curvature(spec, x)
    F = em.field_tensor(x) if em is not None else None
    psi = field(x)
    # (D_{a m} Psi)_b = -R^l_{b a m} Psi_l + Dhat_{a m} Psi_b - i e F_{a m} Psi_b
    comm = -np.einsum("lbam,ls->ambs", rmix, psi) + np.einsum(
        "amij,bj->ambi", dhat, psi
    )
    if F is not None:
        comm = comm - 1j * charge * np.einsum("am,bs->ambs", F, psi)
    contracted = np.einsum("mb,ambs->as", m.g_upper, comm)
    term1 = -np.einsum("aij,aj->i", gs.gamma_up, contracted)
    phi = np.einsum("rij,rj->i", gs.gamma_up, psi)
    term2 = 0.5 * mass.kappa**2 * phi
    d_on_phi = np.einsum("abij,j->abi", dhat, phi)
    if F is not None:
        d_on_phi = d_on_phi - 1j * charge * np.einsum("ab,i->abi", F, phi)
    term3 = (1.0 / 3.0) * np.einsum(
        "abij,abj->i", gs.sigma_curved, d_on_phi
    )
    return term1 + term2 + term3


# ---------------------------------------------------------------------------
# the C/S transformation and its closed form
# ---------------------------------------------------------------------------


@dataclass
class TransformResult:
    beta_prime: BlockMatrix16
    alpha_prime: list
    beta_tilde: BlockMatrix16
    alpha_tilde: list


def transform_CS(alphas, beta, gs: GammaSet, a: float, b: float, c: float
                 ) -> TransformResult:
    """Left-multiply by C = I + c gamma gamma, then conjugate by
    S = I + a gamma gamma with inverse I + b gamma gamma; requires
    a + b + 4ab = 0."""
    if abs(a + b + 4.0 * a * b) > 1e-12:
        raise InvalidTransform(
            f"a + b + 4ab = {a + b + 4 * a * b:.3e}, must vanish"
        )
    C = gamma_pair_block(gs, c)
    S = gamma_pair_block(gs, a)
    S_inv = gamma_pair_block(gs, b)
    beta_prime = C @ beta
    alpha_prime = [C @ al for al in alphas]
    return TransformResult(
        beta_prime=beta_prime,
        alpha_prime=alpha_prime,
        beta_tilde=S @ beta_prime @ S_inv,
        alpha_tilde=[S @ al @ S_inv for al in alpha_prime],
    )


def transform_printed(gs: GammaSet, a: float, b: float, c: float):
    """The expanded coefficient form of the transformed operator blocks.

    beta' = I - (c+1)/3 gamma gamma;
    beta~ = I + [b + (4b+1)(a - (4a+1)(c+1)/3)] gamma gamma;
    alpha'^nu and alpha~^nu with the printed coefficient groups (the
    epsilon term carries the common bracket B).
    """
    gd, gu = gs.gamma_down, gs.gamma_up
    g_up = gs.metric.g_upper
    beta_prime = gamma_pair_block(gs, -(c + 1.0) / 3.0)
    beta_tilde = gamma_pair_block(
        gs, b + (4.0 * b + 1.0) * (a - (4.0 * a + 1.0) * (c + 1.0) / 3.0)
    )

    B = (b + 1.0) / 3.0 + b * ((2.0 * c - 1.0) * (1.0 + 4.0 * a) / 3.0
                               + 2.0 * a)
    c_nu = 1.0 - B
    c_sig = (2.0 * b - 1.0) / 3.0 + B
    c_g = ((2.0 * c - 1.0) * (1.0 + 4.0 * a) / 3.0 + 2.0 * a) + B

    eps_mixed = np.einsum("rl,lnsm->rnsm", gs.metric.g_lower, gs.eps_upper)
    eps_term = 1j * np.einsum(
        "ij,rnsm,mjk->nrsik", gs.gamma5, eps_mixed, gd
    )

    alpha_prime = []
    alpha_tilde = []
    for nu in range(4):
        blocks_p = np.zeros((4, 4, 4, 4), dtype=complex)
        blocks_t = np.zeros((4, 4, 4, 4), dtype=complex)
        for r in range(4):
            blocks_p[r, r] += gu[nu]
            blocks_p[nu, r] += -gu[r] / 3.0
            blocks_t[r, r] += c_nu * gu[nu]
            blocks_t[nu, r] += c_sig * gu[r]
        blocks_p += (2.0 * c - 1.0) / 3.0 * np.einsum(
            "rij,s->rsij", gd, g_up[nu]
        )
        blocks_p += np.einsum("rij,jk,skl->rsil", gd, gu[nu], gu) / 3.0
        blocks_t += c_g * np.einsum("rij,s->rsij", gd, g_up[nu])
        blocks_t += B * eps_term[nu]
        alpha_prime.append(BlockMatrix16(blocks_p))
        alpha_tilde.append(BlockMatrix16(blocks_t))
    return beta_prime, alpha_prime, beta_tilde, alpha_tilde


def tilde_closed_form(gs: GammaSet):
    """The closed-form transformed blocks:
    (beta~)_r^s = delta - gamma_r gamma^s,
    (alpha~^nu)_r^s = i gamma5 eps_r^{nu s mu} gamma_mu."""
    beta_tilde = gamma_pair_block(gs, -1.0)
    eps_mixed = np.einsum("rl,lnsm->rnsm", gs.metric.g_lower, gs.eps_upper)
    blocks = 1j * np.einsum(
        "ij,rnsm,mjk->nrsik", gs.gamma5, eps_mixed, gs.gamma_down
    )
    alpha_tilde = [BlockMatrix16(blocks[nu]) for nu in range(4)]
    return alpha_tilde, beta_tilde


def beta_tilde_eps_form(gs: GammaSet) -> BlockMatrix16:
    """The dual form (beta~)_r^s = i/2 gamma5 eps_r^{nu s mu} gamma_mu gamma_nu."""
    eps_mixed = np.einsum("rl,lnsm->rnsm", gs.metric.g_lower, gs.eps_upper)
    blocks = 0.5j * np.einsum(
        "ij,rnsm,mjk,nkl->rsil",
        gs.gamma5, eps_mixed, gs.gamma_down, gs.gamma_down,
    )
    return BlockMatrix16(blocks)


# ---------------------------------------------------------------------------
# flat-space reduction
# ---------------------------------------------------------------------------


def flat_reduction_check(field: FieldSampler, mass: MassParam, points,
                         spec: MetricSpec = None) -> dict:
    """On Minkowski (Cartesian), fields obeying gamma^a Psi_a = 0 and
    d^a Psi_a = 0 must give a residual equal to four independent Dirac
    residuals (gamma^a d_a + kappa) Psi_c.  Returns a report dict."""
    from .geometry import ETA
    from .spacetimes import load_preset
    from .spin_frame import GAMMA_FLAT

    if spec is None:
        spec = load_preset("minkowski_cartesian")
    max_rs = max_dirac = max_match = 0.0
    max_tr = max_div = 0.0
    scale = 1e-300
    for x in points:
        psi = field(x)
        d = covariant_derivative(field, spec, x)
        rs = rs_residual(field, spec, x, mass)
        dirac = (
            np.einsum("aij,acj->ci", GAMMA_FLAT, d) + mass.kappa * psi
        )
        trace = np.einsum("aij,aj->i", GAMMA_FLAT, psi)
        div = np.einsum("ab,abj->j", ETA, d)
        scale = max(scale, float(np.max(np.abs(psi))),
                    float(np.max(np.abs(d))))
        max_rs = max(max_rs, float(np.max(np.abs(rs))))
        max_dirac = max(max_dirac, float(np.max(np.abs(dirac))))
        max_match = max(max_match, float(np.max(np.abs(rs - dirac))))
        max_tr = max(max_tr, float(np.max(np.abs(trace))))
        max_div = max(max_div, float(np.max(np.abs(div))))
    constraints_ok = max_tr <= 1e-8 * scale and max_div <= 1e-8 * scale
    return {
        "constraints_satisfied": constraints_ok,
        "reduction_matches": max_match <= 1e-10 * max(scale, 1.0),
        "max_rs_residual": max_rs,
        "max_dirac_residual": max_dirac,
        "max_match_error": max_match,
        "max_gamma_trace": max_tr,
        "max_divergence": max_div,
        "scale": scale,
    }
