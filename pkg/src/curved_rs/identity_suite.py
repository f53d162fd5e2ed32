"""Batch runner executing every registered identity check at randomized
points of a metric, with per-check tolerances and a deterministic report.

Checks carry an equation tag (a stable id shared with the JSON report), a
tolerance, an expectation ("zero" holds everywhere / "nonzero" must be
violated by exactly the predicted amount), and a metric-applicability
filter driven by the numerically measured curvature class of the metric
(flat, Ricci-flat, Einstein, non-vacuum).  Identical inputs produce a
byte-identical report apart from the timing fields.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import gauge as gauge_mod
from . import rs_operator as rso
from .errors import ConfigError
from .fields import (
    BISPINOR,
    VECTOR_BISPINOR,
    fixture_family,
    flat_rs_plane_wave,
    gamma_traceless_field,
)
from .geometry import (
    ETA,
    MetricSpec,
    Point,
    covariant_metric_derivative,
    curvature,
    eval_metric,
)
from .numerics import STENCIL_POLICY, STEP_FIRST, fd_step, parallel_map, partial4
from .spin_frame import (
    SIGMA_FLAT,
    connection_curvature_fd,
    gamma_set_at,
    spin_connection,
    spinor_commutator_curvature,
)

SCHEMA_VERSION = 1

# default tolerance bands
TOL_ALGEBRAIC = 1e-10
TOL_TRANSFORM = 1e-12
TOL_FIRST_ORDER = 1e-6
TOL_SECOND_ORDER = 1e-4
TOL_CONTRACTION = 1e-7
TOL_GAUGE_ZERO = 1e-5
TOL_GAUGE_MATCH = 1e-4
TOL_CURVCOMM_ANALYTIC = 1e-8
TOL_CURVCOMM_FD = 1e-5
TOL_EINSTEIN = 1e-5
TOL_FACTOR = 1e-6
TOL_FLAT_REDUCTION = 1e-8

#: points used by nested-stencil (second-order) checks
SECOND_ORDER_POINT_CAP = 10
FIXTURE_COUNT = 5


@dataclass
class MetricClass:
    """Numerically measured curvature class of a metric."""

    riemann_scale: float
    ricci_norm: float
    einstein_norm: float
    einstein_dev: float
    scalar: float
    christoffel_norm: float = 0.0

    @property
    def is_flat(self) -> bool:
        return self.riemann_scale < 1e-6

    @property
    def flat_cartesian(self) -> bool:
        """Flat in a chart whose connection coefficients vanish, so that
        constant-coefficient plane waves solve the system."""
        return self.is_flat and self.christoffel_norm < 1e-10

    @property
    def ricci_flat(self) -> bool:
        return self.ricci_norm <= 1e-5 * max(self.riemann_scale, 1e-3)

    @property
    def einstein_space(self) -> bool:
        return self.einstein_dev <= 1e-5 * max(self.riemann_scale, 1e-3)

    @property
    def nonvacuum(self) -> bool:
        return self.einstein_norm > 1e-3

    def describe(self) -> str:
        if self.is_flat:
            return "flat"
        if self.ricci_flat:
            return "ricci_flat"
        if self.einstein_space:
            return "einstein"
        return "generic"


@dataclass
class SuiteContext:
    spec: MetricSpec
    points: list
    seed: int
    mass: rso.MassParam
    charge: float
    met_class: MetricClass
    vb_fixtures: list
    sp_fixtures: list
    analytic_derivs: bool

    def chain_points(self):
        return self.points[:SECOND_ORDER_POINT_CAP]


@dataclass
class CheckDescriptor:
    id: str
    tag: str
    tolerance: Callable[[SuiteContext], float]
    expect: str  # "zero" | "nonzero"
    applies: Callable[[MetricClass], bool]
    runner: Callable[[SuiteContext], tuple]


@dataclass
class CheckResult:
    id: str
    tag: str
    tolerance: float
    expect: str
    points: int
    max_rel_error: float
    passed: bool
    runtime_s: float
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "tag": self.tag,
            "tolerance": self.tolerance,
            "expect": self.expect,
            "points": self.points,
            "max_rel_error": self.max_rel_error,
            "passed": self.passed,
            "runtime_s": self.runtime_s,
            "note": self.note,
        }


@dataclass
class SuiteReport:
    metric_name: str
    metric_params: dict
    config_hash: Optional[str]
    seed: int
    n_points: int
    mass: float
    charge: float
    curvature_class: str
    checks: list
    runtime_s: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "identity_suite",
            "environment": {
                "metric": self.metric_name,
                "params": dict(sorted(self.metric_params.items())),
                "config_hash": self.config_hash,
                "seed": self.seed,
                "points": self.n_points,
                "mass": self.mass,
                "charge": self.charge,
                "stencil_policy": STENCIL_POLICY,
                "curvature_class": self.curvature_class,
            },
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "runtime_s": self.runtime_s,
        }


def _rel(err, *scales) -> float:
    floor = max([1e-300] + [abs(float(s)) for s in scales])
    return float(err) / floor


def _max_over_points(ctx, points, fn) -> float:
    values = parallel_map(fn, points)
    return max(values) if values else 0.0


# ---------------------------------------------------------------------------
# check implementations
# ---------------------------------------------------------------------------


def _chk_hermiticity(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        G = spin_connection(ctx.spec, x).Gamma
        g0 = gs.gamma_flat[0]
        worst = 0.0
        for b in range(4):
            lhs = gs.gamma_up[b].conj().T
            rhs = g0 @ gs.gamma_up[b] @ g0
            worst = max(worst, _rel(np.max(np.abs(lhs - rhs)), 1.0,
                                    np.max(np.abs(gs.gamma_up))))
            herm = G[b].conj().T @ g0 + g0 @ G[b]
            worst = max(worst, _rel(np.max(np.abs(herm)), 1.0,
                                    np.max(np.abs(G))))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_covariant_constancy(ctx):
    spec = ctx.spec

    def at_point(x):
        from .geometry import christoffel

        gam = christoffel(spec, x)
        gs = gamma_set_at(spec, x)
        G = spin_connection(spec, x).Gamma

        def gup_at(c):
            return gamma_set_at(spec, Point(c, spec.chart_id)).gamma_up

        worst = 0.0
        scale = max(1.0, float(np.max(np.abs(gs.gamma_up))))
        for s in range(4):
            d = partial4(gup_at, x.coords, s, fd_step(x.coords[s], STEP_FIRST))
            for r in range(4):
                val = (
                    d[r]
                    + np.einsum("l,lij->ij", gam[r, s, :], gs.gamma_up)
                    + G[s] @ gs.gamma_up[r]
                    - gs.gamma_up[r] @ G[s]
                )
                worst = max(worst, _rel(np.max(np.abs(val)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_clifford(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        g_up = gs.metric.g_upper
        anti = np.einsum("aij,bjk->abik", gs.gamma_up, gs.gamma_up)
        anti = anti + anti.transpose(1, 0, 2, 3)
        target = 2.0 * np.einsum("ab,ij->abij", g_up, np.eye(4))
        worst = _rel(np.max(np.abs(anti - target)), 1.0, np.max(np.abs(g_up)))
        trace = np.einsum("aij,ajk->ik", gs.gamma_up, gs.gamma_down)
        worst = max(worst, _rel(np.max(np.abs(trace - 4.0 * np.eye(4))), 4.0))
        g5 = gs.gamma5
        worst = max(worst, _rel(np.max(np.abs(g5 @ g5 - np.eye(4))), 1.0))
        for a in range(4):
            worst = max(
                worst,
                _rel(np.max(np.abs(g5 @ gs.gamma_flat[a]
                                   + gs.gamma_flat[a] @ g5)), 1.0),
            )
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_sigma_tetrad(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        g_up = gs.metric.g_upper
        prod = np.einsum("aij,bjk->abik", gs.gamma_up, gs.gamma_up)
        target = (
            np.einsum("ab,ij->abij", g_up, np.eye(4)) + 2.0 * gs.sigma_curved
        )
        worst = _rel(np.max(np.abs(prod - target)), 1.0, np.max(np.abs(g_up)))
        tetrad_sigma = np.einsum(
            "abij,am,bn->mnij", SIGMA_FLAT, gs.tetrad.e_upper, gs.tetrad.e_upper
        )
        worst = max(
            worst,
            _rel(np.max(np.abs(tetrad_sigma - gs.sigma_curved)), 1.0,
                 np.max(np.abs(gs.sigma_curved))),
        )
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_triple_gamma(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        g_up = gs.metric.g_upper
        worst = 0.0
        for a in range(4):
            for b in range(4):
                for r in range(4):
                    lhs = gs.gamma_up[a] @ gs.gamma_up[b] @ gs.gamma_up[r]
                    rhs = (
                        gs.gamma_up[a] * g_up[b, r]
                        - gs.gamma_up[b] * g_up[a, r]
                        + gs.gamma_up[r] * g_up[a, b]
                        + 1j * gs.gamma5 @ np.einsum(
                            "s,sij->ij", gs.eps_upper[a, b, r], gs.gamma_down
                        )
                    )
                    worst = max(
                        worst,
                        _rel(np.max(np.abs(lhs - rhs)), 1.0,
                             np.max(np.abs(lhs))),
                    )
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_sigma_commutator(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        worst = 0.0
        for sig, g in ((SIGMA_FLAT, ETA), (gs.sigma_curved, gs.metric.g_upper)):
            comm = np.einsum("abij,mnjk->abmnik", sig, sig)
            comm = comm - comm.transpose(2, 3, 0, 1, 4, 5)
            target = (
                np.einsum("ma,nbij->abmnij", g, sig)
                - np.einsum("mb,naij->abmnij", g, sig)
                - np.einsum("na,mbij->abmnij", g, sig)
                + np.einsum("nb,maij->abmnij", g, sig)
            )
            worst = max(
                worst,
                _rel(np.max(np.abs(comm - target)), 1.0, np.max(np.abs(g))),
            )
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_commutator_curvature(ctx):
    def at_point(x):
        alg = spinor_commutator_curvature(ctx.spec, x)
        fd = connection_curvature_fd(ctx.spec, x)
        scale = max(np.max(np.abs(alg)), np.max(np.abs(fd)), 1e-3)
        return _rel(np.max(np.abs(alg - fd)), scale)

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_commutator_decomposition(ctx):
    pts = ctx.chain_points()
    worst = 0.0
    for fld in ctx.vb_fixtures[:3]:
        def at_point(x, fld=fld):
            lhs, rhs = rso.commutator_decomposition(fld, ctx.spec, x)
            scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)),
                        np.max(np.abs(fld(x))))
            return _rel(np.max(np.abs(lhs - rhs)), scale)

        worst = max(worst, _max_over_points(ctx, pts, at_point))
    return len(pts), worst


def _chk_sigma_ricci_contraction(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        bundle = curvature(ctx.spec, x)
        lhs = -0.5 * np.einsum(
            "aij,mnjk,mnab->bik", gs.gamma_up, gs.sigma_curved,
            bundle.riemann_lower,
        )
        rhs = -0.5 * np.einsum("nij,nb->bij", gs.gamma_up, bundle.ricci)
        scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)),
                    ctx.met_class.riemann_scale, 1e-3)
        return _rel(np.max(np.abs(lhs - rhs)), scale)

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_curvature_bridge(ctx):
    pts = ctx.chain_points()
    worst = 0.0
    for fld in ctx.vb_fixtures[:3]:
        def at_point(x, fld=fld):
            lhs, rhs = rso.curvature_bridge(fld, ctx.spec, x)
            scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)),
                        np.max(np.abs(fld(x))))
            return _rel(np.max(np.abs(lhs - rhs)), scale)

        worst = max(worst, _max_over_points(ctx, pts, at_point))
    return len(pts), worst


def _chk_gamma_contraction(ctx):
    worst = 0.0
    for fld in ctx.vb_fixtures:
        def at_point(x, fld=fld):
            lhs, rhs = rso.contraction_identity(
                fld, ctx.spec, x, ctx.mass, charge=ctx.charge
            )
            scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)),
                        np.max(np.abs(fld(x))))
            return _rel(np.max(np.abs(lhs - rhs)), scale)

        worst = max(worst, _max_over_points(ctx, ctx.points, at_point))
    return len(ctx.points), worst


def _chk_divergence_form(ctx):
    waves = [flat_rs_plane_wave(ctx.mass.m or 1.0, boost)
             for boost in (0.0, 0.4)]
    mass = rso.MassParam(ctx.mass.m or 1.0)

    def at_point(x):
        worst = 0.0
        for w in waves:
            gs = gamma_set_at(ctx.spec, x)
            res = rso.rs_residual(w, ctx.spec, x, mass)
            lhs = np.einsum("sij,sj->i", gs.gamma_up, res)
            chi = rso.divergence_combo(w, ctx.spec, x, mass)
            scale = max(float(np.max(np.abs(w(x)))), 1e-6)
            worst = max(worst, _rel(np.max(np.abs(lhs)), scale),
                        _rel(np.max(np.abs(chi)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_derivative_chain(ctx):
    pts = ctx.chain_points()
    worst = 0.0
    for fld in ctx.vb_fixtures:
        def at_point(x, fld=fld):
            lhs, rhs = rso.derivative_chain_check(
                fld, ctx.spec, x, ctx.mass, charge=ctx.charge
            )
            scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)),
                        np.max(np.abs(fld(x))))
            return _rel(np.max(np.abs(lhs - rhs)), scale)

        worst = max(worst, _max_over_points(ctx, pts, at_point))
    return len(pts), worst


def _chk_constraint_reduction(ctx):
    def at_point(x):
        worst = 0.0
        for fld in ctx.vb_fixtures[:3]:
            rhs_chain = rso.chain_rhs_algebraic(
                fld, ctx.spec, x, ctx.mass, charge=ctx.charge
            )
            c2 = rso.constraint_two_residual(
                fld, ctx.spec, x, ctx.mass, charge=ctx.charge
            )
            scale = max(np.max(np.abs(rhs_chain)), np.max(np.abs(c2)),
                        np.max(np.abs(fld(x))))
            worst = max(worst, _rel(np.max(np.abs(rhs_chain - c2)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_flat_reduction(ctx):
    waves = [flat_rs_plane_wave(ctx.mass.m or 1.0, boost)
             for boost in (0.0, 0.3, 0.8)]
    mass = rso.MassParam(ctx.mass.m or 1.0)
    worst = 0.0
    for w in waves:
        rep = rso.flat_reduction_check(w, mass, ctx.points)
        scale = max(rep["scale"], 1e-6)
        worst = max(worst, rep["max_rs_residual"] / scale,
                    rep["max_match_error"] / scale)
        if not rep["constraints_satisfied"]:
            worst = max(worst, 1.0)
    return len(ctx.points), worst


def _chk_vacuum_constraint(ctx):
    def gamma_pair(p):
        gs = gamma_set_at(ctx.spec, p)
        return gs.gamma_down, gs.gamma_up

    fields = [
        gamma_traceless_field(ctx.seed * 7 + i, gamma_pair,
                              box=ctx.spec.sample_box)
        for i in range(2)
    ]

    def at_point(x):
        worst = 0.0
        for fld in fields:
            c2 = rso.constraint_two_residual(
                fld, ctx.spec, x, ctx.mass, charge=ctx.charge
            )
            scale = max(float(np.max(np.abs(fld(x)))), 1e-6) * max(
                1.0, abs(ctx.mass.kappa) ** 2
            )
            worst = max(worst, _rel(np.max(np.abs(c2)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_einstein_space(ctx):
    def at_point(x):
        bundle = curvature(ctx.spec, x)
        g = eval_metric(ctx.spec, x).g_lower
        dev = bundle.ricci - bundle.scalar / 4.0 * g
        return _rel(np.max(np.abs(dev)), np.max(np.abs(bundle.ricci)), 1e-3)

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_einstein_factor(ctx):
    def at_point(x):
        worst = 0.0
        vacuous = 0
        for fld in ctx.vb_fixtures[:3]:
            gs = gamma_set_at(ctx.spec, x)
            psi = fld(x)
            phi = np.einsum("rij,rj->i", gs.gamma_up, psi)
            if np.max(np.abs(phi)) < 1e-8 * max(np.max(np.abs(psi)), 1e-30):
                vacuous += 1
                continue
            c2 = rso.constraint_two_residual(fld, ctx.spec, x, ctx.mass,
                                             charge=ctx.charge)
            factor = rso.einstein_space_factor(ctx.spec, x, ctx.mass)
            scale = max(np.max(np.abs(c2)), abs(factor) * np.max(np.abs(phi)),
                        np.max(np.abs(phi)))
            worst = max(worst, _rel(np.max(np.abs(c2 - factor * phi)), scale))
        return worst, vacuous

    outcomes = parallel_map(at_point, ctx.points)
    err = max((o[0] for o in outcomes), default=0.0)
    skipped = sum(o[1] for o in outcomes)
    return len(ctx.points), err, f"vacuous_points={skipped}"


def _term_by_term_residual(fld, spec, x, mass, charge):
    """Independent evaluation of the wave equation, term by term."""
    gs = gamma_set_at(spec, x)
    d = rso.covariant_derivative(fld, spec, x, charge=charge)
    psi = fld(x)
    gu, g_up = gs.gamma_up, gs.metric.g_upper
    t1 = np.einsum("aij,asj->si", gu, d) + mass.kappa * psi
    t2 = -(1.0 / 3.0) * (
        np.einsum("bij,sbj->si", gu, d)
        + np.einsum("sij,nb,nbj->si", gs.gamma_down, g_up, d)
    )
    inner = np.einsum("aij,bjk,abk->i", gu, gu, d) - mass.kappa * np.einsum(
        "bij,bj->i", gu, psi
    )
    t3 = (1.0 / 3.0) * np.einsum("sij,j->si", gs.gamma_down, inner)
    return t1 + t2 + t3


def _chk_operator_form(ctx):
    worst = 0.0
    for fld in ctx.vb_fixtures:
        def at_point(x, fld=fld):
            blocks = rso.rs_residual(fld, ctx.spec, x, ctx.mass,
                                     charge=ctx.charge)
            terms = _term_by_term_residual(fld, ctx.spec, x, ctx.mass,
                                           ctx.charge)
            scale = max(np.max(np.abs(blocks)), np.max(np.abs(terms)),
                        np.max(np.abs(fld(x))))
            return _rel(np.max(np.abs(blocks - terms)), scale)

        worst = max(worst, _max_over_points(ctx, ctx.points, at_point))
    return len(ctx.points), worst


def _chk_block_assembly(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        alphas, beta = rso.build_alpha_beta(gs)
        trace = sum(beta.blocks[r, r] for r in range(4))
        worst = _rel(np.max(np.abs(trace - (8.0 / 3.0) * np.eye(4))), 1.0)
        prod_blocks = (alphas[0] @ beta).to_dense()
        prod_dense = alphas[0].to_dense() @ beta.to_dense()
        worst = max(worst, _rel(np.max(np.abs(prod_blocks - prod_dense)),
                                np.max(np.abs(prod_dense)), 1.0))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


_GENERIC_ABC = (0.25, -0.125, 0.7)  # a + b + 4ab = 0


def _chk_transform_stages(ctx):
    a, b, c = _GENERIC_ABC

    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        alphas, beta = rso.build_alpha_beta(gs)
        tr = rso.transform_CS(alphas, beta, gs, a, b, c)
        bp, ap, _, _ = rso.transform_printed(gs, a, b, c)
        worst = _rel(np.max(np.abs(tr.beta_prime.blocks - bp.blocks)), 1.0)
        for nu in range(4):
            worst = max(worst, _rel(
                np.max(np.abs(tr.alpha_prime[nu].blocks - ap[nu].blocks)),
                ap[nu].max_abs(), 1.0))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_s_inverse(ctx):
    pairs = [(-1.0 / 3.0, -1.0), (0.25, -0.125), (1.0, -0.2)]

    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        eye = rso.BlockMatrix16.identity()
        worst = 0.0
        for a, b in pairs:
            s = rso.gamma_pair_block(gs, a)
            s_inv = rso.gamma_pair_block(gs, b)
            worst = max(worst, _rel((s @ s_inv - eye).max_abs(), 1.0))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_transform_expansion(ctx):
    a, b, c = _GENERIC_ABC

    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        alphas, beta = rso.build_alpha_beta(gs)
        tr = rso.transform_CS(alphas, beta, gs, a, b, c)
        _, _, bt, at_ = rso.transform_printed(gs, a, b, c)
        worst = _rel(np.max(np.abs(tr.beta_tilde.blocks - bt.blocks)), 1.0)
        for nu in range(4):
            worst = max(worst, _rel(
                np.max(np.abs(tr.alpha_tilde[nu].blocks - at_[nu].blocks)),
                at_[nu].max_abs(), 1.0))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_tilde_closed_form(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        alphas, beta = rso.build_alpha_beta(gs)
        tr = rso.transform_CS(alphas, beta, gs, -1.0 / 3.0, -1.0, 2.0)
        alpha_t, beta_t = rso.tilde_closed_form(gs)
        worst = _rel(np.max(np.abs(tr.beta_tilde.blocks - beta_t.blocks)), 1.0)
        for nu in range(4):
            worst = max(worst, _rel(
                np.max(np.abs(tr.alpha_tilde[nu].blocks - alpha_t[nu].blocks)),
                alpha_t[nu].max_abs(), 1.0))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_beta_dual_forms(ctx):
    def at_point(x):
        gs = gamma_set_at(ctx.spec, x)
        _, beta_t = rso.tilde_closed_form(gs)
        eps_form = rso.beta_tilde_eps_form(gs)
        return _rel(np.max(np.abs(beta_t.blocks - eps_form.blocks)),
                    beta_t.max_abs(), 1.0)

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_massless_gradient(ctx):
    def at_point(x):
        worst = 0.0
        for psi in ctx.sp_fixtures:
            direct = gauge_mod.massless_residual(
                gauge_mod.gradient_sampler(psi, ctx.spec, nested=True),
                ctx.spec, x, outer=True,
            )
            scale = gauge_mod.residual_scale(psi, ctx.spec, x)
            worst = max(worst, _rel(np.max(np.abs(direct)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_gauge_criterion_nonzero(ctx):
    def at_point(x):
        worst = 0.0
        for psi in ctx.sp_fixtures:
            direct, predicted = gauge_mod.gauge_criterion(psi, ctx.spec, x)
            pred_norm = float(np.max(np.abs(predicted)))
            if pred_norm < 1e-10:
                worst = max(worst, 1.0)  # expected a nonzero obstruction
                continue
            worst = max(worst, _rel(np.max(np.abs(direct - predicted)),
                                    pred_norm))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_eps_determinant(ctx):
    def at_point(x):
        rep = gauge_mod.epsilon_contraction_check(ctx.spec, x)
        raw = rep["raw"]
        det = rep["det_expanded"]
        eins = rep["einstein_combination"]
        scale = max(np.max(np.abs(raw)), np.max(np.abs(det)),
                    ctx.met_class.riemann_scale, 1e-3)
        worst = _rel(np.max(np.abs(raw - rep["sign"] * det)), scale)
        worst = max(worst, _rel(np.max(np.abs(raw - eins)), scale))
        return worst

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _chk_metric_compatibility(ctx):
    def at_point(x):
        dev = covariant_metric_derivative(ctx.spec, x)
        g = eval_metric(ctx.spec, x).g_lower
        return _rel(np.max(np.abs(dev)), np.max(np.abs(g)), 1.0)

    return len(ctx.points), _max_over_points(ctx, ctx.points, at_point)


def _curvcomm_tol(ctx):
    return TOL_CURVCOMM_ANALYTIC if ctx.analytic_derivs else TOL_CURVCOMM_FD


def _const(v):
    return lambda ctx: v


REGISTRY = [
    CheckDescriptor("eq_1_2a_operator_form", "1.2a", _const(1e-9), "zero",
                    lambda mc: True, _chk_operator_form),
    CheckDescriptor("eq_1_3_hermiticity", "1.3", _const(TOL_ALGEBRAIC), "zero",
                    lambda mc: True, _chk_hermiticity),
    CheckDescriptor("eq_1_4_covariant_constancy", "1.4",
                    _const(TOL_FIRST_ORDER), "zero",
                    lambda mc: True, _chk_covariant_constancy),
    CheckDescriptor("eq_1_5_clifford", "1.5", _const(TOL_ALGEBRAIC), "zero",
                    lambda mc: True, _chk_clifford),
    CheckDescriptor("eq_1_5_sigma_split", "1.5", _const(TOL_ALGEBRAIC), "zero",
                    lambda mc: True, _chk_sigma_tetrad),
    CheckDescriptor("eq_1_5_triple_gamma", "1.5", _const(TOL_ALGEBRAIC),
                    "zero", lambda mc: True, _chk_triple_gamma),
    CheckDescriptor("sigma_commutator", "1.8", _const(TOL_ALGEBRAIC), "zero",
                    lambda mc: True, _chk_sigma_commutator),
    CheckDescriptor("eq_1_8e_commutator_curvature", "1.8", _curvcomm_tol,
                    "zero", lambda mc: True, _chk_commutator_curvature),
    CheckDescriptor("eq_1_9_commutator_decomposition", "1.9",
                    _const(TOL_SECOND_ORDER), "zero",
                    lambda mc: True, _chk_commutator_decomposition),
    CheckDescriptor("eq_1_10b_sigma_ricci", "1.10", _const(TOL_FIRST_ORDER),
                    "zero", lambda mc: True, _chk_sigma_ricci_contraction),
    CheckDescriptor("eq_1_10c_curvature_bridge", "1.10",
                    _const(TOL_SECOND_ORDER), "zero",
                    lambda mc: True, _chk_curvature_bridge),
    CheckDescriptor("eq_1_6_gamma_contraction", "1.6",
                    _const(TOL_CONTRACTION), "zero",
                    lambda mc: True, _chk_gamma_contraction),
    CheckDescriptor("eq_1_11b_divergence_form", "1.11b",
                    _const(TOL_FLAT_REDUCTION), "zero",
                    lambda mc: mc.flat_cartesian, _chk_divergence_form),
    CheckDescriptor("eq_1_7_derivative_chain", "1.7",
                    _const(TOL_SECOND_ORDER), "zero",
                    lambda mc: True, _chk_derivative_chain),
    CheckDescriptor("eq_1_11a_constraint_reduction", "1.11a",
                    _const(TOL_FIRST_ORDER), "zero",
                    lambda mc: True, _chk_constraint_reduction),
    CheckDescriptor("eq_1_12_flat_reduction", "1.12",
                    _const(TOL_FLAT_REDUCTION), "zero",
                    lambda mc: mc.flat_cartesian, _chk_flat_reduction),
    CheckDescriptor("eq_1_13_vacuum_constraint", "1.13",
                    _const(TOL_FIRST_ORDER), "zero",
                    lambda mc: mc.ricci_flat, _chk_vacuum_constraint),
    CheckDescriptor("eq_1_14a_einstein_space", "1.14", _const(TOL_EINSTEIN),
                    "zero",
                    lambda mc: (mc.einstein_space and not mc.is_flat
                                and not mc.ricci_flat),
                    _chk_einstein_space),
    CheckDescriptor("eq_1_14b_constraint_factor", "1.14", _const(TOL_FACTOR),
                    "zero",
                    lambda mc: (mc.einstein_space and not mc.ricci_flat
                                and abs(mc.scalar) > 0.1),
                    _chk_einstein_factor),
    CheckDescriptor("eq_2_2_block_assembly", "2.2", _const(TOL_ALGEBRAIC),
                    "zero", lambda mc: True, _chk_block_assembly),
    CheckDescriptor("eq_2_3_transform_stages", "2.3", _const(TOL_TRANSFORM),
                    "zero", lambda mc: True, _chk_transform_stages),
    CheckDescriptor("eq_2_4_s_inverse", "2.4", _const(TOL_TRANSFORM), "zero",
                    lambda mc: True, _chk_s_inverse),
    CheckDescriptor("eq_2_5_transform_expansion", "2.5", _const(TOL_TRANSFORM),
                    "zero", lambda mc: True, _chk_transform_expansion),
    CheckDescriptor("eq_2_6_tilde_closed_form", "2.6", _const(TOL_TRANSFORM),
                    "zero", lambda mc: True, _chk_tilde_closed_form),
    CheckDescriptor("eq_2_6c_beta_dual_forms", "2.6c", _const(TOL_TRANSFORM),
                    "zero", lambda mc: True, _chk_beta_dual_forms),
    CheckDescriptor("eq_2_7b_massless_gradient", "2.7b",
                    _const(TOL_GAUGE_ZERO), "zero",
                    lambda mc: mc.ricci_flat, _chk_massless_gradient),
    CheckDescriptor("eq_2_8c_gauge_criterion", "2.8c",
                    _const(TOL_GAUGE_MATCH), "nonzero",
                    lambda mc: mc.nonvacuum, _chk_gauge_criterion_nonzero),
    CheckDescriptor("eps_determinant_contraction", "2.8b", _curvcomm_tol,
                    "zero", lambda mc: True, _chk_eps_determinant),
    CheckDescriptor("metric_compatibility", "1.8", _const(TOL_FIRST_ORDER),
                    "zero", lambda mc: True, _chk_metric_compatibility),
]


def sample_points(spec: MetricSpec, n: int, seed: int) -> list:
    """Deterministic points inside the spec's sampling box."""
    if spec.sample_box is None:
        raise ConfigError(
            f"metric '{spec.name}' has no sampling box; add a [sampling] "
            "section to the configuration"
        )
    rng = np.random.default_rng(seed)
    box = np.asarray(spec.sample_box, dtype=float)
    pts = []
    while len(pts) < n:
        coords = rng.uniform(box[:, 0], box[:, 1])
        p = Point(coords, spec.chart_id)
        if spec.contains(p):
            pts.append(p)
    return pts


def classify_metric(spec: MetricSpec, points) -> MetricClass:
    riemann_scale = ricci = einstein = dev = gam_norm = 0.0
    scalar = 0.0
    for x in points:
        b = curvature(spec, x)
        g = eval_metric(spec, x).g_lower
        riemann_scale = max(riemann_scale, float(np.max(np.abs(b.riemann_lower))))
        ricci = max(ricci, float(np.max(np.abs(b.ricci))))
        einstein = max(einstein, float(np.max(np.abs(b.einstein))))
        dev = max(dev, float(np.max(np.abs(b.ricci - b.scalar / 4.0 * g))))
        gam_norm = max(gam_norm, float(np.max(np.abs(b.christoffel))))
        scalar = b.scalar
    return MetricClass(riemann_scale, ricci, einstein, dev, scalar, gam_norm)


def run_suite(
    spec: MetricSpec,
    n_points: int = 20,
    seed: int = 42,
    mass: float = 1.0,
    charge: float = 0.0,
    tolerance_overrides: Optional[dict] = None,
) -> SuiteReport:
    """Execute every applicable registered check and aggregate the report.

    Check failures are recorded, not raised; infrastructure errors
    propagate with context.
    """
    if n_points < 1:
        raise ConfigError("points must be >= 1")
    t0 = time.perf_counter()
    points = sample_points(spec, n_points, seed)
    class_points = points[: min(6, len(points))]
    met_class = classify_metric(spec, class_points)
    ctx = SuiteContext(
        spec=spec,
        points=points,
        seed=seed,
        mass=rso.MassParam(mass),
        charge=charge,
        met_class=met_class,
        vb_fixtures=fixture_family(seed + 1, FIXTURE_COUNT, VECTOR_BISPINOR,
                                   spec.sample_box),
        sp_fixtures=fixture_family(seed + 2, 3, BISPINOR, spec.sample_box),
        analytic_derivs=spec.deriv_fn is not None,
    )
    overrides = tolerance_overrides or {}
    results = []
    for desc in REGISTRY:
        if not desc.applies(met_class):
            continue
        tol = float(overrides.get(desc.id, desc.tolerance(ctx)))
        t_check = time.perf_counter()
        out = desc.runner(ctx)
        npts, err = out[0], out[1]
        note = out[2] if len(out) > 2 else ""
        results.append(
            CheckResult(
                id=desc.id,
                tag=desc.tag,
                tolerance=tol,
                expect=desc.expect,
                points=npts,
                max_rel_error=float(err),
                passed=bool(err <= tol),
                runtime_s=round(time.perf_counter() - t_check, 6),
                note=note,
            )
        )
    config_hash = None
    if spec.chart_id.startswith("config:"):
        config_hash = spec.chart_id.split(":", 1)[1]
    return SuiteReport(
        metric_name=spec.name,
        metric_params=dict(spec.params),
        config_hash=config_hash,
        seed=seed,
        n_points=n_points,
        mass=mass,
        charge=charge,
        curvature_class=met_class.describe(),
        checks=results,
        runtime_s=round(time.perf_counter() - t0, 6),
    )


def coverage_tags() -> set:
    """All equation tags carried by registered checks."""
    return {d.tag for d in REGISTRY}
