"""Closed-form field samplers and the fixture catalog.

A sampler wraps a smooth map from chart points to a vector-bispinor
(a (4, 4) complex array indexed [vector, spinor]) or to a bispinor
(a (4,) complex array).  Fixture families are polynomial and trigonometric
fields with seeded coefficients; a fixed seed gives a bit-identical field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import ETA, Point
from .numerics import STEP_FIRST, fd_step
from .spin_frame import GAMMA_FLAT

VECTOR_BISPINOR = "vector_bispinor"
BISPINOR = "bispinor"

_SHAPES = {VECTOR_BISPINOR: (4, 4), BISPINOR: (4,)}


@dataclass
class FieldSampler:
    """A smooth closed-form field; stateless, safe to call concurrently."""

    fn: Callable[[Point], np.ndarray]
    kind: str
    name: str = "field"

    def __call__(self, x: Point) -> np.ndarray:
        value = np.asarray(self.fn(x), dtype=complex)
        if value.shape != _SHAPES[self.kind]:
            raise ValueError(
                f"sampler '{self.name}' returned shape {value.shape}, "
                f"expected {_SHAPES[self.kind]}"
            )
        return value

    def shape(self):
        return _SHAPES[self.kind]


def check_smoothness(sampler: FieldSampler, points, min_ratio: float = 3.0):
    """Second-order convergence probe: halving the step must shrink the
    difference between central-difference levels by roughly 4x.

    Returns the worst observed shrink ratio; raises ValueError if it drops
    below ``min_ratio`` (a sampler that is not C^2 at the probe points).
    """
    worst = np.inf
    for x in points:
        for mu in range(4):
            h = fd_step(x.coords[mu], 100 * STEP_FIRST)

            def diff(hh):
                return (
                    sampler(x.shifted(mu, hh)) - sampler(x.shifted(mu, -hh))
                ) / (2 * hh)

            d1, d2, d4 = diff(h), diff(h / 2), diff(h / 4)
            coarse = float(np.max(np.abs(d1 - d2)))
            fine = float(np.max(np.abs(d2 - d4)))
            if coarse < 1e-12:  # derivative is exact (constant/linear field)
                continue
            ratio = coarse / max(fine, 1e-300)
            worst = min(worst, ratio)
    if worst < min_ratio:
        raise ValueError(
            f"sampler '{sampler.name}' does not converge at 2nd order "
            f"(shrink ratio {worst:.2f})"
        )
    return worst


def _box_frame(box):
    """Center and half-width per coordinate, for conditioning polynomials."""
    if box is None:
        return np.zeros(4), np.ones(4)
    box = np.asarray(box, dtype=float)
    center = 0.5 * (box[:, 0] + box[:, 1])
    half = np.maximum(0.5 * (box[:, 1] - box[:, 0]), 1e-6)
    return center, half


def _complex_normal(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def polynomial_field(seed: int, kind: str = VECTOR_BISPINOR, box=None,
                     degree: int = 2) -> FieldSampler:
    """Quadratic (by default) polynomial field with seeded coefficients."""
    rng = np.random.default_rng(seed)
    center, half = _box_frame(box)
    base = _SHAPES[kind]
    c0 = _complex_normal(rng, base)
    c1 = _complex_normal(rng, (4,) + base, 0.5) if degree >= 1 else 0
    c2 = _complex_normal(rng, (4, 4) + base, 0.25) if degree >= 2 else 0
    if degree >= 2:
        c2 = 0.5 * (c2 + np.swapaxes(c2, 0, 1))

    def fn(x: Point):
        u = (x.coords - center) / half
        value = c0.copy()
        if degree >= 1:
            value = value + np.tensordot(u, c1, axes=(0, 0))
        if degree >= 2:
            value = value + np.tensordot(
                u, np.tensordot(u, c2, axes=(0, 0)), axes=(0, 0)
            )
        return value

    return FieldSampler(fn, kind, name=f"poly{degree}[{seed}]")


def trig_field(seed: int, kind: str = VECTOR_BISPINOR, box=None) -> FieldSampler:
    """Sine/cosine field; wavenumbers scaled to the sampling box."""
    rng = np.random.default_rng(seed)
    center, half = _box_frame(box)
    base = _SHAPES[kind]
    u1 = _complex_normal(rng, base)
    u2 = _complex_normal(rng, base)
    k1 = rng.uniform(0.3, 1.2, size=4) / half
    k2 = rng.uniform(0.3, 1.2, size=4) / half

    def fn(x: Point):
        w = x.coords - center
        return u1 * np.cos(k1 @ w) + u2 * np.sin(k2 @ w)

    return FieldSampler(fn, kind, name=f"trig[{seed}]")


def constant_field(values, kind: str = VECTOR_BISPINOR) -> FieldSampler:
    values = np.asarray(values, dtype=complex)

    def fn(x: Point):
        return values

    return FieldSampler(fn, kind, name="constant")


def plane_wave(k, amplitude, kind: str = VECTOR_BISPINOR) -> FieldSampler:
    """amplitude * exp(i k_a x^a); ``k`` is the covector k_a."""
    k = np.asarray(k, dtype=float)
    amplitude = np.asarray(amplitude, dtype=complex)

    def fn(x: Point):
        return amplitude * np.exp(1j * (k @ x.coords))

    return FieldSampler(fn, kind, name="plane_wave")


def gamma_traceless_field(seed: int, gamma_pair, box=None) -> FieldSampler:
    """A smooth vector-bispinor with gamma^be(x) Psi_be = 0 pointwise.

    Projects a seeded polynomial field: Psi_be = L_be - (1/4) gamma_be(x)
    gamma^s(x) L_s.  ``gamma_pair`` maps a point to the pair
    (gamma_al(x), gamma^al(x)) of position-dependent matrices.
    """
    raw = polynomial_field(seed, VECTOR_BISPINOR, box)

    def fn(x: Point):
        lam = raw(x)
        gdn, gup = gamma_pair(x)
        trace = np.einsum("sij,sj->i", gup, lam)
        return lam - 0.25 * np.einsum("bij,j->bi", gdn, trace)

    return FieldSampler(fn, VECTOR_BISPINOR, name=f"traceless[{seed}]")


def fixture_family(seed: int, count: int, kind: str = VECTOR_BISPINOR,
                   box=None) -> list:
    """Deterministic list of smooth fixtures, alternating families."""
    out = []
    for i in range(count):
        sub = seed * 1000 + i
        if i % 2 == 0:
            out.append(polynomial_field(sub, kind, box))
        else:
            out.append(trig_field(sub, kind, box))
    return out


# ---------------------------------------------------------------------------
# flat-space plane-wave solutions
# ---------------------------------------------------------------------------


def _null_space(a: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Columns spanning ker(a), via SVD."""
    u, s, vh = np.linalg.svd(a)
    cutoff = rtol * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def dirac_plane_wave_spinor(k, kappa) -> np.ndarray:
    """A spinor u with (i gamma^a k_a + kappa) u = 0; k_a is the covector."""
    k = np.asarray(k, dtype=float)
    kslash = np.einsum("a,aij->ij", k, GAMMA_FLAT)
    ns = _null_space(1j * kslash + kappa * np.eye(4))
    if ns.shape[1] == 0:
        raise ValueError(f"no Dirac plane-wave spinor for k={k}, kappa={kappa}")
    return ns[:, 0]


def flat_rs_plane_wave(mass: float, boost: float = 0.0) -> FieldSampler:
    """A plane-wave solution of the full flat-space system.

    Builds Psi_c = eps_c u exp(i k.x) with (i gamma k + kappa) u = 0,
    k^a eps_a = 0 and gamma^a eps_a u = 0, with k on the mass shell
    (k = (omega, 0, 0, k3), omega^2 - k3^2 = mass^2).
    """
    omega = np.hypot(mass, boost)
    k = np.array([omega, 0.0, 0.0, boost])
    kappa = 1j * mass
    u = dirac_plane_wave_spinor(k, kappa)
    # stack the 4 spinor rows of eps -> gamma^a eps_a u and the row k^a eps_a
    rows = [np.array([GAMMA_FLAT[a][i] @ u for a in range(4)]) for i in range(4)]
    rows.append((ETA @ k).astype(complex))
    ns = _null_space(np.array(rows))
    if ns.shape[1] == 0:
        raise ValueError(f"no constrained polarization for mass={mass}")
    eps = ns[:, 0]
    amplitude = np.einsum("b,i->bi", eps, u)
    return plane_wave(k, amplitude, VECTOR_BISPINOR)
