"""Exceptional points, winding numbers and the complex Berry phase.

Non-reciprocal chain
    The real d-point ``(dR_x, dR_y)`` moves on a circle of radius ``t2``
    about ``(t1, 0)`` while the two exceptional points ``(dI_y, -dI_x)`` and
    ``(-dI_y, dI_x)`` move on circles of radius ``|delta2|`` about
    ``(-delta1, 0)`` and ``(delta1, 0)``.  ``nu`` is half the sum of how
    often the d-point encircles each of them.

Imaginary-potential chain
    Exceptional points form the circle ``|dR| = u``.  ``nu'`` is the
    fraction of that circle enclosed by the d-curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BandTouchingError, TransitionLineError
from .model import ModelKind, ModelParams, bloch_stack, d_components, dispersion, k_grid

TRANSITION_TOL = 1e-9
RESIDUE_TOL = 0.05
DEFAULT_NK = 4096
BAND_TOUCH_TOL = 1e-6


def _require(params: ModelParams, kind: ModelKind):
    if params.kind is not kind:
        raise ValueError(f"operation needs a {kind.value} model, got {params.kind.value}")


def _winding(z: np.ndarray) -> float:
    """Winding of a closed sampled loop about the origin (unrounded).

    Sum of principal-value phase increments, including the closing step.
    """
    phase = np.angle(z)
    steps = np.diff(np.append(phase, phase[0]))
    steps = (steps + np.pi) % (2.0 * np.pi) - np.pi
    return float(steps.sum() / (2.0 * np.pi))


# --------------------------------------------------------------------------
# exceptional points


@dataclass(frozen=True)
class EpGeometryH1:
    ep_center_1: tuple[float, float]
    ep_center_2: tuple[float, float]
    ep_radius: float
    d_center: tuple[float, float]
    d_radius: float
    eigvec_coalesce_at_pi: bool
    eigvec_coalesce_at_0: bool
    imag_energy_vanishes: bool


def ep_geometry_h1(params: ModelParams, tol: float = TRANSITION_TOL) -> EpGeometryH1:
    """Circle picture of the non-reciprocal chain's exceptional points.

    ``eigvec_coalesce_at_pi``: ``|delta1 - delta2| = t1 + t2``;
    ``eigvec_coalesce_at_0``: ``|delta1 + delta2| = |t1 - t2|``;
    ``imag_energy_vanishes``: ``t1 / t2 = -delta1 / delta2`` (checked in
    cross-multiplied form so ``delta2 = 0`` is allowed).
    """
    _require(params, ModelKind.NON_RECIPROCAL)
    p = params
    return EpGeometryH1(
        ep_center_1=(-p.delta1, 0.0),
        ep_center_2=(p.delta1, 0.0),
        ep_radius=abs(p.delta2),
        d_center=(p.t1, 0.0),
        d_radius=abs(p.t2),
        eigvec_coalesce_at_pi=abs(abs(p.delta1 - p.delta2) - (p.t1 + p.t2)) < tol,
        eigvec_coalesce_at_0=abs(abs(p.delta1 + p.delta2) - abs(p.t1 - p.t2)) < tol,
        imag_energy_vanishes=abs(p.t1 * p.delta2 + p.t2 * p.delta1) < tol,
    )


@dataclass(frozen=True)
class EpCircleH2:
    radius: float
    d_center: tuple[float, float]
    d_radius: float

    def is_exceptional(self, k: float, tol: float = TRANSITION_TOL) -> bool:
        """Whether the d-point at momentum ``k`` lies on the exceptional circle."""
        x = self.d_center[0] + self.d_radius * math.cos(k)
        y = self.d_radius * math.sin(k)
        return abs(math.hypot(x, y) - self.radius) < tol


def ep_circle_h2(params: ModelParams) -> EpCircleH2:
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    return EpCircleH2(abs(params.u), (params.t1, 0.0), abs(params.t2))


# --------------------------------------------------------------------------
# winding of the non-reciprocal chain


@dataclass(frozen=True)
class WindingResult:
    """``nu = (nu1 + nu2) / 2``.

    ``nu1`` and ``nu2`` count how many times the d-point encircles each
    exceptional point, irrespective of orientation; the signed windings
    are kept in ``signed``.
    """

    nu: float
    nu1: float
    nu2: float
    n_k: int
    signed: tuple[int, int] = (0, 0)
    residue: float = 0.0
    reliable: bool = True
    flags: tuple[str, ...] = field(default_factory=tuple)


def _ep_relative_loops(params: ModelParams, ks: np.ndarray):
    """Vectors from each exceptional point to the real d-point, as complex numbers."""
    d_r, d_i = d_components(params, ks)
    to_ep1 = (d_r[0] - d_i[1]) + 1j * (d_r[1] + d_i[0])
    to_ep2 = (d_r[0] + d_i[1]) + 1j * (d_r[1] - d_i[0])
    return to_ep1, to_ep2


def winding_nu(params: ModelParams, n_k: int = DEFAULT_NK) -> WindingResult:
    """Numerical winding number of the non-reciprocal chain.

    Raises
    ------
    TransitionLineError
        If on some sampled momentum the d-point comes within ``1e-9`` of an
        exceptional point.
    """
    _require(params, ModelKind.NON_RECIPROCAL)
    if n_k < 1000:
        raise ValueError("winding_nu needs n_k >= 1000")
    loop1, loop2 = _ep_relative_loops(params, k_grid(n_k))
    closest = min(np.abs(loop1).min(), np.abs(loop2).min())
    if closest < TRANSITION_TOL:
        raise TransitionLineError(
            f"d-point passes within {closest:.2e} of an exceptional point; perturb the parameters"
        )
    raw = (_winding(loop1), _winding(loop2))
    rounded = tuple(int(round(w)) for w in raw)
    residue = max(abs(w - r) for w, r in zip(raw, rounded))
    reliable = residue < RESIDUE_TOL
    nu1, nu2 = (float(abs(r)) for r in rounded)
    flags = () if reliable else ("unreliable",)
    return WindingResult((nu1 + nu2) / 2.0, nu1, nu2, n_k, rounded, residue, reliable, flags)


def winding_nu_oracle(params: ModelParams, tol: float = 1e-12) -> float:
    """Closed-form ``nu`` from the circle geometry; ``nan`` on a phase boundary.

    The vector from the first exceptional point to the d-point traces a
    circle of radius ``|t2 - delta2|`` about ``(t1 + delta1, 0)``; the
    second one a circle of radius ``|t2 + delta2|`` about
    ``(t1 - delta1, 0)``.  Each encloses the origin iff its radius exceeds
    the distance of its centre.
    """
    _require(params, ModelKind.NON_RECIPROCAL)
    p = params
    pairs = ((abs(p.t2 - p.delta2), abs(p.t1 + p.delta1)),
             (abs(p.t2 + p.delta2), abs(p.t1 - p.delta1)))
    if any(abs(r - c) <= tol for r, c in pairs):
        return math.nan
    return 0.5 * sum(1.0 for r, c in pairs if r > c)


def phi_imag_closure(params: ModelParams, n_k: int = DEFAULT_NK) -> float:
    """Closed integral of the k-derivative of the imaginary complex angle.

    ``phi_I = -1/2 ln |d+ / d-|``; its derivative is evaluated from the
    analytic k-derivative of the d-vector and integrated with the periodic
    trapezoidal rule.
    """
    _require(params, ModelKind.NON_RECIPROCAL)
    p = params
    ks = k_grid(n_k)
    d_r, d_i = d_components(params, ks)
    c, s = np.cos(ks), np.sin(ks)
    dr_x, dr_y = -p.t2 * s, p.t2 * c
    di_x, di_y = -p.delta2 * c, -p.delta2 * s
    d_plus = (d_r[0] - d_i[1]) + 1j * (d_r[1] + d_i[0])
    d_minus = (d_r[0] + d_i[1]) - 1j * (d_r[1] - d_i[0])
    closest = min(np.abs(d_plus).min(), np.abs(d_minus).min())
    if closest < TRANSITION_TOL:
        raise TransitionLineError("d-point sits on an exceptional point")
    dd_plus = (dr_x - di_y) + 1j * (dr_y + di_x)
    dd_minus = (dr_x + di_y) - 1j * (dr_y - di_x)
    dphi_i = -0.5 * (dd_plus / d_plus - dd_minus / d_minus).real
    return float(dphi_i.sum() * (2.0 * np.pi / n_k))


# --------------------------------------------------------------------------
# imaginary-potential chain


def winding_nu_h2(params: ModelParams, n_k: int = DEFAULT_NK) -> float:
    """Winding of ``(dR_x, dR_y)`` about the origin: 1 if ``t1 < t2``, 0 if ``t1 > t2``."""
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    d_r, _ = d_components(params, k_grid(n_k))
    loop = d_r[0] + 1j * d_r[1]
    if np.abs(loop).min() < TRANSITION_TOL:
        raise TransitionLineError("real d-curve passes through the origin (|t1| = |t2|)")
    return float(abs(round(_winding(loop))))


def reality_interval(params: ModelParams) -> tuple[float, float]:
    """``(||t1| - |t2||, |t1| + |t2|)``: the band of ``u`` with a partially real spectrum."""
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    return abs(abs(params.t1) - abs(params.t2)), abs(params.t1) + abs(params.t2)


def winding_nu_prime(params: ModelParams) -> float:
    """Arc-overlap winding ``nu'`` of the exceptional circle, in ``[0, 1]``.

    ``1`` for ``u <= |t1 - t2|``, ``0`` for ``u >= t1 + t2``, and in between
    ``atan2(sqrt(((u+t1)^2 - t2^2)(t2^2 - (u-t1)^2)), u^2 + t1^2 - t2^2) / pi``,
    which stays continuous where the second argument changes sign.
    """
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    t1, t2, u = params.t1, abs(params.t2), params.u
    if u < 0:
        raise ValueError("u must be non-negative")
    if t1 <= 0:
        raise ValueError("t1 must be positive")
    low, high = abs(t1 - t2), t1 + t2
    if u <= low:
        return 1.0
    if u >= high:
        return 0.0
    product = ((u + t1) ** 2 - t2**2) * (t2**2 - (u - t1) ** 2)
    return math.atan2(math.sqrt(max(product, 0.0)), u**2 + t1**2 - t2**2) / math.pi


def winding_nu_prime_oracle(params: ModelParams, n_samples: int = 1_000_000, seed: int = 0) -> float:
    """Monte-Carlo fraction of the exceptional circle lying inside the d-curve.

    Points are drawn uniformly in angle on the circle of radius ``u``.  This
    is the bare geometric overlap; for ``t1 > t2`` and ``u < t1 - t2`` the
    circles are disjoint and it returns 0 where :func:`winding_nu_prime`
    reports 1.
    """
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    if n_samples < 100_000:
        raise ValueError("n_samples must be at least 1e5")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n_samples)
    x = params.u * np.cos(theta) - params.t1
    y = params.u * np.sin(theta)
    return float(np.mean(x * x + y * y < params.t2**2))


def real_energy_fraction(params: ModelParams, n_k: int = DEFAULT_NK, tol: float = 1e-9) -> float:
    """Fraction of Bloch momenta whose energies have a non-zero real part.

    Reported alongside ``nu'`` for comparison; the two differ in general
    (``t1=1, t2=2, u=sqrt(3)`` gives ``nu' = 1/2`` but a fraction of 2/3).
    """
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    e_plus, _ = dispersion(params, k_grid(n_k))
    return float(np.mean(np.abs(e_plus.real) > tol))


# --------------------------------------------------------------------------
# complex Berry phase


@dataclass(frozen=True)
class BerryResult:
    q_plus: float
    q_minus: float
    q_global: float
    n_k: int
    min_gap: float
    residue: float


def _biorthogonal_frames(params: ModelParams, ks: np.ndarray):
    """Right eigenvector matrices and their inverses (rows = left vectors).

    Column 0 is the ``+`` band (principal-branch energy).  The gauge keeps
    the B-sublattice component real and positive, which is smooth and
    periodic whenever the bands do not touch.
    """
    h = bloch_stack(params, ks)
    energies, right = np.linalg.eig(h)
    e_plus, _ = dispersion(params, ks)
    swap = np.abs(energies[:, 0] - e_plus) > np.abs(energies[:, 1] - e_plus)
    right[swap] = right[swap][:, :, ::-1]
    b_comp = right[:, 1:2, :]
    right = right / (b_comp / np.abs(b_comp))
    left = np.linalg.inv(right)
    return right, left


def complex_berry_phase(params: ModelParams, n_k: int = DEFAULT_NK) -> BerryResult:
    """Bi-orthogonal Berry phase of each band and their sum.

    Each band phase is ``-sum_j arg <lambda_n(k_j)|psi_n(k_{j+1})>`` over a
    closed uniform grid, with left vectors normalized so that
    ``<lambda_n(k)|psi_n(k)> = 1``.  Individual link phases are small, so the
    sum is the discretized connection integral itself rather than a value
    folded into one ``2 pi`` window; the global phase comes out as
    ``2 pi`` times the winding of ``t1 + t2 exp(-ik)``.

    Raises
    ------
    BandTouchingError
        When ``min_k |E_+(k)| <= 1e-6`` over the Brillouin zone.
    """
    _require(params, ModelKind.IMAGINARY_POTENTIAL)
    if n_k < 1000:
        raise ValueError("complex_berry_phase needs n_k >= 1000")
    ks = k_grid(n_k)
    # |E|^2 sweeps [(t1-t2)^2 - u^2, (t1+t2)^2 - u^2] over the continuum, so the
    # touching points between grid samples are caught exactly
    low, high = reality_interval(params)
    u = abs(params.u)
    gap = math.sqrt(max(low**2 - u**2, u**2 - high**2, 0.0))
    if gap <= BAND_TOUCH_TOL:
        raise BandTouchingError(
            f"bands touch (min |E| = {gap:.2e}); perturb u below |t1-t2| or above t1+t2"
        )
    right, left = _biorthogonal_frames(params, ks)
    right_next = np.roll(right, -1, axis=0)
    links = np.einsum("kni,kin->kn", left, right_next)
    q = -np.angle(links).sum(axis=0)
    q_global = float(q.sum())
    residue = abs(q_global / (2.0 * np.pi) - round(q_global / (2.0 * np.pi)))
    return BerryResult(float(q[0]), float(q[1]), q_global, n_k, gap, residue)
