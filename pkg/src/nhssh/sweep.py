"""Parameter-plane and parameter-line scans of the invariants."""
from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import TransitionLineError
from .model import imaginary_potential, non_reciprocal
from .spectral import RealityReport, classify_reality, dense_pbc_spectrum, obc_eigenvalues, zero_modes
from .topology import DEFAULT_NK, winding_nu, winding_nu_h2, winding_nu_oracle, winding_nu_prime

THREADS_ENV = "NHSSH_THREADS"


class Observable(str, enum.Enum):
    NU = "nu"
    NU_PRIME = "nu_prime"
    ZERO_MODE_COUNT = "zero_mode_count"
    NU_H2 = "nu_h2"
    REALITY_CLASS = "reality_class"


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    n: int

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.n)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.n - 1) if self.n > 1 else 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "min": self.min, "max": self.max, "n": self.n}


@dataclass(frozen=True)
class SpotCheck:
    ix: int
    iy: int
    numeric: float
    oracle: float

    @property
    def agrees(self) -> bool:
        return self.numeric == self.oracle


@dataclass(frozen=True)
class PhaseGrid:
    """Invariant values on a rectangular parameter grid.

    ``values[iy, ix]`` belongs to ``(x_axis.values[ix], y_axis.values[iy])``;
    ``nan`` marks cells sitting on a transition line.
    """

    x_axis: Axis
    y_axis: Axis
    values: np.ndarray
    observable: Observable
    params: dict = field(default_factory=dict)
    seed: int | None = None
    spot_checks: tuple[SpotCheck, ...] = ()

    def __post_init__(self):
        if self.values.shape != (self.y_axis.n, self.x_axis.n):
            raise ValueError("values shape must be (y_axis.n, x_axis.n)")

    @property
    def indeterminate(self) -> np.ndarray:
        return np.isnan(self.values)

    def header(self) -> dict:
        return {
            "observable": self.observable.value,
            "x_axis": self.x_axis.as_dict(),
            "y_axis": self.y_axis.as_dict(),
            "params": self.params,
            "seed": self.seed,
            "n_indeterminate": int(self.indeterminate.sum()),
            "spot_checks": [
                {"ix": s.ix, "iy": s.iy, "numeric": s.numeric, "oracle": s.oracle}
                for s in self.spot_checks
            ],
        }

    def boundary_points(self) -> np.ndarray:
        """Midpoints between horizontally or vertically adjacent cells whose values differ.

        Indeterminate cells are skipped.  Returns an array of ``(x, y)`` rows.
        """
        xs, ys = self.x_axis.values, self.y_axis.values
        v = self.values
        points = []
        diff_x = (v[:, 1:] != v[:, :-1]) & np.isfinite(v[:, 1:]) & np.isfinite(v[:, :-1])
        for iy, ix in zip(*np.nonzero(diff_x)):
            points.append((0.5 * (xs[ix] + xs[ix + 1]), ys[iy]))
        diff_y = (v[1:, :] != v[:-1, :]) & np.isfinite(v[1:, :]) & np.isfinite(v[:-1, :])
        for iy, ix in zip(*np.nonzero(diff_y)):
            points.append((xs[ix], 0.5 * (ys[iy] + ys[iy + 1])))
        return np.array(points, dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class Curve:
    """A sampled one-parameter curve; iterating yields ``(x, y)`` pairs."""

    x_name: str
    y_name: str
    x: np.ndarray
    y: np.ndarray
    jumps: tuple[float, ...] = ()

    def __iter__(self):
        return iter(zip(self.x.tolist(), self.y.tolist()))

    def __len__(self):
        return self.x.size


@dataclass(frozen=True)
class RealitySweep:
    u: np.ndarray
    reports: tuple[RealityReport, ...]
    u_low: float
    u_high: float

    def __iter__(self):
        return iter(zip(self.u.tolist(), self.reports))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(func, items, workers: int | None):
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _axis(name, bounds, n, minimum) -> Axis:
    lo, hi = (float(b) for b in bounds)
    if hi < lo:
        raise ValueError(f"{name} range is reversed: ({lo}, {hi})")
    if lo == hi:
        return Axis(name, lo, hi, 1)
    if n < minimum:
        raise ValueError(f"{name} needs at least {minimum} points, got {n}")
    return Axis(name, lo, hi, int(n))


def _jumps(x: np.ndarray, y: np.ndarray) -> tuple[float, ...]:
    ok = np.flatnonzero(np.isfinite(y))
    return tuple(
        float(0.5 * (x[a] + x[b])) for a, b in zip(ok[:-1], ok[1:]) if y[a] != y[b]
    )


def _numeric_nu(params, n_k) -> float:
    try:
        return winding_nu(params, n_k).nu
    except TransitionLineError:
        return float("nan")


def sweep_delta_plane(t1: float, t2: float, delta1_range=(-2.0, 2.0), delta2_range=(-2.0, 2.0),
                      n: int = 100, seed: int = 0, spot_fraction: float = 0.01,
                      n_k: int = DEFAULT_NK, numeric: bool = False,
                      workers: int | None = None) -> PhaseGrid:
    """``nu`` over the ``(delta1, delta2)`` plane.

    Cells are filled from the closed-form oracle; a seeded random
    ``spot_fraction`` of determinate cells is recomputed with the numerical
    winding integral and recorded in ``spot_checks``.  With
    ``numeric=True`` every cell uses the integral instead.
    """
    x_axis = _axis("delta1", delta1_range, n, 50)
    y_axis = _axis("delta2", delta2_range, n, 50)
    cells = [(ix, iy) for iy in range(y_axis.n) for ix in range(x_axis.n)]
    xs, ys = x_axis.values, y_axis.values

    def cell(idx):
        ix, iy = idx
        p = non_reciprocal(t1, t2, xs[ix], ys[iy])
        return _numeric_nu(p, n_k) if numeric else winding_nu_oracle(p)

    values = np.array(_map(cell, cells, workers), dtype=float).reshape(y_axis.n, x_axis.n)

    determinate = np.flatnonzero(np.isfinite(values).ravel())
    n_spot = min(determinate.size, max(1, int(round(spot_fraction * values.size))))
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(determinate, size=n_spot, replace=False)) if n_spot else []

    def spot(flat):
        iy, ix = divmod(int(flat), x_axis.n)
        p = non_reciprocal(t1, t2, xs[ix], ys[iy])
        return SpotCheck(ix, iy, _numeric_nu(p, n_k), winding_nu_oracle(p))

    checks = tuple(_map(spot, list(chosen), workers))
    return PhaseGrid(x_axis, y_axis, values, Observable.NU,
                     {"t1": t1, "t2": t2, "n_k": n_k, "numeric": numeric}, seed, checks)


def sweep_nu_line(t1: float, t2: float, delta1: float, delta2_range=(0.0, 1.5),
                  n: int = 400, n_k: int = DEFAULT_NK) -> Curve:
    """Numerical ``nu`` along a cut at fixed ``delta1``; jumps at midpoints of differing neighbours."""
    axis = _axis("delta2", delta2_range, n, 200)
    xs = axis.values
    ys = np.array([_numeric_nu(non_reciprocal(t1, t2, delta1, d2), n_k) for d2 in xs])
    return Curve("delta2", "nu", xs, ys, _jumps(xs, ys))


def sweep_u_t2(t1: float, u_range=(0.0, 3.0), t2_range=(0.0, 3.0), n: int = 50,
               n_cells: int = 50, zero_tol: float = 1e-6, n_k: int = DEFAULT_NK,
               workers: int | None = None) -> tuple[PhaseGrid, PhaseGrid]:
    """Zero-mode count (open chain) and ``nu`` over the ``(u, t2)`` plane of the PT chain."""
    if n_cells < 50:
        raise ValueError("zero-mode grid needs n_cells >= 50")
    x_axis = _axis("u", u_range, n, 50)
    y_axis = _axis("t2", t2_range, n, 50)
    us, t2s = x_axis.values, y_axis.values
    cells = [(ix, iy) for iy in range(y_axis.n) for ix in range(x_axis.n)]

    def cell(idx):
        ix, iy = idx
        p = imaginary_potential(t1, t2s[iy], us[ix])
        count = zero_modes(obc_eigenvalues(p, n_cells), zero_tol).size
        try:
            nu = winding_nu_h2(p, n_k)
        except TransitionLineError:
            nu = float("nan")
        return count, nu

    out = np.array(_map(cell, cells, workers), dtype=float)
    params = {"t1": t1, "n_cells": n_cells, "zero_tol": zero_tol, "n_k": n_k}
    shape = (y_axis.n, x_axis.n)
    return (
        PhaseGrid(x_axis, y_axis, out[:, 0].reshape(shape), Observable.ZERO_MODE_COUNT, params),
        PhaseGrid(x_axis, y_axis, out[:, 1].reshape(shape), Observable.NU_H2, params),
    )


def sweep_nu_prime(t1: float, t2: float, u_range=(0.0, 4.0), n: int = 500) -> Curve:
    axis = _axis("u", u_range, n, 500)
    xs = axis.values
    ys = np.array([winding_nu_prime(imaginary_potential(t1, t2, u)) for u in xs])
    return Curve("u", "nu_prime", xs, ys)


def sweep_reality(t1: float, t2: float, u_range=(0.0, 4.0), n: int = 400,
                  n_k: int = 1024) -> RealitySweep:
    """Reality classes of the Bloch spectrum along ``u``.

    ``u_low`` is the first ``u`` whose spectrum is no longer entirely real;
    ``u_high`` the first with no real eigenvalue left.  ``nan`` when the
    scan never gets there.
    """
    axis = _axis("u", u_range, n, 200)
    us = axis.values
    reports = tuple(classify_reality(dense_pbc_spectrum(imaginary_potential(t1, t2, u), n_k))
                    for u in us)
    broken = [u for u, r in zip(us, reports) if not r.all_real]
    no_real = [u for u, r in zip(us, reports) if r.n_real == 0]
    u_low = float(broken[0]) if broken else float("nan")
    u_high = float(no_real[0]) if no_real else float("nan")
    return RealitySweep(us, reports, u_low, u_high)
