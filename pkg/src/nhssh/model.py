"""Bloch and real-space Hamiltonians of the two non-Hermitian SSH chains.

Two ways of breaking Hermiticity are supported:

* ``NON_RECIPROCAL`` -- hoppings ``t1 -/+ delta1`` inside the cell and
  ``t2 -/+ delta2`` between cells (chiral, not PT symmetric);
* ``IMAGINARY_POTENTIAL`` -- reciprocal hoppings with a staggered on-site
  potential ``+iu`` on A and ``-iu`` on B (PT symmetric, not chiral).

Real-space basis ordering is ``A1, B1, A2, B2, ...``.  A matrix element
``H[row, col]`` is the amplitude of the term ``c_row^dagger c_col``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

SYMMETRY_TOL = 1e-10


class ModelKind(str, enum.Enum):
    NON_RECIPROCAL = "nonreciprocal"
    IMAGINARY_POTENTIAL = "imaginary"

    @classmethod
    def parse(cls, value: "ModelKind | str") -> "ModelKind":
        if isinstance(value, cls):
            return value
        aliases = {
            "nonreciprocal": cls.NON_RECIPROCAL,
            "non-reciprocal": cls.NON_RECIPROCAL,
            "h1": cls.NON_RECIPROCAL,
            "imaginary": cls.IMAGINARY_POTENTIAL,
            "imaginary-potential": cls.IMAGINARY_POTENTIAL,
            "pt": cls.IMAGINARY_POTENTIAL,
            "h2": cls.IMAGINARY_POTENTIAL,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown model kind {value!r}") from None


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of either chain.

    Use :func:`make_params` to build one; the constructor validates too.
    """

    kind: ModelKind
    t1: float
    t2: float
    delta1: float = 0.0
    delta2: float = 0.0
    u: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        for name in ("t1", "t2", "delta1", "delta2", "u"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.kind is ModelKind.NON_RECIPROCAL and self.u != 0.0:
            raise ValueError("non-reciprocal model takes no imaginary potential (u must be 0)")
        if self.kind is ModelKind.IMAGINARY_POTENTIAL and (self.delta1 != 0.0 or self.delta2 != 0.0):
            raise ValueError("imaginary-potential model has reciprocal hoppings (delta1 = delta2 = 0)")

    @property
    def is_hermitian(self) -> bool:
        return self.delta1 == 0.0 and self.delta2 == 0.0 and self.u == 0.0

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "t1": self.t1,
            "t2": self.t2,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "u": self.u,
        }

    def replace(self, **changes) -> "ModelParams":
        fields = self.as_dict()
        fields.update(changes)
        return ModelParams(**fields)


def make_params(kind, t1, t2, delta1=0.0, delta2=0.0, u=0.0) -> ModelParams:
    """Validated parameter set.

    Raises
    ------
    ValueError
        On non-finite input, or when non-reciprocity and an imaginary
        potential are mixed in one parameter set.
    """
    return ModelParams(kind, t1, t2, delta1, delta2, u)


def non_reciprocal(t1, t2, delta1=0.0, delta2=0.0) -> ModelParams:
    return ModelParams(ModelKind.NON_RECIPROCAL, t1, t2, delta1, delta2)


def imaginary_potential(t1, t2, u=0.0) -> ModelParams:
    return ModelParams(ModelKind.IMAGINARY_POTENTIAL, t1, t2, u=u)


def k_grid(n_k: int) -> np.ndarray:
    """Uniform periodic momentum grid ``-pi + 2 pi j / n_k``, ``j = 0..n_k-1``.

    For even ``n_k`` the grid contains both ``k = -pi`` and ``k = 0``.
    """
    if n_k < 1:
        raise ValueError("n_k must be positive")
    return -np.pi + 2.0 * np.pi * np.arange(n_k) / n_k


@dataclass(frozen=True)
class BlochMatrix:
    entries: np.ndarray
    k: float


@dataclass(frozen=True)
class DVector:
    real_part: tuple[float, float, float]
    imag_part: tuple[float, float, float]
    k: float

    @property
    def complex(self) -> np.ndarray:
        return np.asarray(self.real_part) + 1j * np.asarray(self.imag_part)

    def matrix(self) -> np.ndarray:
        """``d . sigma`` as a 2x2 array."""
        d = self.complex
        return d[0] * SIGMA_X + d[1] * SIGMA_Y + d[2] * SIGMA_Z


def _check_k(k):
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) > np.pi + 1e-12):
        raise ValueError("k must lie in [-pi, pi]")
    return k


def off_diagonals(params: ModelParams, k):
    """Return ``(h_AB(k), h_BA(k))`` for scalar or array ``k``."""
    k = np.asarray(k, dtype=float)
    p = params
    if p.kind is ModelKind.NON_RECIPROCAL:
        h_ab = (p.t1 - p.delta1) + (p.t2 + p.delta2) * np.exp(-1j * k)
        h_ba = (p.t1 + p.delta1) + (p.t2 - p.delta2) * np.exp(1j * k)
    else:
        h_ab = p.t1 + p.t2 * np.exp(-1j * k)
        h_ba = p.t1 + p.t2 * np.exp(1j * k)
    return h_ab, h_ba


def bloch_stack(params: ModelParams, ks) -> np.ndarray:
    """Bloch matrices for every momentum in ``ks``, shape ``(len(ks), 2, 2)``."""
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    h = np.zeros((ks.size, 2, 2), dtype=complex)
    h_ab, h_ba = off_diagonals(params, ks)
    h[:, 0, 1] = h_ab
    h[:, 1, 0] = h_ba
    if params.kind is ModelKind.IMAGINARY_POTENTIAL:
        h[:, 0, 0] = 1j * params.u
        h[:, 1, 1] = -1j * params.u
    return h


def bloch_matrix(params: ModelParams, k: float) -> BlochMatrix:
    k = float(_check_k(k))
    return BlochMatrix(bloch_stack(params, [k])[0], k)


def d_components(params: ModelParams, ks):
    """Real and imaginary d-vector components on an array of momenta.

    Returns two arrays of shape ``(3, len(ks))``: ``(dR, dI)``.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    p = params
    c, s = np.cos(ks), np.sin(ks)
    zero = np.zeros_like(ks)
    d_r = np.stack([p.t1 + p.t2 * c, p.t2 * s, zero])
    if p.kind is ModelKind.NON_RECIPROCAL:
        d_i = np.stack([-p.delta2 * s, -p.delta1 + p.delta2 * c, zero])
    else:
        d_i = np.stack([zero, zero, np.full_like(ks, p.u)])
    return d_r, d_i


def d_vector(params: ModelParams, k: float) -> DVector:
    k = float(_check_k(k))
    d_r, d_i = d_components(params, [k])
    return DVector(tuple(d_r[:, 0].tolist()), tuple(d_i[:, 0].tolist()), k)


def principal_sqrt(z):
    """Square root with ``Re >= 0`` and ``Im >= 0`` on the cut ``Re = 0``."""
    root = np.sqrt(np.asarray(z, dtype=complex))
    flip = (root.real == 0.0) & (root.imag < 0.0)
    return np.where(flip, -root, root)


def energy_squared(params: ModelParams, k):
    """Closed-form ``E(k)^2`` of the Bloch Hamiltonian."""
    k = np.asarray(k, dtype=float)
    p = params
    if p.kind is ModelKind.NON_RECIPROCAL:
        return (
            p.t1**2 + p.t2**2 - p.delta1**2 - p.delta2**2
            + 2.0 * (p.t1 * p.t2 + p.delta1 * p.delta2) * np.cos(k)
            - 2j * (p.t1 * p.delta2 + p.t2 * p.delta1) * np.sin(k)
        )
    return (np.abs(p.t1 + p.t2 * np.exp(-1j * k)) ** 2 - p.u**2).astype(complex)


def dispersion(params: ModelParams, k):
    """Analytic band energies ``(E_plus, E_minus)`` with ``E_minus = -E_plus``.

    Works on scalars and arrays alike; scalars come back as Python complex.
    """
    e_plus = principal_sqrt(energy_squared(params, _check_k(k)))
    e_minus = -e_plus
    if e_plus.ndim == 0:
        return complex(e_plus), complex(e_minus)
    return e_plus, e_minus


@dataclass(frozen=True)
class SymmetryVerdict:
    chiral: bool
    pt: bool
    max_residual: float
    chiral_residual: float
    pt_residual: float


def check_symmetries(params: ModelParams, k_samples=None, tol: float = SYMMETRY_TOL) -> SymmetryVerdict:
    """Test chiral (``sz h sz = -h``) and PT (``sx h sx = h*``) symmetry on sampled momenta."""
    if k_samples is None:
        k_samples = np.linspace(-np.pi, np.pi, 101)
    k_samples = np.atleast_1d(np.asarray(k_samples, dtype=float))
    if k_samples.size == 0:
        raise ValueError("k_samples must be nonempty")
    h = bloch_stack(params, k_samples)
    chiral_res = np.abs(SIGMA_Z @ h @ SIGMA_Z + h).max()
    pt_res = np.abs(SIGMA_X @ h @ SIGMA_X - h.conj()).max()
    return SymmetryVerdict(
        chiral=bool(chiral_res < tol),
        pt=bool(pt_res < tol),
        max_residual=float(max(chiral_res, pt_res)),
        chiral_residual=float(chiral_res),
        pt_residual=float(pt_res),
    )


def open_chain_hamiltonian(params: ModelParams, n_cells: int) -> np.ndarray:
    """Dense ``2 n_cells x 2 n_cells`` open-boundary Hamiltonian."""
    if n_cells < 2:
        raise ValueError("n_cells must be at least 2")
    p = params
    size = 2 * n_cells
    h = np.zeros((size, size), dtype=complex)
    a = np.arange(0, size, 2)
    b = a + 1
    if p.kind is ModelKind.NON_RECIPROCAL:
        h[a, b] = p.t1 - p.delta1
        h[b, a] = p.t1 + p.delta1
        h[b[:-1], a[1:]] = p.t2 - p.delta2
        h[a[1:], b[:-1]] = p.t2 + p.delta2
    else:
        h[a, b] = h[b, a] = p.t1
        h[b[:-1], a[1:]] = h[a[1:], b[:-1]] = p.t2
        h[a, a] = 1j * p.u
        h[b, b] = -1j * p.u
    return h
