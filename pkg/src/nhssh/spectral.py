"""Dense non-Hermitian eigenproblems, boundary-condition spectra and gap classes."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import EigenSolverError
from .model import ModelParams, bloch_stack, k_grid, open_chain_hamiltonian

DEFECT_OVERLAP_TOL = 1e-8
# beyond this spread of log-scales the diagonal similarity itself would overflow
_MAX_LOG_SCALE_SPREAD = 600.0

ZERO_MODE_TOL = 1e-6
OBC_REALITY_TOL = 1e-6
BLOCH_REALITY_RTOL = 1e-9
MIN_GAP_GRID = 401


class Boundary(str, enum.Enum):
    PBC = "pbc"
    OBC = "obc"


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a general complex matrix.

    ``right_vectors[:, n]`` has unit Euclidean norm.  ``left_vectors[:, n]``
    is scaled so that ``left_vectors[:, n].conj() @ right_vectors[:, n] == 1``
    unless ``defective[n]`` is set, in which case it is left at unit norm.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    residual: float
    overlaps: np.ndarray
    defective: np.ndarray
    boundary: Boundary | None = None

    def __len__(self):
        return self.eigenvalues.size

    @property
    def any_defective(self) -> bool:
        return bool(self.defective.any())

    def biorthogonality_error(self) -> float:
        """``max |<lambda_n|psi_m> - delta_nm|`` over non-defective pairs."""
        gram = self.left_vectors.conj().T @ self.right_vectors
        ok = ~self.defective
        err = np.abs(gram - np.eye(len(self)))[np.ix_(ok, ok)]
        return float(err.max()) if err.size else 0.0

    def backward_errors(self, matrix) -> np.ndarray:
        """``|H psi_n - E_n psi_n| / max(1, |E_n|)`` for every eigenpair."""
        res = np.asarray(matrix) @ self.right_vectors - self.right_vectors * self.eigenvalues
        return np.linalg.norm(res, axis=0) / np.maximum(1.0, np.abs(self.eigenvalues))


def _symmetrizing_log_scales(a: np.ndarray) -> np.ndarray | None:
    """Log of a diagonal similarity making ``|B_ij| = |B_ji|`` on a tree-shaped coupling graph.

    Returns ``None`` when the off-diagonal coupling graph has cycles; LAPACK's
    own balancing is then all that is applied.
    """
    n = a.shape[0]
    mag = np.abs(a)
    np.fill_diagonal(mag, 0.0)
    adjacency = csr_matrix((mag + mag.T) > 0)
    n_edges = adjacency.nnz // 2
    n_comp, labels = connected_components(adjacency, directed=False)
    if n_edges != n - n_comp:
        return None
    logd = np.zeros(n)
    for comp in range(n_comp):
        root = int(np.flatnonzero(labels == comp)[0])
        order, pred = breadth_first_order(adjacency, root, directed=False)
        for j in order[1:]:
            p = pred[j]
            fwd, back = mag[p, j], mag[j, p]
            step = 0.5 * (np.log(back) - np.log(fwd)) if fwd > 0 and back > 0 else 0.0
            logd[j] = logd[p] + step
    if np.ptp(logd) > _MAX_LOG_SCALE_SPREAD:
        return None
    return logd


def eig_general(matrix, boundary: Boundary | None = None) -> Spectrum:
    """Full right/left eigendecomposition of a general (non-normal) matrix.

    Exponentially non-normal chains such as the non-reciprocal SSH chain
    lose all eigenvalue accuracy under plain LAPACK balancing.  When the
    coupling graph is a tree (true for any open 1D chain) the matrix is first
    brought to ``|B_ij| = |B_ji|`` by an exact diagonal similarity, solved,
    and the vectors are transformed back.  Near-defectiveness is judged in
    that balanced frame: a bi-orthogonal overlap below ``1e-8`` between
    unit left and right vectors flags the eigenvalue.

    Eigenvalues are returned sorted by real part, then imaginary part.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise EigenSolverError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise EigenSolverError("matrix contains non-finite entries")

    logd = _symmetrizing_log_scales(a)
    b = a if logd is None else a * np.exp(logd[None, :] - logd[:, None])
    try:
        w, vl, vr = scipy.linalg.eig(b, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"eigensolver failed to converge: {exc}") from exc

    vl = vl / np.linalg.norm(vl, axis=0)
    vr = vr / np.linalg.norm(vr, axis=0)
    overlaps = np.abs(np.sum(vl.conj() * vr, axis=0))
    defective = overlaps < DEFECT_OVERLAP_TOL

    if logd is not None:
        vr = vr * np.exp(logd - logd.max())[:, None]
        vl = vl * np.exp(logd.min() - logd)[:, None]
    right = vr / np.linalg.norm(vr, axis=0)
    left = vl / np.linalg.norm(vl, axis=0)
    s = np.sum(left.conj() * right, axis=0)
    scale = np.where(defective, 1.0, 1.0 / np.where(defective, 1.0, s).conj())
    left = left * scale

    order = np.lexsort((w.imag, w.real))
    w, right, left = w[order], right[:, order], left[:, order]
    overlaps, defective = overlaps[order], defective[order]
    residual = float(np.linalg.norm(a @ right - right * w, axis=0).max())
    return Spectrum(w, right, left, residual, overlaps, defective, boundary)


@dataclass(frozen=True)
class BlochSpectrum:
    """Per-momentum band pairs of the Bloch Hamiltonian.

    Iterating yields ``(k, E_plus, E_minus)`` tuples.
    """

    k: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray
    boundary: Boundary = field(default=Boundary.PBC)

    def __iter__(self):
        return iter(zip(self.k.tolist(), self.e_plus.tolist(), self.e_minus.tolist()))

    def __len__(self):
        return self.k.size

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.e_plus, self.e_minus])


def _plus_branch_first(e: np.ndarray) -> np.ndarray:
    """Boolean mask choosing which of the two columns is the ``+`` band."""
    scale = max(1.0, float(np.abs(e).max()))
    re_diff = e[:, 0].real - e[:, 1].real
    im_diff = e[:, 0].imag - e[:, 1].imag
    tie = np.abs(re_diff) <= 1e-12 * scale
    return np.where(tie, im_diff >= 0, re_diff > 0)


def pbc_spectrum(params: ModelParams, k_values) -> BlochSpectrum:
    """Eigenvalues of the Bloch matrix at each momentum, solved numerically.

    The ``+`` band is the eigenvalue with positive real part (positive
    imaginary part when the real parts tie), the same branch convention as
    :func:`nhssh.model.dispersion`.
    """
    ks = np.atleast_1d(np.asarray(k_values, dtype=float))
    if ks.size == 0:
        raise ValueError("k grid must be nonempty")
    try:
        e = np.linalg.eigvals(bloch_stack(params, ks))
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc)) from exc
    first = _plus_branch_first(e)
    e_plus = np.where(first, e[:, 0], e[:, 1])
    e_minus = np.where(first, e[:, 1], e[:, 0])
    return BlochSpectrum(ks, e_plus, e_minus)


def obc_spectrum(params: ModelParams, n_cells: int) -> Spectrum:
    return eig_general(open_chain_hamiltonian(params, n_cells), boundary=Boundary.OBC)


def obc_eigenvalues(params: ModelParams, n_cells: int) -> np.ndarray:
    """Open-chain eigenvalues only, sorted like :func:`eig_general`; cheaper for sweeps."""
    a = open_chain_hamiltonian(params, n_cells).astype(complex)
    logd = _symmetrizing_log_scales(a)
    b = a if logd is None else a * np.exp(logd[None, :] - logd[:, None])
    try:
        w = scipy.linalg.eigvals(b)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"eigensolver failed to converge: {exc}") from exc
    return w[np.lexsort((w.imag, w.real))]


def _eigenvalues_of(spectrum) -> np.ndarray:
    if hasattr(spectrum, "eigenvalues"):
        return np.asarray(spectrum.eigenvalues)
    return np.asarray(spectrum, dtype=complex).ravel()


def zero_modes(spectrum, tol: float = ZERO_MODE_TOL) -> np.ndarray:
    """Indices of eigenvalues with ``|E| < tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return np.flatnonzero(np.abs(_eigenvalues_of(spectrum)) < tol)


@dataclass(frozen=True)
class RealityReport:
    n_real: int
    n_imaginary: int
    n_complex: int
    tol: float

    @property
    def all_real(self) -> bool:
        return self.n_imaginary == 0 and self.n_complex == 0

    def as_dict(self) -> dict:
        return {"n_real": self.n_real, "n_imaginary": self.n_imaginary,
                "n_complex": self.n_complex, "tol": self.tol}


def default_reality_tol(spectrum) -> float:
    e = _eigenvalues_of(spectrum)
    if isinstance(spectrum, BlochSpectrum):
        return BLOCH_REALITY_RTOL * max(1.0, float(np.abs(e).max(initial=0.0)))
    return OBC_REALITY_TOL


def classify_reality(spectrum, tol: float | None = None) -> RealityReport:
    """Count purely real, purely imaginary and genuinely complex eigenvalues.

    A value below ``tol`` in both parts (``E ~ 0``) counts as real.  The
    default tolerance is ``1e-9`` times the spectral radius for Bloch
    spectra and ``1e-6`` otherwise.
    """
    if tol is None:
        tol = default_reality_tol(spectrum)
    if tol <= 0:
        raise ValueError("tol must be positive")
    e = _eigenvalues_of(spectrum)
    real = np.abs(e.imag) < tol
    imaginary = ~real & (np.abs(e.real) < tol)
    n_real = int(real.sum())
    n_imag = int(imaginary.sum())
    return RealityReport(n_real, n_imag, e.size - n_real - n_imag, float(tol))


class GapKind(str, enum.Enum):
    POINT = "point"
    LINE_RE = "line_re"
    LINE_IM = "line_im"
    GAPLESS = "gapless"


@dataclass(frozen=True)
class GapClass:
    kind: GapKind
    margin: float


def gap_classify(pbc, tol: float = 1e-6) -> GapClass:
    """Point/line gap of a Bloch spectrum with respect to ``E = 0``.

    ``LINE_RE`` means the spectrum avoids the line ``Re E = 0``, ``LINE_IM``
    the line ``Im E = 0``; line gaps take precedence over the point gap.
    ``pbc`` is a :class:`BlochSpectrum` or a flat eigenvalue array holding
    both bands (two values per momentum); at least 401 momenta are needed.
    """
    e = _eigenvalues_of(pbc)
    n_k = len(pbc) if isinstance(pbc, BlochSpectrum) else e.size // 2
    if n_k < MIN_GAP_GRID:
        raise ValueError(f"gap classification needs >= {MIN_GAP_GRID} momenta, got {n_k}")
    re_margin = float(np.abs(e.real).min())
    im_margin = float(np.abs(e.imag).min())
    point_margin = float(np.abs(e).min())
    if re_margin > tol:
        return GapClass(GapKind.LINE_RE, re_margin)
    if im_margin > tol:
        return GapClass(GapKind.LINE_IM, im_margin)
    if point_margin > tol:
        return GapClass(GapKind.POINT, point_margin)
    return GapClass(GapKind.GAPLESS, point_margin)


def dense_pbc_spectrum(params: ModelParams, n_k: int = 1024) -> BlochSpectrum:
    """:func:`pbc_spectrum` on the standard periodic grid of ``n_k`` points."""
    return pbc_spectrum(params, k_grid(n_k))
