"""Dense complex linear-algebra primitives with a shared tolerance policy.

Conventions used across the package:

* Matrices are dense ``numpy`` arrays of ``complex128``, row-major.
* The ambient spaces are C^n paired by the canonical anti-duality
  ``pairing(f, x) = sum_i f[i] * conj(x[i])`` (linear in ``f``, conjugate
  linear in ``x``), so adjoints are plain conjugate transposes.
* Rank decisions are relative: an eigenvalue counts as nonzero when it
  exceeds ``rank_rel_eps`` times the largest eigenvalue.
* Positivity tolerates eigenvalues down to ``-psd_tol * (1 + max|eig|)``
  to absorb eigensolver noise on exactly singular inputs.

Every function is pure and deterministic for a fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotPsd, NotSquare, ShapeMismatch


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical policy shared by all modules.

    rank_rel_eps: relative eigenvalue cutoff for numerical rank
    psd_tol:      allowed negative eigenvalue magnitude, relative to scale
    cmp_tol:      entrywise / residual comparison tolerance
    """

    rank_rel_eps: float = 1e-10
    psd_tol: float = 1e-9
    cmp_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_eps", "psd_tol", "cmp_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v}")


DEFAULT_TOL = ToleranceConfig()
STRICT_TOL = ToleranceConfig(rank_rel_eps=1e-12, psd_tol=1e-11, cmp_tol=1e-10)


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral decomposition M = V diag(w) V†, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d complex array (1-d input becomes a column)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return a


def as_vector(v, name: str = "vector") -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128).reshape(-1)
    if a.size and not np.all(np.isfinite(a)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return a


def pairing(f, x) -> complex:
    """Canonical anti-duality on C^n: linear in f, conjugate linear in x."""
    return complex(np.vdot(np.asarray(x), np.asarray(f)))


def fro(m) -> float:
    return float(np.linalg.norm(m))


def _require_square(m: np.ndarray, name: str) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {m.shape}")


def hermitian_residual(m: np.ndarray) -> float:
    return fro(m - m.conj().T)


def is_hermitian(m, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    _require_square(a, "matrix")
    return hermitian_residual(a) <= cfg.cmp_tol * (1.0 + fro(a))


def hermitian_eigen(m, cfg: ToleranceConfig = DEFAULT_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before factorization so that the result is a
    function of the Hermitian part only; inputs whose anti-Hermitian part
    exceeds ``cmp_tol`` relative are rejected.
    """
    a = as_matrix(m)
    _require_square(a, "matrix")
    if hermitian_residual(a) > cfg.cmp_tol * (1.0 + fro(a)):
        raise NotHermitian(
            f"symmetry residual {hermitian_residual(a):.3e} exceeds tolerance"
        )
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    return HermitianEigen(eigenvalues=w, eigenvectors=v)


def numerical_rank(eigenvalues: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of eigenvalues above the relative cutoff (PSD spectra)."""
    if eigenvalues.size == 0:
        return 0
    top = float(np.max(eigenvalues))
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(eigenvalues > cfg.rank_rel_eps * top))


def positive_spectrum(
    m, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian PSD matrix above the rank cutoff.

    Returns ``(lam, u)`` with ``lam`` descending positive eigenvalues of
    numerical rank length and ``u`` the matching orthonormal columns.
    """
    eig = hermitian_eigen(m, cfg)
    r = numerical_rank(eig.eigenvalues, cfg)
    if r == 0:
        n = eig.eigenvectors.shape[0]
        return np.zeros(0), np.zeros((n, 0), dtype=np.complex128)
    lam = eig.eigenvalues[::-1][:r].copy()
    u = eig.eigenvectors[:, ::-1][:, :r].copy()
    return lam, u


def is_psd(m, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Hermitian within cmp_tol and spectrum above -psd_tol * (1 + max|eig|)."""
    a = as_matrix(m)
    _require_square(a, "matrix")
    if a.shape[0] == 0:
        return True
    if hermitian_residual(a) > cfg.cmp_tol * (1.0 + fro(a)):
        return False
    w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    scale = 1.0 + float(np.max(np.abs(w)))
    return float(np.min(w)) >= -cfg.psd_tol * scale


def _require_psd(m: np.ndarray, cfg: ToleranceConfig, name: str) -> None:
    if not is_psd(m, cfg):
        raise NotPsd(f"{name} is not positive semidefinite within tolerance")


def pseudo_inverse(m, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a Hermitian PSD matrix via its spectrum.

    Eigenvalues below ``rank_rel_eps`` times the largest one are treated as
    exact zeros, so the result is supported on the numerical range only.
    """
    a = as_matrix(m)
    _require_square(a, "matrix")
    _require_psd(a, cfg, "matrix")
    lam, u = positive_spectrum(a, cfg)
    if lam.size == 0:
        return np.zeros_like(a)
    return (u / lam) @ u.conj().T


def psd_sqrt(m, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Positive square root S of a PSD matrix, S @ S = M within cmp_tol.

    Eigenvalues below the rank cutoff are zeroed first; otherwise the
    square root would carry sqrt(machine-eps) noise in kernel directions
    and corrupt downstream range decisions.
    """
    a = as_matrix(m)
    _require_square(a, "matrix")
    _require_psd(a, cfg, "matrix")
    eig = hermitian_eigen(a, cfg)
    w = np.clip(eig.eigenvalues, 0.0, None)
    if w.size:
        w[w <= cfg.rank_rel_eps * float(np.max(w))] = 0.0
    s = (eig.eigenvectors * np.sqrt(w)) @ eig.eigenvectors.conj().T
    return 0.5 * (s + s.conj().T)


def psd_sqrt_pinv(m, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Pseudo-inverse square root M^{+1/2}, supported on the numerical range."""
    a = as_matrix(m)
    _require_square(a, "matrix")
    _require_psd(a, cfg, "matrix")
    lam, u = positive_spectrum(a, cfg)
    if lam.size == 0:
        return np.zeros_like(a)
    return (u / np.sqrt(lam)) @ u.conj().T


def loewner_leq(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Loewner order: A <= B iff B - A is PSD within tolerance."""
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    _require_square(am, "A")
    _require_square(bm, "B")
    if am.shape != bm.shape:
        raise ShapeMismatch(f"shape mismatch {am.shape} vs {bm.shape}")
    for name, m in (("A", am), ("B", bm)):
        if not is_hermitian(m, cfg):
            raise NotHermitian(f"{name} is not Hermitian within tolerance")
    return is_psd(bm - am, cfg)


def range_projector(y, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the column space of Y, from eigen of YY†.

    The eigenvalues of YY† are squared singular values of Y, so the rank
    cutoff is squared too (the decision happens at the level of Y's
    singular values), floored at the rounding noise the formed product
    itself carries.
    """
    ym = as_matrix(y, "Y")
    eig = hermitian_eigen(ym @ ym.conj().T, cfg)
    top = float(np.max(eig.eigenvalues)) if eig.eigenvalues.size else 0.0
    if top <= 0.0:
        return np.zeros((ym.shape[0], ym.shape[0]), dtype=np.complex128)
    rel = max(cfg.rank_rel_eps**2, 64.0 * float(np.finfo(np.float64).eps))
    keep = eig.eigenvalues > rel * top
    u = eig.eigenvectors[:, keep]
    return u @ u.conj().T


def range_included(x, y, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether every column of X lies in the column space of Y.

    Decided through the orthogonal projector P onto ran(Y):
    ``|| (I - P) X ||_F <= cmp_tol * (1 + ||X||_F)``.
    """
    xm = as_matrix(x, "X")
    ym = as_matrix(y, "Y")
    if xm.shape[0] != ym.shape[0]:
        raise ShapeMismatch(f"row counts differ: {xm.shape[0]} vs {ym.shape[0]}")
    if xm.size == 0:
        return True
    p = range_projector(ym, cfg)
    resid = fro(xm - p @ xm)
    return resid <= cfg.cmp_tol * (1.0 + fro(xm))
