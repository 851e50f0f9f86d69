"""Partially defined positive operators on C^n and their extendibility.

A partial operator is given by a basis D of its domain (columns of an
n x d matrix) together with its action on that basis (columns of Ad).
The Gram matrix G = D† Ad collects the form values ``<A x, x'>`` in
domain coordinates; symmetry and positivity of the operator on its
domain are exactly Hermitianness and positive semidefiniteness of G.

A positive everywhere-defined extension exists iff the kernel of G is
contained in the kernel of Ad, equivalently iff the Hilbert bound

    inf { M >= 0 : ||A x||^2 <= M <A x, x> for all x in dom A }

is finite.  Both criteria are implemented, along with the per-direction
constant M_y of the quadratic characterization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numcore as nc
from .errors import (
    InvalidOperator,
    NonHermitianGram,
    NonPsdGram,
    RankDeficientDomain,
    ShapeMismatch,
)
from .numcore import DEFAULT_TOL, ToleranceConfig

_FAILURE_ERRORS = {
    "rank_deficient_domain": RankDeficientDomain,
    "non_hermitian_gram": NonHermitianGram,
    "non_psd_gram": NonPsdGram,
}


@dataclass(frozen=True)
class PartialOperator:
    """A: dom A -> C^n with dom A = span of the columns of ``domain_basis``."""

    domain_basis: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        d = nc.as_matrix(self.domain_basis, "domain_basis")
        a = nc.as_matrix(self.action, "action")
        if d.shape != a.shape:
            raise ShapeMismatch(
                f"domain_basis {d.shape} and action {a.shape} must have equal shape"
            )
        object.__setattr__(self, "domain_basis", d)
        object.__setattr__(self, "action", a)

    @property
    def n(self) -> int:
        return self.domain_basis.shape[0]

    @property
    def d(self) -> int:
        return self.domain_basis.shape[1]

    def gram(self) -> np.ndarray:
        """G = D† Ad, the form <A x, x'> in domain coordinates."""
        return self.domain_basis.conj().T @ self.action


def full_domain(matrix) -> PartialOperator:
    """Everywhere-defined operator: domain basis is the identity."""
    m = nc.as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch("everywhere-defined operator must be square")
    return PartialOperator(np.eye(m.shape[0], dtype=np.complex128), m)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[str, ...]
    gram: np.ndarray

    def raise_if_invalid(self) -> None:
        if not self.ok:
            raise _FAILURE_ERRORS[self.failures[0]](
                f"partial operator invalid: {', '.join(self.failures)}"
            )


@dataclass(frozen=True)
class ExtendibilityReport:
    """Verdict plus the data backing it.

    ``hilbert_bound`` is the infimum of the constants M above (+inf when
    none exists); finiteness of the bound is equivalent to extendibility,
    which subsumes the strong-topology boundedness criterion in finite
    dimensions.  ``witness`` is a normalized direction y with M_y = +inf
    when the operator is not extendible, and None otherwise.
    """

    extendible: bool
    gram: np.ndarray
    hilbert_bound: float
    witness: np.ndarray | None = field(default=None)


def validate(p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL) -> ValidationReport:
    """Check full column rank of D, Hermitianness and positivity of G."""
    failures = []
    g = p.gram()
    if p.d > 0:
        sv = np.linalg.svd(p.domain_basis, compute_uv=False)
        if np.min(sv) <= cfg.rank_rel_eps * np.max(sv):
            failures.append("rank_deficient_domain")
        if nc.hermitian_residual(g) > cfg.cmp_tol * (1.0 + nc.fro(g)):
            failures.append("non_hermitian_gram")
        elif not nc.is_psd(g, cfg):
            failures.append("non_psd_gram")
    return ValidationReport(ok=not failures, failures=tuple(failures), gram=g)


def _ensure_valid(p: PartialOperator, cfg: ToleranceConfig) -> ValidationReport:
    report = validate(p, cfg)
    if not report.ok:
        raise InvalidOperator(
            f"partial operator invalid: {', '.join(report.failures)}"
        )
    return report


def gram_spectrum(
    p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spectral data of G at the data-consistent rank cutoff.

    A Gram eigenvalue counts as zero when it falls below rank_rel_eps
    times max(largest eigenvalue, sigma_max(D) * sigma_max(Ad)); the
    second term keeps a Gram that is pure rounding noise relative to the
    data from looking full rank against itself.

    Returns (kept eigenvalues descending, their eigenvectors, kernel
    eigenvectors).
    """
    g = p.gram()
    if p.d == 0:
        empty = np.zeros((0, 0), dtype=np.complex128)
        return np.zeros(0), empty, empty
    eig = nc.hermitian_eigen(g, cfg)
    top = max(float(np.max(eig.eigenvalues)), 0.0)
    data_scale = float(
        np.linalg.norm(p.domain_basis, 2) * np.linalg.norm(p.action, 2)
    )
    cutoff = cfg.rank_rel_eps * max(top, data_scale)
    keep = eig.eigenvalues > cutoff
    lam = eig.eigenvalues[keep][::-1].copy()
    vecs = eig.eigenvectors[:, keep][:, ::-1].copy()
    kernel = eig.eigenvectors[:, ~keep].copy()
    return lam, vecs, kernel


def _kernel_violation(
    p: PartialOperator, cfg: ToleranceConfig
) -> np.ndarray | None:
    """A domain coefficient vector v with G v ~ 0 but Ad v != 0, if any."""
    if p.d == 0:
        return None
    _, _, kernel = gram_spectrum(p, cfg)
    tol = cfg.cmp_tol * (1.0 + nc.fro(p.action))
    worst = None
    worst_norm = tol
    for i in range(kernel.shape[1]):
        v = kernel[:, i]
        image_norm = float(np.linalg.norm(p.action @ v))
        if image_norm > worst_norm:
            worst = v
            worst_norm = image_norm
    return worst


def is_extendible(
    p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL
) -> ExtendibilityReport:
    """Decide positive extendibility via kernel inclusion ker G <= ker Ad.

    When no extension exists the report carries a witness y (the image of
    a violating kernel direction, normalized): ``<A x, x> = 0`` while
    ``<A x, y> != 0`` along that direction, so no constant M_y works.
    """
    report = _ensure_valid(p, cfg)
    g = report.gram
    bad = _kernel_violation(p, cfg)
    if bad is not None:
        y = p.action @ bad
        y = y / np.linalg.norm(y)
        return ExtendibilityReport(
            extendible=False, gram=g, hilbert_bound=math.inf, witness=y
        )
    return ExtendibilityReport(
        extendible=True, gram=g, hilbert_bound=_finite_bound(p, cfg), witness=None
    )


def _finite_bound(p: PartialOperator, cfg: ToleranceConfig) -> float:
    lam, u, _ = gram_spectrum(p, cfg)
    if lam.size == 0:
        return 0.0
    scaled = p.action @ (u / np.sqrt(lam))
    ev = np.linalg.eigvalsh(scaled.conj().T @ scaled)
    return float(max(np.max(ev), 0.0)) if ev.size else 0.0


def hilbert_bound(p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest eigenvalue of G^{+1/2} (Ad† Ad) G^{+1/2} on ran G, or +inf."""
    _ensure_valid(p, cfg)
    if _kernel_violation(p, cfg) is not None:
        return math.inf
    return _finite_bound(p, cfg)


def my_constant(
    p: PartialOperator, y, cfg: ToleranceConfig = DEFAULT_TOL
) -> float:
    """Best constant in |<A x, y>|^2 <= M_y <A x, x> over the domain.

    Closed form: with v = Ad† y, M_y = v† G+ v when v lies in ran G and
    +inf otherwise.
    """
    _ensure_valid(p, cfg)
    yv = nc.as_vector(y, "y")
    if yv.size != p.n:
        raise ShapeMismatch(f"y must have length {p.n}, got {yv.size}")
    if p.d == 0:
        return 0.0
    v = p.action.conj().T @ yv
    lam, u, _ = gram_spectrum(p, cfg)
    coords = u.conj().T @ v
    if np.linalg.norm(v - u @ coords) > cfg.cmp_tol * (1.0 + np.linalg.norm(v)):
        return math.inf
    return float(np.sum(np.abs(coords) ** 2 / lam)) if lam.size else 0.0
