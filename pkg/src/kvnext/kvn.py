"""Minimal positive extension of a partial operator and its form calculus.

The construction factors through the auxiliary Hilbert space H_A, the
range of A completed under the inner product ``<A x, A x'> := <A x, x'>``.
In domain coordinates that inner product is the Gram matrix G, so H_A is
realized concretely on C^r, r = rank G, via the spectral coordinates

    class of (A D c)  |->  Lam_r^{1/2} U_r† c,      G = U Lam U†.

The embedding J: H_A -> C^n and its adjoint J* then have matrices

    j = Ad U_r Lam_r^{-1/2},          j* = j†,

and the minimal extension is the composition a_n = j j* = Ad G+ Ad†.
Minimality and the two closed-form expressions for the quadratic form
``<a_n y, y>`` are exposed as separate operations so they can be checked
against each other and against brute-force maximization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numcore as nc
from .errors import NotExtendible, ShapeMismatch
from .numcore import DEFAULT_TOL, ToleranceConfig
from .partial_op import (
    ExtendibilityReport,
    PartialOperator,
    gram_spectrum,
    is_extendible,
)


@dataclass(frozen=True)
class HAFactorization:
    """Matrices of J and J* on an orthonormal basis of H_A (r = rank G)."""

    r: int
    j_matrix: np.ndarray
    j_star_matrix: np.ndarray


@dataclass(frozen=True)
class KvnResult:
    a_n: np.ndarray
    factorization: HAFactorization
    norm: float


def _require_extendible(
    p: PartialOperator, cfg: ToleranceConfig
) -> ExtendibilityReport:
    report = is_extendible(p, cfg)
    if not report.extendible:
        raise NotExtendible(
            "no positive extension exists: the form vanishes along a direction "
            "the operator does not kill",
            certificate=report.witness,
        )
    return report


def ha_factorization(
    p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL
) -> HAFactorization:
    """Spectral-coordinate realization of J and J*.

    The Gram of the embedded domain images reproduces the H_A inner
    product, and ``j_star_matrix @ D`` returns the H_A coordinates of the
    action, which is the defining identity J* x = A x on dom A.
    """
    _require_extendible(p, cfg)
    lam, u, _ = gram_spectrum(p, cfg)
    j = p.action @ (u / np.sqrt(lam)) if lam.size else np.zeros(
        (p.n, 0), dtype=np.complex128
    )
    return HAFactorization(r=lam.size, j_matrix=j, j_star_matrix=j.conj().T)


def krein_von_neumann(
    p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL
) -> KvnResult:
    """Construct the minimal positive extension a_n = Ad G+ Ad†.

    The closed form is primary; the factorization J J* is carried along
    and agrees with it within tolerance.  Every positive extension of the
    operator dominates a_n in the Loewner order.
    """
    fact = ha_factorization(p, cfg)
    lam, u, _ = gram_spectrum(p, cfg)
    if lam.size == 0:
        a_n = np.zeros((p.n, p.n), dtype=np.complex128)
    else:
        image = p.action @ u
        a_n = (image / lam) @ image.conj().T
        a_n = 0.5 * (a_n + a_n.conj().T)
    ev = np.linalg.eigvalsh(a_n) if p.n else np.zeros(0)
    norm = float(max(np.max(ev), 0.0)) if ev.size else 0.0
    return KvnResult(a_n=a_n, factorization=fact, norm=norm)


def _pairing_vector(p: PartialOperator, y) -> np.ndarray:
    yv = nc.as_vector(y, "y")
    if yv.size != p.n:
        raise ShapeMismatch(f"y must have length {p.n}, got {yv.size}")
    return p.action.conj().T @ yv


def qform_sup(p: PartialOperator, y, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """sup { |<A x, y>|^2 : x in dom A, <A x, x> <= 1 } = v† G+ v, v = Ad† y.

    Equals the quadratic form ``<a_n y, y>`` of the minimal extension.
    """
    _require_extendible(p, cfg)
    v = _pairing_vector(p, y)
    lam, u, _ = gram_spectrum(p, cfg)
    if lam.size == 0:
        return 0.0
    return float(np.sum(np.abs(u.conj().T @ v) ** 2 / lam))


def qform_shift(p: PartialOperator, y, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """sup { 2 Re <A x, y> - <A x, x> : x in dom A }, by its stationary point.

    The maximizer solves G c = v on ran G; evaluating the shifted form
    there gives the same value as :func:`qform_sup`, through a different
    arithmetic path.
    """
    report = _require_extendible(p, cfg)
    v = _pairing_vector(p, y)
    lam, u, _ = gram_spectrum(p, cfg)
    if lam.size == 0:
        return 0.0
    c = u @ ((u.conj().T @ v) / lam)
    return float(2.0 * np.real(v.conj() @ c) - np.real(c.conj() @ report.gram @ c))


def an_norm(p: PartialOperator, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Operator norm of the minimal extension; equals the Hilbert bound."""
    return krein_von_neumann(p, cfg).norm
