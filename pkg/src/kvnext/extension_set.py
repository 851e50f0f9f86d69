"""The order interval of positive extensions below a fixed bound.

Among positive extensions dominated by a positive operator B there is a
largest one, obtained by reflecting the minimal construction:

    a_max = B - minimal_extension(B restricted-minus A).

A positive candidate below B extends the partial operator exactly when
it sits between a_n and a_max in the Loewner order, which turns the
two-sided eigenvalue test :func:`in_interval` into a complete membership
criterion.  A congruence parametrization of the interval provides the
sampler used throughout the test suites, and the classical two-block
completion problem is solved by the same machinery specialized to a
domain spanned by leading coordinates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import numcore as nc
from .errors import BoundTooSmall, NotHermitian, NotPsd, ShapeMismatch
from .kvn import KvnResult, krein_von_neumann
from .numcore import DEFAULT_TOL, ToleranceConfig
from .partial_op import PartialOperator, is_extendible


@dataclass(frozen=True)
class IntervalResult:
    a_n: np.ndarray
    a_max: np.ndarray
    degenerate: bool


@dataclass(frozen=True)
class CompletionReport:
    """Three equivalent solvability criteria for the two-block completion.

    completable:      a positive completion exists (extendibility route)
    bounded:          A21† A21 <= M * A11 for some finite M
    range_condition:  ran A21† inside ran A11^{1/2}
    bound_constant:   the sharp M when finite, +inf otherwise
    a22_min:          minimal lower-right block A21 A11+ A21† (when solvable)
    completion:       assembled minimal positive completion (when solvable)
    """

    completable: bool
    bounded: bool
    range_condition: bool
    bound_constant: float
    a22_min: np.ndarray | None
    completion: np.ndarray | None


def _check_bound(
    p: PartialOperator, b: np.ndarray, cfg: ToleranceConfig
) -> KvnResult:
    if b.shape != (p.n, p.n):
        raise ShapeMismatch(f"bound must be {p.n} x {p.n}, got {b.shape}")
    if nc.hermitian_residual(b) > cfg.cmp_tol * (1.0 + nc.fro(b)):
        raise NotHermitian("bound is not Hermitian within tolerance")
    kvn_result = krein_von_neumann(p, cfg)
    gap = b - kvn_result.a_n
    if not nc.is_psd(gap, cfg):
        ev = np.linalg.eigvalsh(0.5 * (gap + gap.conj().T))
        direction = np.linalg.eigh(0.5 * (gap + gap.conj().T))[1][:, 0]
        raise BoundTooSmall(
            f"bound does not dominate the minimal extension "
            f"(violation {float(ev[0]):.3e} along a certificate direction)",
            certificate=direction,
        )
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (gap + gap.conj().T)))) if p.n else 0.0
    if min_eig < 0.0:
        warnings.warn(
            "bound dominates the minimal extension only within psd_tol; "
            "the interval endpoints are tolerance-marginal",
            stacklevel=3,
        )
    return kvn_result


def a_max(p: PartialOperator, b, cfg: ToleranceConfig = DEFAULT_TOL) -> IntervalResult:
    """Largest positive extension of ``p`` dominated by ``b``.

    Built as b - a_n(shifted) where the shifted partial operator has the
    same domain and action ``b @ D - Ad``.
    """
    bm = nc.as_matrix(b, "bound")
    kvn_result = _check_bound(p, bm, cfg)
    shifted = PartialOperator(p.domain_basis, bm @ p.domain_basis - p.action)
    top = bm - krein_von_neumann(shifted, cfg).a_n
    top = 0.5 * (top + top.conj().T)
    scale = 1.0 + nc.fro(kvn_result.a_n)
    return IntervalResult(
        a_n=kvn_result.a_n,
        a_max=top,
        degenerate=nc.fro(top - kvn_result.a_n) <= cfg.cmp_tol * scale,
    )


def in_interval(
    p: PartialOperator, b, candidate, cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Membership in [a_n, a_max]; for positive candidates below the bound
    this is equivalent to being an extension of ``p``."""
    cm = nc.as_matrix(candidate, "candidate")
    if cm.shape != (p.n, p.n):
        raise ShapeMismatch(f"candidate must be {p.n} x {p.n}, got {cm.shape}")
    interval = a_max(p, b, cfg)
    return nc.loewner_leq(interval.a_n, cm, cfg) and nc.loewner_leq(
        cm, interval.a_max, cfg
    )


def sample_extensions(
    p: PartialOperator,
    b,
    count: int,
    seed: int,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> list[np.ndarray]:
    """Draw ``count`` members of the extension interval, deterministically.

    Each sample is a_n + S^{1/2} W S^{1/2} with S = a_max - a_n and W a
    pseudorandom Hermitian contraction 0 <= W <= I, so membership and the
    extension property hold by construction.
    """
    interval = a_max(p, b, cfg)
    spread = interval.a_max - interval.a_n
    spread = 0.5 * (spread + spread.conj().T)
    if not nc.is_psd(spread, cfg):
        raise NotPsd("interval spread a_max - a_n is not PSD within tolerance")
    s_half = nc.psd_sqrt(spread, cfg)
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(max(count, 0)):
        z = rng.standard_normal((p.n, p.n)) + 1j * rng.standard_normal((p.n, p.n))
        q = np.linalg.qr(z)[0]
        w = (q * rng.uniform(0.0, 1.0, p.n)) @ q.conj().T
        m = interval.a_n + s_half @ w @ s_half
        samples.append(0.5 * (m + m.conj().T))
    return samples


def _kernel_inclusion(a11: np.ndarray, a21: np.ndarray, cfg: ToleranceConfig) -> bool:
    """ker A11 <= ker A21, tested on the sub-cutoff eigenvectors of A11.

    The cutoff is scaled against both blocks so an A11 that is pure
    rounding noise next to A21 is treated as zero.
    """
    eig = nc.hermitian_eigen(a11, cfg)
    top = float(np.max(eig.eigenvalues)) if eig.eigenvalues.size else 0.0
    scale = max(top, float(np.linalg.norm(a21, 2)) if a21.size else 0.0)
    cutoff = cfg.rank_rel_eps * scale
    tol = cfg.cmp_tol * (1.0 + nc.fro(a21))
    for i, lam in enumerate(eig.eigenvalues):
        if lam > cutoff:
            continue
        if np.linalg.norm(a21 @ eig.eigenvectors[:, i]) > tol:
            return False
    return True


def halmos_complete(
    a11, a21, cfg: ToleranceConfig = DEFAULT_TOL
) -> CompletionReport:
    """Decide the two-block positive completion problem three ways.

    Given the known column [[A11], [A21]] of a partitioned matrix with
    A11 PSD, a positive completion exists iff A21† A21 <= M A11 for some
    M iff ran A21† lies inside ran A11^{1/2}.  All three criteria are
    evaluated independently; the minimal completion fills the free block
    with the shorted expression A21 A11+ A21†.
    """
    a11m = nc.as_matrix(a11, "A11")
    a21m = nc.as_matrix(a21, "A21")
    if a11m.shape[0] != a11m.shape[1]:
        raise ShapeMismatch(f"A11 must be square, got {a11m.shape}")
    if a21m.shape[1] != a11m.shape[0]:
        raise ShapeMismatch(
            f"A21 must have {a11m.shape[0]} columns, got {a21m.shape[1]}"
        )
    if not nc.is_psd(a11m, cfg):
        raise NotPsd("A11 is not positive semidefinite within tolerance")

    k = a11m.shape[0]
    n = k + a21m.shape[0]
    domain = np.zeros((n, k), dtype=np.complex128)
    domain[:k, :] = np.eye(k)
    action = np.vstack([a11m, a21m])
    completable = is_extendible(PartialOperator(domain, action), cfg).extendible

    bounded = _kernel_inclusion(a11m, a21m, cfg)
    if bounded:
        s = nc.psd_sqrt_pinv(a11m, cfg)
        coupling = s @ (a21m.conj().T @ a21m) @ s
        ev = np.linalg.eigvalsh(0.5 * (coupling + coupling.conj().T))
        bound_constant = float(max(np.max(ev), 0.0)) if ev.size else 0.0
    else:
        bound_constant = float("inf")

    range_condition = nc.range_included(a21m.conj().T, nc.psd_sqrt(a11m, cfg), cfg)

    a22_min = None
    completion = None
    if completable:
        a22_min = a21m @ nc.pseudo_inverse(a11m, cfg) @ a21m.conj().T
        a22_min = 0.5 * (a22_min + a22_min.conj().T)
        completion = np.block([[a11m, a21m.conj().T], [a21m, a22_min]])
        completion = 0.5 * (completion + completion.conj().T)
    return CompletionReport(
        completable=completable,
        bounded=bounded,
        range_condition=range_condition,
        bound_constant=bound_constant,
        a22_min=a22_min,
        completion=completion,
    )
