"""Generalized Schwarz inequality for families of positive operators.

For PSD matrices A_1..A_k and vectors x_1..x_k,

    || sum_j A_j x_j ||^2  <=  || sum_j A_j || * sum_j <A_j x_j, x_j>,

and the constant || sum_j A_j || is smallest possible.  The proof's
column operator V x = (A_1 x, ..., A_k x) into the direct sum of the
auxiliary spaces H_{A_j} is materialized as the stacked matrix of square
roots, which both certifies the inequality and drives the power
iteration estimating the sharp constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numcore as nc
from .errors import NotPsd, ShapeMismatch
from .numcore import DEFAULT_TOL, ToleranceConfig


@dataclass(frozen=True)
class GapReport:
    lhs: float
    rhs: float
    constant: float


def _checked_family(ops, vecs, cfg: ToleranceConfig):
    if len(ops) != len(vecs) or not ops:
        raise ShapeMismatch("need equally many operators and vectors, at least one")
    mats = [nc.as_matrix(a, f"A_{j}") for j, a in enumerate(ops)]
    n = mats[0].shape[0]
    for j, m in enumerate(mats):
        if m.shape != (n, n):
            raise ShapeMismatch(f"A_{j} has shape {m.shape}, expected {(n, n)}")
        if not nc.is_psd(m, cfg):
            raise NotPsd(f"A_{j} is not positive semidefinite within tolerance")
    xs = [nc.as_vector(x, f"x_{j}") for j, x in enumerate(vecs)]
    for j, x in enumerate(xs):
        if x.size != n:
            raise ShapeMismatch(f"x_{j} has length {x.size}, expected {n}")
    return mats, xs


def schwarz_gap(ops, vecs, cfg: ToleranceConfig = DEFAULT_TOL) -> GapReport:
    """Evaluate both sides of the inequality for one family of vectors."""
    mats, xs = _checked_family(ops, vecs, cfg)
    total = sum(mats)
    lhs = float(np.linalg.norm(sum(m @ x for m, x in zip(mats, xs))) ** 2)
    ev = np.linalg.eigvalsh(0.5 * (total + total.conj().T))
    constant = float(max(np.max(ev), 0.0)) if ev.size else 0.0
    forms = sum(float(np.real(np.vdot(x, m @ x))) for m, x in zip(mats, xs))
    return GapReport(lhs=lhs, rhs=constant * forms, constant=constant)


def minimal_constant_estimate(
    ops, iterations: int, seed: int, cfg: ToleranceConfig = DEFAULT_TOL
) -> float:
    """Estimate the sharp constant by power iteration on V V†.

    V stacks the square roots of the A_j, so V V† is the block matrix of
    root couplings and shares its norm with V† V = sum_j A_j.  The
    returned Rayleigh quotient is a certified lower bound that increases
    to || sum_j A_j || with the iteration count.
    """
    if not ops:
        raise ShapeMismatch("need at least one operator")
    mats = [nc.as_matrix(a, f"A_{j}") for j, a in enumerate(ops)]
    n = mats[0].shape[0]
    for j, m in enumerate(mats):
        if m.shape != (n, n):
            raise ShapeMismatch(f"A_{j} has shape {m.shape}, expected {(n, n)}")
        if not nc.is_psd(m, cfg):
            raise NotPsd(f"A_{j} is not positive semidefinite within tolerance")
    v = np.vstack([nc.psd_sqrt(m, cfg) for m in mats])
    coupling = v @ v.conj().T
    rng = np.random.default_rng(seed)
    h = rng.standard_normal(coupling.shape[0]) + 1j * rng.standard_normal(
        coupling.shape[0]
    )
    estimate = 0.0
    for _ in range(max(int(iterations), 1)):
        h = coupling @ h
        norm = np.linalg.norm(h)
        if norm <= 0.0:
            return 0.0
        h = h / norm
        estimate = float(np.linalg.norm(v.conj().T @ h) ** 2)
    return estimate
