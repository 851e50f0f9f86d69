"""Intertwining relations preserved by the minimal positive extension.

If two operators B, C leave dom A invariant and intertwine with the
partial operator as ``C† A = A B`` and ``B† A = A C`` on the domain, the
same relations hold globally for the minimal extension:

    C† a_n = a_n B,        B† a_n = a_n C.

The hypothesis check solves for B x and C x in the domain basis (least
squares) and compares form values columnwise; spectral boundedness of
B C on the domain, required in wider generality, is automatic here and
recorded as such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numcore as nc
from .errors import DomainNotInvariant, HypothesesFail, ShapeMismatch
from .kvn import krein_von_neumann
from .numcore import DEFAULT_TOL, ToleranceConfig
from .partial_op import PartialOperator, validate


@dataclass(frozen=True)
class CommutationReport:
    hypotheses_hold: bool
    residual_cb: float
    residual_bc: float
    conclusion_holds: bool
    spectral_hypothesis: str = "automatic in finite dimensions"


def _hypothesis_status(
    p: PartialOperator, b: np.ndarray, c: np.ndarray, cfg: ToleranceConfig
) -> tuple[bool, str]:
    validate(p, cfg).raise_if_invalid()
    if b.shape != (p.n, p.n) or c.shape != (p.n, p.n):
        raise ShapeMismatch(
            f"B and C must be {p.n} x {p.n}, got {b.shape} and {c.shape}"
        )
    if p.d == 0:
        return True, "ok"
    for name, m in (("B", b), ("C", c)):
        if not nc.range_included(m @ p.domain_basis, p.domain_basis, cfg):
            return False, f"invariance: {name} does not leave the domain invariant"
    # coefficients of B x_j and C x_j in the domain basis
    coeff_b = np.linalg.lstsq(p.domain_basis, b @ p.domain_basis, rcond=None)[0]
    coeff_c = np.linalg.lstsq(p.domain_basis, c @ p.domain_basis, rcond=None)[0]
    scale = cfg.cmp_tol * (
        1.0 + nc.fro(p.action) * max(nc.fro(b), nc.fro(c), 1.0)
    )
    if nc.fro(c.conj().T @ p.action - p.action @ coeff_b) > scale:
        return False, "C† A = A B fails on the domain"
    if nc.fro(b.conj().T @ p.action - p.action @ coeff_c) > scale:
        return False, "B† A = A C fails on the domain"
    return True, "ok"


def check_intertwining(
    p: PartialOperator, b, c, cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Whether B, C leave dom A invariant and intertwine with A on it."""
    bm = nc.as_matrix(b, "B")
    cm = nc.as_matrix(c, "C")
    ok, _ = _hypothesis_status(p, bm, cm, cfg)
    return ok


def verify_commutation(
    p: PartialOperator, b, c, cfg: ToleranceConfig = DEFAULT_TOL
) -> CommutationReport:
    """Check the hypotheses, then measure the intertwining residuals of a_n.

    ``conclusion_holds`` must come out true whenever the preconditions
    do; a false value signals a tolerance or implementation fault and is
    reported rather than hidden.
    """
    bm = nc.as_matrix(b, "B")
    cm = nc.as_matrix(c, "C")
    ok, reason = _hypothesis_status(p, bm, cm, cfg)
    if not ok:
        if reason.startswith("invariance"):
            raise DomainNotInvariant(reason)
        raise HypothesesFail(reason)
    a_n = krein_von_neumann(p, cfg).a_n
    residual_cb = nc.fro(cm.conj().T @ a_n - a_n @ bm)
    residual_bc = nc.fro(bm.conj().T @ a_n - a_n @ cm)
    tol = cfg.cmp_tol * (1.0 + nc.fro(a_n) * max(nc.fro(bm), nc.fro(cm)))
    return CommutationReport(
        hypotheses_hold=True,
        residual_cb=residual_cb,
        residual_bc=residual_bc,
        conclusion_holds=residual_cb <= tol and residual_bc <= tol,
    )
