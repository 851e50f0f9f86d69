"""Positive definite operator-valued kernels on a finite index set.

A kernel assigns an n x n matrix K(s, t) to every pair from {1..m}.  It
is positive definite when the assembled (m n) x (m n) block matrix is
PSD.  Functions u: {1..m} -> C^n are flattened index-major: block s of
the flat vector holds u(s), and the assembled operator places K(s, t)
in block row t, block column s, so that

    <A u, v> = sum_{s,t} <K(s,t) u(s), v(t)>.

Partially specified kernels are completed minimally by applying the
minimal-extension construction to the associated partial operator on
the flattened space and reading the blocks back off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numcore as nc
from .errors import NotPsd, ShapeMismatch
from .kvn import krein_von_neumann
from .numcore import DEFAULT_TOL, ToleranceConfig
from .partial_op import PartialOperator


@dataclass(frozen=True)
class Kernel:
    """blocks[s, t] = K(s, t); shape (m, m, n, n)."""

    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=np.complex128)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise ShapeMismatch(f"kernel blocks must have shape (m, m, n, n), got {b.shape}")
        object.__setattr__(self, "blocks", b)

    @property
    def m(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[2]


@dataclass(frozen=True)
class KernelProblem:
    """A partially specified kernel: prescribed values of the associated
    operator on a subspace of flattened finitely supported functions."""

    m: int
    n: int
    sub: PartialOperator

    def __post_init__(self):
        if self.sub.n != self.m * self.n:
            raise ShapeMismatch(
                f"underlying operator lives on C^{self.sub.n}, expected C^{self.m * self.n}"
            )


def operator_from_kernel(kernel: Kernel, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Assemble the block matrix of the kernel (block (t, s) is K(s, t))."""
    m, n = kernel.m, kernel.n
    out = np.zeros((m * n, m * n), dtype=np.complex128)
    for s in range(m):
        for t in range(m):
            out[t * n : (t + 1) * n, s * n : (s + 1) * n] = kernel.blocks[s, t]
    return out


def kernel_from_operator(
    matrix, m: int, n: int, cfg: ToleranceConfig = DEFAULT_TOL
) -> Kernel:
    """Read the kernel blocks off a PSD operator on the flattened space."""
    mat = nc.as_matrix(matrix)
    if mat.shape != (m * n, m * n):
        raise ShapeMismatch(f"matrix must be {m * n} x {m * n}, got {mat.shape}")
    if not nc.is_psd(mat, cfg):
        raise NotPsd("operator is not positive semidefinite within tolerance")
    blocks = np.empty((m, m, n, n), dtype=np.complex128)
    for s in range(m):
        for t in range(m):
            blocks[s, t] = mat[t * n : (t + 1) * n, s * n : (s + 1) * n]
    return Kernel(blocks=blocks)


def block_symmetry_residual(kernel: Kernel) -> float:
    """Largest deviation from the adjoint symmetry K(s,t)† = K(t,s)."""
    worst = 0.0
    for s in range(kernel.m):
        for t in range(kernel.m):
            worst = max(
                worst,
                nc.fro(kernel.blocks[s, t].conj().T - kernel.blocks[t, s]),
            )
    return worst


def is_positive_definite_kernel(
    kernel: Kernel, cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    return nc.is_psd(operator_from_kernel(kernel, cfg), cfg)


def extend_kernel(problem: KernelProblem, cfg: ToleranceConfig = DEFAULT_TOL) -> Kernel:
    """Minimal positive-definite kernel whose operator extends the data.

    Every kernel compatible with the prescription dominates the result in
    the order induced by the assembled operators.
    """
    minimal = krein_von_neumann(problem.sub, cfg).a_n
    return kernel_from_operator(minimal, problem.m, problem.n, cfg)


def kernel_preceq(k: Kernel, l: Kernel, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Kernel order: compare the assembled operators in the Loewner order."""
    if (k.m, k.n) != (l.m, l.n):
        raise ShapeMismatch(
            f"kernels have different shapes: ({k.m}, {k.n}) vs ({l.m}, {l.n})"
        )
    return nc.loewner_leq(
        operator_from_kernel(k, cfg), operator_from_kernel(l, cfg), cfg
    )
