"""Weak values and the post-selected weak-value table.

The central object is the d x d table W[j, i]: the weak value of the
projector onto the i-th vector of basis A, measured on outcome j of a
post-selection in basis B, together with the outcome probabilities P_j.
Rows whose post-selection probability vanishes are masked, not errored.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UndefinedWeakValueError
from .qcore import (
    ATOL_EXACT,
    PROB_FLOOR,
    DensityMatrix,
    Observable,
    OrthonormalBasis,
    StateVector,
)


@dataclass(frozen=True)
class WeakValueTable:
    """Weak values W[j, i] with outcome probabilities P[j] and a row mask.

    Masked (undefined) rows hold zeros in W; ``defined`` carries the
    information.  Estimated tables additionally hold per-entry standard
    errors for the real and imaginary parts.
    """

    dim: int
    W: np.ndarray
    P: np.ndarray
    defined: np.ndarray
    stderr_re: np.ndarray | None = None
    stderr_im: np.ndarray | None = None

    def __post_init__(self):
        d = self.dim
        W = np.array(self.W, dtype=complex)
        P = np.array(self.P, dtype=float)
        defined = np.array(self.defined, dtype=bool)
        if W.shape != (d, d) or P.shape != (d,) or defined.shape != (d,):
            raise DimensionMismatchError(
                f"table shapes {W.shape}/{P.shape}/{defined.shape} do not match dim {d}"
            )
        if P.min() < -ATOL_EXACT or P.max() > 1.0 + ATOL_EXACT:
            raise ValueError("outcome probabilities leave [0, 1]")
        if abs(P.sum() - 1.0) > ATOL_EXACT:
            raise ValueError(f"outcome probabilities sum to {P.sum()}, not 1")
        P = np.clip(P, 0.0, 1.0)
        W[~defined] = 0.0
        for name in ("stderr_re", "stderr_im"):
            err = getattr(self, name)
            if err is not None:
                err = np.array(err, dtype=float)
                if err.shape != (d, d):
                    raise DimensionMismatchError(f"{name} shape {err.shape} != ({d}, {d})")
                err[~defined] = 0.0
                err.setflags(write=False)
                object.__setattr__(self, name, err)
        for name, arr in (("W", W), ("P", P), ("defined", defined)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def estimated(self) -> bool:
        return self.stderr_re is not None


def _as_density_matrix(rho) -> np.ndarray:
    if isinstance(rho, StateVector):
        return np.outer(rho.amplitudes, rho.amplitudes.conj())
    if isinstance(rho, DensityMatrix):
        return rho.elements
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(rho).__name__}")


def weak_value(rho, observable: Observable, post: StateVector) -> complex:
    """Weak value tr(Pi A rho) / tr(Pi rho) for post-selection Pi = |post><post|.

    Parameters
    ----------
    rho : DensityMatrix or StateVector
        Pre-selected state.
    observable : Observable
        Weakly measured observable A.
    post : StateVector
        Post-selection state.

    Raises
    ------
    UndefinedWeakValueError
        If the post-selection probability tr(Pi rho) is below 1e-14.
    """
    mat = _as_density_matrix(rho)
    d = mat.shape[0]
    if observable.dim != d or post.dim != d:
        raise DimensionMismatchError(
            f"dims rho={d}, A={observable.dim}, post={post.dim} do not agree"
        )
    b = post.amplitudes
    prob = np.vdot(b, mat @ b).real
    if prob <= PROB_FLOOR:
        raise UndefinedWeakValueError(
            f"post-selection probability {prob:.3e} is below {PROB_FLOOR}"
        )
    return complex(np.vdot(b, observable.matrix @ mat @ b) / prob)


def weak_value_table(rho, basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> WeakValueTable:
    """Full weak-value table over projectors of basis A and outcomes of basis B.

    Entry W[j, i] = <b_j|a_i><a_i|rho|b_j> / <b_j|rho|b_j> and
    P[j] = <b_j|rho|b_j>.  Rows with P[j] <= 1e-14 are masked.
    """
    mat = _as_density_matrix(rho)
    d = mat.shape[0]
    if basis_a.dim != d or basis_b.dim != d:
        raise DimensionMismatchError(
            f"dims rho={d}, A={basis_a.dim}, B={basis_b.dim} do not agree"
        )
    av, bv = basis_a.vectors, basis_b.vectors
    beta = bv.conj().T @ av                      # beta[j, i] = <b_j|a_i>
    cross = av.conj().T @ mat @ bv               # cross[i, j] = <a_i|rho|b_j>
    P = np.einsum("ij,ji->i", bv.conj().T, mat @ bv).real
    defined = P > PROB_FLOOR
    W = np.zeros((d, d), dtype=complex)
    rows = np.where(defined)[0]
    W[rows] = beta[rows] * cross.T[rows] / P[rows, None]
    return WeakValueTable(dim=d, W=W, P=np.clip(P, 0.0, 1.0), defined=defined)


@dataclass(frozen=True)
class SumRuleReport:
    """Largest deviations from the algebraic identities an exact table obeys.

    row_sum_dev:   max_j |sum_i W[j,i] - 1| over defined rows.
    imag_dev:      max_i |Im sum_j P[j] W[j,i]|.
    diag_dev:      max_i |sum_j P[j] W[j,i] - <a_i|rho|a_i>|, None when no
                   rho was supplied for the cross-check.
    """

    row_sum_dev: float
    imag_dev: float
    diag_dev: float | None

    def within(self, tol: float) -> bool:
        devs = [self.row_sum_dev, self.imag_dev]
        if self.diag_dev is not None:
            devs.append(self.diag_dev)
        return max(devs) <= tol


def check_sum_rules(
    table: WeakValueTable,
    rho: DensityMatrix | None = None,
    basis_a: OrthonormalBasis | None = None,
) -> SumRuleReport:
    """Evaluate the weak-value sum rules on a table.

    For every defined row the weak values of a complete projector family sum
    to one, and the P-weighted column sums reproduce the diagonal of rho in
    basis A (real, so their imaginary part must vanish).  When ``rho`` is
    given the diagonal is cross-checked explicitly; ``basis_a`` defaults to
    the computational reference basis.
    """
    rows = table.defined
    if rows.any():
        row_sum_dev = float(np.max(np.abs(table.W[rows].sum(axis=1) - 1.0)))
    else:
        row_sum_dev = 0.0
    weighted = table.P @ table.W                 # masked rows contribute zero
    imag_dev = float(np.max(np.abs(weighted.imag))) if table.dim else 0.0
    diag_dev = None
    if rho is not None:
        av = basis_a.vectors if basis_a is not None else np.eye(table.dim, dtype=complex)
        diag = np.einsum("ij,ji->i", av.conj().T, rho.elements @ av).real
        diag_dev = float(np.max(np.abs(weighted - diag)))
    return SumRuleReport(row_sum_dev=row_sum_dev, imag_dev=imag_dev, diag_dev=diag_dev)
