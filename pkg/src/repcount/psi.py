"""Scalar descriptors of the target form psi.

The magnitude <psi> = n_1...n_m (product of diagonal coefficients) sets
the size of the counting main term; the eccentricity measures how far the
diagonal is from being balanced; pseudo-diagonality is the necessary
shape condition for the target to be representable at all.  Everything
here is exact integer arithmetic except where a real-valued descriptor is
explicitly wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from .errors import InputError
from .forms import Form, MultiIndex, TargetForm, quadratic_singular_dim
from .rng import stream


@dataclass(frozen=True)
class PsiProfile:
    magnitude: int
    eccentricity: float
    pseudo_diagonal: bool
    normalized: Dict[MultiIndex, float]


@dataclass(frozen=True)
class HypothesisReport:
    lhs: float
    rhs: float
    satisfied: bool


def magnitude(psi: TargetForm) -> int:
    """Product of the diagonal coefficients; requires them all positive."""
    out = 1
    for i, n in enumerate(psi.diagonal_values(), start=1):
        if n <= 0:
            raise InputError(f"diagonal coefficient n_{i} = {n} must be positive")
        out *= n
    return out


def eccentricity(psi: TargetForm) -> float:
    """max_j log<psi> / (m log n_j), over the diagonal j = 1..m.

    Needs every diagonal coefficient >= 2 so the denominators are positive.
    Always >= 1: the index minimizing n_j already achieves log<psi>/(m log n_j) >= 1.
    """
    diag = psi.diagonal_values()
    if any(n <= 1 for n in diag):
        raise InputError("eccentricity needs all diagonal coefficients >= 2")
    log_mag = math.fsum(math.log(n) for n in diag)
    return max(log_mag / (psi.m * math.log(n)) for n in diag)


def is_pseudo_diagonal(psi: TargetForm) -> bool:
    """|n_j|^d <= prod_k n_{j_k} for every multi-index, checked in exact integers."""
    diag = {i: n for i, n in enumerate(psi.diagonal_values(), start=1)}
    if any(n <= 0 for n in diag.values()):
        raise InputError("pseudo-diagonality needs positive diagonal coefficients")
    for j, n in psi.coeffs.items():
        rhs = 1
        for i in j:
            rhs *= diag[i]
        if abs(n) ** psi.d > rhs:
            return False
    return True


def quadratic_matrix_pseudo_diagonal(gram: Sequence[Sequence[int]]) -> bool:
    """Matrix-entry criterion b_ij^2 <= b_ii b_jj for all i < j (exact)."""
    m = len(gram)
    for i in range(m):
        if len(gram[i]) != m:
            raise InputError("matrix must be square")
        for j in range(i + 1, m):
            if gram[i][j] != gram[j][i]:
                raise InputError("matrix must be symmetric")
    for i in range(m):
        for j in range(i + 1, m):
            if int(gram[i][j]) ** 2 > int(gram[i][i]) * int(gram[j][j]):
                return False
    return True


def normalize_psi(psi: TargetForm) -> Dict[MultiIndex, float]:
    """Coefficients of psi rescaled to unit diagonal.

    n_j -> n_j * (n_{j_1}...n_{j_d})^{-1/d}; diagonal entries map to
    exactly 1.0 and zero coefficients to exactly 0.0.
    """
    diag = {i: n for i, n in enumerate(psi.diagonal_values(), start=1)}
    if any(n <= 0 for n in diag.values()):
        raise InputError("normalization needs positive diagonal coefficients")
    out: Dict[MultiIndex, float] = {}
    for j, n in psi.coeffs.items():
        if len(set(j)) == 1:
            out[j] = 1.0
            continue
        if n == 0:
            out[j] = 0.0
            continue
        denom = 1
        for i in j:
            denom *= diag[i]
        out[j] = n * denom ** (-1.0 / psi.d)
    return out


def profile(psi: TargetForm) -> PsiProfile:
    return PsiProfile(
        magnitude=magnitude(psi),
        eccentricity=eccentricity(psi),
        pseudo_diagonal=is_pseudo_diagonal(psi),
        normalized=normalize_psi(psi),
    )


def check_hypotheses(form: Form, psi: TargetForm, dim_sing: int) -> HypothesisReport:
    """Evaluate s - dimSing > 2^{d-1} max{2r(d-1), r d E(psi)}.

    dim_sing is supplied by the caller: quadratic_singular_dim for d = 2,
    user knowledge otherwise.
    """
    if form.d != psi.d:
        raise InputError(f"degree mismatch: form d={form.d}, psi d={psi.d}")
    ecc = eccentricity(psi)
    r = psi.r
    d = psi.d
    lhs = form.s - dim_sing
    rhs = 2 ** (d - 1) * max(2 * r * (d - 1), r * d * ecc)
    return HypothesisReport(lhs=float(lhs), rhs=float(rhs), satisfied=lhs > rhs)


def check_hypotheses_quadratic(form: Form, psi: TargetForm) -> HypothesisReport:
    """Convenience wrapper computing dim sing F exactly for d = 2."""
    return check_hypotheses(form, psi, quadratic_singular_dim(form))


def random_pd_quadratic(m: int, bound: int, seed: int) -> List[List[int]]:
    """Random positive definite symmetric integer matrix B = M^T M.

    M has entries uniform in [-bound, bound]; regenerated until det != 0.
    Deterministic per seed.
    """
    if m < 1 or bound < 1:
        raise InputError("need m >= 1 and bound >= 1")
    rng = stream("random-pd-quadratic", seed)
    while True:
        mat = rng.integers(-bound, bound + 1, size=(m, m))
        b = mat.T @ mat
        if round(np.linalg.det(mat.astype(float))) != 0 and _int_det(b.tolist()) != 0:
            return [[int(v) for v in row] for row in b]


def _int_det(mat: List[List[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    n = len(mat)
    a = [[int(v) for v in row] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
