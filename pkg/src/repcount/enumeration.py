"""Exact counting of representations and lattice points.

Everything in this module is exact integer arithmetic: sphere
enumeration for definite forms uses rational LDL descent (no floating
point in the bounds), box counting uses pruned nested enumeration, and
the Smith normal form is classical integer elimination with explicit
unimodular transforms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetError, InputError
from .forms import (
    ExpandedSystem,
    Form,
    MultiIndex,
    Poly,
    TargetForm,
    Verdict,
    expand_system,
    is_positive_definite,
)
from .rng import stream

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class Box:
    """Per-block symmetric box [-P_i, P_i]^s with P_1 <= ... <= P_m."""

    bounds: Tuple[float, ...]

    def __post_init__(self):
        if not self.bounds:
            raise InputError("box needs at least one bound")
        if any(b <= 0 for b in self.bounds):
            raise InputError("box bounds must be positive")
        if any(a > b for a, b in zip(self.bounds, self.bounds[1:])):
            raise InputError("box bounds must be sorted ascending")
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))

    @property
    def m(self) -> int:
        return len(self.bounds)

    def radii(self) -> List[int]:
        return [int(math.floor(b)) for b in self.bounds]


# ---------------------------------------------------------------------------
# sphere enumeration {x : F(x) = n}
# ---------------------------------------------------------------------------

def list_representations(form: Form, n: int, budget: int = DEFAULT_BUDGET) -> List[Tuple[int, ...]]:
    """All x in Z^s with F(x) = n, for positive definite F.

    Degree 2 uses exact rational LDL interval descent; higher degrees use
    a sup-norm box bound from a sampled minimum of F on the boundary of
    the unit box (10% safety margin) followed by exact verification.
    """
    verdict = is_positive_definite(form)
    if not verdict.is_positive():
        raise InputError(f"form is not positive definite ({verdict.value})")
    if n < 0:
        return []
    if n == 0:
        return [(0,) * form.s]
    if form.d == 2:
        sols = _quadratic_level_set(form, n)
    else:
        sols = _box_filter_level_set(form, n, budget)
    sols.sort()
    return sols


def _quadratic_level_set(form: Form, n: int) -> List[Tuple[int, ...]]:
    g = form.gram()
    s = form.s
    c, u = _ldl(g)
    sols: List[Tuple[int, ...]] = []
    x = [0] * s

    def descend(i: int, remaining: Fraction):
        if remaining < 0:
            return
        if i < 0:
            if remaining == 0:
                sols.append(tuple(x))
            return
        mu = Fraction(0)
        for j in range(i + 1, s):
            mu += u[i][j] * x[j]
        rho = remaining / c[i]
        hi = _floor_plus_sqrt(-mu, rho)
        lo = -_floor_plus_sqrt(mu, rho)
        for xi in range(lo, hi + 1):
            x[i] = xi
            descend(i - 1, remaining - c[i] * (xi + mu) ** 2)
        x[i] = 0

    descend(s - 1, Fraction(n))
    for v in sols:
        assert form.evaluate(v) == n
    return sols


def _ldl(g: List[List[Fraction]]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """Q(x) = sum_i c_i (x_i + sum_{j>i} u_ij x_j)^2 for a PD Gram matrix."""
    s = len(g)
    c = [Fraction(0)] * s
    u = [[Fraction(0)] * s for _ in range(s)]
    for i in range(s):
        ci = g[i][i] - sum(c[k] * u[k][i] ** 2 for k in range(i))
        if ci <= 0:
            raise InputError("Gram matrix is not positive definite")
        c[i] = ci
        u[i][i] = Fraction(1)
        for j in range(i + 1, s):
            u[i][j] = (g[i][j] - sum(c[k] * u[k][i] * u[k][j] for k in range(i))) / ci
    return c, u


def _floor_plus_sqrt(q: Fraction, rho: Fraction) -> int:
    """floor(q + sqrt(rho)) computed exactly for rationals, rho >= 0."""
    approx = math.floor(float(q) + math.sqrt(max(float(rho), 0.0)))

    def below(x: int) -> bool:  # x <= q + sqrt(rho)
        t = x - q
        return t <= 0 or t * t <= rho

    while below(approx + 1):
        approx += 1
    while not below(approx):
        approx -= 1
    return approx


def _box_filter_level_set(form: Form, n: int, budget: int) -> List[Tuple[int, ...]]:
    mu = _boundary_min_estimate(form)
    if mu <= 0:
        raise InputError("could not certify a positive minimum on the unit box boundary")
    bound = int(math.floor((n / (0.9 * mu)) ** (1.0 / form.d))) + 1
    count = (2 * bound + 1) ** form.s
    if count > budget:
        raise BudgetError(f"level-set box has {count} candidates > budget {budget}")
    grid = _integer_grid(bound, form.s)
    vals = _eval_int_guarded(form.poly(), grid, bound)
    mask = vals == n
    return [tuple(int(v) for v in row) for row in grid[mask]]


def _boundary_min_estimate(form: Form, per_face: int = 400) -> float:
    """Sampled minimum of F on the boundary of the unit sup-norm ball."""
    rng = stream("boundary-min", 0)
    s = form.s
    best = math.inf
    for k in range(s):
        for sign in (-1.0, 1.0):
            pts = rng.uniform(-1.0, 1.0, size=(per_face, s))
            pts[:, k] = sign
            vals = form.poly().evaluate_float_many(pts)
            best = min(best, float(vals.min()))
    corners = np.array(list(itertools.product((-1.0, 1.0), repeat=s)))
    best = min(best, float(form.poly().evaluate_float_many(corners).min()))
    return best


def _integer_grid(radius: int, dims: int) -> np.ndarray:
    axes = [np.arange(-radius, radius + 1, dtype=np.int64)] * dims
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _eval_int_guarded(poly: Poly, points: np.ndarray, radius: int) -> np.ndarray:
    if poly.bound_abs([radius] * poly.nvars) < 2**62:
        return poly.evaluate_int_many(points)
    return np.array([poly.evaluate(list(map(int, p))) for p in points], dtype=object)


# ---------------------------------------------------------------------------
# N(F; psi): unbounded representation count for definite F
# ---------------------------------------------------------------------------

def count_representations(form: Form, psi: TargetForm, budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of tuples (x_1..x_m) with Phi_j(xbar) = n_j for all j.

    Enumerates the finite level sets {x : F(x) = n_i} and filters tuples
    on the off-diagonal equations (pruned as soon as determined).
    """
    if form.d != psi.d:
        raise InputError(f"degree mismatch: form d={form.d}, psi d={psi.d}")
    verdict = is_positive_definite(form)
    if not verdict.is_positive():
        raise InputError(f"form is not positive definite ({verdict.value})")
    diag = psi.diagonal_values()
    if any(n < 0 for n in diag):
        return 0

    spheres: Dict[int, List[Tuple[int, ...]]] = {}
    for n in diag:
        if n not in spheres:
            spheres[n] = list_representations(form, n, budget)
    if any(len(spheres[n]) == 0 for n in diag):
        return 0

    if psi.m == 1:
        return len(spheres[diag[0]])
    if psi.d == 2 and psi.m == 2:
        return _count_pairs_bilinear(form, psi, spheres[diag[0]], spheres[diag[1]])

    sys = expand_system(form, psi.m)
    return _filter_tuples(sys, psi, [spheres[n] for n in diag])


def _count_pairs_bilinear(form: Form, psi: TargetForm,
                          s1: List[Tuple[int, ...]], s2: List[Tuple[int, ...]]) -> int:
    """m = d = 2 fast path: the only off-diagonal equation is bilinear."""
    target = psi.coeffs[(1, 2)]
    w = np.zeros((form.s, form.s), dtype=np.int64)
    for (e, c) in form.terms.items():
        idx = [v for v, k in enumerate(e) for _ in range(k)]
        a, b = idx
        # Phi_(1,2)(x, y) = x^T (2G) y with G the Gram matrix
        if a == b:
            w[a, a] += 2 * c
        else:
            w[a, b] += c
            w[b, a] += c
    a1 = np.array(s1, dtype=np.float64)
    a2 = np.array(s2, dtype=np.float64)
    y = w.astype(np.float64) @ a2.T
    # |x^T W y| stays far below 2^53 at desk scale, so float64 matmul is exact
    count = 0
    chunk = max(1, int(2**25 // max(1, a2.shape[0])))
    for start in range(0, a1.shape[0], chunk):
        vals = a1[start:start + chunk] @ y
        count += int((vals == float(target)).sum())
    return count


def _filter_tuples(sys: ExpandedSystem, psi: TargetForm,
                   spheres: List[List[Tuple[int, ...]]]) -> int:
    s, m = sys.s, sys.m
    by_depth: Dict[int, List[Tuple[MultiIndex, Poly]]] = {i: [] for i in range(1, m + 1)}
    for j, poly in sys.polys.items():
        if len(set(j)) > 1:
            by_depth[max(j)].append((j, poly))

    count = 0
    flat = [0] * (m * s)

    def descend(depth: int, specialized: List[Tuple[MultiIndex, Poly]]):
        nonlocal count
        for point in spheres[depth - 1]:
            base = (depth - 1) * s
            for k, v in enumerate(point):
                flat[base + k] = v
            assignment = {base + k: v for k, v in enumerate(point)}
            ok = True
            nxt: List[Tuple[MultiIndex, Poly]] = []
            for j, poly in specialized:
                if max(j) == depth:
                    if poly.partial_eval(assignment).evaluate([0] * (m * s)) != psi.coeffs[j]:
                        ok = False
                        break
                else:
                    nxt.append((j, poly.partial_eval(assignment)))
            if not ok:
                continue
            if depth == m:
                count += 1
            else:
                descend(depth + 1, nxt)

    all_offdiag = [(j, p) for i in range(1, m + 1) for (j, p) in by_depth[i]]
    descend(1, all_offdiag)
    return count


# ---------------------------------------------------------------------------
# boxed count N_psi(P_1..P_m)
# ---------------------------------------------------------------------------

def count_boxed(form: Form, psi: TargetForm, box: Box, budget: int = DEFAULT_BUDGET) -> int:
    """Exact count of xbar with x_i in [-P_i,P_i]^s and Phi_j(xbar) = n_j.

    Works for indefinite forms and psi = 0.  Blocks are enumerated in
    increasing P_i; every equation is checked at the first moment all its
    blocks are assigned (the diagonal equations F(x_i) = n_i are applied
    as vectorized filters on each block grid).
    """
    if form.d != psi.d:
        raise InputError(f"degree mismatch: form d={form.d}, psi d={psi.d}")
    if psi.m != box.m:
        raise InputError(f"psi has m={psi.m} blocks, box has {box.m}")
    sys = expand_system(form, psi.m)
    radii = box.radii()
    total = 1
    for r in radii:
        total *= (2 * r + 1) ** form.s
    if total > budget:
        raise BudgetError(f"box holds {total} candidate tuples > budget {budget}")

    # per-block survivors of the diagonal equation F(x_i) = n_i
    survivors: List[np.ndarray] = []
    for i in range(1, psi.m + 1):
        grid = _integer_grid(radii[i - 1], form.s)
        vals = _eval_int_guarded(form.poly(), grid, radii[i - 1])
        survivors.append(grid[vals == psi.diagonal(i)])
    if any(len(v) == 0 for v in survivors):
        return 0

    m, s = psi.m, form.s
    offdiag: List[Tuple[MultiIndex, Poly]] = [
        (j, p) for j, p in sys.polys.items() if len(set(j)) > 1
    ]
    if m == 1:
        return len(survivors[0])

    count = 0

    def descend(depth: int, specialized: List[Tuple[MultiIndex, Poly]]):
        nonlocal count
        if depth == m:
            pts = survivors[m - 1]
            # all remaining equations involve only the last block
            mask = np.ones(len(pts), dtype=bool)
            full = np.zeros((len(pts), m * s), dtype=np.int64)
            full[:, (m - 1) * s: m * s] = pts
            for j, poly in specialized:
                vals = _eval_int_guarded(poly, full, max(radii))
                mask &= vals == psi.coeffs[j]
            count += int(mask.sum())
            return
        base = (depth - 1) * s
        for point in survivors[depth - 1]:
            assignment = {base + k: int(v) for k, v in enumerate(point)}
            ok = True
            nxt: List[Tuple[MultiIndex, Poly]] = []
            for j, poly in specialized:
                pe = poly.partial_eval(assignment)
                if max(j) == depth:
                    if pe.evaluate([0] * (m * s)) != psi.coeffs[j]:
                        ok = False
                        break
                else:
                    nxt.append((j, pe))
            if ok:
                descend(depth + 1, nxt)

    descend(1, offdiag)
    return count


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    """U C V = D with U, V unimodular and D = diag(gamma_1 | gamma_2 | ...)."""

    u: Tuple[Tuple[int, ...], ...]
    d: Tuple[Tuple[int, ...], ...]
    v: Tuple[Tuple[int, ...], ...]

    @property
    def diagonal(self) -> List[int]:
        return [self.d[i][i] for i in range(len(self.d))]


def smith_normal_form(c_matrix: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form of a nonsingular integer matrix."""
    m = len(c_matrix)
    a = [[int(v) for v in row] for row in c_matrix]
    if any(len(row) != m for row in a):
        raise InputError("matrix must be square")
    if _int_det(a) == 0:
        raise InputError("matrix is singular")
    u = _identity(m)
    v = _identity(m)

    for t in range(m):
        while True:
            pivot = _min_abs_entry(a, t)
            if pivot is None:
                raise InputError("unexpected zero block in SNF")  # impossible: det != 0
            pi, pj = pivot
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for row in a:
                    row[t], row[pj] = row[pj], row[t]
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    for k in range(m):
                        a[i][k] -= q * a[t][k]
                        u[i][k] -= q * u[t][k]
                if a[i][t]:
                    dirty = True
            for jc in range(t + 1, m):
                q = a[t][jc] // p
                if q:
                    for row in a:
                        row[jc] -= q * row[t]
                    for row in v:
                        row[jc] -= q * row[t]
                if a[t][jc]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide the trailing block for the chain to hold
            bad = next(
                ((i, jc) for i in range(t + 1, m) for jc in range(t + 1, m)
                 if a[i][jc] % p != 0),
                None,
            )
            if bad is None:
                break
            bi, _ = bad
            for k in range(m):
                a[t][k] += a[bi][k]
                u[t][k] += u[bi][k]

    for t in range(m):
        if a[t][t] < 0:
            for k in range(m):
                a[t][k] = -a[t][k]
                u[t][k] = -u[t][k]

    assert _mat_mul(_mat_mul(u, [list(r) for r in c_matrix]), v) == a
    assert abs(_int_det(u)) == 1 and abs(_int_det(v)) == 1
    return SnfResult(
        u=tuple(tuple(r) for r in u),
        d=tuple(tuple(r) for r in a),
        v=tuple(tuple(r) for r in v),
    )


def _identity(m: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def _min_abs_entry(a: List[List[int]], t: int) -> Optional[Tuple[int, int]]:
    best = None
    best_val = None
    for i in range(t, len(a)):
        for j in range(t, len(a)):
            if a[i][j] and (best_val is None or abs(a[i][j]) < best_val):
                best, best_val = (i, j), abs(a[i][j])
    return best


def _mat_mul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _int_det(mat: Sequence[Sequence[int]]) -> int:
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


# ---------------------------------------------------------------------------
# lattice counting N_C(P)
# ---------------------------------------------------------------------------

def count_lattice(form: Form, c_matrix: Sequence[Sequence[int]], p_bound: float,
                  budget: int = DEFAULT_BUDGET) -> int:
    """Points X in Z^{s x m} C of height <= P on which every Phi_j vanishes.

    Enumerates Y over the exact preimage box {Y : |YC|_inf <= P}, row by
    row (rows of X are independent for the height condition), and filters
    X = YC on the full system.
    """
    m = len(c_matrix)
    c = [[int(v) for v in row] for row in c_matrix]
    det = _int_det(c)
    if det == 0:
        raise InputError("matrix C is singular")
    if p_bound <= 0:
        raise InputError("P must be positive")
    height = int(math.floor(p_bound))

    # |y C|_inf <= P  =>  |y_i| <= P * sum_j |(C^-1)_{ji}|
    cinv = _fraction_inverse(c)
    col_bounds = [
        int(math.floor(p_bound * sum(abs(cinv[jr][i]) for jr in range(m)))) for i in range(m)
    ]
    rows: List[Tuple[int, ...]] = []
    for y in itertools.product(*[range(-b, b + 1) for b in col_bounds]):
        img = [sum(y[k] * c[k][i] for k in range(m)) for i in range(m)]
        if all(abs(val) <= height for val in img):
            rows.append(tuple(img))

    s = form.s
    n_candidates = len(rows) ** s
    if n_candidates > budget:
        raise BudgetError(f"lattice enumeration has {n_candidates} candidates > budget {budget}")
    if not rows:
        return 0

    sys = expand_system(form, m)
    zero = TargetForm(m, form.d, {})
    # X rows are independent: assemble flat points (variable (i,n) = X[n][i])
    row_arr = np.array(rows, dtype=np.int64)
    idx_iter = itertools.product(range(len(rows)), repeat=s)
    flats = np.empty((n_candidates, m * s), dtype=np.int64)
    for ptr, choice in enumerate(idx_iter):
        x_mat = row_arr[list(choice)]  # s x m
        flats[ptr] = x_mat.T.reshape(-1)
    values = sys.values_matrix(flats)
    targets = np.array([zero.coeffs[j] for j in sys.indices], dtype=np.int64)
    mask = (values == targets[None, :]).all(axis=1)
    return int(mask.sum())


def _fraction_inverse(mat: List[List[int]]) -> List[List[Fraction]]:
    n = len(mat)
    a = [[Fraction(v) for v in row] for row in mat]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise InputError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        f = a[col][col]
        a[col] = [x / f for x in a[col]]
        inv[col] = [x / f for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                g = a[r][col]
                a[r] = [x - g * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - g * y for x, y in zip(inv[r], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# the gamma-hat product identity
# ---------------------------------------------------------------------------

def gamma_product_identity(c_diag: Sequence[int], d: int) -> Tuple[int, int]:
    """lhs = prod_j gamma_{j_1}...gamma_{j_d} over J; rhs = (prod gamma_i)^{rd/m}.

    Both sides are exact integers; rd/m is integral because each block
    index appears equally often across the multi-index set.
    """
    from .forms import multi_index_set  # local import to avoid cycle at load

    gammas = [int(g) for g in c_diag]
    if any(g < 1 for g in gammas):
        raise InputError("diagonal entries must be >= 1")
    m = len(gammas)
    indices = multi_index_set(m, d)
    r = len(indices)
    lhs = 1
    for j in indices:
        for i in j:
            lhs *= gammas[i - 1]
    assert (r * d) % m == 0
    prod = 1
    for g in gammas:
        prod *= g
    rhs = prod ** ((r * d) // m)
    return lhs, rhs
