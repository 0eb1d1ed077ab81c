"""Circle-method objects at desk scale.

Exponential sums and Gauss sums are evaluated by exact enumeration with
exact rational phase reduction wherever the frequency vector is rational
(complete sums are reduced to integer histograms of the phase numerator,
so float error enters only through the final root-of-unity table).
Oscillatory integrals are numerical with a reported error.  Nothing here
asserts the paper-style inequalities with implied constants; the two
checkable facts (orthogonality inversion and the constant-one
Cauchy-Schwarz step of Weyl differencing) are exact.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetError, InputError, RepcountError
from .forms import ExpandedSystem, MultiIndex, Poly, TargetForm
from .rng import stream

DEFAULT_PHASE_BUDGET = 10**8
_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# arc bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomogenizedArc:
    a: Tuple[int, ...]
    q: int
    beta: Tuple[float, ...]


@dataclass(frozen=True)
class ArcPoint:
    alpha: Tuple[float, ...]
    approx: Optional[Tuple[Tuple[int, int], ...]] = None  # per-j (a_j, q_j)
    homogenized: Optional[HomogenizedArc] = None


@dataclass(frozen=True)
class ArcParams:
    theta: float
    c: float
    p_scale: float
    d: int
    eta: float = 0.0
    gamma_hat: Optional[Tuple[int, ...]] = None  # per-j, 1 when C = I
    cf_cutoff: int = 10**6

    def __post_init__(self):
        if not 0 < self.theta <= 1 - self.eta:
            raise InputError(f"need 0 < theta <= 1 - eta, got theta={self.theta}, eta={self.eta}")
        if self.c <= 0 or self.p_scale <= 1 or self.d < 2:
            raise InputError("need c > 0, P > 1, d >= 2")


@dataclass(frozen=True)
class ArcClassification:
    kind: str  # "major" | "minor"
    point: Optional[ArcPoint]


# ---------------------------------------------------------------------------
# lattice iteration helpers
# ---------------------------------------------------------------------------

def _block_ranges(box_radii: Sequence[int], s: int) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for r in box_radii:
        out.extend([(-r, r)] * s)
    return out


def _range_sizes(ranges: Sequence[Tuple[int, int]]) -> Tuple[List[int], int]:
    sizes = [hi - lo + 1 for lo, hi in ranges]
    total = 1
    for sz in sizes:
        total *= sz
    return sizes, total


def _iter_lattice(ranges: Sequence[Tuple[int, int]], chunk: int = _CHUNK) -> Iterable[np.ndarray]:
    """Yield the integer grid prod [lo_v, hi_v] in fixed-order chunks."""
    sizes, total = _range_sizes(ranges)
    nvars = len(ranges)
    strides = [0] * nvars
    acc = 1
    for v in range(nvars - 1, -1, -1):
        strides[v] = acc
        acc *= sizes[v]
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        pts = np.empty((stop - start, nvars), dtype=np.int64)
        for v in range(nvars):
            pts[:, v] = (idx // strides[v]) % sizes[v] + ranges[v][0]
        yield pts


def _phi_values(sys: ExpandedSystem, points: np.ndarray, max_abs: int) -> np.ndarray:
    cols = []
    for p in sys.polys.values():
        if p.bound_abs([max_abs] * p.nvars) < 2**62:
            cols.append(p.evaluate_int_many(points))
        else:
            cols.append(p.evaluate_float_many(points.astype(np.float64)))
    return np.stack(cols, axis=1)


def _fsum_complex(parts: List[complex]) -> complex:
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


# ---------------------------------------------------------------------------
# exponential sum T(alpha; P)
# ---------------------------------------------------------------------------

def exponential_sum(sys: ExpandedSystem, alpha: Sequence[float], box,
                    budget: int = DEFAULT_PHASE_BUDGET, threads: int = 1) -> complex:
    """T(alpha; P) = sum over the box of e(sum_j alpha_j Phi_j(xbar))."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (sys.r,):
        raise InputError(f"alpha must have length r={sys.r}")
    radii = box.radii()
    if len(radii) != sys.m:
        raise InputError(f"box has {len(radii)} blocks, system has m={sys.m}")
    ranges = _block_ranges(radii, sys.s)
    _, total = _range_sizes(ranges)
    if total > budget:
        raise BudgetError(f"{total} phase evaluations exceed budget {budget}")
    max_abs = max(radii)

    def chunk_sum(pts: np.ndarray) -> complex:
        vals = _phi_values(sys, pts, max_abs).astype(np.float64)
        w = vals @ alpha
        z = np.exp(2j * np.pi * (w - np.round(w)))
        return complex(z.sum())

    parts = [chunk_sum(pts) for pts in _iter_lattice(ranges)]
    return _fsum_complex(parts)


# ---------------------------------------------------------------------------
# exact Fourier inversion of the box count
# ---------------------------------------------------------------------------

def _poly_range(poly: Poly, radii: Sequence[int]) -> Tuple[int, int]:
    """Exact [min, max] interval bound of the polynomial over the box."""
    lo = hi = 0
    for e, c in poly.terms.items():
        mag = abs(c)
        all_even = True
        for r, k in zip(radii, e):
            mag *= r**k
            if k % 2:
                all_even = False
        if all_even:
            if c > 0:
                hi += mag
            else:
                lo -= mag
        else:
            hi += mag
            lo -= mag
    return lo, hi


def fourier_inversion_count(sys: ExpandedSystem, psi: TargetForm, box,
                            q_modulus: Optional[int] = None,
                            method: str = "auto",
                            grid_budget: int = 6 * 10**7,
                            point_budget: int = 2 * 10**7,
                            q_max: int = 10**6) -> int:
    """Recover the boxed count by discrete orthogonality.

    (1/Q^r) sum_{a in [0,Q)^r} T(a/Q; P) e(-n.a/Q), with Q large enough
    that every Phi_j - n_j is determined by its residue mod Q; the result
    is rounded to the nearest integer and must round cleanly.
    """
    if psi.m != sys.m or psi.d != sys.d:
        raise InputError("psi does not match the expanded system")
    radii = box.radii()
    ranges = _block_ranges(radii, sys.s)
    _, total = _range_sizes(ranges)
    if total > point_budget:
        raise BudgetError(f"box holds {total} points > budget {point_budget}")

    var_radii = [r for r in radii for _ in range(sys.s)]
    if q_modulus is None:
        width = 0
        for p in sys.polys.values():
            lo, hi = _poly_range(p, var_radii)
            width = max(width, hi - lo)
        q_modulus = width + 1
    q = int(q_modulus)
    if q > q_max:
        raise BudgetError(f"modulus Q={q} exceeds configured limit {q_max}")

    values = np.concatenate([_phi_values(sys, pts, max(radii)) for pts in _iter_lattice(ranges)])
    n_vec = np.array([psi.coeffs[j] for j in sys.indices], dtype=np.int64)
    shifted = (values - n_vec[None, :]) % q

    r = sys.r
    if method == "auto":
        method = "grid" if q**r * total <= grid_budget else "factored"
    if method == "grid":
        if q**r * total > 4 * grid_budget:
            raise BudgetError(f"grid method needs {q ** r * total} operations")
        est = _inversion_grid(shifted, q, r)
    elif method == "factored":
        est = _inversion_factored(shifted, q)
    else:
        raise InputError(f"unknown method {method!r}")

    if abs(est.imag) > 0.1 or abs(est.real - round(est.real)) > 0.1:
        raise RepcountError(f"inversion did not round cleanly: {est}")
    return int(round(est.real))


def _inversion_grid(shifted: np.ndarray, q: int, r: int) -> complex:
    """Literal sum over the full frequency grid a in [0,Q)^r."""
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    total = complex(0.0)
    batch = 64
    a_ranges = [(0, q - 1)] * r
    parts: List[complex] = []
    for a_pts in _iter_lattice(a_ranges, chunk=batch):
        idx = (shifted @ a_pts.T) % q  # N x B phase numerators
        parts.append(complex(roots[idx].sum()))
    total = _fsum_complex(parts)
    return total / q**r


def _inversion_factored(shifted: np.ndarray, q: int) -> complex:
    """Same sum with the a-grid factored into per-equation geometric sums."""
    geo = np.zeros(q, dtype=np.complex128)
    needed = np.unique(shifted)
    if len(needed) * q <= 2 * 10**8:
        a = np.arange(q)
        for k in needed:
            geo[k] = np.exp(2j * np.pi * a * int(k) / q).sum()
    else:
        for k in needed:
            kk = int(k) % q
            if kk == 0:
                geo[k] = q
            else:
                w = cmath.exp(2j * cmath.pi * kk / q)
                geo[k] = (1 - w**q) / (1 - w)
    prod = np.ones(shifted.shape[0], dtype=np.complex128)
    for col in range(shifted.shape[1]):
        prod *= geo[shifted[:, col]] / q
    return complex(prod.sum())


# ---------------------------------------------------------------------------
# Gauss sums S_q(a)
# ---------------------------------------------------------------------------

def gauss_sum(sys: ExpandedSystem, a: Sequence[int], q: int,
              budget: int = DEFAULT_PHASE_BUDGET) -> complex:
    """S_q(a) = sum over residues xbar mod q of e(F(xbar; a)/q), exactly.

    The phase numerator is an exact integer mod q, so the sum is an exact
    integer combination of q-th roots of unity.
    """
    if q < 1:
        raise InputError("q must be >= 1")
    a_vec = [int(v) for v in a]
    if len(a_vec) != sys.r:
        raise InputError(f"a must have length r={sys.r}")
    if any(not 0 <= v < q for v in a_vec) and q > 1:
        raise InputError("residues a_j must satisfy 0 <= a_j < q")
    n = q**sys.nvars
    if n > budget:
        raise BudgetError(f"{n} residue tuples exceed budget {budget}")
    counts = np.zeros(q, dtype=np.int64)
    ranges = [(0, q - 1)] * sys.nvars
    a_arr = np.array(a_vec, dtype=np.int64)
    for pts in _iter_lattice(ranges):
        vals = _phi_values(sys, pts, q - 1)
        idx = (vals @ a_arr) % q
        counts += np.bincount(idx, minlength=q)
    # exact histogram -> root-of-unity combination
    re = math.fsum(int(counts[k]) * math.cos(2 * math.pi * k / q) for k in range(q))
    im = math.fsum(int(counts[k]) * math.sin(2 * math.pi * k / q) for k in range(q))
    return complex(re, im)


# ---------------------------------------------------------------------------
# oscillatory integral v_P(beta)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OscillatoryEstimate:
    value: complex
    error: float
    method: str
    evaluations: int


def oscillatory_integral(sys: ExpandedSystem, beta: Sequence[float], box,
                         method: str = "quadrature", budget: int = 2 * 10**6,
                         seed: int = 0, tol: Optional[float] = None) -> OscillatoryEstimate:
    """v_P(beta) = integral over the box of e(F(xi; beta)), with an error report.

    Quadrature reports a nested-refinement difference; Monte Carlo reports
    the standard error.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (sys.r,):
        raise InputError(f"beta must have length r={sys.r}")
    dims = sys.nvars
    bounds = [box.bounds[i] for i in range(sys.m) for _ in range(sys.s)]

    def phase_sum(points: np.ndarray, weights: Optional[np.ndarray]) -> complex:
        vals = np.stack([p.evaluate_float_many(points) for p in sys.polys.values()], axis=1)
        z = np.exp(2j * np.pi * (vals @ beta))
        if weights is not None:
            z = z * weights
        return complex(z.sum())

    if method == "montecarlo":
        n = int(budget)
        vol = 1.0
        for b in bounds:
            vol *= 2 * b
        parts: List[complex] = []
        sq = 0.0
        done = 0
        shard = 0
        while done < n:
            take = min(_CHUNK, n - done)
            rng = stream("oscillatory-mc", seed, shard)
            pts = rng.uniform(-1.0, 1.0, size=(take, dims)) * np.array(bounds)
            vals = np.stack([p.evaluate_float_many(pts) for p in sys.polys.values()], axis=1)
            z = np.exp(2j * np.pi * (vals @ beta))
            parts.append(complex(z.sum()))
            sq += float((z.real**2 + z.imag**2).sum())
            done += take
            shard += 1
        mean = _fsum_complex(parts) / n
        var = max(sq / n - abs(mean) ** 2, 0.0)
        err = vol * math.sqrt(var / n)
        est = OscillatoryEstimate(vol * mean, err, "montecarlo", n)
    elif method == "quadrature":
        n2 = max(3, int(math.floor((budget / 2) ** (1.0 / dims))))
        n1 = max(2, (2 * n2) // 3)
        if n2 < 3:
            raise BudgetError("quadrature budget too small")

        def tensor(nn: int) -> complex:
            nodes, weights = np.polynomial.legendre.leggauss(nn)
            per_dim_nodes = [nodes * b for b in bounds]
            per_dim_w = [weights * b for b in bounds]
            ranges = [(0, nn - 1)] * dims
            parts: List[complex] = []
            for idx in _iter_lattice(ranges):
                pts = np.empty((idx.shape[0], dims))
                wts = np.ones(idx.shape[0])
                for v in range(dims):
                    pts[:, v] = per_dim_nodes[v][idx[:, v]]
                    wts *= per_dim_w[v][idx[:, v]]
                parts.append(phase_sum(pts, wts))
            return _fsum_complex(parts)

        coarse = tensor(n1)
        fine = tensor(n2)
        est = OscillatoryEstimate(fine, abs(fine - coarse), "quadrature", n1**dims + n2**dims)
    else:
        raise InputError(f"unknown method {method!r}")

    if tol is not None and est.error > tol:
        raise BudgetError(f"error {est.error} above target {tol} within budget")
    return est


# ---------------------------------------------------------------------------
# major-arc approximation residual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MajorArcReport:
    t_value: complex
    gauss: complex
    v_value: complex
    v_error: float
    approx: complex
    residual: float


def major_arc_residual(sys: ExpandedSystem, arc: ArcPoint, box,
                       v_method: str = "quadrature", v_budget: int = 2 * 10**6,
                       budget: int = DEFAULT_PHASE_BUDGET) -> MajorArcReport:
    """Compare T(alpha) with q^{-ms} S_q(a) v_P(beta); report the residual.

    No inequality is asserted: the approximation lemma's implied constant
    is unspecified, so this is measurement, not a check.
    """
    if arc.homogenized is None:
        raise InputError("arc must be homogenized (a, q, beta)")
    hom = arc.homogenized
    t_val = exponential_sum(sys, arc.alpha, box, budget=budget)
    s_val = gauss_sum(sys, hom.a, hom.q, budget=budget)
    v_est = oscillatory_integral(sys, hom.beta, box, method=v_method, budget=v_budget)
    approx = s_val * v_est.value / hom.q**sys.nvars
    return MajorArcReport(
        t_value=t_val,
        gauss=s_val,
        v_value=v_est.value,
        v_error=v_est.error,
        approx=approx,
        residual=abs(t_val - approx),
    )


# ---------------------------------------------------------------------------
# arc classification
# ---------------------------------------------------------------------------

def _best_approximation(alpha: float, q_bound: int, cutoff: int) -> Tuple[int, int]:
    """Best rational approximation a/q with q <= q_bound (largest convergent)."""
    frac = Fraction(alpha).limit_denominator(cutoff)
    # continued-fraction convergents of alpha
    a0 = math.floor(frac)
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    rest = frac - a0
    best = (h, k)
    while rest != 0 and k <= q_bound:
        best = (h, k)
        rest = 1 / rest
        ai = math.floor(rest)
        rest -= ai
        h, h_prev = ai * h + h_prev, h
        k, k_prev = ai * k + k_prev, k
        if k <= min(q_bound, cutoff):
            best = (h, k)
        else:
            break
    return best


def classify_arc(alpha: Sequence[float], params: ArcParams) -> ArcClassification:
    """Major iff every coordinate admits (a_j, q_j) within the arc widths.

    q_j <= c P^{(d-1)theta} and |alpha_j q_j - a_j| <= c P^{-d+(d-1)theta} gamma_hat_j.
    """
    alphas = [float(x) % 1.0 for x in alpha]
    r = len(alphas)
    gh = params.gamma_hat or (1,) * r
    if len(gh) != r:
        raise InputError("gamma_hat must have one entry per multi-index")
    p, th, d = params.p_scale, params.theta, params.d
    q_bound = int(math.floor(params.c * p ** ((d - 1) * th)))
    if q_bound < 1:
        return ArcClassification("minor", None)
    approx: List[Tuple[int, int]] = []
    for aj, ghj in zip(alphas, gh):
        err_bound = params.c * p ** (-d + (d - 1) * th) * ghj
        h, k = _best_approximation(aj, q_bound, params.cf_cutoff)
        if abs(aj * k - h) <= err_bound:
            approx.append((h % k if k > 1 else 0, k))
        else:
            return ArcClassification("minor", None)
    q = 1
    for _, k in approx:
        q = q * k // math.gcd(q, k)
    a_hom = tuple((h * (q // k)) % q for (h, k) in approx)
    beta = tuple(aj - h / k for aj, (h, k) in zip(alphas, approx))
    point = ArcPoint(
        alpha=tuple(alphas),
        approx=tuple(approx),
        homogenized=HomogenizedArc(a=a_hom, q=q, beta=beta),
    )
    return ArcClassification("major", point)


# ---------------------------------------------------------------------------
# Weyl differencing
# ---------------------------------------------------------------------------

def weyl_difference(sys: ExpandedSystem, block: int, h: Sequence[int]) -> Dict[MultiIndex, Poly]:
    """Delta_{i,h} applied to every Phi_j: Phi_j(.., x_i + h, ..) - Phi_j(xbar)."""
    if not 1 <= block <= sys.m:
        raise InputError(f"block {block} out of range 1..{sys.m}")
    if len(h) != sys.s:
        raise InputError(f"h must have {sys.s} coordinates")
    offsets = {sys.var_index(block, k + 1): int(v) for k, v in enumerate(h)}
    return {j: p.shifted(offsets) - p for j, p in sys.polys.items()}


@dataclass(frozen=True)
class WeylReport:
    lhs_squared: float
    rhs_bound: float
    holds: bool


def weyl_cs_check(sys: ExpandedSystem, alpha: Sequence[float], box, j1: int,
                  budget: int = DEFAULT_PHASE_BUDGET) -> WeylReport:
    """Constant-one Cauchy-Schwarz step of Weyl differencing, checked exactly.

    |T|^2 <= (number of tuples of the other blocks) *
             sum_h |sum over the h-clipped box of e(Delta_{j1,h} F)|.
    """
    if not 1 <= j1 <= sys.m:
        raise InputError(f"block {j1} out of range 1..{sys.m}")
    alpha = np.asarray(alpha, dtype=np.float64)
    radii = box.radii()
    t_val = exponential_sum(sys, alpha, box, budget=budget)
    lhs = abs(t_val) ** 2

    other = 1
    for i, r in enumerate(radii, start=1):
        if i != j1:
            other *= (2 * r + 1) ** sys.s
    rj = radii[j1 - 1]
    base = (j1 - 1) * sys.s

    def phase_values(pts: np.ndarray) -> np.ndarray:
        vals = _phi_values(sys, pts, 3 * max(radii)).astype(np.float64)
        return vals @ alpha

    rhs_parts: List[float] = []
    h_iter = itertools.product(range(-2 * rj, 2 * rj + 1), repeat=sys.s)
    for h in h_iter:
        ranges = _block_ranges(radii, sys.s)
        empty = False
        for k in range(sys.s):
            lo = max(-rj, -rj - h[k])
            hi = min(rj, rj - h[k])
            if lo > hi:
                empty = True
                break
            ranges[base + k] = (lo, hi)
        if empty:
            continue
        parts: List[complex] = []
        for pts in _iter_lattice(ranges):
            shifted = pts.copy()
            shifted[:, base:base + sys.s] += np.array(h, dtype=np.int64)
            w = phase_values(shifted) - phase_values(pts)
            z = np.exp(2j * np.pi * (w - np.round(w)))
            parts.append(complex(z.sum()))
        rhs_parts.append(abs(_fsum_complex(parts)))
    rhs = other * math.fsum(rhs_parts)
    holds = lhs <= rhs * (1 + 1e-12) + 1e-9
    return WeylReport(lhs_squared=lhs, rhs_bound=rhs, holds=holds)
