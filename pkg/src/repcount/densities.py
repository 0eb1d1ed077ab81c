"""Local solution densities and the assembled main-term prediction.

The predicted count is

    <psi>^{(ms-rd)/(md)} * chi_inf * prod_p chi_p,

where chi_p is the normalized count of solutions of the coefficient
system Phi_j = n_j modulo p^l and chi_inf is the density of real
solutions of the diagonal-normalized system in the unit box.  Both local
factors here are normalized against the *same* polynomial system (the
Phi_j produced by expand_system), which keeps the product of all factors
convention-free: rescaling any single equation moves a constant between
chi_inf and the chi_p without changing the prediction.

chi_p evaluation strategy, in order of preference: a closed-form count
over F_p for the sum-of-squares pair shape (exact, any p odd, level 1),
full residue enumeration when p^{l m s} is small, and seeded Monte Carlo
sampling of residues otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetError, InputError
from .forms import ExpandedSystem, Form, MultiIndex, TargetForm, expand_system
from .psi import magnitude, normalize_psi
from .rng import stream

_CHUNK = 1 << 18


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    method: str  # exact | sampled | quadrature | closed-form | mixed
    level: object
    stderr: float = 0.0
    note: str = ""
    rational: Optional[Fraction] = None
    factors: Optional[Tuple[Tuple[int, "DensityEstimate"], ...]] = None

    def __post_init__(self):
        if self.method in ("exact", "closed-form"):
            assert self.stderr == 0.0

    @property
    def obstructed(self) -> bool:
        return "local-obstruction" in self.note


def primes_up_to(n: int) -> List[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


# ---------------------------------------------------------------------------
# chi_p: exact enumeration and sampling
# ---------------------------------------------------------------------------

def _system_targets(sys: ExpandedSystem, psi: TargetForm) -> np.ndarray:
    if psi.m != sys.m or psi.d != sys.d:
        raise InputError("psi does not match the expanded system")
    return np.array([psi.coeffs[j] for j in sys.indices], dtype=np.int64)


def _residue_values(sys: ExpandedSystem, pts: np.ndarray, modulus: int) -> np.ndarray:
    vals = np.stack([p.evaluate_int_many(pts) for p in sys.polys.values()], axis=1)
    return vals % modulus


def chi_p_exact(sys: ExpandedSystem, psi: TargetForm, p: int, l: int,
                limit: int = 10**8) -> DensityEstimate:
    """(p^l)^{r-ms} * #{xbar mod p^l : Phi_j = n_j mod p^l}, exact."""
    if l < 1:
        raise InputError("level l must be >= 1")
    q = p**l
    space = q**sys.nvars
    if space > limit:
        raise BudgetError(f"p^(l*m*s) = {space} exceeds limit {limit}; sample instead")
    targets = _system_targets(sys, psi) % q
    count = 0
    max_bound = max(pl.bound_abs([q - 1] * sys.nvars) for pl in sys.polys.values())
    if max_bound >= 2**62:
        raise BudgetError("residue values overflow the vectorized path")
    from .circle import _iter_lattice  # shared chunked grid iterator

    for pts in _iter_lattice([(0, q - 1)] * sys.nvars):
        vals = _residue_values(sys, pts, q)
        count += int((vals == targets[None, :]).all(axis=1).sum())
    rational = Fraction(count) * Fraction(q) ** (sys.r - sys.nvars)
    return DensityEstimate(float(rational), "exact", {"p": p, "l": l}, rational=rational)


def chi_p_sampled(sys: ExpandedSystem, psi: TargetForm, p: int, l: int,
                  samples: int, seed: int) -> DensityEstimate:
    """Unbiased residue-sampling estimate of the same normalized count."""
    if samples < 10**4:
        raise InputError("need at least 10^4 samples")
    q = p**l
    targets = _system_targets(sys, psi) % q
    scale = float(q) ** sys.r
    hits = 0
    done = 0
    shard = 0
    while done < samples:
        take = min(_CHUNK, samples - done)
        rng = stream(f"chi-p-sampled:{p}:{l}", seed, shard)
        pts = rng.integers(0, q, size=(take, sys.nvars), dtype=np.int64)
        vals = _residue_values(sys, pts, q)
        hits += int((vals == targets[None, :]).all(axis=1).sum())
        done += take
        shard += 1
    frac = hits / samples
    if hits == 0:
        return DensityEstimate(0.0, "sampled", {"p": p, "l": l, "samples": samples},
                               stderr=scale * 3.0 / samples, note="zero hits (rule of three)")
    stderr = scale * math.sqrt(frac * (1.0 - frac) / samples)
    return DensityEstimate(scale * frac, "sampled",
                           {"p": p, "l": l, "samples": samples}, stderr=stderr)


# ---------------------------------------------------------------------------
# closed-form count for the sum-of-squares pair shape (odd p, level 1)
# ---------------------------------------------------------------------------

def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _quadric_count(k: int, t: int, delta: int, p: int) -> int:
    """#{y in F_p^k : q(y) = t} for nondegenerate q with discriminant class delta."""
    if k == 0:
        return 1 if t % p == 0 else 0
    t %= p
    if k % 2 == 1:
        if t == 0:
            return p ** (k - 1)
        sign = _legendre(((-1) ** ((k - 1) // 2)) * t * delta, p)
        return p ** (k - 1) + p ** ((k - 1) // 2) * sign
    sign = _legendre(((-1) ** (k // 2)) * delta, p)
    if t == 0:
        return p ** (k - 1) + (p - 1) * p ** (k // 2 - 1) * sign
    return p ** (k - 1) - p ** (k // 2 - 1) * sign


def count_sum_squares_pair_mod_p(p: int, s: int, alpha: int, beta: int, h: int) -> int:
    """#{(x,y) in F_p^{2s} : |x|^2 = alpha, |y|^2 = beta, x.y = h} for odd p.

    Classical evaluation: fibre the count over x, splitting on whether x
    is anisotropic, isotropic, or zero; each fibre is a quadric count on
    the orthogonal complement.
    """
    if p == 2 or s < 1:
        raise InputError("closed-form count needs odd p and s >= 1")
    alpha %= p
    beta %= p
    h %= p
    if alpha != 0:
        inv_a = pow(alpha, p - 2, p)
        t2 = (beta - h * h * inv_a) % p
        return _quadric_count(s, alpha, 1, p) * _quadric_count(s - 1, t2, alpha, p)
    total = 0
    if h == 0:
        total += _quadric_count(s, beta, 1, p)  # x = 0 fibre
    isotropic = _quadric_count(s, 0, 1, p) - 1
    if isotropic > 0:
        if h != 0:
            total += isotropic * p ** (s - 2)
        else:
            total += isotropic * p * _quadric_count(s - 2, beta, p - 1, p)
    return total


def chi_p_pair_convolution(form: Form, psi: TargetForm, p: int, l: int,
                           state_limit: int = 64 * 10**6,
                           work_limit: int = 4 * 10**8) -> DensityEstimate:
    """chi_p at level l for F = sum of squares, m = 2, via exact convolution.

    Over Z/p^l the value triple (|x|^2, |y|^2, x.y) is the s-fold sum of
    independent per-coordinate triples (u^2, v^2, uv), so its full
    distribution is an s-fold cyclic convolution on (Z/p^l)^3.  This is
    deterministic and exact up to float64 accumulation (all terms are
    non-negative, relative error < 1e-10 at these sizes).
    """
    s = _sum_of_squares_s(form)
    if s is None or psi.m != 2 or psi.d != 2:
        raise InputError("convolution path needs F = sum of squares and m = d = 2")
    q = p**l
    states = q**3
    if states > state_limit:
        raise BudgetError(f"state space {states} exceeds limit {state_limit}")
    if states * q * q * s > work_limit * 8:
        raise BudgetError(f"convolution work {states * q * q * s} too large")
    # distribution of one coordinate triple
    base = np.zeros((q, q, q), dtype=np.float64)
    for u in range(q):
        uu = u * u % q
        for v in range(q):
            base[uu, v * v % q, u * v % q] += 1.0
    base /= q * q
    dist = np.zeros((q, q, q), dtype=np.float64)
    dist[0, 0, 0] = 1.0
    nz = np.argwhere(base > 0)
    weights = base[base > 0]
    for _ in range(s):
        nxt = np.zeros_like(dist)
        for (du, dv, dw), wgt in zip(nz, weights):
            nxt += wgt * np.roll(dist, shift=(int(du), int(dv), int(dw)), axis=(0, 1, 2))
        dist = nxt
    # target: |x|^2 = n_1, |y|^2 = n_2, x.y = n_12 / 2 mod q
    n1 = psi.diagonal(1) % q
    n2 = psi.diagonal(2) % q
    n12 = psi.coeffs[(1, 2)]
    if p == 2:
        # 2 x.y = n_12 mod 2^l  <=>  x.y = n_12/2 mod 2^{l-1}: sum both branches
        if n12 % 2 != 0:
            return DensityEstimate(0.0, "exact", {"p": p, "l": l},
                                   note="odd cross coefficient mod 2")
        half = (n12 // 2) % max(q // 2, 1)
        prob = float(dist[n1, n2, half]) + (float(dist[n1, n2, half + q // 2]) if q > 1 else 0.0)
    else:
        inv2 = pow(2, -1, q)
        prob = float(dist[n1, n2, (n12 * inv2) % q])
    value = prob * float(q) ** 3
    return DensityEstimate(value, "exact", {"p": p, "l": l},
                           note="coordinate-convolution count")


def _sum_of_squares_s(form: Form) -> Optional[int]:
    """s if the form is exactly x_1^2 + ... + x_s^2, else None."""
    if form.d != 2:
        return None
    expected = set()
    for k in range(form.s):
        e = [0] * form.s
        e[k] = 2
        expected.add(tuple(e))
    if set(form.terms) == expected and all(c == 1 for c in form.terms.values()):
        return form.s
    return None


def chi_p_pair_closed_form(form: Form, psi: TargetForm, p: int) -> DensityEstimate:
    """chi_p at level 1 for F = sum of s squares, m = 2, odd p (exact).

    Convention: the off-diagonal coefficient equation is 2 x.y = n_12, so
    the dot-product target is n_12 / 2 mod p.
    """
    s = _sum_of_squares_s(form)
    if s is None or psi.m != 2 or psi.d != 2:
        raise InputError("closed form needs F = sum of squares and m = d = 2")
    if p == 2:
        raise InputError("closed form needs odd p")
    inv2 = pow(2, p - 2, p)
    h = (psi.coeffs[(1, 2)] * inv2) % p
    count = count_sum_squares_pair_mod_p(p, s, psi.diagonal(1), psi.diagonal(2), h)
    rational = Fraction(count, p ** (2 * s - 3))
    return DensityEstimate(float(rational), "exact", {"p": p, "l": 1},
                           rational=rational, note="closed-form residue count")


# ---------------------------------------------------------------------------
# Raghavan-normalized quadratic chi_p (matrix congruence X^T A X = B)
# ---------------------------------------------------------------------------

def chi_p_raghavan(gram_a: Sequence[Sequence[int]], gram_b: Sequence[Sequence[int]],
                   p: int, l: int, limit: int = 10**8) -> DensityEstimate:
    """(p^l)^{m(m+1)/2 - ms} * #{X mod p^l : X^T A X = B mod p^l}, exact.

    Uses the closed-form fibre count when A is the identity, m = 2, p is
    odd and l = 1; otherwise enumerates residues.
    """
    a = np.array(gram_a, dtype=np.int64)
    b = np.array(gram_b, dtype=np.int64)
    s, m = a.shape[0], b.shape[0]
    if a.shape != (s, s) or b.shape != (m, m):
        raise InputError("Gram matrices must be square")
    q = p**l
    if p != 2 and l == 1 and m == 2 and np.array_equal(a, np.eye(s, dtype=np.int64)):
        count = count_sum_squares_pair_mod_p(p, s, int(b[0, 0]), int(b[1, 1]), int(b[0, 1]))
        rational = Fraction(count, p ** (2 * s - 3))
        return DensityEstimate(float(rational), "exact", {"p": p, "l": l}, rational=rational)
    space = q ** (m * s)
    if space > limit:
        raise BudgetError(f"(p^l)^(ms) = {space} exceeds limit {limit}")
    from .circle import _iter_lattice

    count = 0
    for pts in _iter_lattice([(0, q - 1)] * (m * s)):
        ok = np.ones(pts.shape[0], dtype=bool)
        blocks = [pts[:, i * s:(i + 1) * s] for i in range(m)]
        for i in range(m):
            for j in range(i, m):
                vals = np.einsum("nk,kl,nl->n", blocks[i], a, blocks[j]) % q
                ok &= vals == (int(b[i, j]) % q)
        count += int(ok.sum())
    rational = Fraction(count) * Fraction(q) ** (m * (m + 1) // 2 - m * s)
    return DensityEstimate(float(rational), "exact", {"p": p, "l": l}, rational=rational)


# ---------------------------------------------------------------------------
# Euler product and truncated singular series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityConfig:
    seed: int
    p_max: int = 53
    l_overrides: Mapping[int, int] = field(default_factory=dict)
    chi_p_samples: int = 200_000
    chi_p_limit: int = 10**8
    eps: float = 0.05
    chi_inf_samples: int = 1_000_000
    chi_inf_method: str = "slab"  # slab | closed-quadratic
    threads: int = 1

    def level_for(self, p: int) -> int:
        if p in self.l_overrides:
            return self.l_overrides[p]
        return 2 if p <= 5 else 1


def chi_p_auto(sys: ExpandedSystem, psi: TargetForm, p: int, level: int,
               config: DensityConfig) -> DensityEstimate:
    """Best available chi_p evaluation.

    Preference order: closed-form residue count (sum-of-squares pair,
    odd p, level 1), exact coordinate convolution (same shape, any p^l of
    feasible size), full enumeration, seeded sampling.
    """
    pair_shape = _sum_of_squares_s(sys.base) is not None and sys.m == 2 and sys.d == 2
    if pair_shape and level == 1 and p != 2:
        return chi_p_pair_closed_form(sys.base, psi, p)
    if pair_shape:
        try:
            return chi_p_pair_convolution(sys.base, psi, p, level)
        except BudgetError:
            pass
    if (p**level) ** sys.nvars <= config.chi_p_limit:
        return chi_p_exact(sys, psi, p, level, limit=config.chi_p_limit)
    return chi_p_sampled(sys, psi, p, level, config.chi_p_samples, config.seed)


def euler_product(sys: ExpandedSystem, psi: TargetForm, p_max: int,
                  config: DensityConfig,
                  l_schedule: Optional[Mapping[int, int]] = None) -> DensityEstimate:
    """prod_{p <= p_max} chi_p with per-factor provenance and propagated error."""
    factors: List[Tuple[int, DensityEstimate]] = []
    for p in primes_up_to(p_max):
        level = l_schedule[p] if l_schedule and p in l_schedule else config.level_for(p)
        factors.append((p, chi_p_auto(sys, psi, p, level, config)))

    value = 1.0
    for _, est in factors:
        value *= est.value
    var = 0.0
    for i, (_, est) in enumerate(factors):
        rest = 1.0
        for k, (_, other) in enumerate(factors):
            if k != i:
                rest *= other.value
        var += (rest * est.stderr) ** 2
    note = ""
    if any(est.value == 0.0 for _, est in factors):
        value = 0.0
        zero_ps = [p for p, est in factors if est.value == 0.0]
        note = f"local-obstruction at p={zero_ps}"
    methods = {est.method for _, est in factors}
    method = "exact" if methods == {"exact"} else "mixed"
    stderr = math.sqrt(var)
    if method == "exact":
        stderr = 0.0
    return DensityEstimate(value, method, {"p_max": p_max}, stderr=stderr,
                           note=note, factors=tuple(factors))


def singular_series_truncated(sys: ExpandedSystem, psi: TargetForm, q_max: int,
                              budget: int = 2 * 10**8) -> DensityEstimate:
    """sum_{q <= Q} q^{-ms} sum_{(a,q)=1} S_q(a) e(-a.n/q), real part.

    The imaginary part must vanish (conjugate pairing a <-> q-a) and is
    asserted below 1e-6 relative.
    """
    cost = sum(q**sys.nvars * q**sys.r for q in range(1, q_max + 1))
    if cost > budget:
        raise BudgetError(f"series truncation costs {cost} > budget {budget}")
    targets = _system_targets(sys, psi)
    from .circle import _iter_lattice

    total_re = [1.0]  # q = 1 contributes exactly 1
    total_im = [0.0]
    for q in range(2, q_max + 1):
        values = np.concatenate(
            [_residue_values(sys, pts, q) for pts in _iter_lattice([(0, q - 1)] * sys.nvars)]
        )
        shifted = (values - targets[None, :]) % q
        roots = np.exp(2j * np.pi * np.arange(q) / q)
        q_sum = 0j
        for a_pts in _iter_lattice([(0, q - 1)] * sys.r, chunk=128):
            keep = np.gcd(np.gcd.reduce(a_pts, axis=1), q) == 1
            if not keep.any():
                continue
            idx = (shifted @ a_pts[keep].T) % q
            q_sum += complex(roots[idx].sum())
        q_sum /= q**sys.nvars
        total_re.append(q_sum.real)
        total_im.append(q_sum.imag)
    re = math.fsum(total_re)
    im = math.fsum(total_im)
    if abs(im) > 1e-6 * max(1.0, abs(re)):
        raise InputError(f"singular series has non-vanishing imaginary part {im}")
    return DensityEstimate(re, "exact", {"q_max": q_max}, note="truncated series")


# ---------------------------------------------------------------------------
# real density chi_inf
# ---------------------------------------------------------------------------

def chi_inf_slab(sys: ExpandedSystem, psi_normalized: Mapping[MultiIndex, float],
                 eps: float, samples: int, seed: int, threads: int = 1) -> DensityEstimate:
    """Thickened-slab Monte Carlo for the real density.

    2^{ms} * P(uniform xi in [-1,1]^{ms} has |Phi_j(xi) - n~_j| <= eps
    for all j) / (2 eps)^r.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    if samples < 10**5:
        raise InputError("need at least 10^5 samples")
    targets = np.array([psi_normalized[j] for j in sys.indices], dtype=np.float64)
    scale = 2.0**sys.nvars / (2.0 * eps) ** sys.r
    polys = list(sys.polys.values())

    def shard_hits(shard: int, take: int) -> int:
        rng = stream(f"chi-inf-slab:{eps}", seed, shard)
        pts = rng.uniform(-1.0, 1.0, size=(take, sys.nvars))
        ok = np.ones(take, dtype=bool)
        for col, poly in enumerate(polys):
            vals = poly.evaluate_float_many(pts)
            ok &= np.abs(vals - targets[col]) <= eps
        return int(ok.sum())

    plan: List[Tuple[int, int]] = []
    done = 0
    shard = 0
    while done < samples:
        take = min(_CHUNK, samples - done)
        plan.append((shard, take))
        done += take
        shard += 1
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda sp: shard_hits(*sp), plan))
    else:
        hits = sum(shard_hits(*sp) for sp in plan)

    level = {"eps": eps, "samples": samples}
    if hits == 0:
        return DensityEstimate(0.0, "sampled", level, stderr=scale * 3.0 / samples,
                               note="zero hits (rule of three)")
    frac = hits / samples
    stderr = scale * math.sqrt(frac * (1.0 - frac) / samples)
    return DensityEstimate(scale * frac, "sampled", level, stderr=stderr)


def raghavan_constant(s: int, m: int) -> float:
    """(sqrt(pi))^{ms - m(m+1)/2} / prod_{j=m+1}^{s} Gamma((j-m)/2)."""
    if not s > m >= 1:
        raise InputError("need s > m >= 1")
    value = math.pi ** ((m * s - m * (m + 1) // 2) / 2.0)
    for j in range(m + 1, s + 1):
        value /= math.gamma((j - m) / 2.0)
    return value


def chi_inf_closed_quadratic(gram_a: Sequence[Sequence[int]],
                             gram_b: Sequence[Sequence[int]]) -> float:
    """(det A)^{-m/2} (det B / prod b_i)^{(s-m-1)/2} c_{s,m} for PD quadratics."""
    from .forms import _fraction_det  # exact determinants

    a = [[Fraction(v) for v in row] for row in gram_a]
    b = [[Fraction(v) for v in row] for row in gram_b]
    s, m = len(a), len(b)
    if s < m + 2:
        raise InputError("closed form needs s >= m + 2")
    for mat, name in ((a, "A"), (b, "B")):
        minors = [_fraction_det([row[: k + 1] for row in mat[: k + 1]]) for k in range(len(mat))]
        if any(mi <= 0 for mi in minors):
            raise InputError(f"matrix {name} is not positive definite")
    det_a = float(_fraction_det(a))
    det_b = float(_fraction_det(b))
    prod_diag = 1.0
    for i in range(m):
        prod_diag *= float(b[i][i])
    return det_a ** (-m / 2.0) * (det_b / prod_diag) ** ((s - m - 1) / 2.0) \
        * raghavan_constant(s, m)


# ---------------------------------------------------------------------------
# assembled predictions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MainTermReport:
    magnitude_factor: float
    chi_inf: DensityEstimate
    euler: DensityEstimate
    prediction: float
    stderr: float
    obstructed: bool


def main_term(form: Form, psi: TargetForm, config: DensityConfig) -> MainTermReport:
    """<psi>^{(ms-rd)/(md)} * chi_inf * prod_p chi_p with provenance.

    Equivalently (prod P_i)^{s - rd/m} with P_i = n_i^{1/d}: the boxed
    normalization of the same prediction.
    """
    diag = psi.diagonal_values()
    if any(n <= 0 for n in diag):
        raise InputError("main term needs positive diagonal coefficients")
    sys = expand_system(form, psi.m)
    ms = sys.nvars
    rd = sys.r * sys.d
    exponent = (ms - rd) / (psi.m * psi.d)
    mag_factor = float(magnitude(psi)) ** exponent

    if config.chi_inf_method == "slab":
        chi_inf = chi_inf_slab(sys, normalize_psi(psi), config.eps,
                               config.chi_inf_samples, config.seed, threads=config.threads)
    elif config.chi_inf_method == "closed-quadratic":
        value = chi_inf_closed_quadratic(_gram_of_form(form), _gram_of_psi(psi))
        chi_inf = DensityEstimate(value, "closed-form", {"formula": "quadratic"})
    else:
        raise InputError(f"unknown chi_inf method {config.chi_inf_method!r}")

    euler = euler_product(sys, psi, config.p_max, config)
    prediction = mag_factor * chi_inf.value * euler.value
    stderr = mag_factor * math.hypot(chi_inf.stderr * euler.value,
                                     euler.stderr * chi_inf.value)
    obstructed = euler.obstructed or chi_inf.value == 0.0
    return MainTermReport(mag_factor, chi_inf, euler, prediction, stderr, obstructed)


def raghavan_main_term(gram_a: Sequence[Sequence[int]], gram_b: Sequence[Sequence[int]],
                       chi_p_values: Sequence[float]) -> float:
    """c_{s,m} (det A)^{-m/2} (det B)^{(s-m-1)/2} prod(chi_p), quadratic case.

    The chi_p values must be in the matrix-congruence normalization of
    chi_p_raghavan.
    """
    from .forms import _fraction_det

    a = [[Fraction(v) for v in row] for row in gram_a]
    b = [[Fraction(v) for v in row] for row in gram_b]
    s, m = len(a), len(b)
    det_a = float(_fraction_det(a))
    det_b = float(_fraction_det(b))
    if det_a <= 0 or det_b <= 0:
        raise InputError("Gram matrices must be positive definite")
    prod = 1.0
    for v in chi_p_values:
        prod *= float(v)
    return raghavan_constant(s, m) * det_a ** (-m / 2.0) \
        * det_b ** ((s - m - 1) / 2.0) * prod


def _gram_of_form(form: Form) -> List[List[Fraction]]:
    return form.gram()


def _gram_of_psi(psi: TargetForm) -> List[List[Fraction]]:
    if psi.d != 2:
        raise InputError("Gram matrix needs degree 2")
    m = psi.m
    g = [[Fraction(0)] * m for _ in range(m)]
    for (i, j), c in psi.coeffs.items():
        if i == j:
            g[i - 1][i - 1] = Fraction(c)
        else:
            g[i - 1][j - 1] = g[j - 1][i - 1] = Fraction(c, 2)
    return g
