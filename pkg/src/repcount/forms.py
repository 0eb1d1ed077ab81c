"""Integral homogeneous forms: representation, parsing, evaluation, expansion.

A form F in s variables of degree d is stored sparsely as a map from
exponent vectors (length s, entries summing to d) to nonzero integer
coefficients.  All coefficient arithmetic is exact (python ints,
fractions for the quadratic linear algebra).

The central symbolic operation is `expand_system`: substituting
x = t_1 x_1 + ... + t_m x_m into F and collecting the coefficient of each
monomial t_{j_1}...t_{j_d} yields one integer polynomial Phi_j in the
m*s block variables per multi-index j.  The counting problem
"F represents psi identically" is exactly the system Phi_j(x_1..x_m) = n_j.

Variable layout of the expanded polynomials: coordinate n of block x_i is
the flat variable (i-1)*s + (n-1), 0-based.
"""

from __future__ import annotations

import enum
import itertools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import FormParseError, InputError
from .rng import stream

MultiIndex = Tuple[int, ...]

_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# sparse integer polynomials (internal work horse)
# ---------------------------------------------------------------------------

class Poly:
    """Sparse polynomial over Z in a fixed number of variables."""

    __slots__ = ("nvars", "terms", "_npcache")

    def __init__(self, nvars: int, terms: Mapping[Tuple[int, ...], int]):
        self.nvars = nvars
        self.terms = {e: int(c) for e, c in terms.items() if c != 0}
        self._npcache = None

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, nvars: int, exps: Tuple[int, ...], c: int = 1) -> "Poly":
        return cls(nvars, {tuple(exps): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return Poly(self.nvars, out)

    def __mul__(self, other: "Poly") -> "Poly":
        out: Dict[Tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    def scaled(self, k: int) -> "Poly":
        return Poly(self.nvars, {e: k * c for e, c in self.terms.items()})

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, variables: Iterable[int]) -> int:
        vs = set(variables)
        return max((sum(e[v] for v in vs) for e in self.terms), default=0)

    def evaluate(self, point: Sequence[int]) -> int:
        """Exact evaluation at an integer point."""
        if len(point) != self.nvars:
            raise InputError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def partial_eval(self, values: Mapping[int, int]) -> "Poly":
        """Substitute integers for a subset of variables (same nvars)."""
        out: Dict[Tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            coeff = c
            rest = list(e)
            for v, x in values.items():
                k = rest[v]
                if k:
                    coeff *= int(x) ** k
                    rest[v] = 0
            if coeff:
                key = tuple(rest)
                out[key] = out.get(key, 0) + coeff
        return Poly(self.nvars, out)

    def shifted(self, offsets: Mapping[int, int]) -> "Poly":
        """Substitute x_v -> x_v + offsets[v] for each listed variable."""
        result = Poly.zero(self.nvars)
        for e, c in self.terms.items():
            factors = [Poly.constant(self.nvars, c)]
            base = list(e)
            for v, h in offsets.items():
                k = base[v]
                if k == 0 or h == 0:
                    continue
                base[v] = 0
                unit = [0] * self.nvars
                unit[v] = 1
                shifted_var = Poly(self.nvars, {tuple(unit): 1, (0,) * self.nvars: h})
                p = Poly.constant(self.nvars, 1)
                for _ in range(k):
                    p = p * shifted_var
                factors.append(p)
            term = Poly.monomial(self.nvars, tuple(base), 1)
            for f in factors:
                term = term * f
            result = result + term
        return result

    # -- vectorized evaluation ------------------------------------------------

    def _np_terms(self):
        if self._npcache is None:
            if self.terms:
                exps = np.array(sorted(self.terms), dtype=np.int64)
                coeffs = np.array([self.terms[tuple(e)] for e in exps.tolist()], dtype=np.int64)
            else:
                exps = np.zeros((0, self.nvars), dtype=np.int64)
                coeffs = np.zeros(0, dtype=np.int64)
            self._npcache = (exps, coeffs)
        return self._npcache

    def bound_abs(self, radii: Sequence[int]) -> int:
        """Exact bound on |value| over |x_v| <= radii[v]."""
        total = 0
        for e, c in self.terms.items():
            v = abs(c)
            for r, k in zip(radii, e):
                v *= r**k
            total += v
        return total

    def evaluate_int_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at many integer points (N x nvars int64).

        Exact as long as intermediate values fit in int64; the caller is
        expected to have checked `bound_abs` against the point radii.
        """
        exps, coeffs = self._np_terms()
        n = points.shape[0]
        acc = np.zeros(n, dtype=np.int64)
        for t in range(exps.shape[0]):
            term = np.full(n, coeffs[t], dtype=np.int64)
            for v in range(self.nvars):
                k = int(exps[t, v])
                if k:
                    col = points[:, v]
                    pw = col
                    for _ in range(k - 1):
                        pw = pw * col
                    term = term * pw
            acc += term
        return acc

    def evaluate_float_many(self, points: np.ndarray) -> np.ndarray:
        exps, coeffs = self._np_terms()
        n = points.shape[0]
        acc = np.zeros(n, dtype=np.float64)
        for t in range(exps.shape[0]):
            term = np.full(n, float(coeffs[t]))
            for v in range(self.nvars):
                k = int(exps[t, v])
                if k:
                    term = term * points[:, v] ** k
            acc += term
        return acc

    def text(self, varname=None) -> str:
        return _terms_to_text(self.terms, varname or (lambda v: f"x{v + 1}"))


def _terms_to_text(terms: Mapping[Tuple[int, ...], int], varname) -> str:
    """Canonical rendering: descending lexicographic exponent order."""
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        factors = []
        for v, k in enumerate(e):
            if k == 1:
                factors.append(varname(v))
            elif k >= 2:
                factors.append(f"{varname(v)}^{k}")
        body = " ".join(factors)
        mag = abs(c)
        if not factors:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag} {body}"
        parts.append((c < 0, piece))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, piece in parts[1:]:
        out += (" - " if neg else " + ") + piece
    return out


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

class Form:
    """Homogeneous polynomial in Z[x_1..x_s] of degree d >= 2.

    Immutable after construction; do not mutate `terms`.
    """

    __slots__ = ("s", "d", "terms", "_poly")

    def __init__(self, s: int, terms: Mapping[Tuple[int, ...], int]):
        if s < 1:
            raise InputError("a form needs at least one variable")
        clean: Dict[Tuple[int, ...], int] = {}
        for e, c in terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != s:
                raise InputError(f"exponent vector {e} has length {len(e)}, expected {s}")
            if any(k < 0 for k in e):
                raise InputError(f"negative exponent in {e}")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            raise InputError("zero form is not allowed")
        degrees = {sum(e) for e in clean}
        if len(degrees) > 1:
            raise InputError(f"non-homogeneous terms of degrees {sorted(degrees)}")
        d = degrees.pop()
        if d < 2:
            raise InputError(f"degree {d} < 2")
        self.s = s
        self.d = d
        self.terms = clean
        self._poly = Poly(s, clean)

    def __eq__(self, other) -> bool:
        return isinstance(other, Form) and self.s == other.s and self.terms == other.terms

    def __hash__(self):
        return hash((self.s, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"Form(s={self.s}, d={self.d}, {self.canonical()!r})"

    def canonical(self) -> str:
        return _terms_to_text(self.terms, lambda v: f"x{v + 1}")

    def poly(self) -> Poly:
        return self._poly

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.s:
            raise InputError(f"point has {len(x)} coordinates, form has {self.s} variables")
        return self._poly.evaluate([int(v) for v in x])

    def gram(self) -> List[List[Fraction]]:
        """Gram matrix of a quadratic form: F(x) = x^T G x, exact rationals."""
        if self.d != 2:
            raise InputError(f"Gram matrix needs degree 2, form has degree {self.d}")
        g = [[Fraction(0)] * self.s for _ in range(self.s)]
        for e, c in self.terms.items():
            idx = [v for v, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                g[i][i] = Fraction(c)
            else:
                g[i][j] = g[j][i] = Fraction(c, 2)
        return g


def evaluate_form(form: Form, x: Sequence[int]) -> int:
    """Exact integer value of the form at an integer point."""
    return form.evaluate(x)


# -- parser -----------------------------------------------------------------

def parse_form(text: str, s: int) -> Form:
    """Parse the canonical form grammar.

    Terms are separated by +/-; a term is an optional integer coefficient
    followed by factors `x<k>` or `x<k>^<e>` separated by whitespace or
    '*'.  Variables are 1-indexed and must not exceed s.
    """
    if s < 1:
        raise InputError("s must be >= 1")
    tokens = _tokenize(text)
    if not tokens:
        raise FormParseError("empty form", 0)
    terms: List[Tuple[int, Dict[int, int], int]] = []  # (coeff, var->exp, position)
    pos = 0
    sign = 1
    tok = tokens[pos]
    if tok[0] in ("+", "-"):
        sign = -1 if tok[0] == "-" else 1
        pos += 1
    while True:
        if pos >= len(tokens):
            raise FormParseError("dangling operator", tokens[-1][1])
        coeff = sign
        term_pos = tokens[pos][1]
        if tokens[pos][0] == "int":
            coeff *= tokens[pos][2]
            pos += 1
            if pos < len(tokens) and tokens[pos][0] == "*":
                pos += 1
        exps: Dict[int, int] = {}
        saw_var = False
        while pos < len(tokens) and tokens[pos][0] == "var":
            saw_var = True
            k = tokens[pos][2]
            var_pos = tokens[pos][1]
            if not 1 <= k <= s:
                raise FormParseError(f"variable x{k} out of range 1..{s}", var_pos)
            pos += 1
            e = 1
            if pos < len(tokens) and tokens[pos][0] == "^":
                pos += 1
                if pos >= len(tokens) or tokens[pos][0] != "int":
                    raise FormParseError("exponent expected after '^'", tokens[pos - 1][1])
                e = tokens[pos][2]
                pos += 1
            exps[k - 1] = exps.get(k - 1, 0) + e
            if pos < len(tokens) and tokens[pos][0] == "*":
                pos += 1
        if not saw_var:
            raise FormParseError("constant term makes the form non-homogeneous", term_pos)
        terms.append((coeff, exps, term_pos))
        if pos >= len(tokens):
            break
        if tokens[pos][0] not in ("+", "-"):
            raise FormParseError(f"unexpected token {tokens[pos][0]!r}", tokens[pos][1])
        sign = -1 if tokens[pos][0] == "-" else 1
        pos += 1

    degree = None
    acc: Dict[Tuple[int, ...], int] = {}
    for coeff, exps, term_pos in terms:
        deg = sum(exps.values())
        if degree is None:
            degree = deg
        elif deg != degree:
            raise FormParseError(
                f"non-homogeneous: term of degree {deg} after degree {degree}", term_pos
            )
        vec = tuple(exps.get(v, 0) for v in range(s))
        acc[vec] = acc.get(vec, 0) + coeff
    acc = {e: c for e, c in acc.items() if c}
    if not acc:
        raise FormParseError("all terms cancel; zero form is not allowed", 0)
    if degree is not None and degree < 2:
        raise FormParseError(f"degree {degree} < 2", terms[0][2])
    return Form(s, acc)


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^":
            tokens.append((ch if ch in "+-*" else "^", i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", i, int(text[i:j])))
            i = j
            continue
        if ch == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise FormParseError("variable index expected after 'x'", i)
            tokens.append(("var", i, int(text[i + 1:j])))
            i = j
            continue
        raise FormParseError(f"unexpected character {ch!r}", i)
    return tokens


# ---------------------------------------------------------------------------
# multi-indices and target forms
# ---------------------------------------------------------------------------

def multi_index_set(m: int, d: int) -> List[MultiIndex]:
    """All non-decreasing d-tuples over {1..m}, lexicographically sorted."""
    if m < 1:
        raise InputError("m must be >= 1")
    if d < 2:
        raise InputError("d must be >= 2")
    return list(itertools.combinations_with_replacement(range(1, m + 1), d))


def index_count(m: int, d: int) -> int:
    return math.comb(m + d - 1, d)


class TargetForm:
    """The target psi: coefficients n_j over the full multi-index set J.

    Zero coefficients are stored explicitly; r = |J| = C(m+d-1, d).
    """

    __slots__ = ("m", "d", "coeffs")

    def __init__(self, m: int, d: int, coeffs: Mapping[MultiIndex, int]):
        if m < 1:
            raise InputError("m must be >= 1")
        if d < 2:
            raise InputError("d must be >= 2")
        index_set = multi_index_set(m, d)
        allowed = set(index_set)
        full: Dict[MultiIndex, int] = {j: 0 for j in index_set}
        for j, c in coeffs.items():
            key = tuple(sorted(int(v) for v in j))
            if key not in allowed:
                raise InputError(f"multi-index {j} is not in J({m},{d})")
            full[key] += int(c)
        self.m = m
        self.d = d
        self.coeffs = full

    @property
    def r(self) -> int:
        return len(self.coeffs)

    @property
    def indices(self) -> List[MultiIndex]:
        return list(self.coeffs)

    def diagonal(self, i: int) -> int:
        return self.coeffs[(i,) * self.d]

    def diagonal_values(self) -> List[int]:
        return [self.diagonal(i) for i in range(1, self.m + 1)]

    def values(self) -> List[int]:
        return [self.coeffs[j] for j in self.coeffs]

    def evaluate(self, t: Sequence[int]) -> int:
        if len(t) != self.m:
            raise InputError(f"point has {len(t)} coordinates, psi has {self.m}")
        total = 0
        for j, c in self.coeffs.items():
            v = c
            for i in j:
                v *= t[i - 1]
            total += v
        return total

    def permuted(self, perm: Sequence[int]) -> "TargetForm":
        """Relabel parameter t_i -> t_{perm[i-1]} (perm is 1-based values)."""
        out = {}
        for j, c in self.coeffs.items():
            out[tuple(sorted(perm[i - 1] for i in j))] = c
        return TargetForm(self.m, self.d, out)

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]]) -> "TargetForm":
        """Quadratic target psi(t) = t^T B t: n_ii = B_ii, n_ij = 2 B_ij."""
        m = len(gram)
        coeffs: Dict[MultiIndex, int] = {}
        for i in range(m):
            if len(gram[i]) != m:
                raise InputError("Gram matrix must be square")
            for j in range(i, m):
                if gram[i][j] != gram[j][i]:
                    raise InputError("Gram matrix must be symmetric")
                coeffs[(i + 1, j + 1)] = int(gram[i][j]) if i == j else 2 * int(gram[i][j])
        return cls(m, 2, coeffs)

    def canonical(self) -> str:
        return ",".join(
            f"{''.join(map(str, j))}:{c}" for j, c in self.coeffs.items()
        )

    def __eq__(self, other):
        return (
            isinstance(other, TargetForm)
            and (self.m, self.d) == (other.m, other.d)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.m, self.d, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        return f"TargetForm(m={self.m}, d={self.d}, {self.canonical()!r})"


# ---------------------------------------------------------------------------
# expansion F(t_1 x_1 + ... + t_m x_m) -> {Phi_j}
# ---------------------------------------------------------------------------

class ExpandedSystem:
    """The r polynomials Phi_j in m*s variables with sum_j Phi_j t^j = F(sum t_i x_i)."""

    __slots__ = ("base", "m", "polys")

    def __init__(self, base: Form, m: int, polys: Mapping[MultiIndex, Poly]):
        self.base = base
        self.m = m
        self.polys = dict(polys)

    @property
    def s(self) -> int:
        return self.base.s

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def r(self) -> int:
        return len(self.polys)

    @property
    def nvars(self) -> int:
        return self.m * self.base.s

    @property
    def indices(self) -> List[MultiIndex]:
        return list(self.polys)

    def var_index(self, block: int, coordinate: int) -> int:
        """Flat variable index for coordinate n of block x_i (both 1-based)."""
        return (block - 1) * self.base.s + (coordinate - 1)

    def flatten(self, blocks: Sequence[Sequence[int]]) -> List[int]:
        out: List[int] = []
        for b in blocks:
            out.extend(int(v) for v in b)
        if len(out) != self.nvars:
            raise InputError(f"expected {self.m} blocks of {self.base.s} coordinates")
        return out

    def evaluate_all(self, flat_point: Sequence[int]) -> Dict[MultiIndex, int]:
        return {j: p.evaluate(flat_point) for j, p in self.polys.items()}

    def values_matrix(self, points: np.ndarray) -> np.ndarray:
        """Phi values at many flat integer points: (N x r) int64."""
        cols = [p.evaluate_int_many(points) for p in self.polys.values()]
        return np.stack(cols, axis=1) if cols else np.zeros((points.shape[0], 0), np.int64)


def expand_system(form: Form, m: int) -> ExpandedSystem:
    """Expand F(t_1 x_1 + ... + t_m x_m) and collect Phi_j per multi-index."""
    if m < 1:
        raise InputError("m must be >= 1")
    s, nvars = form.s, m * form.s
    acc: Dict[Tuple[int, ...], Poly] = {}
    for exps, c in form.terms.items():
        partial: Dict[Tuple[int, ...], Poly] = {(0,) * m: Poly.constant(nvars, c)}
        for k, ek in enumerate(exps):
            if ek == 0:
                continue
            # (sum_i t_i X_{i,k})^{ek} via the multinomial theorem
            expansion: List[Tuple[Tuple[int, ...], Poly]] = []
            for comp in _compositions(ek, m):
                coeff = math.factorial(ek)
                mono = [0] * nvars
                for i, a in enumerate(comp):
                    coeff //= math.factorial(a)
                    if a:
                        mono[i * s + k] = a
                expansion.append((comp, Poly.monomial(nvars, tuple(mono), coeff)))
            nxt: Dict[Tuple[int, ...], Poly] = {}
            for te, poly in partial.items():
                for comp, mono_poly in expansion:
                    key = tuple(a + b for a, b in zip(te, comp))
                    prod = poly * mono_poly
                    nxt[key] = nxt[key] + prod if key in nxt else prod
            partial = nxt
        for te, poly in partial.items():
            acc[te] = acc[te] + poly if te in acc else poly

    polys: Dict[MultiIndex, Poly] = {}
    for j in multi_index_set(m, form.d):
        te = tuple(j.count(i) for i in range(1, m + 1))
        polys[j] = acc.get(te, Poly.zero(nvars))
    return ExpandedSystem(form, m, polys)


def _compositions(total: int, parts: int):
    """All tuples of `parts` non-negative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# definiteness and singular dimension
# ---------------------------------------------------------------------------

class Verdict(enum.Enum):
    PROVEN_POSITIVE = "proven-positive"
    PROVEN_NOT = "proven-not"
    HEURISTIC_POSITIVE = "heuristic-positive"
    HEURISTIC_NOT = "heuristic-not"

    def is_positive(self) -> bool:
        return self in (Verdict.PROVEN_POSITIVE, Verdict.HEURISTIC_POSITIVE)


def is_positive_definite(form: Form, samples: int = 5000, refinements: int = 100,
                         threshold: float = 1e-9) -> Verdict:
    """Definiteness test.

    Degree 2 is decided exactly by Sylvester's criterion on the Gram
    matrix over the rationals.  Higher degrees are sampled on the unit
    sphere with local descent refinement; those verdicts are heuristic.
    """
    if form.d == 2:
        minors = _leading_principal_minors(form.gram())
        return Verdict.PROVEN_POSITIVE if all(mi > 0 for mi in minors) else Verdict.PROVEN_NOT

    rng = stream("pd-heuristic", 0)
    pts = rng.standard_normal((samples, form.s))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    vals = form.poly().evaluate_float_many(pts)
    order = np.argsort(vals)
    best = float(vals[order[0]])
    # local random descent around the most suspicious directions
    for idx in order[:refinements]:
        x = pts[idx].copy()
        v = float(vals[idx])
        scale = 0.3
        for _ in range(60):
            cand = x + scale * rng.standard_normal(form.s)
            cand /= np.linalg.norm(cand)
            cv = float(form.poly().evaluate_float_many(cand[None, :])[0])
            if cv < v:
                x, v = cand, cv
            else:
                scale *= 0.85
        best = min(best, v)
    return Verdict.HEURISTIC_POSITIVE if best > threshold else Verdict.HEURISTIC_NOT


def quadratic_singular_dim(form: Form) -> int:
    """dim sing F for a quadratic form: s - rank of the Gram matrix."""
    if form.d != 2:
        raise InputError(f"quadratic_singular_dim needs degree 2, got {form.d}")
    return form.s - _fraction_rank(form.gram())


def _leading_principal_minors(g: List[List[Fraction]]) -> List[Fraction]:
    n = len(g)
    return [_fraction_det([row[: k + 1] for row in g[: k + 1]]) for k in range(n)]


def _fraction_det(mat: List[List[Fraction]]) -> Fraction:
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _fraction_rank(mat: List[List[Fraction]]) -> int:
    if not mat:
        return 0
    a = [row[:] for row in mat]
    rows, cols = len(a), len(a[0])
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = 1 / a[rank][col]
        for r in range(rows):
            if r != rank and a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank
