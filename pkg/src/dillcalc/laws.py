"""Executable law suite for the series calculus and its distribution algebra.

Every law is a named callable that draws its own deterministic random data,
measures the worst absolute deviation between the two sides of an identity,
and reports it against a stated tolerance.  Three tolerance classes are used:

* 1e-12 for identities that hold coefficientwise in exact arithmetic and are
  computed here by near-identical floating point paths (re-indexing, integer
  matrices, single products);
* 1e-9 for identities that are exact in exact arithmetic but reassociate
  float sums or products (composition, convolution, promotion);
* finite-difference checks carry their own discretization tolerance.

Truncation restrictions.  Most structural identities of the exponential hold
exactly at a flat truncation degree D; the ones that do not are checked on the
sub-basis where truncation commutes with both sides, and each such law names
its restriction in the report parameters:

* comonad coassociativity is compared on outer rows whose total underlying
  degree is at most D (unrestricted rows genuinely differ, because one side
  routes mass through indices above D that the other never builds);
* monoidal strength and the bialgebra compatibility square are compared on
  tensor columns eps_alpha (x) eps_beta with |alpha| + |beta| <= D;
* the two-sided inverse law for the monoidal product holds exactly in one
  direction and on the same admissible columns in the other.

Laws resolve `compose` through the calculus module object at call time, so a
corrupted composition routine is observed by the suite (see the mutation test
in the test suite).
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import calculus as ca
from . import exponential as xp
from . import multiindex as mi
from . import multilinear as ml
from .series import TruncatedSeries

TOL_EXACT = 1e-12
TOL_FLOAT = 1e-9
TOL_FD = 1e-6

MAX_LAW_DIM = 3
MAX_LAW_DEGREE = 6


@dataclass(frozen=True)
class LawConfig:
    dim: int = 2
    degree: int = 4
    seed: int = 20240801

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_LAW_DIM:
            raise ValueError(f"law dimension must be between 1 and {MAX_LAW_DIM}")
        if not 1 <= self.degree <= MAX_LAW_DEGREE:
            raise ValueError(f"law degree must be between 1 and {MAX_LAW_DEGREE}")


@dataclass(frozen=True)
class LawReport:
    name: str
    params: Dict[str, object]
    max_error: float
    tolerance: float
    passed: bool
    runtime_ms: float

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms,
        }


LawFn = Callable[[LawConfig, np.random.Generator], Tuple[float, float, Dict[str, object]]]
LAWS: Dict[str, LawFn] = {}


def law(name: str):
    def register(fn: LawFn) -> LawFn:
        if name in LAWS:
            raise ValueError(f"duplicate law name {name!r}")
        LAWS[name] = fn
        return fn

    return register


def law_names() -> List[str]:
    return list(LAWS)


def _law_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def run_law(name: str, config: LawConfig) -> LawReport:
    if name not in LAWS:
        raise KeyError(f"unknown law {name!r}")
    rng = _law_rng(config.seed, name)
    start = time.perf_counter()
    max_error, tolerance, params = LAWS[name](config, rng)
    elapsed = (time.perf_counter() - start) * 1000.0
    max_error = float(max_error)
    return LawReport(
        name=name,
        params=params,
        max_error=max_error,
        tolerance=float(tolerance),
        passed=bool(max_error <= tolerance),
        runtime_ms=elapsed,
    )


def run_suite(config: LawConfig, names: Optional[Iterable[str]] = None) -> List[LawReport]:
    selected = list(names) if names is not None else law_names()
    return [run_law(name, config) for name in selected]


# ---------------------------------------------------------------------------
# random data


def random_series(
    rng: np.random.Generator,
    dom: int,
    cod: int,
    degree: int,
    zero_constant: bool = False,
) -> TruncatedSeries:
    """Random truncated series; the degree-k coefficients are damped by
    1/(k! + 1) so high-degree compositions stay well scaled."""
    count = mi.count_indices(dom, degree)
    coeffs = rng.uniform(-1.0, 1.0, (cod, count)) + 1j * rng.uniform(-1.0, 1.0, (cod, count))
    degs = mi.degree_vector(dom, degree)
    damp = 1.0 / (np.array([math.factorial(int(k)) for k in degs]) + 1.0)
    coeffs = coeffs * damp
    if zero_constant:
        coeffs[:, 0] = 0.0
    return TruncatedSeries.from_arrays(dom, cod, degree, coeffs)


def random_vector(rng: np.random.Generator, dim: int, scale: float = 0.5) -> np.ndarray:
    return scale * (rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim))


def random_distribution(rng: np.random.Generator, dim: int, degree: int) -> xp.Distribution:
    n = mi.count_indices(dim, degree)
    return xp.Distribution(dim, degree, rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))


def _max_abs(x) -> float:
    arr = np.asarray(x)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def _digging_cap(dim: int, degree: int) -> Tuple[int, int]:
    """Largest (dim', degree') <= (min(dim, 2), degree) whose doubled
    exponential fits under the digging size bound."""
    dim = min(dim, 2)
    deg = degree
    while deg > 1:
        inner = mi.count_indices(dim, deg)
        if mi.count_indices(inner, deg) <= xp.DIGGING_DIM_BOUND:
            break
        deg -= 1
    return dim, deg


# ---------------------------------------------------------------------------
# multi-index laws


@law("multiindex-count")
def _law_mi_count(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0.0
    for dim in range(1, 4):
        for deg in range(0, 7):
            idx = mi.enumerate_indices(dim, deg)
            worst = max(worst, abs(len(idx) - math.comb(dim + deg, deg)))
            for p, a in enumerate(idx):
                worst = max(worst, abs(mi.position_of(a, deg) - p))
    return worst, TOL_EXACT, {"dims": "1..3", "degrees": "0..6"}


@law("multiindex-multinomial-factorial")
def _law_mi_multinomial(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0
    for dim in range(1, 4):
        for a in mi.enumerate_indices(dim, 6):
            lhs = mi.multinomial(a) * math.prod(math.factorial(e) for e in a)
            worst = max(worst, abs(lhs - math.factorial(a.degree())))
    return float(worst), TOL_EXACT, {"dims": "1..3", "degrees": "0..6"}


@law("multiindex-binom-symmetry")
def _law_mi_binom(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0
    for dim in range(1, 4):
        idx = mi.enumerate_indices(dim, 4)
        for a in idx:
            for b in idx:
                v = mi.binom_componentwise(a, b)
                worst = max(worst, abs(v - mi.binom_componentwise(b, a)))
                direct = math.prod(math.comb(x + y, x) for x, y in zip(a, b))
                worst = max(worst, abs(v - direct))
    worst = max(worst, abs(mi.binom_componentwise((1, 1), (1, 0)) - 2))
    return float(worst), TOL_EXACT, {"dims": "1..3", "degrees": "0..4"}


# ---------------------------------------------------------------------------
# series laws


@law("series-homogeneous-reconstruction")
def _law_homog_sum(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    total = TruncatedSeries.zero(config.dim, 2, config.degree)
    for k in range(config.degree + 1):
        total = total + f.homogeneous_part(k)
    return _max_abs(total.coeffs - f.coeffs), TOL_EXACT, {"dim": config.dim, "degree": config.degree}


@law("series-homogeneity-scaling")
def _law_homog_scaling(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    worst = 0.0
    for _ in range(5):
        x = random_vector(rng, config.dim)
        t = complex(rng.uniform(0.2, 1.5), rng.uniform(-0.5, 0.5))
        for k in range(config.degree + 1):
            part = f.homogeneous_part(k)
            worst = max(worst, _max_abs(part.evaluate(t * x) - t**k * part.evaluate(x)))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree, "trials": 5}


@law("series-directional-finite-difference")
def _law_directional_fd(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    t = 1e-5
    worst = 0.0
    for _ in range(5):
        x = random_vector(rng, config.dim, scale=0.3)
        v = random_vector(rng, config.dim, scale=1.0)
        exact = f.directional_derivative(x, v)
        fd = (f.evaluate(x + t * v) - f.evaluate(x - t * v)) / (2 * t)
        worst = max(worst, _max_abs(exact - fd))
    return worst, TOL_FD, {"dim": config.dim, "degree": config.degree, "step": t}


@law("series-cauchy-sampled")
def _law_cauchy(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # |c_alpha| r^|alpha| <= max |f| on the polytorus of radius r, sampled on a
    # (D+1)-point grid per axis; with D+1 points the coefficients are exact
    # discrete Fourier data of the samples, so the bound is exact too.
    f = random_series(rng, config.dim, 1, config.degree)
    r = 0.7
    pts = config.degree + 1
    angles = 2 * np.pi * np.arange(pts) / pts
    axes = [r * np.exp(1j * angles)] * config.dim
    sample_max = 0.0
    for combo in np.ndindex(*(pts,) * config.dim):
        x = np.array([axes[i][c] for i, c in enumerate(combo)])
        sample_max = max(sample_max, _max_abs(f.evaluate(x)))
    degs = mi.degree_vector(config.dim, config.degree)
    bounds = np.abs(f.coeffs[0]) * r ** degs.astype(float)
    excess = max(0.0, float(np.max(bounds)) - sample_max)
    return excess / (1.0 + sample_max), TOL_FLOAT, {
        "dim": config.dim,
        "degree": config.degree,
        "radius": r,
        "samples": pts**config.dim,
    }


@law("series-partial-sum-monotone")
def _law_truncate_prefix(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    worst = 0.0
    for k in range(config.degree + 1):
        t = f.truncate(k)
        n = mi.count_indices(config.dim, k)
        worst = max(worst, _max_abs(t.coeffs - f.coeffs[:, :n]))
    return worst, TOL_EXACT, {"dim": config.dim, "degree": config.degree}


# ---------------------------------------------------------------------------
# multilinear laws


@law("polarize-matches-from-monomial")
def _law_polarize(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0.0
    top = min(config.degree, 4)
    for arity in range(1, top + 1):
        f = random_series(rng, config.dim, 2, config.degree).homogeneous_part(arity)
        a = ml.from_monomial(f, arity)
        b = ml.polarize(f, arity)
        worst = max(worst, _max_abs(a.entries - b.entries))
    return worst, TOL_FLOAT, {"dim": config.dim, "arities": f"1..{top}"}


@law("multilinear-apply-symmetry")
def _law_apply_symmetry(config: LawConfig, rng) -> Tuple[float, float, dict]:
    arity = min(config.degree, 3)
    f = random_series(rng, config.dim, 2, config.degree).homogeneous_part(arity)
    tensor = ml.from_monomial(f, arity)
    args = [random_vector(rng, config.dim) for _ in range(arity)]
    base = tensor.apply(args)
    worst = 0.0
    perm = list(range(arity))
    for _ in range(4):
        rng.shuffle(perm)
        worst = max(worst, _max_abs(tensor.apply([args[p] for p in perm]) - base))
    return worst, TOL_EXACT, {"dim": config.dim, "arity": arity}


@law("multilinear-apply-slot-linearity")
def _law_apply_linearity(config: LawConfig, rng) -> Tuple[float, float, dict]:
    arity = min(config.degree, 3)
    f = random_series(rng, config.dim, 2, config.degree).homogeneous_part(arity)
    tensor = ml.from_monomial(f, arity)
    rest = [random_vector(rng, config.dim) for _ in range(arity - 1)]
    x, y = random_vector(rng, config.dim), random_vector(rng, config.dim)
    a = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    b = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    lhs = tensor.apply([a * x + b * y] + rest)
    rhs = a * tensor.apply([x] + rest) + b * tensor.apply([y] + rest)
    return _max_abs(lhs - rhs), TOL_FLOAT, {"dim": config.dim, "arity": arity}


@law("multilinear-diagonal-roundtrip")
def _law_diagonal(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0.0
    for arity in range(0, min(config.degree, 4) + 1):
        f = random_series(rng, config.dim, 2, config.degree).homogeneous_part(arity)
        tensor = ml.from_monomial(f, arity)
        for _ in range(3):
            x = random_vector(rng, config.dim)
            worst = max(worst, _max_abs(tensor.apply([x] * arity) - f.evaluate(x)))
    return worst, TOL_FLOAT, {"dim": config.dim, "arities": f"0..{min(config.degree, 4)}"}


# ---------------------------------------------------------------------------
# composition laws


@law("compose-matches-naive")
def _law_compose_naive(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    g = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    fast = ca.compose(f, g)
    slow = ca.compose_naive(f, g)
    return _max_abs(fast.coeffs - slow.coeffs), TOL_FLOAT, {
        "dim": config.dim,
        "degree": config.degree,
    }


@law("compose-associativity")
def _law_compose_assoc(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    g = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    h = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    lhs = ca.compose(ca.compose(f, g), h)
    rhs = ca.compose(f, ca.compose(g, h))
    return _max_abs(lhs.coeffs - rhs.coeffs), TOL_FLOAT, {
        "dim": config.dim,
        "degree": config.degree,
    }


@law("compose-identity")
def _law_compose_identity(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    ident_dom = TruncatedSeries.identity(config.dim, config.degree)
    ident_cod = TruncatedSeries.identity(2, config.degree)
    worst = max(
        _max_abs(ca.compose(f, ident_dom).coeffs - f.coeffs),
        _max_abs(ca.compose(ident_cod, f, outer_polynomial=True).coeffs - f.coeffs),
    )
    return worst, TOL_EXACT, {"dim": config.dim, "degree": config.degree}


@law("composition-tuple-count")
def _law_split_count(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0
    for parts in range(1, 6):
        for total in range(0, 9):
            pos = sum(ca._orderings(s) for s in ca.degree_splits(total, parts, minimum=1))
            wanted = math.comb(total - 1, parts - 1) if total >= 1 else 0
            worst = max(worst, abs(pos - wanted))
            free = sum(ca._orderings(s) for s in ca.degree_splits(total, parts, minimum=0))
            worst = max(worst, abs(free - math.comb(total + parts - 1, parts - 1)))
    return float(worst), TOL_EXACT, {"parts": "1..5", "totals": "0..8"}


@law("curry-uncurry-roundtrip")
def _law_curry_roundtrip(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim = max(config.dim, 2)
    f = random_series(rng, dim, 2, config.degree)
    worst = 0.0
    for split in range(1, dim):
        back = ca.uncurry(ca.curry(f, split))
        worst = max(worst, _max_abs(back.coeffs - f.coeffs))
    return worst, 0.0, {"dim": dim, "degree": config.degree, "note": "re-indexing, bit exact"}


@law("curry-evaluation")
def _law_curry_eval(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim = max(config.dim, 2)
    f = random_series(rng, dim, 2, config.degree)
    worst = 0.0
    for split in range(1, dim):
        c = ca.curry(f, split)
        for _ in range(4):
            x = random_vector(rng, split)
            y = random_vector(rng, dim - split)
            worst = max(
                worst,
                _max_abs(c.evaluate(x, y) - f.evaluate(np.concatenate([x, y]))),
            )
    return worst, TOL_FLOAT, {"dim": dim, "degree": config.degree}


@law("curry-split-slot-reference")
def _law_curry_reference(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # the polarized reference rebuilds f(x ++ y) from split-slot tensor values,
    # which is exactly the expansion the curry re-indexing encodes
    dim = max(config.dim, 2)
    degree = min(config.degree, 4)
    f = random_series(rng, dim, 2, degree)
    worst = 0.0
    for split in range(1, dim):
        c = ca.curry(f, split)
        for _ in range(3):
            x = random_vector(rng, split)
            y = random_vector(rng, dim - split)
            ref = ca.split_slot_reference(f, split, x, y)
            worst = max(worst, _max_abs(c.evaluate(x, y) - ref))
    return worst, TOL_FLOAT, {"dim": dim, "degree": degree}


@law("chain-rule")
def _law_chain_rule(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 1, config.degree)
    g = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    comp = ca.compose(f, g)
    worst = 0.0
    for i in range(config.dim):
        lhs = comp.component(0).partial_derivative(i)
        rhs = TruncatedSeries.zero(config.dim, 1, config.degree - 1)
        for j in range(config.dim):
            outer = ca.compose(f.component(0).partial_derivative(j), g)
            rhs = rhs + outer.pointwise_multiply(g.component(j).partial_derivative(i))
        worst = max(worst, _max_abs(lhs.coeffs - rhs.coeffs))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


# ---------------------------------------------------------------------------
# distribution laws


@law("dirac-evaluates")
def _law_dirac(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    worst = 0.0
    for _ in range(5):
        x = random_vector(rng, config.dim)
        worst = max(worst, _max_abs(xp.dirac(x, config.degree).apply(f) - f.evaluate(x)))
    return worst, TOL_EXACT, {"dim": config.dim, "degree": config.degree}


@law("theta-extracts")
def _law_theta(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    worst = 0.0
    for order in range(config.degree + 1):
        x = random_vector(rng, config.dim)
        got = xp.theta(order, x, config.degree).apply(f)
        want = math.factorial(order) * f.homogeneous_part(order).evaluate(x)
        worst = max(worst, _max_abs(got - want))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


@law("theta-convolution-induction")
def _law_theta_induction(config: LawConfig, rng) -> Tuple[float, float, dict]:
    x = random_vector(rng, config.dim)
    worst = 0.0
    for order in range(config.degree):
        lhs = xp.convolve(xp.theta(1, x, config.degree), xp.theta(order, x, config.degree))
        rhs = xp.theta(order + 1, x, config.degree)
        worst = max(worst, _max_abs(lhs.coeffs - rhs.coeffs))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


@law("convolution-monoid")
def _law_conv_monoid(config: LawConfig, rng) -> Tuple[float, float, dict]:
    d1 = random_distribution(rng, config.dim, config.degree)
    d2 = random_distribution(rng, config.dim, config.degree)
    d3 = random_distribution(rng, config.dim, config.degree)
    unit = xp.Distribution.extractor((0,) * config.dim, config.degree)
    worst = max(
        _max_abs(
            xp.convolve(xp.convolve(d1, d2), d3).coeffs
            - xp.convolve(d1, xp.convolve(d2, d3)).coeffs
        ),
        _max_abs(xp.convolve(d1, d2).coeffs - xp.convolve(d2, d1).coeffs),
        _max_abs(xp.convolve(d1, unit).coeffs - d1.coeffs),
    )
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


@law("cocontraction-matches-convolve")
def _law_cocontraction_convolve(config: LawConfig, rng) -> Tuple[float, float, dict]:
    d1 = random_distribution(rng, config.dim, config.degree)
    d2 = random_distribution(rng, config.dim, config.degree)
    op = xp.cocontraction(config.dim, config.degree)
    got = op(np.kron(d1.coeffs, d2.coeffs))
    return _max_abs(got.coeffs - xp.convolve(d1, d2).coeffs), TOL_FLOAT, {
        "dim": config.dim,
        "degree": config.degree,
    }


@law("delta-taylor")
def _law_delta_taylor(config: LawConfig, rng) -> Tuple[float, float, dict]:
    worst = 0.0
    for _ in range(5):
        x = random_vector(rng, config.dim, scale=0.8)
        d = xp.dirac(x, config.degree)
        acc = xp.Distribution.zero(config.dim, config.degree)
        for order in range(config.degree + 1):
            acc = acc + xp.theta(order, x, config.degree).scale(1.0 / math.factorial(order))
        worst = max(worst, _max_abs(acc.coeffs - d.coeffs))
    return worst, TOL_EXACT, {"dim": config.dim, "degree": config.degree}


@law("dirac-spanning")
def _law_dirac_spanning(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # one-variable check: D+1 Dirac functionals at scaled roots of unity span
    # the whole distribution space, so every extractor is a finite combination
    # of evaluations
    degree = min(config.degree, 4)
    pts = degree + 1
    r = 0.8
    nodes = r * np.exp(2j * np.pi * np.arange(pts) / pts)
    basis = np.stack([xp.dirac(np.array([z]), degree).coeffs for z in nodes], axis=1)
    worst = 0.0
    for k in range(pts):
        target = np.zeros(pts, dtype=np.complex128)
        target[k] = 1.0
        weights = np.linalg.solve(basis, target)
        recon = basis @ weights
        worst = max(worst, _max_abs(recon - target))
    return worst, TOL_FLOAT, {"dim": 1, "degree": degree, "nodes": pts}


# ---------------------------------------------------------------------------
# comonad and bialgebra laws


@law("comonad-counit-laws")
def _law_comonad_counit(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim, degree = _digging_cap(config.dim, config.degree)
    rho = xp.comultiplication(dim, degree)
    inner = mi.count_indices(dim, degree)
    left = xp.counit(inner, degree) @ rho
    worst = _max_abs(left.matrix - np.eye(inner))
    promoted = xp.bang_linear(xp.counit(dim, degree).matrix, degree)
    right = promoted @ rho
    worst = max(worst, _max_abs(right.matrix - np.eye(inner)))
    return worst, TOL_EXACT, {"dim": dim, "degree": degree}


@law("comonad-coassociativity")
def _law_comonad_coassoc(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # compared on outer rows B with sum_b B_b |A_b| <= D, the rows whose
    # intermediate level-two index stays under the degree budget; on the other
    # rows the two sides genuinely differ at a flat truncation, because only
    # one of them routes mass through a level-two index of degree above D
    dim = min(config.dim, 2)
    degree = min(config.degree, 2)
    rho = xp.comultiplication(dim, degree)
    n1 = mi.count_indices(dim, degree)
    lhs = xp.comultiplication(n1, degree) @ rho
    rhs = xp.bang_linear(rho.matrix, degree) @ rho
    n2 = mi.count_indices(n1, degree)
    u2 = mi.degree_vector(n1, degree)  # degree of each !!E index over !E
    outer3 = mi.exponent_matrix(n2, degree)  # rows: !!!E indices over !!E
    u3 = outer3 @ u2
    rows = np.flatnonzero(u3 <= degree)
    diff = _max_abs(lhs.matrix[rows] - rhs.matrix[rows])
    return diff, TOL_EXACT, {
        "dim": dim,
        "degree": degree,
        "restriction": f"rows with factor degrees summing to <= {degree}",
        "rows_checked": int(rows.size),
        "rows_total": int(u3.size),
    }


@law("bialgebra-contraction-laws")
def _law_contraction(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim, degree = config.dim, config.degree
    idx = mi.enumerate_indices(dim, degree)
    pos = mi.index_positions(dim, degree)

    def splits(gamma):
        out = []
        for alpha in mi.enumerate_indices(dim, gamma.degree()):
            if all(a <= g for a, g in zip(alpha, gamma)):
                out.append((pos[alpha], pos[gamma - alpha]))
        return out

    worst = 0.0
    zero = (0,) * dim
    for gamma in idx:
        pairs = splits(gamma)
        lhs: dict = {}
        rhs: dict = {}
        for a, b in pairs:
            for a1, a2 in splits(idx[a]):
                lhs[(a1, a2, b)] = lhs.get((a1, a2, b), 0.0) + 1.0
            for b1, b2 in splits(idx[b]):
                rhs[(a, b1, b2)] = rhs.get((a, b1, b2), 0.0) + 1.0
        for key in lhs.keys() | rhs.keys():
            worst = max(worst, abs(lhs.get(key, 0.0) - rhs.get(key, 0.0)))
        # counit on either side collapses to the identity
        left_unit = sum(1.0 for a, b in pairs if idx[a] == zero and b == pos[gamma])
        right_unit = sum(1.0 for a, b in pairs if idx[b] == zero and a == pos[gamma])
        worst = max(worst, abs(left_unit - 1.0), abs(right_unit - 1.0))
        # cocommutativity: the split set is symmetric
        worst = max(worst, 0.0 if {(b, a) for a, b in pairs} == set(pairs) else 1.0)
    return worst, TOL_EXACT, {"dim": dim, "degree": degree}


@law("bialgebra-cocontraction-laws")
def _law_cocontraction(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim, degree = config.dim, config.degree
    nv = xp.cocontraction(dim, degree).matrix
    n = mi.count_indices(dim, degree)
    blocks = [nv[:, i * n : (i + 1) * n] for i in range(n)]
    idx = mi.enumerate_indices(dim, degree)
    pos = mi.index_positions(dim, degree)
    worst = 0.0
    for i, alpha in enumerate(idx):
        for j, beta in enumerate(idx):
            # associativity block identity: nabla(nabla(a (x) b) (x) -) as a
            # matrix equals block(a) applied after block(b)
            if alpha.degree() + beta.degree() <= degree:
                lhs = mi.binom_componentwise(alpha, beta) * blocks[pos[alpha + beta]]
            else:
                lhs = np.zeros_like(blocks[0])
            worst = max(worst, _max_abs(lhs - blocks[i] @ blocks[j]))
            # commutativity
            worst = max(worst, _max_abs(nv[:, i * n + j] - nv[:, j * n + i]))
    m0 = xp.coweakening(dim, degree).matrix
    worst = max(worst, _max_abs(nv @ np.kron(m0, np.eye(n)) - np.eye(n)))
    worst = max(worst, _max_abs(nv @ np.kron(np.eye(n), m0) - np.eye(n)))
    return worst, TOL_EXACT, {"dim": dim, "degree": degree}


@law("bialgebra-compatibility")
def _law_bialgebra_compat(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # Delta(nabla(eps_a (x) eps_b)) against the four-way redistribution,
    # restricted to columns with |alpha| + |beta| <= D where no intermediate
    # index can overflow
    dim, degree = config.dim, config.degree
    idx = mi.enumerate_indices(dim, degree)
    pos = mi.index_positions(dim, degree)

    def splits(gamma):
        return [
            (alpha, gamma - alpha)
            for alpha in mi.enumerate_indices(dim, gamma.degree())
            if all(a <= g for a, g in zip(alpha, gamma))
        ]

    worst = 0.0
    checked = 0
    for alpha in idx:
        for beta in idx:
            if alpha.degree() + beta.degree() > degree:
                continue
            checked += 1
            w = mi.binom_componentwise(alpha, beta)
            lhs = {(pos[u], pos[v]): float(w) for u, v in splits(alpha + beta)}
            rhs: dict = {}
            for a1, a2 in splits(alpha):
                for b1, b2 in splits(beta):
                    key = (pos[a1 + b1], pos[a2 + b2])
                    rhs[key] = rhs.get(key, 0.0) + float(
                        mi.binom_componentwise(a1, b1) * mi.binom_componentwise(a2, b2)
                    )
            for key in lhs.keys() | rhs.keys():
                worst = max(worst, abs(lhs.get(key, 0.0) - rhs.get(key, 0.0)))
    return worst, TOL_EXACT, {
        "dim": dim,
        "degree": degree,
        "restriction": f"columns with |alpha| + |beta| <= {degree}",
        "columns_checked": checked,
    }


@law("monoidality-bijection")
def _law_monoidal_bijection(config: LawConfig, rng) -> Tuple[float, float, dict]:
    dim_e = config.dim
    dim_f = max(1, config.dim - 1)
    degree = config.degree
    m2 = xp.monoidal_product(dim_e, dim_f, degree)
    m2inv = xp.monoidal_product_inverse(dim_e, dim_f, degree)
    worst = _max_abs((m2 @ m2inv).matrix - np.eye(m2.target.size))
    back = (m2inv @ m2).matrix
    ne = mi.count_indices(dim_e, degree)
    nf = mi.count_indices(dim_f, degree)
    de = mi.degree_vector(dim_e, degree)
    df = mi.degree_vector(dim_f, degree)
    admissible = np.flatnonzero((de[:, None] + df[None, :]).reshape(-1) <= degree)
    eye = np.eye(ne * nf)
    worst = max(worst, _max_abs(back[:, admissible] - eye[:, admissible]))
    return worst, TOL_EXACT, {
        "dims": [dim_e, dim_f],
        "degree": degree,
        "restriction": f"inverse-then-product on columns with |alpha| + |beta| <= {degree}",
    }


@law("monoidality-strength")
def _law_monoidal_strength(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # digging is monoidal: pushing a product pair through m2 then digging then
    # the promoted pair of promoted projections agrees with digging each half
    # and re-pairing, on columns with |alpha| + |beta| <= D
    degree = min(config.degree, 2)
    dim_e = dim_f = 1
    m2 = xp.monoidal_product(dim_e, dim_f, degree)
    rho_ef = xp.comultiplication(dim_e + dim_f, degree)
    ne = mi.count_indices(dim_e, degree)
    nf = mi.count_indices(dim_f, degree)
    p1 = np.zeros((dim_e, dim_e + dim_f))
    p1[:, :dim_e] = np.eye(dim_e)
    p2 = np.zeros((dim_f, dim_e + dim_f))
    p2[:, dim_e:] = np.eye(dim_f)
    bang_p1 = xp.bang_linear(p1, degree).matrix
    bang_p2 = xp.bang_linear(p2, degree).matrix
    paired = xp.bang_linear(np.vstack([bang_p1, bang_p2]), degree)
    lhs = (paired @ rho_ef @ m2).matrix
    rho_e = xp.comultiplication(dim_e, degree)
    rho_f = xp.comultiplication(dim_f, degree)
    m2_bang = xp.monoidal_product(ne, nf, degree)
    rhs = (m2_bang @ rho_e.tensor(rho_f)).matrix
    de = mi.degree_vector(dim_e, degree)
    df = mi.degree_vector(dim_f, degree)
    admissible = np.flatnonzero((de[:, None] + df[None, :]).reshape(-1) <= degree)
    worst = _max_abs(lhs[:, admissible] - rhs[:, admissible])
    return worst, TOL_EXACT, {
        "dims": [dim_e, dim_f],
        "degree": degree,
        "restriction": f"columns with |alpha| + |beta| <= {degree}",
    }


# ---------------------------------------------------------------------------
# codereliction laws


@law("codereliction-identity")
def _law_coder_identity(config: LawConfig, rng) -> Tuple[float, float, dict]:
    op = xp.counit(config.dim, config.degree) @ xp.codereliction_operator(
        config.dim, config.degree
    )
    return _max_abs(op.matrix - np.eye(config.dim)), TOL_EXACT, {
        "dim": config.dim,
        "degree": config.degree,
    }


@law("codereliction-finite-difference")
def _law_coder_fd(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    t = 1e-6
    worst = 0.0
    for _ in range(5):
        v = random_vector(rng, config.dim, scale=1.0)
        exact = xp.codereliction(v, config.degree).apply(f)
        fd = (f.evaluate(t * v) - f.evaluate(-t * v)) / (2 * t)
        worst = max(worst, _max_abs(exact - fd))
    return worst, 1e-5, {"dim": config.dim, "degree": config.degree, "step": t}


@law("codereliction-digging")
def _law_coder_digging(config: LawConfig, rng) -> Tuple[float, float, dict]:
    # digging after codereliction equals convolving the second-level
    # codereliction with the digging of the convolution unit
    dim, degree = _digging_cap(config.dim, config.degree)
    rho = xp.comultiplication(dim, degree)
    n1 = mi.count_indices(dim, degree)
    unit = xp.Distribution.extractor((0,) * dim, degree)
    rho_unit = rho(unit)
    worst = 0.0
    for trial in range(3):
        v = random_vector(rng, dim)
        lhs = rho(xp.codereliction(v, degree))
        inner = xp.codereliction(v, degree)
        lifted = xp.codereliction(inner.coeffs, degree)  # theta_1 at level two
        rhs = xp.convolve(lifted, rho_unit)
        worst = max(worst, _max_abs(lhs.coeffs - rhs.coeffs))
    return worst, TOL_EXACT, {"dim": dim, "degree": degree, "level2_dim": n1}


# ---------------------------------------------------------------------------
# promotion and adjunction laws


@law("bang-functoriality")
def _law_bang_functor(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree, zero_constant=True)
    g = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    lhs = xp.bang_map(ca.compose(f, g), config.degree)
    rhs = xp.bang_map(f, config.degree) @ xp.bang_map(g, config.degree)
    worst = _max_abs(lhs.matrix - rhs.matrix)
    ident = xp.bang_map(TruncatedSeries.identity(config.dim, config.degree), config.degree)
    worst = max(worst, _max_abs(ident.matrix - np.eye(ident.source.size)))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


@law("adjunction-roundtrip")
def _law_adjunction_roundtrip(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    back = xp.operator_to_series(xp.series_to_operator(f))
    worst = _max_abs(back.coeffs - f.coeffs)
    n = mi.count_indices(config.dim, config.degree)
    mat = rng.uniform(-1, 1, (2, n)) + 1j * rng.uniform(-1, 1, (2, n))
    op = xp.LinearOperator(xp.DistBasis(config.dim, config.degree), xp.VectorBasis(2), mat)
    again = xp.series_to_operator(xp.operator_to_series(op))
    worst = max(worst, _max_abs(again.matrix - op.matrix))
    return worst, 0.0, {"dim": config.dim, "degree": config.degree, "note": "bit exact"}


@law("adjunction-extractor-expansion")
def _law_adjunction_expansion(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    op = xp.series_to_operator(f)
    worst = 0.0
    for _ in range(4):
        x = random_vector(rng, config.dim)
        total = np.zeros(2, dtype=np.complex128)
        for order in range(config.degree + 1):
            total += op(xp.theta(order, x, config.degree).coeffs) / math.factorial(order)
        worst = max(worst, _max_abs(total - f.evaluate(x)))
        worst = max(worst, _max_abs(op(xp.dirac(x, config.degree)) - f.evaluate(x)))
    return worst, TOL_FLOAT, {"dim": config.dim, "degree": config.degree}


@law("adjunction-naturality")
def _law_adjunction_naturality(config: LawConfig, rng) -> Tuple[float, float, dict]:
    f = random_series(rng, config.dim, 2, config.degree)
    g = random_series(rng, config.dim, config.dim, config.degree, zero_constant=True)
    lhs = xp.series_to_operator(ca.compose(f, g))
    rhs = xp.series_to_operator(f) @ xp.bang_map(g, config.degree)
    return _max_abs(lhs.matrix - rhs.matrix), TOL_FLOAT, {
        "dim": config.dim,
        "degree": config.degree,
    }
