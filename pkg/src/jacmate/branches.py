"""Branches at infinity: candidate asymptotes and numeric continuation.

A right outer edge with normal (k, l) contributes zero branches of the
shape y ~ c * x^theta with theta = l/k, where c is a nonzero real root of
the edge's face polynomial.  Root isolation is exact; each candidate is
then probed by exact sign evaluation of p along the two curves bounding
the isolating interval, far out on the x axis.  Odd-multiplicity roots
force a sign change of the face and always yield a branch; even ones are
confirmed only when the probes straddle.

Confirmed asymptotes can be traced: a predictor-corrector walk along x
producing samples of the actual zero branch with a certified residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import univariate as uni
from .poly import (
    IDENTITY,
    NEGATE_X,
    NEGATE_XY,
    NEGATE_Y,
    BivariatePolynomial,
    Transform,
    apply_transform,
    compose_transforms,
)
from .polygon import (
    OuterEdge,
    corollary_certificate,
    face_polynomial,
    newton_polygon,
    right_outer_edges,
)

__all__ = [
    "NotRightOuterEdge",
    "NonFiniteEvaluation",
    "NoConvergence",
    "BranchLost",
    "NoConfirmedBranch",
    "SignProbe",
    "BranchAsymptote",
    "TraceConfig",
    "BranchTrace",
    "PROBE_XS",
    "sign_probe",
    "branch_candidates",
    "trace_branch",
    "lowest_positive_branch",
    "fitted_exponent",
    "trace_to_csv",
]

PROBE_XS = (1e2, 1e4, 1e6)

CONFIRMED = "Confirmed"
INCONCLUSIVE = "Inconclusive"


class NotRightOuterEdge(ValueError):
    pass


class NonFiniteEvaluation(ValueError):
    pass


class NoConvergence(RuntimeError):
    def __init__(self, message: str, last_sample: tuple[float, float] | None = None):
        super().__init__(message)
        self.last_sample = last_sample


class BranchLost(RuntimeError):
    def __init__(self, message: str, last_sample: tuple[float, float] | None = None):
        super().__init__(message)
        self.last_sample = last_sample


class NoConfirmedBranch(RuntimeError):
    pass


@dataclass(frozen=True)
class SignProbe:
    x_probe: float
    c_minus: float
    c_plus: float
    sign_minus: int
    sign_plus: int
    straddles: bool


@dataclass(frozen=True)
class BranchAsymptote:
    edge: OuterEdge
    theta: Fraction
    c_interval: tuple[Fraction, Fraction]
    c_star: float
    root_multiplicity: int
    existence: str  # Confirmed | Inconclusive
    probes: tuple[SignProbe, ...]


@dataclass(frozen=True)
class TraceConfig:
    x_start: float = 10.0
    x_end: float = 1000.0
    growth_factor: float = 1.05
    newton_tol: float = 1e-10
    max_newton_iters: int = 80

    def __post_init__(self):
        if not (self.x_start >= 1.0):
            raise ValueError("x_start must be at least 1")
        if self.x_end < self.x_start:
            raise ValueError("x_end must not precede x_start")
        if not (self.growth_factor > 1.0):
            raise ValueError("growth_factor must exceed 1")
        if not (self.newton_tol > 0.0):
            raise ValueError("newton_tol must be positive")


@dataclass(frozen=True)
class BranchTrace:
    samples: tuple[tuple[float, float], ...]
    theta: Fraction
    residual_bound: float
    ratio_bounds: tuple[float, float]


def sign_probe(
    p: BivariatePolynomial,
    theta: Fraction,
    c_minus: Fraction | float,
    c_plus: Fraction | float,
    x_probe: float,
) -> SignProbe:
    """Exact signs of p on the curves y = c * x^theta at one large x.

    The probe abscissa is rounded to the nearest perfect k-th power
    (theta = l/k in lowest terms) so that both curve points are rational
    and the evaluation stays exact.
    """
    if not math.isfinite(x_probe) or x_probe <= 0:
        raise NonFiniteEvaluation(f"probe abscissa {x_probe!r} is unusable")
    theta = Fraction(theta)
    k, l = theta.denominator, theta.numerator
    s = max(2, round(x_probe ** (1.0 / k)))
    x = Fraction(s) ** k
    signs = []
    for c in (c_minus, c_plus):
        value = p.evaluate(x, Fraction(c) * Fraction(s) ** l)
        signs.append(0 if value == 0 else (1 if value > 0 else -1))
    return SignProbe(
        x_probe=float(x),
        c_minus=float(c_minus),
        c_plus=float(c_plus),
        sign_minus=signs[0],
        sign_plus=signs[1],
        straddles=signs[0] * signs[1] == -1,
    )


def branch_candidates(
    p: BivariatePolynomial, edge: OuterEdge
) -> list[BranchAsymptote]:
    """One asymptote per nonzero real root of the edge's face polynomial."""
    if not edge.is_right:
        raise NotRightOuterEdge(f"edge with normal {edge.normal} is not right outer")
    face = face_polynomial(p, edge)
    coeffs = [Fraction(0)] * (max(face) + 1)
    for j, c in face.items():
        coeffs[j] = c
    # strip the power of c dividing the face; its root c = 0 is not a branch
    low = next(k for k, c in enumerate(coeffs) if c != 0)
    reduced = coeffs[low:]
    out: list[BranchAsymptote] = []
    for iv in uni.isolate_roots(reduced, width=uni.DEFAULT_WIDTH):
        lo, hi = iv.lo, iv.hi
        if lo < 0 < hi:
            # all roots of the reduced face are nonzero; re-isolate on the
            # side of zero that actually holds this one
            side = uni.isolate_roots(reduced, lo, Fraction(0)) or uni.isolate_roots(
                reduced, Fraction(0), hi
            )
            lo, hi = side[0].lo, side[0].hi
        c_star = uni.float_root(reduced, uni.RootInterval(lo, hi, iv.multiplicity))
        probes = tuple(
            sign_probe(p, edge.slope, lo, hi, xp) for xp in PROBE_XS
        )
        if iv.multiplicity % 2 == 1:
            existence = CONFIRMED  # the face changes sign across the root
        else:
            existence = CONFIRMED if all(pr.straddles for pr in probes) else INCONCLUSIVE
        out.append(
            BranchAsymptote(
                edge=edge,
                theta=edge.slope,
                c_interval=(lo, hi),
                c_star=c_star,
                root_multiplicity=iv.multiplicity,
                existence=existence,
                probes=probes,
            )
        )
    return out


def _term_scale(p: BivariatePolynomial, x: float, y: float) -> float:
    scale = 0.0
    for (i, j), c in p.terms.items():
        try:
            v = abs(float(c)) * abs(x) ** i * abs(y) ** j
        except OverflowError:
            return math.inf
        if v > scale:
            scale = v
    return max(scale, 1e-300)


def _bracket(p, x: float, y_pred: float) -> tuple[float, float] | None:
    """Expanding search around the predictor for a sign change of p(x, .)."""
    g0 = p.evaluate_approx(x, y_pred)
    if g0 == 0.0:
        return (y_pred, y_pred)
    s0 = math.copysign(1.0, g0)
    base = abs(y_pred) if y_pred != 0 else 1.0
    w = 1e-9
    while w <= 0.9:
        for cand in (y_pred - w * base, y_pred + w * base):
            g = p.evaluate_approx(x, cand)
            if not math.isfinite(g):
                continue
            if g == 0.0:
                return (cand, cand)
            if math.copysign(1.0, g) != s0:
                return (min(y_pred, cand), max(y_pred, cand))
        w *= 2
    return None


def _solve_at(
    p, dp_dy, x: float, y_pred: float, cfg: TraceConfig
) -> float | None:
    """Safeguarded Newton/bisection solve of p(x, y) = 0 near the predictor."""
    bracket = _bracket(p, x, y_pred)
    if bracket is None:
        return None
    lo, hi = bracket
    if lo == hi:
        return lo
    flo = p.evaluate_approx(x, lo)
    y = 0.5 * (lo + hi)
    for _ in range(cfg.max_newton_iters):
        g = p.evaluate_approx(x, y)
        if abs(g) <= cfg.newton_tol * _term_scale(p, x, y):
            return y
        if math.copysign(1.0, g) == math.copysign(1.0, flo):
            lo = y
        else:
            hi = y
        d = dp_dy.evaluate_approx(x, y)
        step = g / d if d != 0 and math.isfinite(d) else math.inf
        cand = y - step
        if not (lo < cand < hi) or not math.isfinite(cand):
            cand = 0.5 * (lo + hi)  # damped fallback: bisection
        y = cand
        if hi - lo <= abs(y) * 1e-17:
            break
    g = p.evaluate_approx(x, y)
    if abs(g) <= cfg.newton_tol * _term_scale(p, x, y):
        return y
    raise NoConvergence(
        f"residual stayed above tolerance at x={x!r}", last_sample=(x, y)
    )


def trace_branch(
    p: BivariatePolynomial, asymptote: BranchAsymptote, cfg: TraceConfig
) -> BranchTrace:
    """Follow the zero branch with asymptote c* x^theta from x_start to x_end.

    Each accepted sample satisfies |p(x, y)| <= newton_tol * scale where
    scale is the largest magnitude among the evaluated terms, so the
    residual criterion is relative to the size of the cancellation.
    """
    if asymptote.existence != CONFIRMED:
        raise ValueError("only confirmed asymptotes can be traced")
    theta = float(asymptote.theta)
    dp_dy = p.partial_derivative("y")
    xs = [cfg.x_start]
    while xs[-1] < cfg.x_end:
        xs.append(min(xs[-1] * cfg.growth_factor, cfg.x_end))
    # the raw asymptotic predictor is only reliable far out, so lock onto
    # the branch at the largest abscissa and walk back by continuation
    solved: list[tuple[float, float]] = []
    y_pred = asymptote.c_star * xs[-1] ** theta
    for i in range(len(xs) - 1, -1, -1):
        x = xs[i]
        try:
            y = _solve_at(p, dp_dy, x, y_pred, cfg)
        except NoConvergence as exc:
            raise NoConvergence(str(exc), solved[-1] if solved else None) from exc
        if y is None:
            raise BranchLost(
                f"no sign change near the predictor at x={x!r}",
                solved[-1] if solved else None,
            )
        solved.append((x, y))
        if i:
            y_pred = y * (xs[i - 1] / x) ** theta
    samples = tuple(reversed(solved))
    residual = 0.0
    ratio_lo, ratio_hi = math.inf, -math.inf
    for x, y in samples:
        residual = max(residual, abs(p.evaluate_approx(x, y)))
        ratio = y / x**theta
        ratio_lo, ratio_hi = min(ratio_lo, ratio), max(ratio_hi, ratio)
    return BranchTrace(
        samples=samples,
        theta=asymptote.theta,
        residual_bound=residual,
        ratio_bounds=(ratio_lo, ratio_hi),
    )


_SIGN_ORDER = (IDENTITY, NEGATE_Y, NEGATE_X, NEGATE_XY)


def lowest_positive_branch(
    p: BivariatePolynomial, cfg: TraceConfig | None = None
) -> tuple[Transform, BranchTrace]:
    """Trace the smallest-slope branch, moved into the open first quadrant.

    Requires a satisfied certificate.  Axis sign changes are tried in a
    fixed order (identity, negate y, negate x, both) until the witness
    edge carries a confirmed asymptote with positive leading coefficient;
    the returned transform is the full map from the input polynomial to
    the traced coordinates.
    """
    cert = corollary_certificate(p, allow_swap=True)
    if not cert.satisfied:
        raise ValueError("polynomial does not satisfy the edge criterion")
    cfg = cfg or TraceConfig()
    q = apply_transform(p, cert.transform_used)
    for sign_t in _SIGN_ORDER:
        qs = apply_transform(q, sign_t)
        edges = right_outer_edges(newton_polygon(qs))
        witness = edges[0]  # smallest slope; the certificate edge
        for asym in branch_candidates(qs, witness):
            if asym.existence == CONFIRMED and asym.c_star > 0:
                trace = trace_branch(qs, asym, cfg)
                if any(y <= 0 for _, y in trace.samples):
                    continue
                return compose_transforms(cert.transform_used, sign_t), trace
    raise NoConfirmedBranch(
        "no axis sign change exposes a confirmed positive branch"
    )


def fitted_exponent(trace: BranchTrace) -> float:
    """Least-squares slope of log|y| against log x over the trace."""
    xs = [math.log(x) for x, _ in trace.samples]
    ys = [math.log(abs(y)) for _, y in trace.samples]
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two samples to fit an exponent")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((v - mx) ** 2 for v in xs)
    sxy = sum((u - mx) * (v - my) for u, v in zip(xs, ys))
    return sxy / sxx


def trace_to_csv(trace: BranchTrace, p: BivariatePolynomial) -> str:
    """Rows of x, y and the evaluated residual, ready for plotting."""
    lines = ["x,y,residual"]
    for x, y in trace.samples:
        lines.append(f"{x!r},{y!r},{abs(p.evaluate_approx(x, y))!r}")
    return "\n".join(lines) + "\n"
