"""Exponential tail bounds on the total-photon-number distribution.

For an n-mode Gaussian state with mean m, covariance V and mean photon
number N, the probability of measuring more than M photons in total obeys
a Chernoff-type bound

    P_{>M} <= p(x) * exp(-2 * arccoth(x) * M),      x > ||V||_inf,

with prefactor

    p(x) = exp(m^T (xI - V)^-1 m) / det((xI - V) / (x - 1))^(1/4).

For a coherent state the det factor is 1 and p(x) e^{-2 arccoth(x) M} is
exactly the Chernoff bound on the Poisson tail; keeping the exponential
term whole is what preserves soundness under displacement.
``tail_bound_closed`` evaluates this at x = 8N + 4, where the exponent
simplifies to M/(4N + 2) nats and p(x) <= 2^(n/2) e^(1/2);
``tail_bound_optimized`` minimizes over x numerically and is never worse.
The square root of the optimized bound certifies the trace-distance error
of a Fock-space truncation at cutoff M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import GaussianState, mean_photon_number

__all__ = [
    "CutoffCapError",
    "TailBoundResult",
    "cutoff_for_error",
    "cutoff_nongaussian",
    "tail_bound_closed",
    "tail_bound_optimized",
    "trace_distance_truncation_bound",
]

# largest arccoth(x) explored, in nats per photon; 2 * cap * M <= 700 keeps
# exp() in the normal range while still reaching bounds below 1e-300
_T_CAP_NATS = 700.0
# golden-section iterations; shrinks the bracket by ~1e13
_GOLDEN_ITERS = 64


class CutoffCapError(RuntimeError):
    """Requested accuracy needs a photon cutoff above the configured cap."""


@dataclass(frozen=True)
class TailBoundResult:
    """A certified upper bound on P_{>M} (or on truncation trace distance).

    Attributes:
        bound: the certified value, clamped to [0, 1].
        decay_rate: asymptotic decay in bits per unit cutoff.
        optimizer_x: the minimizing x for the optimized bound, None for the
            closed form.
        fallback: True when the search failed and the closed-form point was
            used instead.
    """

    bound: float
    decay_rate: float
    optimizer_x: float | None = None
    fallback: bool = False


def _spectral_data(state: GaussianState) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of V and the mean vector rotated into V's eigenbasis."""
    evals, evecs = np.linalg.eigh(state.cov)
    return evals, evecs.T @ state.mean


def _log_prefactor(evals: np.ndarray, mean_rot: np.ndarray, x: float) -> float:
    """ln p(x); +inf when x does not dominate the covariance spectrum."""
    gaps = x - evals
    if np.any(gaps <= 0.0):
        return math.inf
    quad = float(np.sum(mean_rot**2 / gaps))
    logdet = float(np.sum(np.log(gaps) - math.log(x - 1.0)))
    return quad - 0.25 * logdet


def tail_bound_closed(state: GaussianState, cutoff: int) -> TailBoundResult:
    """Closed-form tail bound at x = 8N + 4; no optimization.

    ``bound = p(8N+4) * exp(-M / (4N+2))`` with N the mean photon number.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    photons = mean_photon_number(state)
    x0 = 8.0 * photons + 4.0
    evals, mean_rot = _spectral_data(state)
    log_bound = _log_prefactor(evals, mean_rot, x0) - cutoff / (4.0 * photons + 2.0)
    rate = math.log2(math.e) / (4.0 * photons + 2.0)
    return TailBoundResult(bound=_clamp_exp(log_bound), decay_rate=rate)


def _clamp_exp(log_bound: float) -> float:
    if log_bound >= 0.0:
        return 1.0
    # floor at 1e-300: rounding a certified bound up is always sound, and the
    # result never collapses to an (unsound) exact zero
    return max(math.exp(log_bound), 1e-300)


def _log_x_minus_one(t: float) -> float:
    """ln(coth(t) - 1), stable for all t > 0."""
    return math.log(2.0) - 2.0 * t - math.log1p(-math.exp(-2.0 * t))


def _make_objective(evals: np.ndarray, mean_rot: np.ndarray, cutoff: int):
    """ln of the optimized-bound objective as a function of t = arccoth(x)."""
    one_minus = 1.0 - evals  # positive on squeezed/vacuum directions
    msq = mean_rot**2

    def objective(t: float) -> float:
        log_s = _log_x_minus_one(t)
        s = math.exp(log_s)  # x - 1; may underflow to 0 for huge t
        total = -2.0 * t * cutoff
        for lam_gap, m2 in zip(one_minus, msq):
            gap = s + lam_gap  # x - eval, computed without cancellation
            if lam_gap == 0.0:
                log_gap = log_s
            elif gap <= 0.0:
                return math.inf
            else:
                log_gap = math.log(gap)
            if m2 != 0.0:
                if gap <= 0.0:
                    return math.inf
                total += m2 / gap
            total -= 0.25 * (log_gap - log_s)
        return total

    return objective


def tail_bound_optimized(state: GaussianState, cutoff: int) -> TailBoundResult:
    """Tail bound minimized over x by golden-section search on t = arccoth(x).

    The bracket runs from arccoth(10 * (8N + 4)) up to arccoth(||V||_inf),
    backing off by a relative margin where the prefactor diverges and capped
    at 700/(2M + 1) nats to keep the exponential in range.  Falls back to the
    closed-form point x = 8N + 4 if the search returns nothing finite.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    photons = mean_photon_number(state)
    evals, mean_rot = _spectral_data(state)
    norm = float(evals[-1])

    objective = _make_objective(evals, mean_rot, cutoff)

    t_cap = _T_CAP_NATS / (2.0 * cutoff + 1.0)
    t_lo = _arccoth(10.0 * (8.0 * photons + 4.0))
    delta = 1e-6 * (1.0 + norm)
    if norm > 1.0 + delta:
        t_hi = min(_arccoth(norm + delta), t_cap)
    else:
        # every direction is (numerically) vacuum-tight: the prefactor stays
        # bounded, so push the exponent to the cap
        t_hi = t_cap
    if not t_hi > t_lo:  # nat cap binds at very large cutoffs
        t_lo = t_hi / 2.0

    t_best, log_best = _golden_min(objective, t_lo, t_high=t_hi)

    x0 = 8.0 * photons + 4.0
    if not math.isfinite(log_best):
        log_fallback = _log_prefactor(evals, mean_rot, x0) - cutoff / (4.0 * photons + 2.0)
        return TailBoundResult(
            bound=_clamp_exp(log_fallback),
            decay_rate=math.log2(math.e) / (4.0 * photons + 2.0),
            optimizer_x=x0,
            fallback=True,
        )
    rate = 2.0 * t_best * math.log2(math.e)
    return TailBoundResult(
        bound=_clamp_exp(log_best),
        decay_rate=rate,
        optimizer_x=_coth(t_best),
    )


def _arccoth(x: float) -> float:
    return 0.5 * math.log((x + 1.0) / (x - 1.0))


def _coth(t: float) -> float:
    if t > 20.0:  # tanh saturates; avoids 1/1.0 rounding
        return 1.0 + 2.0 / math.expm1(2.0 * t)
    return 1.0 / math.tanh(t)


def _golden_min(fun, t_low: float, t_high: float) -> tuple[float, float]:
    """Golden-section minimum of ``fun`` on [t_low, t_high], endpoint-aware."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = t_low, t_high
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(_GOLDEN_ITERS):
        if fc <= fd or math.isnan(fd):
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    candidates = [(fun(t_low), t_low), (fc, c), (fd, d), (fun(t_high), t_high)]
    best = min((f, t) for f, t in candidates if not math.isnan(f))
    return best[1], best[0]


def trace_distance_truncation_bound(state: GaussianState, cutoff: int) -> TailBoundResult:
    """Certified bound on ``(1/2)||rho - rho_M||_1``: the square root of the
    optimized photon-number tail bound."""
    tail = tail_bound_optimized(state, cutoff)
    return TailBoundResult(
        bound=min(1.0, math.sqrt(tail.bound)),
        decay_rate=tail.decay_rate / 2.0,
        optimizer_x=tail.optimizer_x,
        fallback=tail.fallback,
    )


def cutoff_for_error(state: GaussianState, eps: float, cap: int = 10**6) -> int:
    """Smallest cutoff M with ``trace_distance_truncation_bound <= eps``.

    Scans M by doubling, then binary-searches the bracket.  Raises
    ``CutoffCapError`` above ``cap`` (the certified cutoff would not fit in
    memory anyway).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")

    def ok(m: int) -> bool:
        return trace_distance_truncation_bound(state, m).bound <= eps

    if ok(0):
        return 0
    m = 1
    while not ok(m):
        m *= 2
        if m > cap:
            raise CutoffCapError(
                f"no cutoff below {cap} reaches truncation error {eps}; "
                "the state is too energetic for a certified truncation"
            )
    lo, hi = m // 2, m  # ok(lo) is False, ok(hi) is True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def cutoff_nongaussian(photons: float, eps: float) -> int:
    """Cutoff certifying truncation error ``eps`` for an arbitrary state of
    mean photon number ``photons``, via the Markov bound sqrt(N/M) and a
    three-way error split: ``ceil(9 N / eps^2)``."""
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(9.0 * photons / (eps * eps))
