"""Non-asymptotic capacity bounds for pure loss and pure amplifier channels.

Tasks: "Q" (qubit transmission), "Q2" (two-way assisted qubits), "K"
(secret key).  Every n-shot bound has the shape

    value = a * n - b * sqrt(n) - c

and is reported with its breakdown, so bounds can be inverted for the
number of channel uses needed to reach a target.  Lower bounds may be
negative; they are reported raw and flagged vacuous.  Rates are in bits
(qubits, ebits or key bits) per the whole n-use block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spectral import (
    coherent_information,
    entropy_variance_pure_loss,
    h_function,
    petz_conditional_entropy_half,
    symplectic_eigenvalues,
)
from .states import (
    Channel,
    GaussianState,
    PureAmplifier,
    PureLoss,
    reduce_state,
    stinespring_output,
)

__all__ = [
    "CapacityBound",
    "TASKS",
    "aep_lower_bound_amplifier",
    "aep_lower_bound_generic",
    "aep_lower_bound_pure_loss",
    "asymptotic_capacity",
    "best_lower_bound",
    "channel_uses_necessary",
    "channel_uses_sufficient",
    "ec_aep_lower_bound",
    "ec_asymptotic",
    "ec_variance_lower_bound",
    "improved_lower_bound_pure_loss",
    "invert_sqrt_bound",
    "petz_terms_amplifier",
    "petz_terms_pure_loss",
    "upper_bound_nshot",
]

TASKS = ("Q", "Q2", "K")

_PURITY_TOL = 1e-6


@dataclass(frozen=True)
class CapacityBound:
    """One evaluated bound, with enough context to reproduce it."""

    value: float
    direction: str  # "lower" or "upper"
    task: str
    method: str
    n: int
    eps: float
    params: dict = field(default_factory=dict)
    breakdown: dict = field(default_factory=dict)
    preconditions_met: bool = True
    note: str = ""

    @property
    def vacuous(self) -> bool:
        return self.direction == "lower" and self.value < 0.0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "direction": self.direction,
            "task": self.task,
            "method": self.method,
            "n": self.n,
            "eps": self.eps,
            "params": self.params,
            "breakdown": self.breakdown,
            "preconditions_met": self.preconditions_met,
            "vacuous": self.vacuous,
            "note": self.note,
        }


def _check_task(task: str) -> str:
    if task not in TASKS:
        raise ValueError(f"task must be one of {TASKS}, got {task!r}")
    return task


def _check_eps(eps: float) -> float:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return float(eps)


def _check_n(n: int) -> int:
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    return int(n)


def _channel_params(channel: Channel) -> dict:
    if isinstance(channel, PureLoss):
        return {"lambda": channel.transmissivity}
    return {"g": channel.gain}


# ---------------------------------------------------------------------------
# asymptotic rates


def asymptotic_capacity(channel: Channel, task: str) -> float:
    """Unconstrained capacity in bits per use; +inf at lambda = 1 or g = 1."""
    _check_task(task)
    if isinstance(channel, PureLoss):
        lam = channel.transmissivity
        if lam == 1.0:
            return math.inf
        if task == "Q":
            return max(0.0, math.log2(lam / (1.0 - lam))) if lam > 0.0 else 0.0
        return math.log2(1.0 / (1.0 - lam))
    g = channel.gain
    if g == 1.0:
        return math.inf
    return math.log2(g / (g - 1.0))


def ec_asymptotic(channel: Channel, task: str, photons: float) -> float:
    """Energy-constrained rate at input mean photon number ``photons``."""
    _check_task(task)
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    ns = float(photons)
    if isinstance(channel, PureLoss):
        lam = channel.transmissivity
        if task == "Q":
            if lam <= 0.5:
                return 0.0
            return h_function(lam * ns) - h_function((1.0 - lam) * ns)
        return h_function(ns) - h_function((1.0 - lam) * ns)
    g = channel.gain
    return h_function(g * ns + g - 1.0) - h_function((g - 1.0) * (ns + 1.0))


# ---------------------------------------------------------------------------
# Petz-Renyi-1/2 conditional entropies of the channel purifications


def petz_terms_pure_loss(transmissivity: float, photons: float) -> dict[str, float]:
    """H_{1/2} terms of the pure-loss tripartite state for a TMSV input.

    Returns the four conditional entropies {"A|B", "A|E", "B|A", "B|E"}
    in bits, via closed forms in (lambda, N_s).
    """
    lam = float(transmissivity)
    ns = float(photons)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    if ns < 0:
        raise ValueError(f"mean photon number must be >= 0, got {ns}")
    mu = 1.0 - lam

    s_lam = math.sqrt(lam * ns * (1.0 + lam * ns))
    s_mu = math.sqrt(mu * ns * (1.0 + mu * ns))
    s_one = math.sqrt(ns * (1.0 + ns))
    top_mu = 1.0 + 2.0 * mu * ns + 2.0 * s_mu
    top_lam = 1.0 + 2.0 * lam * ns + 2.0 * s_lam
    top_one = 1.0 + 2.0 * ns + 2.0 * s_one

    den_ab = 1.0 + s_lam + lam * (2.0 * ns + math.sqrt(mu * ns**3 / (1.0 + mu * ns)))
    den_ae = 1.0 + s_mu + mu * (2.0 * ns + math.sqrt(lam * ns**3 / (1.0 + lam * ns)))
    den_ba = 1.0 + 2.0 * ns + s_one + (1.0 + ns) * math.sqrt(1.0 - 1.0 / (1.0 + mu * ns))
    den_be = 1.0 + mu * (2.0 * ns + s_one) + s_mu

    return {
        "A|B": math.log2(top_mu * top_lam / den_ab**2),
        "A|E": math.log2(top_mu * top_lam / den_ae**2),
        "B|A": math.log2(top_one * top_mu / den_ba**2),
        "B|E": math.log2(top_mu * top_one / den_be**2),
    }


def _petz_half_rank_one(alpha: float, beta: float, gamma: float,
                        nu: float, z_coupled: bool) -> float:
    """H_{1/2}(A|X) for a two-mode state [[a*I, c*K],[c*K, b*I]] with
    symplectic spectrum {nu, 1}, K = sigma_z (z_coupled) or the identity.

    The square-root covariance is (c0*I + c1*N)V with N = -(V Omega)^2,
    which only needs the X-block scalar here; the numerator collapses to
    f(nu)*f(beta) because the spectrum has a single nontrivial direction,
    f(x) = x + sqrt(x^2 - 1).
    """
    def f_pure(x: float) -> float:
        return x + math.sqrt(max(x * x - 1.0, 0.0))

    if nu <= 1.0 + 1e-12:
        w_beta = beta  # pure two-mode state: v_sqrt is the identity map
    else:
        c1 = 1.0 / (nu * math.sqrt(nu * nu - 1.0))
        c0 = 1.0 - c1
        cross = -2.0 if z_coupled else 2.0
        w_beta = c0 * beta + c1 * (beta**3 + cross * beta * gamma**2 + alpha * gamma**2)
    fb = f_pure(beta)
    return math.log2(f_pure(nu) * fb) - 2.0 * math.log2((w_beta + fb) / 2.0)


def petz_terms_amplifier(gain: float, photons: float) -> dict[str, float]:
    """H_{1/2} terms {"A|B", "A|E"} of the amplifier tripartite state, in bits."""
    g = float(gain)
    ns = float(photons)
    if g < 1.0:
        raise ValueError(f"gain must be >= 1, got {g}")
    if ns < 0:
        raise ValueError(f"mean photon number must be >= 0, got {ns}")

    alpha = 2.0 * ns + 1.0
    nu_b = 2.0 * g * (ns + 1.0) - 1.0       # variance of the amplified arm
    nu_e = 2.0 * (g - 1.0) * (ns + 1.0) + 1.0   # variance of the idler
    c_ab = 2.0 * math.sqrt(g * ns * (ns + 1.0))
    c_ae = 2.0 * math.sqrt((g - 1.0) * ns * (ns + 1.0))

    return {
        # rho_AB is sigma_z-coupled with spectrum {nu_e, 1}; rho_AE is
        # identity-coupled with spectrum {nu_b, 1} (purity complements).
        "A|B": _petz_half_rank_one(alpha, nu_b, c_ab, nu_e, z_coupled=True),
        "A|E": _petz_half_rank_one(alpha, nu_e, c_ae, nu_b, z_coupled=False),
    }


# ---------------------------------------------------------------------------
# shared constants of the one-shot machinery


def _aep_threshold(eps: float) -> float:
    return 2.0 * math.log2(2.0 / eps**2)


def _q_sqrt_log(eps: float) -> float:
    return math.sqrt(math.log2(2.0**9 / eps**2))


def _q_const(eps: float) -> float:
    return math.log2(2.0**18 / (3.0 * eps**4))


def _q2_sqrt_log(eps: float) -> float:
    return math.sqrt(math.log2(8.0 / eps))


def _q2_const(eps: float) -> float:
    return math.log2(16.0 / eps**2)


def _aep_coeff(h_first: float, h_second: float) -> float:
    """4 log2( 2^(h1/2) + 2^(h2/2) + 1 ), the AEP sqrt(n) coefficient."""
    return 4.0 * math.log2(2.0 ** (h_first / 2.0) + 2.0 ** (h_second / 2.0) + 1.0)


def _improved_q_const(eps: float) -> float:
    return math.log2(2.0**23 * (32.0 - eps) ** 2 / ((16.0 - eps) * eps**6))


def _improved_q2_const(eps: float) -> float:
    se = math.sqrt(eps)
    return math.log2(2.0**6 * 3.0 * (4.0 - se) ** 2 / ((2.0 - se) * eps**3))


def _upper_const(eps: float) -> float:
    return math.log2(6.0) + 2.0 * math.log2((1.0 + eps) / (1.0 - eps))


def _assemble(
    *,
    a: float,
    b: float,
    c: float,
    n: int,
    eps: float,
    task: str,
    method: str,
    params: dict,
    preconditions_met: bool = True,
    note: str = "",
) -> CapacityBound:
    linear = a * n
    sqrt_term = -b * math.sqrt(n)
    const_term = -c
    value = linear + sqrt_term + const_term
    if math.isnan(value):
        # only reachable at the lambda = 1 / g = 1 boundary where the linear
        # term and the sqrt(n) coefficient both diverge
        value = math.inf
        note = (note + "; " if note else "") + "boundary: capacity is infinite"
    return CapacityBound(
        value=value,
        direction="lower",
        task=task,
        method=method,
        n=n,
        eps=eps,
        params=params,
        breakdown={
            "linear": linear,
            "sqrt": sqrt_term,
            "constant": const_term,
            "per_use": a,
            "sqrt_coefficient": b,
        },
        preconditions_met=preconditions_met,
        note=note,
    )


# ---------------------------------------------------------------------------
# coefficient extraction per bound family (shared with the inverters)


def _coeffs_aep_loss(lam: float, eps: float, task: str) -> tuple[float, float, float]:
    mu = 1.0 - lam
    if task == "Q":
        a = math.log2(lam / mu) if 0.0 < lam < 1.0 else (math.inf if lam == 1.0 else -math.inf)
        coeff = _aep_coeff_from_sqrt(math.sqrt(mu / lam) if lam > 0.0 else math.inf,
                                     math.sqrt(lam / mu) if mu > 0.0 else math.inf)
        return a, coeff * _q_sqrt_log(eps), _q_const(eps)
    a = math.inf if lam == 1.0 else math.log2(1.0 / mu)
    coeff = _aep_coeff_from_sqrt(math.sqrt(mu), math.inf if mu == 0.0 else math.sqrt(1.0 / mu))
    return a, coeff * _q2_sqrt_log(eps), _q2_const(eps)


def _aep_coeff_from_sqrt(r_first: float, r_second: float) -> float:
    return 4.0 * math.log2(r_first + r_second + 1.0)


def _coeffs_aep_amp(g: float, eps: float, task: str) -> tuple[float, float, float]:
    gm = g - 1.0
    a = math.inf if gm == 0.0 else math.log2(g / gm)
    coeff = _aep_coeff_from_sqrt(
        math.sqrt(gm / g), math.inf if gm == 0.0 else math.sqrt(g / gm)
    )
    if task == "Q":
        return a, coeff * _q_sqrt_log(eps), _q_const(eps)
    return a, coeff * _q2_sqrt_log(eps), _q2_const(eps)


def _coeffs_improved(lam: float, eps: float, task: str) -> tuple[float, float, float]:
    a = asymptotic_capacity(PureLoss(lam), task)
    c = _improved_q_const(eps) if task == "Q" else _improved_q2_const(eps)
    return a, 0.0, c


def _coeffs_ec_aep(channel: Channel, photons: float, eps: float, task: str):
    a = ec_asymptotic(channel, task, photons)
    if isinstance(channel, PureLoss):
        terms = petz_terms_pure_loss(channel.transmissivity, photons)
        pair = ("A|B", "A|E") if task == "Q" else ("B|A", "B|E")
    else:
        terms = petz_terms_amplifier(channel.gain, photons)
        pair = ("A|B", "A|E")
    coeff = _aep_coeff(terms[pair[0]], terms[pair[1]])
    if task == "Q":
        return a, coeff * _q_sqrt_log(eps), _q_const(eps)
    return a, coeff * _q2_sqrt_log(eps), _q2_const(eps)


def _coeffs_ec_variance(lam: float, photons: float, eps: float, task: str):
    if task == "Q":
        a = h_function(lam * photons) - h_function((1.0 - lam) * photons)
        var = entropy_variance_pure_loss(lam, photons, "A|E")
        return a, 4.0 * math.sqrt(var / eps), _improved_q_const(eps)
    a = h_function(photons) - h_function((1.0 - lam) * photons)
    var = entropy_variance_pure_loss(lam, photons, "B|E")
    return a, math.sqrt(2.0 * var / math.sqrt(eps)), _improved_q2_const(eps)


# ---------------------------------------------------------------------------
# public bound families


def aep_lower_bound_pure_loss(
    transmissivity: float, n: int, eps: float, task: str
) -> CapacityBound:
    """Closed-form AEP lower bound for the pure loss channel (infinite energy).

    Valid once n >= 2 log2(2/eps^2); below that the bound is still reported
    but flagged.
    """
    lam = PureLoss(transmissivity).transmissivity
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    a, b, c = _coeffs_aep_loss(lam, eps, task)
    met = n >= _aep_threshold(eps)
    return _assemble(
        a=a, b=b, c=c, n=n, eps=eps, task=task, method="aep",
        params={"lambda": lam},
        preconditions_met=met,
        note="" if met else f"needs n >= {_aep_threshold(eps):.2f}",
    )


def aep_lower_bound_amplifier(gain: float, n: int, eps: float, task: str) -> CapacityBound:
    """Closed-form AEP lower bound for the pure amplifier channel."""
    g = PureAmplifier(gain).gain
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    a, b, c = _coeffs_aep_amp(g, eps, task)
    met = n >= _aep_threshold(eps)
    return _assemble(
        a=a, b=b, c=c, n=n, eps=eps, task=task, method="aep",
        params={"g": g},
        preconditions_met=met,
        note="" if met else f"needs n >= {_aep_threshold(eps):.2f}",
    )


def aep_lower_bound_generic(
    channel: Channel, input_state: GaussianState, n: int, eps: float, task: str
) -> CapacityBound:
    """AEP lower bound evaluated numerically for an arbitrary pure input.

    The last mode of ``input_state`` is sent through the channel; the rest
    act as the reference system A.  For "Q" the direct line A>B is used; for
    "Q2"/"K" the better of the direct and reverse lines.
    """
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    if input_state.modes < 2:
        raise ValueError("input must carry a reference system (at least 2 modes)")
    d = symplectic_eigenvalues(input_state.cov)
    # eigensolver noise on the symplectic spectrum grows with the energy scale
    purity_defect = float(np.max(np.abs(d - 1.0)))
    if purity_defect > _PURITY_TOL * (1.0 + np.linalg.norm(input_state.cov, 2)):
        raise ValueError(
            f"input must be pure; symplectic eigenvalues deviate by {purity_defect:.3e}"
        )

    k = input_state.modes
    psi = stinespring_output(channel, input_state)
    a_modes = list(range(k - 1))
    b_mode, e_mode = k - 1, k
    rho_ab = reduce_state(psi, a_modes + [b_mode])
    rho_ae = reduce_state(psi, a_modes + [e_mode])
    ab_a = list(range(k - 1))

    ic_direct = coherent_information(rho_ab, ab_a)
    h_ab = petz_conditional_entropy_half(rho_ab, ab_a)
    h_ae = petz_conditional_entropy_half(rho_ae, ab_a)

    params = _channel_params(channel) | {"input_modes": k}
    met = n >= _aep_threshold(eps)
    note = "" if met else f"needs n >= {_aep_threshold(eps):.2f}"

    if task == "Q":
        return _assemble(
            a=ic_direct, b=_aep_coeff(h_ab, h_ae) * _q_sqrt_log(eps), c=_q_const(eps),
            n=n, eps=eps, task=task, method="aep-generic",
            params=params | {"H(A|B)": h_ab, "H(A|E)": h_ae},
            preconditions_met=met, note=note,
        )

    ic_reverse = coherent_information(rho_ab, [k - 1])
    h_ba = petz_conditional_entropy_half(rho_ab, [k - 1])
    rho_be = reduce_state(psi, [b_mode, e_mode])
    h_be = petz_conditional_entropy_half(rho_be, [0])

    direct = _assemble(
        a=ic_direct, b=_aep_coeff(h_ab, h_ae) * _q2_sqrt_log(eps), c=_q2_const(eps),
        n=n, eps=eps, task=task, method="aep-generic",
        params=params | {"line": "direct", "H(A|B)": h_ab, "H(A|E)": h_ae},
        preconditions_met=met, note=note,
    )
    reverse = _assemble(
        a=ic_reverse, b=_aep_coeff(h_ba, h_be) * _q2_sqrt_log(eps), c=_q2_const(eps),
        n=n, eps=eps, task=task, method="aep-generic",
        params=params | {"line": "reverse", "H(B|A)": h_ba, "H(B|E)": h_be},
        preconditions_met=met, note=note,
    )
    return direct if direct.value >= reverse.value else reverse


def improved_lower_bound_pure_loss(
    transmissivity: float, n: int, eps: float, task: str
) -> CapacityBound:
    """Pure-loss lower bound with no sqrt(n) penalty and no n threshold."""
    lam = PureLoss(transmissivity).transmissivity
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    a, b, c = _coeffs_improved(lam, eps, task)
    return _assemble(
        a=a, b=b, c=c, n=n, eps=eps, task=task, method="improved",
        params={"lambda": lam},
    )


def ec_aep_lower_bound(
    channel: Channel, photons: float, n: int, eps: float, task: str
) -> CapacityBound:
    """Energy-constrained AEP bound with a TMSV input of ``photons`` photons."""
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    a, b, c = _coeffs_ec_aep(channel, photons, eps, task)
    met = n >= _aep_threshold(eps)
    return _assemble(
        a=a, b=b, c=c, n=n, eps=eps, task=task, method="ec-aep",
        params=_channel_params(channel) | {"Ns": float(photons)},
        preconditions_met=met,
        note="" if met else f"needs n >= {_aep_threshold(eps):.2f}",
    )


def ec_variance_lower_bound(
    transmissivity: float, photons: float, n: int, eps: float, task: str
) -> CapacityBound:
    """Energy-constrained pure-loss bound via entropy variances; no n threshold."""
    lam = PureLoss(transmissivity).transmissivity
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    n = _check_n(n)
    eps = _check_eps(eps)
    _check_task(task)
    a, b, c = _coeffs_ec_variance(lam, float(photons), eps, task)
    return _assemble(
        a=a, b=b, c=c, n=n, eps=eps, task=task, method="ec-variance",
        params={"lambda": lam, "Ns": float(photons)},
    )


def upper_bound_nshot(channel: Channel, n: int, eps: float, task: str = "Q2") -> CapacityBound:
    """Converse: n Q2 + log2(6) + 2 log2((1+eps)/(1-eps)), for Q2/K only."""
    n = _check_n(n)
    eps = _check_eps(eps)
    if task not in ("Q2", "K"):
        raise ValueError(f"the weak-converse bound covers tasks Q2/K, got {task!r}")
    q2 = asymptotic_capacity(channel, "Q2")
    linear = q2 * n
    const = _upper_const(eps)
    return CapacityBound(
        value=linear + const,
        direction="upper",
        task=task,
        method="upper",
        n=n,
        eps=eps,
        params=_channel_params(channel),
        breakdown={"linear": linear, "constant": const, "per_use": q2},
    )


def best_lower_bound(
    channel: Channel, n: int, eps: float, task: str, photons: float | None = None
) -> CapacityBound:
    """Largest applicable lower bound; ``photons`` enables the EC families."""
    candidates = []
    if isinstance(channel, PureLoss):
        lam = channel.transmissivity
        candidates.append(improved_lower_bound_pure_loss(lam, n, eps, task))
        candidates.append(aep_lower_bound_pure_loss(lam, n, eps, task))
        if photons is not None:
            candidates.append(ec_aep_lower_bound(channel, photons, n, eps, task))
            candidates.append(ec_variance_lower_bound(lam, photons, n, eps, task))
    else:
        candidates.append(aep_lower_bound_amplifier(channel.gain, n, eps, task))
        if photons is not None:
            candidates.append(ec_aep_lower_bound(channel, photons, n, eps, task))
    best = candidates[0]
    for cand in candidates[1:]:
        if cand.value > best.value:
            best = cand
    return best


# ---------------------------------------------------------------------------
# inverting the bounds: channel complexity


def invert_sqrt_bound(a: float, b: float, c: float, k: float, min_n: int = 1) -> int:
    """Smallest integer n >= min_n with ``a n - b sqrt(n) - c >= k``.

    Solved through the quadratic in sqrt(n), then verified by substitution
    (and tightened downward) so rounding cannot produce an off-by-one.
    """
    if not a > 0.0:
        raise ValueError(f"per-use rate must be positive, got {a}")
    if b < 0.0:
        raise ValueError(f"sqrt coefficient must be >= 0, got {b}")
    min_n = max(int(min_n), 1)
    if math.isinf(a):
        return min_n

    def satisfied(m: int) -> bool:
        return a * m - b * math.sqrt(m) - c >= k

    disc = b * b + 4.0 * a * (c + k)
    if disc < 0.0:
        n = min_n
    else:
        root = (b + math.sqrt(disc)) / (2.0 * a)
        n = max(min_n, math.ceil(root * root))
    guard = 0
    while not satisfied(n):
        n += 1
        guard += 1
        if guard > 10_000:
            raise RuntimeError("inversion failed to converge; bound may be vacuous")
    while n > min_n and satisfied(n - 1):
        n -= 1
    return n


def channel_uses_sufficient(
    channel: Channel, k: float, eps: float, task: str, photons: float | None = None
) -> int:
    """Channel uses guaranteed to suffice for k bits at error eps.

    Uses the improved bound for unconstrained pure loss (no sqrt(n) term),
    the AEP closed form for the unconstrained amplifier, and the better of
    the two EC families when ``photons`` is given.  Raises ``ValueError``
    when every applicable rate is zero (the task is impossible).
    """
    eps = _check_eps(eps)
    _check_task(task)
    if k <= 0:
        raise ValueError(f"target bits must be positive, got {k}")

    threshold = math.ceil(_aep_threshold(eps))
    families: list[tuple[float, float, float, int]] = []
    if photons is None:
        if isinstance(channel, PureLoss):
            a, b, c = _coeffs_improved(channel.transmissivity, eps, task)
            families.append((a, b, c, 1))
        else:
            a, b, c = _coeffs_aep_amp(channel.gain, eps, task)
            families.append((a, b, c, threshold))
    else:
        a, b, c = _coeffs_ec_aep(channel, photons, eps, task)
        families.append((a, b, c, threshold))
        if isinstance(channel, PureLoss):
            a, b, c = _coeffs_ec_variance(channel.transmissivity, photons, eps, task)
            families.append((a, b, c, 1))

    best: int | None = None
    for a, b, c, min_n in families:
        if not a > 0.0:
            continue
        n = invert_sqrt_bound(a, b, c, k, min_n=min_n)
        if best is None or n < best:
            best = n
    if best is None:
        raise ValueError(
            "the achievable rate is zero for this channel/task; "
            "no number of uses suffices"
        )
    return best


def channel_uses_necessary(channel: Channel, k: float, eps: float) -> int:
    """Channel uses below which k bits at error eps are impossible (Q2/K)."""
    eps = _check_eps(eps)
    if k <= 0:
        raise ValueError(f"target bits must be positive, got {k}")
    q2 = asymptotic_capacity(channel, "Q2")
    if q2 == 0.0:
        raise ValueError("channel has zero capacity; no finite n transmits k bits")
    if math.isinf(q2):
        return 0
    return max(0, math.ceil((k - _upper_const(eps)) / q2))
