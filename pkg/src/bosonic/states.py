"""Gaussian states, symplectic transforms and channel dilations.

Conventions used throughout the package:

* Quadratures are interleaved, ``R = (x_1, p_1, ..., x_n, p_n)``.
* The vacuum covariance matrix is the identity, so a thermal state with
  mean photon number ``N`` has covariance ``(2N + 1) * I``.
* The symplectic form is ``Omega = direct_sum([[0, 1], [-1, 0]])`` and a
  physical covariance matrix satisfies ``V + i*Omega >= 0``.

States are value objects: every operation returns a new ``GaussianState``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GaussianState",
    "InvalidStateError",
    "PureAmplifier",
    "PureLoss",
    "Transform",
    "ValidationReport",
    "apply_transform",
    "beam_splitter",
    "cov_norm_bound",
    "dilate_pure_amplifier",
    "dilate_pure_loss",
    "displacement",
    "mean_photon_number",
    "reduce_state",
    "state_from_dict",
    "state_to_dict",
    "stinespring_output",
    "symplectic_form",
    "tensor",
    "thermal_state",
    "tmsv_state",
    "two_mode_squeezer",
    "vacuum_state",
    "validate_state",
]

#: below this margin the uncertainty relation counts as violated
UNCERTAINTY_TOL = 1e-9


class InvalidStateError(ValueError):
    """Raised when a covariance matrix or mean vector is unphysical."""


def symplectic_form(modes: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form for ``modes`` modes."""
    if modes < 1:
        raise ValueError(f"need at least one mode, got {modes}")
    omega = np.zeros((2 * modes, 2 * modes))
    for j in range(modes):
        omega[2 * j, 2 * j + 1] = 1.0
        omega[2 * j + 1, 2 * j] = -1.0
    return omega


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of an n-mode Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0 or mean.size == 0:
            raise InvalidStateError(f"mean must have even length 2n, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise InvalidStateError(
                f"covariance shape {cov.shape} does not match mean length {mean.size}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidStateError("state contains non-finite entries")
        mean = mean.copy()
        cov = (cov + cov.T) / 2.0  # store the symmetric part
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def modes(self) -> int:
        return self.mean.size // 2


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a physicality check, with margins for diagnostics."""

    ok: bool
    modes: int
    symmetry_defect: float
    uncertainty_margin: float
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return dataclasses.asdict(self) | {"warnings": list(self.warnings)}


def validate_state(state: GaussianState, tol: float = UNCERTAINTY_TOL) -> ValidationReport:
    """Check the uncertainty relation ``V + i*Omega >= 0``.

    Margins within ``[-tol, 0)`` pass with a warning (eigensolver noise on
    pure states); anything below ``-tol`` fails.
    """
    cov = np.asarray(state.cov)
    symmetry_defect = float(np.max(np.abs(cov - cov.T))) if cov.size else 0.0
    omega = symplectic_form(state.modes)
    margin = float(np.min(np.linalg.eigvalsh(cov + 1j * omega)))
    warnings: list[str] = []
    ok = True
    if margin < -tol:
        ok = False
    elif margin < 0.0:
        warnings.append(
            f"uncertainty margin {margin:.3e} is negative but within tolerance {tol:.1e}"
        )
    if symmetry_defect > tol:
        ok = False
    return ValidationReport(
        ok=ok,
        modes=state.modes,
        symmetry_defect=symmetry_defect,
        uncertainty_margin=margin,
        warnings=tuple(warnings),
    )


def require_valid(state: GaussianState, tol: float = UNCERTAINTY_TOL) -> GaussianState:
    """Return ``state`` unchanged, raising ``InvalidStateError`` if unphysical."""
    report = validate_state(state, tol)
    if not report.ok:
        raise InvalidStateError(
            f"unphysical state: uncertainty margin {report.uncertainty_margin:.3e}, "
            f"symmetry defect {report.symmetry_defect:.3e}"
        )
    return state


# ---------------------------------------------------------------------------
# constructors


def vacuum_state(modes: int = 1) -> GaussianState:
    """n-mode vacuum: zero mean, identity covariance."""
    return GaussianState(np.zeros(2 * modes), np.eye(2 * modes))


def thermal_state(photons: float) -> GaussianState:
    """Single-mode thermal state with mean photon number ``photons``."""
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    return GaussianState(np.zeros(2), (2.0 * photons + 1.0) * np.eye(2))


def tmsv_state(photons: float) -> GaussianState:
    """Two-mode squeezed vacuum purifying a thermal state.

    Args:
        photons: mean photon number of either reduced mode.

    Returns:
        Two-mode pure ``GaussianState`` whose single-mode marginals are
        ``thermal_state(photons)``.
    """
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    a = 2.0 * photons + 1.0
    c = 2.0 * np.sqrt(photons * (photons + 1.0))
    sz = np.diag([1.0, -1.0])
    eye = np.eye(2)
    cov = np.block([[a * eye, c * sz], [c * sz, a * eye]])
    return GaussianState(np.zeros(4), cov)


# ---------------------------------------------------------------------------
# transforms


@dataclass(frozen=True)
class Transform:
    """Affine Gaussian transform ``m -> S m + shift``, ``V -> S V S^T``."""

    symplectic: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.symplectic, dtype=float)
        r = np.asarray(self.shift, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2 != 0:
            raise ValueError(f"symplectic matrix has bad shape {s.shape}")
        if r.shape != (s.shape[0],):
            raise ValueError(f"shift shape {r.shape} does not match matrix {s.shape}")
        omega = symplectic_form(s.shape[0] // 2)
        defect = np.max(np.abs(s @ omega @ s.T - omega))
        if defect > 1e-8:
            raise ValueError(f"matrix is not symplectic (defect {defect:.3e})")
        object.__setattr__(self, "symplectic", s)
        object.__setattr__(self, "shift", r)

    @property
    def modes(self) -> int:
        return self.shift.size // 2


def displacement(shift: Sequence[float]) -> Transform:
    """Phase-space displacement by ``shift`` (length 2k)."""
    r = np.asarray(shift, dtype=float)
    return Transform(np.eye(r.size), r)


def beam_splitter(transmissivity: float) -> Transform:
    """Two-mode beam splitter of transmissivity ``transmissivity``.

    Mode 0 of the pair carries the transmitted signal.
    """
    lam = float(transmissivity)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    eye = np.eye(2)
    s = np.block(
        [
            [np.sqrt(lam) * eye, np.sqrt(1.0 - lam) * eye],
            [-np.sqrt(1.0 - lam) * eye, np.sqrt(lam) * eye],
        ]
    )
    return Transform(s, np.zeros(4))


def two_mode_squeezer(gain: float) -> Transform:
    """Two-mode squeezer of gain ``gain >= 1``; mode 0 carries the amplified signal."""
    g = float(gain)
    if g < 1.0:
        raise ValueError(f"gain must be >= 1, got {g}")
    sz = np.diag([1.0, -1.0])
    eye = np.eye(2)
    s = np.block(
        [
            [np.sqrt(g) * eye, np.sqrt(g - 1.0) * sz],
            [np.sqrt(g - 1.0) * sz, np.sqrt(g) * eye],
        ]
    )
    return Transform(s, np.zeros(4))


def _embedding_indices(modes: Sequence[int], total: int) -> np.ndarray:
    idx = list(modes)
    if len(set(idx)) != len(idx):
        raise ValueError(f"target modes must be distinct, got {idx}")
    if any(m < 0 or m >= total for m in idx):
        raise ValueError(f"target modes {idx} out of range for {total}-mode state")
    coords = []
    for m in idx:
        coords.extend((2 * m, 2 * m + 1))
    return np.asarray(coords, dtype=int)


def apply_transform(
    state: GaussianState, transform: Transform, modes: Sequence[int] | None = None
) -> GaussianState:
    """Apply ``transform`` to a subset of modes of ``state``.

    The k-mode transform is embedded into the full register by conjugating
    with the permutation that moves ``modes`` (in the given order) to the
    front; all other modes are untouched.

    Args:
        state: input state.
        transform: k-mode affine transform.
        modes: the k target mode indices; defaults to ``range(k)``.

    Returns:
        The transformed ``GaussianState``.
    """
    k = transform.modes
    if modes is None:
        modes = list(range(k))
    if len(modes) != k:
        raise ValueError(f"transform acts on {k} modes, got targets {list(modes)}")
    coords = _embedding_indices(modes, state.modes)
    full_s = np.eye(2 * state.modes)
    full_s[np.ix_(coords, coords)] = transform.symplectic
    full_r = np.zeros(2 * state.modes)
    full_r[coords] = transform.shift
    mean = full_s @ state.mean + full_r
    cov = full_s @ state.cov @ full_s.T
    return GaussianState(mean, (cov + cov.T) / 2.0)


def tensor(states: Iterable[GaussianState]) -> GaussianState:
    """Tensor product of states, modes concatenated in the given order."""
    states = list(states)
    if not states:
        raise ValueError("tensor needs at least one state")
    mean = np.concatenate([s.mean for s in states])
    blocks = [s.cov for s in states]
    dim = mean.size
    cov = np.zeros((dim, dim))
    off = 0
    for b in blocks:
        cov[off : off + b.shape[0], off : off + b.shape[0]] = b
        off += b.shape[0]
    return GaussianState(mean, cov)


def reduce_state(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Partial trace keeping ``keep``; the order given becomes the new mode order."""
    keep = list(keep)
    if not keep:
        raise ValueError("must keep at least one mode")
    coords = _embedding_indices(keep, state.modes)
    return GaussianState(state.mean[coords], state.cov[np.ix_(coords, coords)])


# ---------------------------------------------------------------------------
# photon statistics


def mean_photon_number(state: GaussianState) -> float:
    """Total mean photon number ``tr(V - I)/4 + |m|^2 / 2``."""
    n = state.modes
    return float((np.trace(state.cov) - 2.0 * n) / 4.0 + state.mean @ state.mean / 2.0)


def cov_norm_bound(photons: float) -> float:
    """Upper bound on ``||V||_inf`` for any state of mean photon number ``photons``."""
    if photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {photons}")
    return 1.0 + 2.0 * photons + 2.0 * np.sqrt(photons * (photons + 1.0))


# ---------------------------------------------------------------------------
# channels and dilations


@dataclass(frozen=True)
class PureLoss:
    """Pure loss channel: beam splitter of transmissivity ``transmissivity``
    with a vacuum environment."""

    transmissivity: float

    def __post_init__(self):
        if not 0.0 <= self.transmissivity <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.transmissivity}")


@dataclass(frozen=True)
class PureAmplifier:
    """Quantum-limited amplifier: two-mode squeezer of gain ``gain`` with a
    vacuum environment."""

    gain: float

    def __post_init__(self):
        if self.gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {self.gain}")


Channel = PureLoss | PureAmplifier


def dilate_pure_loss(transmissivity: float) -> Transform:
    """Stinespring dilation of the loss channel: (input, vacuum env) -> (output, env)."""
    return beam_splitter(transmissivity)


def dilate_pure_amplifier(gain: float) -> Transform:
    """Stinespring dilation of the amplifier: (input, vacuum env) -> (output, env)."""
    return two_mode_squeezer(gain)


def dilation(channel: Channel) -> Transform:
    if isinstance(channel, PureLoss):
        return dilate_pure_loss(channel.transmissivity)
    if isinstance(channel, PureAmplifier):
        return dilate_pure_amplifier(channel.gain)
    raise TypeError(f"not a channel: {channel!r}")


def stinespring_output(channel: Channel, state: GaussianState) -> GaussianState:
    """Send the last mode of ``state`` through ``channel``, keeping the environment.

    The returned register is ordered (ancillas, channel output, environment),
    so for a k-mode input the output has k+1 modes with the environment last.
    """
    k = state.modes
    joint = tensor([state, vacuum_state(1)])
    return apply_transform(joint, dilation(channel), modes=[k - 1, k])


# ---------------------------------------------------------------------------
# JSON schema


def state_to_dict(state: GaussianState) -> dict:
    """Serialize to the shared schema {"modes", "mean", "cov"}."""
    return {
        "modes": state.modes,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }


def state_from_dict(payload: dict) -> GaussianState:
    """Parse the shared schema; raises ``InvalidStateError`` on malformed payloads."""
    try:
        modes = int(payload["modes"])
        mean = np.asarray(payload["mean"], dtype=float)
        cov = np.asarray(payload["cov"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed state payload: {exc}") from exc
    state = GaussianState(mean, cov)
    if state.modes != modes:
        raise InvalidStateError(
            f"declared {modes} modes but mean has length {mean.size}"
        )
    return state
