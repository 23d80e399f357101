"""Fock-basis representation of Gaussian states.

The basis keeps every n-mode occupation with total photon number at most M
(dimension binom(M+n, n)), ordered by total then lexicographically with the
first mode weighted highest.

Matrix elements come from the Bargmann kernel of the density operator,

    <alpha| rho |beta> e^{(|alpha|^2+|beta|^2)/2}
        = C exp( z^T F z / 2 + u^T z ),     z = (conj(alpha), beta),

whose (F, u) data follow from the complex Husimi parametrization of (m, V).
Taylor coefficients of the kernel obey a three-term recurrence over the
combined bra/ket multi-index; running it on sqrt(k! l!)-scaled coefficients
yields <k|rho|l> directly and keeps every intermediate bounded by 1.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .states import GaussianState, require_valid

__all__ = [
    "DimensionCapError",
    "FockMatrix",
    "basis_dimension",
    "beam_splitter_fock_coeffs",
    "enumerate_basis",
    "fock_from_dict",
    "fock_matrix_elements",
    "fock_to_dict",
    "truncate_normalize",
]

DEFAULT_DIM_CAP = 20000
#: environment override for the basis-dimension cap
CAP_ENV_VAR = "BOSONIC_FOCK_CAP"

_TRACE_EXCESS_TOL = 1e-6


class DimensionCapError(RuntimeError):
    """Truncated basis would exceed the configured dimension cap."""


def basis_dimension(modes: int, cutoff: int) -> int:
    """Number of n-mode occupations with total photon number <= cutoff."""
    return math.comb(cutoff + modes, modes)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_basis(modes: int, cutoff: int) -> list[tuple[int, ...]]:
    """Graded ordering of occupations: by total photons, then first mode high."""
    if modes < 1:
        raise ValueError(f"need at least one mode, got {modes}")
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    return [occ for total in range(cutoff + 1) for occ in _compositions(total, modes)]


@dataclass(frozen=True)
class FockMatrix:
    """Density-matrix block on the truncated basis, plus its trace deficit."""

    matrix: np.ndarray
    modes: int
    cutoff: int

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return enumerate_basis(self.modes, self.cutoff)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _dimension_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_DIM_CAP


def _check_dimension(modes: int, cutoff: int, cap: int | None) -> int:
    dim = basis_dimension(modes, cutoff)
    limit = _dimension_cap(cap)
    if dim > limit:
        raise DimensionCapError(
            f"cutoff {cutoff} on {modes} modes needs a {dim}-dimensional basis "
            f"(cap {limit}); certified truncations grow like "
            "(2^6 (n+1) E log(2/eps))^(3n) in the worst case, so lower eps or "
            f"the energy, or raise {CAP_ENV_VAR}"
        )
    return dim


def _kernel_data(state: GaussianState) -> tuple[complex, np.ndarray, np.ndarray]:
    """(C, F, u) of the Bargmann kernel for ``state``."""
    n = state.modes
    m = state.mean
    g = np.linalg.inv(state.cov + np.eye(2 * n))

    gxx = g[0::2, 0::2]
    gxp = g[0::2, 1::2]
    gpx = g[1::2, 0::2]
    gpp = g[1::2, 1::2]
    # bilinear form in w = (beta, conj(beta)) reproducing m-centred y^T G y
    bb = 0.5 * ((gxx - gpp) - 1j * (gxp + gpx))
    bc = 0.5 * ((gxx + gpp) + 1j * (gpx - gxp))
    cb = 0.5 * ((gxx + gpp) - 1j * (gpx - gxp))
    cc = 0.5 * ((gxx - gpp) + 1j * (gxp + gpx))
    g_w = np.block([[bb, bc], [cb, cc]])

    mu = (m[0::2] + 1j * m[1::2]) / math.sqrt(2.0)
    w_mu = np.concatenate([mu, np.conj(mu)])

    swap = np.r_[n : 2 * n, 0:n]
    exchange = np.zeros((2 * n, 2 * n))
    exchange[:n, n:] = np.eye(n)
    exchange[n:, :n] = np.eye(n)

    f_mat = exchange - 2.0 * g_w[np.ix_(swap, swap)]
    u_vec = 2.0 * (g_w @ w_mu)[swap]

    det = np.linalg.det((state.cov + np.eye(2 * n)) / 2.0)
    if not (det > 0.0 and math.isfinite(det)):
        sign, logdet = np.linalg.slogdet((state.cov + np.eye(2 * n)) / 2.0)
        if sign <= 0:
            raise ValueError("covariance plus identity must be positive definite")
        norm = math.exp(-0.5 * logdet)
    else:
        norm = 1.0 / math.sqrt(det)
    c0 = norm * math.exp(-float(m @ g @ m))
    return c0, f_mat, u_vec


def fock_matrix_elements(
    state: GaussianState, cutoff: int, cap: int | None = None
) -> FockMatrix:
    """Exact Fock matrix elements <k|rho|l> for all totals up to ``cutoff``.

    Args:
        state: the Gaussian state.
        cutoff: maximum total photon number retained.
        cap: basis-dimension cap; defaults to BOSONIC_FOCK_CAP or 20000.

    Returns:
        ``FockMatrix`` whose trace equals one minus the photon-number tail.

    Raises:
        DimensionCapError: basis dimension exceeds the cap.
        RuntimeError: trace exceeds 1 + 1e-6, signalling recursion instability.
    """
    dim = _check_dimension(state.modes, cutoff, cap)
    require_valid(state)
    n = state.modes
    basis = enumerate_basis(n, cutoff)
    rank = {occ: i for i, occ in enumerate(basis)}

    c0, f_mat, u_vec = _kernel_data(state)

    # per-mode column gathers: index of l - e_i and sqrt(l_i), zero-padded
    occ_arr = np.asarray(basis, dtype=int)
    lower = np.zeros((n, dim), dtype=int)
    sqrt_cnt = np.zeros((n, dim))
    for i in range(n):
        for b, occ in enumerate(basis):
            if occ[i] > 0:
                low = list(occ)
                low[i] -= 1
                lower[i, b] = rank[tuple(low)]
                sqrt_cnt[i, b] = math.sqrt(occ[i])

    out = np.zeros((dim, dim), dtype=complex)
    out[0, 0] = c0

    # bra side empty: recurse along the ket index only
    for b in range(1, dim):
        occ = basis[b]
        j = next(i for i, c in enumerate(occ) if c)
        low = list(occ)
        low[j] -= 1
        prev = rank[tuple(low)]
        val = u_vec[n + j] * out[0, prev]
        for i in range(n):
            if low[i] > 0:
                step = list(low)
                step[i] -= 1
                val += f_mat[n + j, n + i] * math.sqrt(low[i]) * out[0, rank[tuple(step)]]
        out[0, b] = val / math.sqrt(occ[j])

    # remaining rows, vectorized across the ket index
    for a in range(1, dim):
        occ = basis[a]
        j = next(i for i, c in enumerate(occ) if c)
        low = list(occ)
        low[j] -= 1
        prev = rank[tuple(low)]
        row = u_vec[j] * out[prev]
        for i in range(n):
            if low[i] > 0:
                step = list(low)
                step[i] -= 1
                row = row + f_mat[j, i] * math.sqrt(low[i]) * out[rank[tuple(step)]]
            row = row + f_mat[j, n + i] * (sqrt_cnt[i] * out[prev, lower[i]])
        out[a] = row / math.sqrt(occ[j])

    out = (out + out.conj().T) / 2.0
    result = FockMatrix(matrix=out, modes=n, cutoff=cutoff)
    if result.trace > 1.0 + _TRACE_EXCESS_TOL:
        raise RuntimeError(
            f"truncated trace {result.trace} exceeds 1; the recursion lost "
            "precision for this state (try a lower cutoff or less energy)"
        )
    return result


def truncate_normalize(fock: FockMatrix) -> FockMatrix:
    """Rescale the truncated block to unit trace."""
    tr = fock.trace
    if tr <= 0.0:
        raise ValueError(f"cannot normalize trace {tr}")
    return FockMatrix(matrix=fock.matrix / tr, modes=fock.modes, cutoff=fock.cutoff)


def beam_splitter_fock_coeffs(i: int, j: int, transmissivity: float) -> np.ndarray:
    """Fock coefficients of a beam splitter acting on |i, j>.

    Entry m is the amplitude of |i+j-m, m> in U |i, j>, for m = 0 .. i+j:

        c_m = sum_k (-1)^k sqrt(m! (i+j-m)! / (i! j!)) C(i,k) C(j,m-k)
              * lam^((i+m-2k)/2) * (1-lam)^((j+2k-m)/2)

    The coefficient vector has unit norm.
    """
    if i < 0 or j < 0:
        raise ValueError(f"occupations must be >= 0, got ({i}, {j})")
    lam = float(transmissivity)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    mu = 1.0 - lam
    out = np.zeros(i + j + 1)
    for m in range(i + j + 1):
        scale = math.sqrt(
            math.factorial(m) * math.factorial(i + j - m)
            / (math.factorial(i) * math.factorial(j))
        )
        acc = 0.0
        for k in range(max(0, m - j), min(i, m) + 1):
            acc += (
                (-1.0) ** k
                * math.comb(i, k)
                * math.comb(j, m - k)
                * lam ** ((i + m - 2 * k) / 2.0)
                * mu ** ((j + 2 * k - m) / 2.0)
            )
        out[m] = scale * acc
    return out


# ---------------------------------------------------------------------------
# JSON export


def fock_to_dict(fock: FockMatrix) -> dict:
    """Serialize to {"modes", "cutoff", "entries"}; entries are row-major
    [re, im] pairs."""
    flat = fock.matrix.reshape(-1)
    return {
        "modes": fock.modes,
        "cutoff": fock.cutoff,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def fock_from_dict(payload: dict) -> FockMatrix:
    """Inverse of :func:`fock_to_dict`."""
    try:
        modes = int(payload["modes"])
        cutoff = int(payload["cutoff"])
        entries = payload["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed fock payload: {exc}") from exc
    dim = basis_dimension(modes, cutoff)
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return FockMatrix(matrix=flat.reshape(dim, dim), modes=modes, cutoff=cutoff)
