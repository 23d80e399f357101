"""Shared helpers: seeded random Gaussian states and symplectics."""

import numpy as np

from bosonic import GaussianState


def interleave(mat_xxpp: np.ndarray) -> np.ndarray:
    """Reorder a 2n x 2n matrix from (x1..xn, p1..pn) to (x1, p1, ...)."""
    n = mat_xxpp.shape[0] // 2
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n) + n
    return mat_xxpp[np.ix_(perm, perm)]


def random_orthogonal_symplectic(rng: np.random.Generator, modes: int) -> np.ndarray:
    """Passive Gaussian unitary: image of a Haar-ish unitary U = X + iY."""
    z = rng.normal(size=(modes, modes)) + 1j * rng.normal(size=(modes, modes))
    u, _ = np.linalg.qr(z)
    x, y = u.real, u.imag
    o_xxpp = np.block([[x, -y], [y, x]])
    return interleave(o_xxpp)


def random_symplectic(rng: np.random.Generator, modes: int, max_squeeze: float = 1.5) -> np.ndarray:
    """Euler form O1 Z O2 with diagonal squeezing Z."""
    o1 = random_orthogonal_symplectic(rng, modes)
    o2 = random_orthogonal_symplectic(rng, modes)
    z = np.exp(rng.uniform(-np.log(max_squeeze), np.log(max_squeeze), size=modes))
    z_xxpp = np.diag(np.concatenate([z, 1.0 / z]))
    return o1 @ interleave(z_xxpp) @ o2


def random_state(rng: np.random.Generator, modes: int, pure: bool = False,
                 max_squeeze: float = 1.5, max_shift: float = 1.0) -> GaussianState:
    s = random_symplectic(rng, modes, max_squeeze)
    if pure:
        d = np.ones(modes)
    else:
        d = 1.0 + rng.uniform(0.0, 2.0, size=modes)
    d_diag = np.repeat(d, 2)
    cov = s @ np.diag(d_diag) @ s.T
    mean = rng.uniform(-max_shift, max_shift, size=2 * modes)
    return GaussianState(mean, cov)
