"""Spin operators, rank-2 irreducible tensors, and the invariant couplings of a 3 x N system.

Conventions, fixed once for the whole package:

* Spins are carried as the integer ``two_s`` (= 2s), so half-integer spins
  need no float bookkeeping; the local dimension is ``two_s + 1``.
* The |j, m> basis is ordered by descending m (m = j, j-1, ..., -j), making
  S_z diagonal with descending entries.
* Kronecker products put the three-level (spin-1) factor first.
* hbar = 1.
"""

from __future__ import annotations

import numpy as np


def check_two_s(two_s, minimum: int = 2) -> int:
    """Validate a twice-spin value and return it as a plain int."""
    t = int(two_s)
    if t != two_s or t < minimum:
        raise ValueError(f"two_s must be an integer >= {minimum}, got {two_s!r}")
    return t


def spin_matrices(two_s) -> np.ndarray:
    """Spin operators for spin j = two_s / 2.

    Returns a (3, N, N) complex array holding (S_x, S_y, S_z) in the |j, m>
    basis with m descending, N = two_s + 1.  Ladder elements follow
    <j, m+1 | S_+ | j, m> = sqrt(j (j+1) - m (m+1)).
    """
    t = check_two_s(two_s, minimum=1)
    n = t + 1
    j = t / 2.0
    m = j - np.arange(n)
    sz = np.diag(m).astype(complex)
    raising = np.zeros((n, n), dtype=complex)
    raising[np.arange(n - 1), np.arange(1, n)] = np.sqrt(
        j * (j + 1) - m[1:] * (m[1:] + 1)
    )
    sx = (raising + raising.conj().T) / 2
    sy = (raising - raising.conj().T) / 2j
    return np.stack([sx, sy, sz])


def quadrupole_tensor(spin: np.ndarray) -> np.ndarray:
    """Symmetric traceless rank-2 tensor of a spin vector, as a (3, 3, N, N) array.

    Component (i, k) is (S_i S_k + S_k S_i)/2 - delta_ik (S.S)/3.  Identically
    zero for spin 1/2.
    """
    casimir = np.einsum("aij,ajk->ik", spin, spin)
    quad = 0.5 * (
        np.einsum("aij,bjk->abik", spin, spin)
        + np.einsum("bij,ajk->abik", spin, spin)
    )
    quad[np.arange(3), np.arange(3)] -= casimir / 3.0
    return quad


def heisenberg_coupling(two_s) -> np.ndarray:
    """Dot-product coupling  sum_i S_i (x) T_i  on the 3(2s+1)-dimensional space.

    S acts on the spin-1 factor, T on the spin-s factor.  The spectrum is
    s, -1, -(s+1) on the total-spin blocks J = s+1, s, s-1, with
    multiplicities 2s+3, 2s+1, 2s-1.
    """
    t = check_two_s(two_s)
    small = spin_matrices(2)
    large = spin_matrices(t)
    dim = 3 * (t + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(3):
        out += np.kron(small[i], large[i])
    return out


def quadrupole_coupling(two_s) -> np.ndarray:
    """Rank-2 tensor contraction  sum_ik Q_ik (x) R_ik  on the product space.

    Q and R are the quadrupole tensors of the two factors.  Commutes with the
    dot-product coupling C and equals C^2 + C/2 - (2/3) s (s+1) I, so its
    block eigenvalues are s(2s-1)/6, -(2s+3)(2s-1)/6, (s+1)(2s+3)/6 on
    J = s+1, s, s-1.
    """
    t = check_two_s(two_s)
    quad_small = quadrupole_tensor(spin_matrices(2))
    quad_large = quadrupole_tensor(spin_matrices(t))
    dim = 3 * (t + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(3):
        for k in range(3):
            out += np.kron(quad_small[i, k], quad_large[i, k])
    return out


def block_projectors(two_s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Projectors onto the total-spin blocks, ordered J = s+1, s, s-1.

    Built by Lagrange interpolation in the dot-product coupling at its three
    exact eigenvalues.  Each projector is idempotent and Hermitian, they are
    mutually orthogonal, they sum to the identity, and trace(P_J) = 2J + 1.
    """
    t = check_two_s(two_s)
    s = t / 2.0
    coupling = heisenberg_coupling(t)
    eye = np.eye(3 * (t + 1), dtype=complex)
    nodes = (s, -1.0, -(s + 1.0))
    projectors = []
    for node in nodes:
        proj = eye
        for other in nodes:
            if other != node:
                proj = proj @ (coupling - other * eye) / (node - other)
        projectors.append(proj)
    return tuple(projectors)


def partial_transpose(mat: np.ndarray, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of a bipartite operator.

    ``mat`` acts on a product space of shape (dim_a, dim_b) with the first
    factor leading; dim_a is inferred from the matrix size.
    """
    n = mat.shape[0]
    dim_a, rem = divmod(n, dim_b)
    if rem:
        raise ValueError(f"matrix dimension {n} is not divisible by dim_b={dim_b}")
    return (
        mat.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(0, 3, 2, 1)
        .reshape(n, n)
    )


def is_hermitian(mat: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.all(np.abs(mat - mat.conj().T) <= atol))
