"""The two-parameter rotation-invariant family of 3 x N states and its closed-form spectrum.

A family member is

    rho(alpha, beta) = [ I + (alpha/s) C1 + (beta / (s(2s-1))) C2 ] / (3(2s+1))

with C1 the dot-product coupling and C2 the quadrupole coupling of a spin-1
and a spin-s particle.  Both couplings are diagonal on the three total-spin
blocks, so the full spectrum is three numbers with known multiplicities and
every spectral question has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .operators import check_two_s, heisenberg_coupling, quadrupole_coupling

PHYSICAL_TOL = 1e-9
FIDUCIAL_CAP = 400


class Point(NamedTuple):
    """A parameter-plane point (alpha, beta)."""

    alpha: float
    beta: float


def as_point(p) -> Point:
    alpha, beta = p
    alpha = float(alpha)
    beta = float(beta)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValueError(f"parameter point must be finite, got {(alpha, beta)}")
    return Point(alpha, beta)


class BlockSpectrum(NamedTuple):
    """Eigenvalues and multiplicities on the blocks J = s+1, s, s-1."""

    lam_plus: float
    lam_zero: float
    lam_minus: float
    mult_plus: int
    mult_zero: int
    mult_minus: int

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.lam_plus, self.lam_zero, self.lam_minus)

    @property
    def mults(self) -> tuple[int, int, int]:
        return (self.mult_plus, self.mult_zero, self.mult_minus)

    def dense(self) -> np.ndarray:
        """Eigenvalues expanded with multiplicity, in block order."""
        return np.repeat(self.values, self.mults)


def positivity_conditions(two_s, point) -> tuple[float, float, float]:
    """The three linear expressions whose joint nonnegativity makes the state physical.

    They are the block eigenvalues scaled by 3(2s+1), on J = s+1, s, s-1:

        1 + alpha + beta/6
        1 - alpha/s - beta (2s+3) / (6s)
        1 - alpha (s+1)/s + beta (s+1)(2s+3) / (6s(2s-1))
    """
    t = check_two_s(two_s)
    alpha, beta = as_point(point)
    s = t / 2.0
    c1 = 1.0 + alpha + beta / 6.0
    c2 = 1.0 - alpha / s - beta * (2 * s + 3) / (6 * s)
    c3 = 1.0 - alpha * (s + 1) / s + beta * (s + 1) * (2 * s + 3) / (6 * s * (2 * s - 1))
    return c1, c2, c3


def block_spectrum(two_s, point) -> BlockSpectrum:
    """Closed-form spectrum of the family state, physical or not."""
    t = check_two_s(two_s)
    c1, c2, c3 = positivity_conditions(t, point)
    d = 3.0 * (t + 1)
    return BlockSpectrum(c1 / d, c2 / d, c3 / d, t + 3, t + 1, t - 1)


@dataclass(frozen=True)
class IsoState:
    """A constructed family member: parameters plus the dense matrix."""

    two_s: int
    point: Point
    matrix: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return (3, self.two_s + 1)


def invariant_state(two_s, point) -> IsoState:
    """Assemble the density matrix of the family member at (alpha, beta).

    The matrix is built for any parameter point; whether it is positive
    semidefinite is a separate question (``is_physical``).  It is always
    Hermitian with unit trace, and commutes with every global rotation.
    """
    t = check_two_s(two_s)
    p = as_point(point)
    s = t / 2.0
    dim = 3 * (t + 1)
    mat = np.eye(dim, dtype=complex)
    mat += (p.alpha / s) * heisenberg_coupling(t)
    mat += (p.beta / (s * (2 * s - 1))) * quadrupole_coupling(t)
    return IsoState(t, p, mat / dim)


def is_physical(two_s, point, tol: float = PHYSICAL_TOL) -> bool:
    """Whether the family member is a state: every block eigenvalue >= -tol.

    The tolerance applies to the eigenvalues themselves (after division by
    the dimension), so boundary members such as the pure vertices and the
    left-edge segment count as physical.
    """
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    return all(v >= -tol for v in block_spectrum(two_s, point).values)


_LIMIT_TOL = 1e-9


def _outside_limit_region(point: Point) -> bool:
    # The physical regions grow with s toward a fixed triangle; a point
    # strictly beyond any of its three edges is unphysical at every spin.
    alpha, beta = point
    return (
        1.0 + alpha + beta / 6.0 < -_LIMIT_TOL
        or 1.0 - alpha + beta / 6.0 < -_LIMIT_TOL
        or beta > 3.0 + _LIMIT_TOL
    )


def fiducial_spin(point, cap_two_s: int = FIDUCIAL_CAP, tol: float = PHYSICAL_TOL) -> Optional[int]:
    """Smallest two_s >= 2 at which the point is physical; None if absent up to the cap.

    Points strictly outside the closed limit region are rejected without a
    scan.  The per-spin regions are nested, so the scan predicate is monotone.
    """
    p = as_point(point)
    if _outside_limit_region(p):
        return None
    cap = check_two_s(cap_two_s)
    for t in range(2, cap + 1):
        if is_physical(t, p, tol):
            return t
    return None


def _require_physical(two_s, point, tol):
    if not is_physical(two_s, point, tol):
        raise ValueError(f"two_s={two_s}, point={tuple(as_point(point))} is not a physical state")


def state_rank(two_s, point, tol: float = PHYSICAL_TOL) -> int:
    """Number of nonvanishing eigenvalues: multiplicities of blocks with c > tol."""
    t = check_two_s(two_s)
    _require_physical(t, point, tol)
    conditions = positivity_conditions(t, point)
    mults = (t + 3, t + 1, t - 1)
    return sum(m for c, m in zip(conditions, mults) if c > tol)


def relative_rank(two_s, point, tol: float = PHYSICAL_TOL) -> float:
    """Rank divided by the space dimension 3(2s+1)."""
    return state_rank(two_s, point, tol) / (3 * (two_s + 1))


def purity(two_s, point, tol: float = PHYSICAL_TOL) -> float:
    """trace(rho^2) from the block spectrum; boundary negatives are clipped to 0."""
    t = check_two_s(two_s)
    _require_physical(t, point, tol)
    spec = block_spectrum(t, point)
    return float(sum(m * max(v, 0.0) ** 2 for v, m in zip(spec.values, spec.mults)))


def entropy(two_s, point, tol: float = PHYSICAL_TOL) -> float:
    """Von Neumann entropy in nats, with 0 log 0 read as 0."""
    t = check_two_s(two_s)
    _require_physical(t, point, tol)
    spec = block_spectrum(t, point)
    total = 0.0
    for v, m in zip(spec.values, spec.mults):
        if v > 0.0:
            total -= m * v * math.log(v)
    return total


RELATIVE_RANK_BOUNDS = (1.0 / 9.0, 2.0 / 3.0)


def edge_relative_rank_bounds(two_s) -> tuple[float, float]:
    """Relative-rank window forced by the block structure on the left edge.

    On the physical part of the segment from the top-left vertex down to the
    lower one, the largest-spin block eigenvalue vanishes identically, so the
    rank lies in [2s-1, 4s] and the relative rank in the returned window.
    The lower end is attained exactly at the top-left vertex; across all
    spins the windows stay inside RELATIVE_RANK_BOUNDS = (1/9, 2/3).
    """
    t = check_two_s(two_s)
    dim = 3 * (t + 1)
    return ((t - 1) / dim, 2 * t / dim)
