"""Spin coherent states and the angular density of the invariant family.

Every family member, at any spin, projects onto products of coherent states
through one universal density over the angle between the two directions:

    f(alpha, beta, theta) = (1/4pi) [1 + alpha cos(theta)
                                     + beta (cos(2 theta)/8 + 1/24)]

and  <n (x) m| rho |n (x) m> = 4 pi f(alpha, beta, angle(n, m)) / (3(2s+1)).
Positivity of f on [0, pi] is a closed-form check on (alpha, beta) alone.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .isostate import as_point, invariant_state
from .operators import check_two_s

_ANGLE_SLACK = 1e-9


class Direction(NamedTuple):
    """A point on the unit sphere: polar angle theta in [0, pi], azimuth phi in [0, 2 pi)."""

    theta: float
    phi: float


def as_direction(d) -> Direction:
    theta, phi = float(d[0]), float(d[1])
    if not (-_ANGLE_SLACK <= theta <= math.pi + _ANGLE_SLACK):
        raise ValueError(f"polar angle out of range: {theta}")
    if not (-_ANGLE_SLACK <= phi <= 2 * math.pi + _ANGLE_SLACK):
        raise ValueError(f"azimuth out of range: {phi}")
    return Direction(min(max(theta, 0.0), math.pi), phi % (2 * math.pi))


def unit_vector(d) -> np.ndarray:
    theta, phi = as_direction(d)
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


def angle_between(d1, d2) -> float:
    dot = float(np.dot(unit_vector(d1), unit_vector(d2)))
    return math.acos(min(1.0, max(-1.0, dot)))


def coherent_state(two_j, direction) -> np.ndarray:
    """Spin coherent state along a direction, as amplitudes on |j, m>, m descending.

    amplitude(m) = sqrt(C(2j, j-m)) cos(theta/2)^(j+m) sin(theta/2)^(j-m) e^{-i m phi}

    Normalized for every direction; the squared overlap of two coherent states
    is cos(Theta/2)^(4j) with Theta the angle between their directions.
    """
    t = check_two_s(two_j, minimum=1)
    theta, phi = as_direction(direction)
    idx = np.arange(t + 1)  # idx = j - m
    m = (t - 2 * idx) / 2.0
    amps = (
        np.sqrt([math.comb(t, int(k)) for k in idx])
        * np.cos(theta / 2.0) ** (t - idx)
        * np.sin(theta / 2.0) ** idx
        * np.exp(-1j * m * phi)
    )
    return amps.astype(complex)


def q_density(point, theta):
    """The angular density f(alpha, beta, theta); broadcasts over array theta."""
    alpha, beta = as_point(point)
    theta = np.asarray(theta, dtype=float)
    val = (
        1.0 + alpha * np.cos(theta) + beta * (np.cos(2.0 * theta) / 8.0 + 1.0 / 24.0)
    ) / (4.0 * math.pi)
    return val if val.ndim else float(val)


def q_expectation(two_s, point, direction_a, direction_b) -> float:
    """Expectation of the family state in a product of coherent states.

    Equals 4 pi / (3(2s+1)) times q_density at the mutual angle, which is the
    bridge between the matrix family and the universal angular density.
    """
    state = invariant_state(two_s, point)
    vec = np.kron(coherent_state(2, direction_a), coherent_state(two_s, direction_b))
    return float(np.real(vec.conj() @ state.matrix @ vec))


def q_min(point) -> float:
    """Minimum over angles of 4 pi times the angular density, in closed form.

    With c = cos(theta) the density is the quadratic
    g(c) = 1 + alpha c + (beta/4) c^2 - beta/12 on [-1, 1]; the minimum sits
    at an endpoint or at the interior stationary point c = -2 alpha / beta.
    """
    alpha, beta = as_point(point)

    def g(c: float) -> float:
        return 1.0 + alpha * c + (beta / 4.0) * c * c - beta / 12.0

    candidates = [g(-1.0), g(1.0)]
    if beta != 0.0:
        c_star = -2.0 * alpha / beta
        if -1.0 <= c_star <= 1.0:
            candidates.append(g(c_star))
    return min(candidates)


def q_positive(point, tol: float = 1e-12) -> bool:
    """Whether the angular density is nonnegative for every pair of directions."""
    return q_min(point) >= -tol
