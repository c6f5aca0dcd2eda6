"""The two-qutrit slice of the family: SU(3) generator lines and their identities.

At s = 1 both parties are qutrits and two distinguished lines of the
parameter plane become unitary-invariant families: beta = 2 alpha is the
exchange-invariant (Werner) line, beta = -2 alpha its conjugate-representation
companion.  The endpoints are projector states onto irreducible subspaces, and
on the exchange line separability has an exact threshold from the expectation
of the swap operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import is_ppt, pt_image
from .isostate import Point, entropy, invariant_state, is_physical, purity, state_rank

_SQRT3 = np.sqrt(3.0)

WERNER_ALPHA_RANGE = (-0.75, 0.375)
CONJ_WERNER_ALPHA_RANGE = (-1.5, 0.1875)

# Exchange-expectation zero crossing: (3 + 16 alpha)/9 = 0.
WERNER_SEPARABLE_ALPHA = -3.0 / 16.0

_RANGE_SLACK = 1e-12

QUTRIT_VERTICES = {
    "A": Point(-1.5, 3.0),
    "B": Point(-0.75, -1.5),
    "F": Point(0.75, 0.3),
    "E": Point(0.1875, -0.375),
    "G": Point(0.375, 0.75),
}

# Total-spin content of the physical-triangle vertices at s = 1.
_VERTEX_TOTAL_SPIN = {"A": 0, "B": 1, "F": 2}

# Irreducible SU(3) content of the generator-line endpoints.
_VERTEX_SU3_REP = {"A": "1", "B": "3bar", "E": "8", "G": "6"}


def gell_mann_matrices() -> np.ndarray:
    """The eight 3x3 generators, traceless Hermitian, tr(g_a g_b) = 2 delta_ab."""
    g = np.zeros((8, 3, 3), dtype=complex)
    g[0, 0, 1] = g[0, 1, 0] = 1.0
    g[1, 0, 1] = -1j
    g[1, 1, 0] = 1j
    g[2, 0, 0] = 1.0
    g[2, 1, 1] = -1.0
    g[3, 0, 2] = g[3, 2, 0] = 1.0
    g[4, 0, 2] = -1j
    g[4, 2, 0] = 1j
    g[5, 1, 2] = g[5, 2, 1] = 1.0
    g[6, 1, 2] = -1j
    g[6, 2, 1] = 1j
    g[7] = np.diag([1.0, 1.0, -2.0]) / _SQRT3
    return g


@dataclass(frozen=True)
class Su3Generators:
    """Fundamental generators and their conjugate-representation partners -conj(g)."""

    lam: np.ndarray
    lam_bar: np.ndarray


def su3_generators() -> Su3Generators:
    lam = gell_mann_matrices()
    return Su3Generators(lam=lam, lam_bar=-lam.conj())


def swap_operator(d: int = 3) -> np.ndarray:
    """Exchange of the two factors of a d x d product space."""
    w = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            w[i * d + j, j * d + i] = 1.0
    return w


def spin_conjugation() -> np.ndarray:
    """The 3x3 involution flipping m -> -m with alternating sign.

    Applied to the second factor it carries the maximally entangled state of
    the computational basis onto the two-spin singlet, aligning the
    conjugate-representation construction with the spin basis.
    """
    return np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])


def _check_range(alpha: float, lo: float, hi: float) -> None:
    if not (lo - _RANGE_SLACK <= alpha <= hi + _RANGE_SLACK):
        raise ValueError(f"alpha={alpha} outside the allowed interval [{lo}, {hi}]")


def exchange_coupling() -> np.ndarray:
    """sum_a g_a (x) g_a; equals 2 SWAP - (2/3) I for qutrits."""
    lam = gell_mann_matrices()
    return sum(np.kron(g, g) for g in lam)


def conjugate_coupling() -> np.ndarray:
    """sum_a g_a (x) gbar_a, conjugated into the spin-aligned basis.

    Equals (2/3) I - 6 P with P the two-spin singlet projector.  The
    conjugation by ``spin_conjugation`` on the second factor replaces the
    computational-basis maximally entangled state with the singlet.
    """
    gens = su3_generators()
    coupling = sum(np.kron(g, gb) for g, gb in zip(gens.lam, gens.lam_bar))
    u = np.kron(np.eye(3), spin_conjugation())
    return u @ coupling @ u.conj().T


def werner_state(alpha) -> np.ndarray:
    """Exchange-invariant two-qutrit state (1/9)(I + alpha sum_a g_a (x) g_a).

    Positive exactly for alpha in [-3/4, 3/8]; the endpoints are the
    normalized antisymmetric and symmetric projectors.  Coincides with the
    invariant family at s = 1 along beta = 2 alpha.
    """
    a = float(alpha)
    _check_range(a, *WERNER_ALPHA_RANGE)
    return (np.eye(9, dtype=complex) + a * exchange_coupling()) / 9.0


def conjugate_werner_state(alpha) -> np.ndarray:
    """Conjugate-representation companion, (1/9)(I + alpha * conjugate_coupling()).

    Normalized so that positivity holds exactly for alpha in [-3/2, 3/16]:
    alpha = -3/2 is the pure total-spin singlet, alpha = 3/16 the normalized
    projector onto its complement.  Coincides with the invariant family at
    s = 1 along beta = -2 alpha.
    """
    a = float(alpha)
    _check_range(a, *CONJ_WERNER_ALPHA_RANGE)
    return (np.eye(9, dtype=complex) + a * conjugate_coupling()) / 9.0


def su3_line_distance(alpha, conjugate_rep: bool = False) -> float:
    """Frobenius distance between the generator-built state and the matching
    invariant-family state on beta = +/- 2 alpha at s = 1."""
    a = float(alpha)
    if conjugate_rep:
        built = conjugate_werner_state(a)
        target = invariant_state(2, Point(a, -2.0 * a)).matrix
    else:
        built = werner_state(a)
        target = invariant_state(2, Point(a, 2.0 * a)).matrix
    return float(np.linalg.norm(built - target))


def swap_expectation(mat: np.ndarray) -> float:
    """tr(mat SWAP); nonnegative exactly on the separable Werner states."""
    return float(np.real(np.trace(mat @ swap_operator(3))))


def qutrit_report() -> dict:
    """JSON-ready summary of the s = 1 slice: named points, lines, thresholds."""
    two_s = 2
    vertices = {}
    for name, p in QUTRIT_VERTICES.items():
        physical = is_physical(two_s, p)
        entry = {
            "alpha": p.alpha,
            "beta": p.beta,
            "physical": physical,
            "ppt": is_ppt(two_s, p) if physical else None,
            "rank": state_rank(two_s, p) if physical else None,
            "purity": purity(two_s, p) if physical else None,
            "entropy": entropy(two_s, p) if physical else None,
            "pt_image": list(pt_image(p)),
        }
        if name in _VERTEX_TOTAL_SPIN:
            entry["total_spin"] = _VERTEX_TOTAL_SPIN[name]
        if name in _VERTEX_SU3_REP:
            entry["su3_rep"] = _VERTEX_SU3_REP[name]
        vertices[name] = entry
    return {
        "two_s": two_s,
        "vertices": vertices,
        "su3_lines": {
            "exchange": {
                "beta_over_alpha": 2.0,
                "alpha_range": list(WERNER_ALPHA_RANGE),
                "endpoints": ["B", "G"],
                "separable_alpha_min": WERNER_SEPARABLE_ALPHA,
            },
            "conjugate": {
                "beta_over_alpha": -2.0,
                "alpha_range": list(CONJ_WERNER_ALPHA_RANGE),
                "endpoints": ["A", "E"],
            },
        },
    }
