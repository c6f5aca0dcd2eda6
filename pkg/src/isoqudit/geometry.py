"""Parameter-plane geometry: per-spin physical triangles, the limit region,
the partial-transpose map, and point classification.

The physical region at spin s is a triangle cut out by the three positivity
lines; the regions are nested in s and fill a fixed limit triangle with
vertices S = (-3/2, 3), V = (0, -6), W = (3/2, 3).  The half-open edge
[S, V) is shared by every spin's boundary and carries the entangled states
whose partial transpose stays unphysical at every spin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .isostate import (
    FIDUCIAL_CAP,
    PHYSICAL_TOL,
    Point,
    as_point,
    fiducial_spin,
    is_physical,
)
from .operators import check_two_s
from .qrep import q_positive

LINE_TOL = 1e-9

# A line is (a, b, c) meaning a + b*alpha + c*beta = 0.
Line = tuple[float, float, float]

VERTEX_S = Point(-1.5, 3.0)
VERTEX_V = Point(0.0, -6.0)
VERTEX_W = Point(1.5, 3.0)

# Limits of the three positivity lines: the SV, WS and VW edges.
LIMIT_EDGES: tuple[Line, Line, Line] = (
    (1.0, 1.0, 1.0 / 6.0),
    (1.0, 0.0, -1.0 / 3.0),
    (1.0, -1.0, 1.0 / 6.0),
)


def edge_lines(two_s) -> tuple[Line, Line, Line]:
    """The three positivity equalities at spin s, in block order J = s+1, s, s-1."""
    t = check_two_s(two_s)
    s = t / 2.0
    return (
        (1.0, 1.0, 1.0 / 6.0),
        (1.0, -1.0 / s, -(2 * s + 3) / (6 * s)),
        (1.0, -(s + 1) / s, (s + 1) * (2 * s + 3) / (6 * s * (2 * s - 1))),
    )


@dataclass(frozen=True)
class RegionTriangle:
    """A physical region: three vertices and the lines carrying its edges.

    ``two_s`` is None for the limit region.  Vertices are ordered: the shared
    apex S first, then the intersection of lines 1 and 3 (bottom), then of
    lines 2 and 3 (right).
    """

    two_s: Optional[int]
    vertices: tuple[Point, Point, Point]
    edges: tuple[Line, Line, Line]


def region_triangle(two_s) -> RegionTriangle:
    # Closed-form intersections of the positivity lines, with t = 2s:
    # lines 1 and 2 meet at S for every spin; line 3 cuts the other two at
    # the points below (they tend to V and W as s grows).
    t = check_two_s(two_s)
    bottom = Point(-3.0 / (t + 2), -6.0 * (t - 1) / (t + 2))
    right = Point(1.5 * t / (t + 2), 3.0 * t * (t - 1) / ((t + 2) * (t + 3)))
    return RegionTriangle(t, (VERTEX_S, bottom, right), edge_lines(two_s))


def limit_triangle() -> RegionTriangle:
    return RegionTriangle(None, (VERTEX_S, VERTEX_V, VERTEX_W), LIMIT_EDGES)


def triangle_area(tri: RegionTriangle) -> float:
    (x1, y1), (x2, y2), (x3, y3) = tri.vertices
    return abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2)) / 2.0


def area_fraction(two_s) -> float:
    """Area of the spin-s region relative to the limit region; increases to 1.

    The shoelace ratio of the two triangles collapses to t(t+1)/((t+2)(t+3))
    with t = 2s, so the fraction is computed exactly: 0.3 at s = 1,
    136/171 at s = 8.
    """
    t = check_two_s(two_s)
    return t * (t + 1) / ((t + 2) * (t + 3))


def pt_image(point) -> Point:
    """Parameter image under partial transposition of the spin-s factor.

    The dot-product coupling is odd and the quadrupole coupling even under
    that transpose, so (alpha, beta) maps to (-alpha, beta); the map is an
    involution and fixes beta.
    """
    p = as_point(point)
    return Point(-p.alpha, p.beta)


def is_ppt(two_s, point, tol: float = PHYSICAL_TOL) -> bool:
    """Whether the physical state at (two_s, point) has a positive partial transpose.

    The partial transpose of a family member is the family member at the
    mirrored point, so PPT reduces to physicality of the image.
    """
    t = check_two_s(two_s)
    p = as_point(point)
    if not is_physical(t, p, tol):
        raise ValueError(f"two_s={t}, point={tuple(p)} is not a physical state")
    return is_physical(t, pt_image(p), tol)


def line_distance(point, line: Line) -> float:
    """Perpendicular distance from a point to a line in the parameter plane."""
    a0, b, c = line
    p = as_point(point)
    return abs(a0 + b * p.alpha + c * p.beta) / math.hypot(b, c)


def sample_sv_segment(n: int) -> list[Point]:
    """n points uniformly spaced in beta on the half-open edge [S, V).

    S (beta = 3) is included, V (beta = -6) excluded; n = 1 gives just S.
    The alpha coordinate solves the edge equation exactly.
    """
    if n < 1:
        raise ValueError(f"need at least one sample point, got {n}")
    points = []
    for k in range(n):
        beta = 3.0 - 9.0 * k / n
        points.append(Point(-1.0 - beta / 6.0, beta))
    return points


class Kind(Enum):
    SUPER_QUANTUM = "super_quantum"
    INTERIOR_CLASSICAL = "interior_classical"
    BOUNDARY_VW = "boundary_vw"
    BOUNDARY_WS_EXCEPT_S = "boundary_ws_except_s"
    OUTSIDE_SVW = "outside_svw"


@dataclass(frozen=True)
class Classification:
    """Where a parameter point sits, with the payload that makes it actionable.

    sigma is the fiducial two_s (smallest physical spin) where meaningful;
    ppt_at_sigma qualifies interior points; q_positive qualifies points
    outside the limit region.
    """

    kind: Kind
    sigma: Optional[int] = None
    ppt_at_sigma: Optional[bool] = None
    q_positive: Optional[bool] = None


def classify(point, cap_two_s: int = FIDUCIAL_CAP) -> Classification:
    """Classify a parameter point against the limit region and its edges.

    Checks run in a fixed order: the [S, V) edge first (S included, V
    excluded by a strict beta > -6 comparison), then membership in the closed
    limit triangle, then the VW and WS edges, leaving the open interior.
    W sits on both excluded edges and reports as VW.
    """
    p = as_point(point)
    sv, _, vw = LIMIT_EDGES
    if line_distance(p, sv) <= LINE_TOL and -6.0 < p.beta <= 3.0 + LINE_TOL:
        return Classification(Kind.SUPER_QUANTUM, sigma=fiducial_spin(p, cap_two_s))
    inside = (
        1.0 + p.alpha + p.beta / 6.0 >= -LINE_TOL
        and 1.0 - p.alpha + p.beta / 6.0 >= -LINE_TOL
        and p.beta <= 3.0 + LINE_TOL
    )
    if not inside:
        return Classification(Kind.OUTSIDE_SVW, q_positive=q_positive(p))
    if line_distance(p, vw) <= LINE_TOL:
        return Classification(Kind.BOUNDARY_VW)
    if abs(p.beta - 3.0) <= LINE_TOL:
        return Classification(Kind.BOUNDARY_WS_EXCEPT_S)
    sigma = fiducial_spin(p, cap_two_s)
    ppt_at_sigma = is_ppt(sigma, p) if sigma is not None else None
    return Classification(Kind.INTERIOR_CLASSICAL, sigma=sigma, ppt_at_sigma=ppt_at_sigma)
