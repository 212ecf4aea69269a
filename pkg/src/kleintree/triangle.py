"""Explicit generator matrices for rotation triangle groups on a circle.

Groups are produced as products of reflections in the sides of an
explicit hyperbolic triangle drawn in the unit-disk model, then moved to
the requested invariant circle.  A reflection in a geodesic is encoded by
a matrix R meaning z -> mobius(R, conj(z)); the product of two
reflections R2 after R1 is the honest Moebius map R2 @ conj(R1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from kleintree.moebius import (
    IDENTITY_TOL,
    UNIT_CIRCLE,
    GeneralizedCircle,
    MoebiusMap,
    OrientedDisk,
    axis_standardizer,
    chordal,
    circle_image,
    classify,
    fixed_points,
    is_inf,
    projective_distance,
    scale_map,
)

_CONTRACT_TOL = 1e-10


def _reflection_in_diameter(angle: float) -> MoebiusMap:
    """Inversion in the line through 0 at the given angle: z -> e^{2ia} conj(z)."""
    u = cmath.exp(1j * angle)
    return MoebiusMap(u, 0, 0, 1 / u)


def _reflection_in_circle(center: complex, radius: float) -> MoebiusMap:
    """Inversion z -> center + radius^2 / conj(z - center)."""
    q = center
    return MoebiusMap(q, radius * radius - abs(q) ** 2, 1, -q.conjugate())


def _compose_reflections(second: MoebiusMap, first: MoebiusMap) -> MoebiusMap:
    return second @ first.conjugate_entries()


def _orthocircle_through(z1: complex, z2: complex) -> MoebiusMap:
    """Reflection in the geodesic of the disk model through z1 and z2.

    Points on the unit circle (ideal endpoints) are allowed.  Returns the
    reflection matrix; raises if the two points lie on a diameter.
    """
    # solve 2 Re(conj(q) z_i) = |z_i|^2 + 1 for the center q
    x1, y1 = z1.real, z1.imag
    x2, y2 = z2.real, z2.imag
    det = x1 * y2 - x2 * y1
    if abs(det) < 1e-13:
        raise ValueError("points lie on a diameter")
    r1 = (abs(z1) ** 2 + 1.0) / 2.0
    r2 = (abs(z2) ** 2 + 1.0) / 2.0
    qx = (r1 * y2 - r2 * y1) / det
    qy = (x1 * r2 - x2 * r1) / det
    q = complex(qx, qy)
    rad = math.sqrt(abs(q) ** 2 - 1.0)
    return _reflection_in_circle(q, rad)


def _qqp_vertex_radius(Q: int, P: int) -> float:
    """Euclidean distance 0 -> Q-vertex for the (Q, Q, P) triangle at the origin.

    Side length b from the P-vertex by the law of cosines for angles
    pi/Q, pi/Q, pi/P; returned as tanh(b/2).
    """
    aq = math.pi / Q
    ap = math.pi / P
    cosh_b = math.cos(aq) * (1.0 + math.cos(ap)) / (math.sin(aq) * math.sin(ap))
    if cosh_b <= 1.0:
        raise ValueError("triangle is not hyperbolic")
    sinh_b = math.sqrt(cosh_b * cosh_b - 1.0)
    return sinh_b / (1.0 + cosh_b)


@dataclass(frozen=True)
class RootGroup:
    a: MoebiusMap
    b: MoebiusMap
    invariant_circle: GeneralizedCircle
    said_disk: OrientedDisk


def build_44inf() -> RootGroup:
    """The order-4, order-4, parabolic-product group on the unit circle.

    Canonical position: rotation centers at -(sqrt(2)-1) and +(sqrt(2)-1)
    on the real axis, parabolic fixed point at i; the designated
    complementary component is the unit disk.
    """
    t = math.sqrt(2.0) - 1.0
    v1, v2 = complex(-t, 0.0), complex(t, 0.0)
    ideal = 1j
    s1 = _orthocircle_through(v1, ideal)
    s2 = _orthocircle_through(v2, ideal)
    s3 = _reflection_in_diameter(0.0)
    a = _compose_reflections(s3, s1)
    b = _compose_reflections(s2, s3)
    said = OrientedDisk.around(UNIT_CIRCLE, 0j)
    return RootGroup(a, b, UNIT_CIRCLE, said)


def standard_qqp_generators(
    Q: int, P: int, theta: float
) -> tuple[MoebiusMap, MoebiusMap, complex, complex]:
    """The rotation triangle in the unit disk around z -> e^{i theta} z.

    theta is the signed rotation angle of the center element, |theta| =
    2 pi / P.  Returns (g1, g2, v1, v2) with g2 g1 exactly the center
    rotation, g_i the order-Q rotation about the vertex v_i, and v1 on
    the positive real axis.
    """
    if 2.0 / Q + 1.0 / P >= 1.0:
        raise ValueError(f"({Q},{Q},{P}) is not a hyperbolic signature")
    if abs(abs(theta) - 2.0 * math.pi / P) > 1e-8:
        raise ValueError(f"center angle is not primitive of order {P}")
    psi = theta / 2.0
    rv = _qqp_vertex_radius(Q, P)
    v1 = complex(rv, 0.0)
    v2 = rv * cmath.exp(1j * psi)
    s1 = _reflection_in_diameter(0.0)
    s2 = _reflection_in_diameter(psi)
    s3 = _orthocircle_through(v1, v2)
    g1 = _compose_reflections(s3, s1)
    g2 = _compose_reflections(s2, s3)
    rotation = MoebiusMap(cmath.exp(1j * psi), 0, 0, cmath.exp(-1j * psi))
    if projective_distance(g2 @ g1, rotation) > _CONTRACT_TOL:
        raise AssertionError("triangle closure failed")
    return g1, g2, v1, v2


def build_qqp(
    Q: int,
    P: int,
    C: GeneralizedCircle,
    g0: MoebiusMap,
) -> tuple[MoebiusMap, MoebiusMap]:
    """Order-Q generators g1, g2 with g2 g1 = g0, all preserving C.

    g0 must be a primitive elliptic of order P (rotation angle 2 pi / P)
    whose axis is perpendicular to the plane bounded by C, i.e. whose
    fixed points are inverse points of C.  The triangle is drawn in a
    standard disk model with the first vertex on the positive real axis
    and conjugated onto C.
    """
    if 2.0 / Q + 1.0 / P >= 1.0:
        raise ValueError(f"({Q},{Q},{P}) is not a hyperbolic signature")
    if C.is_line:
        raise ValueError("invariant circle must be a genuine circle")
    kind = classify(g0)
    if kind.kind != "elliptic" or abs(kind.angle - 2.0 * math.pi / P) > 1e-8:
        raise ValueError(f"g0 is not a primitive elliptic of order {P}")
    fps = fixed_points(g0)
    inside = [p for p in fps if not is_inf(p) and C.value(p) * math.copysign(1.0, C.A) < 0]
    if len(inside) != 1:
        raise ValueError("expected exactly one fixed point inside the circle")
    front = inside[0]

    # move (C, axis) to (unit circle, {0, infinity}); read the rotation off
    # the unscaled conjugate, where the off-diagonal noise is not amplified
    Q0 = axis_standardizer(g0, front)
    g0_axis = Q0 @ g0 @ Q0.inverse()
    if abs(g0_axis.b) > 1e-6 or abs(g0_axis.c) > 1e-6:
        raise ValueError("standardization failed to diagonalize g0")
    theta = cmath.phase(g0_axis.a / g0_axis.d)
    circ0 = circle_image(Q0, C)
    # {0, infinity} must be inverse points of the image circle, i.e. the
    # image must be centered at 0: this is the perpendicularity of the
    # axis to the plane of C, tested where it is well conditioned
    if circ0.is_line or abs(circ0.center) > 1e-6 * circ0.radius:
        raise ValueError("axis of g0 is not perpendicular to the plane of C")
    T = scale_map(1.0 / circ0.radius) @ Q0

    g1_std, g2_std, _, _ = standard_qqp_generators(Q, P, theta)
    Tinv = T.inverse()
    g1 = Tinv @ g1_std @ T
    g2 = Tinv @ g2_std @ T
    return g1, g2


def generator_alpha_points(
    g1: MoebiusMap, g2: MoebiusMap, said_disk: OrientedDisk
) -> tuple[complex, complex]:
    """For each generator, its fixed point lying inside the designated disk."""
    out = []
    for g in (g1, g2):
        kind = classify(g)
        if kind.kind != "elliptic":
            raise ValueError("generator is not elliptic")
        inside = [p for p in fixed_points(g) if said_disk.contains(p)]
        if not inside:
            raise ValueError("no fixed point inside the designated disk")
        out.append(inside[0])
    return out[0], out[1]
