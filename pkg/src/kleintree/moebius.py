"""Moebius maps, generalized circles and disks, and half-space helpers.

A map acts on the Riemann sphere as z -> (az+b)/(cz+d); entries are kept
with det = 1 and a matrix is identified with its negative.  A generalized
circle is the Hermitian form {z : A|z|^2 + 2 Re(conj(B) z) + D = 0} with
A, D real, normalized to |B|^2 - A*D = 1; lines are the A = 0 case.  The
point at infinity is any complex with a non-finite part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

IDENTITY_TOL = 1e-8
LINE_EPS = 1e-12

INF = complex(math.inf, 0.0)


def is_inf(z: complex) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


def chordal(z: complex, w: complex) -> float:
    """Chordal metric on the sphere; handles the point at infinity."""
    zi, wi = is_inf(z), is_inf(w)
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


@dataclass(frozen=True)
class MoebiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = complex(self.a) * self.d - complex(self.b) * self.c
        if abs(det) < 1e-30:
            raise ValueError("singular matrix")
        if abs(det - 1.0) <= 1e-12:
            # already normalized; leave the entries bit-exact
            object.__setattr__(self, "a", complex(self.a))
            object.__setattr__(self, "b", complex(self.b))
            object.__setattr__(self, "c", complex(self.c))
            object.__setattr__(self, "d", complex(self.d))
            return
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", complex(self.a) / s)
        object.__setattr__(self, "b", complex(self.b) / s)
        object.__setattr__(self, "c", complex(self.c) / s)
        object.__setattr__(self, "d", complex(self.d) / s)

    @staticmethod
    def _trusted(a: complex, b: complex, c: complex, d: complex) -> "MoebiusMap":
        """Skip renormalization for matrices with det 1 by construction.

        The determinant of a product of det-1 matrices is 1 exactly; its
        numerical recomputation from large entries is cancellation noise,
        and dividing by it injects that noise into the entries.
        """
        obj = object.__new__(MoebiusMap)
        object.__setattr__(obj, "a", complex(a))
        object.__setattr__(obj, "b", complex(b))
        object.__setattr__(obj, "c", complex(c))
        object.__setattr__(obj, "d", complex(d))
        return obj

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap._trusted(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap._trusted(self.d, -self.b, -self.c, self.a)

    def conjugate_entries(self) -> "MoebiusMap":
        return MoebiusMap._trusted(
            self.a.conjugate(),
            self.b.conjugate(),
            self.c.conjugate(),
            self.d.conjugate(),
        )

    def __call__(self, z: complex) -> complex:
        return apply(self, z)

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def to_reals(self) -> list[float]:
        out = []
        for e in self.entries():
            out.extend([e.real, e.imag])
        return out

    @staticmethod
    def from_reals(vals) -> "MoebiusMap":
        if len(vals) != 8:
            raise ValueError("need 8 reals")
        a, b, c, d = (complex(vals[i], vals[i + 1]) for i in range(0, 8, 2))
        return MoebiusMap(a, b, c, d)


IDENTITY = MoebiusMap(1, 0, 0, 1)


def apply(M: MoebiusMap, z: complex) -> complex:
    if is_inf(z):
        if abs(M.c) == 0.0:
            return INF
        return M.a / M.c
    num = M.a * z + M.b
    den = M.c * z + M.d
    if abs(den) == 0.0:
        return INF
    return num / den


def matrix_power(M: MoebiusMap, k: int) -> MoebiusMap:
    if k < 0:
        return matrix_power(M.inverse(), -k)
    out = IDENTITY
    base = M
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out


def projective_distance(M: MoebiusMap, N: MoebiusMap) -> float:
    """min over signs of the max-entry distance; both inputs have det 1."""
    dplus = max(abs(m - n) for m, n in zip(M.entries(), N.entries()))
    dminus = max(abs(m + n) for m, n in zip(M.entries(), N.entries()))
    return min(dplus, dminus)


def max_entry(M: MoebiusMap) -> float:
    return max(abs(e) for e in M.entries())


def projective_distance_rel(M: MoebiusMap, N: MoebiusMap) -> float:
    """Projective distance scaled by the larger entry magnitude.

    Deep elements of the constructions have entries of size e^(sum of
    level distances); equality of such matrices is only meaningful
    relative to that scale, since their stored entries carry absolute
    rounding of the same order times epsilon.
    """
    return projective_distance(M, N) / max(1.0, max_entry(M), max_entry(N))


def is_identity(M: MoebiusMap, tol: float = IDENTITY_TOL) -> bool:
    return projective_distance(M, IDENTITY) <= tol


class Classification(NamedTuple):
    kind: str  # identity | elliptic | parabolic | loxodromic
    angle: float | None  # canonical rotation angle in (0, pi] for elliptics


def classify(M: MoebiusMap, tol: float = IDENTITY_TOL) -> Classification:
    """Trace classification; the elliptic angle is defined up to sign."""
    if is_identity(M, tol):
        return Classification("identity", None)
    t = M.trace
    if abs(t.imag) <= tol:
        tr = abs(t.real)
        if tr < 2.0 - tol:
            angle = 2.0 * math.acos(min(1.0, tr / 2.0))
            return Classification("elliptic", angle)
        if tr <= 2.0 + tol:
            return Classification("parabolic", None)
    return Classification("loxodromic", None)


def fixed_points(M: MoebiusMap, tol: float = IDENTITY_TOL) -> tuple[complex, ...]:
    """One point for parabolics, two otherwise.  Identity is an error."""
    kind = classify(M, tol).kind
    if kind == "identity":
        raise ValueError("the identity fixes everything")
    a, b, c, d = M.entries()
    if abs(c) <= 1e-14:
        # fixes infinity
        if kind == "parabolic" or abs(a - d) <= 1e-14:
            return (INF,)
        return (b / (d - a), INF)
    if kind == "parabolic":
        return ((a - d) / (2 * c),)
    disc = cmath.sqrt((a + d) ** 2 - 4)
    return ((a - d + disc) / (2 * c), (a - d - disc) / (2 * c))


@dataclass(frozen=True)
class GeneralizedCircle:
    """Hermitian form (A, B, D); the zero set of A|z|^2 + 2Re(conj(B)z) + D."""

    A: float
    B: complex
    D: float

    def __post_init__(self):
        s = abs(complex(self.B)) ** 2 - float(self.A) * float(self.D)
        if s <= 0:
            raise ValueError("form does not define a real circle")
        if abs(s - 1.0) <= 1e-12:
            object.__setattr__(self, "A", float(self.A))
            object.__setattr__(self, "B", complex(self.B))
            object.__setattr__(self, "D", float(self.D))
            return
        r = math.sqrt(s)
        object.__setattr__(self, "A", float(self.A) / r)
        object.__setattr__(self, "B", complex(self.B) / r)
        object.__setattr__(self, "D", float(self.D) / r)

    @staticmethod
    def _trusted(A: float, B: complex, D: float) -> "GeneralizedCircle":
        """Skip renormalization for forms known to satisfy |B|^2 - AD = 1.

        Transport of a normalized form by a det-1 map preserves the
        invariant exactly in exact arithmetic; recomputing it numerically
        cancels catastrophically for tiny circles moved by large words.
        """
        obj = object.__new__(GeneralizedCircle)
        object.__setattr__(obj, "A", float(A))
        object.__setattr__(obj, "B", complex(B))
        object.__setattr__(obj, "D", float(D))
        return obj

    def value(self, z: complex) -> float:
        return self.A * abs(z) ** 2 + 2.0 * (self.B.conjugate() * z).real + self.D

    @property
    def is_line(self) -> bool:
        return abs(self.A) < LINE_EPS

    @property
    def center(self) -> complex:
        if self.is_line:
            raise ValueError("a line has no center")
        return -self.B / self.A

    @property
    def radius(self) -> float:
        if self.is_line:
            raise ValueError("a line has no radius")
        return 1.0 / abs(self.A)

    def contains_point(self, z: complex, tol: float = 1e-9) -> bool:
        if is_inf(z):
            return self.is_line
        return abs(self.value(z)) <= tol * max(1.0, abs(z) ** 2)

    def distance_to(self, z: complex) -> float:
        """Euclidean distance from a finite point to the circle or line."""
        if self.is_line:
            n = self.B / abs(self.B)
            return abs((n.conjugate() * z).real * 2.0 + self.D) / 2.0
        return abs(abs(z - self.center) - self.radius)

    def inversion(self, z: complex) -> complex:
        """The inverse point of z with respect to this circle."""
        if self.is_line:
            n = self.B / abs(self.B)
            return z - n * self.value(z)
        c, r = self.center, self.radius
        if is_inf(z):
            return c
        w = z - c
        if abs(w) == 0.0:
            return INF
        return c + (r * r) / w.conjugate()

    def to_reals(self) -> list[float]:
        return [self.A, self.B.real, self.B.imag, self.D]

    @staticmethod
    def from_reals(vals) -> "GeneralizedCircle":
        if len(vals) != 4:
            raise ValueError("need 4 reals")
        return GeneralizedCircle(vals[0], complex(vals[1], vals[2]), vals[3])

    @staticmethod
    def from_center_radius(center: complex, radius: float) -> "GeneralizedCircle":
        if radius <= 0:
            raise ValueError("radius must be positive")
        return GeneralizedCircle(
            1.0 / radius, -center / radius, (abs(center) ** 2 - radius**2) / radius
        )

    @staticmethod
    def from_line(point: complex, unit_normal: complex) -> "GeneralizedCircle":
        n = unit_normal / abs(unit_normal)
        return GeneralizedCircle(0.0, n, -2.0 * (n.conjugate() * point).real)


UNIT_CIRCLE = GeneralizedCircle.from_center_radius(0j, 1.0)


def circle_image(M: MoebiusMap, C: GeneralizedCircle) -> GeneralizedCircle:
    """Transport the Hermitian form by M^-1 (congruence action)."""
    inv = M.inverse()
    a, b, c, d = inv.entries()
    A, B, D = C.A, C.B, C.D
    # H' = inv^dagger @ [[A, B], [conj(B), D]] @ inv
    A2 = (
        A * abs(a) ** 2
        + (B * a.conjugate() * c).real * 2.0
        + D * abs(c) ** 2
    )
    D2 = (
        A * abs(b) ** 2
        + (B * b.conjugate() * d).real * 2.0
        + D * abs(d) ** 2
    )
    B2 = (
        A * a.conjugate() * b
        + B * a.conjugate() * d
        + B.conjugate() * c.conjugate() * b
        + D * c.conjugate() * d
    )
    return GeneralizedCircle._trusted(A2, B2, D2)


@dataclass(frozen=True)
class OrientedDisk:
    """A closed side of a circle: the region where side * form <= 0."""

    circle: GeneralizedCircle
    side: int

    def __post_init__(self):
        if self.side not in (-1, 1):
            raise ValueError("side must be +1 or -1")

    def complement(self) -> "OrientedDisk":
        return OrientedDisk(self.circle, -self.side)

    @property
    def is_bounded(self) -> bool:
        return self.side * self.circle.A > LINE_EPS

    def region(self):
        """('disk'|'hole', center, radius) or ('halfplane', normal, offset).

        A 'hole' is the closed complement of a round disk; a halfplane is
        {z : 2 Re(conj(n) z) + offset <= 0} with |n| = 1.
        """
        A = self.side * self.circle.A
        B = self.side * self.circle.B
        D = self.side * self.circle.D
        if abs(A) < LINE_EPS:
            n = B / abs(B)
            return ("halfplane", n, D / abs(B))
        center = -B / A
        radius = 1.0 / abs(A)
        return ("disk" if A > 0 else "hole", center, radius)

    def contains(self, z: complex) -> bool:
        if is_inf(z):
            return self.side * self.circle.A <= LINE_EPS
        return self.side * self.circle.value(z) <= 0.0

    @staticmethod
    def around(circle: GeneralizedCircle, z: complex) -> "OrientedDisk":
        """The closed side of the circle containing the point z."""
        if is_inf(z):
            side = -1 if circle.A > 0 else 1
        else:
            v = circle.value(z)
            if abs(v) == 0.0:
                raise ValueError("point lies on the circle")
            side = -1 if v > 0 else 1
        return OrientedDisk(circle, side)


def disk_image(M: MoebiusMap, d: OrientedDisk) -> OrientedDisk:
    """The set image M(d); the positive renormalization preserves the side."""
    return OrientedDisk(circle_image(M, d.circle), d.side)


def disk_contains(d: OrientedDisk, z: complex) -> bool:
    return d.contains(z)


def disks_disjoint(d1: OrientedDisk, d2: OrientedDisk) -> tuple[bool, float]:
    """Whether the closed regions are disjoint on the sphere, with a margin.

    The margin is the Euclidean gap when disjoint and a negative
    penetration depth when not.  Two holes (or a hole and a halfplane,
    or two non-opposed halfplanes) always overlap near infinity; their
    margin is reported as -(r1 + r2 + |c1 - c2|)-style, negative.
    """
    m = _region_gap(d1.region(), d2.region())
    return (m > 0.0, m)


def _region_gap(r1, r2) -> float:
    kind1, kind2 = r1[0], r2[0]
    if kind1 > kind2:
        r1, r2 = r2, r1
        kind1, kind2 = kind2, kind1
    # kinds sorted: disk < halfplane < hole
    if kind1 == "disk" and kind2 == "disk":
        _, c1, rad1 = r1
        _, c2, rad2 = r2
        return abs(c1 - c2) - rad1 - rad2
    if kind1 == "disk" and kind2 == "hole":
        _, c1, rad1 = r1
        _, c2, rad2 = r2
        return rad2 - abs(c1 - c2) - rad1
    if kind1 == "disk" and kind2 == "halfplane":
        _, c1, rad1 = r1
        _, n, off = r2
        signed = (n.conjugate() * c1).real * 2.0 + off
        return signed / 2.0 - rad1
    if kind1 == "halfplane" and kind2 == "halfplane":
        _, n1, off1 = r1
        _, n2, off2 = r2
        if abs(n1 + n2) <= 1e-9:
            return (off1 + off2) / 2.0
        return -(abs(off1) + abs(off2) + 1.0)
    # hole/hole and halfplane/hole share the point at infinity
    if kind1 == "hole" and kind2 == "hole":
        _, c1, rad1 = r1
        _, c2, rad2 = r2
        return -(rad1 + rad2 + abs(c1 - c2))
    _, n, off = r1
    _, c2, rad2 = r2
    return -(rad2 + abs(off) + 1.0)


def disk_in_disk(inner: OrientedDisk, outer: OrientedDisk) -> tuple[bool, float]:
    """Whether inner is contained in outer, with a gap margin.

    Containment on the sphere is the same as inner being disjoint from the
    complement of outer.
    """
    return disks_disjoint(inner, outer.complement())


@dataclass(frozen=True)
class H3Point:
    """Upper half-space point (z, t), t > 0."""

    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("height must be positive")


def axis_standardizer(
    M: MoebiusMap, front: complex, tol: float = IDENTITY_TOL
) -> MoebiusMap:
    """A map Q sending front -> 0 and the other fixed point -> infinity.

    Q M Q^-1 is then diagonal.  The scale of Q is the deterministic one
    coming from the two-point formula; callers needing a specific scale
    compose with a diagonal map.
    """
    fps = fixed_points(M, tol)
    if len(fps) != 2:
        raise ValueError("need an elliptic or loxodromic map with two fixed points")
    p, q = fps
    if chordal(p, front) > chordal(q, front):
        p, q = q, p
    if chordal(p, front) > 1e-6:
        raise ValueError("front is not a fixed point of the map")
    if is_inf(p):
        return MoebiusMap(0, 1, 1, -q)
    if is_inf(q):
        return MoebiusMap(1, -p, 0, 1)
    return MoebiusMap(1, -p, 1, -q)


def scale_map(s: complex) -> MoebiusMap:
    """z -> s z."""
    if abs(s) == 0.0:
        raise ValueError("zero scale")
    r = cmath.sqrt(s)
    return MoebiusMap(r, 0, 0, 1 / r)


def translation_map(w: complex) -> MoebiusMap:
    """z -> z + w."""
    return MoebiusMap(1, w, 0, 1)


def perpendicular_circle_at(h: float, L: float) -> GeneralizedCircle:
    """Boundary of the plane perpendicular to the vertical axis at distance L.

    The axis is {0, infinity} with start point at height h; moving distance
    L toward 0 gives the hemisphere of Euclidean radius h e^{-L}.
    """
    if h <= 0:
        raise ValueError("height must be positive")
    if L < 0:
        raise ValueError("distance must be nonnegative")
    return GeneralizedCircle.from_center_radius(0j, h * math.exp(-L))


def vertical_translation(t: float) -> MoebiusMap:
    """The parabolic z -> z + t*i (the identity for t = 0)."""
    return MoebiusMap(1, complex(0.0, t), 0, 1)


def elliptic_about_vertical_axis(angle: float) -> MoebiusMap:
    """Rotation z -> e^{i angle} z about the axis {0, infinity}."""
    u = cmath.exp(1j * angle / 2.0)
    return MoebiusMap(u, 0, 0, 1 / u)
