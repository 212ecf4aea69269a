"""Inductive construction of the representation tables.

A table at depth n holds one matrix per vertex generator of depth <= n.
Extending by one level realizes, at every depth-n vertex z, the triangle
group of z on a plane at axis distance L below the parent plane, with the
separating circle at distance L/2; the two new matrices are the child
generators of z.  Old entries are carried by reference, never recomputed,
so restriction to a smaller depth is exact.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace

from kleintree import tree
from kleintree.moebius import (
    GeneralizedCircle,
    MoebiusMap,
    OrientedDisk,
    axis_standardizer,
    circle_image,
    disks_disjoint,
    fixed_points,
    perpendicular_circle_at,
    scale_map,
    translation_map,
    vertical_translation,
)
from kleintree.triangle import build_44inf, standard_qqp_generators
from kleintree.tree import Address


@dataclass(frozen=True)
class CertificateParams:
    word_radius_old: int = 3
    word_radius_new: int = 6
    margin_floor: float = 1e-6
    identity_tol: float = 1e-8

    def __post_init__(self):
        if self.word_radius_old < 1 or self.word_radius_new < 1:
            raise ValueError("word radii must be >= 1")
        if not self.margin_floor > 0:
            raise ValueError("margin floor must be positive")


@dataclass(frozen=True)
class VertexEntry:
    """Per-vertex data; circle fields appear once the vertex group is realized."""

    matrix: MoebiusMap | None
    plane_circle: GeneralizedCircle | None = None
    delta_disk: OrientedDisk | None = None
    combination_circle: GeneralizedCircle | None = None


@dataclass(frozen=True)
class RepTable:
    depth: int
    identity_tol: float
    margin_floor: float
    levels: tuple[tuple[int, float], ...]
    vertices: dict[Address, VertexEntry]

    def matrix(self, v: Address) -> MoebiusMap:
        m = self.vertices[v].matrix
        if m is None:
            raise KeyError(f"no matrix at vertex {tree.addr_to_str(v)!r}")
        return m

    def generator_matrices(self, max_depth: int | None = None) -> dict[Address, MoebiusMap]:
        cap = self.depth if max_depth is None else max_depth
        return {
            v: e.matrix
            for v, e in self.vertices.items()
            if e.matrix is not None and tree.depth(v) <= cap
        }

    def restricted(self, depth: int) -> "RepTable":
        """The table as it existed at the given smaller depth."""
        if not 1 <= depth <= self.depth:
            raise ValueError("bad restriction depth")
        vertices = {}
        for v, e in self.vertices.items():
            if tree.depth(v) > depth:
                continue
            if tree.depth(v) == depth:
                e = VertexEntry(e.matrix)
            vertices[v] = e
        levels = tuple(lv for lv in self.levels if lv[0] <= depth)
        return replace(self, depth=depth, levels=levels, vertices=vertices)


def edge_alpha(rep: RepTable, z: Address) -> complex:
    """The fixed point of the edge generator at z inside the parent's disk."""
    parent_delta = rep.vertices[tree.parent(z)].delta_disk
    if parent_delta is None:
        raise ValueError(f"parent of {tree.addr_to_str(z)!r} has no disk data")
    g0 = rep.matrix(z)
    inside = [p for p in fixed_points(g0) if parent_delta.contains(p)]
    if len(inside) != 1:
        raise ValueError("expected exactly one fixed point in the parent disk")
    return inside[0]


def build_level1(
    identity_tol: float = 1e-8, margin_floor: float = 1e-6
) -> RepTable:
    """Depth-1 table: the root group with its invariant circle and disk."""
    root = build_44inf()
    vertices = {
        tree.ROOT: VertexEntry(
            None, plane_circle=root.invariant_circle, delta_disk=root.said_disk
        ),
        (1,): VertexEntry(root.a),
        (2,): VertexEntry(root.b),
    }
    return RepTable(1, identity_tol, margin_floor, (), vertices)


def _frontier_standardizer(rep: RepTable, z: tree.Address) -> MoebiusMap:
    """Map sending the parent plane to the unit circle and the edge axis to {0, inf}.

    Built in two well-conditioned stages: first normalize the parent
    circle to unit size (so the edge generator becomes a moderate-entry
    matrix with well-separated fixed points), then standardize its axis.
    Extracting the axis directly in the global frame loses several digits
    at depth, where the fixed points are exponentially close.
    """
    g0 = rep.matrix(z)
    parent_circle = rep.vertices[tree.parent(z)].plane_circle
    if parent_circle is None:
        raise ValueError("parent plane is not realized")
    if parent_circle.is_line:
        raise ValueError("parent plane must be a genuine circle")
    alpha = edge_alpha(rep, z)
    U = scale_map(1.0 / parent_circle.radius) @ translation_map(-parent_circle.center)
    g0u = U @ g0 @ U.inverse()
    Q0 = axis_standardizer(g0u, U(alpha))
    g0_axis = Q0 @ g0u @ Q0.inverse()
    if abs(g0_axis.b) > 1e-6 or abs(g0_axis.c) > 1e-6:
        raise ValueError("edge generator could not be diagonalized")
    circ0 = circle_image(Q0 @ U, parent_circle)
    if circ0.is_line or abs(circ0.center) > 1e-6 * circ0.radius:
        raise ValueError("edge axis is not perpendicular to the parent plane")
    return scale_map(1.0 / circ0.radius) @ Q0 @ U


def edge_rotation_angle(rep: RepTable, z: tree.Address) -> float:
    """Signed rotation angle of the edge generator at z, |angle| = 2 pi/(3+depth)."""
    g0 = rep.matrix(z)
    T = _frontier_standardizer(rep, z)
    g0_std = T @ g0 @ T.inverse()
    return cmath.phase(g0_std.a / g0_std.d)


def vertex_standard_frame(rep: RepTable, z: tree.Address) -> tuple[MoebiusMap, float, float]:
    """The frame of the realized vertex group at z, rebuilt from stored data.

    Returns (W, theta, L): W maps standard coordinates (unit circle = the
    vertex plane, edge axis = {0, infinity}) to the global frame, theta is
    the edge rotation angle, and L the level distance used at realization.
    Word products of the deep triangle generators are only meaningful in
    this frame; global products lose roughly entry-magnitude-squared
    precision.
    """
    level = tree.depth(z) + 1
    levels = dict(rep.levels)
    if level not in levels:
        raise ValueError(f"vertex {tree.addr_to_str(z)!r} is not realized")
    L = levels[level]
    T = _frontier_standardizer(rep, z)
    g0_std = T @ rep.matrix(z) @ T.inverse()
    theta = cmath.phase(g0_std.a / g0_std.d)
    W = T.inverse() @ scale_map(math.exp(-L))
    return W, theta, L


def extend_one_level(rep: RepTable, L: float) -> RepTable:
    """Realize the vertex groups at the current frontier with parameter L."""
    if not L > 0:
        raise ValueError("L must be positive")
    n = rep.depth
    vertices = dict(rep.vertices)
    for z in tree.vertices_at_depth(n):
        g0 = rep.matrix(z)
        alpha = edge_alpha(rep, z)
        T = _frontier_standardizer(rep, z)
        Tinv = T.inverse()
        g0_std = T @ g0 @ Tinv
        theta = cmath.phase(g0_std.a / g0_std.d)
        if abs(abs(theta) - 2.0 * math.pi / (3 + n)) > 1e-8:
            raise ValueError("edge generator is not a primitive elliptic")
        plane = circle_image(Tinv, perpendicular_circle_at(1.0, L))
        combo = circle_image(Tinv, perpendicular_circle_at(1.0, L / 2.0))
        delta = OrientedDisk.around(plane, alpha)
        g1_std, g2_std, _, _ = standard_qqp_generators(4 + n, 3 + n, theta)
        # the triangle lives on the plane at distance L down the axis
        shrink = scale_map(math.exp(-L))
        W = Tinv @ shrink
        Winv = W.inverse()
        g1 = W @ g1_std @ Winv
        g2 = W @ g2_std @ Winv
        c1, c2 = tree.children(z)
        vertices[c1] = VertexEntry(g1)
        vertices[c2] = VertexEntry(g2)
        vertices[z] = replace(
            vertices[z],
            plane_circle=plane,
            delta_disk=delta,
            combination_circle=combo,
        )
    return replace(
        rep,
        depth=n + 1,
        levels=rep.levels + ((n + 1, L),),
        vertices=vertices,
    )


class AutoTuneError(RuntimeError):
    def __init__(self, message: str, attempts: list[tuple[float, float]]):
        super().__init__(message)
        self.attempts = attempts  # (L, min margin seen)


def auto_tune_level(
    rep: RepTable,
    params: CertificateParams | None = None,
    L0: float = 4.0,
    growth: float = 1.4,
    L_max: float = 64.0,
) -> tuple[RepTable, float]:
    """Smallest L on the ladder L0, L0*growth, ... whose certificates pass."""
    from kleintree.verify import check_nesting, check_precise_invariance

    if params is None:
        params = CertificateParams(
            margin_floor=rep.margin_floor, identity_tol=rep.identity_tol
        )
    if not (L0 > 0 and growth > 1):
        raise ValueError("need L0 > 0 and growth > 1")
    attempts: list[tuple[float, float]] = []
    L = L0
    while L <= L_max * (1 + 1e-12):
        candidate = extend_one_level(rep, L)
        invariance = check_precise_invariance(candidate, candidate.depth, params)
        nesting = check_nesting(candidate, params.margin_floor)
        margin = min(invariance["min_margin"], nesting["min_margin"])
        attempts.append((L, margin))
        if invariance["pass"] and nesting["pass"]:
            return candidate, L
        L *= growth
    raise AutoTuneError(
        f"no L <= {L_max} reached margin {params.margin_floor}; "
        f"best margins {attempts}",
        attempts,
    )


def build(
    depth: int,
    params: CertificateParams | None = None,
    L0: float = 4.0,
    growth: float = 1.4,
    L_max: float = 64.0,
) -> RepTable:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if params is None:
        params = CertificateParams()
    rep = build_level1(params.identity_tol, params.margin_floor)
    for _ in range(2, depth + 1):
        rep, _L = auto_tune_level(rep, params, L0, growth, L_max)
    return rep


# -- parabolic stacking ------------------------------------------------------


@dataclass(frozen=True)
class StackReport:
    offsets: tuple[float, ...]
    min_margin: float
    margins: tuple[tuple[int, int, float], ...]

    @property
    def passed(self) -> bool:
        return self.min_margin > 0.0


def stack_parabolic(
    groups: list[tuple[list[MoebiusMap], OrientedDisk]], gap_factor: float
) -> tuple[list[list[MoebiusMap]], list[float], StackReport]:
    """Translate whole groups up the imaginary axis until supports separate.

    Each group comes with a claimed invariant support disk (the claim is
    the caller's, recorded not proven).  Consecutive translated disks are
    separated by gap_factor times the sum of their radii; the report lists
    the margins of all pairs, which certifies a free product by ping-pong
    given the per-group claims.
    """
    if gap_factor < 0:
        raise ValueError("gap_factor must be nonnegative")
    regions = []
    for _, disk in groups:
        kind, center, radius = disk.region()
        if kind != "disk":
            raise ValueError("support disks must be bounded")
        regions.append((center, radius))

    offsets: list[float] = []
    top = -math.inf
    for center, radius in regions:
        if not offsets:
            t = 0.0
        else:
            prev_radius = regions[len(offsets) - 1][1]
            gap = gap_factor * (prev_radius + radius)
            t = top + gap + radius - center.imag
        offsets.append(t)
        top = center.imag + t + radius

    translated = []
    conjugated = []
    for (gens, disk), t in zip(groups, offsets):
        h = vertical_translation(t)
        hinv = h.inverse()
        conjugated.append([h @ g @ hinv for g in gens])
        translated.append(OrientedDisk(circle_image(h, disk.circle), disk.side))

    margins = []
    min_margin = math.inf
    for i in range(len(translated)):
        for j in range(i + 1, len(translated)):
            _, m = disks_disjoint(translated[i], translated[j])
            margins.append((i, j, m))
            min_margin = min(min_margin, m)
    if not margins:
        min_margin = math.inf
    report = StackReport(tuple(offsets), min_margin, tuple(margins))
    return conjugated, offsets, report


# -- serialization -----------------------------------------------------------


def _disk_to_json(d: OrientedDisk | None):
    if d is None:
        return None
    return {"circle": d.circle.to_reals(), "side": d.side}


def rep_to_json_dict(rep: RepTable) -> dict:
    entries = []
    for v in sorted(rep.vertices, key=lambda v: (len(v), v)):
        e = rep.vertices[v]
        entries.append(
            {
                "addr": tree.addr_to_str(v),
                "matrix": None if e.matrix is None else e.matrix.to_reals(),
                "plane_circle": (
                    None if e.plane_circle is None else e.plane_circle.to_reals()
                ),
                "delta_disk": _disk_to_json(e.delta_disk),
                "combination_circle": (
                    None
                    if e.combination_circle is None
                    else e.combination_circle.to_reals()
                ),
            }
        )
    return {
        "depth": rep.depth,
        "tolerances": {
            "identity_tol": rep.identity_tol,
            "margin_floor": rep.margin_floor,
        },
        "levels": [{"k": k, "L": L} for k, L in rep.levels],
        "vertices": entries,
    }


def rep_to_json(rep: RepTable) -> str:
    return json.dumps(rep_to_json_dict(rep), indent=1)


def rep_from_json(text: str) -> RepTable:
    data = json.loads(text)
    vertices = {}
    for entry in data["vertices"]:
        v = tree.str_to_addr(entry["addr"])
        matrix = (
            None if entry["matrix"] is None else MoebiusMap.from_reals(entry["matrix"])
        )
        plane = (
            None
            if entry["plane_circle"] is None
            else GeneralizedCircle.from_reals(entry["plane_circle"])
        )
        dd = entry["delta_disk"]
        delta = (
            None
            if dd is None
            else OrientedDisk(GeneralizedCircle.from_reals(dd["circle"]), dd["side"])
        )
        combo = (
            None
            if entry["combination_circle"] is None
            else GeneralizedCircle.from_reals(entry["combination_circle"])
        )
        vertices[v] = VertexEntry(matrix, plane, delta, combo)
    return RepTable(
        data["depth"],
        data["tolerances"]["identity_tol"],
        data["tolerances"]["margin_floor"],
        tuple((lv["k"], lv["L"]) for lv in data["levels"]),
        vertices,
    )
