"""Finite certificates for a representation table.

Every check is deterministic given (table, params, seed) and returns a
JSON-ready report {"check", "pass", "min_margin", "failures", ...}.  The
checks are truncations: they can refute a bad table and bound margins on
a finite set of words, never prove discreteness.
"""

from __future__ import annotations

import cmath
import math
from math import gcd
from typing import Iterator

import numpy as np

from kleintree import tree
from kleintree.builder import (
    CertificateParams,
    RepTable,
    edge_alpha,
    vertex_standard_frame,
)
from kleintree.finite_groups import FiniteGroup
from kleintree.homs import enumerate_homs
from kleintree.moebius import (
    IDENTITY,
    GeneralizedCircle,
    MoebiusMap,
    OrientedDisk,
    chordal,
    classify,
    disk_image,
    disk_in_disk,
    disks_disjoint,
    fixed_points,
    is_identity,
    is_inf,
    matrix_power,
    projective_distance,
    projective_distance_rel,
)
from kleintree.triangle import standard_qqp_generators
from kleintree.words import Word


def evaluate_word(w: Word, matrices: dict[tree.Address, MoebiusMap]) -> MoebiusMap:
    out = IDENTITY
    for name, exp in w.syllables:
        out = out @ matrix_power(matrices[tree.addr_of_gen(name)], exp)
    return out


def word_ball(
    letters: list[tuple[str, MoebiusMap]], radius: int
) -> Iterator[tuple[str, MoebiusMap]]:
    """Freely reduced nonempty words of length <= radius.

    letters are (label, matrix) pairs; each contributes itself and its
    inverse (label suffixed with ').  Reduction only avoids an immediate
    inverse letter.
    """
    alphabet = []
    for i, (label, m) in enumerate(letters):
        alphabet.append((2 * i, label, m))
        alphabet.append((2 * i + 1, label + "'", m.inverse()))

    def rec(prefix_label, prefix_matrix, last_code, length):
        for code, label, m in alphabet:
            if last_code is not None and code == last_code ^ 1:
                continue
            word_label = prefix_label + " " + label if prefix_label else label
            matrix = prefix_matrix @ m
            yield word_label, matrix
            if length + 1 < radius:
                yield from rec(word_label, matrix, code, length + 1)

    yield from rec("", IDENTITY, None, 0)


def check_relators(rep: RepTable, identity_tol: float | None = None) -> dict:
    """Evaluate every defining relator of the truncation in matrices."""
    tol = rep.identity_tol if identity_tol is None else identity_tol
    matrices = rep.generator_matrices()
    pres = tree.presentation_full(rep.depth)
    max_residual = 0.0
    max_rel = 0.0
    failures = []
    for rel in pres.relators:
        word_scale = max(
            [1.0]
            + [
                max(abs(e) for e in matrices[tree.addr_of_gen(g)].entries())
                for g, _ in rel.syllables
            ]
        )
        residual = projective_distance(evaluate_word(rel, matrices), IDENTITY)
        max_residual = max(max_residual, residual)
        max_rel = max(max_rel, residual / word_scale)
        if residual > tol:
            failures.append({"relator": str(rel), "residual": residual})
    return {
        "check": "relators",
        "pass": not failures,
        "max_residual": max_residual,
        "max_residual_relative": max_rel,
        "min_margin": tol - max_residual,
        "failures": failures,
    }


def check_nesting(rep: RepTable, margin_floor: float | None = None) -> dict:
    """Child disks strictly inside parents, siblings disjoint, separators placed."""
    floor = rep.margin_floor if margin_floor is None else margin_floor
    min_margin = math.inf
    failures = []

    def note(kind, addr_a, addr_b, margin, ok):
        nonlocal min_margin
        min_margin = min(min_margin, margin)
        if not ok or margin < floor:
            failures.append(
                {
                    "kind": kind,
                    "a": tree.addr_to_str(addr_a),
                    "b": tree.addr_to_str(addr_b),
                    "margin": margin,
                }
            )

    realized = [
        v
        for v, e in rep.vertices.items()
        if e.delta_disk is not None and v != tree.ROOT
    ]
    for v in realized:
        e = rep.vertices[v]
        parent_entry = rep.vertices[tree.parent(v)]
        ok, margin = disk_in_disk(e.delta_disk, parent_entry.delta_disk)
        note("child-in-parent", v, tree.parent(v), margin, ok)
        if e.combination_circle is not None:
            # the separator must lie between the vertex plane and the parent's
            inner = OrientedDisk.around(
                e.combination_circle, edge_alpha(rep, v)
            )
            ok, margin = disk_in_disk(e.delta_disk, inner)
            note("plane-inside-separator", v, v, margin, ok)
            ok, margin = disk_in_disk(inner, parent_entry.delta_disk)
            note("separator-inside-parent", v, tree.parent(v), margin, ok)
    for v in realized:
        for w in realized:
            if w <= v or tree.depth(w) != tree.depth(v):
                continue
            ok, margin = disks_disjoint(
                rep.vertices[v].delta_disk, rep.vertices[w].delta_disk
            )
            note("siblings-disjoint", v, w, margin, ok)
    if min_margin is math.inf:
        min_margin = 0.0
    return {
        "check": "nesting",
        "pass": not failures,
        "min_margin": min_margin,
        "failures": failures,
    }


def _edge_power_table(M: MoebiusMap, order: int) -> list[MoebiusMap]:
    return [matrix_power(M, j) for j in range(order)]


def _is_edge_power(g: MoebiusMap, powers: list[MoebiusMap], tol: float) -> bool:
    # scale-relative comparison: deep matrices carry entry rounding of
    # order epsilon times their magnitude, so an absolute comparison
    # mis-filters genuine edge powers
    return any(projective_distance_rel(g, p) <= tol for p in powers)


def check_precise_invariance(
    rep: RepTable, level: int, params: CertificateParams | None = None
) -> dict:
    """Separating-circle certificate for the combination that created a level.

    Level k covers the stage that realized the depth-k matrices: the
    vertices z at depth k-1 carry the combination circle W_z; B_z is its
    side containing the rotation point of the edge generator.  Old-side
    words over the depth < k matrices must move B_z off itself and off
    every other B_z' unless they are powers of the edge generator; new-side
    words in the two child generators must move the complement E_z off
    itself under the same exclusion.
    """
    if params is None:
        params = CertificateParams(
            margin_floor=rep.margin_floor, identity_tol=rep.identity_tol
        )
    if not 2 <= level <= rep.depth:
        raise ValueError("level must be between 2 and the table depth")
    tol = params.identity_tol
    stage = tree.vertices_at_depth(level - 1)
    edge_order = 3 + (level - 1)
    B: dict[tree.Address, OrientedDisk] = {}
    powers: dict[tree.Address, list[MoebiusMap]] = {}
    for z in stage:
        entry = rep.vertices[z]
        B[z] = OrientedDisk.around(entry.combination_circle, edge_alpha(rep, z))
        powers[z] = _edge_power_table(rep.matrix(z), edge_order)

    min_margin = math.inf
    failures = []

    def require(tag, word, z, margin, ok):
        nonlocal min_margin
        min_margin = min(min_margin, margin)
        if not ok or margin < params.margin_floor:
            failures.append(
                {
                    "side": tag,
                    "word": word,
                    "vertex": tree.addr_to_str(z),
                    "margin": margin,
                }
            )

    # pairwise disjointness (the identity word of the old side)
    for i, z in enumerate(stage):
        for z2 in stage[i + 1 :]:
            ok, margin = disks_disjoint(B[z], B[z2])
            require("old", "1", z2, margin, ok)

    old_letters = [
        (tree.gen_name(v), m)
        for v, m in sorted(rep.generator_matrices(level - 1).items())
    ]
    for label, g in word_ball(old_letters, params.word_radius_old):
        moved = {z: disk_image(g, B[z]) for z in stage}
        for z in stage:
            if _is_edge_power(g, powers[z], tol):
                continue
            ok, margin = disks_disjoint(moved[z], B[z])
            require("old", label, z, margin, ok)
            for z2 in stage:
                if z2 == z:
                    continue
                ok, margin = disks_disjoint(moved[z], B[z2])
                require("old", label, z2, margin, ok)

    # New-side words are evaluated in the vertex's standard frame, where
    # the triangle generators have order-one entries and the edge powers
    # are exact diagonal rotations; each image disk is moved to the global
    # frame once.  Products of the stored global matrices would drown the
    # membership comparison in conditioning noise at depth.
    for z in stage:
        c1, c2 = tree.children(z)
        W, theta, L = vertex_standard_frame(rep, z)
        g1s, g2s, _, _ = standard_qqp_generators(4 + tree.depth(z), edge_order, theta)
        rot_powers = [
            MoebiusMap(
                cmath.exp(1j * j * theta / 2.0), 0, 0, cmath.exp(-1j * j * theta / 2.0)
            )
            for j in range(edge_order)
        ]
        new_letters = [(tree.gen_name(c1), g1s), (tree.gen_name(c2), g2s)]
        E = B[z].complement()
        E_std = OrientedDisk(
            GeneralizedCircle.from_center_radius(0j, math.exp(L / 2.0)), -1
        )
        for label, h in word_ball(new_letters, params.word_radius_new):
            if _is_edge_power(h, rot_powers, tol):
                continue
            img = disk_image(W, disk_image(h, E_std))
            ok, margin = disks_disjoint(img, E)
            require("new", label, z, margin, ok)

    if min_margin is math.inf:
        min_margin = 0.0
    return {
        "check": f"precise-invariance-level-{level}",
        "pass": not failures,
        "min_margin": min_margin,
        "failures": failures[:50],
    }


def check_separation_words(
    rep: RepTable, samples: int, syllables: int, seed: int
) -> dict:
    """Certified-nontrivial words must evaluate far from the identity."""
    matrices = rep.generator_matrices()
    words = tree.sample_alternating_words(rep.depth, samples, syllables, seed)
    min_sep = math.inf
    failures = []
    for w in words:
        sep = projective_distance(evaluate_word(w, matrices), IDENTITY)
        min_sep = min(min_sep, sep)
        if sep < rep.identity_tol:
            failures.append({"word": str(w), "separation": sep})
    if min_sep is math.inf:
        min_sep = 0.0
    return {
        "check": "separation-words",
        "pass": not failures,
        "samples": len(words),
        "min_margin": min_sep,
        "failures": failures,
    }


def _random_words(rng, letters, count, max_len):
    """Random nonempty products over letters and inverses, immediate-cancel free."""
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        codes = []
        while len(codes) < length:
            c = int(rng.integers(0, 2 * len(letters)))
            if codes and c == codes[-1] ^ 1:
                continue
            codes.append(c)
        m = IDENTITY
        for c in codes:
            base = letters[c // 2]
            m = m @ (base if c % 2 == 0 else base.inverse())
        out.append(m)
    return out


def jorgensen_scan(rep: RepTable, pair_count: int, seed: int, max_len: int = 4) -> dict:
    """Necessary-condition falsifier on sampled two-generator subgroups.

    For pairs (A, B) of sampled words whose fixed-point sets are separated
    by at least 1e-6 (chordal), a value |tr^2 A - 4| + |tr [A,B] - 2| below
    1 - 1e-9 certifies that the pair generates a non-discrete or degenerate
    group, i.e. a construction bug.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    letters = [m for _, m in sorted(rep.generator_matrices().items())]
    words_a = _random_words(rng, letters, pair_count, max_len)
    words_b = _random_words(rng, letters, pair_count, max_len)
    violations = []
    tested = 0
    for A, bmat in zip(words_a, words_b):
        value = jorgensen_value(A, bmat)
        if value is None:
            continue
        tested += 1
        if value < 1.0 - 1e-9:
            violations.append({"value": value})
    return {
        "check": "jorgensen",
        "pass": not violations,
        "pairs_tested": tested,
        "min_margin": 0.0 if violations else 1.0,
        "failures": violations,
    }


def jorgensen_value(A: MoebiusMap, B: MoebiusMap) -> float | None:
    """The scan value for one pair, or None if the pair is filtered out."""
    if is_identity(A) or is_identity(B):
        return None
    fa = fixed_points(A)
    fb = fixed_points(B)
    if min(chordal(p, q) for p in fa for q in fb) < 1e-6:
        return None
    comm = A @ B @ A.inverse() @ B.inverse()
    return abs(A.trace**2 - 4.0) + abs(comm.trace - 2.0)


def quotient_experiment(
    n_max: int, catalog: list[FiniteGroup], space_guard: int = 10**9
) -> list[dict]:
    """Hom counts from the leaf presentations into every catalog group.

    Consistency: whenever gcd(3 + n, |H|) = 1 the count of nontrivial
    homomorphisms must be zero.
    """
    rows = []
    for n in range(1, n_max + 1):
        pres = tree.presentation_leaf(n)
        for H in catalog:
            if H.order ** len(pres.generators) > space_guard:
                raise ValueError(
                    f"search space {H.order}^{len(pres.generators)} exceeds the guard"
                )
            homs = enumerate_homs(pres, H)
            nontrivial = sum(1 for phi in homs if not phi.is_trivial())
            coprime = gcd(3 + n, H.order) == 1
            rows.append(
                {
                    "n": n,
                    "group": H.name,
                    "order": H.order,
                    "hom_count": len(homs),
                    "nontrivial_count": nontrivial,
                    "gcd_flag": coprime,
                    "consistent": (not coprime) or nontrivial == 0,
                }
            )
    return rows


def _limit_seed_point(gens: list[MoebiusMap]) -> complex:
    """A fixed point of some non-elliptic word: a point of the limit set."""
    candidates = []
    for i, g in enumerate(gens):
        for j, h in enumerate(gens):
            if i != j:
                candidates.extend([g @ h, g @ h.inverse()])
    for w in candidates:
        kind = classify(w).kind
        if kind in ("parabolic", "loxodromic"):
            return fixed_points(w)[0]
    raise ValueError("no non-elliptic word found among short products")


def limit_points(
    rep: RepTable,
    target: tree.Address | None,
    count: int,
    word_len: int,
    seed: int,
) -> dict:
    """Orbit samples of the limit set of the whole group or a vertex group.

    Vertex targets also report the maximum distance from the samples to the
    stored boundary circle of that vertex.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if target is None:
        gens = [m for _, m in sorted(rep.generator_matrices().items())]
        circle = None
    else:
        entry = rep.vertices.get(target)
        if entry is None or entry.plane_circle is None:
            raise ValueError("vertex group is not realized in this table")
        circle = entry.plane_circle
        if target == tree.ROOT:
            gens = [rep.matrix((1,)), rep.matrix((2,))]
        else:
            c1, c2 = tree.children(target)
            gens = [rep.matrix(target), rep.matrix(c1), rep.matrix(c2)]
    points: list[complex] = []
    max_dist = 0.0
    if count > 0:
        base = _limit_seed_point(gens)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        n_letters = 2 * len(gens)
        for _ in range(count):
            m = IDENTITY
            prev = None
            steps = 0
            while steps < word_len:
                c = int(rng.integers(0, n_letters))
                if prev is not None and c == prev ^ 1:
                    continue
                g = gens[c // 2]
                m = m @ (g if c % 2 == 0 else g.inverse())
                prev = c
                steps += 1
            z = m(base)
            points.append(z)
            if circle is not None and not is_inf(z):
                max_dist = max(max_dist, circle.distance_to(z))
    return {
        "check": "limit-points",
        "pass": True if circle is None else max_dist <= 1e-3,
        "count": len(points),
        "points": points,
        "max_circle_distance": None if circle is None else max_dist,
        "min_margin": 0.0 if circle is None else 1e-3 - max_dist,
        "failures": [],
    }


def full_certificate(
    rep: RepTable,
    params: CertificateParams,
    samples: int = 500,
    syllables: int = 8,
    seed: int = 7,
    jorgensen_pairs: int = 10000,
) -> list[dict]:
    """The whole battery, one report per check."""
    reports = [check_relators(rep, params.identity_tol)]
    reports.append(check_nesting(rep, params.margin_floor))
    for level in range(2, rep.depth + 1):
        reports.append(check_precise_invariance(rep, level, params))
    reports.append(check_separation_words(rep, samples, syllables, seed))
    reports.append(jorgensen_scan(rep, jorgensen_pairs, seed))
    for v, entry in sorted(rep.vertices.items()):
        if entry.plane_circle is None:
            continue
        report = dict(limit_points(rep, v, 2000, 30, seed))
        report["check"] = f"limit-points-{tree.addr_to_str(v) or 'root'}"
        del report["points"]
        reports.append(report)
    return reports
