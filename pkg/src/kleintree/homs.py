"""Exhaustive enumeration of homomorphisms from a presentation to a finite group.

Depth-first search over generator images.  Pure power relators g^k act as
candidate filters before branching; every other relator is checked at the
first point all of its generators are assigned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from kleintree.finite_groups import FiniteGroup, element_order
from kleintree.words import Presentation, Word, reduce_word


@dataclass(frozen=True)
class Homomorphism:
    """Images of the presentation generators in the target group."""

    target: FiniteGroup
    generators: tuple[str, ...]
    images: tuple[int, ...]

    def image_of(self, gen: str) -> int:
        return self.images[self.generators.index(gen)]

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.images)

    def validates(self, pres: Presentation) -> bool:
        imgs = dict(zip(self.generators, self.images))
        return all(evaluate_in_group(self.target, r, imgs) == 0 for r in pres.relators)


def evaluate(w: Word, phi: Homomorphism) -> int:
    """Image of the word under the homomorphism."""
    return evaluate_in_group(phi.target, w, dict(zip(phi.generators, phi.images)))


def evaluate_in_group(H: FiniteGroup, w: Word, images: dict[str, int]) -> int:
    x = 0
    for gen, exp in w.syllables:
        if gen not in images:
            raise ValueError(f"no image for generator {gen!r}")
        x = H.mul(x, H.power(images[gen], exp))
    return x


def enumerate_homs(P: Presentation, H: FiniteGroup) -> list[Homomorphism]:
    gens = P.generators
    gen_index = {g: i for i, g in enumerate(gens)}
    n = len(gens)

    # compile relators to (gen_index, exp) syllables and find when checkable
    compiled = []
    power_filters: dict[int, list[int]] = {}
    for rel in P.relators:
        r = reduce_word(rel)
        if r.is_empty():
            continue
        syl = tuple((gen_index[g], e) for g, e in r.syllables)
        if len(syl) == 1:
            power_filters.setdefault(syl[0][0], []).append(abs(syl[0][1]))
        else:
            compiled.append(syl)

    orders = H.element_orders()
    inverse = [H.inv(x) for x in H.elements()]

    def pow_elem(x: int, e: int) -> int:
        if e < 0:
            x, e = inverse[x], -e
        y = 0
        for _ in range(e % orders[x]):
            y = H.table[y][x]
        return y

    candidates = []
    for i in range(n):
        cand = list(H.elements())
        for k in power_filters.get(i, []):
            cand = [x for x in cand if pow_elem(x, k) == 0]
        candidates.append(cand)

    # relators become checkable once their highest-index generator is set
    due: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in range(n)]
    for syl in compiled:
        due[max(i for i, _ in syl)].append(syl)

    def word_value(syl, images) -> int:
        x = 0
        for i, e in syl:
            x = H.table[x][pow_elem(images[i], e)]
        return x

    homs: list[Homomorphism] = []
    images = [0] * n

    def search(pos: int):
        if pos == n:
            homs.append(Homomorphism(H, gens, tuple(images)))
            return
        for x in candidates[pos]:
            images[pos] = x
            if all(word_value(syl, images) == 0 for syl in due[pos]):
                search(pos + 1)

    search(0)
    return homs


def count_homs_brute_force(P: Presentation, H: FiniteGroup) -> int:
    """Unpruned oracle: try every assignment.  Keep |H|^#gens small."""
    total = H.order ** len(P.generators)
    if total > 10**6:
        raise ValueError(f"brute-force space {total} too large")
    count = 0
    for assignment in itertools.product(H.elements(), repeat=len(P.generators)):
        images = dict(zip(P.generators, assignment))
        if all(evaluate_in_group(H, r, images) == 0 for r in P.relators):
            count += 1
    return count
