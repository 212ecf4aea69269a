"""Small finite groups as explicit multiplication tables.

The catalog covers one representative per isomorphism class through order
12 (cyclic, abelian products, dihedral, dicyclic and A4 constructors,
deduplicated by a brute-force isomorphism search).  Orders 13-15 are also
complete; order 16 is limited to what those constructors produce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

MAX_CATALOG_ORDER = 16


@dataclass(frozen=True)
class FiniteGroup:
    """Group on elements 0..order-1 with identity 0, given by its table."""

    name: str
    order: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.order
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"{self.name}: table is not {n}x{n}")
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ValueError(f"{self.name}: element 0 is not an identity")
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise ValueError(f"{self.name}: table row is not a permutation")
        for col in zip(*self.table):
            if sorted(col) != list(range(n)):
                raise ValueError(f"{self.name}: table column is not a permutation")
        t = self.table
        for i, j, k in itertools.product(range(n), repeat=3):
            if t[t[i][j]][k] != t[i][t[j][k]]:
                raise ValueError(f"{self.name}: not associative at ({i},{j},{k})")
        # latin square + identity + associativity imply inverses exist

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(0)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        x = 0
        for _ in range(k % self._exponent_period(a)):
            x = self.table[x][a]
        return x

    def _exponent_period(self, a: int) -> int:
        return element_order(self, a)

    def elements(self) -> range:
        return range(self.order)

    def conj(self, a: int, b: int) -> int:
        """b a b^-1."""
        return self.mul(self.mul(b, a), self.inv(b))

    def commutator(self, a: int, b: int) -> int:
        """a b a^-1 b^-1."""
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def element_orders(self) -> tuple[int, ...]:
        return tuple(element_order(self, x) for x in self.elements())

    def is_abelian(self) -> bool:
        return all(
            self.table[i][j] == self.table[j][i]
            for i in range(self.order)
            for j in range(i)
        )


def element_order(H: FiniteGroup, x: int) -> int:
    """Least k >= 1 with x^k = identity."""
    if not 0 <= x < H.order:
        raise ValueError(f"element index {x} out of range")
    k, y = 1, x
    while y != 0:
        y = H.table[y][x]
        k += 1
    return k


def _table_from_op(elements, op, name):
    index = {e: i for i, e in enumerate(elements)}
    table = tuple(
        tuple(index[op(a, b)] for b in elements) for a in elements
    )
    return FiniteGroup(name, len(elements), table)


def cyclic(n: int) -> FiniteGroup:
    return _table_from_op(list(range(n)), lambda a, b: (a + b) % n, f"C{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    elements = list(itertools.product(range(G.order), range(H.order)))
    # identity (0, 0) is first
    op = lambda a, b: (G.table[a[0]][b[0]], H.table[a[1]][b[1]])
    return _table_from_op(elements, op, name or f"{G.name}x{H.name}")


def abelian(factors: list[int]) -> FiniteGroup:
    name = "x".join(f"C{k}" for k in factors)
    G = cyclic(factors[0])
    for k in factors[1:]:
        G = direct_product(G, cyclic(k))
    return FiniteGroup(name, G.order, G.table)


def dihedral(k: int) -> FiniteGroup:
    """D_k of order 2k: rotations r^i and reflections r^i s."""
    elements = [(i, j) for j in range(2) for i in range(k)]
    elements.sort(key=lambda e: (e[1], e[0]))  # (0,0) first

    def op(a, b):
        i, j = a
        m, n = b
        if j == 0:
            return ((i + m) % k, n)
        return ((i - m) % k, 1 - n)

    return _table_from_op(elements, op, f"D{k}")


def dicyclic(k: int) -> FiniteGroup:
    """Dic_k of order 4k: <a, b | a^{2k}, b^2 = a^k, b a b^-1 = a^-1>."""
    elements = [(i, j) for j in range(2) for i in range(2 * k)]

    def op(a, b):
        i, j = a
        m, n = b
        if j == 0:
            return ((i + m) % (2 * k), n)
        if n == 0:
            return ((i - m) % (2 * k), 1)
        return ((i - m + k) % (2 * k), 0)

    return _table_from_op(elements, op, f"Dic{k}")


def alternating4() -> FiniteGroup:
    perms = [p for p in itertools.permutations(range(4)) if _is_even(p)]
    perms.sort(key=lambda p: p != (0, 1, 2, 3))  # identity first

    def op(p, q):
        return tuple(p[q[i]] for i in range(4))

    return _table_from_op(perms, op, "A4")


def _is_even(p) -> bool:
    inv = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inv % 2 == 0


def find_generating_sequence(G: FiniteGroup) -> list[int]:
    """Greedy small generating sequence (empty for the trivial group)."""
    gens: list[int] = []
    closure = {0}
    while len(closure) < G.order:
        x = min(set(G.elements()) - closure)
        gens.append(x)
        closure = _close(G, gens)
    return gens


def _close(G: FiniteGroup, gens) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.table[x][g]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    """Backtracking bijection search seeded on a generating sequence of G."""
    if G.order != H.order:
        return False
    if sorted(G.element_orders()) != sorted(H.element_orders()):
        return False
    if G.is_abelian() != H.is_abelian():
        return False
    gens = find_generating_sequence(G)
    if not gens:
        return True
    # express every element of G as (previous element) * generator
    word_of: dict[int, tuple[int, int]] = {}
    seen = [0]
    seen_set = {0}
    for x in seen:
        for g in gens:
            y = G.table[x][g]
            if y not in seen_set:
                word_of[y] = (x, g)
                seen_set.add(y)
                seen.append(y)
    h_orders = H.element_orders()
    g_orders = G.element_orders()
    candidates = [
        [y for y in H.elements() if h_orders[y] == g_orders[g]] for g in gens
    ]
    for images in itertools.product(*candidates):
        phi = {0: 0}
        img = dict(zip(gens, images))
        ok = True
        for y in seen[1:]:
            x, g = word_of[y]
            phi[y] = H.table[phi[x]][img[g]]
        if len(set(phi.values())) != G.order:
            continue
        for a in G.elements():
            for b in G.elements():
                if phi[G.table[a][b]] != H.table[phi[a]][phi[b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def _abelian_factorizations(m: int, max_factor: int) -> list[list[int]]:
    """Multisets of factors >= 2 with product m, nondecreasing."""
    if m == 1:
        return [[]]
    out = []
    for k in range(2, min(m, max_factor) + 1):
        if m % k == 0:
            for rest in _abelian_factorizations(m // k, k):
                out.append(sorted(rest + [k]))
    uniq = []
    for f in out:
        if f not in uniq:
            uniq.append(f)
    return uniq


def catalog_groups(max_order: int) -> list[FiniteGroup]:
    """One representative per isomorphism class of order <= max_order.

    Complete through order 12 (and 13-15); see the module docstring for
    the order-16 caveat.
    """
    if max_order > MAX_CATALOG_ORDER:
        raise ValueError(f"catalog is capped at order {MAX_CATALOG_ORDER}")
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    catalog: list[FiniteGroup] = []
    for m in range(1, max_order + 1):
        candidates: list[FiniteGroup] = []
        if m == 1:
            candidates.append(cyclic(1))
        else:
            candidates.append(cyclic(m))
            for factors in _abelian_factorizations(m, m):
                if len(factors) >= 2:
                    candidates.append(abelian(factors))
            if m % 2 == 0 and m >= 6:
                candidates.append(dihedral(m // 2))
            if m % 4 == 0 and m >= 8:
                candidates.append(dicyclic(m // 4))
            if m == 12:
                candidates.append(alternating4())
        for cand in candidates:
            if not any(
                rep.order == cand.order and are_isomorphic(cand, rep)
                for rep in catalog
            ):
                catalog.append(cand)
    return catalog


def catalog_by_name(max_order: int) -> dict[str, FiniteGroup]:
    return {G.name: G for G in catalog_groups(max_order)}


@dataclass(frozen=True)
class CommutatorPowerReport:
    group: str
    pairs_checked: int
    failures: tuple[tuple[int, int], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def commutator_power_certificate(H: FiniteGroup) -> CommutatorPowerReport:
    """Check [A, C^|H|] = identity for every pair (A, C).

    C^|H| is the identity by Lagrange, so any failure is an implementation
    bug, not a property of H.
    """
    n = H.order
    failures = []
    for a in H.elements():
        for c in H.elements():
            c_pow = H.power(c, n)
            if H.commutator(a, c_pow) != 0:
                failures.append((a, c))
    return CommutatorPowerReport(H.name, n * n, tuple(failures))
