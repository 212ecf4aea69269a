"""Binary-tree addressing and the presentations of the truncated tree groups.

A vertex address is a tuple over {1, 2}; the root is the empty tuple and
carries no generator.  The generator at vertex v has order 3 + depth(v),
and the defining product rule is g_v = g_{v.2} g_{v.1}.  Truncation level n
uses generators of depth 1..n; the leaf view rewrites everything over the
2^n deepest generators.
"""

from __future__ import annotations

import numpy as np

from kleintree.words import Presentation, Word, commutator, reduce_word

Address = tuple[int, ...]

ROOT: Address = ()


def addr_to_str(v: Address) -> str:
    return "".join(str(d) for d in v)


def str_to_addr(s: str) -> Address:
    if not all(ch in "12" for ch in s):
        raise ValueError(f"bad address string {s!r}")
    return tuple(int(ch) for ch in s)


def gen_name(v: Address) -> str:
    if not v:
        raise ValueError("the root carries no generator")
    return "g" + addr_to_str(v)


def addr_of_gen(name: str) -> Address:
    if not name.startswith("g"):
        raise ValueError(f"not a vertex generator name: {name!r}")
    return str_to_addr(name[1:])


def depth(v: Address) -> int:
    return len(v)


def parent(v: Address) -> Address:
    if not v:
        raise ValueError("the root has no parent")
    return v[:-1]


def children(v: Address) -> tuple[Address, Address]:
    return v + (1,), v + (2,)


def vertices_at_depth(d: int) -> list[Address]:
    import itertools

    return [tuple(p) for p in itertools.product((1, 2), repeat=d)]


def generator_order(v: Address) -> int:
    """Order 3 + depth of the generator indexed by vertex v."""
    if not v:
        raise ValueError("the root carries no generator")
    return 3 + depth(v)


def presentation_full(n: int) -> Presentation:
    """Generators at depths 1..n; order relators plus the product rules."""
    if n < 1:
        raise ValueError("level must be >= 1")
    gens = []
    relators = []
    for d in range(1, n + 1):
        for v in vertices_at_depth(d):
            gens.append(gen_name(v))
            relators.append(Word.gen(gen_name(v), generator_order(v)))
    for d in range(1, n):
        for v in vertices_at_depth(d):
            c1, c2 = children(v)
            relators.append(
                Word.from_pairs(
                    [(gen_name(v), 1), (gen_name(c1), -1), (gen_name(c2), -1)]
                )
            )
    return Presentation(tuple(gens), tuple(relators))


def expand_to_level(v: Address, n: int) -> Word:
    """Rewrite g_v over the depth-n generators via g_w -> g_{w.2} g_{w.1}."""
    if not 1 <= depth(v) <= n:
        raise ValueError(f"vertex depth {depth(v)} out of range 1..{n}")
    frontier = [v]
    while depth(frontier[0]) < n:
        next_frontier = []
        for w in frontier:
            c1, c2 = children(w)
            next_frontier.extend([c2, c1])
        frontier = next_frontier
    return Word.from_pairs([(gen_name(w), 1) for w in frontier])


def presentation_leaf(n: int) -> Presentation:
    """The 2^n depth-n generators with each vertex relator rewritten over them."""
    if n < 1:
        raise ValueError("level must be >= 1")
    gens = tuple(gen_name(v) for v in vertices_at_depth(n))
    relators = []
    for d in range(1, n + 1):
        for v in vertices_at_depth(d):
            relators.append(expand_to_level(v, n) ** generator_order(v))
    return Presentation(gens, tuple(relators))


def subtree_of(v: Address) -> int:
    if not v:
        raise ValueError("the root belongs to no subtree")
    return v[0]


def word_is_alternating(w: Word, n: int) -> bool:
    """Nontriviality certificate relative to the free splitting at the root.

    True iff every syllable is a vertex generator of depth <= n raised to
    an exponent that is nonzero modulo its order, and consecutive
    syllables come from different root subtrees.
    """
    if w.is_empty():
        return False
    last_side = None
    for name, exp in w.syllables:
        v = addr_of_gen(name)
        if not 1 <= depth(v) <= n:
            return False
        if exp % generator_order(v) == 0:
            return False
        side = subtree_of(v)
        if side == last_side:
            return False
        last_side = side
    return True


def sample_alternating_words(
    n: int, count: int, max_syllables: int, seed: int
) -> list[Word]:
    """Deterministic sample of words that are nontrivial at level n.

    Each word alternates between the two root subtrees, with 1 to
    max_syllables syllables g_v^k, 1 <= k < 3 + depth(v).
    """
    if n < 1 or max_syllables < 1:
        raise ValueError("need n >= 1 and max_syllables >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    per_side = [
        [v for d in range(1, n + 1) for v in vertices_at_depth(d) if v[0] == side]
        for side in (1, 2)
    ]
    words = []
    for _ in range(count):
        syllables = int(rng.integers(1, max_syllables + 1))
        side = int(rng.integers(0, 2))
        pairs = []
        for _ in range(syllables):
            pool = per_side[side]
            v = pool[int(rng.integers(0, len(pool)))]
            k = int(rng.integers(1, generator_order(v)))
            pairs.append((gen_name(v), k))
            side = 1 - side
        words.append(Word.from_pairs(pairs))
    return words


def mn_presentation(n: int) -> tuple[Presentation, Word, Word]:
    """The one-relator family <a, b, c | b = c^n> with its kernel witness.

    Returns (presentation, witness, rewritten): the witness is [a, b]; the
    rewrite substitutes b = c^n, giving [a, c^n], which is nonempty after
    free reduction and hence nontrivial in the free group on a, c.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    pres = Presentation(
        ("a", "b", "c"),
        (Word.from_pairs([("b", 1), ("c", -n)]),),
    )
    witness = commutator(Word.gen("a"), Word.gen("b"))
    rewritten = reduce_word(commutator(Word.gen("a"), Word.gen("c", n)))
    return pres, witness, rewritten
