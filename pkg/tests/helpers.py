"""Shared fixtures and random-instance generators for the test suite."""

import random

from forestalg.algebra import close_vertical, horizontal_monoid
from forestalg.hom import Homomorphism, Recognizer
from forestalg import logic


def four_element_algebra():
    """The chain algebra 0 -a-> h1 -b-> h2 with absorbing inf, accept {inf}.

    Trivial reachability classes but fails the absorption identity:
    b.h1 + h1 = inf while b.h1 = h2.  Letter transitions: a sends 0 to h1
    and fixes h1; b sends everything below inf to h2.
    """
    plus = [
        [0, 1, 2, 3],
        [1, 1, 3, 3],
        [2, 3, 2, 3],
        [3, 3, 3, 3],
    ]
    H = horizontal_monoid(plus, 0, ["0", "h1", "h2", "inf"])
    gens = {
        "a": (1, 1, 2, 3),
        "b": (2, 2, 2, 3),
    }
    alg, genmap = close_vertical(H, gens, warn_on_merge=False)
    hom = Homomorphism(("a", "b"), alg, {"a": genmap["a"], "b": genmap["b"]})
    return Recognizer(hom, frozenset({3}))


def example_formula():
    """EX(a & !EF b) & EX(b | EF b), whose closure under EF defines the
    language recognized by four_element_algebra()."""
    return logic.parse_formula("EX(a & !EF b) & EX(b | EF b)")


def example_language_recognizer():
    psi = example_formula()
    return logic.to_recognizer(logic.Or(psi, logic.EF(psi)), ("a", "b"))


def u2_example_recognizer():
    """a acts as identity, b as constant 0, c as constant inf, onto u2."""
    from forestalg.algebra import u2

    alg = u2()
    assign = {"a": alg.V.names.index("1"),
              "b": alg.V.names.index("c0"),
              "c": alg.V.names.index("cinf")}
    hom = Homomorphism(("a", "b", "c"), alg, assign)
    return Recognizer(hom, frozenset({alg.H.names.index("inf")}))


# ---------------------------------------------------------------------------
# Random instances

def random_semilattice(rng, max_h=5):
    """A union-closed family of bit masks containing the empty set."""
    while True:
        atoms = rng.randint(1, 3)
        gens = [rng.randrange(1 << atoms) for _ in range(rng.randint(1, 4))]
        elems = {0}
        frontier = list(gens)
        while frontier:
            x = frontier.pop()
            if x in elems:
                continue
            elems.add(x)
            frontier.extend(x | y for y in list(elems))
        elems = sorted(elems)
        if len(elems) <= max_h:
            plus = [[elems.index(x | y) for y in elems] for x in elems]
            return horizontal_monoid(plus, 0)


def random_hom(rng, max_h=5, max_letters=3, max_vertical=150):
    """Insertion-closed algebra with arbitrary letter actions, onto its image."""
    from forestalg.hom import image_restrict

    while True:
        H = random_semilattice(rng, max_h)
        n = H.size
        nletters = rng.randint(1, max_letters)
        letters = tuple("abc"[:nletters])
        gens = {a: tuple(rng.randrange(n) for _ in range(n)) for a in letters}
        try:
            alg, genmap = close_vertical(H, gens, max_vertical=max_vertical,
                                         warn_on_merge=False)
        except Exception:
            continue
        hom = Homomorphism(letters, alg, {a: genmap[a] for a in letters})
        return image_restrict(hom)


def random_recognizer(rng, **kwargs):
    hom = random_hom(rng, **kwargs)
    n = hom.target.H.size
    accept = frozenset(h for h in range(n) if rng.random() < 0.4)
    return Recognizer(hom, accept)


def random_big_recognizer(rng, atoms=6, nletters=4):
    """|H| = 2^atoms union semilattice with letters h -> g | (h & m)."""
    n = 1 << atoms
    plus = [[i | j for j in range(n)] for i in range(n)]
    H = horizontal_monoid(plus, 0)
    letters = tuple(chr(ord("a") + i) for i in range(nletters))
    gens = {}
    for a in letters:
        g = rng.randrange(n)
        m = rng.randrange(n)
        gens[a] = tuple(g | (h & m) for h in range(n))
    alg, genmap = close_vertical(H, gens, warn_on_merge=False)
    hom = Homomorphism(letters, alg, {a: genmap[a] for a in letters})
    accept = frozenset(h for h in range(n) if rng.random() < 0.3)
    return Recognizer(hom, accept)


def random_formula(rng, alphabet, depth):
    """A random forest formula with modal nesting bounded by depth."""
    def tree_formula(d):
        roll = rng.random()
        if roll < 0.3:
            return logic.Letter(rng.choice(alphabet))
        return forest_formula(d)

    def forest_formula(d):
        roll = rng.random()
        if d <= 0 or roll < 0.15:
            return logic.TrueF()
        if roll < 0.35:
            return logic.Not(forest_formula(d - 1))
        if roll < 0.55:
            return logic.And(forest_formula(d - 1), forest_formula(d - 1))
        if roll < 0.7:
            return logic.Or(forest_formula(d - 1), forest_formula(d - 1))
        if roll < 0.85:
            return logic.EF(tree_formula(d - 1))
        return logic.EX(tree_formula(d - 1))

    return forest_formula(depth)
