"""Depth-k equivalence of forests and definiteness of homomorphisms.

Two forests are k-equivalent when their top k levels agree up to the
idempotent-and-commutative rewriting; the canonical key is the normal form
of the depth-k truncation.  An equivalent recursive characterization via
nested sets of (letter, class) pairs is implemented independently and used
as a cross-check.

A homomorphism is k-definite when the image of p.s does not depend on s for
any context p with its hole at depth at least k.  This is decided on the
semigroup of guarded-context actions, generated by the maps
h -> g + letter.h.
"""

from dataclasses import dataclass

from . import terms
from .algebra import close_vertical, horizontal_monoid
from .errors import SizeLimitError
from .hom import Homomorphism, image_restrict

DEFAULT_MAX_CLASSES = 4096


@dataclass(frozen=True)
class SimkKey:
    k: int
    key: tuple

    def __str__(self):
        return "~%d:%s" % (self.k, terms.print_forest(self.key))


def simk_key(forest, k):
    return SimkKey(k, terms.ic_normalize(terms.truncate(forest, k)))


def simk_equiv(s, t, k):
    return simk_key(s, k) == simk_key(t, k)


def simk_tset(forest, k):
    """Recursive class of a forest: nested sets of (letter, child class).

    Independent of the truncation-based key; the two must classify
    identically.
    """
    if k <= 0:
        return None
    return frozenset((label, simk_tset(children, k - 1))
                     for label, children in forest)


# ---------------------------------------------------------------------------
# Free k-definite algebra

def key_sum(c1, c2):
    return terms.ic_normalize(c1 + c2)


def key_letter(label, c, k):
    if k <= 0:
        return ()
    return terms.ic_normalize((terms.tree(label, terms.truncate(c, k - 1)),))


class KdefEvaluator:
    """Evaluates forests to their canonical depth-k keys, without building
    the quotient algebra; accepts any letters."""

    def __init__(self, k):
        self.k = k

    def zero_state(self):
        return ()

    def plus_state(self, x, y):
        return key_sum(x, y)

    def letter_action(self, a, x):
        return key_letter(a, x, self.k)


def free_kdefinite(alphabet, k, max_classes=DEFAULT_MAX_CLASSES,
                   max_vertical=None):
    """The quotient by depth-k equivalence, with the canonical homomorphism.

    Horizontal elements are the canonical keys; every key is reachable from
    the empty forest by letters and sums, so a worklist closure enumerates
    exactly the classes.  The vertical monoid is materialized, so this is
    desk scale only; factoring tests at larger sizes go through
    KdefEvaluator instead.
    """
    alphabet = tuple(sorted(set(alphabet), key=terms.label_key))
    keys = [()]
    index = {(): 0}

    def intern(key):
        if key not in index:
            if len(keys) >= max_classes:
                raise SizeLimitError("depth-%d classes" % k, max_classes)
            index[key] = len(keys)
            keys.append(key)
        return index[key]

    frontier = [()]
    while frontier:
        new = []
        for c in frontier:
            for a in alphabet:
                nk = key_letter(a, c, k)
                if nk not in index:
                    intern(nk)
                    new.append(nk)
            for c2 in list(keys):
                nk = key_sum(c, c2)
                if nk not in index:
                    intern(nk)
                    new.append(nk)
        frontier = new

    n = len(keys)
    plus = [[index[key_sum(keys[i], keys[j])] for j in range(n)] for i in range(n)]
    H = horizontal_monoid(plus, 0)
    gens = {}
    for a in alphabet:
        gens[terms.print_label(a)] = tuple(index[key_letter(a, keys[i], k)]
                                           for i in range(n))
    if max_vertical is None:
        alg, genmap = close_vertical(H, gens, add_insertions=True, faithful=True,
                                     warn_on_merge=False)
    else:
        alg, genmap = close_vertical(H, gens, add_insertions=True, faithful=True,
                                     warn_on_merge=False, max_vertical=max_vertical)
    assign = {a: genmap[terms.print_label(a)] for a in alphabet}
    hom = Homomorphism(alphabet, alg, assign)
    hom.keys = tuple(keys)
    return alg, hom


def alpha1(alphabet):
    """The canonical 1-definite homomorphism; values are root-label sets."""
    return free_kdefinite(alphabet, 1)[1]


# ---------------------------------------------------------------------------
# Guarded-context semigroup and definiteness degree

def guarded_semigroup(hom):
    """Closure of the guarded depth-1 actions h -> g + letter.h.

    Every guarded context factors into depth-1 pieces t + a[] + t', whose
    action is exactly such a generator, so the closure is the full image of
    the guarded contexts.  Rows act on the image algebra, so the result is
    faithful by construction.
    """
    alg = hom.target
    n = alg.H.size
    gens = set()
    for a in sorted(set(hom.alphabet), key=terms.label_key):
        row = alg.action[hom.letter(a)]
        for g in range(n):
            gens.add(tuple(alg.plus(g, row[h]) for h in range(n)))
    elems = set(gens)
    frontier = list(gens)
    while frontier:
        new = []
        for rb in frontier:
            for ra in gens:
                comp = tuple(ra[x] for x in rb)
                if comp not in elems:
                    elems.add(comp)
                    new.append(comp)
        frontier = new
    return sorted(elems)


def _absorbs_right(products, semigroup):
    return all(tuple(p[x] for x in s) == p for p in products for s in semigroup)


def definiteness_degree(alpha):
    """Least k such that alpha is k-definite, or None.

    Follows the descending chain of length-j product sets of the guarded
    semigroup; the chain stabilizes within |S| steps, and the degree exists
    exactly when the stable set absorbs right multiplication.
    """
    hom = image_restrict(alpha)
    if hom.target.H.size == 1:
        return 0
    S = guarded_semigroup(hom)
    products = set(S)
    for k in range(1, len(S) + 2):
        if _absorbs_right(products, S):
            return k
        nxt = {tuple(p[x] for x in s) for p in products for s in S}
        if nxt == products:
            return None
        products = nxt
    return None


def ex_definable_by_idempotents(alpha, transposed=False):
    """Finite-semigroup shortcut for "k-definite for some k".

    The sound criterion is that every idempotent absorbs on the right
    (e.s = e for all s).  The transposed variant (e.s = s) is exposed for
    comparison only; it tests a different property.
    """
    hom = image_restrict(alpha)
    if hom.target.H.size == 1:
        return True
    S = guarded_semigroup(hom)
    for e in S:
        if tuple(e[x] for x in e) != e:
            continue
        for s in S:
            got = tuple(e[x] for x in s)
            want = s if transposed else e
            if got != want:
                return False
    return True


def definiteness_oracle(alpha, k, depth_bound=3, fill_depth=2, fill_width=2):
    """Exhaustive bounded check that contexts of depth >= k hide their argument.

    Enumerates contexts with hole depth between k and depth_bound, sibling
    material along the spine drawn from the depth-1 canonical forests and
    hole arguments from all canonical forests within the fill bounds, and
    compares alpha(p.s) against alpha(p.0) for every such s.  Desk scale
    only; agrees with definiteness_degree on the tested range.
    """
    from .oracle import enumerate_forests

    alphabet = tuple(sorted(set(alpha.alphabet), key=terms.label_key))
    args = list(enumerate_forests(alphabet, fill_depth, fill_width))
    spine = list(enumerate_forests(alphabet, 1, fill_width))
    hole = (terms.tree(terms.HOLE),)

    def contexts(d):
        if d == 0:
            for f in spine:
                yield hole + f
            return
        for a in alphabet:
            for c in contexts(d - 1):
                for f in spine:
                    yield (terms.tree(a, c),) + f

    for d in range(k, depth_bound + 1):
        for p in contexts(d):
            base = alpha.eval(terms.apply(p, ()))
            for s in args:
                if alpha.eval(terms.apply(p, s)) != base:
                    return False
    return True
