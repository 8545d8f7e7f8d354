"""Independent exact computations used to cross-check the main algorithms.

Two routes to the same facts:

  * tagged_class_closure materializes every pair (value of s, canonical
    depth-k key of the tagged relabeling of s).  It is exact because both
    coordinates are compositional under letters and concatenation, but the
    key universe grows exponentially with k, so it carries a hard cap.

  * brute_confused_pairs avoids keys entirely.  All forests in one class
    split into groups by root kind (tagged letter plus child class), and
    within a kind the achievable values are the nonempty sum closure of one
    letter-image set; classes therefore matter only through their value
    sets, which live in the powerset of H.  Recursing on value sets gives
    the exact confused-pair relation in polynomial time, independently of
    the pair fixpoint it validates.
"""

import random
from dataclasses import dataclass

from . import terms
from .defk import key_letter, key_sum
from .errors import SizeLimitError
from .reach import class_tag_names, reachability

DEFAULT_MAX_PAIRS = 200_000


@dataclass
class TaggedClassClosure:
    class_index: int
    k: int
    pairs: frozenset       # (horizontal index, canonical key)
    tag_names: tuple       # horizontal index -> tag label used in keys

    def values_by_key(self):
        out = {}
        for h, key in self.pairs:
            out.setdefault(key, set()).add(h)
        return out


def tagged_class_closure(alpha, ci, k, rs=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Exact set {(alpha(s), depth-k class of s relabeled through the strict
    quotient at the class) : s any forest}.

    A letter step tags the new root with the quotient value of the old
    forest, so elements of the class itself are tagged with the collapsed
    element and stay anonymous.  Exponential in k; desk scale only.
    """
    alg = alpha.target
    if rs is None:
        rs = reachability(alg)
    tag_names = class_tag_names(alpha, ci, rs)
    letters = [(a, alg.action[alpha.letter(a)])
               for a in sorted(set(alpha.alphabet), key=terms.label_key)]

    start = (alg.zero, ())
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for (h, key) in frontier:
            for a, row in letters:
                p = (row[h], key_letter((a, tag_names[h]), key, k))
                if p not in seen:
                    if len(seen) >= max_pairs:
                        raise SizeLimitError("tagged class closure", max_pairs)
                    seen.add(p)
                    new.append(p)
            for (g, key2) in list(seen):
                p = (alg.plus(h, g), key_sum(key, key2))
                if p not in seen:
                    if len(seen) >= max_pairs:
                        raise SizeLimitError("tagged class closure", max_pairs)
                    seen.add(p)
                    new.append(p)
        frontier = new
    return TaggedClassClosure(ci, k, frozenset(seen), tag_names)


# ---------------------------------------------------------------------------
# Value-set recursion

def _image(alpha):
    alg = alpha.target
    letters = [alg.action[alpha.letter(a)] for a in set(alpha.alphabet)]
    seen = {alg.zero}
    frontier = [alg.zero]
    while frontier:
        new = []
        for h in frontier:
            for row in letters:
                if row[h] not in seen:
                    seen.add(row[h])
                    new.append(row[h])
            for g in list(seen):
                x = alg.plus(h, g)
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        frontier = new
    return frozenset(seen)


def _plus_closure(alg, values):
    """Nonempty-sum closure of a set of horizontal elements."""
    out = set(values)
    frontier = list(values)
    while frontier:
        new = []
        for x in frontier:
            for y in list(out):
                z = alg.plus(x, y)
                if z not in out:
                    out.add(z)
                    new.append(z)
        frontier = new
    return frozenset(out)


def _pointwise_sum(alg, ws1, ws2):
    return frozenset(alg.plus(x, y) for x in ws1 for y in ws2)


def _kind_contributions(alpha, tag_names, class_value_sets):
    """For each realizable root kind, the value set of a nonempty group of
    its copies: the sum closure of {letter applied to a matching child}."""
    alg = alpha.target
    out = set()
    for w in class_value_sets:
        by_tag = {}
        for h in w:
            by_tag.setdefault(tag_names[h], set()).add(h)
        for a in set(alpha.alphabet):
            row = alg.action[alpha.letter(a)]
            for tag, members in by_tag.items():
                out.add(_plus_closure(alg, {row[h] for h in members}))
    return out


def _class_value_sets(alpha, tag_names, k):
    """Value sets of the realizable depth-k classes of tagged relabelings.

    Level 0 has a single class holding the whole image; a level j+1 class
    is a set of kinds and its value set the pointwise sum of one nonempty
    contribution per kind.  Only the collection of distinct value sets is
    kept, which is sound: equal value sets admit the same realizations.
    """
    alg = alpha.target
    sets = {_image(alpha)}
    for _ in range(k):
        kinds = _kind_contributions(alpha, tag_names, sets)
        closed = set(kinds)
        frontier = list(kinds)
        while frontier:
            new = []
            for w in frontier:
                for w2 in kinds:
                    ws = _pointwise_sum(alg, w, w2)
                    if ws not in closed:
                        closed.add(ws)
                        new.append(ws)
            frontier = new
        sets = closed | {frozenset({alg.zero})}
    return sets


def brute_confused_pairs(alpha, ci, k, rs=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Exact distinct same-class value pairs realized by depth-k equivalent
    tagged forests, by the value-set recursion."""
    alg = alpha.target
    if rs is None:
        rs = reachability(alg)
    members = set(rs.classes[ci])
    tag_names = class_tag_names(alpha, ci, rs)
    if k <= 0:
        image = _image(alpha)
        return {(h, g) for h in image & members for g in image & members
                if h != g}
    level_sets = _class_value_sets(alpha, tag_names, k - 1)
    kinds = _kind_contributions(alpha, tag_names, level_sets)
    pairs = set()
    for w in kinds:
        pairs |= {(x, y) for x in w for y in w}
    frontier = list(pairs)
    while frontier:
        new = []
        for (x, y) in frontier:
            for (u, v) in list(pairs):
                p = (alg.plus(x, u), alg.plus(y, v))
                if p not in pairs:
                    pairs.add(p)
                    new.append(p)
        frontier = new
    pairs.add((alg.zero, alg.zero))
    return {(h, g) for (h, g) in pairs
            if h != g and h in members and g in members}


def key_value_sets(alpha, ci, k, keys, rs=None):
    """Exact value sets {alpha(s) : tagged class of s is the key}, for the
    given concrete keys, by the same group decomposition."""
    alg = alpha.target
    if rs is None:
        rs = reachability(alg)
    tag_names = class_tag_names(alpha, ci, rs)
    image = _image(alpha)
    cache = {}

    def values(key, j):
        if j <= 0:
            return image
        if key == ():
            return frozenset({alg.zero})
        got = cache.get((key, j))
        if got is not None:
            return got
        total = None
        for (label, child_key) in key:
            a, tag = label
            row = alg.action[alpha.letter(a)]
            child = values(terms.ic_normalize(child_key), j - 1)
            contribution = _plus_closure(
                alg, {row[h] for h in child if tag_names[h] == tag})
            if total is None:
                total = contribution
            else:
                total = _pointwise_sum(alg, total, contribution)
            if not total:
                break
        total = frozenset(total or ())
        cache[(key, j)] = total
        return total

    return {key: values(terms.ic_normalize(key), k) for key in keys}


# ---------------------------------------------------------------------------
# Forest enumeration and sampling

def enumerate_forests(alphabet, max_depth, max_width):
    """All canonical forests within the bounds, in a fixed order.

    Canonical means sibling lists are strictly increasing, so each
    idempotent-and-commutative class appears exactly once.
    """
    alphabet = tuple(sorted(set(alphabet), key=terms.label_key))

    def forests(depth):
        if depth <= 0:
            return [()]
        trees = [terms.tree(a, f) for a in alphabet for f in forests(depth - 1)]
        trees.sort(key=terms.tree_key)
        out = [()]
        for t in trees:
            out = out + [f + (t,) for f in out if len(f) < max_width]
        return out

    return iter(forests(max_depth))


def random_forest(rng, alphabet, max_depth, max_width):
    """An arbitrary ordered forest; duplicates and any sibling order allowed."""
    alphabet = tuple(alphabet)
    if max_depth <= 0:
        return ()
    width = rng.randint(0, max_width)
    return tuple(
        terms.tree(rng.choice(alphabet),
                   random_forest(rng, alphabet, max_depth - 1, max_width))
        for _ in range(width)
    )


def random_forests(seed, count, alphabet, max_depth, max_width):
    rng = random.Random(seed)
    return [random_forest(rng, alphabet, max_depth, max_width)
            for _ in range(count)]
