"""Joint-value closures over anything that evaluates forests compositionally.

An evaluator exposes zero_state(), plus_state(x, y) and letter_action(a, x);
forests evaluate bottom-up through these three operations, so the exact set
of joint values of two evaluators is the least set containing the pair of
zeros that is closed under letters and componentwise sums.  Cascades already
implement the protocol; homomorphisms and depth-k keys get small wrappers,
and tensoring is an evaluator combinator.  None of this materializes a
vertical monoid, which is what makes mutual-factoring checks cheap even when
the corresponding algebras would be enormous.
"""

from .errors import SizeLimitError

DEFAULT_MAX_JOINT = 500_000


class HomEvaluator:
    def __init__(self, hom):
        self.hom = hom
        self.alg = hom.target

    def zero_state(self):
        return self.alg.zero

    def plus_state(self, x, y):
        return self.alg.plus(x, y)

    def letter_action(self, a, x):
        return self.alg.act(self.hom.letter(a), x)


class TensorEvaluator:
    """The pairing (first value, second value of the relabeled forest).

    ``view(a, x1)`` produces the letter handed to the second evaluator at a
    node labeled a whose descendants have first value x1; the default tags
    with the first target's element name, matching relabeled().
    """

    def __init__(self, first, second, view=None):
        if view is None:
            alg = first.target
            view = lambda a, x1: (a, alg.hname(x1))
            first = HomEvaluator(first)
        self.first = first
        self.second = second
        self.view = view

    def zero_state(self):
        return (self.first.zero_state(), self.second.zero_state())

    def plus_state(self, x, y):
        return (self.first.plus_state(x[0], y[0]),
                self.second.plus_state(x[1], y[1]))

    def letter_action(self, a, x):
        return (self.first.letter_action(a, x[0]),
                self.second.letter_action(self.view(a, x[0]), x[1]))


def evaluate(ev, forest):
    state = ev.zero_state()
    for label, children in forest:
        state = ev.plus_state(state, ev.letter_action(label, evaluate(ev, children)))
    return state


def joint_image(e1, e2, alphabet, max_pairs=DEFAULT_MAX_JOINT):
    """Exact set {(value of s under e1, value under e2) : s any forest}."""
    start = (e1.zero_state(), e2.zero_state())
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for (x, y) in frontier:
            for a in alphabet:
                p = (e1.letter_action(a, x), e2.letter_action(a, y))
                if p not in seen:
                    if len(seen) >= max_pairs:
                        raise SizeLimitError("joint image", max_pairs)
                    seen.add(p)
                    new.append(p)
            for (u, w) in list(seen):
                p = (e1.plus_state(x, u), e2.plus_state(y, w))
                if p not in seen:
                    if len(seen) >= max_pairs:
                        raise SizeLimitError("joint image", max_pairs)
                    seen.add(p)
                    new.append(p)
        frontier = new
    return seen


def determines(e1, e2, alphabet, max_pairs=DEFAULT_MAX_JOINT):
    """Does the e1 value of a forest determine its e2 value?  Exact."""
    mapping = {}
    for (x, y) in joint_image(e1, e2, alphabet, max_pairs):
        if x in mapping and mapping[x] != y:
            return False, (x, mapping[x], y)
        mapping[x] = y
    return True, None


def mutually_determine(e1, e2, alphabet, max_pairs=DEFAULT_MAX_JOINT):
    pairs = joint_image(e1, e2, alphabet, max_pairs)
    forward, backward = {}, {}
    for (x, y) in pairs:
        if forward.setdefault(x, y) != y:
            return False
        if backward.setdefault(y, x) != x:
            return False
    return True
