"""Constructive wreath decompositions, represented as cascades.

A cascade is a list of stages; stage i assigns a vertical element of its
target to each pair (letter, values of earlier stages on the node's forest
of strict descendants).  Evaluating a cascade on a forest is exactly
evaluating the tensored homomorphism into the iterated wreath product, but
the product's vertical monoid is never materialized: all factoring checks
run on the reachable joint values, which is exact.

Produced cascades:
  - EF targets: chains of the two-element algebra with constant-or-identity
    vertical maps (one stage per peeled subminimal element);
  - definiteness degree k: one group of parallel two-element stages with
    both constants per depth level, each stage watching one root label;
  - combined: the recursion peels the minimal class with a depth-k group,
    or a subminimal class with a depth-k group plus one alarm stage that
    detects collapse to the absorbing element.
"""

from dataclasses import dataclass, field

from . import terms
from .algebra import close_vertical, horizontal_monoid, u1, u2
from .decide import is_ef_algebra, nonconfusion
from .defk import definiteness_degree, key_letter, key_sum
from .errors import (AlphabetMismatchError, InternalError, NotEFAlgebra,
                     NotKDefinite, NotNonconfusing, SizeLimitError)
from .hom import Homomorphism, image_restrict
from .oracle import key_value_sets
from .reach import quotient_hom, reachability

DEFAULT_MAX_SIZE = 4096

U1_STAGE = "u1"
ONE_DEFINITE_STAGE = "one_definite"
OTHER_STAGE = "other"


@dataclass
class Stage:
    kind: str
    target: object
    prefix_len: int
    letters: dict = field(repr=False)

    def describe(self):
        return "%s stage (%s), reads %d earlier coordinates" % (
            self.kind, self.target.summary(), self.prefix_len)


class Cascade:
    def __init__(self, alphabet, max_size=DEFAULT_MAX_SIZE):
        self.alphabet = tuple(sorted(set(alphabet), key=terms.label_key))
        self.stages = []
        self.max_size = max_size
        self._states = None

    def __len__(self):
        return len(self.stages)

    def append(self, stage):
        self.stages.append(stage)
        self._states = None

    def zero_state(self):
        return tuple(st.target.zero for st in self.stages)

    def plus_state(self, x, y):
        return tuple(st.target.plus(x[i], y[i])
                     for i, st in enumerate(self.stages))

    def letter_action(self, a, state):
        out = []
        for i, st in enumerate(self.stages):
            v = st.letters[(a,) + tuple(state[:st.prefix_len])]
            out.append(st.target.act(v, state[i]))
        return tuple(out)

    def eval(self, forest):
        state = self.zero_state()
        for label, children in forest:
            state = self.plus_state(state, self.letter_action(
                label, self.eval(children)))
        return state

    def reachable_states(self):
        if self._states is not None:
            return self._states
        start = self.zero_state()
        seen = {start}
        frontier = [start]
        while frontier:
            new = []
            for x in frontier:
                for a in self.alphabet:
                    y = self.letter_action(a, x)
                    if y not in seen:
                        if len(seen) >= self.max_size:
                            raise SizeLimitError("cascade states", self.max_size)
                        seen.add(y)
                        new.append(y)
                for z in list(seen):
                    y = self.plus_state(x, z)
                    if y not in seen:
                        if len(seen) >= self.max_size:
                            raise SizeLimitError("cascade states", self.max_size)
                        seen.add(y)
                        new.append(y)
            frontier = new
        self._states = sorted(seen)
        return self._states

    def joint_image(self, hom):
        """Exact {(cascade state of s, hom value of s)} closure."""
        if tuple(sorted(set(hom.alphabet), key=terms.label_key)) != self.alphabet:
            raise AlphabetMismatchError("cascade and homomorphism alphabets differ")
        alg = hom.target
        cap = self.max_size * alg.H.size
        start = (self.zero_state(), alg.zero)
        seen = {start}
        frontier = [start]
        while frontier:
            new = []
            for (x, h) in frontier:
                for a in self.alphabet:
                    p = (self.letter_action(a, x), alg.act(hom.letter(a), h))
                    if p not in seen:
                        if len(seen) >= cap:
                            raise SizeLimitError("cascade joint image", cap)
                        seen.add(p)
                        new.append(p)
                for (y, g) in list(seen):
                    p = (self.plus_state(x, y), alg.plus(h, g))
                    if p not in seen:
                        if len(seen) >= cap:
                            raise SizeLimitError("cascade joint image", cap)
                        seen.add(p)
                        new.append(p)
            frontier = new
        return seen

    def factors(self, hom):
        """Does the cascade value determine the hom value?  Exact."""
        mapping = {}
        for state, h in sorted(self.joint_image(hom)):
            if state in mapping and mapping[state] != h:
                return False, (state, mapping[state], h)
            mapping[state] = h
        return True, None

    def factor_map(self, hom):
        mapping = {}
        for state, h in self.joint_image(hom):
            if state in mapping and mapping[state] != h:
                raise InternalError("cascade does not factor the homomorphism")
            mapping[state] = h
        return mapping

    def describe(self):
        lines = ["cascade over {%s} with %d stages"
                 % (",".join(terms.print_label(a) for a in self.alphabet),
                    len(self.stages))]
        for i, st in enumerate(self.stages):
            lines.append("  %d: %s" % (i, st.describe()))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Tensoring two homomorphisms

def tensor_cascade(alpha, beta):
    """The two-stage cascade of alpha with beta over the tagged alphabet.

    beta's letters must be pairs (a, element name of alpha's target); this
    is the alphabet produced by relabeling through alpha.
    """
    alg = alpha.target
    expected = {(a, alg.hname(h)) for a in alpha.alphabet
                for h in range(alg.H.size)}
    if set(beta.alphabet) != expected:
        raise AlphabetMismatchError(
            "second factor must be over letter/value pairs of the first")
    casc = Cascade(alpha.alphabet)
    casc.append(Stage(OTHER_STAGE, alg, 0,
                      {(a,): alpha.letter(a) for a in casc.alphabet}))
    letters = {(a, h): beta.letter((a, alg.hname(h)))
               for a in casc.alphabet for h in range(alg.H.size)}
    casc.append(Stage(OTHER_STAGE, beta.target, 1, letters))
    return casc


def wreath_compose(alpha, beta, max_size=DEFAULT_MAX_SIZE):
    """The tensored homomorphism, materialized on its generated subalgebra.

    Horizontal values are the reachable pairs (alpha value, beta value of
    the relabeling); the vertical monoid is generated by the letter actions
    and insertions.  The full wreath vertical monoid is never built.
    """
    casc = tensor_cascade(alpha, beta)
    states = casc.reachable_states()
    if len(states) > max_size:
        raise SizeLimitError("wreath composition carrier", max_size)
    pos = {s: i for i, s in enumerate(states)}
    names = ["(%s,%s)" % (alpha.target.hname(s[0]), beta.target.hname(s[1]))
             for s in states]
    plus = [[pos[casc.plus_state(x, y)] for y in states] for x in states]
    H = horizontal_monoid(plus, pos[casc.zero_state()], names)
    gens = {}
    for a in casc.alphabet:
        gens[terms.print_label(a)] = tuple(pos[casc.letter_action(a, x)]
                                           for x in states)
    alg, genmap = close_vertical(H, gens, add_insertions=True, faithful=True,
                                 warn_on_merge=False)
    assign = {a: genmap[terms.print_label(a)] for a in casc.alphabet}
    return Homomorphism(casc.alphabet, alg, assign)


# ---------------------------------------------------------------------------
# EF decomposition

def decompose_ef(alpha, max_size=DEFAULT_MAX_SIZE):
    """Chain of two-element stages factoring any map onto an EF-algebra."""
    alpha = image_restrict(alpha)
    ok, violation = is_ef_algebra(alpha.target)
    if not ok:
        raise NotEFAlgebra(violation)
    casc = Cascade(alpha.alphabet, max_size)
    _ef_rec(casc, alpha)
    ok, witness = casc.factors(alpha)
    if not ok:
        raise InternalError("EF cascade fails to factor: %r" % (witness,))
    return casc


def _ef_rec(casc, alpha):
    alg = alpha.target
    if alg.H.size == 1:
        return
    target = u1()
    one, cinf = target.one, target.V.names.index("cinf")
    if alg.H.size == 2:
        inf = alg.absorbing()
        letters = {}
        for a in casc.alphabet:
            fires = alg.act(alpha.letter(a), alg.zero) == inf
            letters[(a,)] = cinf if fires else one
        casc.append(Stage(U1_STAGE, target, 0, letters))
        return
    rs = reachability(alg)
    if len(rs.subminimal) > 1:
        for cj in rs.subminimal:
            qhom, _ = quotient_hom(alpha, cj, "weak", rs)
            _ef_rec(casc, qhom)
        return
    cj = rs.subminimal[0]
    assert len(rs.classes[cj]) == 1, "EF identities force trivial classes"
    hstar = rs.classes[cj][0]
    qhom, proj = quotient_hom(alpha, cj, "strict", rs)
    _ef_rec(casc, qhom)
    rho = casc.factor_map(qhom)
    qalg = qhom.target
    qinf = qalg.absorbing()
    back = {proj.hmap[h]: h for h in range(alg.H.size) if proj.hmap[h] != qinf}
    inf = alg.absorbing()
    prefix = len(casc.stages)
    letters = {}
    for a in casc.alphabet:
        va = alpha.letter(a)
        for state in casc.reachable_states():
            hq = rho[state]
            if hq != qinf:
                fires = alg.act(va, back[hq]) == inf
            else:
                fires = alg.act(va, hstar) == inf
            letters[(a,) + tuple(state)] = cinf if fires else one
    casc.append(Stage(U1_STAGE, target, prefix, letters))


# ---------------------------------------------------------------------------
# Depth-k groups of two-constant stages

def _class_tag_map(casc, view, k, max_size):
    """Map each reachable cascade state to the depth-k class of the viewed
    relabeling.  Functional because the group built for lower depths is
    already part of the cascade."""
    if k <= 0:
        return {s: () for s in casc.reachable_states()}
    start = (casc.zero_state(), ())
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for (x, key) in frontier:
            for a in casc.alphabet:
                p = (casc.letter_action(a, x), key_letter(view(a, x), key, k))
                if p not in seen:
                    if len(seen) >= max_size:
                        raise SizeLimitError("depth-%d tag closure" % k, max_size)
                    seen.add(p)
                    new.append(p)
            for (y, key2) in list(seen):
                p = (casc.plus_state(x, y), key_sum(key, key2))
                if p not in seen:
                    if len(seen) >= max_size:
                        raise SizeLimitError("depth-%d tag closure" % k, max_size)
                    seen.add(p)
                    new.append(p)
        frontier = new
    out = {}
    for state, key in seen:
        if state in out and out[state] != key:
            raise InternalError("cascade prefix does not determine the class tag")
        out[state] = key
    return out


def _append_kdef_group(casc, view, k, max_size):
    """Parallel two-constant stages per depth level; stage for node label c
    reports whether some root of the viewed relabeling carries c.

    A level's joint carrier is a subset of label sets, so the state space
    after the group is bounded by |states| * 2^|occurring labels|; the bound
    is checked up front, which is conservative but avoids crawling an
    exponential closure just to discover the overflow.
    """
    target = u2()
    cinf = target.V.names.index("cinf")
    c0 = target.V.names.index("c0")
    for level in range(1, k + 1):
        tags = _class_tag_map(casc, view, level - 1, max_size)
        states = casc.reachable_states()
        if level == 1:
            occurring = sorted({view(a, s) for a in casc.alphabet for s in states},
                               key=terms.label_key)

            def label_of(a, s):
                return view(a, s)
        else:
            occurring = sorted({(view(a, s), tags[s])
                                for a in casc.alphabet for s in states},
                               key=lambda c: (terms.label_key(c[0]),
                                              terms.tree_key(("r", c[1]))))

            def label_of(a, s, _tags=tags):
                return (view(a, s), _tags[s])

        if len(states) << len(occurring) > max_size:
            raise SizeLimitError(
                "depth-%d definite level carrier" % level, max_size)
        prefix = len(casc.stages)
        for c in occurring:
            letters = {}
            for a in casc.alphabet:
                for s in states:
                    letters[(a,) + tuple(s)] = cinf if label_of(a, s) == c else c0
            casc.append(Stage(ONE_DEFINITE_STAGE, target, prefix, letters))


def decompose_kdefinite(alpha, k, max_size=DEFAULT_MAX_SIZE):
    """Expand a k-definite homomorphism into two-constant stages."""
    degree = definiteness_degree(alpha)
    if degree is None or degree > k:
        raise NotKDefinite(degree, k)
    alpha = image_restrict(alpha)
    casc = Cascade(alpha.alphabet, max_size)
    _append_kdef_group(casc, lambda a, s: a, k, max_size)
    ok, witness = casc.factors(alpha)
    if not ok:
        raise InternalError("definite cascade fails to factor: %r" % (witness,))
    return casc


# ---------------------------------------------------------------------------
# Combined decomposition

def decompose_efex(alpha, max_size=DEFAULT_MAX_SIZE):
    """Cascade of two-element and two-constant stages for a nonconfusing map.

    Recursion on the horizontal size: a fat minimal class is peeled by its
    strict quotient plus a depth-k group; with the minimum trivial, several
    subminimal classes split into a product of weak quotients, and a single
    subminimal class is peeled by its strict quotient, a depth-k group, and
    one alarm stage that watches for collapse to the absorbing element.
    """
    alpha = image_restrict(alpha)
    report = nonconfusion(alpha)
    if not report.nonconfusing:
        raise NotNonconfusing(report)
    casc = Cascade(alpha.alphabet, max_size)
    _efex_rec(casc, alpha, max_size)
    ok, witness = casc.factors(alpha)
    if not ok:
        raise InternalError("combined cascade fails to factor: %r" % (witness,))
    return casc


def _quotient_view(casc, qhom):
    rho = casc.factor_map(qhom)
    qalg = qhom.target
    qinf = qalg.absorbing()
    n = len(casc.stages)

    def view(a, state):
        hq = rho[tuple(state[:n])]
        return (a, "inf" if hq == qinf else qalg.hname(hq))

    return view


def _efex_rec(casc, alpha, max_size):
    alg = alpha.target
    if alg.H.size == 1:
        return
    rs = reachability(alg)
    report = nonconfusion(alpha, rs)
    if not report.nonconfusing:
        raise InternalError("recursion reached a confusing quotient")
    minc = rs.min_class
    if len(rs.classes[minc]) > 1:
        k = report.traces[minc].k
        qhom, _ = quotient_hom(alpha, minc, "strict", rs)
        _efex_rec(casc, qhom, max_size)
        _append_kdef_group(casc, _quotient_view(casc, qhom), k, max_size)
        return
    if len(rs.subminimal) > 1:
        for cj in rs.subminimal:
            qhom, _ = quotient_hom(alpha, cj, "weak", rs)
            _efex_rec(casc, qhom, max_size)
        return
    if not rs.subminimal:
        raise InternalError("nontrivial algebra without subminimal classes")
    cj = rs.subminimal[0]
    k = max(1, report.traces[cj].k)
    qhom, proj = quotient_hom(alpha, cj, "strict", rs)
    _efex_rec(casc, qhom, max_size)
    view = _quotient_view(casc, qhom)
    _append_kdef_group(casc, view, k, max_size)
    _append_alarm_stage(casc, alpha, rs, cj, k, qhom, proj, view, max_size)


def _append_alarm_stage(casc, alpha, rs, cj, k, qhom, proj, view, max_size):
    """Two-element stage firing at nodes whose tree must map to absorbing.

    A node's children classes determine the children values: above the
    peeled class directly, inside it by nonconfusion (the unique class
    value sharing the tagged key), absorbing otherwise.  The stage fires
    when that sum, or the letter applied to it, is absorbing.
    """
    alg = alpha.target
    qalg = qhom.target
    qinf = qalg.absorbing()
    back = {proj.hmap[h]: h for h in range(alg.H.size) if proj.hmap[h] != qinf}
    members = set(rs.classes[cj])
    inf = alg.absorbing()
    tags = _class_tag_map(casc, view, k, max_size)
    tree_keys = sorted({terms.ic_normalize((root_tree,))
                        for key in tags.values() for root_tree in key},
                       key=lambda key: terms.tree_key(("r", key)))
    tree_values = key_value_sets(alpha, cj, k, tree_keys, rs)
    qletter = {a: qhom.letter(a) for a in casc.alphabet}
    qname_index = {qalg.hname(h): h for h in range(qalg.H.size)}
    qname_index["inf"] = qinf

    def resolve_component(root_tree):
        b, tagname = root_tree[0]
        q1 = qalg.act(qletter[b], qname_index[tagname])
        if q1 != qinf:
            return back[q1]
        candidates = sorted(
            tree_values[terms.ic_normalize((root_tree,))] & members)
        if len(candidates) > 1:
            raise InternalError("nonconfusion left an ambiguous class value")
        if candidates:
            return candidates[0]
        return inf

    def resolve_sum(key):
        total = alg.zero
        for root_tree in key:
            total = alg.plus(total, resolve_component(root_tree))
        return total

    target = u1()
    one, cinf = target.one, target.V.names.index("cinf")
    prefix = len(casc.stages)
    letters = {}
    for a in casc.alphabet:
        va = alpha.letter(a)
        for state in casc.reachable_states():
            h_q = resolve_sum(tags[state])
            fires = h_q == inf or alg.act(va, h_q) == inf
            letters[(a,) + tuple(state)] = cinf if fires else one
    casc.append(Stage(U1_STAGE, target, prefix, letters))
