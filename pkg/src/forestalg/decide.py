"""Definability deciders and confusion certificates.

The EF test is an identity check on the syntactic algebra, the EX test is
the definiteness degree, and the combined test runs, per reachability
class, a descending fixpoint over pairs of distinct class members: a level
starts from letter images of the previous level and saturates under adding
a common summand or summing two pairs, always filtered back into the base
set.  The class is clean when some level empties; confusion is certified by
unwinding the recorded derivations into an explicit forest pair.
"""

from dataclasses import dataclass, field

from . import terms
from .defk import definiteness_degree, simk_key
from .errors import InternalError
from .hom import (Recognizer, constant_letter_realizers, realize, relabeled,
                  syntactic)
from .reach import class_tag_names, reachability


# ---------------------------------------------------------------------------
# EF identities

@dataclass(frozen=True)
class EFViolation:
    kind: str          # "commutativity" or "absorption"
    v: int
    h: int
    g: int
    text: str

    def __str__(self):
        return self.text


def is_ef_algebra(alg):
    """Check h+g = g+h and v.h + h = v.h over all of the tables."""
    for h in range(alg.H.size):
        for g in range(alg.H.size):
            if alg.plus(h, g) != alg.plus(g, h):
                return False, EFViolation(
                    "commutativity", alg.one, h, g,
                    "%s+%s != %s+%s" % (alg.hname(h), alg.hname(g),
                                        alg.hname(g), alg.hname(h)))
    for v in range(alg.V.size):
        for h in range(alg.H.size):
            vh = alg.act(v, h)
            if alg.plus(vh, h) != vh:
                return False, EFViolation(
                    "absorption", v, h, vh,
                    "%s.%s + %s = %s != %s = %s.%s"
                    % (alg.vname(v), alg.hname(h), alg.hname(h),
                       alg.hname(alg.plus(vh, h)), alg.hname(vh),
                       alg.vname(v), alg.hname(h)))
    return True, None


# ---------------------------------------------------------------------------
# Nonconfusion fixpoint

@dataclass
class ClassTrace:
    class_index: int
    members: tuple
    levels: list                 # levels[j] = frozenset of pairs at level j
    derivations: list            # derivations[j][pair] = derivation record
    verdict: str                 # "empty" or "confused"
    k: int                       # first empty level, or the stable level

    @property
    def confused(self):
        return self.verdict == "confused"


@dataclass
class NonconfusionReport:
    nonconfusing: bool
    parameter: int               # works for every level >= this
    traces: dict = field(repr=False)

    def confused_classes(self):
        return sorted(ci for ci, t in self.traces.items() if t.confused)


def nonconfusion(alpha, rs=None):
    """Run the per-class pair fixpoint; exact decision of nonconfusion.

    Levels shrink monotonically, so each class stabilizes within |H|^2
    outer iterations (asserted).  Every surviving pair carries the
    derivation that produced it, for witness extraction.
    """
    alg = alpha.target
    if rs is None:
        rs = reachability(alg)
    letters = [(a, alg.action[alpha.letter(a)])
               for a in sorted(set(alpha.alphabet), key=terms.label_key)]
    n = alg.H.size
    traces = {}
    for ci, members in enumerate(rs.classes):
        base = frozenset((h, g) for h in members for g in members if h != g)
        levels = [base]
        derivations = [{p: ("base",) for p in sorted(base)}]
        if not base:
            traces[ci] = ClassTrace(ci, members, levels, derivations, "empty", 0)
            continue
        verdict = None
        j = 0
        while True:
            j += 1
            if j > n * n + 1:
                raise InternalError("pair fixpoint exceeded |H|^2 iterations")
            prev = levels[-1]
            cur = {}
            queue = []
            for a, row in letters:
                for (h, g) in sorted(prev):
                    p = (row[h], row[g])
                    if p in base and p not in cur:
                        cur[p] = ("letter", a, (h, g))
                        queue.append(p)
            at = 0
            while at < len(queue):
                h, g = queue[at]
                at += 1
                for c in range(n):
                    q = (alg.plus(h, c), alg.plus(g, c))
                    if q in base and q not in cur:
                        cur[q] = ("const", c, (h, g))
                        queue.append(q)
                for (h2, g2) in list(cur):
                    q = (alg.plus(h, h2), alg.plus(g, g2))
                    if q in base and q not in cur:
                        cur[q] = ("pair", (h, g), (h2, g2))
                        queue.append(q)
            level = frozenset(cur)
            if not level <= prev:
                raise InternalError("pair levels are not descending")
            levels.append(level)
            derivations.append(cur)
            if not level:
                verdict = "empty"
                break
            if level == prev:
                verdict = "confused"
                break
        traces[ci] = ClassTrace(ci, members, levels, derivations, verdict, j)
    ok = all(t.verdict == "empty" for t in traces.values())
    parameter = max((t.k for t in traces.values()), default=0)
    return NonconfusionReport(ok, parameter, traces)


# ---------------------------------------------------------------------------
# Witness extraction

def confusion_witness(alpha, trace, pair, k=None, rs=None):
    """Forests (s, t) with the pair's two values and k-equivalent taggings.

    Unwinds the recorded derivation: letter steps prepend the letter to the
    parent witnesses, a common summand is realized once and added to both
    sides, and pair sums concatenate the two witness pairs.  Base values at
    positive k prefer single-letter witnesses whose root has constant
    action, so the value is manifest; at k = 0 the minimal realizers are
    used.  All three claims are re-verified before returning.
    """
    if k is None:
        k = trace.k
    if pair not in trace.levels[0]:
        raise ValueError("pair %r is not a distinct same-class pair" % (pair,))
    last = len(trace.levels) - 1
    if k <= last:
        if pair not in trace.levels[k]:
            raise ValueError("pair %r does not survive to level %d" % (pair, k))
    elif trace.verdict != "confused" or pair not in trace.levels[last]:
        raise ValueError("pair %r does not survive to level %d" % (pair, k))
    minimal = realize(alpha)
    preferred = constant_letter_realizers(alpha) if k > 0 else {}

    def base_realizer(h):
        if h in preferred:
            return preferred[h]
        return minimal[h]

    def extract(p, level):
        if level <= 0:
            if k == 0:
                return minimal[p[0]], minimal[p[1]]
            return base_realizer(p[0]), base_realizer(p[1])
        d = trace.derivations[min(level, len(trace.levels) - 1)].get(p)
        if d is None:
            raise InternalError("pair %r missing at level %d" % (p, level))
        if d[0] == "base":
            return extract(p, 0)
        if d[0] == "letter":
            a, parent = d[1], d[2]
            s, t = extract(parent, level - 1)
            return (terms.tree(a, s),), (terms.tree(a, t),)
        if d[0] == "const":
            c, parent = d[1], d[2]
            s, t = extract(parent, level)
            u = minimal[c]
            return s + u, t + u
        if d[0] == "pair":
            s1, t1 = extract(d[1], level)
            s2, t2 = extract(d[2], level)
            return s1 + s2, t1 + t2
        raise InternalError("unknown derivation %r" % (d,))

    s, t = extract(pair, k)
    if alpha.eval(s) != pair[0] or alpha.eval(t) != pair[1]:
        raise InternalError("witness values do not match the pair")
    tags = class_tag_names(alpha, trace.class_index, rs)
    if simk_key(relabeled(s, alpha, tags), k) != simk_key(relabeled(t, alpha, tags), k):
        raise InternalError("witness taggings are not %d-equivalent" % k)
    return s, t, k


# ---------------------------------------------------------------------------
# The three deciders

@dataclass
class Decision:
    fragment: str
    definable: bool
    syntactic: Recognizer
    certificate: object = None
    detail: str = ""


def decide(rec, fragment):
    """Is the recognized language definable in the given fragment?

    ef: the syntactic algebra satisfies the two EF identities.
    ex: the syntactic morphism is k-definite for some k.
    efex: the syntactic morphism is nonconfusing.
    Negative answers carry a certificate: the violated identity, the
    stable guarded-semigroup obstruction, or an explicit confusion witness.
    """
    syn, _ = syntactic(rec)
    mu = syn.hom
    if fragment == "ef":
        ok, violation = is_ef_algebra(mu.target)
        return Decision("ef", ok, syn, violation,
                        "" if ok else str(violation))
    if fragment == "ex":
        degree = definiteness_degree(mu)
        ok = degree is not None
        detail = "definiteness degree %s" % ("none" if degree is None else degree)
        return Decision("ex", ok, syn, degree, detail)
    if fragment == "efex":
        report = nonconfusion(mu)
        if report.nonconfusing:
            return Decision("efex", True, syn, None,
                            "nonconfusing with parameter %d" % report.parameter)
        ci = report.confused_classes()[0]
        trace = report.traces[ci]
        pair = sorted(trace.levels[-1])[0]
        witness = confusion_witness(mu, trace, pair)
        s, t, k = witness
        detail = ("confused pair (%s, %s) at level %d: %s vs %s"
                  % (mu.target.hname(pair[0]), mu.target.hname(pair[1]), k,
                     terms.print_forest(s), terms.print_forest(t)))
        return Decision("efex", False, syn, (s, t, k, ci), detail)
    raise ValueError("fragment must be ef, ex or efex")
