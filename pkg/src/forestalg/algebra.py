"""Finite forest algebras as explicit tables.

A forest algebra here is a pair of finite monoids: a horizontal monoid H
(written additively, identity printed ``0``) acted on by a vertical monoid V
(written multiplicatively, identity printed ``1``).  Throughout the package H
is required to be idempotent and commutative, which forces a unique absorbing
element, printed ``inf``.  V is required to contain, for every g in H, an
insertion element acting as h -> g + h; this keeps images of contexts inside
V and makes syntactic quotients work.

Tables are plain nested tuples of element indices.  Structural problems
(ragged tables, out-of-range entries) raise StructuralError at construction;
algebraic law violations are reported by check_axioms() instead.
"""

import warnings
from dataclasses import dataclass

from .errors import IdealViolation, SizeLimitError, StructuralError

DEFAULT_MAX_VERTICAL = 200_000
DEFAULT_MAX_WREATH_VERTICAL = 300_000


def _check_table(table, rows, cols, size, what):
    if len(table) != rows:
        raise StructuralError("%s: expected %d rows, got %d" % (what, rows, len(table)))
    for i, row in enumerate(table):
        if len(row) != cols:
            raise StructuralError("%s: row %d is ragged" % (what, i))
        for x in row:
            if not isinstance(x, int) or not (0 <= x < size):
                raise StructuralError("%s: entry %r out of range" % (what, x))


class FiniteMonoid:
    """A finite monoid given by its multiplication table.

    The table may be supplied row by row through ``row_fn``; rows are then
    materialized on first use.  Generated vertical monoids can be large, and
    the decision procedures touch only a few products, so this keeps them
    cheap while the ``op`` property still yields the full table when a file
    is printed or the laws are checked.
    """

    __slots__ = ("size", "identity", "names", "_rows", "_row_fn")

    def __init__(self, op, identity, names=None, row_fn=None, size=None):
        if op is not None:
            rows = [tuple(row) for row in op]
            size = len(rows)
            _check_table(rows, size, size, size, "monoid table")
        else:
            if row_fn is None or size is None:
                raise StructuralError("need either a table or row_fn with size")
            rows = [None] * size
        if not isinstance(identity, int) or not (0 <= identity < size):
            raise StructuralError("identity index %r out of range" % (identity,))
        if names is None:
            names = tuple("e%d" % i for i in range(size))
        names = tuple(names)
        if len(names) != size or len(set(names)) != size:
            raise StructuralError("need %d distinct element names" % size)
        self.size = size
        self.identity = identity
        self.names = names
        self._rows = rows
        self._row_fn = row_fn

    def row(self, i):
        r = self._rows[i]
        if r is None:
            r = tuple(self._row_fn(i))
            if len(r) != self.size or any(not (0 <= x < self.size) for x in r):
                raise StructuralError("lazy monoid row %d malformed" % i)
            self._rows[i] = r
        return r

    @property
    def op(self):
        return tuple(self.row(i) for i in range(self.size))

    def mul(self, i, j):
        return self.row(i)[j]

    def index_of(self, name):
        return self.names.index(name)

    def check(self):
        """Return law violations (associativity, identity) as Violation list."""
        out = []
        op = self.op
        n = self.size
        e = self.identity
        for i in range(n):
            if op[e][i] != i or op[i][e] != i:
                out.append(Violation("identity", (self.names[e], self.names[i]),
                                     "identity is not neutral"))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if op[op[i][j]][k] != op[i][op[j][k]]:
                        out.append(Violation(
                            "associativity",
                            (self.names[i], self.names[j], self.names[k]),
                            "(xy)z != x(yz)"))
                        if len(out) > 20:
                            return out
        return out


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        msg = "%s violated at %s" % (self.law, "/".join(str(w) for w in self.witness))
        if self.detail:
            msg += ": " + self.detail
        return msg


class ForestAlgebra:
    """H, V and the action of V on H, all as explicit tables."""

    __slots__ = ("H", "V", "action", "faithful", "inserted")

    def __init__(self, H, V, action, faithful=False, inserted=()):
        if not isinstance(H, FiniteMonoid) or not isinstance(V, FiniteMonoid):
            raise StructuralError("H and V must be FiniteMonoid instances")
        action = tuple(tuple(row) for row in action)
        _check_table(action, V.size, H.size, H.size, "action table")
        self.H = H
        self.V = V
        self.action = action
        self.faithful = faithful
        self.inserted = tuple(inserted)

    # -- basic operations ---------------------------------------------------

    @property
    def zero(self):
        return self.H.identity

    @property
    def one(self):
        return self.V.identity

    def plus(self, h, g):
        return self.H.mul(h, g)

    def times(self, v, w):
        return self.V.mul(v, w)

    def act(self, v, h):
        return self.action[v][h]

    def hname(self, h):
        return self.H.names[h]

    def vname(self, v):
        return self.V.names[v]

    def absorbing(self):
        """Sum of all of H; the unique absorbing element when H is valid."""
        h = self.zero
        for g in range(self.H.size):
            h = self.plus(h, g)
        return h

    def insertion(self, g):
        """Index of a vertical element acting as h -> g + h, or None."""
        want = tuple(self.plus(g, h) for h in range(self.H.size))
        for v in range(self.V.size):
            if self.action[v] == want:
                return v
        return None

    def summary(self):
        return "|H|=%d |V|=%d" % (self.H.size, self.V.size)

    # -- law checking -------------------------------------------------------

    def check_axioms(self):
        """Report every violated law; the empty list means the algebra is valid.

        Checked: both monoid structures, commutativity and idempotence of H,
        the monoid-action laws, insertion closure, and (when the faithful
        flag is set) faithfulness of the action.
        """
        out = []
        for violation in self.H.check():
            out.append(Violation("H-" + violation.law, violation.witness, violation.detail))
        for violation in self.V.check():
            out.append(Violation("V-" + violation.law, violation.witness, violation.detail))
        hn, vn = self.H.names, self.V.names
        plus = self.H.op
        n = self.H.size
        for h in range(n):
            for g in range(n):
                if plus[h][g] != plus[g][h]:
                    out.append(Violation("H-commutativity", (hn[h], hn[g]),
                                         "h+g != g+h"))
            if plus[h][h] != h:
                out.append(Violation("H-idempotence", (hn[h],), "h+h != h"))
        one = self.V.identity
        for h in range(n):
            if self.act(one, h) != h:
                out.append(Violation("action-identity", (vn[one], hn[h]), "1.h != h"))
        for v in range(self.V.size):
            for w in range(self.V.size):
                vw = self.times(v, w)
                for h in range(n):
                    if self.act(vw, h) != self.act(v, self.act(w, h)):
                        out.append(Violation("action-composition", (vn[v], vn[w], hn[h]),
                                             "(vw).h != v.(w.h)"))
                        break
        for g in range(n):
            if self.insertion(g) is None:
                out.append(Violation("insertion-closure", (hn[g],),
                                     "no vertical element acts as h -> %s+h" % hn[g]))
        if self.faithful:
            seen = {}
            for v in range(self.V.size):
                row = self.action[v]
                if row in seen:
                    out.append(Violation("faithfulness", (vn[seen[row]], vn[v]),
                                         "distinct elements act identically"))
                else:
                    seen[row] = v
        return out


def check_axioms(alg):
    return alg.check_axioms()


# ---------------------------------------------------------------------------
# Construction from a horizontal monoid and generating vertical actions

def _canonical_names(plus_table, identity, given=None):
    """Names with the identity printed 0 and the absorbing element inf."""
    n = len(plus_table)
    absorbing = identity
    for g in range(n):
        absorbing = plus_table[absorbing][g]
    names = list(given) if given is not None else [None] * n
    names[identity] = "0"
    if absorbing != identity:
        names[absorbing] = "inf"
    used = {names[identity], names[absorbing]}
    fresh = 1
    for i in range(n):
        if names[i] is None or (names[i] in used and i not in (identity, absorbing)):
            while "h%d" % fresh in used:
                fresh += 1
            names[i] = "h%d" % fresh
        used.add(names[i])
    return tuple(names)


def horizontal_monoid(plus_table, identity, names=None):
    return FiniteMonoid(plus_table, identity, _canonical_names(plus_table, identity, names))


def close_vertical(hmonoid, generators, add_insertions=True, faithful=True,
                   max_vertical=DEFAULT_MAX_VERTICAL, warn_on_merge=True):
    """Close a set of action functions into a vertical monoid.

    ``generators`` maps names to action rows (tuples H -> H).  The identity
    action and, if requested, every insertion h -> g + h are added, and the
    set is closed under composition.  With ``faithful`` set, generators with
    identical action are merged (the action rows are the elements).

    Returns (ForestAlgebra, genmap) where genmap sends each generator name to
    its vertical index.
    """
    n = hmonoid.size
    plus = hmonoid.op
    ident_row = tuple(range(n))
    rows = [ident_row]
    index = {ident_row: 0}
    names = ["1"]
    genmap = {}
    inserted = []
    merged = []

    def intern(row, name):
        if row in index:
            if name is not None:
                merged.append(name)
            return index[row]
        if len(rows) >= max_vertical:
            raise SizeLimitError("vertical closure", max_vertical)
        idx = len(rows)
        rows.append(row)
        index[row] = idx
        names.append(name if name is not None else "v%d" % idx)
        return idx

    for name in sorted(generators, key=str):
        row = tuple(generators[name])
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise StructuralError("generator %r is not an action row" % (name,))
        genmap[name] = intern(row, str(name))
    if add_insertions:
        for g in range(n):
            row = tuple(plus[g][h] for h in range(n))
            fresh = row not in index
            idx = intern(row, None)
            if fresh:
                inserted.append(idx)
                if names[idx] == "v%d" % idx:
                    names[idx] = "ins_%s" % hmonoid.names[g]

    frontier = list(range(len(rows)))
    gens = list(range(len(rows)))
    while frontier:
        new = []
        for b in frontier:
            rb = rows[b]
            for a in gens:
                ra = rows[a]
                comp = tuple(ra[x] for x in rb)
                if comp not in index:
                    new.append(intern(comp, None))
        frontier = new

    if merged and warn_on_merge:
        warnings.warn("merged vertical generators with duplicate actions: %s"
                      % ", ".join(sorted(set(merged))))

    # dedupe auto names against generator names
    seen = set()
    final_names = []
    for i, name in enumerate(names):
        if name in seen:
            name = "v%d" % i
            while name in seen:
                name += "_"
        seen.add(name)
        final_names.append(name)

    all_rows = tuple(rows)

    def vrow(a):
        ra = all_rows[a]
        return tuple(index[tuple(ra[x] for x in all_rows[b])]
                     for b in range(len(all_rows)))

    V = FiniteMonoid(None, 0, final_names, row_fn=vrow, size=len(all_rows))
    alg = ForestAlgebra(hmonoid, V, tuple(rows), faithful=faithful, inserted=inserted)
    return alg, genmap


# ---------------------------------------------------------------------------
# The two building-block algebras

def u1():
    """The smallest nontrivial algebra: H = {0, inf}, V = {1, cinf}."""
    H = FiniteMonoid(((0, 1), (1, 1)), 0, ("0", "inf"))
    V = FiniteMonoid(((0, 1), (1, 1)), 0, ("1", "cinf"))
    action = ((0, 1), (1, 1))
    return ForestAlgebra(H, V, action, faithful=True)


def u2():
    """H = {0, inf} with both constant maps in V = {1, cinf, c0}."""
    H = FiniteMonoid(((0, 1), (1, 1)), 0, ("0", "inf"))
    V = FiniteMonoid(((0, 1, 2), (1, 1, 1), (2, 2, 2)), 0, ("1", "cinf", "c0"))
    action = ((0, 1), (1, 1), (0, 0))
    return ForestAlgebra(H, V, action, faithful=True)


# ---------------------------------------------------------------------------
# Morphisms

@dataclass(frozen=True)
class AlgebraMorphism:
    source: ForestAlgebra
    target: ForestAlgebra
    hmap: tuple
    vmap: tuple

    def validate(self):
        """Return law violations of morphism-ness (empty list if valid)."""
        out = []
        src, tgt = self.source, self.target
        hm, vm = self.hmap, self.vmap
        if len(hm) != src.H.size or len(vm) != src.V.size:
            raise StructuralError("morphism maps have wrong length")
        if hm[src.zero] != tgt.zero:
            out.append(Violation("morphism-zero", ()))
        if vm[src.one] != tgt.one:
            out.append(Violation("morphism-one", ()))
        for h in range(src.H.size):
            for g in range(src.H.size):
                if hm[src.plus(h, g)] != tgt.plus(hm[h], hm[g]):
                    out.append(Violation("morphism-plus",
                                         (src.hname(h), src.hname(g))))
        for v in range(src.V.size):
            for w in range(src.V.size):
                if vm[src.times(v, w)] != tgt.times(vm[v], vm[w]):
                    out.append(Violation("morphism-times",
                                         (src.vname(v), src.vname(w))))
            for h in range(src.H.size):
                if hm[src.act(v, h)] != tgt.act(vm[v], hm[h]):
                    out.append(Violation("morphism-action",
                                         (src.vname(v), src.hname(h))))
        return out

    def is_surjective(self):
        return (len(set(self.hmap)) == self.target.H.size
                and len(set(self.vmap)) == self.target.V.size)


# ---------------------------------------------------------------------------
# Products

def direct_product(a, b, max_vertical=DEFAULT_MAX_VERTICAL):
    """Componentwise product; returns (algebra, projection_a, projection_b)."""
    nv = a.V.size * b.V.size
    if nv > max_vertical:
        raise SizeLimitError("direct product vertical monoid", max_vertical)
    nh = a.H.size * b.H.size

    def hpair(i, j):
        return i * b.H.size + j

    def vpair(i, j):
        return i * b.V.size + j

    plus = [[0] * nh for _ in range(nh)]
    hnames = [None] * nh
    for i in range(a.H.size):
        for j in range(b.H.size):
            hnames[hpair(i, j)] = "(%s,%s)" % (a.hname(i), b.hname(j))
            for k in range(a.H.size):
                for l in range(b.H.size):
                    plus[hpair(i, j)][hpair(k, l)] = hpair(a.plus(i, k), b.plus(j, l))
    times = [[0] * nv for _ in range(nv)]
    vnames = [None] * nv
    action = [[0] * nh for _ in range(nv)]
    for i in range(a.V.size):
        for j in range(b.V.size):
            v = vpair(i, j)
            vnames[v] = "(%s,%s)" % (a.vname(i), b.vname(j))
            for k in range(a.V.size):
                for l in range(b.V.size):
                    times[v][vpair(k, l)] = vpair(a.times(i, k), b.times(j, l))
            for k in range(a.H.size):
                for l in range(b.H.size):
                    action[v][hpair(k, l)] = hpair(a.act(i, k), b.act(j, l))
    zero = hpair(a.zero, b.zero)
    H = FiniteMonoid(plus, zero, _canonical_names(plus, zero, hnames))
    V = FiniteMonoid(times, vpair(a.one, b.one), vnames)
    prod = ForestAlgebra(H, V, action, faithful=a.faithful and b.faithful)
    pa = AlgebraMorphism(prod, a,
                         tuple(i // b.H.size for i in range(nh)),
                         tuple(i // b.V.size for i in range(nv)))
    pb = AlgebraMorphism(prod, b,
                         tuple(i % b.H.size for i in range(nh)),
                         tuple(i % b.V.size for i in range(nv)))
    return prod, pa, pb


def wreath(left, right, max_vertical=DEFAULT_MAX_WREATH_VERTICAL):
    """Wreath product; vertical elements are pairs (v, f) with f: H_left -> V_right.

    The action is (v,f).(h1,h2) = (v.h1, f(h1).h2).  Returns the product
    algebra together with the projection morphism onto the left factor.
    The vertical monoid has size |V1| * |V2|^|H1| and is materialized here,
    so this is only for small operands; the decision procedures work with
    cascades instead and never build this table.
    """
    nv = left.V.size * right.V.size ** left.H.size
    if nv > max_vertical:
        raise SizeLimitError("wreath product vertical monoid", max_vertical)
    nh = left.H.size * right.H.size

    def hpair(i, j):
        return i * right.H.size + j

    hnames = [None] * nh
    plus = [[0] * nh for _ in range(nh)]
    for i in range(left.H.size):
        for j in range(right.H.size):
            hnames[hpair(i, j)] = "(%s,%s)" % (left.hname(i), right.hname(j))
            for k in range(left.H.size):
                for l in range(right.H.size):
                    plus[hpair(i, j)][hpair(k, l)] = hpair(left.plus(i, k),
                                                           right.plus(j, l))

    funcs = [()]
    for _ in range(left.H.size):
        funcs = [f + (w,) for f in funcs for w in range(right.V.size)]
    velems = [(v, f) for v in range(left.V.size) for f in funcs]
    vindex = {e: i for i, e in enumerate(velems)}

    def vmul(x, y):
        (v, f), (w, g) = x, y
        return (left.times(v, w),
                tuple(right.times(f[left.act(w, h1)], g[h1])
                      for h1 in range(left.H.size)))

    times = [[vindex[vmul(x, y)] for y in velems] for x in velems]
    action = [
        [hpair(left.act(v, i), right.act(f[i], j))
         for i in range(left.H.size) for j in range(right.H.size)]
        for (v, f) in velems
    ]
    vnames = ["(%s;%s)" % (left.vname(v), ",".join(right.vname(w) for w in f))
              for (v, f) in velems]
    one = vindex[(left.one, tuple(right.one for _ in range(left.H.size)))]
    zero = hpair(left.zero, right.zero)
    H = FiniteMonoid(plus, zero, _canonical_names(plus, zero, hnames))
    V = FiniteMonoid(times, one, vnames)
    prod = ForestAlgebra(H, V, action, faithful=False)
    proj = AlgebraMorphism(prod, left,
                           tuple(i // right.H.size for i in range(nh)),
                           tuple(velems[i][0] for i in range(nv)))
    return prod, proj


# ---------------------------------------------------------------------------
# Quotients by reachability ideals

def quotient_by_ideal(alg, ideal):
    """Collapse a reachability ideal to the absorbing element.

    ``ideal`` is a set of horizontal indices closed under the action of every
    vertical element (that is, downward closed for reachability).  Returns
    (quotient algebra, projection morphism).  Raises IdealViolation if the
    set is not an ideal.
    """
    ideal = frozenset(ideal)
    for h in ideal:
        for v in range(alg.V.size):
            img = alg.act(v, h)
            if img not in ideal:
                raise IdealViolation(alg.hname(h), alg.vname(v), alg.hname(img))

    if alg.zero in ideal:
        ideal = frozenset(range(alg.H.size))  # 0 reachable from all: collapse all

    n = alg.H.size
    keep = [h for h in range(n) if h not in ideal]
    if ideal:
        new_names = [alg.hname(h) for h in keep] + ["inf"]
        sink = len(keep)
    else:
        new_names = [alg.hname(h) for h in keep]
        sink = None
    hmap = [0] * n
    for i, h in enumerate(keep):
        hmap[h] = i
    for h in ideal:
        hmap[h] = sink
    m = len(keep) + (1 if ideal else 0)

    def rep(i):
        # some original element mapping to quotient index i
        if sink is not None and i == sink:
            return next(iter(sorted(ideal)))
        return keep[i]

    plus = [[hmap[alg.plus(rep(i), rep(j))] for j in range(m)] for i in range(m)]
    # well-definedness of + and the action follows from the ideal property
    vrows = {}
    vmap = [0] * alg.V.size
    vnames = []
    vreps = []
    for v in range(alg.V.size):
        row = tuple(hmap[alg.act(v, rep(i))] for i in range(m))
        if row not in vrows:
            vrows[row] = len(vreps)
            vreps.append(v)
            vnames.append(alg.vname(v))
        vmap[v] = vrows[row]
    times = [[vrows[tuple(hmap[alg.act(alg.times(vreps[a], vreps[b]), rep(i))]
                          for i in range(m))]
              for b in range(len(vreps))] for a in range(len(vreps))]
    action = sorted(vrows, key=vrows.get)
    zero = hmap[alg.zero]
    seen = set()
    for i, name in enumerate(vnames):
        if name in seen:
            vnames[i] = "v%d" % i
        seen.add(vnames[i])
    H = FiniteMonoid(plus, zero, _canonical_names(plus, zero, new_names))
    V = FiniteMonoid(times, vmap[alg.one], vnames)
    q = ForestAlgebra(H, V, action, faithful=True)
    proj = AlgebraMorphism(alg, q, tuple(hmap), tuple(vmap))
    return q, proj
