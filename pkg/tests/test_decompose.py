import random

import pytest

from forestalg import logic
from forestalg.algebra import u1, u2
from forestalg.decide import nonconfusion
from forestalg.decompose import (ONE_DEFINITE_STAGE, U1_STAGE,
                                 decompose_ef, decompose_efex,
                                 decompose_kdefinite, tensor_cascade,
                                 wreath_compose)
from forestalg.defk import alpha1, definiteness_degree
from forestalg.errors import (AlphabetMismatchError, NotEFAlgebra,
                              NotKDefinite, NotNonconfusing)
from forestalg.hom import (Homomorphism, factors_through, image_restrict,
                           relabeled, syntactic)
from forestalg.joint import evaluate
from forestalg.oracle import random_forest

from helpers import (example_language_recognizer, four_element_algebra,
                     random_hom, u2_example_recognizer)


def _syn(formula, alphabet=("a", "b")):
    rec = logic.to_recognizer(logic.parse_formula(formula), alphabet)
    return syntactic(rec)[0].hom


def _tagged_alphabet(alpha):
    return tuple((a, alpha.target.hname(h))
                 for a in alpha.alphabet for h in range(alpha.target.H.size))


# ---------------------------------------------------------------------------
# Tensoring

def test_tensor_cascade_projection():
    alpha = _syn("EF a")
    beta = alpha1(_tagged_alphabet(alpha))
    casc = tensor_cascade(alpha, beta)
    rng = random.Random(40)
    for _ in range(60):
        s = random_forest(rng, ("a", "b"), 3, 2)
        state = casc.eval(s)
        assert state[0] == alpha.eval(s)
        assert state[1] == beta.eval(relabeled(s, alpha))


def test_tensor_alphabet_mismatch():
    alpha = _syn("EF a")
    with pytest.raises(AlphabetMismatchError):
        tensor_cascade(alpha, alpha1(("a", "b")))


def test_wreath_compose_constant_second():
    alpha = _syn("EF a")
    B = _tagged_alphabet(alpha)
    beta = Homomorphism(B, u1(), {b: 0 for b in B})  # constant identity
    gamma = wreath_compose(alpha, beta)
    ok, _ = factors_through(alpha, gamma)
    assert ok
    ok, _ = factors_through(gamma, alpha)
    assert ok  # second coordinate carries nothing


def test_wreath_compose_first_coordinate_is_alpha():
    alpha = _syn("EF a")
    B = _tagged_alphabet(alpha)
    rng = random.Random(41)
    beta = Homomorphism(B, u2(), {b: rng.randrange(3) for b in B})
    gamma = wreath_compose(alpha, beta)
    for _ in range(60):
        s = random_forest(rng, ("a", "b"), 3, 2)
        name = gamma.target.hname(gamma.eval(s))
        if name not in ("0", "inf"):
            assert name.startswith("(%s," % alpha.target.hname(alpha.eval(s)))
        assert gamma.eval(s + s) == gamma.eval(s)


def test_product_factors_through_wreath():
    # a pair of homomorphisms factors through their tensor trivially
    alpha = _syn("EF a")
    alpha2 = _syn("EX a")
    B = _tagged_alphabet(alpha)
    beta = Homomorphism(B, alpha2.target, {b: alpha2.letter(b[0]) for b in B})
    gamma = wreath_compose(alpha, beta)
    for other in (alpha, alpha2):
        ok, _ = factors_through(other, gamma)
        assert ok


# ---------------------------------------------------------------------------
# EF decompositions

def test_decompose_ef_u1_single_stage():
    alpha = _syn("EF a")  # syntactic algebra is the two-element one
    assert alpha.target.H.size == 2
    casc = decompose_ef(alpha)
    assert len(casc) == 1
    assert casc.stages[0].kind == U1_STAGE
    ok, _ = casc.factors(alpha)
    assert ok


def test_decompose_ef_union_language():
    alpha = _syn("EF a | EF b")
    casc = decompose_ef(alpha)
    assert casc.factors(alpha)[0]
    assert all(st.kind == U1_STAGE for st in casc.stages)


def test_decompose_ef_chain():
    # nested EF gives a longer chain
    alpha = _syn("EF(a & EF b)")
    casc = decompose_ef(alpha)
    assert all(st.kind == U1_STAGE for st in casc.stages)
    assert casc.factors(alpha)[0]


def test_decompose_ef_rejects_non_ef():
    with pytest.raises(NotEFAlgebra):
        decompose_ef(four_element_algebra().hom)


def test_decompose_ef_trivial():
    alpha = _syn("T")
    assert len(decompose_ef(alpha)) == 0


def test_decompose_ef_subminimal_branching():
    # EF a and EF b together: two incomparable subminimal classes
    alpha = _syn("EF a & EF b")
    casc = decompose_ef(alpha)
    assert casc.factors(alpha)[0]
    assert all(st.kind == U1_STAGE for st in casc.stages)


# ---------------------------------------------------------------------------
# Definite decompositions

def test_decompose_kdefinite_alpha1():
    a1 = alpha1(("a", "b"))
    casc = decompose_kdefinite(a1, 1)
    assert len(casc) == 2  # one two-constant stage per letter
    assert all(st.kind == ONE_DEFINITE_STAGE for st in casc.stages)
    assert all(st.target.H.size == 2 and st.target.V.size == 3
               for st in casc.stages)
    assert casc.factors(a1)[0]


def test_decompose_kdefinite_level_two():
    alpha = _syn("EX EX a")
    assert definiteness_degree(alpha) == 2
    casc = decompose_kdefinite(alpha, 2)
    assert casc.factors(alpha)[0]
    level1 = [st for st in casc.stages if st.prefix_len == 0]
    level2 = [st for st in casc.stages if st.prefix_len > 0]
    assert 0 < len(level1) <= 2           # labels drawn from the alphabet
    assert 0 < len(level2) <= 2 * 4       # letter with a level-1 class tag
    assert all(st.kind == ONE_DEFINITE_STAGE for st in casc.stages)


def test_decompose_kdefinite_zero():
    alpha = _syn("T")
    casc = decompose_kdefinite(alpha, 0)
    assert len(casc) == 0


def test_decompose_kdefinite_rejects():
    with pytest.raises(NotKDefinite):
        decompose_kdefinite(_syn("EF a"), 3)
    with pytest.raises(NotKDefinite):
        decompose_kdefinite(_syn("EX EX a"), 1)


def test_one_definite_stages_use_constants_only():
    a1 = alpha1(("a", "b"))
    casc = decompose_kdefinite(a1, 1)
    for st in casc.stages:
        constants = {st.target.V.names.index("cinf"),
                     st.target.V.names.index("c0")}
        assert set(st.letters.values()) <= constants


# ---------------------------------------------------------------------------
# Combined decompositions

def test_decompose_efex_trivial():
    alpha = _syn("T")
    assert len(decompose_efex(alpha)) == 0


def test_decompose_efex_four_element():
    alpha = four_element_algebra().hom
    casc = decompose_efex(alpha)
    assert casc.factors(alpha)[0]
    kinds = {st.kind for st in casc.stages}
    assert kinds <= {U1_STAGE, ONE_DEFINITE_STAGE}
    assert U1_STAGE in kinds and ONE_DEFINITE_STAGE in kinds


def test_decompose_efex_rejects_confusing():
    with pytest.raises(NotNonconfusing):
        decompose_efex(u2_example_recognizer().hom)


def test_decompose_efex_fat_minimal_class():
    # both constants present but no identity letter: single fat class,
    # nonconfusing at level 1
    alg = u2()
    alpha = Homomorphism(("a", "b"), alg,
                         {"a": alg.V.names.index("c0"),
                          "b": alg.V.names.index("cinf")})
    alpha = image_restrict(alpha)
    assert nonconfusion(alpha).nonconfusing
    casc = decompose_efex(alpha)
    assert casc.factors(alpha)[0]
    assert all(st.kind == ONE_DEFINITE_STAGE for st in casc.stages)


def test_decompose_efex_branching_subminimal():
    from forestalg.algebra import direct_product

    prod, _, _ = direct_product(u1(), u1())
    names = prod.V.names
    hom = image_restrict(Homomorphism(
        ("a", "b"), prod,
        {"a": names.index("(cinf,1)"), "b": names.index("(1,cinf)")}))
    casc = decompose_efex(hom)
    assert casc.factors(hom)[0]
    casc_ef = decompose_ef(hom)
    assert casc_ef.factors(hom)[0]
    assert len(casc_ef) == 4  # one two-element stage per peeled element


def test_decompose_efex_example_language():
    rec = example_language_recognizer()
    mu = syntactic(rec)[0].hom
    casc = decompose_efex(mu)
    assert casc.factors(mu)[0]


def test_decompose_matches_decide_on_randoms():
    from forestalg.errors import SizeLimitError

    rng = random.Random(42)
    decided = {True: 0, False: 0}
    capped = 0
    for _ in range(25):
        rec_hom = random_hom(rng, max_h=4, max_letters=2)
        verdict = nonconfusion(rec_hom).nonconfusing
        decided[verdict] += 1
        if verdict:
            try:
                casc = decompose_efex(rec_hom)
            except SizeLimitError:
                capped += 1
                continue
            assert casc.factors(rec_hom)[0]
        else:
            with pytest.raises(NotNonconfusing):
                decompose_efex(rec_hom)
    assert decided[True] > capped


def test_fat_class_level_two_instance():
    # minimal class {x, y, inf} with letter a cycling x -> y -> inf and a
    # constant letter: the pair fixpoint empties at level 2, the oracle
    # agrees, and the decomposition tower overflows the default cap fast
    from forestalg.algebra import close_vertical, horizontal_monoid
    from forestalg.errors import SizeLimitError
    from forestalg.oracle import brute_confused_pairs
    from forestalg.reach import reachability

    plus = [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]]
    H = horizontal_monoid(plus, 0, ["0", "x", "y", "inf"])
    gens = {"a": (1, 2, 3, 3), "c": (1, 1, 1, 1)}
    alg, genmap = close_vertical(H, gens, warn_on_merge=False)
    hom = image_restrict(Homomorphism(("a", "c"), alg,
                                      {"a": genmap["a"], "c": genmap["c"]}))
    rs = reachability(hom.target)
    report = nonconfusion(hom, rs)
    assert report.nonconfusing
    fat = [t for t in report.traces.values() if len(t.members) > 1]
    assert fat and fat[0].k == 2
    for ci, trace in report.traces.items():
        for k in range(4):
            level = set(trace.levels[min(k, len(trace.levels) - 1)])
            assert level == brute_confused_pairs(hom, ci, k, rs)
    import time
    t0 = time.monotonic()
    with pytest.raises(SizeLimitError):
        decompose_efex(hom)
    assert time.monotonic() - t0 < 5.0


def test_efex_stage_kinds_sound():
    alpha = four_element_algebra().hom
    casc = decompose_efex(alpha)
    for st in casc.stages:
        if st.kind == U1_STAGE:
            assert st.target.H.names == ("0", "inf")
            assert st.target.V.size == 2
        else:
            constants = {st.target.V.names.index("cinf"),
                         st.target.V.names.index("c0")}
            assert set(st.letters.values()) <= constants


def test_cascade_evaluator_protocol():
    alpha = four_element_algebra().hom
    casc = decompose_efex(alpha)
    rng = random.Random(43)
    for _ in range(30):
        s = random_forest(rng, ("a", "b"), 3, 2)
        assert casc.eval(s) == evaluate(casc, s)
