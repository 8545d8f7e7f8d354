import random

import pytest

from forestalg import logic, terms
from forestalg.algebra import u1, u2
from forestalg.decide import (confusion_witness, decide, is_ef_algebra,
                              nonconfusion)
from forestalg.defk import simk_equiv
from forestalg.hom import image_restrict, relabeled
from forestalg.reach import class_tag_names, quotient_hom, reachability

from helpers import (example_language_recognizer, four_element_algebra,
                     random_hom, u2_example_recognizer)


def F(text):
    return terms.parse_forest(text)


def test_is_ef_algebra_u1():
    assert is_ef_algebra(u1()) == (True, None)


def test_is_ef_algebra_four_element():
    alg = four_element_algebra().hom.target
    ok, witness = is_ef_algebra(alg)
    assert not ok
    assert witness.kind == "absorption"
    vh = alg.act(witness.v, witness.h)
    assert alg.plus(vh, witness.h) != vh


def test_is_ef_algebra_u2():
    ok, witness = is_ef_algebra(u2())
    assert not ok
    # c0.inf + inf = inf while c0.inf = 0
    assert witness.kind == "absorption"


def test_nonconfusion_four_element():
    hom = four_element_algebra().hom
    report = nonconfusion(hom)
    assert report.nonconfusing
    assert all(t.levels[0] == frozenset() for t in report.traces.values())
    assert report.parameter == 0


def test_nonconfusion_u2_example():
    hom = image_restrict(u2_example_recognizer().hom)
    report = nonconfusion(hom)
    assert not report.nonconfusing
    (trace,) = report.traces.values()
    assert trace.verdict == "confused"
    assert trace.k == 1
    pairs = {(hom.target.hname(h), hom.target.hname(g))
             for h, g in trace.levels[-1]}
    assert pairs == {("0", "inf"), ("inf", "0")}
    assert trace.levels[1] == trace.levels[0]


def test_nonconfusion_trivial():
    rec = logic.to_recognizer(logic.TrueF(), ("a",))
    report = nonconfusion(rec.hom)
    assert report.nonconfusing


def test_levels_descend():
    rng = random.Random(31)
    for _ in range(25):
        hom = random_hom(rng)
        report = nonconfusion(hom)
        for trace in report.traces.values():
            for j in range(1, len(trace.levels)):
                assert trace.levels[j] <= trace.levels[j - 1]


def test_confusion_witness_level_one():
    hom = image_restrict(u2_example_recognizer().hom)
    report = nonconfusion(hom)
    trace = report.traces[0]
    zero = hom.target.H.names.index("0")
    inf = hom.target.H.names.index("inf")
    s, t, k = confusion_witness(hom, trace, (zero, inf))
    assert k == 1
    assert terms.ic_normalize(s) == terms.ic_normalize(F("a(b)"))
    assert terms.ic_normalize(t) == terms.ic_normalize(F("a(c)"))


def test_confusion_witness_deeper_levels():
    hom = image_restrict(u2_example_recognizer().hom)
    report = nonconfusion(hom)
    trace = report.traces[0]
    zero = hom.target.H.names.index("0")
    inf = hom.target.H.names.index("inf")
    s, t, k = confusion_witness(hom, trace, (zero, inf), k=2)
    assert (terms.print_forest(s), terms.print_forest(t)) == ("a(a(b))", "a(a(c))")
    s, t, k = confusion_witness(hom, trace, (zero, inf), k=5)
    assert terms.forest_depth(s) == 6


def test_confusion_witness_level_zero_uses_minimal_realizers():
    hom = image_restrict(u2_example_recognizer().hom)
    report = nonconfusion(hom)
    trace = report.traces[0]
    zero = hom.target.H.names.index("0")
    inf = hom.target.H.names.index("inf")
    s, t, k = confusion_witness(hom, trace, (zero, inf), k=0)
    assert (s, t) == ((), F("c"))


def test_confusion_witness_verifies_tagging():
    hom = image_restrict(u2_example_recognizer().hom)
    report = nonconfusion(hom)
    trace = report.traces[0]
    rs = reachability(hom.target)
    tags = class_tag_names(hom, 0, rs)
    for pair in sorted(trace.levels[0]):
        for k in (1, 2, 3):
            s, t, _ = confusion_witness(hom, trace, pair, k=k)
            assert hom.eval(s) == pair[0] and hom.eval(t) == pair[1]
            assert simk_equiv(relabeled(s, hom, tags), relabeled(t, hom, tags), k)


def test_decide_examples():
    rec = example_language_recognizer()
    assert decide(rec, "ef").definable is False
    assert decide(rec, "efex").definable is True
    rec_ef = logic.to_recognizer(logic.parse_formula("EF a"), ("a", "b"))
    assert decide(rec_ef, "ef").definable is True
    assert decide(rec_ef, "ex").definable is False
    rec_ex = logic.to_recognizer(logic.parse_formula("EX a"), ("a", "b"))
    assert decide(rec_ex, "ex").definable is True
    d = decide(u2_example_recognizer(), "efex")
    assert d.definable is False
    s, t, k, ci = d.certificate
    assert k == 1
    assert terms.ic_normalize(s) == F("a(b)")
    assert terms.ic_normalize(t) == F("a(c)")


def test_decide_rejects_unknown_fragment():
    with pytest.raises(ValueError):
        decide(four_element_algebra(), "ctl")


def test_quotient_closure_of_nonconfusion():
    # quotients of nonconfusing homomorphisms stay nonconfusing
    rng = random.Random(32)
    found = 0
    while found < 8:
        hom = random_hom(rng)
        if not nonconfusion(hom).nonconfusing:
            continue
        found += 1
        rs = reachability(hom.target)
        for ci in range(len(rs.classes)):
            for mode in ("strict", "weak"):
                qhom, _ = quotient_hom(hom, ci, mode, rs)
                qhom = image_restrict(qhom)
                assert nonconfusion(qhom).nonconfusing


def test_wreath_closure_of_nonconfusion():
    from forestalg.decompose import wreath_compose
    from forestalg.hom import Homomorphism

    rng = random.Random(33)
    found = 0
    while found < 5:
        alpha = random_hom(rng, max_h=4, max_letters=2)
        if not nonconfusion(alpha).nonconfusing:
            continue
        found += 1
        alg = alpha.target
        B = tuple((a, alg.hname(h)) for a in alpha.alphabet
                  for h in range(alg.H.size))
        # a u1 second stage
        target1 = u1()
        beta1 = Homomorphism(B, target1,
                             {b: rng.choice((0, 1)) for b in B})
        gamma = wreath_compose(alpha, beta1)
        assert nonconfusion(image_restrict(gamma)).nonconfusing
        # a 1-definite second stage into u2 (constants only)
        target2 = u2()
        beta2 = Homomorphism(B, target2,
                             {b: rng.choice((1, 2)) for b in B})
        gamma = wreath_compose(alpha, beta2)
        assert nonconfusion(image_restrict(gamma)).nonconfusing
