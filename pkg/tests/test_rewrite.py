import random
from fractions import Fraction

import pytest

from quiverdu.core import Element, Parameters, path_from_word, trivial_path
from quiverdu.rewrite import (
    PRESET_GRADED,
    PRESET_PREPROJECTIVE,
    PRESET_QDU,
    build_system,
    certify_confluence_over_parameters,
    check_confluence,
    dimension_matrix,
    ensure_confluent,
    enumerate_basis,
    is_zero_in_quotient,
    normal_form,
    term_order_greater,
)


def rand_params(n, rng, nonzero_beta=True):
    rand = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    rand_nz = lambda: Fraction(rng.choice([x for x in range(-9, 10) if x]), rng.randint(1, 9))
    return Parameters.of(
        n,
        [rand() for _ in range(n)],
        [(rand_nz() if nonzero_beta else rand()) for _ in range(n)],
        [rand() for _ in range(n)],
    )


def rand_element(n, rng, max_len=4, nterms=3):
    terms = {}
    for _ in range(nterms):
        src = rng.randrange(n)
        word = "".join(rng.choice("ud") for _ in range(rng.randrange(max_len + 1)))
        terms[path_from_word(n, src, word)] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return Element(n, terms)


def test_term_order():
    n = 3
    duu = path_from_word(n, 0, "duu")  # d_2 u_2 u_0
    udu = path_from_word(n, 0, "udu")
    assert term_order_greater(duu, udu)
    assert not term_order_greater(udu, duu)
    short = path_from_word(n, 0, "u")
    assert term_order_greater(udu, short)


def test_qdu_rule_shapes():
    params = Parameters.of(3, [2, 3, 5], [7, 11, 13], [1, 0, 4])
    sys = build_system(PRESET_QDU, params)
    assert len(sys.rules) == 6
    lhs_words = {str(r.lhs) for r in sys.rules}
    # i = 0 instances of the two families
    assert "d2.u2.u0" in lhs_words
    assert "d0.d2.u2" in lhs_words
    rule = next(r for r in sys.rules if str(r.lhs) == "d0.d2.u2")
    rhs = {str(p): c for p, c in rule.rhs.terms.items()}
    assert rhs == {"d0.u0.d0": Fraction(2), "u1.d1.d0": Fraction(7), "d0": Fraction(1)}


def test_preprojective_rules():
    sys = build_system(PRESET_PREPROJECTIVE, n=3)
    assert len(sys.rules) == 3
    rule = next(r for r in sys.rules if str(r.lhs) == "d0.u0")
    assert {str(p): c for p, c in rule.rhs.terms.items()} == {"u1.d1": Fraction(1)}


def test_graded_down_up_rules():
    sys = build_system(PRESET_GRADED)
    shapes = {str(r.lhs): {str(p): c for p, c in r.rhs.terms.items()} for r in sys.rules}
    assert shapes == {
        "d0.u0.u0": {"u0.u0.d0": Fraction(-1)},
        "d0.d0.u0": {"u0.d0.d0": Fraction(-1)},
    }


def test_normal_form_applies_relation():
    params = Parameters.of(3, [2, 3, 5], [7, 11, 13], [1, 0, 4])
    sys = build_system(PRESET_QDU, params)
    a = Element.from_path(path_from_word(3, 1, "ddu"))  # d_0 d_2 u_2
    nf = normal_form(sys, a)
    expected = {"d0.u0.d0": Fraction(2), "u1.d1.d0": Fraction(7), "d0": Fraction(1)}
    assert {str(p): c for p, c in nf.terms.items()} == expected


def test_normal_form_fixed_point():
    params = Parameters.of(3, [1, 1, 1], [2, 2, 2], [0, 0, 0])
    sys = build_system(PRESET_QDU, params)
    a = Element.from_path(path_from_word(3, 0, "uud"))
    assert normal_form(sys, a) == a


def test_normal_form_idempotent_and_linear():
    rng = random.Random(17)
    params = rand_params(3, rng)
    sys = build_system(PRESET_QDU, params)
    for _ in range(15):
        a, b = rand_element(3, rng), rand_element(3, rng)
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        nfa = normal_form(sys, a)
        assert normal_form(sys, nfa) == nfa
        assert normal_form(sys, a.scale(c) + b) == nfa.scale(c) + normal_form(sys, b)


def test_normal_form_grading():
    rng = random.Random(23)
    n = 3
    graded = build_system(PRESET_QDU, rand_params(n, rng).__class__.of(
        n, [1, 2, 3], [4, 5, 6], [0, 0, 0]))
    p = path_from_word(n, 1, "dduud")
    nf = normal_form(graded, Element.from_path(p))
    for q in nf.terms:
        assert (q.length, q.source, q.target) == (p.length, p.source, p.target)
    filtered = build_system(PRESET_QDU, Parameters.of(n, [1, 2, 3], [4, 5, 6], [1, 1, 1]))
    nf2 = normal_form(filtered, Element.from_path(p))
    for q in nf2.terms:
        assert q.length <= p.length
        assert (q.source, q.target) == (p.source, p.target)


def test_normal_form_compatible_with_multiplication():
    rng = random.Random(29)
    params = rand_params(3, rng)
    sys = build_system(PRESET_QDU, params)
    ensure_confluent(sys)
    for _ in range(10):
        a, b = rand_element(3, rng), rand_element(3, rng)
        assert normal_form(sys, a * b) == normal_form(sys, normal_form(sys, a) * normal_form(sys, b))


def test_confluence_qdu_overlap_count():
    rng = random.Random(31)
    for n in (1, 2, 3, 4):
        report = check_confluence(build_system(PRESET_QDU, rand_params(n, rng)))
        assert report.confluent
        assert len(report.overlaps) == n


def test_confluence_both_orders_agree():
    # d_1 d_0 u_0 u_1 reduces the same way via either rule first.
    params = Parameters.of(3, [1, 2, 3], [4, 5, 6], [7, 8, 9])
    sys = build_system(PRESET_QDU, params)
    w = Element.from_path(path_from_word(3, 2, "dduu"))  # d_1 d_0 u_0 u_1
    nf = normal_form(sys, w)
    report = check_confluence(sys)
    assert report.confluent
    assert normal_form(sys, w) == nf


def test_confluence_preprojective_no_overlaps():
    report = check_confluence(build_system(PRESET_PREPROJECTIVE, n=3))
    assert report.confluent and len(report.overlaps) == 0


def test_confluence_graded_single_overlap():
    sys = build_system(PRESET_GRADED)
    report = check_confluence(sys)
    assert report.confluent and len(report.overlaps) == 1
    word = report.overlaps[0].word
    assert str(word) == "d0.d0.u0.u0"
    # both routes end at u^2 d^2
    nf = normal_form(sys, Element.from_path(word))
    assert {str(p): c for p, c in nf.terms.items()} == {"u0.u0.d0.d0": Fraction(1)}


def test_checker_detects_non_confluence():
    # A deliberately broken system: d0.d0 -> u0.u0 and d0.u0 -> 0 overlap in
    # d0.d0.u0, whose two reductions differ by u0.u0.u0.
    from quiverdu.rewrite import ReductionSystem, RewriteRule

    n = 1
    r1 = RewriteRule(path_from_word(n, 0, "dd"), Element.from_path(path_from_word(n, 0, "uu")))
    r2 = RewriteRule(path_from_word(n, 0, "du"), Element.zero(n))
    sys = ReductionSystem(n, (r1, r2), "custom")
    report = check_confluence(sys)
    assert not report.confluent
    bad = [o for o in report.overlaps if not o.resolves]
    assert bad
    assert {str(p) for o in bad for p in o.difference.terms} <= {"u0.u0.u0", "u0.u0.d0"}
    with pytest.raises(ValueError):
        ensure_confluent(sys)
    with pytest.raises(ValueError):
        is_zero_in_quotient(sys, Element.from_path(path_from_word(n, 0, "d")))


def test_grid_certificate_small():
    cert = certify_confluence_over_parameters(2, random_trials=2, seed=5)
    assert cert.all_resolved
    assert cert.instances == 27 + 2


def test_is_zero_in_quotient():
    params = Parameters.of(3, [2, 3, 5], [7, 11, 13], [1, 0, 4])
    sys = build_system(PRESET_QDU, params)
    rel = next(r for r in sys.rules if str(r.lhs) == "d0.d2.u2").as_relation()
    with pytest.raises(ValueError):
        is_zero_in_quotient(sys, rel)
    ensure_confluent(sys)
    assert is_zero_in_quotient(sys, rel)
    u0 = Element.from_path(path_from_word(3, 0, "u"))
    assert not is_zero_in_quotient(sys, u0)


def test_beta_zero_zero_divisor():
    # (d_2 u_2 - a_0 u_0 d_0 - g_0 e_0) u_0 = 0 when beta_0 = 0
    params = Parameters.of(3, [2, 3, 5], [0, 11, 13], [1, 0, 4])
    sys = ensure_confluent(build_system(PRESET_QDU, params))
    a = (
        Element.from_path(path_from_word(3, 0, "du"))
        - Element.from_path(path_from_word(3, 0, "ud"), params.alpha[0])
        - Element.from_path(trivial_path(3, 0), params.gamma[0])
    )
    u0 = Element.from_path(path_from_word(3, 0, "u"))
    assert is_zero_in_quotient(sys, a * u0)


def test_enumerate_basis_counts():
    params = Parameters.of(3, [1, 1, 1], [1, 1, 1], [0, 0, 0])
    sys = build_system(PRESET_QDU, params)
    assert len(enumerate_basis(sys, 0)) == 3
    assert len(enumerate_basis(sys, 2)) == 12
    assert len(enumerate_basis(sys, 3)) == 18


def test_enumerate_basis_matches_brute_force():
    params = Parameters.of(2, [1, 1], [1, 1], [0, 0])
    sys = build_system(PRESET_QDU, params)
    lhs_profiles = {("d", "u", "u"), ("d", "d", "u")}
    for k in range(6):
        brute = []
        for src in range(2):
            for bits in range(2 ** k):
                word = "".join("ud"[(bits >> t) & 1] for t in range(k))
                letters = tuple(word)
                if any(letters[i:i + 3] in lhs_profiles for i in range(k - 2)):
                    continue
                brute.append(path_from_word(2, src, word))
        assert sorted(map(str, enumerate_basis(sys, k))) == sorted(map(str, brute))


def test_dimension_matrix_examples():
    params = Parameters.of(3, [1, 2, 3], [4, 5, 6], [0, 0, 0])
    sys = build_system(PRESET_QDU, params)
    assert dimension_matrix(sys, 0) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert dimension_matrix(sys, 2) == [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    assert sum(sum(row) for row in dimension_matrix(sys, 3)) == 18


def test_dimension_matrix_parameter_independent():
    rng = random.Random(37)
    n, k = 3, 6
    mats = set()
    for _ in range(4):
        sys = build_system(PRESET_QDU, rand_params(n, rng, nonzero_beta=False))
        mats.add(tuple(map(tuple, dimension_matrix(sys, k))))
    assert len(mats) == 1


def test_dimension_matrix_agrees_with_enumeration():
    for preset, kwargs in ((PRESET_PREPROJECTIVE, {"n": 3}), (PRESET_GRADED, {})):
        sys = build_system(preset, **kwargs)
        for k in range(6):
            mat = dimension_matrix(sys, k)
            paths = enumerate_basis(sys, k)
            counts = [[0] * sys.n for _ in range(sys.n)]
            for p in paths:
                counts[p.source][p.target] += 1
            assert mat == counts
