import random
from fractions import Fraction

import pytest

from quiverdu.core import Element, Parameters, down, path_from_word, up
from quiverdu.rewrite import PRESET_QDU, build_system, normal_form
from quiverdu.structure import (
    balanced_twist_weights,
    build_superpotential,
    check_derivation_quotient,
    check_diagonal_map,
    check_twist_invariance,
    compose_specs,
    cyclic_derivative,
    derived_nakayama,
    identity_spec,
    noetherian_chain_check,
    paper_nakayama,
    paper_twist_weights,
    property_report,
    pwd_probe_H,
    up_cycle_path,
    x_path,
)


def rand_params(n, rng, nonzero_beta=True, zero_gamma=False):
    nz = lambda: Fraction(rng.choice([x for x in range(-9, 10) if x]), rng.randint(1, 9))
    any_ = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return Parameters.of(
        n,
        [any_() for _ in range(n)],
        [(nz() if nonzero_beta else any_()) for _ in range(n)],
        [0] * n if zero_gamma else [any_() for _ in range(n)],
    )


def test_named_paths():
    assert str(x_path(3, 0)) == "d0.u0"
    assert x_path(3, 2).source == 0 and x_path(3, 2).target == 0
    u = up_cycle_path(3, 1)
    assert str(u) == "u1.u2.u0" and u.source == 1 and u.target == 1


def test_first_twist_matches_weight_of_moved_arrow():
    params = Parameters.of(3, [0, 0, 0], [-1, -1, -1], [0, 0, 0])
    weights = paper_twist_weights(params)
    # first twist of d_0 d_2 u_2 u_0 is -beta_2 * (u_0 d_0 d_2 u_2)
    from quiverdu.structure import _twist_term
    p = path_from_word(3, 1, "dduu")  # d_0 d_2 u_2 u_0
    assert str(p) == "d0.d2.u2.u0"
    q, c = _twist_term(weights, p, Fraction(1), 4)
    assert str(q) == "u0.d0.d2.u2"
    assert c == -params.beta[2]


def test_closure_scalars():
    params = Parameters.of(3, [1, 1, 1], [1, 2, 3], [0, 0, 0])
    paper = build_superpotential(params, paper_twist_weights(params))
    for i in range(3):
        b1, b2 = params.beta[(i - 1) % 3], params.beta[(i - 2) % 3]
        assert paper.closure_scalars[("dduu", i)] == b1 ** 2 * b2 ** 2
    assert not paper.all_orbits_closed
    balanced = build_superpotential(params, balanced_twist_weights(params))
    assert all(c == 1 for c in balanced.closure_scalars.values())


def test_twist_invariance_behaviour():
    n = 3
    for beta_val in (1, -1):
        params = Parameters.of(n, [2, -1, 3], [beta_val] * n, [0] * n)
        weights = paper_twist_weights(params)
        omega = build_superpotential(params, weights).omega
        assert check_twist_invariance(omega, weights).invariant
    generic = Parameters.of(n, [2, -1, 3], [1, 2, 3], [0, 0, 0])
    weights = paper_twist_weights(generic)
    omega = build_superpotential(generic, weights).omega
    report = check_twist_invariance(omega, weights)
    assert not report.invariant and not report.defect.is_zero()
    balanced = balanced_twist_weights(generic)
    omega_b = build_superpotential(generic, balanced).omega
    assert check_twist_invariance(omega_b, balanced).invariant


def test_cyclic_derivative_basic():
    n = 3
    word = Element.from_path(path_from_word(n, 1, "dduu"))  # d_0 d_2 u_2 u_0
    d = cyclic_derivative(word, down(0, n))
    assert {str(p) for p in d.terms} == {"d2.u2.u0"}
    assert cyclic_derivative(word, up(0, n)).is_zero()


def test_derivation_quotient_paper_weights_unit_beta():
    n = 3
    for beta_val in (1, -1):
        params = Parameters.of(n, [2, -1, "1/3"], [beta_val] * n, [0] * n)
        omega = build_superpotential(params, paper_twist_weights(params)).omega
        assert check_derivation_quotient(omega, params)


def test_derivation_quotient_balanced_weights_generic_beta():
    n = 3
    params = Parameters.of(n, [2, -1, "1/3"], [1, 2, 3], [0] * n)
    omega = build_superpotential(params, balanced_twist_weights(params)).omega
    assert check_derivation_quotient(omega, params)
    rng = random.Random(61)
    for _ in range(3):
        p = rand_params(3, rng, zero_gamma=True)
        omega = build_superpotential(p, balanced_twist_weights(p)).omega
        assert check_twist_invariance(omega, balanced_twist_weights(p)).invariant
        assert check_derivation_quotient(omega, p)


def test_derivative_lowers_degree_by_one():
    rng = random.Random(67)
    p = rand_params(3, rng, zero_gamma=True)
    omega = build_superpotential(p, balanced_twist_weights(p)).omega
    for i in range(3):
        d = cyclic_derivative(omega, down(i, 3))
        assert d.degrees() <= {3}


def test_nakayama_derived_all_beta():
    rng = random.Random(71)
    for n in (3, 4):
        for _ in range(3):
            params = rand_params(n, rng, zero_gamma=True)
            report = check_diagonal_map(derived_nakayama(params), params, params)
            assert report.ok
            for detail in report.per_relation:
                idx = detail["relation"]
                i, family = divmod(idx, 2)
                expected = -1 / params.beta[i] if family == 0 else -params.beta[i]
                assert detail["scalar"] == expected
                assert detail["proportional_to"] == idx


def test_nakayama_paper_map_squares_condition():
    n = 3
    equal_squares = Parameters.of(n, [1, 2, 3], [2, -2, 2], [0] * n)
    assert check_diagonal_map(paper_nakayama(equal_squares), equal_squares, equal_squares).ok
    unit = Parameters.of(n, [1, 2, 3], [1, 1, 1], [0] * n)
    assert check_diagonal_map(paper_nakayama(unit), unit, unit).ok
    generic = Parameters.of(n, [1, 2, 3], [1, 2, 3], [0] * n)
    assert not check_diagonal_map(paper_nakayama(generic), generic, generic).ok


def test_diagonal_map_composition():
    rng = random.Random(73)
    src = rand_params(3, rng, zero_gamma=True)
    spec1 = derived_nakayama(src)
    spec2 = paper_nakayama(src)
    # both fix the parameters here (diagonal, identity vertex map)
    if check_diagonal_map(spec2, src, src).ok:
        composite = compose_specs(spec1, spec2)
        assert check_diagonal_map(composite, src, src).ok
    composite = compose_specs(spec1, spec1)
    assert check_diagonal_map(composite, src, src).ok
    assert compose_specs(identity_spec(3), spec1) == spec1


def test_property_report_nonzero_beta():
    params = Parameters.of(3, [1, 2, 3], [1, 1, 1], [0, 0, 0])
    report = property_report(params)
    assert report.beta_nonzero and report.noetherian and report.pwd
    assert report.polynomial_subalgebra and report.checks_passed
    n1 = Parameters.of(1, [2], [1], [3])
    r1 = property_report(n1)
    assert r1.noetherian and r1.checks_passed


def test_property_report_zero_beta():
    params = Parameters.of(3, [2, 1, 1], [0, 1, 1], ["1/2", 0, 0])
    report = property_report(params)
    assert not report.noetherian and not report.pwd and not report.polynomial_subalgebra
    assert report.checks_passed
    w = report.witnesses[0]
    assert w["kind"] == "zero-divisor" and w["product_zero"] and w["dependence_zero"]


def test_chain_rewrite_support():
    # normal_form(d_0 * d_2 u_2) has support {d_0 u_0 d_0, d_0} when beta_0 = 0
    params = Parameters.of(3, [2, 1, 1], [0, 1, 1], ["1/2", "1/3", 0])
    sys = build_system(PRESET_QDU, params)
    d0 = Element.from_path(path_from_word(3, 1, "d"))
    x2 = Element.from_path(x_path(3, 2))
    nf = normal_form(sys, d0 * x2)
    assert {str(p) for p in nf.terms} == {"d0.u0.d0", "d0"}


def test_noetherian_chain():
    rng = random.Random(79)
    params = Parameters.of(
        3,
        [Fraction(rng.randint(1, 5)) for _ in range(3)],
        [0, Fraction(rng.randint(1, 5)), Fraction(rng.randint(1, 5))],
        [Fraction(rng.randint(1, 5), 2) for _ in range(3)],
    )
    report = noetherian_chain_check(params, i=0, s_max=2)
    assert report.annihilation_ok
    assert report.support_pattern_ok
    assert all(strict for _, strict in report.strict_inclusions)
    assert report.ok


def test_noetherian_chain_requires_zero_beta():
    params = Parameters.of(3, [1, 1, 1], [1, 1, 1], [0, 0, 0])
    with pytest.raises(ValueError):
        noetherian_chain_check(params, i=0, s_max=1)


def test_pwd_probe_nonzero_beta():
    params = Parameters.of(3, [1, -2, "1/2"], [3, "2/3", -1], [1, 0, "1/5"])
    report = pwd_probe_H(params, degree_bound=4, trials=60, seed=13)
    assert report.beta_nonzero and report.ok and not report.failures


def test_pwd_probe_zero_beta_counterexample():
    params = Parameters.of(3, [2, 1, 1], [0, 1, 1], [1, 0, 0])
    report = pwd_probe_H(params, degree_bound=3, trials=20, seed=17)
    assert not report.beta_nonzero
    assert report.counterexample is not None
    assert report.ok
