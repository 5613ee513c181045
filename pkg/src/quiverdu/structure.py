"""Superpotential and diagonal-map verification, property reports, and the
non-noetherian ascending chain.

The degree-4 potential is Omega = sum_i [d_i d_{i-1} u_{i-1} u_i]
- alpha_i [d_i u_i d_i u_i], where [p] is the compact form: the sum of the
distinct signed twists of p under the map sending a_1...a_d to
(-1)^{d+1} w(a_d) * a_d a_1 ... a_{d-1}, with w the diagonal weight of the
moved arrow.  Two weight families are first-class: the printed weights
(u_i, d_i both weighted beta_{i-1}) and the balanced weights
(u_i -> beta_{i-1} u_i, d_i -> beta_{i-1}^{-1} d_i), which keep every
twist orbit closed with scalar 1 for arbitrary nonzero beta.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Arrow,
    Element,
    Parameters,
    Path,
    canonical_path_key,
    down,
    letter_profile,
    map_element,
    path_from_arrows,
    path_from_word,
    trivial_path,
    up,
)
from .linalg import RowSpace, in_span, spans_equal
from .rewrite import (
    PRESET_QDU,
    build_system,
    enumerate_basis,
    ensure_confluent,
    is_zero_in_quotient,
    normal_form,
)

# ---------------------------------------------------------------------------
# Named path constructors
# ---------------------------------------------------------------------------

def x_path(n: int, m: int) -> Path:
    """The loop d_m u_m at vertex m+1."""
    return path_from_word(n, (m + 1) % n, "du")


def up_cycle_path(n: int, i: int) -> Path:
    """The full up-cycle u_i u_{i+1} ... u_{i-1+n} at vertex i."""
    return path_from_word(n, i % n, "u" * n)


def _vectorize(elements: list[Element]) -> list[list[Fraction]]:
    support = sorted({p for e in elements for p in e.terms}, key=canonical_path_key)
    index = {p: pos for pos, p in enumerate(support)}
    rows = []
    for e in elements:
        row = [Fraction(0)] * len(support)
        for p, c in e.terms.items():
            row[index[p]] = c
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Twisted superpotential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistWeights:
    """Nonzero diagonal weights per arrow, defining a graded automorphism."""

    n: int
    u_weights: tuple[Fraction, ...]
    d_weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.u_weights) != self.n or len(self.d_weights) != self.n:
            raise ValueError("weight vectors must have length n")
        if any(w == 0 for w in self.u_weights + self.d_weights):
            raise ValueError("twist weights must be nonzero")

    def weight(self, a: Arrow) -> Fraction:
        return self.u_weights[a.index] if a.family == "u" else self.d_weights[a.index]


def paper_twist_weights(params: Parameters) -> TwistWeights:
    """u_i and d_i both weighted by beta_{i-1}."""
    n = params.n
    w = tuple(params.beta[(i - 1) % n] for i in range(n))
    if any(x == 0 for x in w):
        raise ValueError("twist weights need nonzero beta")
    return TwistWeights(n, w, w)


def balanced_twist_weights(params: Parameters) -> TwistWeights:
    """u_i -> beta_{i-1} u_i and d_i -> beta_{i-1}^{-1} d_i.

    Every twist orbit of the potential closes with scalar 1 under these
    weights, and the leading-arrow derivatives recover the defining
    relations exactly, for arbitrary nonzero beta.
    """
    n = params.n
    if not params.beta_all_nonzero():
        raise ValueError("twist weights need nonzero beta")
    uw = tuple(params.beta[(i - 1) % n] for i in range(n))
    dw = tuple(1 / params.beta[(i - 1) % n] for i in range(n))
    return TwistWeights(n, uw, dw)


def _twist_term(weights: TwistWeights, p: Path, coeff: Fraction, degree: int) -> tuple[Path, Fraction]:
    if p.source != p.target:
        raise ValueError("twist is defined on cycles only")
    last = p.arrows[-1]
    sign = Fraction(1) if degree % 2 else Fraction(-1)  # (-1)^{d+1}
    moved = Path(p.n, last.source(p.n), (last,) + p.arrows[:-1])
    return moved, coeff * sign * weights.weight(last)


def twist_element(weights: TwistWeights, a: Element, degree: int) -> Element:
    terms: dict[Path, Fraction] = {}
    for p, c in a.terms.items():
        q, cq = _twist_term(weights, p, c, degree)
        terms[q] = terms.get(q, Fraction(0)) + cq
    return Element(a.n, terms)


def _compact_form(weights: TwistWeights, p: Path) -> tuple[Element, Fraction]:
    """Sum of the distinct signed twists of p; also the orbit-closure scalar.

    The orbit is followed for one full rotation period (deg p steps);
    exact repeats are summed once.  The closure scalar is the factor by
    which the final twist differs from the starting term.
    """
    d = p.length
    seen: set[tuple[Path, Fraction]] = set()
    terms: dict[Path, Fraction] = {}
    cur = (p, Fraction(1))
    for _ in range(d):
        if cur not in seen:
            seen.add(cur)
            terms[cur[0]] = terms.get(cur[0], Fraction(0)) + cur[1]
        cur = _twist_term(weights, cur[0], cur[1], d)
    if cur[0] != p:
        raise AssertionError("twist orbit did not return to the starting word")
    return Element(p.n, terms), cur[1]


@dataclass
class SuperpotentialResult:
    omega: Element
    closure_scalars: dict[tuple[str, int], Fraction]

    @property
    def all_orbits_closed(self) -> bool:
        return all(c == 1 for c in self.closure_scalars.values())


def build_superpotential(params: Parameters, weights: TwistWeights) -> SuperpotentialResult:
    """Expand the compact-form potential and report orbit closure."""
    n = params.n
    omega = Element.zero(n)
    closures: dict[tuple[str, int], Fraction] = {}
    for i in range(n):
        # d_i d_{i-1} u_{i-1} u_i, a cycle at vertex i+1
        square = path_from_arrows(n, (down(i, n), down(i - 1, n), up(i - 1, n), up(i, n)))
        form, closure = _compact_form(weights, square)
        omega = omega + form
        closures[("dduu", i)] = closure
        # d_i u_i d_i u_i, weighted by -alpha_i
        zigzag = path_from_arrows(n, (down(i, n), up(i, n), down(i, n), up(i, n)))
        form, closure = _compact_form(weights, zigzag)
        omega = omega + form.scale(-params.alpha[i])
        closures[("dudu", i)] = closure
    return SuperpotentialResult(omega, closures)


@dataclass
class TwistInvarianceReport:
    invariant: bool
    defect: Element


def check_twist_invariance(omega: Element, weights: TwistWeights) -> TwistInvarianceReport:
    if omega.is_zero():
        return TwistInvarianceReport(True, omega)
    degrees = omega.degrees()
    if len(degrees) != 1:
        raise ValueError("twist invariance needs a homogeneous element")
    (d,) = degrees
    defect = twist_element(weights, omega, d) - omega
    return TwistInvarianceReport(defect.is_zero(), defect)


def cyclic_derivative(omega: Element, a: Arrow) -> Element:
    """Delete a leading arrow equal to ``a``; zero on other terms."""
    terms: dict[Path, Fraction] = {}
    for p, c in omega.terms.items():
        if p.arrows and p.arrows[0] == a:
            q = Path(p.n, p.arrows[0].target(p.n), p.arrows[1:])
            terms[q] = terms.get(q, Fraction(0)) + c
    return Element(omega.n, terms)


def check_derivation_quotient(omega: Element, params: Parameters) -> bool:
    """span{d_a Omega : a in Q_1} == span{defining relations}, exactly.

    Both spans live in the degree-3 homogeneous component of the free
    path algebra; gamma must be zero.
    """
    if not params.gamma_is_zero():
        raise ValueError("derivation-quotient comparison requires gamma = 0")
    n = params.n
    arrows = [up(i, n) for i in range(n)] + [down(i, n) for i in range(n)]
    derivatives = [cyclic_derivative(omega, a) for a in arrows]
    relations = build_system(PRESET_QDU, params).relation_elements()
    vecs = _vectorize(derivatives + relations)
    return spans_equal(vecs[: len(derivatives)], vecs[len(derivatives):])


# ---------------------------------------------------------------------------
# Diagonal graded maps (Nakayama candidates and dihedral relabelings)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalMapSpec:
    """A graded map sending each arrow to a scalar multiple of an arrow.

    The vertex map is v -> shift + v or v -> shift - v (reflect); the
    arrow relabeling is the one induced by it.
    """

    n: int
    reflect: bool
    shift: int
    u_scalars: tuple[Fraction, ...]
    d_scalars: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.u_scalars) != self.n or len(self.d_scalars) != self.n:
            raise ValueError("scalar vectors must have length n")
        if any(c == 0 for c in self.u_scalars + self.d_scalars):
            raise ValueError("diagonal map scalars must be nonzero")

    def vertex_image(self, v: int) -> int:
        return (self.shift - v) % self.n if self.reflect else (self.shift + v) % self.n

    def arrow_image(self, a: Arrow) -> tuple[Fraction, Arrow]:
        scalar = self.u_scalars[a.index] if a.family == "u" else self.d_scalars[a.index]
        if not self.reflect:
            idx = (a.index + self.shift) % self.n
            return scalar, Arrow(a.family, idx)
        idx = (self.shift - a.index - 1) % self.n
        return scalar, Arrow("d" if a.family == "u" else "u", idx)

    def apply(self, a: Element) -> Element:
        return map_element(a, self.vertex_image, self.arrow_image)


def compose_specs(first: DiagonalMapSpec, second: DiagonalMapSpec) -> DiagonalMapSpec:
    """The spec acting as ``second after first``."""
    if first.n != second.n:
        raise ValueError("mismatched n")
    n = first.n
    reflect = first.reflect != second.reflect
    shift = second.vertex_image(first.vertex_image(0))
    u_scalars, d_scalars = [], []
    for i in range(n):
        for fam, out in (("u", u_scalars), ("d", d_scalars)):
            c1, mid = first.arrow_image(Arrow(fam, i))
            c2, _ = second.arrow_image(mid)
            out.append(c1 * c2)
    return DiagonalMapSpec(n, reflect, shift, tuple(u_scalars), tuple(d_scalars))


def identity_spec(n: int) -> DiagonalMapSpec:
    ones = tuple(Fraction(1) for _ in range(n))
    return DiagonalMapSpec(n, False, 0, ones, ones)


def paper_nakayama(params: Parameters) -> DiagonalMapSpec:
    """u_i -> -beta_{i-1}^{-1} u_i and d_i -> -beta_{i-1}^{-1} d_i."""
    n = params.n
    if not params.beta_all_nonzero():
        raise ValueError("Nakayama candidates need nonzero beta")
    w = tuple(-1 / params.beta[(i - 1) % n] for i in range(n))
    return DiagonalMapSpec(n, False, 0, w, w)


def derived_nakayama(params: Parameters) -> DiagonalMapSpec:
    """u_i -> -beta_i^{-1} u_i and d_i -> -beta_i d_i.

    Scales relation rho1_i by -beta_i^{-1} and rho2_i by -beta_i, hence
    preserves the relation spans for every nonzero beta.
    """
    n = params.n
    if not params.beta_all_nonzero():
        raise ValueError("Nakayama candidates need nonzero beta")
    uw = tuple(-1 / params.beta[i] for i in range(n))
    dw = tuple(-params.beta[i] for i in range(n))
    return DiagonalMapSpec(n, False, 0, uw, dw)


@dataclass
class DiagonalMapReport:
    ok: bool
    per_relation: list[dict]


def check_diagonal_map(spec: DiagonalMapSpec, src: Parameters, tgt: Parameters) -> DiagonalMapReport:
    """Image of every defining relation of H(src) must lie in the span of
    the defining relations of H(tgt) (filtered degree <= 3 when gamma != 0).

    When an image is exactly a scalar multiple of a single target
    relation, that scalar is reported.
    """
    src_rels = build_system(PRESET_QDU, src).relation_elements()
    tgt_rels = build_system(PRESET_QDU, tgt).relation_elements()
    images = [spec.apply(r) for r in src_rels]
    vecs = _vectorize(images + tgt_rels)
    image_vecs, tgt_vecs = vecs[: len(images)], vecs[len(images):]
    details = []
    ok = True
    for idx, (img, vec) in enumerate(zip(images, image_vecs)):
        member = in_span(tgt_vecs, vec)
        ok = ok and member
        scalar = None
        proportional_to = None
        for jdx, rel in enumerate(tgt_rels):
            common = next((p for p in rel.terms if p in img.terms), None)
            if common is None:
                continue
            c = img.terms[common] / rel.terms[common]
            if rel.scale(c) == img:
                scalar = c
                proportional_to = jdx
                break
        details.append({
            "relation": idx,
            "in_span": member,
            "proportional_to": proportional_to,
            "scalar": scalar,
        })
    return DiagonalMapReport(ok, details)


# ---------------------------------------------------------------------------
# Property report (noetherian / PWD / polynomial subalgebra)
# ---------------------------------------------------------------------------

@dataclass
class PropertyReport:
    beta_nonzero: bool
    noetherian: bool
    pwd: bool
    polynomial_subalgebra: bool
    witnesses: list[dict]
    checks_passed: bool


def property_report(params: Parameters, subalgebra_degree: int = 4) -> PropertyReport:
    """Flags follow the beta criterion; every flag is backed by a witness.

    With all beta_i nonzero the subalgebra k[u_i d_i, d_{i-1} u_{i-1}] is
    certified free up to the stated degree; with a zero beta_i the
    zero-divisor pair and the algebraic dependence are certified instead.
    """
    n = params.n
    sys = ensure_confluent(build_system(PRESET_QDU, params))
    flag = params.beta_all_nonzero()
    witnesses: list[dict] = []
    checks = True
    if flag:
        for i in range(n):
            gen_x = Element.from_path(path_from_word(n, i, "ud"))        # u_i d_i
            gen_y = Element.from_path(path_from_word(n, i, "du"))        # d_{i-1} u_{i-1}
            monomials = []
            for a in range(subalgebra_degree + 1):
                for b in range(subalgebra_degree + 1 - a):
                    word = Element.from_path(trivial_path(n, i))
                    for _ in range(a):
                        word = word * gen_x
                    for _ in range(b):
                        word = word * gen_y
                    monomials.append(normal_form(sys, word))
            vecs = _vectorize(monomials)
            space = RowSpace(len(vecs[0]))
            independent = all(space.add(v) for v in vecs)
            checks = checks and independent
            witnesses.append({"vertex": i, "kind": "free-subalgebra", "ok": independent})
    else:
        for i in range(n):
            if params.beta[i] != 0:
                continue
            a = (
                Element.from_path(path_from_word(n, i, "du"))
                - Element.from_path(path_from_word(n, i, "ud"), params.alpha[i])
                - Element.from_path(trivial_path(n, i), params.gamma[i])
            )
            b = Element.from_path(path_from_word(n, i, "u"))
            d_i = Element.from_path(path_from_word(n, (i + 1) % n, "d"))
            left_zero = is_zero_in_quotient(sys, a * b)
            right_zero = is_zero_in_quotient(sys, d_i * a)
            dependence = is_zero_in_quotient(sys, a * Element.from_path(path_from_word(n, i, "ud")))
            checks = checks and left_zero and right_zero and dependence
            witnesses.append({
                "vertex": i,
                "kind": "zero-divisor",
                "left": str(a),
                "right": str(b),
                "product_zero": left_zero,
                "mirror_zero": right_zero,
                "dependence_zero": dependence,
            })
    return PropertyReport(flag, flag, flag, flag, witnesses, checks)


# ---------------------------------------------------------------------------
# Non-noetherian ascending chain
# ---------------------------------------------------------------------------

def _normal_profile(p: Path) -> tuple[int, int, int]:
    """Decompose a normal word into (u-run, du-pairs, d-run)."""
    word = letter_profile(p)
    a = 0
    while a < len(word) and word[a] == "u":
        a += 1
    j = 0
    pos = a
    while word[pos:pos + 2] == "du":
        j += 1
        pos += 2
    c = len(word) - pos
    if word[pos:] != "d" * c:
        raise ValueError(f"not a normal word: {word}")
    return a, j, c


@dataclass
class ChainReport:
    vertex: int
    s_max: int
    generator: str
    up_cycle: str
    annihilation_ok: bool
    strict_inclusions: list[tuple[int, bool]]
    support_pattern_ok: bool

    @property
    def ok(self) -> bool:
        return (self.annihilation_ok and self.support_pattern_ok
                and all(strict for _, strict in self.strict_inclusions))


def noetherian_chain_check(params: Parameters, i: int | None = None, s_max: int = 3,
                           degree_bound: int | None = None) -> ChainReport:
    """Certify the strictly ascending chain of right ideals when beta_i = 0.

    With U the full up-cycle at i and g = alpha_i u_i d_i + gamma_i e_i
    - d_{i-1} u_{i-1}, the ideals I_s = sum_{m<=s} U^m g A satisfy
    I_s != I_{s+1}: U^{s+1} g is not in the degree-bounded span of the
    normal forms of U^m g b over basis monomials b.  Also checks the
    annihilation U g u_m = 0 for every vertex m and the support pattern
    of the spanning products (u-runs are mn or mn+1).
    """
    n = params.n
    if i is None:
        i = next((k for k in range(n) if params.beta[k] == 0), None)
        if i is None:
            raise ValueError("no beta_i = 0; the chain construction requires one")
    if params.beta[i] != 0:
        raise ValueError(f"beta_{i} must be zero")
    target_degree = (s_max + 1) * n + 2
    if degree_bound is None:
        degree_bound = target_degree
    if degree_bound < target_degree:
        raise ValueError("degree bound too small for the requested s_max")
    sys = ensure_confluent(build_system(PRESET_QDU, params))
    u_cycle = Element.from_path(up_cycle_path(n, i))
    g = (
        Element.from_path(path_from_word(n, i, "ud"), params.alpha[i])
        + Element.from_path(trivial_path(n, i), params.gamma[i])
        - Element.from_path(x_path(n, i - 1))
    )
    g_with_one = (
        Element.from_path(path_from_word(n, i, "ud"), params.alpha[i])
        + Element.identity(n).scale(params.gamma[i])
        - Element.from_path(x_path(n, i - 1))
    )
    annihilation_ok = all(
        is_zero_in_quotient(sys, u_cycle * g_with_one * Element.from_path(path_from_word(n, m, "u")))
        for m in range(n)
    )
    generators = []
    acc = Element.from_path(trivial_path(n, i))
    for _ in range(s_max + 1):
        acc = acc * u_cycle
        generators.append(normal_form(sys, acc * g))

    basis_by_degree = {k: [p for p in enumerate_basis(sys, k) if p.source == i]
                       for k in range(degree_bound + 1)}
    support_ok = True
    strict = []
    span_rows: list[Element] = []
    for s in range(1, s_max + 1):
        m = s
        g_m = generators[m - 1]
        max_b = degree_bound - m * n - 2
        for k in range(max_b + 1):
            for b in basis_by_degree[k]:
                product = normal_form(sys, g_m * Element.from_path(b))
                if product.is_zero():
                    continue
                for p in product.terms:
                    a_run, j_pairs, c_run = _normal_profile(p)
                    if a_run == m * n:
                        if params.gamma[i] == 0 and j_pairs == 0:
                            support_ok = False
                    elif a_run == m * n + 1:
                        if c_run == 0:
                            support_ok = False
                    else:
                        support_ok = False
                span_rows.append(product)
        g_next = generators[s]
        vecs = _vectorize(span_rows + [g_next])
        strict.append((s, not in_span(vecs[:-1], vecs[-1])))
    return ChainReport(i, s_max, str(g), str(up_cycle_path(n, i)), annihilation_ok,
                       strict, support_ok)


# ---------------------------------------------------------------------------
# Piecewise-domain probe on H itself
# ---------------------------------------------------------------------------

@dataclass
class PwdHReport:
    trials: int
    seed: int
    beta_nonzero: bool
    ok: bool
    failures: list
    counterexample: tuple[str, str] | None


def pwd_probe_H(params: Parameters, degree_bound: int = 5, trials: int = 200,
                seed: int = 0) -> PwdHReport:
    """Sample sandwiched products in H and test whether any vanishes.

    With all beta_i nonzero every product must be nonzero; with some
    beta_i = 0 the deterministic zero-divisor pair is exhibited as well.
    """
    n = params.n
    sys = ensure_confluent(build_system(PRESET_QDU, params))
    pools: dict[tuple[int, int], list[Path]] = {}
    for k in range(degree_bound + 1):
        for p in enumerate_basis(sys, k):
            pools.setdefault((p.source, p.target), []).append(p)
    rng = random.Random(seed)
    beta_ok = params.beta_all_nonzero()
    failures = []
    for t in range(trials):
        i, k, j = (rng.randrange(n) for _ in range(3))
        pool_a, pool_b = pools.get((i, k), []), pools.get((k, j), [])
        if not pool_a or not pool_b:
            continue
        a = _random_combination(pool_a, rng)
        b = _random_combination(pool_b, rng)
        product = normal_form(sys, a * b)
        if product.is_zero():
            failures.append((t, str(a), str(b)))
    counterexample = None
    if not beta_ok:
        bad = next(k for k in range(n) if params.beta[k] == 0)
        a = (
            Element.from_path(path_from_word(n, bad, "du"))
            - Element.from_path(path_from_word(n, bad, "ud"), params.alpha[bad])
            - Element.from_path(trivial_path(n, bad), params.gamma[bad])
        )
        b = Element.from_path(path_from_word(n, bad, "u"))
        if is_zero_in_quotient(sys, a * b):
            counterexample = (str(a), str(b))
    ok = (not failures) if beta_ok else (counterexample is not None)
    return PwdHReport(trials, seed, beta_ok, ok, failures, counterexample)


def _random_combination(pool: list[Path], rng: random.Random) -> Element:
    size = rng.randint(1, min(3, len(pool)))
    chosen = rng.sample(pool, size)
    terms = {}
    for p in chosen:
        terms[p] = Fraction(rng.choice([x for x in range(-5, 6) if x]), rng.randint(1, 3))
    return Element(pool[0].n, terms)
