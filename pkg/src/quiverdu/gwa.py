"""The generalized Weyl algebra model and its two-way isomorphism with H.

The base ring is R = sum_i k[x_i, y_i] e_i with orthogonal idempotents e_i.
The shift automorphism sends e_i -> e_{i+1}, x_i -> y_{i+1},
y_i -> alpha_i y_{i+1} + beta_i x_{i+1} + gamma_i e_{i+1}; it is invertible
exactly when every beta_i is nonzero.  The extension T adds X^+ and X^-
with X^- X^+ = x (= sum x_i), X^+ X^- = sigma(x), and X^{+-} r =
sigma^{+-1}(r) X^{+-}.

A GWA element is kept in the canonical form sum_m r_m X^m with the base
coefficient on the left; X^m means (X^+)^m for m > 0 and (X^-)^{-m} for
m < 0.  The generator attached to vertex i satisfies
X_i^- = e_i X^- = X^- e_{i+1} and X_i^+ = X^+ e_i = e_{i+1} X^+, so that
X_i^- X_i^+ = x_i and X_i^+ X_i^- = y_{i+1}.

The algebra maps are theta(u_i) = X_i^-, theta(d_i) = X_i^+ and its
inverse theta_prime with theta_prime(x_i) = u_i d_i and
theta_prime(y_i) = d_{i-1} u_{i-1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import Element, Parameters, Path, path_from_word, trivial_path
from .rewrite import PRESET_QDU, ReductionSystem, build_system, normal_form


class BaseElement:
    """Element of R: finite map (vertex, x-exp, y-exp) -> rational."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, int, int], Fraction] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        clean: dict[tuple[int, int, int], Fraction] = {}
        for (v, a, b), c in (terms or {}).items():
            if not 0 <= v < n or a < 0 or b < 0:
                raise ValueError("bad base monomial")
            c = Fraction(c)
            if c:
                clean[(v, a, b)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):  # pragma: no cover - guard only
        raise AttributeError("BaseElement is immutable")

    @classmethod
    def zero(cls, n: int) -> "BaseElement":
        return cls(n, {})

    @classmethod
    def e(cls, n: int, v: int) -> "BaseElement":
        return cls(n, {(v % n, 0, 0): Fraction(1)})

    @classmethod
    def x(cls, n: int, i: int) -> "BaseElement":
        return cls(n, {(i % n, 1, 0): Fraction(1)})

    @classmethod
    def y(cls, n: int, i: int) -> "BaseElement":
        return cls(n, {(i % n, 0, 1): Fraction(1)})

    @classmethod
    def one(cls, n: int) -> "BaseElement":
        return cls(n, {(v, 0, 0): Fraction(1) for v in range(n)})

    @classmethod
    def x_total(cls, n: int) -> "BaseElement":
        return cls(n, {(v, 1, 0): Fraction(1) for v in range(n)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, BaseElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "BaseElement") -> "BaseElement":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return BaseElement(self.n, terms)

    def __neg__(self) -> "BaseElement":
        return BaseElement(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BaseElement") -> "BaseElement":
        return self + (-other)

    def scale(self, c) -> "BaseElement":
        c = Fraction(c)
        return BaseElement(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "BaseElement") -> "BaseElement":
        # Componentwise per vertex: e_i are orthogonal idempotents.
        terms: dict[tuple[int, int, int], Fraction] = {}
        for (v, a, b), c in self.terms.items():
            for (w, a2, b2), c2 in other.terms.items():
                if v != w:
                    continue
                key = (v, a + a2, b + b2)
                val = terms.get(key, Fraction(0)) + c * c2
                if val:
                    terms[key] = val
                else:
                    terms.pop(key, None)
        return BaseElement(self.n, terms)

    def poly_degree(self) -> int:
        return max((a + b for (_, a, b) in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (v, a, b) in sorted(self.terms):
            c = self.terms[(v, a, b)]
            mono = []
            if a:
                mono.append(f"x{v}" + (f"^{a}" if a > 1 else ""))
            if b:
                mono.append(f"y{v}" + (f"^{b}" if b > 1 else ""))
            if not mono:
                mono.append(f"e{v}")
            bits.append(f"{c}*{'*'.join(mono)}" if c != 1 else "*".join(mono))
        return " + ".join(bits)


def sigma(params: Parameters, b: BaseElement) -> BaseElement:
    """The shift substitution extended multiplicatively to R."""
    n = params.n
    out = BaseElement.zero(n)
    for (v, a, bexp), c in b.terms.items():
        image = BaseElement.e(n, v + 1)
        xs = BaseElement.y(n, v + 1)
        ys = (
            BaseElement.y(n, v + 1).scale(params.alpha[v])
            + BaseElement.x(n, v + 1).scale(params.beta[v])
            + BaseElement.e(n, v + 1).scale(params.gamma[v])
        )
        for _ in range(a):
            image = image * xs
        for _ in range(bexp):
            image = image * ys
        out = out + image.scale(c)
    return out


def sigma_inverse(params: Parameters, b: BaseElement) -> BaseElement:
    if not params.beta_all_nonzero():
        raise ValueError("sigma is not invertible: some beta_i = 0")
    n = params.n
    out = BaseElement.zero(n)
    for (v, a, bexp), c in b.terms.items():
        w = (v - 1) % n
        image = BaseElement.e(n, w)
        # sigma(y_w) = alpha_w y_v + beta_w x_v + gamma_w e_v  =>  invert for x_v
        xs = (
            BaseElement.y(n, w)
            - BaseElement.x(n, w).scale(params.alpha[w])
            - BaseElement.e(n, w).scale(params.gamma[w])
        ).scale(1 / params.beta[w])
        ys = BaseElement.x(n, w)
        for _ in range(a):
            image = image * xs
        for _ in range(bexp):
            image = image * ys
        out = out + image.scale(c)
    return out


def sigma_power(params: Parameters, b: BaseElement, m: int) -> BaseElement:
    step = sigma if m >= 0 else sigma_inverse
    for _ in range(abs(m)):
        b = step(params, b)
    return b


class GwaElement:
    """Canonical form sum_m r_m X^m with r_m in R on the left."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, BaseElement] | None = None):
        clean: dict[int, BaseElement] = {}
        for m, r in (terms or {}).items():
            if r.n != n:
                raise ValueError("coefficient over wrong n")
            if not r.is_zero():
                clean[m] = r
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):  # pragma: no cover - guard only
        raise AttributeError("GwaElement is immutable")

    @classmethod
    def zero(cls, n: int) -> "GwaElement":
        return cls(n, {})

    @classmethod
    def from_base(cls, r: BaseElement) -> "GwaElement":
        return cls(r.n, {0: r})

    @classmethod
    def x_minus(cls, n: int, i: int | None = None) -> "GwaElement":
        r = BaseElement.one(n) if i is None else BaseElement.e(n, i)
        return cls(n, {-1: r})

    @classmethod
    def x_plus(cls, n: int, i: int | None = None) -> "GwaElement":
        r = BaseElement.one(n) if i is None else BaseElement.e(n, i + 1)
        return cls(n, {1: r})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GwaElement) and self.n == other.n and self.terms == other.terms

    def __add__(self, other: "GwaElement") -> "GwaElement":
        terms = dict(self.terms)
        for m, r in other.terms.items():
            s = terms.get(m, BaseElement.zero(self.n)) + r
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return GwaElement(self.n, terms)

    def __neg__(self) -> "GwaElement":
        return GwaElement(self.n, {m: -r for m, r in self.terms.items()})

    def __sub__(self, other: "GwaElement") -> "GwaElement":
        return self + (-other)

    def scale(self, c) -> "GwaElement":
        return GwaElement(self.n, {m: r.scale(c) for m, r in self.terms.items()})

    def x_degrees(self) -> list[int]:
        return sorted(self.terms)

    def top_x_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero element has no top degree")
        return max(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms):
            r = self.terms[m]
            if m == 0:
                bits.append(f"({r})")
            else:
                gen = "X+" if m > 0 else "X-"
                bits.append(f"({r})*{gen}^{abs(m)}")
        return " + ".join(bits)


def _cross_factor(params: Parameters, m1: int, m2: int) -> BaseElement:
    """Coefficient from contracting X^{m1} X^{m2} into X^{m1+m2}."""
    n = params.n
    out = BaseElement.one(n)
    while m1 > 0 and m2 < 0:
        out = out * sigma_power(params, BaseElement.x_total(n), m1)
        m1 -= 1
        m2 += 1
    while m1 < 0 and m2 > 0:
        out = out * sigma_power(params, BaseElement.x_total(n), m1 + 1)
        m1 += 1
        m2 -= 1
    return out


def gwa_multiply(params: Parameters, a: GwaElement, b: GwaElement) -> GwaElement:
    if not params.beta_all_nonzero():
        raise ValueError("GWA arithmetic requires all beta_i nonzero")
    out = GwaElement.zero(params.n)
    for m1, r in a.terms.items():
        for m2, s in b.terms.items():
            coeff = r * sigma_power(params, s, m1) * _cross_factor(params, m1, m2)
            out = out + GwaElement(params.n, {m1 + m2: coeff})
    return out


def theta(params: Parameters, a: Element) -> GwaElement:
    """u_i -> X_i^-, d_i -> X_i^+, extended multiplicatively and linearly."""
    if not params.beta_all_nonzero():
        raise ValueError("theta requires all beta_i nonzero")
    n = params.n
    out = GwaElement.zero(n)
    for p, c in a.terms.items():
        acc = GwaElement.from_base(BaseElement.e(n, p.source))
        for arrow in p.arrows:
            img = GwaElement.x_minus(n, arrow.index) if arrow.family == "u" else GwaElement.x_plus(n, arrow.index)
            acc = gwa_multiply(params, acc, img)
        out = out + acc.scale(c)
    return out


def theta_prime(params: Parameters, t: GwaElement, sys: ReductionSystem | None = None) -> Element:
    """x_i -> u_i d_i, y_i -> d_{i-1} u_{i-1}, X^- -> sum u_i, X^+ -> sum d_i.

    The image is returned in normal form for the quiver down-up system.
    """
    if not params.beta_all_nonzero():
        raise ValueError("theta_prime requires all beta_i nonzero")
    n = params.n
    if sys is None:
        sys = build_system(PRESET_QDU, params)
    u_total = Element(n, {path_from_word(n, i, "u"): Fraction(1) for i in range(n)})
    d_total = Element(n, {path_from_word(n, (i + 1) % n, "d"): Fraction(1) for i in range(n)})
    out = Element.zero(n)
    for m, r in t.terms.items():
        base_img = Element.zero(n)
        for (v, a, b), c in r.terms.items():
            word = Element.from_path(trivial_path(n, v), c)
            for _ in range(a):
                word = word * Element.from_path(path_from_word(n, v, "ud"))
            for _ in range(b):
                word = word * Element.from_path(path_from_word(n, v, "du"))
            base_img = base_img + word
        shift = Element.identity(n)
        for _ in range(abs(m)):
            shift = shift * (d_total if m > 0 else u_total)
        out = out + base_img * shift
    return normal_form(sys, out)


def path_x_weight(p: Path) -> int:
    """Stored X-exponent of theta(p): one +1 per d arrow, -1 per u arrow."""
    return sum(1 if a.family == "d" else -1 for a in p.arrows)


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------

@dataclass
class GwaPwdReport:
    trials: int
    seed: int
    ok: bool
    failures: list


def _random_corner_element(params: Parameters, i: int, k: int, rng: random.Random,
                           degree_bound: int) -> GwaElement:
    """Nonzero random element of e_i T e_k with bounded degrees."""
    n = params.n
    terms: dict[int, BaseElement] = {}
    residue = (i - k) % n
    choices = [m for m in range(-degree_bound, degree_bound + 1) if m % n == residue]
    for m in rng.sample(choices, k=min(len(choices), rng.randint(1, 2))):
        poly: dict[tuple[int, int, int], Fraction] = {}
        for _ in range(rng.randint(1, 2)):
            a = rng.randint(0, max(0, degree_bound - 1))
            b = rng.randint(0, max(0, degree_bound - 1 - a))
            c = Fraction(rng.choice([x for x in range(-5, 6) if x]), rng.randint(1, 3))
            poly[(i, a, b)] = poly.get((i, a, b), Fraction(0)) + c
        base = BaseElement(n, poly)
        if base:
            terms[m] = base
    if not terms:
        terms[residue if residue <= degree_bound else residue - n] = BaseElement.e(n, i)
    return GwaElement(n, terms)


def pwd_probe_gwa(params: Parameters, degree_bound: int = 3, trials: int = 200,
                  seed: int = 0) -> GwaPwdReport:
    """Sample sandwiched products in T and assert none vanishes.

    Also asserts the top X-degree of a product is the sum of the top
    X-degrees of the factors.
    """
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        i, k, j = (rng.randrange(params.n) for _ in range(3))
        a = _random_corner_element(params, i, k, rng, degree_bound)
        b = _random_corner_element(params, k, j, rng, degree_bound)
        prod = gwa_multiply(params, a, b)
        if prod.is_zero():
            failures.append((t, "zero product", str(a), str(b)))
        elif prod.top_x_degree() != a.top_x_degree() + b.top_x_degree():
            failures.append((t, "top degree dropped", str(a), str(b)))
    return GwaPwdReport(trials, seed, not failures, failures)


@dataclass
class GwaVerifyReport:
    relations_killed: bool
    roundtrip_arrows: bool
    roundtrip_base: bool
    grading_ok: bool
    pwd: GwaPwdReport

    @property
    def ok(self) -> bool:
        return (self.relations_killed and self.roundtrip_arrows
                and self.roundtrip_base and self.grading_ok and self.pwd.ok)


def verify_gwa(params: Parameters, trials: int = 200, seed: int = 0,
               degree_bound: int = 3) -> GwaVerifyReport:
    n = params.n
    sys = build_system(PRESET_QDU, params)
    relations_killed = all(
        theta(params, rule.as_relation()).is_zero() for rule in sys.rules
    )
    roundtrip_arrows = True
    grading_ok = True
    for i in range(n):
        for word, src in (("u", i), ("d", (i + 1) % n)):
            p = path_from_word(n, src, word)
            img = theta(params, Element.from_path(p))
            if theta_prime(params, img, sys) != Element.from_path(p):
                roundtrip_arrows = False
            if set(img.x_degrees()) != {path_x_weight(p)}:
                grading_ok = False
        e_i = Element.from_path(trivial_path(n, i))
        if theta_prime(params, theta(params, e_i), sys) != e_i:
            roundtrip_arrows = False
    roundtrip_base = True
    for i in range(n):
        for gen in (
            GwaElement.from_base(BaseElement.x(n, i)),
            GwaElement.from_base(BaseElement.y(n, i)),
            GwaElement.x_minus(n, i),
            GwaElement.x_plus(n, i),
        ):
            if theta(params, theta_prime(params, gen, sys)) != gen:
                roundtrip_base = False
    pwd = pwd_probe_gwa(params, degree_bound=degree_bound, trials=trials, seed=seed)
    return GwaVerifyReport(relations_killed, roundtrip_arrows, roundtrip_base, grading_ok, pwd)
