"""The graded down-up algebra smashed with a cyclic group, over cyclotomics.

R = k<u, d | d^2u + ud^2, du^2 + u^2d> has normal monomial basis
u^a (du)^b d^c; the generator g of Z_n acts by g(u) = zeta u,
g(d) = zeta^{-1} d, so g scales a monomial by zeta^(#u - #d).  The smash
product multiplies by (r # g^i)(s # g^j) = r g^i(s) # g^{i+j}.

The orthogonal idempotents f_i = (1/n) sum_j zeta^{ij} # g^j decompose
the identity; the capped generators U_i = f_i (u # 1) and
D_i = (d # 1) f_i satisfy the quiver down-up relations with alpha = 0,
gamma = 0 and beta identically -1, and the corner dimensions
dim f_i B f_j match the quiver down-up dimension matrices degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .core import Element, Parameters, path_from_word
from .cyclotomic import CycScalar
from .linalg import RowSpace
from .rewrite import (
    PRESET_GRADED,
    PRESET_QDU,
    build_system,
    dimension_matrix,
    ensure_confluent,
    normal_form,
)

# R-monomials in normal form: (a, b, c) stands for u^a (du)^b d^c.
RMonomial = tuple[int, int, int]


def monomial_degree(m: RMonomial) -> int:
    a, b, c = m
    return a + 2 * b + c


def monomial_weight(m: RMonomial) -> int:
    """#u - #d, the character weight of the cyclic action."""
    a, _, c = m
    return a - c


def monomials_of_degree(k: int) -> list[RMonomial]:
    out = []
    for a in range(k + 1):
        for b in range((k - a) // 2 + 1):
            c = k - a - 2 * b
            out.append((a, b, c))
    return sorted(out)


@lru_cache(maxsize=1)
def _graded_system():
    return ensure_confluent(build_system(PRESET_GRADED))


def _monomial_to_path(m: RMonomial):
    a, b, c = m
    return path_from_word(1, 0, "u" * a + "du" * b + "d" * c)


def _path_to_monomial(p) -> RMonomial:
    word = "".join(arrow.family for arrow in p.arrows)
    a = 0
    while a < len(word) and word[a] == "u":
        a += 1
    b = 0
    pos = a
    while word[pos:pos + 2] == "du":
        b += 1
        pos += 2
    c = len(word) - pos
    if word[pos:] != "d" * c:
        raise ValueError(f"not a normal graded down-up word: {word}")
    return (a, b, c)


@lru_cache(maxsize=None)
def r_monomial_product(m1: RMonomial, m2: RMonomial) -> tuple[tuple[RMonomial, Fraction], ...]:
    """Normal-form expansion of the product of two R-monomials."""
    sys = _graded_system()
    prod = Element.from_path(_monomial_to_path(m1)) * Element.from_path(_monomial_to_path(m2))
    nf = normal_form(sys, prod)
    return tuple(sorted(((_path_to_monomial(p), c) for p, c in nf.terms.items())))


class SmashElement:
    """Finite map (R-monomial, group exponent) -> cyclotomic scalar."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[RMonomial, int], CycScalar] | None = None):
        if n < 2:
            raise ValueError("smash product needs n >= 2")
        clean: dict[tuple[RMonomial, int], CycScalar] = {}
        for (m, j), c in (terms or {}).items():
            if not c.is_zero():
                clean[(m, j % n)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):  # pragma: no cover - guard only
        raise AttributeError("SmashElement is immutable")

    @classmethod
    def zero(cls, n: int) -> "SmashElement":
        return cls(n, {})

    @classmethod
    def monomial(cls, n: int, m: RMonomial, j: int = 0, coeff: CycScalar | None = None) -> "SmashElement":
        return cls(n, {(m, j): coeff if coeff is not None else CycScalar.one(n)})

    @classmethod
    def one(cls, n: int) -> "SmashElement":
        return cls.monomial(n, (0, 0, 0), 0)

    @classmethod
    def gen_u(cls, n: int) -> "SmashElement":
        return cls.monomial(n, (1, 0, 0), 0)

    @classmethod
    def gen_d(cls, n: int) -> "SmashElement":
        return cls.monomial(n, (0, 0, 1), 0)

    @classmethod
    def group(cls, n: int, j: int) -> "SmashElement":
        return cls.monomial(n, (0, 0, 0), j)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, SmashElement) and self.n == other.n and self.terms == other.terms

    def __add__(self, other: "SmashElement") -> "SmashElement":
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, CycScalar.zero(self.n)) + c
            if s.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = s
        return SmashElement(self.n, terms)

    def __neg__(self) -> "SmashElement":
        return SmashElement(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SmashElement") -> "SmashElement":
        return self + (-other)

    def scale(self, c) -> "SmashElement":
        if not isinstance(c, CycScalar):
            c = CycScalar.from_rational(self.n, c)
        return SmashElement(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "SmashElement") -> "SmashElement":
        return smash_multiply(self, other)

    def degrees(self) -> set[int]:
        return {monomial_degree(m) for (m, _) in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (m, j) in sorted(self.terms):
            a, b, c = m
            word = "u" * a + "du" * b + "d" * c or "1"
            bits.append(f"({self.terms[(m, j)]})*{word}#g^{j}")
        return " + ".join(bits)


def group_action(n: int, j: int, m: RMonomial) -> CycScalar:
    """Scalar by which g^j acts on the monomial: zeta^{j * weight}."""
    return CycScalar.zeta_power(n, j * monomial_weight(m))


def smash_multiply(a: SmashElement, b: SmashElement) -> SmashElement:
    if a.n != b.n:
        raise ValueError("mismatched group orders")
    n = a.n
    terms: dict[tuple[RMonomial, int], CycScalar] = {}
    for (m1, j1), c1 in a.terms.items():
        for (m2, j2), c2 in b.terms.items():
            scalar = c1 * c2 * group_action(n, j1, m2)
            for m, q in r_monomial_product(m1, m2):
                key = (m, (j1 + j2) % n)
                val = terms.get(key, CycScalar.zero(n)) + scalar * q
                if val.is_zero():
                    terms.pop(key, None)
                else:
                    terms[key] = val
    return SmashElement(n, terms)


@dataclass
class IdempotentSet:
    n: int
    idempotents: list[SmashElement]

    def __getitem__(self, i: int) -> SmashElement:
        return self.idempotents[i % self.n]


def build_idempotents(n: int) -> IdempotentSet:
    """f_i = (1/n) sum_j zeta^{ij} # g^j; orthogonality and completeness verified."""
    if n < 2:
        raise ValueError("idempotent decomposition needs n >= 2")
    inv_n = Fraction(1, n)
    fs = []
    for i in range(n):
        terms = {((0, 0, 0), j): CycScalar.zeta_power(n, i * j) * inv_n for j in range(n)}
        fs.append(SmashElement(n, terms))
    total = SmashElement.zero(n)
    for i, f in enumerate(fs):
        total = total + f
        for j, g in enumerate(fs):
            prod = smash_multiply(f, g)
            expected = f if i == j else SmashElement.zero(n)
            if prod != expected:
                raise AssertionError(f"idempotent orthogonality failed at ({i},{j})")
    if total != SmashElement.one(n):
        raise AssertionError("idempotents do not sum to the identity")
    return IdempotentSet(n, fs)


@dataclass
class CapGenerators:
    n: int
    us: list[SmashElement]
    ds: list[SmashElement]
    both_forms_agree: bool


def cap_generators(n: int, idem: IdempotentSet | None = None) -> CapGenerators:
    """U_i = f_i (u#1) = (u#1) f_{i+1} and D_i = (d#1) f_i = f_{i+1} (d#1)."""
    if idem is None:
        idem = build_idempotents(n)
    u, d = SmashElement.gen_u(n), SmashElement.gen_d(n)
    us, ds = [], []
    agree = True
    for i in range(n):
        u_left = smash_multiply(idem[i], u)
        u_right = smash_multiply(u, idem[i + 1])
        d_left = smash_multiply(d, idem[i])
        d_right = smash_multiply(idem[i + 1], d)
        agree = agree and u_left == u_right and d_left == d_right
        us.append(u_left)
        ds.append(d_left)
    return CapGenerators(n, us, ds, agree)


@dataclass
class SkewGroupReport:
    n: int
    max_degree: int
    idempotents_ok: bool
    generator_forms_agree: bool
    proof_identities_ok: bool
    relation_kill: dict[int, bool]
    dimensions_ok: bool
    dimension_mismatch: tuple | None

    @property
    def ok(self) -> bool:
        return (self.idempotents_ok and self.generator_forms_agree
                and self.proof_identities_ok
                and self.relation_kill.get(-1, False)
                and not self.relation_kill.get(1, True)
                and self.dimensions_ok)


def verify_quotient_match(n: int, params: Parameters | None = None, max_degree: int = 4) -> SkewGroupReport:
    """Identities, relation matching, and degreewise corner dimensions.

    (a) checks D_{i-1}U_{i-1}U_i + U_iU_{i+1}D_{i+1} = 0 and
    D_iD_{i-1}U_{i-1} + U_{i+1}D_{i+1}D_i = 0; (b) tests which constant
    beta in {1, -1} makes u_i -> U_i, d_i -> D_i kill the relations of
    H(0, beta, 0); (c) compares dim f_i B f_j per degree with the quiver
    down-up dimension matrix by exact rank computation over cyclotomics.
    """
    if n < 2:
        raise ValueError("skew-group verification needs n >= 2")
    if n > 12:
        raise ValueError("n capped at 12 for cyclotomic checks")
    if params is not None:
        if params.n != n:
            raise ValueError("parameter length disagrees with n")
        if any(a != 0 for a in params.alpha) or not params.gamma_is_zero():
            raise ValueError("skew-group comparison needs alpha = gamma = 0")
    idem = build_idempotents(n)  # raises if orthogonality/completeness fail
    idempotents_ok = True
    caps = cap_generators(n, idem)
    us, ds = caps.us, caps.ds

    proof_identities_ok = True
    for i in range(n):
        lhs1 = ds[(i - 1) % n] * us[(i - 1) % n] * us[i] + us[i] * us[(i + 1) % n] * ds[(i + 1) % n]
        lhs2 = ds[i] * ds[(i - 1) % n] * us[(i - 1) % n] + us[(i + 1) % n] * ds[(i + 1) % n] * ds[i]
        proof_identities_ok = proof_identities_ok and lhs1.is_zero() and lhs2.is_zero()

    relation_kill = {}
    for const in (1, -1):
        killed = True
        for i in range(n):
            rel1 = ds[(i - 1) % n] * us[(i - 1) % n] * us[i] - (us[i] * us[(i + 1) % n] * ds[(i + 1) % n]).scale(const)
            rel2 = ds[i] * ds[(i - 1) % n] * us[(i - 1) % n] - (us[(i + 1) % n] * ds[(i + 1) % n] * ds[i]).scale(const)
            killed = killed and rel1.is_zero() and rel2.is_zero()
        relation_kill[const] = killed

    matched = Parameters.of(n, [0] * n, [-1] * n, [0] * n)
    qdu = build_system(PRESET_QDU, matched)
    dimensions_ok = True
    mismatch = None
    for k in range(max_degree + 1):
        expected = dimension_matrix(qdu, k)
        monomials = monomials_of_degree(k)
        coords = {(m, j): pos for pos, (m, j) in enumerate(
            ((m, j) for m in monomials for j in range(n)))}
        for i in range(n):
            for jv in range(n):
                space = RowSpace(len(coords))
                rank_count = 0
                for m in monomials:
                    for t in range(n):
                        prod = idem[i] * SmashElement.monomial(n, m, t) * idem[jv]
                        if prod.is_zero():
                            continue
                        row = [CycScalar.zero(n)] * len(coords)
                        for key, c in prod.terms.items():
                            row[coords[key]] = c
                        if space.add(row):
                            rank_count += 1
                if rank_count != expected[i][jv]:
                    dimensions_ok = False
                    if mismatch is None:
                        mismatch = (k, i, jv, expected[i][jv], rank_count)
    return SkewGroupReport(n, max_degree, idempotents_ok, caps.both_forms_agree,
                           proof_identities_ok, relation_kill, dimensions_ok, mismatch)
