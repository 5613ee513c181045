"""Isomorphism constructors, witness verification, and the graded decision.

Three constructors act on parameters and on generators:

  scale(lambda):  u_i -> lambda_i u_i, d_i -> d_i;
                  alpha_i' = lambda_i lambda_{i-1}^{-1} alpha_i,
                  beta_i'  = lambda_{i+1} lambda_{i-1}^{-1} beta_i,
                  gamma_i' = lambda_{i-1}^{-1} gamma_i
  rotate:         e_i -> e_{i+1}, u_i -> u_{i+1}, d_i -> d_{i+1};
                  parameters shift by one
  reflect:        e_i -> e_{n-i}, u_i -> d_{n-i-1}, d_i -> u_{n-i-1};
                  alpha_i' = -beta_{n-i-1}^{-1} alpha_{n-i-1},
                  beta_i'  = beta_{n-i-1}^{-1},
                  gamma_i' = -beta_{n-i-1}^{-1} gamma_{n-i-1}

The graded decision (gamma = 0, beta nonzero, n >= 3) searches the 2n
dihedral cases rotate^k o (reflect or id) o scale(lambda), solving for
lambda by weighted union-find over multiplicative ratio constraints; the
constraints are generated symbolically from the constructor formulas
above, never from a transcribed composite.  Every positive answer is
re-verified on the defining relations before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Arrow, Element, Parameters
from .rewrite import PRESET_QDU, build_system, ensure_confluent, normal_form

ROTATION = "rotation"
REFLECTION = "reflection"


# ---------------------------------------------------------------------------
# Parameter transforms
# ---------------------------------------------------------------------------

def transform_scale(p: Parameters, lam: tuple[Fraction, ...]) -> Parameters:
    n = p.n
    lam = tuple(Fraction(x) for x in lam)
    if len(lam) != n or any(x == 0 for x in lam):
        raise ValueError("lambda must be a length-n vector of nonzero scalars")
    alpha = [lam[i] / lam[(i - 1) % n] * p.alpha[i] for i in range(n)]
    beta = [lam[(i + 1) % n] / lam[(i - 1) % n] * p.beta[i] for i in range(n)]
    gamma = [p.gamma[i] / lam[(i - 1) % n] for i in range(n)]
    return Parameters.of(n, alpha, beta, gamma)


def transform_rotate(p: Parameters, k: int = 1) -> Parameters:
    n = p.n
    take = lambda vec, i: vec[(i - k) % n]
    return Parameters.of(
        n,
        [take(p.alpha, i) for i in range(n)],
        [take(p.beta, i) for i in range(n)],
        [take(p.gamma, i) for i in range(n)],
    )


def transform_reflect(p: Parameters) -> Parameters:
    n = p.n
    if not p.beta_all_nonzero():
        raise ValueError("reflection requires all beta_i nonzero")
    alpha = [-p.alpha[(n - i - 1) % n] / p.beta[(n - i - 1) % n] for i in range(n)]
    beta = [1 / p.beta[(n - i - 1) % n] for i in range(n)]
    gamma = [-p.gamma[(n - i - 1) % n] / p.beta[(n - i - 1) % n] for i in range(n)]
    return Parameters.of(n, alpha, beta, gamma)


def transform_params(op: str, p: Parameters, lam: tuple[Fraction, ...] | None = None) -> Parameters:
    if op == "scale":
        if lam is None:
            raise ValueError("scale needs lambda")
        return transform_scale(p, lam)
    if op == "rotate":
        return transform_rotate(p)
    if op == "reflect":
        return transform_reflect(p)
    raise ValueError(f"unknown transform {op!r}")


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoWitness:
    """A dihedral relabeling plus a scaling: determines the generator map."""

    n: int
    orientation: str
    shift: int
    lam: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.orientation not in (ROTATION, REFLECTION):
            raise ValueError("orientation must be rotation or reflection")
        if len(self.lam) != self.n or any(x == 0 for x in self.lam):
            raise ValueError("lambda entries must be nonzero and of length n")

    def vertex_image(self, v: int) -> int:
        if self.orientation == ROTATION:
            return (v + self.shift) % self.n
        return (self.n - v + self.shift) % self.n

    def arrow_image(self, a: Arrow) -> tuple[Fraction, Arrow]:
        n = self.n
        scalar = self.lam[a.index] if a.family == "u" else Fraction(1)
        if self.orientation == ROTATION:
            return scalar, Arrow(a.family, (a.index + self.shift) % n)
        idx = (n - a.index - 1 + self.shift) % n
        return scalar, Arrow("d" if a.family == "u" else "u", idx)

    def apply(self, a: Element) -> Element:
        from .core import map_element

        return map_element(a, self.vertex_image, self.arrow_image)

    def predicted_params(self, p: Parameters) -> Parameters:
        q = transform_scale(p, self.lam)
        if self.orientation == REFLECTION:
            q = transform_reflect(q)
        return transform_rotate(q, self.shift)

    def describe(self) -> dict:
        return {
            "orientation": self.orientation,
            "shift": self.shift,
            "lambda": [str(x) for x in self.lam],
        }


def identity_witness(n: int) -> IsoWitness:
    return IsoWitness(n, ROTATION, 0, tuple(Fraction(1) for _ in range(n)))


def verify_witness(w: IsoWitness, src: Parameters, tgt: Parameters) -> bool:
    """Arrow/vertex bijectivity plus relation preservation under the map."""
    n = src.n
    if w.n != n or tgt.n != n:
        return False
    if sorted(w.vertex_image(v) for v in range(n)) != list(range(n)):
        return False
    images = set()
    for fam in ("u", "d"):
        for i in range(n):
            scalar, img = w.arrow_image(Arrow(fam, i))
            if scalar == 0:
                return False
            images.add((img.family, img.index))
    if len(images) != 2 * n:
        return False
    tgt_sys = ensure_confluent(build_system(PRESET_QDU, tgt))
    src_sys = build_system(PRESET_QDU, src)
    return all(
        normal_form(tgt_sys, w.apply(rel)).is_zero()
        for rel in src_sys.relation_elements()
    )


# ---------------------------------------------------------------------------
# Ratio constraints and the weighted union-find solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioConstraint:
    """lambda_a = c * lambda_b with c nonzero."""

    a: int
    b: int
    c: Fraction

    def __post_init__(self) -> None:
        if self.c == 0:
            raise ValueError("ratio must be nonzero")


@dataclass
class RatioInconsistency:
    constraint: RatioConstraint
    accumulated: Fraction

    @property
    def cycle_ratio(self) -> Fraction:
        return self.accumulated / self.constraint.c

    def describe(self) -> dict:
        return {
            "constraint": f"l{self.constraint.a} = {self.constraint.c} * l{self.constraint.b}",
            "accumulated_ratio": str(self.accumulated),
            "cycle_ratio": str(self.cycle_ratio),
        }


def solve_ratio_system(constraints: list[RatioConstraint], n: int):
    """Propagate multiplicative ratios; detect inconsistent cycles.

    Returns a concrete lambda (free components pinned to 1) or a
    RatioInconsistency carrying the offending constraint and the ratio
    already forced between its endpoints.
    """
    parent = list(range(n))
    weight = [Fraction(1)] * n

    def find(x: int) -> tuple[int, Fraction]:
        w = Fraction(1)
        while parent[x] != x:
            w *= weight[x]
            x = parent[x]
        return x, w

    for con in constraints:
        ra, wa = find(con.a)
        rb, wb = find(con.b)
        if ra == rb:
            if wa != con.c * wb:
                return RatioInconsistency(con, wa / wb)
        else:
            # lambda_a = wa * root_a, lambda_b = wb * root_b, lambda_a = c lambda_b
            parent[ra] = rb
            weight[ra] = con.c * wb / wa
    lam = []
    for x in range(n):
        _, w = find(x)
        lam.append(w)
    return tuple(lam)


# ---------------------------------------------------------------------------
# Symbolic composite parameters (coefficients times a lambda-monomial)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Sym:
    coeff: Fraction
    exps: tuple[tuple[int, int], ...] = ()  # sorted (index, exponent), exponent != 0

    @classmethod
    def const(cls, c) -> "_Sym":
        return cls(Fraction(c), ())

    def times_mono(self, mono: dict[int, int]) -> "_Sym":
        if self.coeff == 0:
            return _Sym(Fraction(0), ())
        exps = dict(self.exps)
        for idx, e in mono.items():
            exps[idx] = exps.get(idx, 0) + e
            if exps[idx] == 0:
                del exps[idx]
        return _Sym(self.coeff, tuple(sorted(exps.items())))

    def scaled(self, c: Fraction) -> "_Sym":
        return _Sym(self.coeff * c, self.exps if self.coeff * c else ())

    def inverted(self) -> "_Sym":
        if self.coeff == 0:
            raise ZeroDivisionError("cannot invert symbolic zero")
        return _Sym(1 / self.coeff, tuple(sorted((i, -e) for i, e in self.exps)))

    def times(self, other: "_Sym") -> "_Sym":
        return self.times_mono(dict(other.exps)).scaled(other.coeff)


@dataclass
class _SymParams:
    n: int
    alpha: list[_Sym]
    beta: list[_Sym]


def _sym_scale(p: Parameters) -> _SymParams:
    n = p.n
    alpha = [
        _Sym.const(p.alpha[i]).times_mono({i: 1, (i - 1) % n: -1})
        for i in range(n)
    ]
    beta = [
        _Sym.const(p.beta[i]).times_mono({(i + 1) % n: 1, (i - 1) % n: -1})
        for i in range(n)
    ]
    return _SymParams(n, alpha, beta)


def _sym_reflect(sp: _SymParams) -> _SymParams:
    n = sp.n
    alpha = [sp.beta[(n - i - 1) % n].inverted().times(sp.alpha[(n - i - 1) % n]).scaled(Fraction(-1))
             for i in range(n)]
    beta = [sp.beta[(n - i - 1) % n].inverted() for i in range(n)]
    return _SymParams(n, alpha, beta)


def _sym_rotate(sp: _SymParams, k: int) -> _SymParams:
    n = sp.n
    return _SymParams(
        n,
        [sp.alpha[(i - k) % n] for i in range(n)],
        [sp.beta[(i - k) % n] for i in range(n)],
    )


def _constraint_from_equation(sym: _Sym, value: Fraction) -> RatioConstraint | None:
    """Translate coeff * l_a / l_b = value into a RatioConstraint."""
    exps = dict(sym.exps)
    pos = [i for i, e in exps.items() if e == 1]
    neg = [i for i, e in exps.items() if e == -1]
    if len(pos) != 1 or len(neg) != 1 or len(exps) != 2:
        raise AssertionError(f"unexpected lambda monomial {sym.exps}")
    return RatioConstraint(pos[0], neg[0], value / sym.coeff)


# ---------------------------------------------------------------------------
# The decision procedure
# ---------------------------------------------------------------------------

@dataclass
class CaseDiagnostic:
    orientation: str
    shift: int
    reason: str
    inconsistency: RatioInconsistency | None = None

    def describe(self) -> dict:
        out = {"orientation": self.orientation, "shift": self.shift, "reason": self.reason}
        if self.inconsistency is not None:
            out["certificate"] = self.inconsistency.describe()
        return out


@dataclass
class IsoVerdict:
    kind: str  # "isomorphic" | "not_isomorphic" | "unsupported"
    witness: IsoWitness | None = None
    cases: list[CaseDiagnostic] = field(default_factory=list)
    detail: str = ""


def decide_graded_iso(p: Parameters, q: Parameters) -> IsoVerdict:
    """Complete graded isomorphism decision for gamma = 0, nonzero beta, n >= 3.

    For each of the 2n dihedral cases the lambda-ratio constraints from
    every beta equation and every nonzero alpha equation are solved by
    weighted union-find; a solution yields a witness which must pass
    verify_witness before the case is accepted.
    """
    if p.n != q.n:
        raise ValueError("parameter vectors have different n")
    n = p.n
    if n < 3:
        return IsoVerdict("unsupported", detail="decision requires n >= 3")
    if not (p.gamma_is_zero() and q.gamma_is_zero()):
        return IsoVerdict("unsupported", detail="decision covers the graded case gamma = 0 only")
    if not (p.beta_all_nonzero() and q.beta_all_nonzero()):
        return IsoVerdict("unsupported", detail="decision requires all beta_i nonzero")
    cases: list[CaseDiagnostic] = []
    for orientation in (ROTATION, REFLECTION):
        base = _sym_scale(p)
        if orientation == REFLECTION:
            base = _sym_reflect(base)
        for k in range(n):
            sym = _sym_rotate(base, k)
            constraints: list[RatioConstraint] = []
            zero_pattern_ok = True
            for i in range(n):
                constraints.append(_constraint_from_equation(sym.beta[i], q.beta[i]))
                sa = sym.alpha[i]
                if (sa.coeff == 0) != (q.alpha[i] == 0):
                    zero_pattern_ok = False
                    cases.append(CaseDiagnostic(
                        orientation, k,
                        f"alpha zero-pattern mismatch at index {i}"))
                    break
                if sa.coeff != 0:
                    constraints.append(_constraint_from_equation(sa, q.alpha[i]))
            if not zero_pattern_ok:
                continue
            solved = solve_ratio_system(constraints, n)
            if isinstance(solved, RatioInconsistency):
                cases.append(CaseDiagnostic(orientation, k, "inconsistent ratio cycle", solved))
                continue
            witness = IsoWitness(n, orientation, k, solved)
            if witness.predicted_params(p) != q:
                cases.append(CaseDiagnostic(orientation, k, "solved lambda does not reproduce target"))
                continue
            if not verify_witness(witness, p, q):
                cases.append(CaseDiagnostic(orientation, k, "witness failed relation verification"))
                continue
            return IsoVerdict("isomorphic", witness=witness, cases=cases)
    return IsoVerdict("not_isomorphic", cases=cases)
