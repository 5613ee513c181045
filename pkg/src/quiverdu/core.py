"""Exact scalars, the doubled cyclic quiver, paths, and free path-algebra arithmetic.

The quiver has vertices 0..n-1 and, for each i (mod n), an "up" arrow
u_i : i -> i+1 and a "down" arrow d_i : i+1 -> i.  Paths compose left to
right: p*q concatenates when target(p) = source(q) and is zero otherwise.
All coefficients are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

# Exact base scalars: always reduced, positive denominator, 0 == 0/1.
Scalar = Fraction

UP = "u"
DOWN = "d"


@dataclass(frozen=True)
class Arrow:
    """One arrow of the doubled cycle: family 'u' or 'd' plus its index."""

    family: str
    index: int

    def __post_init__(self) -> None:
        if self.family not in (UP, DOWN):
            raise ValueError(f"unknown arrow family {self.family!r}")
        if self.index < 0:
            raise ValueError("arrow index must be nonnegative")

    def source(self, n: int) -> int:
        return self.index % n if self.family == UP else (self.index + 1) % n

    def target(self, n: int) -> int:
        return (self.index + 1) % n if self.family == UP else self.index % n

    def __str__(self) -> str:
        return f"{self.family}{self.index}"


def up(i: int, n: int) -> Arrow:
    return Arrow(UP, i % n)


def down(i: int, n: int) -> Arrow:
    return Arrow(DOWN, i % n)


@dataclass(frozen=True)
class Path:
    """A composable arrow sequence with explicit source vertex.

    The source is stored separately so the trivial path e_v is
    representable; consecutive arrows must compose (target = next source).
    """

    n: int
    source: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.source < self.n:
            raise ValueError("source vertex out of range")
        at = self.source
        for a in self.arrows:
            if a.index >= self.n:
                raise ValueError(f"arrow {a} out of range for n={self.n}")
            if a.source(self.n) != at:
                raise ValueError(f"arrows do not compose at vertex {at}: {a}")
            at = a.target(self.n)

    @property
    def target(self) -> int:
        if not self.arrows:
            return self.source
        return self.arrows[-1].target(self.n)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(str(a) for a in self.arrows)


def trivial_path(n: int, v: int) -> Path:
    return Path(n, v % n, ())


def arrow_path(n: int, a: Arrow) -> Path:
    return Path(n, a.source(n), (a,))


def path_from_arrows(n: int, arrows: Iterable[Arrow]) -> Path:
    arrows = tuple(arrows)
    if not arrows:
        raise ValueError("empty arrow sequence has no determined source")
    return Path(n, arrows[0].source(n), arrows)


def path_from_word(n: int, source: int, word: str) -> Path:
    """Build the unique path from ``source`` following the letters of ``word``.

    From every vertex there is exactly one outgoing u-arrow and one
    outgoing d-arrow, so a letter string determines the path.
    """
    arrows = []
    at = source % n
    for letter in word:
        if letter == UP:
            a = up(at, n)
        elif letter == DOWN:
            a = down(at - 1, n)
        else:
            raise ValueError(f"bad letter {letter!r} in path word")
        arrows.append(a)
        at = a.target(n)
    return Path(n, source % n, tuple(arrows))


def letter_profile(p: Path) -> str:
    """The u/d letter string of a path (indices dropped)."""
    return "".join(a.family for a in p.arrows)


def canonical_path_key(p: Path) -> tuple:
    """Total order used for deterministic Element printing and sorting.

    Length first, then source, then arrowwise with u before d and lower
    index before higher.
    """
    return (p.length, p.source, tuple((0 if a.family == UP else 1, a.index) for a in p.arrows))


class Element:
    """A finite rational combination of paths: the universal algebra value.

    Immutable by convention; zero coefficients are stripped eagerly, so
    two Elements are equal iff their term maps are equal.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Path, Fraction] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        clean: dict[Path, Fraction] = {}
        for p, c in (terms or {}).items():
            if p.n != n:
                raise ValueError("path over wrong quiver size")
            c = Fraction(c)
            if c:
                clean[p] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):  # pragma: no cover - guard only
        raise AttributeError("Element is immutable")

    @classmethod
    def zero(cls, n: int) -> "Element":
        return cls(n, {})

    @classmethod
    def from_path(cls, p: Path, coeff: Fraction | int = 1) -> "Element":
        return cls(p.n, {p: Fraction(coeff)})

    @classmethod
    def identity(cls, n: int) -> "Element":
        return cls(n, {trivial_path(n, v): Fraction(1) for v in range(n)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, Fraction(0)) + c
        return Element(self.n, terms)

    def __neg__(self) -> "Element":
        return Element(self.n, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "Element":
        c = Fraction(c)
        return Element(self.n, {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def support(self) -> list[Path]:
        return sorted(self.terms, key=canonical_path_key)

    def degrees(self) -> set[int]:
        return {p.length for p in self.terms}

    def max_degree(self) -> int:
        return max((p.length for p in self.terms), default=0)

    def homogeneous_components(self) -> dict[tuple[int, int, int], "Element"]:
        """Split by (length, source, target); the element is their sum."""
        parts: dict[tuple[int, int, int], dict[Path, Fraction]] = {}
        for p, c in self.terms.items():
            parts.setdefault((p.length, p.source, p.target), {})[p] = c
        return {key: Element(self.n, t) for key, t in parts.items()}

    def _check(self, other: "Element") -> None:
        if self.n != other.n:
            raise ValueError("mismatched quiver sizes")

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({self.n}, {format_element(self)!r})"


def compose(p: Path, q: Path) -> Element:
    """Concatenation product of two paths: zero on source/target mismatch."""
    if p.n != q.n:
        raise ValueError("mismatched quiver sizes")
    if p.target != q.source:
        return Element.zero(p.n)
    return Element.from_path(Path(p.n, p.source, p.arrows + q.arrows))


def multiply(a: Element, b: Element) -> Element:
    """Bilinear extension of path concatenation."""
    if a.n != b.n:
        raise ValueError("mismatched quiver sizes")
    terms: dict[Path, Fraction] = {}
    for p, cp in a.terms.items():
        for q, cq in b.terms.items():
            if p.target != q.source:
                continue
            r = Path(a.n, p.source, p.arrows + q.arrows)
            c = terms.get(r, Fraction(0)) + cp * cq
            if c:
                terms[r] = c
            else:
                terms.pop(r, None)
    return Element(a.n, terms)


def map_element(a: Element, vertex_map: Callable[[int], int],
                arrow_map: Callable[[Arrow], tuple[Fraction, Arrow]]) -> Element:
    """Apply a graded linear map given on vertices and arrows multiplicatively.

    ``arrow_map`` returns (scalar, image arrow).  The images must compose;
    a well-formed quiver map guarantees this.
    """
    terms: dict[Path, Fraction] = {}
    for p, c in a.terms.items():
        coeff = c
        arrows = []
        for arr in p.arrows:
            s, img = arrow_map(arr)
            coeff *= s
            arrows.append(img)
        q = Path(a.n, vertex_map(p.source) % a.n, tuple(arrows))
        v = terms.get(q, Fraction(0)) + coeff
        if v:
            terms[q] = v
        else:
            terms.pop(q, None)
    return Element(a.n, terms)


def adjacency_matrix(n: int) -> list[list[int]]:
    """Arrow counts M[i][j] = #{arrows i -> j}; symmetric for this quiver."""
    if n < 1:
        raise ValueError("n must be positive")
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][(i + 1) % n] += 1  # u_i
        m[(i + 1) % n][i] += 1  # d_i
    return m


@dataclass(frozen=True)
class Parameters:
    """The (alpha, beta, gamma) triple of length-n rational vectors."""

    n: int
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        for name in ("alpha", "beta", "gamma"):
            vec = getattr(self, name)
            if len(vec) != self.n:
                raise ValueError(f"{name} must have length n={self.n}")

    @classmethod
    def of(cls, n: int, alpha, beta, gamma) -> "Parameters":
        conv = lambda xs: tuple(Fraction(x) for x in xs)
        return cls(n, conv(alpha), conv(beta), conv(gamma))

    @classmethod
    def zero_gamma(cls, n: int, alpha, beta) -> "Parameters":
        return cls.of(n, alpha, beta, [0] * n)

    def beta_all_nonzero(self) -> bool:
        return all(b != 0 for b in self.beta)

    def gamma_is_zero(self) -> bool:
        return all(g == 0 for g in self.gamma)


# ---------------------------------------------------------------------------
# Element text format: sum of "c * a1.a2...ak" terms, "c @v" for trivial
# paths.  parse(format(x)) == x bit-exactly.
# ---------------------------------------------------------------------------

def format_element(a: Element) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for p in a.support():
        c = a.terms[p]
        if p.arrows:
            parts.append(f"{c} * {'.'.join(str(x) for x in p.arrows)}")
        else:
            parts.append(f"{c} @{p.source}")
    return " + ".join(parts)


def _parse_arrow(token: str, n: int) -> Arrow:
    token = token.strip()
    if len(token) < 2 or token[0] not in (UP, DOWN):
        raise ValueError(f"bad arrow token {token!r}")
    try:
        idx = int(token[1:])
    except ValueError as exc:
        raise ValueError(f"bad arrow token {token!r}") from exc
    if not 0 <= idx < n:
        raise ValueError(f"arrow index out of range in {token!r}")
    return Arrow(token[0], idx)


def parse_element(text: str, n: int) -> Element:
    """Parse the textual element format back into an Element."""
    text = text.strip()
    if text == "0" or not text:
        return Element.zero(n)
    terms: dict[Path, Fraction] = {}
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ValueError("empty term in element text")
        vertex = None
        if "@" in term:
            term, _, vtext = term.partition("@")
            term = term.strip()
            try:
                vertex = int(vtext.strip())
            except ValueError as exc:
                raise ValueError(f"bad vertex in {raw!r}") from exc
            if not 0 <= vertex < n:
                raise ValueError(f"vertex out of range in {raw!r}")
        if "*" in term:
            coeff_text, _, word = term.partition("*")
            arrows = tuple(_parse_arrow(t, n) for t in word.strip().split("."))
            path = path_from_arrows(n, arrows)
            if vertex is not None and path.source != vertex:
                raise ValueError(f"source annotation disagrees with arrows in {raw!r}")
        else:
            coeff_text = term
            if vertex is None:
                raise ValueError(f"trivial-path term needs '@v' in {raw!r}")
            path = trivial_path(n, vertex)
        try:
            coeff = Fraction(coeff_text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient in {raw!r}") from exc
        terms[path] = terms.get(path, Fraction(0)) + coeff
    return Element(n, terms)
