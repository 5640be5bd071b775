"""Equation types, validation, residuals and the normalizing transforms.

Two equation families live here:

* ``GHEquation``: a_1 x_1^2 + ... + a_n x_n^2 = d x_1 ... x_n - k
* ``BUEquation``: a x^2 + b y^2 + c z^2 = d x y z + e

Coordinates are plain Python ints throughout, so tree heights can grow
without overflow.  Tuples are the solution representation; ``height`` is
their coordinate sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, isqrt, prod
from typing import Callable, Sequence

Tuple = tuple[int, ...]


class EquationError(ValueError):
    """Raised for coefficients that violate the standing hypotheses."""


class NotASolution(ValueError):
    """Raised when a tuple does not satisfy the equation it is paired with."""

    def __init__(self, x, residual: int):
        super().__init__(f"{tuple(x)} is not a solution (residual {residual})")
        self.x = tuple(x)
        self.residual = residual


class AlreadySquarefree(EquationError):
    pass


@dataclass(frozen=True)
class GHEquation:
    a: Tuple
    d: int
    k: int = 0
    is_hurwitz: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "is_hurwitz", all(v == 1 for v in self.a))

    @property
    def n(self) -> int:
        return len(self.a)

    def to_json(self) -> dict:
        return {"kind": "gh", "n": self.n, "a": list(self.a), "d": self.d, "k": self.k}

    def __str__(self):
        lhs = " + ".join(
            (f"x{i}^2" if ai == 1 else f"{ai}*x{i}^2") for i, ai in enumerate(self.a, 1)
        )
        rhs = f"{self.d}*" + "*".join(f"x{i}" for i in range(1, self.n + 1))
        return f"{lhs} = {rhs}" + (f" - {self.k}" if self.k else "")


@dataclass(frozen=True)
class BUEquation:
    a: int
    b: int
    c: int
    d: int
    e: int

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def to_json(self) -> dict:
        return {"kind": "bu", "a": self.a, "b": self.b, "c": self.c, "d": self.d, "e": self.e}

    def __str__(self):
        def term(coef, var):
            return f"{var}^2" if coef == 1 else f"{coef}{var}^2"

        return (
            f"{term(self.a, 'x')} + {term(self.b, 'y')} + {term(self.c, 'z')}"
            f" = {self.d}xyz + {self.e}"
        )


def validate_equation(a: Sequence[int], d: int, k: int = 0) -> GHEquation:
    """Build a ``GHEquation``, enforcing a_i | d and pairwise coprime a_i."""
    a = tuple(int(v) for v in a)
    if len(a) < 3:
        raise EquationError(f"arity must be at least 3, got {len(a)}")
    if any(v < 1 for v in a) or d < 1:
        raise EquationError("coefficients and d must be positive")
    if k < 0:
        raise EquationError("k must be non-negative")
    for i, ai in enumerate(a, 1):
        if d % ai:
            raise EquationError(f"a{i}={ai} does not divide d={d}")
    for (i, ai), (j, aj) in combinations(enumerate(a, 1), 2):
        g = gcd(ai, aj)
        if g > 1:
            raise EquationError(f"gcd(a{i}, a{j}) = {g}, coefficients must be pairwise coprime")
    return GHEquation(a, d, k)


def validate_bu(a: int, b: int, c: int, d: int, e: int) -> BUEquation:
    if min(a, b, c, d) < 1 or e < 0:
        raise EquationError("a, b, c, d must be positive and e non-negative")
    for name, v in (("a", a), ("b", b), ("c", c)):
        if d % v:
            raise EquationError(f"{name}={v} does not divide d={d}")
    if gcd(gcd(a, b), c) != 1:
        raise EquationError(f"gcd(a, b, c) = {gcd(gcd(a, b), c)}, must be 1")
    return BUEquation(a, b, c, d, e)


def height(x: Sequence[int]) -> int:
    return sum(x)


def eval_residual(eq: GHEquation, x: Sequence[int]) -> int:
    """Return sum(a_i x_i^2) - d * prod(x_i) + k; zero exactly on solutions."""
    if len(x) != eq.n:
        raise ValueError(f"expected {eq.n} coordinates, got {len(x)}")
    return sum(ai * xi * xi for ai, xi in zip(eq.a, x)) - eq.d * prod(x) + eq.k


def bu_residual(eq: BUEquation, t: Sequence[int]) -> int:
    if len(t) != 3:
        raise ValueError(f"expected 3 coordinates, got {len(t)}")
    x, y, z = t
    return eq.a * x * x + eq.b * y * y + eq.c * z * z - eq.d * x * y * z - eq.e


def check_solution(eq: GHEquation, x: Sequence[int]) -> Tuple:
    x = tuple(int(v) for v in x)
    r = eval_residual(eq, x)
    if r != 0 or min(x) < 1:
        raise NotASolution(x, r)
    return x


def check_bu_solution(eq: BUEquation, t: Sequence[int]) -> Tuple:
    t = tuple(int(v) for v in t)
    r = bu_residual(eq, t)
    if r != 0 or min(t) < 1:
        raise NotASolution(t, r)
    return t


# -- normalizing transforms ---------------------------------------------------


def eliminate_k(eq: GHEquation) -> tuple[GHEquation, Callable[[Sequence[int]], Tuple]]:
    """Absorb the constant k into k extra unit coordinates.

    Returns the k = 0 equation of arity n + k and the embedding that appends
    k trailing ones to a tuple of the original equation.
    """
    if eq.k < 1:
        raise EquationError("k = 0: nothing to eliminate")
    image = GHEquation(eq.a + (1,) * eq.k, eq.d, 0)
    pad = (1,) * eq.k

    def embed(x: Sequence[int]) -> Tuple:
        if len(x) != eq.n:
            raise ValueError(f"expected {eq.n} coordinates, got {len(x)}")
        return tuple(x) + pad

    return image, embed


MARKOFF_D1 = GHEquation((1, 1, 1), 1)
MARKOFF_D3 = GHEquation((1, 1, 1), 3)
TWO_Z_D2 = GHEquation((1, 1, 2), 2)
TWO_Z_D4 = GHEquation((1, 1, 2), 4)

# source equation -> (target equation, forced common factor of the coordinates)
_DESCALINGS = {
    MARKOFF_D1: (MARKOFF_D3, 3),
    TWO_Z_D2: (TWO_Z_D4, 2),
}


def descale_solution(eq: GHEquation, x: Sequence[int]) -> tuple[GHEquation, Tuple]:
    """Map a solution of x^2+y^2+z^2 = xyz (resp. x^2+y^2+2z^2 = 2xyz) to the
    equivalent d = 3 (resp. d = 4) equation by dividing out the forced factor."""
    key = GHEquation(eq.a, eq.d, eq.k)
    if key not in _DESCALINGS:
        raise EquationError(f"no descaling transform for {eq}")
    target, f = _DESCALINGS[key]
    x = check_solution(eq, x)
    if any(v % f for v in x):
        raise NotASolution(x, eval_residual(eq, x))
    y = tuple(v // f for v in x)
    return target, check_solution(target, y)


@dataclass(frozen=True)
class CoordinateScaling:
    """new coordinate i = scales[i] * old coordinate i."""

    scales: tuple[int, int, int]

    def forward(self, t: Sequence[int]) -> Tuple:
        return tuple(s * v for s, v in zip(self.scales, t))

    def backward(self, t: Sequence[int]) -> Tuple:
        if any(v % s for s, v in zip(self.scales, t)):
            raise ValueError(f"{tuple(t)} is not in the image of {self.scales}")
        return tuple(v // s for s, v in zip(self.scales, t))


def _square_prime_factor(v: int) -> int | None:
    p = 2
    while p * p <= v:
        if v % (p * p) == 0:
            return p
        p += 1
    return None


def squarefree_normalize(eq: BUEquation) -> tuple[BUEquation, CoordinateScaling]:
    """Strip square factors p^2 from a, b, c via x -> p*x, d -> d/p.

    Each stripped p^2 costs one factor p of d; the residual of corresponding
    tuples is unchanged, so solutions and fundamentality carry over.
    """
    coefs = list(eq.coefficients)
    d = eq.d
    scales = [1, 1, 1]
    if all(_square_prime_factor(v) is None for v in coefs):
        raise AlreadySquarefree(f"{eq} already has squarefree coefficients")
    while True:
        hits = [(i, _square_prime_factor(v)) for i, v in enumerate(coefs)]
        hits = [(i, p) for i, p in hits if p is not None]
        if not hits:
            break
        p = min(p for _, p in hits)
        for i in range(3):
            if coefs[i] % (p * p) == 0:
                coefs[i] //= p * p
                scales[i] *= p
                if d % p:
                    raise EquationError(f"cannot strip {p}^2: {p} does not divide d={d}")
                d //= p
    out = validate_bu(coefs[0], coefs[1], coefs[2], d, eq.e)
    return out, CoordinateScaling(tuple(scales))


def is_square(v: int) -> bool:
    return v >= 0 and isqrt(v) ** 2 == v


# -- canonical JSON -------------------------------------------------------------


def equation_from_json(obj: dict) -> GHEquation | BUEquation:
    """Parse the canonical one-object equation form and validate it."""
    kind = obj.get("kind")
    if kind == "gh":
        a = [int(v) for v in obj["a"]]
        if "n" in obj and int(obj["n"]) != len(a):
            raise EquationError(f"n={obj['n']} does not match {len(a)} coefficients")
        return validate_equation(a, int(obj["d"]), int(obj.get("k", 0)))
    if kind == "bu":
        return validate_bu(*(int(obj[key]) for key in "abcde"))
    raise EquationError(f"unknown equation kind {kind!r}")


def tuple_to_json(x: Sequence[int]) -> dict:
    return {"x": [str(v) for v in x]}


def tuple_from_json(obj: dict) -> Tuple:
    return tuple(int(v) for v in obj["x"])
