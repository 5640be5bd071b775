"""Vieta involutions and the group they generate acting on solutions.

Indices are 1-based, as in the usual psi_1 ... psi_n notation.  Words are
tuples of indices listed in application order: ``apply_word(eq, x, (2, 3))``
is psi_3(psi_2(x)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Callable, Iterable, Sequence

from .core import EquationError, GHEquation, Tuple, check_solution, height

Word = tuple[int, ...]


def _flip(eq: GHEquation, x: Tuple, i: int) -> Tuple:
    """psi_i without any checks; i is 0-based."""
    others = prod(x[:i]) * prod(x[i + 1:])
    return x[:i] + ((eq.d // eq.a[i]) * others - x[i],) + x[i + 1:]


def _is_fundamental(eq: GHEquation, x: Tuple) -> bool:
    p = prod(x)
    # 2 a_i x_i <= d * prod_{j != i} x_j, multiplied through by x_i
    return all(2 * ai * xi * xi <= eq.d * p for ai, xi in zip(eq.a, x))


def _check_index(eq: GHEquation, i: int):
    if not 1 <= i <= eq.n:
        raise IndexError(f"involution index {i} outside 1..{eq.n}")


def apply_involution(eq: GHEquation, x: Sequence[int], i: int) -> Tuple:
    """Replace x_i by the other root (d/a_i) prod_{j != i} x_j - x_i."""
    _check_index(eq, i)
    x = check_solution(eq, x)
    y = _flip(eq, x, i - 1)
    if y[i - 1] <= 0:
        raise ValueError(f"psi_{i}{x} left the positive orthant: {y}")
    return check_solution(eq, y)


def neighbors(eq: GHEquation, x: Sequence[int]) -> list[Tuple]:
    x = check_solution(eq, x)
    return [apply_involution(eq, x, i) for i in range(1, eq.n + 1)]


def is_fundamental(eq: GHEquation, x: Sequence[int]) -> bool:
    """True iff no neighbour has smaller height (2 a_i x_i <= d prod_{j!=i} x_j)."""
    return _is_fundamental(eq, check_solution(eq, x))


def is_fundamental_sorted(eq: GHEquation, x: Sequence[int]) -> bool:
    """Hurwitz-only form: 1 <= x_1 <= ... <= x_n <= (d/2) x_1 ... x_{n-1}."""
    if not eq.is_hurwitz:
        raise EquationError("sorted fundamental form needs all a_i = 1")
    x = check_solution(eq, x)
    if any(u > v for u, v in zip(x, x[1:])):
        return False
    return 2 * x[-1] <= eq.d * prod(x[:-1])


def _descent_index(eq: GHEquation, x: Tuple) -> int | None:
    p = prod(x)
    for i, (ai, xi) in enumerate(zip(eq.a, x)):
        if 2 * ai * xi * xi > eq.d * p:
            return i
    return None


@dataclass(frozen=True)
class TraceStep:
    step: int
    index: int
    tuple: Tuple
    height: int

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "index": self.index,
            "tuple": [str(v) for v in self.tuple],
            "height": str(self.height),
        }


def reduce(eq: GHEquation, x: Sequence[int], trace: list | None = None) -> tuple[Tuple, Word]:
    """Descend to the fundamental solution of x's orbit.

    At each step the smallest index whose involution strictly lowers the
    height is applied.  Returns ``(fundamental, word)`` with ``word`` in
    application order, so ``apply_word(eq, fundamental, word[::-1]) == x``.
    If ``trace`` is a list, a ``TraceStep`` per position (starting with x
    itself at step 0) is appended to it.
    """
    x = check_solution(eq, x)
    word = []
    if trace is not None:
        trace.append(TraceStep(0, 0, x, height(x)))
    while (i := _descent_index(eq, x)) is not None:
        x = _flip(eq, x, i)
        word.append(i + 1)
        if trace is not None:
            trace.append(TraceStep(len(word), i + 1, x, height(x)))
    return x, tuple(word)


def normalize_word(word: Iterable[int]) -> Word:
    """Cancel adjacent equal indices (psi_i psi_i = 1) until the word alternates."""
    out: list[int] = []
    for i in word:
        if out and out[-1] == i:
            out.pop()
        else:
            out.append(i)
    return tuple(out)


def check_word(word: Sequence[int], n: int) -> Word:
    word = tuple(word)
    for i in word:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside 1..{n}")
    for u, v in zip(word, word[1:]):
        if u == v:
            raise ValueError(f"word {word} is not reduced: repeated index {u}")
    return word


def apply_word(eq: GHEquation, x: Sequence[int], word: Sequence[int]) -> Tuple:
    word = check_word(word, eq.n)
    x = check_solution(eq, x)
    for i in word:
        x = _flip(eq, x, i - 1)
        if x[i - 1] <= 0:
            raise ValueError(f"word left the positive orthant at {x}")
    return check_solution(eq, x)


def alternating_words(n: int, max_len: int) -> Iterable[Word]:
    """All reduced words over 1..n of length <= max_len, shortest first."""
    level: list[Word] = [()]
    yield ()
    for _ in range(max_len):
        level = [w + (i,) for w in level for i in range(1, n + 1) if not w or w[-1] != i]
        yield from level


# -- Hurwitz case: coordinate permutations plus psi ------------------------------

Map = Callable[[Tuple], Tuple]


def hurwitz_maps(eq: GHEquation) -> dict[str, Map]:
    """phi (swap x1, x2), omega (cyclic shift right), its inverse, and psi = psi_1."""
    if not eq.is_hurwitz:
        raise EquationError("phi/omega only act on Hurwitz equations (all a_i = 1)")
    d = eq.d
    return {
        "phi": lambda x: (x[1], x[0]) + x[2:],
        "omega": lambda x: (x[-1],) + x[:-1],
        "omega^-1": lambda x: x[1:] + (x[0],),
        "psi": lambda x: (d * prod(x[1:]) - x[0],) + x[1:],
    }


# Relators, written as generator sequences.  A word g_1 g_2 ... g_r denotes
# the composite map g_1 o g_2 o ... o g_r (rightmost factor acts first).
def _power(word: list[str], k: int) -> list[str]:
    return word * k


def hurwitz_relators(n: int) -> dict[str, list[str]]:
    P, W, Wi, S = "phi", "omega", "omega^-1", "psi"
    if n == 3:
        return {
            "phi^2": [P, P],
            "omega^3": [W] * 3,
            "(phi omega)^2": _power([P, W], 2),
            "psi^2": [S, S],
            "(psi phi omega)^2": _power([S, P, W], 2),
        }
    return {
        "phi^2": [P, P],
        f"omega^{n}": [W] * n,
        f"(phi omega)^{n - 1}": _power([P, W], n - 1),
        "(phi omega^2 phi omega^-2)^2": _power([P, W, W, P, Wi, Wi], 2),
        "(phi omega phi omega^-1)^3": _power([P, W, P, Wi], 3),
        "psi^2": [S, S],
        "(psi omega phi omega^-1)^2": _power([S, W, P, Wi], 2),
        "psi phi omega psi omega^-1 phi": [S, P, W, S, Wi, P],
    }


def evaluate_relator(maps: dict[str, Map], word: list[str], x: Tuple) -> Tuple:
    for g in reversed(word):
        x = maps[g](x)
    return x


@dataclass
class RelationReport:
    relators: dict[str, bool]
    samples: int
    vacuous: bool

    @property
    def ok(self) -> bool:
        return all(self.relators.values())


def verify_hurwitz_relations(eq: GHEquation, samples: Sequence[Sequence[int]]) -> RelationReport:
    """Check that every defining relator acts as the identity on each sample."""
    maps = hurwitz_maps(eq)
    xs = [check_solution(eq, x) for x in samples]
    result = {}
    for name, word in hurwitz_relators(eq.n).items():
        result[name] = all(evaluate_relator(maps, word, x) == x for x in xs)
    return RelationReport(result, len(xs), vacuous=not xs)
