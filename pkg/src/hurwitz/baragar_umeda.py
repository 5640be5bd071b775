"""Fundamental solutions of a x^2 + b y^2 + c z^2 = d x y z + e.

A triple is fundamental when 2a x <= d y z, 2b y <= d x z and 2c z <= d x y.

Search strategy for e >= 1.  Label the axes s, m, l so that the scaled
coordinates sqrt(A_s) u <= sqrt(A_m) v <= sqrt(A_l) w (every fundamental
triple has such a labelling).  Writing k = d u / sqrt(A_m A_l):

* k > 2: then A_s u^2 <= 8, v is bounded by A_m v^2 (k - 2) <= A_s u^2 - e,
  and w is a root of a quadratic.  This part is finite.
* k = 2 (k < 2 is impossible): the triples form infinite one-parameter
  families.  Either u = 2, A_s = 1, A_m = A_l = d, e = 4 with (2, n, n), or
  u = 1, d^2 = 4 A_m A_l, e = A_s with sqrt(A_m) v = sqrt(A_l) w.

The second k = 2 branch is not in the classical e = 1..3 tables; the
finite part reproduces them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import gcd, isqrt
from typing import Sequence

from .core import (
    BUEquation,
    EquationError,
    GHEquation,
    NotASolution,
    Tuple,
    bu_residual,
    check_bu_solution,
    validate_bu,
)

AXES = {"x": 0, "y": 1, "z": 2}


class NonPositiveImage(ValueError):
    """An involution mapped a solution outside the positive octant."""


def _fundamental(eq: BUEquation, t: Sequence[int]) -> bool:
    x, y, z = t
    return 2 * eq.a * x <= eq.d * y * z and 2 * eq.b * y <= eq.d * x * z and 2 * eq.c * z <= eq.d * x * y


def bu_is_fundamental(eq: BUEquation, t: Sequence[int]) -> bool:
    return _fundamental(eq, check_bu_solution(eq, t))


def bu_apply_involution(eq: BUEquation, t: Sequence[int], axis: int | str) -> Tuple:
    i = AXES[axis] if isinstance(axis, str) else axis
    t = check_bu_solution(eq, t)
    coef = eq.coefficients[i]
    others = t[(i + 1) % 3] * t[(i + 2) % 3]
    image = list(t)
    image[i] = (eq.d // coef) * others - t[i]
    if image[i] <= 0:
        raise NonPositiveImage(f"psi on axis {'xyz'[i]} sends {t} to {tuple(image)}")
    return check_bu_solution(eq, image)


@dataclass(frozen=True)
class SolutionFamily:
    """Triples with ``value`` on ``axis`` and steps[j] * n on the other axes, n >= n_min."""

    equation: BUEquation
    axis: int
    value: int
    steps: tuple[int, int, int]
    n_min: int

    def member(self, n: int) -> Tuple:
        return tuple(self.value if j == self.axis else self.steps[j] * n for j in range(3))

    def members(self, height_cap: int) -> list[Tuple]:
        out = []
        n = self.n_min
        while sum(t := self.member(n)) <= height_cap:
            out.append(t)
            n += 1
        return out

    def contains(self, t: Sequence[int]) -> bool:
        t = tuple(t)
        if t[self.axis] != self.value:
            return False
        j = (self.axis + 1) % 3
        if t[j] % self.steps[j]:
            return False
        n = t[j] // self.steps[j]
        return n >= self.n_min and self.member(n) == t

    def describe(self) -> str:
        parts = []
        for j in range(3):
            if j == self.axis:
                parts.append(str(self.value))
            else:
                parts.append("n" if self.steps[j] == 1 else f"{self.steps[j]}n")
        return f"({', '.join(parts)}), n >= {self.n_min}"

    def to_json(self) -> dict:
        return {
            "axis": "xyz"[self.axis],
            "value": self.value,
            "steps": list(self.steps),
            "n_min": self.n_min,
            "pattern": self.describe(),
        }


def e4_family(d: int) -> SolutionFamily:
    """(2, n, n) for x^2 + d y^2 + d z^2 = d x y z + 4, fundamental iff d n^2 >= 4."""
    eq = validate_bu(1, d, d, d, 4)
    n_min = 1
    while d * n_min * n_min < 4:
        n_min += 1
    return SolutionFamily(eq, 0, 2, (0, 1, 1), n_min)


@dataclass(frozen=True)
class BUSolutions:
    equation: BUEquation
    isolated: tuple[Tuple, ...]
    families: tuple[SolutionFamily, ...] = ()
    height_cap: int | None = None

    @property
    def solutions(self) -> tuple[Tuple, ...]:
        """Isolated triples plus family members up to ``height_cap``."""
        found = set(self.isolated)
        if self.families:
            cap = self.height_cap if self.height_cap is not None else 0
            for fam in self.families:
                found.update(fam.members(cap))
        return tuple(sorted(found))

    @property
    def empty(self) -> bool:
        return not self.isolated and not self.families


def _min_family_n(eq: BUEquation, axis: int, value: int, steps) -> int:
    # only the fixed axis inequality depends on n; the other two hold with equality
    coef = eq.coefficients[axis]
    prod_steps = 1
    for j in range(3):
        if j != axis:
            prod_steps *= steps[j]
    n = 1
    while 2 * coef * value > eq.d * prod_steps * n * n:
        n += 1
    return n


def _families(eq: BUEquation) -> list[SolutionFamily]:
    A, d, e = eq.coefficients, eq.d, eq.e
    fams = set()
    for s, m, l in permutations(range(3)):
        steps = [0, 0, 0]
        if e == 4 and A[s] == 1 and A[m] == d and A[l] == d:
            value = 2
            steps[m] = steps[l] = 1
        elif e == A[s] and d * d == 4 * A[m] * A[l]:
            # sqrt(A_m) v = sqrt(A_l) w
            g = gcd(A[m], A[l])
            rm, rl = A[m] // g, A[l] // g
            if isqrt(rm) ** 2 != rm or isqrt(rl) ** 2 != rl:
                continue
            value = 1
            steps[m], steps[l] = isqrt(rl), isqrt(rm)
        else:
            continue
        steps = tuple(steps)
        fams.add(SolutionFamily(eq, s, value, steps, _min_family_n(eq, s, value, steps)))
    return sorted(fams, key=lambda f: (f.axis, f.value, f.steps))


def _isolated_search(eq: BUEquation) -> set[Tuple]:
    A, d, e = eq.coefficients, eq.d, eq.e
    found = set()
    for s, m, l in permutations(range(3)):
        u = 1
        while A[s] * u * u <= 8:
            lhs_k = d * d * u * u
            if lhs_k > 4 * A[m] * A[l]:
                slack = A[s] * u * u - e
                v = 1
                # A_m v^2 (k - 2) <= slack, squared out to stay in integers
                while slack >= 0:
                    inner = slack + 2 * A[m] * v * v
                    if A[m] ** 2 * v ** 4 * lhs_k > A[m] * A[l] * inner * inner:
                        break
                    const = A[s] * u * u + A[m] * v * v - e
                    disc = (d * u * v) ** 2 - 4 * A[l] * const
                    if disc >= 0:
                        r = isqrt(disc)
                        if r * r == disc:
                            for num in (d * u * v - r, d * u * v + r):
                                if num > 0 and num % (2 * A[l]) == 0:
                                    t = [0, 0, 0]
                                    t[s], t[m], t[l] = u, v, num // (2 * A[l])
                                    t = tuple(t)
                                    if bu_residual(eq, t) == 0 and _fundamental(eq, t):
                                        found.add(t)
                    v += 1
            u += 1
    return found


def bu_enumerate_fundamental(eq: BUEquation, height_cap: int = 100) -> BUSolutions:
    """Fundamental triples: the finite part exactly, plus any infinite families
    as descriptors whose members are listed up to ``height_cap``."""
    if height_cap < 3:
        raise ValueError("height_cap must be at least 3")
    if eq.e == 0:
        return _e0_redirect(eq)
    fams = _families(eq)
    isolated = sorted(t for t in _isolated_search(eq) if not any(f.contains(t) for f in fams))
    return BUSolutions(eq, tuple(isolated), tuple(fams), height_cap)


def _e0_redirect(eq: BUEquation) -> BUSolutions:
    from .enumeration import _enumerate_raw, enumerate_fundamental
    from .core import validate_equation

    try:
        gh = validate_equation(eq.coefficients, eq.d)
        sols = enumerate_fundamental(gh).solutions
    except EquationError:
        # pairwise coprimality fails; the search itself only needs a_i | d
        sols = _enumerate_raw(eq.coefficients, eq.d)
    return BUSolutions(eq, tuple(sols))


# -- classification ------------------------------------------------------------------

# Largest coefficient that can carry a finite-part solution for 1 <= e <= 4:
# gcd(A_m, A_l) divides e - A_s u^2 (nonzero there, |.| <= 7) and
# (d/A_m)(d/A_l) <= 8, so max(A_m, A_l) <= 7 * 8.
FINITE_PART_C_MAX = 56


@dataclass(frozen=True)
class BUClassRow:
    equation: BUEquation
    result: BUSolutions

    @property
    def has_family(self) -> bool:
        return bool(self.result.families)


def _lcm(*vs: int) -> int:
    out = 1
    for v in vs:
        out = out * v // gcd(out, v)
    return out


def _bu_candidates(e: int, c_max: int) -> list[BUEquation]:
    out = []
    for c in range(1, c_max + 1):
        for b in range(1, c + 1):
            for a in range(1, b + 1):
                if gcd(gcd(a, b), c) != 1:
                    continue
                step = _lcm(a, b, c)
                d = step
                while d * d <= 8 * b * c:
                    out.append(BUEquation(a, b, c, d, e))
                    d += step
    return out


def _classify_one(args) -> BUClassRow | None:
    eq, cap = args
    res = bu_enumerate_fundamental(eq, cap)
    return None if res.empty else BUClassRow(eq, res)


def bu_classify(e: int, c_max: int = FINITE_PART_C_MAX, height_cap: int = 100,
                workers: int | None = None) -> list[BUClassRow]:
    """Equations a <= b <= c <= c_max with a fundamental solution for this e.

    Every equation with a fundamental solution has d^2 <= 8 b c, so d ranges
    over multiples of lcm(a, b, c) up to that bound.  For e >= 5 nothing can
    have a fundamental solution and the result is empty.
    """
    if e < 1:
        raise EquationError("e must be at least 1; e = 0 is the k = 0 Hurwitz case")
    if e >= 5:
        return []
    from .enumeration import default_workers

    cands = [(eq, height_cap) for eq in _bu_candidates(e, c_max)]
    workers = default_workers() if workers is None else workers
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_classify_one, cands, chunksize=256))
    else:
        rows = [_classify_one(c) for c in cands]
    return [r for r in rows if r is not None]


def table1_diff(rows: Sequence[BUClassRow], fixture: Sequence[dict]) -> dict:
    """Compare the finite-part rows (no infinite family) against a table fixture."""
    want = {
        (tuple(r["a"]), r["d"]): sorted(tuple(s) for s in r["solutions"]) for r in fixture
    }
    got = {
        (row.equation.coefficients, row.equation.d): sorted(row.result.isolated)
        for row in rows
        if not row.has_family
    }
    return {
        "missing": sorted(k for k in want if k not in got),
        "extra": sorted(k for k in got if k not in want),
        "mismatched": sorted(k for k in want if k in got and got[k] != want[k]),
        "family_rows": sorted(
            (row.equation.coefficients, row.equation.d) for row in rows if row.has_family
        ),
    }
