"""Fundamental-solution search for a_1 x_1^2 + ... + a_n x_n^2 = d x_1 ... x_n.

The search rests on two facts about a fundamental solution:

* the n-2 smallest coordinates satisfy d * (their product) <= sum(a), and
* once those are fixed, the remaining pair (y, z) solves
  p y^2 + q z^2 + c1 = c2 y z, whose fundamental solutions have y, z <= 2 c1
  except on the two lines c2 y = 2 q z and c2 z = 2 p y, where (y, z) has a
  closed form.

Everything is exact integer arithmetic; square roots go through math.isqrt.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import gcd, isqrt, prod
from typing import Iterator, Sequence

from .core import EquationError, GHEquation, Tuple, check_solution, eval_residual, height
from .vieta import _flip, _is_fundamental


@dataclass(frozen=True)
class ResidualInstance:
    p: int
    q: int
    c1: int
    c2: int


@dataclass(frozen=True)
class FundamentalSet:
    equation: GHEquation
    solutions: tuple[Tuple, ...]
    mode: str = "raw"

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def _exact_root(num: int, den: int) -> int | None:
    if num > 0 and num % den == 0:
        return num // den
    return None


def solve_residual_pair(inst: ResidualInstance) -> list[tuple[int, int]]:
    """Natural pairs (y, z) with p y^2 + q z^2 + c1 = c2 y z that can sit in a
    fundamental solution.

    Sweeps y over [1, 2 c1], solving for z from the discriminant
    c2^2 y^2 - 4 q (p y^2 + c1); both roots are kept.  The two degenerate
    lines, where one pair inequality is tight, are solved in closed form.
    """
    p, q, c1, c2 = inst.p, inst.q, inst.c1, inst.c2
    if min(p, q, c1, c2) < 1:
        raise ValueError(f"residual instance needs positive entries: {inst}")
    found = set()
    for y in range(1, 2 * c1 + 1):
        disc = c2 * c2 * y * y - 4 * q * (p * y * y + c1)
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        for num in (c2 * y - r, c2 * y + r):
            z = _exact_root(num, 2 * q)
            if z is not None:
                found.add((y, z))

    gap = c2 * c2 - 4 * p * q
    if gap > 0:
        # z = c2 y / (2q)  =>  y^2 (c2^2 - 4pq) = 4 q c1
        if (4 * q * c1) % gap == 0:
            y = isqrt(4 * q * c1 // gap)
            if y * y * gap == 4 * q * c1 and (c2 * y) % (2 * q) == 0:
                found.add((y, c2 * y // (2 * q)))
        # y = c2 z / (2p)  =>  z^2 (c2^2 - 4pq) = 4 p c1
        if (4 * p * c1) % gap == 0:
            z = isqrt(4 * p * c1 // gap)
            if z * z * gap == 4 * p * c1 and (c2 * z) % (2 * p) == 0:
                found.add((c2 * z // (2 * p), z))

    return sorted((y, z) for y, z in found if p * y * y + q * z * z + c1 == c2 * y * z)


def _bounded_tuples(length: int, bound: int) -> Iterator[Tuple]:
    """Ordered tuples of positive ints with product <= bound."""
    if length == 0:
        yield ()
        return
    for v in range(1, bound + 1):
        for rest in _bounded_tuples(length - 1, bound // v):
            yield (v,) + rest


def _bounded_multisets(max_len: int, bound: int, lo: int = 2) -> Iterator[Tuple]:
    """Non-decreasing tuples of ints >= lo, length <= max_len, product <= bound."""
    yield ()
    if max_len == 0:
        return
    for v in range(lo, bound + 1):
        for rest in _bounded_multisets(max_len - 1, bound // v, v):
            yield (v,) + rest


def _enumerate_raw(a: Tuple, d: int) -> list[Tuple]:
    n = len(a)
    eq = GHEquation(a, d)
    bound = sum(a) // d
    found = set()
    for i, j in combinations(range(n), 2):
        rest = [k for k in range(n) if k not in (i, j)]
        for vals in _bounded_tuples(n - 2, bound):
            c1 = sum(a[k] * v * v for k, v in zip(rest, vals))
            c2 = d * prod(vals)
            for y, z in solve_residual_pair(ResidualInstance(a[i], a[j], c1, c2)):
                x = [0] * n
                for k, v in zip(rest, vals):
                    x[k] = v
                x[i], x[j] = y, z
                x = tuple(x)
                if _is_fundamental(eq, x):
                    found.add(x)
    return sorted(found)


def _enumerate_sorted(n: int, d: int) -> list[Tuple]:
    """Hurwitz case: sorted representatives x_1 <= ... <= x_n only."""
    eq = GHEquation((1,) * n, d)
    bound = n // d
    found = set()
    for big in _bounded_multisets(n - 2, bound):
        fixed = (1,) * (n - 2 - len(big)) + big
        floor = fixed[-1] if fixed else 1
        c1 = sum(v * v for v in fixed)
        c2 = d * prod(fixed)
        for y, z in solve_residual_pair(ResidualInstance(1, 1, c1, c2)):
            if floor <= y <= z:
                x = fixed + (y, z)
                if 2 * z <= d * prod(x[:-1]):
                    found.add(x)
    return sorted(found)


def enumerate_fundamental(eq: GHEquation, mode: str = "raw") -> FundamentalSet:
    """All fundamental solutions of a k = 0 equation.

    ``mode="raw"`` returns ordered tuples (every coordinate arrangement counts).
    ``mode="sorted"`` is for Hurwitz equations and returns only the
    non-decreasing representatives; it scales to large n because the n-2
    small coordinates are enumerated as multisets of entries > 1.
    """
    if eq.k != 0:
        raise EquationError("k != 0: apply eliminate_k first")
    if mode == "sorted":
        if not eq.is_hurwitz:
            raise EquationError("sorted mode needs all a_i = 1")
        sols = _enumerate_sorted(eq.n, eq.d)
    elif mode == "raw":
        sols = _enumerate_raw(eq.a, eq.d)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for x in sols:
        check_solution(eq, x)
    return FundamentalSet(eq, tuple(sols), mode)


# -- coefficient classification ---------------------------------------------------


def _coprime_vectors(n: int, top: int) -> Iterator[Tuple]:
    """Sorted length-n vectors over 1..top whose entries > 1 are pairwise coprime."""

    def extend(chosen: list[int], start: int):
        yield tuple(chosen)
        if len(chosen) == n:
            return
        for v in range(start, top + 1):
            if all(gcd(v, u) == 1 for u in chosen):
                yield from extend(chosen + [v], v + 1)

    for big in extend([], 2):
        yield (1,) * (n - len(big)) + big


def _candidate_equations(n: int) -> list[GHEquation]:
    cands = []
    # some a_i > n: only a = (1, ..., 1, m) with d = m survives
    cands.append(GHEquation((1,) * (n - 1) + (n + 2,), n + 2))
    if n == 5:
        cands.append(GHEquation((1, 1, 1, 1, 6), 6))
    # all a_i <= n: d = g * prod(a) <= sum(a)
    for a in _coprime_vectors(n, n):
        base = prod(a)
        for d in range(base, sum(a) + 1, base):
            cands.append(GHEquation(a, d))
    return sorted(set(cands), key=lambda e: (e.a, e.d))


def _solve_candidate(eq: GHEquation) -> FundamentalSet:
    return enumerate_fundamental(eq)


def default_workers() -> int:
    return max(1, int(os.environ.get("HURWITZ_THREADS", "1")))


def classify_coefficients(n: int, workers: int | None = None) -> list[FundamentalSet]:
    """Every sorted coefficient vector and d with a fundamental solution, arity n."""
    if n < 3:
        raise EquationError("arity must be at least 3")
    cands = _candidate_equations(n)
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_solve_candidate, cands))
    else:
        results = [_solve_candidate(eq) for eq in cands]
    return [fs for fs in results if fs.solutions]


def block_sorted(eq: GHEquation, x: Sequence[int]) -> Tuple:
    """Sort coordinates within each run of equal coefficients (sorted-prefix form)."""
    x = list(x)
    start = 0
    while start < eq.n:
        end = start
        while end + 1 < eq.n and eq.a[end + 1] == eq.a[start]:
            end += 1
        x[start:end + 1] = sorted(x[start:end + 1])
        start = end + 1
    return tuple(x)


# -- Hurwitz tables ------------------------------------------------------------------


def hurwitz_solvable(n: int, d: int) -> tuple[bool, Tuple | None]:
    """Decide solvability for 3 <= n <= 2d and return the unique sorted
    fundamental solution when there is one."""
    if not 3 <= n <= 2 * d:
        raise ValueError(f"(n={n}, d={d}) outside 3 <= n <= 2d; use enumerate_fundamental")
    ones = (1,) * (n - 2)
    if n == d:
        return True, (1,) * n
    if (n, d) == (6, 3):
        return True, (1, 1, 1, 1, 2, 2)
    if (n, d) in {(10, 6), (13, 7), (16, 8)}:
        return True, ones + (1, 3)
    if (n, d) == (7, 5) or (n >= 5 and n % 2 == 1 and 2 * d == n + 3):
        return True, ones + (1, 2)
    return False, None


def count_A(n: int) -> tuple[int, list[int]]:
    """Number of d for which the arity-n Hurwitz equation has a solution, with the d's."""
    if n < 3:
        raise ValueError("n must be at least 3")
    ds = [d for d in range(1, n + 1) if _enumerate_sorted(n, d)]
    return len(ds), ds


# -- solution trees ------------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    tuple: Tuple
    parent: Tuple | None
    edge: int | None
    depth: int
    height: int

    def to_json(self) -> dict:
        return {
            "tuple": [str(v) for v in self.tuple],
            "parent": None if self.parent is None else [str(v) for v in self.parent],
            "edge": self.edge,
            "depth": self.depth,
            "height": str(self.height),
        }


def tree_expand(
    eq: GHEquation,
    root: Sequence[int],
    max_height: int | None = None,
    max_depth: int | None = None,
) -> list[TreeNode]:
    """Breadth-first orbit tree above a fundamental root.

    Children of a node are its strictly higher neighbours other than the one it
    came from, generated in index order; a child is kept when it respects
    ``max_height`` (on the coordinate sum) and ``max_depth``.
    """
    if max_height is None and max_depth is None:
        raise ValueError("give max_height or max_depth")
    root = check_solution(eq, root)
    if not _is_fundamental(eq, root):
        raise ValueError(f"{root} is not fundamental")
    if max_height is not None and max_height < height(root):
        raise ValueError(f"max_height {max_height} is below the root height {height(root)}")
    nodes = [TreeNode(root, None, None, 0, height(root))]
    queue = deque(nodes)
    while queue:
        node = queue.popleft()
        if max_depth is not None and node.depth >= max_depth:
            continue
        for i in range(1, eq.n + 1):
            if i == node.edge:
                continue
            child = _flip(eq, node.tuple, i - 1)
            h = height(child)
            if h <= node.height or (max_height is not None and h > max_height):
                continue
            assert eval_residual(eq, child) == 0
            new = TreeNode(child, node.tuple, i, node.depth + 1, h)
            nodes.append(new)
            queue.append(new)
    return nodes


def tree_to_dot(nodes: Sequence[TreeNode], name: str = "orbit") -> str:
    ids = {node.tuple: f"n{k}" for k, node in enumerate(nodes)}
    lines = [f"digraph {name} {{"]
    for node in nodes:
        label = "(" + ", ".join(str(v) for v in node.tuple) + ")"
        lines.append(f'\t{ids[node.tuple]} [label="{label}"];')
    for node in nodes:
        if node.parent is not None:
            lines.append(f'\t{ids[node.parent]} -> {ids[node.tuple]} [label="{node.edge}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
