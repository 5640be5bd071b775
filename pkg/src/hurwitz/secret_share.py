"""Combinatorial (n, t) threshold sharing of S = x_1^2 + ... + x_m^2 - x_1 ... x_m.

With m = C(n, t-1) and A_1, ..., A_m the (t-1)-subsets of {1..n} in
lexicographic order, participant i holds x_j exactly when i is not in A_j.
Any t participants jointly hold every x_j; any t-1 of them miss the x_j
whose subset is themselves.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb, prod
from typing import Iterable, Sequence

M_CAP = 10**6

# first 12 primes: a deterministic Miller-Rabin witness set below 2^64 (3.3e24)
_SMALL_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_RANDOM_ROUNDS = 64  # error <= 4^-64 = 2^-128


def is_prime(p: int, rng: random.Random | None = None) -> bool:
    if p < 2:
        return False
    for q in _SMALL_BASES:
        if p % q == 0:
            return p == q
    r, s = 0, p - 1
    while s % 2 == 0:
        r, s = r + 1, s // 2

    def witness(a: int) -> bool:
        y = pow(a, s, p)
        if y in (1, p - 1):
            return False
        for _ in range(r - 1):
            y = y * y % p
            if y == p - 1:
                return False
        return True

    if p < 1 << 64:
        return not any(witness(a) for a in _SMALL_BASES)
    rng = rng or random.SystemRandom()
    return not any(witness(rng.randrange(2, p - 1)) for _ in range(_RANDOM_ROUNDS))


class ShareError(ValueError):
    pass


class MissingIndices(ShareError):
    def __init__(self, missing: Sequence[int]):
        super().__init__(f"missing indices {list(missing)}")
        self.missing = list(missing)


def secret_value(xs: Sequence[int], p: int) -> int:
    return (sum(v * v for v in xs) - prod(xs)) % p


def subsets(n: int, t: int) -> list[tuple[int, ...]]:
    return list(combinations(range(1, n + 1), t - 1))


@dataclass(frozen=True)
class ShareScheme:
    n: int
    t: int
    p: int
    x: tuple[int, ...]
    S: int

    @property
    def m(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Share:
    i: int
    entries: tuple[tuple[int, int], ...]  # sorted (j, x_j)
    n: int
    t: int
    p: int

    @property
    def header(self) -> tuple[int, int, int]:
        return (self.n, self.t, self.p)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "p": str(self.p),
            "i": self.i,
            "entries": [[j, str(v)] for j, v in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Share":
        entries = tuple(sorted((int(j), int(v)) for j, v in obj["entries"]))
        return cls(int(obj["i"]), entries, int(obj["n"]), int(obj["t"]), int(obj["p"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def deal(n: int, t: int, p: int, x: Sequence[int] | None = None,
         seed: int | None = None) -> tuple[ShareScheme, list[Share]]:
    if not 2 <= t <= n:
        raise ShareError(f"need 2 <= t <= n, got n={n}, t={t}")
    m = comb(n, t - 1)
    if m > M_CAP:
        raise ShareError(f"C({n}, {t - 1}) = {m} exceeds the cap {M_CAP}")
    if not is_prime(p):
        raise ShareError(f"p={p} is not prime")
    if x is None:
        rng = random.Random(seed)
        x = tuple(rng.randrange(1, p) for _ in range(m))
    else:
        x = tuple(int(v) % p for v in x)
        if len(x) != m:
            raise ShareError(f"expected {m} secret entries, got {len(x)}")
        if any(v == 0 for v in x):
            raise ShareError("secret entries must be nonzero mod p")
    subs = subsets(n, t)
    shares = []
    for i in range(1, n + 1):
        entries = tuple((j, x[j - 1]) for j, A in enumerate(subs, 1) if i not in A)
        shares.append(Share(i, entries, n, t, p))
    return ShareScheme(n, t, p, x, secret_value(x, p)), shares


def combine(shares: Iterable[Share]) -> int:
    shares = list(shares)
    if not shares:
        raise ShareError("no shares given")
    headers = {s.header for s in shares}
    if len(headers) != 1:
        raise ShareError(f"inconsistent headers {sorted(headers)}")
    n, t, p = headers.pop()
    m = comb(n, t - 1)
    known: dict[int, int] = {}
    for s in shares:
        for j, v in s.entries:
            if known.setdefault(j, v) != v:
                raise ShareError(f"shares disagree on x_{j}")
    missing = [j for j in range(1, m + 1) if j not in known]
    if missing:
        raise MissingIndices(missing)
    return secret_value([known[j] for j in range(1, m + 1)], p)


@dataclass
class ThresholdReport:
    passed: bool
    t_subsets_checked: int
    below_subsets_checked: int
    failures: list[tuple[str, tuple[int, ...]]]


def verify_threshold(scheme: ShareScheme, shares: Sequence[Share]) -> ThresholdReport:
    """Every t-subset must reconstruct S; every (t-1)-subset must fail."""
    if scheme.n > 12:
        raise ShareError("exhaustive verification is limited to n <= 12")
    by_index = {s.i: s for s in shares}
    failures = []
    n_t = n_below = 0
    for group in combinations(range(1, scheme.n + 1), scheme.t):
        n_t += 1
        try:
            if combine(by_index[i] for i in group) != scheme.S:
                failures.append(("wrong secret", group))
        except (ShareError, KeyError):
            failures.append(("no reconstruction", group))
    for group in combinations(range(1, scheme.n + 1), scheme.t - 1):
        n_below += 1
        try:
            combine(by_index[i] for i in group)
            failures.append(("reconstructed below threshold", group))
        except MissingIndices:
            pass
        except KeyError:
            failures.append(("share not provided", group))
    return ThresholdReport(not failures, n_t, n_below, failures)
