"""Discrete invariants of parabolic bundles and chains.

Weight data are exact rationals throughout.  A WeightDatum stores, per marked
point, the strictly increasing weights in [0,1) and their multiplicities; a
ChainType bundles ranks, degrees and one datum per chain index.  Zero-rank
chain entries are allowed (they carry degree 0 and empty weights) because
filtration pieces of a chain naturally have them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import BudgetExceeded, RankMismatch


def frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class WeightDatum:
    """Per-point weighted flag data: ((w, m), ...) per marked point."""

    points: Tuple[Tuple[Tuple[Fraction, int], ...], ...]

    def __post_init__(self):
        pts = tuple(
            tuple((frac(w), int(m)) for w, m in point) for point in self.points
        )
        object.__setattr__(self, "points", pts)
        ranks = set()
        for point in pts:
            prev = None
            for w, m in point:
                if not (0 <= w < 1):
                    raise ValueError(f"weight {w} outside [0,1)")
                if m < 1:
                    raise ValueError("multiplicities must be positive")
                if prev is not None and w <= prev:
                    raise ValueError("weights must strictly increase within a point")
                prev = w
            ranks.add(sum(m for _, m in point))
        if len(ranks) > 1:
            raise RankMismatch(f"inconsistent ranks across points: {sorted(ranks)}")

    @property
    def num_points(self):
        return len(self.points)

    @property
    def rank(self):
        if not self.points:
            return None  # rank unconstrained without marked points
        return sum(m for _, m in self.points[0])

    def weight_sum(self):
        return sum((w * m for point in self.points for w, m in point), Fraction(0))

    def all_weights(self):
        return [w for point in self.points for w, m in point for _ in range(m)]

    def flag_type(self, p):
        return tuple(m for _, m in self.points[p])

    @staticmethod
    def empty(num_points):
        return WeightDatum(tuple(() for _ in range(num_points)))

    @staticmethod
    def trivial_flags(rank, num_points):
        """Plain bundles seen as parabolic: one weight-0 step of full multiplicity."""
        return WeightDatum(tuple(((Fraction(0), rank),) for _ in range(num_points)))

    @staticmethod
    def full_flags(weights_per_point):
        """One weight per flag step, multiplicity one."""
        return WeightDatum(
            tuple(tuple((frac(w), 1) for w in pt) for pt in weights_per_point)
        )


def pardeg(d, datum):
    """Parabolic degree: ordinary degree plus the weight-multiplicity sum."""
    return Fraction(d) + datum.weight_sum()


def dual_weight_datum(datum):
    """Dual weights 1-w in reversed order; weight 0 is kept fixed."""
    new_points = []
    for point in datum.points:
        out = []
        for w, m in reversed(point):
            out.append((Fraction(1) - w if w != 0 else Fraction(0), m))
        out.sort(key=lambda t: t[0])
        new_points.append(tuple(out))
    return WeightDatum(tuple(new_points))


@dataclass(frozen=True)
class ChainType:
    """Numerical type of a parabolic chain: ranks, degrees, per-index weights."""

    ranks: Tuple[int, ...]
    degrees: Tuple[int, ...]
    weights: Tuple[WeightDatum, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(n) for n in self.ranks))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "weights", tuple(self.weights))
        if not (len(self.ranks) == len(self.degrees) == len(self.weights)):
            raise RankMismatch("ranks, degrees and weights must have equal length")
        k = {w.num_points for w in self.weights}
        if len(k) > 1:
            raise RankMismatch("marked-point counts differ across chain indices")
        for n, d, w in zip(self.ranks, self.degrees, self.weights):
            if n < 0:
                raise ValueError("negative rank")
            if n == 0:
                if d != 0 or any(w.points[p] for p in range(w.num_points)):
                    raise ValueError("zero-rank entries carry degree 0 and no weights")
            elif w.points and w.rank != n:
                raise RankMismatch(f"weight datum rank {w.rank} != {n}")

    @property
    def length(self):
        return len(self.ranks) - 1

    @property
    def total_rank(self):
        return sum(self.ranks)

    @property
    def total_degree(self):
        return sum(self.degrees)

    @property
    def num_points(self):
        return self.weights[0].num_points if self.weights else 0

    def pardegs(self):
        return tuple(pardeg(d, w) for d, w in zip(self.degrees, self.weights))

    def support(self):
        return tuple(i for i, n in enumerate(self.ranks) if n > 0)

    def support_blocks(self):
        """Maximal runs of consecutive nonzero-rank indices."""
        blocks = []
        cur = []
        for i, n in enumerate(self.ranks):
            if n > 0:
                cur.append(i)
            elif cur:
                blocks.append(tuple(cur))
                cur = []
        if cur:
            blocks.append(tuple(cur))
        return blocks

    def restrict(self, indices):
        return ChainType(
            tuple(self.ranks[i] for i in indices),
            tuple(self.degrees[i] for i in indices),
            tuple(self.weights[i] for i in indices),
        )

    def all_weights(self):
        return [w for datum in self.weights for w in datum.all_weights()]


def par_slope_alpha(tau, alpha):
    """Rank-weighted average of the shifted parabolic slopes."""
    if len(alpha) != len(tau.ranks):
        raise RankMismatch("stability parameter length mismatch")
    total = sum(
        pardeg(d, w) + n * frac(a)
        for n, d, w, a in zip(tau.ranks, tau.degrees, tau.weights, alpha)
    )
    n_tot = tau.total_rank
    if n_tot == 0:
        raise ValueError("slope of the zero chain is undefined")
    return Fraction(total, 1) / n_tot


def genericity_check(all_weights, N, budget=5_000_000):
    """True when no bounded nonzero integer combination of the weights is integral."""
    if N < 1:
        raise ValueError("bound must be at least 1")
    ws = [frac(w) for w in all_weights]
    if not ws:
        return True
    count = len(ws)
    if (2 * N + 1) ** count > budget:
        raise BudgetExceeded(
            f"genericity search space (2*{N}+1)^{count} exceeds budget {budget}"
        )
    for combo in itertools.product(range(-N, N + 1), repeat=count):
        if all(c == 0 for c in combo):
            continue
        total = sum(c * w for c, w in zip(combo, ws))
        if total.denominator == 1:
            return False
    return True


def _next_prime(n):
    candidate = max(n + 1, 2)
    while True:
        if candidate >= 2 and all(
            candidate % p for p in range(2, int(candidate ** 0.5) + 1)
        ):
            return candidate
        candidate += 1


def generate_generic_weights(total_weight_count, N):
    """Base-B construction: weights B^j/Q are generic by digit uniqueness."""
    if total_weight_count < 1:
        raise ValueError("need at least one weight")
    B = N + 1
    powers = [B ** j for j in range(1, total_weight_count + 1)]
    Q = _next_prime(N * sum(powers))
    return [Fraction(p, Q) for p in powers]


def _point_splits(point, part_ranks):
    """Distribute one point's weight list (all multiplicities 1) into parts."""
    weights = [w for w, m in point]
    idx = list(range(len(weights)))

    def rec(remaining, parts_left):
        if not parts_left:
            yield ()
            return
        size = parts_left[0]
        for chosen in itertools.combinations(remaining, size):
            rest = [i for i in remaining if i not in chosen]
            for tail in rec(rest, parts_left[1:]):
                yield (tuple(sorted(chosen)),) + tail

    for assignment in rec(idx, list(part_ranks)):
        yield tuple(
            tuple((weights[i], 1) for i in chosen) for chosen in assignment
        )


def enumerate_weight_splits(datum, part_ranks):
    """All ways to distribute the weights at each point into the given part ranks.

    Requires multiplicity-one data; each output is a tuple of WeightDatum, one
    per part, in the order of part_ranks.
    """
    part_ranks = tuple(int(r) for r in part_ranks)
    if datum.points and sum(part_ranks) != datum.rank:
        raise RankMismatch(
            f"part ranks sum to {sum(part_ranks)}, datum rank is {datum.rank}"
        )
    for point in datum.points:
        if any(m != 1 for _, m in point):
            raise RankMismatch("weight splitting requires multiplicity-one data")
    per_point = [list(_point_splits(point, part_ranks)) for point in datum.points]
    out = []
    for combo in itertools.product(*per_point):
        parts = []
        for j in range(len(part_ranks)):
            parts.append(WeightDatum(tuple(point_split[j] for point_split in combo)))
        out.append(tuple(parts))
    return out
