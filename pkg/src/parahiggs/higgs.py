"""Top level: localization of the Higgs moduli class over fixed-point chains.

Scaling the Higgs field gives a torus action whose fixed points decompose into
chains; the moduli class is L^N times the sum of the fixed-locus classes, each
of which is (L-1) times a stable-chain stack class at the staircase stability
parameter (0, 2g-2, ..., r(2g-2)) after the degree twist d_i + n_i (r-i)(2g-2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegerDimension, NonPolynomialResult, NonGenericWeights
from .motive import CurveData, ring
from .parabolic import ChainType, WeightDatum, enumerate_weight_splits, genericity_check
from .chains import enumerate_degree_vectors
from .engine import ChainEngine


@dataclass(frozen=True)
class HiggsProblem:
    curve: CurveData
    rank: int
    degree: int
    datum: WeightDatum

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.datum.num_points != self.curve.num_marked:
            raise ValueError("weight datum must cover every marked point")
        if self.datum.points and self.datum.rank != self.rank:
            raise ValueError("weight datum rank must match the bundle rank")


def half_dimension(n, datum, g, k=None):
    """Half of the moduli dimension: n^2(g-1) + 1 + (1/2) sum_p (n^2 - sum m^2)."""
    if k is not None and datum.num_points != k:
        raise ValueError("marked-point count mismatch")
    s = 0
    for point in datum.points:
        s += n * n - sum(m * m for _, m in point)
    if s % 2:
        raise NonIntegerDimension(f"odd flag defect sum {s}")
    return n * n * (g - 1) + 1 + s // 2


def chain_stability(r, g):
    """The staircase parameter (0, 2g-2, ..., r(2g-2))."""
    return tuple(Fraction(i * (2 * g - 2)) for i in range(r + 1))


def positive_compositions(n, parts):
    out = []

    def rec(remaining, slots, acc):
        if slots == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for v in range(1, remaining - slots + 2):
            rec(remaining - v, slots - 1, acc + [v])

    rec(n, parts, [])
    return out


def enumerate_fixed_types(problem):
    """All chain types of torus-fixed loci, with chain-side degrees.

    Chain degrees are the Higgs-side degrees shifted by n_i (r-i)(2g-2); the
    finitely many degree vectors come from the existence box at the staircase
    parameter.
    """
    n = problem.rank
    d = problem.degree
    g = problem.curve.genus
    k = problem.curve.num_marked
    out = []
    for r in range(n):
        alpha = chain_stability(r, g)
        for comp in positive_compositions(n, r + 1):
            shift = (2 * g - 2) * sum(
                comp[i] * (r - i) for i in range(r + 1)
            )
            chain_total = d + shift
            if k == 0:
                splits = [tuple(WeightDatum.empty(0) for _ in comp)]
            else:
                splits = enumerate_weight_splits(problem.datum, comp)
            for split in splits:
                for dvec in enumerate_degree_vectors(
                    comp, chain_total, alpha, split, k
                ):
                    out.append(ChainType(comp, dvec, split))
    return out


@dataclass
class HiggsComputation:
    total: object
    half_dim: int
    summands: list  # (ChainType, MotiveClass) pairs


def higgs_computation(problem, engine=None):
    g = problem.curve.genus
    if problem.datum.points:
        if not genericity_check(problem.datum.all_weights(), problem.rank):
            raise NonGenericWeights("weight datum fails the genericity bound")
    engine = engine or ChainEngine(problem.curve)
    R = ring(g)
    N = half_dimension(problem.rank, problem.datum, g, problem.curve.num_marked)
    total = R.zero
    summands = []
    for tau in enumerate_fixed_types(problem):
        alpha = chain_stability(tau.length, g)
        cls = engine.chain_class(tau, alpha)
        contr = (R.L - R.one) * cls
        summands.append((tau, contr))
        total = total + contr
    result = R.L_pow(N) * total
    if not result.is_polynomial():
        raise NonPolynomialResult(
            f"moduli class has a residual denominator: {result}"
        )
    return HiggsComputation(result, N, summands)


def higgs_moduli_class(problem, engine=None):
    """Class of the moduli space of stable parabolic Higgs bundles."""
    return higgs_computation(problem, engine).total
