"""Taxicab SVD of a double-centered matrix.

Each axis maximizes the L1 dispersion ||X u||_1 over sign vectors u, found by
one of three interchangeable searches:

  exhaustive  - complete enumeration of the smaller side, first coordinate fixed to +1
  crisscross  - iterate a = X u, v = sign(a), b = X'v, u = sign(b) to a fixed point
  genetic     - tournament selection, uniform crossover, bit-flip mutation, elitism

Every answer is settled to a criss-cross fixed point and oriented so that
its first nonzero row score is positive; then the axis is removed by the
rank-1 deflation X - a b' / delta.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..common.logger import get_logger
from .config import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_CRISSCROSS_MAX_ITER,
    DEFAULT_ELITISM,
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_GENERATIONS,
    DEFAULT_MAX_AXES,
    DEFAULT_MUTATION_RATE,
    DEFAULT_POPULATION,
    DEFAULT_SEED,
    DEFAULT_TOURNAMENT_SIZE,
    ZERO_DISPERSION_TOL,
)
from .errors import ConfigurationError, DimensionTooLargeError, TaxicabError, ZeroDispersionError
from .types import (
    AxisResult,
    Decomposition,
    Matrix,
    Method,
    Origin,
    ResidualMatrix,
    SearchStrategy,
    TableRef,
    Vector,
    centering_tolerance,
    sign,
    validate_sign_vector,
)

logger = get_logger(__name__)

# Relative gap under which two dispersions are treated as tied
TIE_TOL = 1e-12


class CrissCrossStarts(str, Enum):
    ALL_COLUMNS = "columns"
    ALL_ROWS = "rows"
    BOTH = "both"


@dataclass(frozen=True)
class GeneticConfig:
    """Genetic search hyperparameters."""

    population: int = DEFAULT_POPULATION
    generations: int = DEFAULT_GENERATIONS
    mutation_rate: float = DEFAULT_MUTATION_RATE
    elitism: int = DEFAULT_ELITISM
    tournament_size: int = DEFAULT_TOURNAMENT_SIZE
    rng_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.population < 4:
            raise ConfigurationError(f"Genetic population must be >= 4, got {self.population}")
        if self.generations < 0:
            raise ConfigurationError(f"Genetic generations must be >= 0, got {self.generations}")
        if not 0.0 <= self.mutation_rate < 1.0:
            raise ConfigurationError(f"Mutation rate must be in [0, 1), got {self.mutation_rate}")
        if not 0 <= self.elitism < self.population:
            raise ConfigurationError(f"Elitism must be in [0, population), got {self.elitism}")
        if self.tournament_size < 1:
            raise ConfigurationError(f"Tournament size must be >= 1, got {self.tournament_size}")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigurationError(f"Seed must be an unsigned 64-bit integer, got {self.rng_seed}")


@dataclass(frozen=True)
class SearchConfig:
    """Which search finds each axis, and how many axes to extract."""

    strategy: SearchStrategy = SearchStrategy.EXHAUSTIVE
    max_axes: int = DEFAULT_MAX_AXES
    crisscross_starts: CrissCrossStarts = CrissCrossStarts.ALL_COLUMNS
    crisscross_max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER
    genetic: GeneticConfig = field(default_factory=GeneticConfig)
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self) -> None:
        if self.max_axes < 1:
            raise ConfigurationError(f"max_axes must be >= 1, got {self.max_axes}")
        if self.crisscross_max_iter < 1:
            raise ConfigurationError(f"crisscross_max_iter must be >= 1, got {self.crisscross_max_iter}")
        if self.exhaustive_cap < 1:
            raise ConfigurationError(f"exhaustive_cap must be >= 1, got {self.exhaustive_cap}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")


@dataclass(frozen=True)
class CrissCrossRun:
    """Outcome of iterating the transition formulas from one start."""

    u: Vector
    v: Vector
    a: Vector
    b: Vector
    delta: float
    iterations: int
    converged: bool
    trace: tuple[float, ...]


# ---------------------------------------------------------------------------
# Primitives
# ---------------------------------------------------------------------------


def dispersion_for(u: npt.ArrayLike, x: ResidualMatrix) -> float:
    """||X u||_1 for a column sign vector u.

    Raises:
        DimensionMismatchError: If len(u) != J
    """
    u = validate_sign_vector(u, x.shape[1])
    return float(np.abs(x.x @ u).sum())


def settle(x: Matrix, u: npt.ArrayLike, max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER) -> CrissCrossRun:
    """Iterate a = X u, v = sign(a), b = X'v, u = sign(b) until u repeats.

    The dispersion never decreases along the iteration, so a fixed point is
    reached; max_iter only guards against ties cycling.
    """
    u = np.asarray(u, dtype=np.float64)
    trace: list[float] = []
    converged = False
    iterations = 0
    a = x @ u
    v = sign(a)
    b = x.T @ v
    for iterations in range(1, max_iter + 1):
        a = x @ u
        v = sign(a)
        b = x.T @ v
        trace.append(float(np.abs(a).sum()))
        u_next = sign(b)
        if np.array_equal(u_next, u):
            converged = True
            break
        if iterations == max_iter:
            break
        u = u_next

    if any(later < earlier * (1 - TIE_TOL) - TIE_TOL for earlier, later in zip(trace, trace[1:], strict=False)):
        logger.warning("  [WARN] Criss-cross dispersion decreased between iterations")

    return CrissCrossRun(
        u=u,
        v=v,
        a=a,
        b=b,
        delta=float(np.abs(a).sum()),
        iterations=iterations,
        converged=converged,
        trace=tuple(trace),
    )


def orient(x: Matrix, run: CrissCrossRun, max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER) -> CrissCrossRun:
    """Resolve the (u, v) / (-u, -v) ambiguity by making the first nonzero row score positive.

    This gives v_1 = +1 unless a_1 is zero; then sign(0) = -1 fixes v_1 = -1 on
    both sides of the ambiguity and the first row with a nonzero score decides.
    A run that never converged is negated without re-settling.
    """
    pivots = np.flatnonzero(np.abs(run.a) > TIE_TOL * run.delta)
    if not pivots.size or run.a[pivots[0]] > 0:
        return run
    if not run.converged:
        return CrissCrossRun(
            u=-run.u,
            v=sign(-run.a),
            a=-run.a,
            b=x.T @ sign(-run.a),
            delta=run.delta,
            iterations=run.iterations,
            converged=False,
            trace=run.trace,
        )
    flipped = settle(x, -run.u, max_iter)
    return CrissCrossRun(
        u=flipped.u,
        v=flipped.v,
        a=flipped.a,
        b=flipped.b,
        delta=flipped.delta,
        iterations=run.iterations + flipped.iterations,
        converged=flipped.converged,
        trace=run.trace + flipped.trace,
    )


def _to_axis(run: CrissCrossRun, axis_index: int) -> AxisResult:
    return AxisResult(
        u=run.u,
        v=run.v,
        a=run.a,
        b=run.b,
        delta=run.delta,
        axis_index=axis_index,
        converged=run.converged,
        iterations=run.iterations,
    )


def _require_nonzero(x: ResidualMatrix) -> None:
    if x.total_abs == 0.0:
        raise ZeroDispersionError("Residual matrix is all zero; no axis left to extract")


def _enumerated_side(x: Matrix) -> tuple[Matrix, bool]:
    """Matrix whose columns are enumerated, and whether it is the transpose of x."""
    n_rows, n_cols = x.shape
    if n_cols <= n_rows:
        return x, False
    return x.T, True


def _column_signs(x: Matrix, s: Vector, transposed: bool) -> Vector:
    """Column sign vector u for a sign vector s of the enumerated side."""
    if transposed:
        return sign(x.T @ s)
    return s


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------


def candidate_signs(start: int, stop: int, d: int) -> Matrix:
    """Sign vectors for candidate indices [start, stop): coordinate 0 is +1, bit k of the index flips coordinate k+1."""
    index = np.arange(start, stop, dtype=np.int64)
    bits = (index[:, np.newaxis] >> np.arange(d - 1, dtype=np.int64)) & 1
    signs = 1.0 - 2.0 * bits.astype(np.float64)
    return np.hstack([np.ones((index.shape[0], 1)), signs])


def _best_in_chunk(m: Matrix, start: int, stop: int) -> tuple[float, int]:
    signs = candidate_signs(start, stop, m.shape[1])
    values = np.abs(signs @ m.T).sum(axis=1)
    best = float(values.max())
    tied = np.flatnonzero(values >= best * (1 - TIE_TOL))
    return best, start + int(tied[0])


def search_exhaustive(
    x: ResidualMatrix,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    *,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    axis_index: int = 1,
) -> AxisResult:
    """Global maximum of ||X u||_1 by complete enumeration of the smaller side.

    Candidates come in fixed-size chunks; each chunk reports its best value and
    lowest tied index, and the reduction keeps the lowest index among the
    near-maximal chunks, so the answer does not depend on the worker count.

    Raises:
        DimensionTooLargeError: If the enumerated side exceeds cap
        ZeroDispersionError: If x is all zero
    """
    _require_nonzero(x)
    m, transposed = _enumerated_side(x.x)
    d = m.shape[1]
    if d > cap:
        raise DimensionTooLargeError(d, cap)

    n_candidates = 1 << (d - 1)
    starts = list(range(0, n_candidates, chunk_size))
    logger.debug(
        f"-> Exhaustive search over {n_candidates} sign vectors of length {d} "
        f"({len(starts)} chunk(s), {workers} worker(s))"
    )

    def evaluate(start: int) -> tuple[float, int]:
        return _best_in_chunk(m, start, min(start + chunk_size, n_candidates))

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, starts))
    else:
        results = [evaluate(start) for start in starts]

    best_value = max(value for value, _ in results)
    best_index = min(index for value, index in results if value >= best_value * (1 - TIE_TOL))

    s = candidate_signs(best_index, best_index + 1, d)[0]
    u0 = _column_signs(x.x, s, transposed)
    run = orient(x.x, settle(x.x, u0))
    logger.debug(f"-> Exhaustive optimum: candidate {best_index}, delta = {run.delta:.6g}")
    return _to_axis(run, axis_index)


# ---------------------------------------------------------------------------
# Criss-cross search
# ---------------------------------------------------------------------------


def crisscross_starts(x: Matrix, starts: CrissCrossStarts) -> list[Vector]:
    """Column sign vectors to start from: one per column and/or per row of x.

    A column start takes v = sign(x[:, j]) and u = sign(X'v); a row start takes
    u = sign(x[i, :]). Starts equal up to a global sign are kept once.
    """
    candidates: list[Vector] = []
    if starts in (CrissCrossStarts.ALL_COLUMNS, CrissCrossStarts.BOTH):
        candidates.extend(sign(x.T @ sign(x[:, j])) for j in range(x.shape[1]))
    if starts in (CrissCrossStarts.ALL_ROWS, CrissCrossStarts.BOTH):
        candidates.extend(sign(x[i, :]) for i in range(x.shape[0]))

    unique: list[Vector] = []
    seen: set[bytes] = set()
    for u in candidates:
        canonical = u * u[0]
        key = canonical.tobytes()
        if key not in seen:
            seen.add(key)
            unique.append(u)
    return unique


def search_crisscross(
    x: ResidualMatrix,
    starts: CrissCrossStarts = CrissCrossStarts.ALL_COLUMNS,
    max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER,
    *,
    axis_index: int = 1,
) -> AxisResult:
    """Best fixed point of the transition formulas over the configured starts.

    When no start reaches a fixed point within max_iter, the best iterate is
    returned with converged=False and a warning is logged.
    """
    _require_nonzero(x)
    runs = [settle(x.x, u0, max_iter) for u0 in crisscross_starts(x.x, starts)]
    converged = [run for run in runs if run.converged]
    pool = converged or runs
    if not converged:
        logger.warning(f"  [WARN] Criss-cross did not converge within {max_iter} iterations on any start")

    best = pool[0]
    for run in pool[1:]:
        if run.delta > best.delta * (1 + TIE_TOL):
            best = run
    logger.debug(
        f"-> Criss-cross: {len(runs)} start(s), {len(converged)} converged, best delta = {best.delta:.6g}"
    )
    best = orient(x.x, best, max_iter)
    return _to_axis(best, axis_index)


# ---------------------------------------------------------------------------
# Genetic search
# ---------------------------------------------------------------------------


def search_genetic(
    x: ResidualMatrix,
    cfg: GeneticConfig | None = None,
    *,
    initial_population: npt.ArrayLike | None = None,
    max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER,
    axis_index: int = 1,
) -> AxisResult:
    """Evolve sign vectors of the smaller side with fitness ||X u||_1.

    The best individual ever seen is polished by one criss-cross pass. The run
    is deterministic given cfg.rng_seed.
    """
    cfg = cfg or GeneticConfig()
    _require_nonzero(x)
    m, transposed = _enumerated_side(x.x)
    d = m.shape[1]
    rng = np.random.default_rng(cfg.rng_seed)

    if initial_population is not None:
        population = np.asarray(initial_population, dtype=np.float64)
        if population.shape != (cfg.population, d):
            raise TaxicabError(f"Initial population must have shape {(cfg.population, d)}, got {population.shape}")
        if not np.all(np.abs(population) == 1.0):
            raise TaxicabError("Initial population entries must be -1 or +1")
    else:
        population = rng.choice(np.array([-1.0, 1.0]), size=(cfg.population, d))

    def fitness(pop: Matrix) -> Vector:
        return np.abs(pop @ m.T).sum(axis=1)

    n_children = cfg.population - cfg.elitism
    scores = fitness(population)
    best_index = int(np.argmax(scores))
    best, best_score = population[best_index].copy(), float(scores[best_index])

    for generation in range(cfg.generations):
        order = np.argsort(-scores, kind="stable")
        elite = population[order[: cfg.elitism]]

        contenders = rng.integers(0, cfg.population, size=(2 * n_children, cfg.tournament_size))
        winners = contenders[np.arange(2 * n_children), np.argmax(scores[contenders], axis=1)]
        mothers, fathers = population[winners[:n_children]], population[winners[n_children:]]

        children = np.where(rng.random((n_children, d)) < 0.5, mothers, fathers)
        children = np.where(rng.random((n_children, d)) < cfg.mutation_rate, -children, children)

        population = np.vstack([elite, children])
        scores = fitness(population)
        generation_best = int(np.argmax(scores))
        if scores[generation_best] > best_score:
            best, best_score = population[generation_best].copy(), float(scores[generation_best])
            logger.debug(f"   generation {generation + 1}: best fitness {best_score:.6g}")

    u0 = _column_signs(x.x, best, transposed)
    run = orient(x.x, settle(x.x, u0, max_iter), max_iter)
    logger.debug(f"-> Genetic search: fitness {best_score:.6g}, polished delta = {run.delta:.6g}")
    return _to_axis(run, axis_index)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


def choose_strategy(n_rows: int, n_cols: int, cap: int) -> SearchStrategy:
    """Exhaustive when the enumerated side fits under cap, criss-cross otherwise."""
    return SearchStrategy.EXHAUSTIVE if min(n_rows, n_cols) <= cap else SearchStrategy.CRISSCROSS


def search_axis(x: ResidualMatrix, cfg: SearchConfig, axis_index: int = 1) -> AxisResult:
    """Find one axis with the configured strategy."""
    if cfg.strategy is SearchStrategy.EXHAUSTIVE:
        return search_exhaustive(
            x, cfg.exhaustive_cap, workers=cfg.workers, chunk_size=cfg.chunk_size, axis_index=axis_index
        )
    if cfg.strategy is SearchStrategy.CRISSCROSS:
        return search_crisscross(x, cfg.crisscross_starts, cfg.crisscross_max_iter, axis_index=axis_index)
    return search_genetic(x, cfg.genetic, max_iter=cfg.crisscross_max_iter, axis_index=axis_index)


def deflate(x: ResidualMatrix, axis: AxisResult) -> ResidualMatrix:
    """X_{alpha+1} = X_alpha - a b' / delta.

    Raises:
        ZeroDispersionError: If delta is negligible relative to ||X||_1
    """
    if axis.delta <= ZERO_DISPERSION_TOL * x.total_abs or axis.delta == 0.0:
        raise ZeroDispersionError(f"Axis {axis.axis_index} has negligible dispersion {axis.delta:.3e}")
    residual = x.x - np.outer(axis.a, axis.b) / axis.delta
    return ResidualMatrix(x=residual, origin=Origin.DEFLATED, step=x.step + 1)


def _method_of(x: ResidualMatrix) -> Method:
    if x.origin is Origin.TCA_CENTERED:
        return Method.TCA
    if x.origin is Origin.TLRA_CENTERED:
        return Method.TLRA
    raise TaxicabError("Cannot infer the method of a deflated residual matrix; pass method explicitly")


def decompose(
    x: ResidualMatrix,
    cfg: SearchConfig | None = None,
    *,
    method: Method | None = None,
    table_ref: TableRef | None = None,
) -> Decomposition:
    """Search and deflate for alpha = 1..min(max_axes, k), stopping early once no dispersion is left."""
    cfg = cfg or SearchConfig()
    method = method or _method_of(x)
    n_rows, n_cols = x.shape
    rank_bound = min(n_rows - 1, n_cols - 1)
    n_axes = min(cfg.max_axes, rank_bound)
    floor = ZERO_DISPERSION_TOL * x.total_abs

    axes: list[AxisResult] = []
    snapshots: list[ResidualMatrix] = []
    current = x
    for alpha in range(1, n_axes + 1):
        if current.total_abs <= floor:
            logger.debug(f"-> Residual exhausted before axis {alpha}")
            break
        axis = search_axis(current, cfg, axis_index=alpha)
        if axis.delta <= floor:
            logger.debug(f"-> Axis {alpha} has zero dispersion, decomposition complete")
            break
        axes.append(axis)
        snapshots.append(current)
        logger.debug(f"-> Axis {alpha}: delta = {axis.delta:.6g}")
        if alpha < n_axes:
            try:
                current = deflate(current, axis)
            except ZeroDispersionError:
                break

    return Decomposition(
        method=method,
        axes=tuple(axes),
        centered=x,
        rank_bound=rank_bound,
        search=cfg.strategy,
        residuals=tuple(snapshots),
        table_ref=table_ref,
    )


def reconstruct(dec: Decomposition) -> Matrix:
    """Sum over axes of a_alpha b_alpha' / delta_alpha."""
    n_rows, n_cols = dec.centered.shape
    total = np.zeros((n_rows, n_cols))
    for axis in dec.axes:
        total += np.outer(axis.a, axis.b) / axis.delta
    return total


# ---------------------------------------------------------------------------
# Residual diagnostics
# ---------------------------------------------------------------------------


def check_axis(x: ResidualMatrix, axis: AxisResult, rel_tol: float = 1e-10) -> list[str]:
    """Violations of the transition, dispersion, centering and balance identities for one axis."""
    problems: list[str] = []
    label = f"axis {axis.axis_index}"
    delta = axis.delta
    tol = rel_tol * max(1.0, delta)
    cell_tol = centering_tolerance(x.x) * x.x.size

    if not np.array_equal(axis.v, sign(axis.a)):
        problems.append(f"{label}: v != sign(a)")
    if axis.converged and not np.array_equal(axis.u, sign(axis.b)):
        problems.append(f"{label}: u != sign(b)")
    if not np.allclose(axis.a, x.x @ axis.u, rtol=0, atol=tol):
        problems.append(f"{label}: a != X u")

    for name, value in (
        ("||a||_1", float(np.abs(axis.a).sum())),
        ("||b||_1", float(np.abs(axis.b).sum())),
        ("a'v", float(axis.a @ axis.v)),
        ("b'u", float(axis.b @ axis.u)),
    ):
        if abs(value - delta) > tol:
            problems.append(f"{label}: {name} = {value:.12g} differs from delta = {delta:.12g}")

    if abs(float(axis.a.sum())) > cell_tol or abs(float(axis.b.sum())) > cell_tol:
        problems.append(f"{label}: scores are not centered")
    if abs(float(axis.a[axis.a > 0].sum()) - delta / 2) > tol + cell_tol:
        problems.append(f"{label}: positive row scores do not sum to delta/2")
    if abs(float(axis.b[axis.b > 0].sum()) - delta / 2) > tol + cell_tol:
        problems.append(f"{label}: positive column scores do not sum to delta/2")

    rows_pos, cols_pos = axis.v > 0, axis.u > 0
    for rows, cols, expected in (
        (rows_pos, cols_pos, delta / 4),
        (~rows_pos, ~cols_pos, delta / 4),
        (rows_pos, ~cols_pos, -delta / 4),
        (~rows_pos, cols_pos, -delta / 4),
    ):
        quadrant_sum = float(x.x[np.ix_(rows, cols)].sum())
        if abs(quadrant_sum - expected) > tol + cell_tol:
            problems.append(f"{label}: quadrant sum {quadrant_sum:.12g} differs from {expected:.12g}")
    return problems


def check_decomposition(dec: Decomposition, rel_tol: float = 1e-10, conjugacy_tol: float = 1e-8) -> list[str]:
    """Per-axis identities plus conjugacy: later scores are orthogonal to earlier sign vectors."""
    problems: list[str] = []
    for axis, residual in zip(dec.axes, dec.residuals, strict=False):
        problems.extend(check_axis(residual, axis, rel_tol))

    for alpha, earlier in enumerate(dec.axes):
        for later in dec.axes[alpha + 1 :]:
            limit = conjugacy_tol * earlier.delta
            if abs(float(later.a @ earlier.v)) > limit or abs(float(later.b @ earlier.u)) > limit:
                problems.append(f"axes {earlier.axis_index} and {later.axis_index} are not conjugate")
    return problems
