"""Matheuristic engine: round-down repair of the LB set, path relinking with
its selection rules and archives, and the end-to-end run pipeline.

Variants
--------
RD      rounding only.
PRrand  random (initiating, guiding) pair, random next step.
PRsim   guiding solution most similar to the initiating one, random step.
PRdif   most different guiding solution, random step.
PI      random pair; best-move analysis picks the next step.
PIsim   similar pair with best-move analysis.
PIdif   different pair with best-move analysis.

Best-move analysis means: with probability `best_move_prob` the step is
chosen among the mutually nondominated neighbours (the improvement-ratio
rank rule breaks the tie when there are several), otherwise uniformly at
random.  The PR* variants always step randomly.

Random stream discipline: one seeded xoshiro256** stream per run.  Draw
order per iteration: pair draws first (one index for sim/dif rules, two for
the random rule), then per step one coin draw, then one neighbour index draw
when the step is random.  The coin is drawn even when its probability is
zero so that all variants consume the stream identically per step.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (InsufficientSolutionsError, NoRoundedSolutionError,
                     ValidationError)
from .lbset import LbSet, compute_lb_set
from .lp import INT_TOL
from .model import KIND_ASSIGNMENT, Problem, Solution
from .metrics import filter_nondominated_solutions
from .rng import Xoshiro256StarStar

log = logging.getLogger(__name__)

VARIANTS = ("RD", "PRrand", "PRsim", "PRdif", "PI", "PIsim", "PIdif")

_PAIR_RULE = {
    "PRrand": "random", "PRsim": "sim", "PRdif": "dif",
    "PI": "random", "PIsim": "sim", "PIdif": "dif",
}
_USES_BEST_MOVE = {"PI", "PIsim", "PIdif"}


@dataclass
class PrConfig:
    """Heuristic parameters."""

    variant: str = "PI"
    seed: int = 0
    iteration_multiplier: int = 50
    best_move_prob: float = 0.7
    force_pr: bool = False          # run PR on assignment instances anyway

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}, pick one of {VARIANTS}")
        if not 0.0 <= self.best_move_prob <= 1.0:
            raise ValidationError("best_move_prob must be in [0, 1]")
        if self.iteration_multiplier < 0:
            raise ValidationError("iteration_multiplier must be >= 0")


class IrSet:
    """Feasible integer solutions rounded from the LB set, with provenance.

    Grows during path relinking; the x vectors are pairwise distinct.
    """

    def __init__(self):
        self.solutions: list[Solution] = []
        self.provenance: list[list[int]] = []
        self.dropped_infeasible = 0
        self._keys: dict[bytes, int] = {}

    def __len__(self):
        return len(self.solutions)

    def __contains__(self, key: bytes):
        return key in self._keys

    def add(self, solution: Solution, lb_index: int | None = None) -> bool:
        """Add a solution unless its x vector is already present."""
        key = solution.key()
        at = self._keys.get(key)
        if at is not None:
            if lb_index is not None:
                self.provenance[at].append(lb_index)
            return False
        self._keys[key] = len(self.solutions)
        self.solutions.append(solution)
        self.provenance.append([lb_index] if lb_index is not None else [])
        return True

    def x_matrix(self) -> np.ndarray:
        return np.array([s.x for s in self.solutions], dtype=np.int8)


@dataclass
class PrArchives:
    """candX: newly found feasible solutions; ig_pairs: used (S_i, S_g) pairs."""

    cand_x: list[Solution] = field(default_factory=list)
    ig_pairs: set[tuple[bytes, bytes]] = field(default_factory=set)


@dataclass
class RunReport:
    """Per-run results row."""

    variant: str
    seed: int
    y_count: int
    time_sec: float
    lp_count: int
    ir_size: int = 0
    pr_iterations: int = 0
    instance: str | None = None
    hv: float | None = None
    hv_percent: float | None = None


def round_down(lb: LbSet, problem: Problem, int_tol: float = INT_TOL) -> IrSet:
    """Round every LB solution down to a binary vector and keep the feasible ones.

    Components within int_tol of 1 stay 1, everything else drops to 0
    (integral components are preserved, fractional ones floored).  Infeasible
    results are dropped with a warning count, duplicates are merged.
    """
    ir = IrSet()
    for idx, point in enumerate(lb.points):
        x = (np.asarray(point.x) >= 1.0 - int_tol).astype(np.int8)
        y = tuple(int(v) for v in problem.C @ x.astype(np.int64))
        feasible = _feasible_int(problem, x)
        if not feasible:
            ir.dropped_infeasible += 1
            continue
        ir.add(Solution(x, y, True), lb_index=idx)
    if ir.dropped_infeasible:
        log.warning("round_down dropped %d infeasible rounded solutions", ir.dropped_infeasible)
    if len(ir) == 0:
        raise NoRoundedSolutionError("no feasible rounded solution; report the LB set instead")
    return ir


def _feasible_int(problem: Problem, x: np.ndarray) -> bool:
    lhs = problem.A @ x.astype(np.int64)
    for i, sense in enumerate(problem.row_sense):
        v, rhs = int(lhs[i]), int(problem.b[i])
        if (sense == "<=" and v > rhs) or (sense == ">=" and v < rhs) or (sense == "=" and v != rhs):
            return False
    return True


def similarity(a, b) -> int:
    """Number of positions with equal variable values."""
    return int(np.count_nonzero(np.asarray(a) == np.asarray(b)))


def select_pair(ir: IrSet, rule: str, rng: Xoshiro256StarStar) -> tuple[Solution, Solution]:
    """Pick (initiating, guiding) from the IR set.

    random: two distinct uniform picks.  sim/dif: uniform initiating pick,
    then the most similar / most different guiding solution; ties go to the
    lowest index.
    """
    k = len(ir)
    if k < 2:
        raise InsufficientSolutionsError("path relinking needs at least two initial solutions")
    i = rng.randint(k)
    if rule == "random":
        g = rng.randint(k - 1)
        if g >= i:
            g += 1
        return ir.solutions[i], ir.solutions[g]
    if rule not in ("sim", "dif"):
        raise ValidationError(f"unknown selection rule {rule!r}")
    xs = ir.x_matrix()
    sims = np.count_nonzero(xs == xs[i][None, :], axis=1)
    if rule == "sim":
        sims[i] = -1
        g = int(np.argmax(sims))
    else:
        sims[i] = xs.shape[1] + 1
        g = int(np.argmin(sims))
    return ir.solutions[i], ir.solutions[g]


def generate_neighborhood(s_i, s_g) -> list[np.ndarray]:
    """One neighbour per differing position: s_i with that bit flipped,
    in ascending position order."""
    a = np.asarray(s_i, dtype=np.int8)
    b = np.asarray(s_g, dtype=np.int8)
    if a.shape != b.shape:
        raise ValidationError("solutions of different length")
    delta = np.flatnonzero(a != b)
    if delta.size == 0:
        raise ValidationError("initiating and guiding solutions are identical")
    out = []
    for j in delta:
        nb = a.copy()
        nb[j] = 1 - nb[j]
        out.append(nb)
    return out


def _nondominated_rows(y: np.ndarray) -> np.ndarray:
    """Mask of rows not strictly dominated by another row (duplicates all kept)."""
    le = (y[None, :, :] <= y[:, None, :]).all(axis=2)
    lt = (y[None, :, :] < y[:, None, :]).any(axis=2)
    return ~np.logical_and(le, lt).any(axis=1)


def improved_nd(obj_s_i, nd) -> int:
    """Index of the most-improved point among mutually nondominated neighbours.

    Per objective, each point's ratio to the current objective value is
    ranked 1..|ND| with larger improvement getting the larger rank (ties go
    to the lower row index); the point with the highest rank sum wins, ties
    again to the lower index.  A zero current value falls back to ranking
    that objective by raw value, smaller meaning more improved.
    """
    nd = np.asarray(nd, dtype=np.float64).reshape(-1, len(obj_s_i))
    k = nd.shape[0]
    if k == 0:
        raise ValidationError("improved_nd needs at least one candidate")
    obj = np.asarray(obj_s_i, dtype=np.float64)
    degrees = np.zeros(k, dtype=np.int64)
    rows = np.arange(k)
    for j in range(nd.shape[1]):
        if obj[j] != 0.0:
            key = nd[:, j] / obj[j]          # larger ratio = larger improvement
        else:
            key = -nd[:, j]                  # smaller raw value = larger improvement
        order = np.lexsort((rows, key))      # ascending key, ties by lower index
        ranks = np.empty(k, dtype=np.int64)
        ranks[order] = np.arange(1, k + 1)
        degrees += ranks
    return int(np.argmax(degrees))


class _WalkState:
    """Incremental state of one relinking walk: current x, objective point,
    and constraint left-hand sides."""

    def __init__(self, problem: Problem, x0: np.ndarray):
        self.problem = problem
        self.ct = problem.C.T.astype(np.int64)      # (n, 3)
        self.at = problem.A.T.astype(np.int64)      # (n, m)
        self.x = np.asarray(x0, dtype=np.int8).copy()
        xi = self.x.astype(np.int64)
        self.y = problem.C @ xi
        self.lhs = problem.A @ xi

    def advance(self, x_new: np.ndarray, j: int):
        """Move to a neighbour that differs from the current x in bit j."""
        sign = 1 - 2 * int(self.x[j])
        self.x = x_new
        self.y += sign * self.ct[j]
        self.lhs += sign * self.at[j]

    def feasible(self) -> bool:
        for i, sense in enumerate(self.problem.row_sense):
            v, rhs = int(self.lhs[i]), int(self.problem.b[i])
            if (sense == "<=" and v > rhs) or (sense == ">=" and v < rhs) \
                    or (sense == "=" and v != rhs):
                return False
        return True


def path_relink_walk(problem: Problem, s_i: Solution, s_g: Solution, ir: IrSet,
                     archives: PrArchives, rng: Xoshiro256StarStar,
                     best_move_prob: float, collect_visits: bool = False):
    """Walk from the initiating to the guiding solution, one flip per step.

    Feasible, previously unseen intermediate solutions are appended to candX
    and to the IR set; infeasible intermediates keep walking but are never
    archived.  The walk stops when the current solution reaches the guiding
    one or the current (S_i, S_g) pair was already used.  Returns the list
    of visited vectors when collect_visits is set.
    """
    visits: list[np.ndarray] = []
    key_g = s_g.key()
    x_g = np.asarray(s_g.x, dtype=np.int8)
    state = _WalkState(problem, s_i.x)
    ct = state.ct
    while True:
        key_cur = state.x.tobytes()
        if key_cur == key_g or (key_cur, key_g) in archives.ig_pairs:
            break
        delta = np.flatnonzero(state.x != x_g)
        neighborhood = np.repeat(state.x[None, :], delta.size, axis=0)
        neighborhood[np.arange(delta.size), delta] ^= 1
        coin = rng.random()
        if coin < best_move_prob:
            signs = (1 - 2 * state.x[delta]).astype(np.int64)
            y_nb = state.y[None, :] + signs[:, None] * ct[delta]
            nd_idx = np.flatnonzero(_nondominated_rows(y_nb))
            if nd_idx.size == 1:
                pick = int(nd_idx[0])
            else:
                pick = int(nd_idx[improved_nd(state.y, y_nb[nd_idx])])
        else:
            pick = int(rng.randint(delta.size))
        state.advance(neighborhood[pick], int(delta[pick]))
        if collect_visits:
            visits.append(state.x.copy())
        if state.feasible():
            key_new = state.x.tobytes()
            if key_new not in ir:
                sol = Solution(state.x.copy(), tuple(int(v) for v in state.y), True)
                archives.cand_x.append(sol)
                ir.add(sol)
    return visits


def path_relink_once(ir: IrSet, archives: PrArchives, config: PrConfig,
                     rng: Xoshiro256StarStar, problem: Problem) -> None:
    """One outer iteration: select a pair, walk it, record the pair.

    A pair already recorded in ig_pairs exits immediately; the selected
    (ordered) pair is recorded either way.
    """
    rule = _PAIR_RULE[config.variant]
    prob = config.best_move_prob if config.variant in _USES_BEST_MOVE else 0.0
    s_i, s_g = select_pair(ir, rule, rng)
    path_relink_walk(problem, s_i, s_g, ir, archives, rng, prob)
    archives.ig_pairs.add((s_i.key(), s_g.key()))


def _lb_solutions(lb: LbSet, problem: Problem, int_tol: float = INT_TOL) -> list[Solution]:
    """Snap integral LB solutions to binary Solutions (assignment pass-through)."""
    out = []
    seen = set()
    for point in lb.points:
        x = np.asarray(point.x)
        if np.max(np.abs(x - np.round(x))) > int_tol:
            raise ValidationError("LB solution is fractional; expected integral (assignment)")
        xi = np.round(x).astype(np.int8)
        key = xi.tobytes()
        if key in seen:
            continue
        seen.add(key)
        y = tuple(int(v) for v in problem.C @ xi.astype(np.int64))
        out.append(Solution(xi, y, _feasible_int(problem, xi)))
    return out


def run(problem: Problem, config: PrConfig | None = None):
    """Full pipeline: LB set, rounding, optional path relinking, final filter.

    Returns (front, report): the mutually nondominated feasible solutions
    and a RunReport with |Y|, wall time, LP count, iteration counters.
    Assignment instances use the integral LB solutions directly and skip
    rounding and path relinking unless config.force_pr is set.
    """
    config = config or PrConfig()
    t0 = time.perf_counter()
    lb = compute_lb_set(problem)

    pr_iterations = 0
    ir_size = 0
    if problem.kind == KIND_ASSIGNMENT and not config.force_pr:
        solutions = [s for s in _lb_solutions(lb, problem) if s.feasible]
        front = filter_nondominated_solutions(solutions)
    else:
        ir = round_down(lb, problem)
        ir_size = len(ir)
        if config.variant != "RD":
            if ir_size < 2:
                log.warning("IR set has %d solution(s); path relinking skipped", ir_size)
            else:
                rng = Xoshiro256StarStar(config.seed)
                archives = PrArchives()
                iterations = ir_size * config.iteration_multiplier
                for _ in range(iterations):
                    path_relink_once(ir, archives, config, rng, problem)
                    pr_iterations += 1
        front = filter_nondominated_solutions(ir.solutions)

    report = RunReport(
        variant=config.variant,
        seed=config.seed,
        y_count=len(front),
        time_sec=time.perf_counter() - t0,
        lp_count=lb.lp_count,
        ir_size=ir_size,
        pr_iterations=pr_iterations,
    )
    return front, report
