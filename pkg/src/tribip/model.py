"""Tri-objective binary programs: data model, benchmark classes, file I/O.

All objectives are stored in minimisation form; an objective ingested as
"max" is negated exactly once and the original sense is kept for reporting.
Three problem kinds are supported:

* ``knapsack``   - maximise three profit rows under one capacity row,
* ``assignment`` - minimise three cost matrices under the two families of
  assignment equalities (variable ``x[r*T + l]`` assigns task ``l`` to
  agent ``r``),
* ``general``    - arbitrary rows with senses ``<=``, ``>=``, ``=``.

Problems and solutions are immutable after construction and safe to share
across concurrent runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ParseError, ValidationError

P_OBJECTIVES = 3

KIND_KNAPSACK = "knapsack"
KIND_ASSIGNMENT = "assignment"
KIND_GENERAL = "general"
KINDS = (KIND_KNAPSACK, KIND_ASSIGNMENT, KIND_GENERAL)

ROW_SENSES = ("<=", ">=", "=")
OBJ_SENSES = ("min", "max")

INSTANCE_MAGIC = "tribip-instance v1"
FRONT_MAGIC = "tribip-front v1"

DEFAULT_COEFF_RANGE = (1, 1000)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_int_matrix(values, rows, cols, what) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.shape != (rows, cols):
        raise DimensionError(f"{what} must have shape ({rows}, {cols}), got {arr.shape}")
    return arr


@dataclass(frozen=True)
class Problem:
    """A tri-objective binary program in minimisation form.

    Attributes
    ----------
    kind : one of ``knapsack``, ``assignment``, ``general``.
    C : (3, n) int64 objective matrix, minimisation form.
    A : (m, n) int64 constraint matrix.
    b : (m,) int64 right-hand sides.
    row_sense : per-row sense, ``<=`` / ``>=`` / ``=``.
    original_sense : per-objective ingested sense, ``min`` / ``max``.
    """

    kind: str
    C: np.ndarray
    A: np.ndarray
    b: np.ndarray
    row_sense: tuple[str, ...]
    original_sense: tuple[str, ...]

    def __post_init__(self):
        C = np.asarray(self.C, dtype=np.int64)
        if C.ndim != 2 or C.shape[0] != P_OBJECTIVES:
            raise ValidationError(f"objective matrix must have {P_OBJECTIVES} rows, got shape {C.shape}")
        n = C.shape[1]
        if n < 1:
            raise ValidationError("need at least one variable")
        A = np.asarray(self.A, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        if A.ndim != 2 or A.shape[1] != n:
            raise ValidationError(f"constraint matrix shape {A.shape} inconsistent with n={n}")
        m = A.shape[0]
        if b.shape != (m,):
            raise ValidationError(f"rhs length {b.shape} inconsistent with m={m}")
        row_sense = tuple(self.row_sense)
        if len(row_sense) != m or any(s not in ROW_SENSES for s in row_sense):
            raise ValidationError(f"row_sense must be {m} of {ROW_SENSES}, got {row_sense}")
        original_sense = tuple(self.original_sense)
        if len(original_sense) != P_OBJECTIVES or any(s not in OBJ_SENSES for s in original_sense):
            raise ValidationError(f"original_sense must be {P_OBJECTIVES} of {OBJ_SENSES}")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "C", _frozen(C))
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "row_sense", row_sense)
        object.__setattr__(self, "original_sense", original_sense)
        if self.kind == KIND_KNAPSACK:
            self._check_knapsack()
        elif self.kind == KIND_ASSIGNMENT:
            self._check_assignment()

    def _check_knapsack(self):
        if self.m != 1 or self.row_sense != ("<=",):
            raise ValidationError("knapsack needs exactly one <= capacity row")
        if self.original_sense != ("max",) * P_OBJECTIVES:
            raise ValidationError("knapsack objectives must be ingested as max profits")
        if (self.C > 0).any():
            raise ValidationError("knapsack profits must be nonnegative")
        if (self.A[0] < 0).any():
            raise ValidationError("knapsack weights must be nonnegative")
        if self.b[0] < 0:
            raise ValidationError("knapsack capacity must be nonnegative")

    def _check_assignment(self):
        t = math.isqrt(self.n)
        if t * t != self.n:
            raise ValidationError(f"assignment variable count {self.n} is not a perfect square")
        if self.original_sense != ("min",) * P_OBJECTIVES:
            raise ValidationError("assignment objectives must be ingested as min costs")
        if (self.C < 0).any():
            raise ValidationError("assignment costs must be nonnegative")
        expected_a, expected_b, expected_s = _assignment_rows(t)
        if (self.m != 2 * t or self.row_sense != expected_s
                or not np.array_equal(self.A, expected_a) or not np.array_equal(self.b, expected_b)):
            raise ValidationError("assignment constraint rows must be the two equality families")

    @property
    def n(self) -> int:
        return self.C.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return P_OBJECTIVES

    @property
    def weights(self) -> np.ndarray:
        if self.kind != KIND_KNAPSACK:
            raise ValidationError("weights only defined for knapsack problems")
        return self.A[0]

    @property
    def capacity(self) -> int:
        if self.kind != KIND_KNAPSACK:
            raise ValidationError("capacity only defined for knapsack problems")
        return int(self.b[0])

    @property
    def tasks(self) -> int:
        if self.kind != KIND_ASSIGNMENT:
            raise ValidationError("tasks only defined for assignment problems")
        return math.isqrt(self.n)

    def sense_signs(self) -> np.ndarray:
        """+1 for min rows, -1 for max rows (native = sign * internal)."""
        return np.array([1 if s == "min" else -1 for s in self.original_sense], dtype=np.int64)

    def native_objectives(self) -> np.ndarray:
        """Objective matrix in the ingested senses (profits positive again)."""
        return self.sense_signs()[:, None] * self.C

    def to_native(self, y) -> tuple:
        """Map an internal (minimisation) objective point back to the ingested senses."""
        signs = self.sense_signs()
        out = []
        for k in range(self.p):
            v = signs[k] * y[k]
            out.append(int(v) if float(v).is_integer() else float(v))
        return tuple(out)


@dataclass(frozen=True)
class Solution:
    """A binary assignment with its evaluated objective point (minimisation form)."""

    x: np.ndarray
    y: tuple[int, int, int]
    feasible: bool

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int8)
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))

    def key(self) -> bytes:
        return self.x.tobytes()


def _check_binary(problem: Problem, x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape != (problem.n,):
        raise DimensionError(f"solution vector must have length {problem.n}, got shape {arr.shape}")
    if ((arr != 0) & (arr != 1)).any():
        raise ValidationError("solution vector must be binary")
    return arr


def evaluate(problem: Problem, x) -> tuple[int, int, int]:
    """Objective point C.x of a binary vector, in minimisation form."""
    arr = _check_binary(problem, x)
    y = problem.C @ arr
    return tuple(int(v) for v in y)


def is_feasible(problem: Problem, x) -> bool:
    """Exact integer check of all constraint rows under their senses."""
    arr = _check_binary(problem, x)
    lhs = problem.A @ arr
    for i, sense in enumerate(problem.row_sense):
        v, rhs = int(lhs[i]), int(problem.b[i])
        if sense == "<=" and v > rhs:
            return False
        if sense == ">=" and v < rhs:
            return False
        if sense == "=" and v != rhs:
            return False
    return True


def make_solution(problem: Problem, x) -> Solution:
    return Solution(np.asarray(x, dtype=np.int8), evaluate(problem, x), is_feasible(problem, x))


def knapsack_problem(profits, weights, capacity) -> Problem:
    """Build a knapsack problem from native (max) profits."""
    profits = np.asarray(profits, dtype=np.int64)
    if profits.ndim != 2 or profits.shape[0] != P_OBJECTIVES:
        raise ValidationError(f"profits must have {P_OBJECTIVES} rows")
    n = profits.shape[1]
    weights = np.asarray(weights, dtype=np.int64)
    if weights.shape != (n,):
        raise DimensionError(f"weights must have length {n}")
    return Problem(
        kind=KIND_KNAPSACK,
        C=-profits,
        A=weights[None, :],
        b=np.array([int(capacity)], dtype=np.int64),
        row_sense=("<=",),
        original_sense=("max",) * P_OBJECTIVES,
    )


def _assignment_rows(tasks: int):
    n = tasks * tasks
    a = np.zeros((2 * tasks, n), dtype=np.int64)
    for r in range(tasks):
        a[r, r * tasks:(r + 1) * tasks] = 1            # agent r does one task
    for l in range(tasks):
        a[tasks + l, l::tasks] = 1                     # task l done by one agent
    b = np.ones(2 * tasks, dtype=np.int64)
    senses = ("=",) * (2 * tasks)
    return a, b, senses


def assignment_problem(costs) -> Problem:
    """Build an assignment problem from three tasks x tasks cost matrices."""
    costs = np.asarray(costs, dtype=np.int64)
    if costs.ndim != 3 or costs.shape[0] != P_OBJECTIVES or costs.shape[1] != costs.shape[2]:
        raise ValidationError("costs must have shape (3, tasks, tasks)")
    t = costs.shape[1]
    a, b, senses = _assignment_rows(t)
    return Problem(
        kind=KIND_ASSIGNMENT,
        C=costs.reshape(P_OBJECTIVES, t * t),
        A=a,
        b=b,
        row_sense=senses,
        original_sense=("min",) * P_OBJECTIVES,
    )


def general_problem(objectives, senses, a, row_sense, b) -> Problem:
    """Build a general binary program; max objectives are negated internally."""
    obj = np.asarray(objectives, dtype=np.int64)
    senses = tuple(senses)
    if obj.ndim != 2 or obj.shape[0] != P_OBJECTIVES or len(senses) != P_OBJECTIVES:
        raise ValidationError(f"need {P_OBJECTIVES} objective rows and senses")
    if any(s not in OBJ_SENSES for s in senses):
        raise ValidationError(f"objective senses must be in {OBJ_SENSES}")
    signs = np.array([1 if s == "min" else -1 for s in senses], dtype=np.int64)
    return Problem(
        kind=KIND_GENERAL,
        C=signs[:, None] * obj,
        A=np.asarray(a, dtype=np.int64),
        b=np.asarray(b, dtype=np.int64),
        row_sense=tuple(row_sense),
        original_sense=senses,
    )


def generate_knapsack(n: int, seed: int, coeff_range=DEFAULT_COEFF_RANGE) -> Problem:
    """Random knapsack: profits and weights uniform in coeff_range,
    capacity = ceil(total weight / 2).  Deterministic in seed (PCG64);
    profits are drawn before weights."""
    lo, hi = int(coeff_range[0]), int(coeff_range[1])
    if n < 1 or lo < 1 or hi < lo:
        raise ValidationError("need n >= 1 and a nonempty positive coefficient range")
    rng = np.random.default_rng(seed)
    profits = rng.integers(lo, hi + 1, size=(P_OBJECTIVES, n), dtype=np.int64)
    weights = rng.integers(lo, hi + 1, size=n, dtype=np.int64)
    capacity = -(-int(weights.sum()) // 2)
    return knapsack_problem(profits, weights, capacity)


def generate_assignment(tasks: int, seed: int, coeff_range=DEFAULT_COEFF_RANGE) -> Problem:
    """Random assignment: three tasks x tasks cost matrices uniform in
    coeff_range.  Deterministic in seed (PCG64)."""
    lo, hi = int(coeff_range[0]), int(coeff_range[1])
    if tasks < 1 or lo < 0 or hi < lo:
        raise ValidationError("need tasks >= 1 and a nonempty nonnegative coefficient range")
    rng = np.random.default_rng(seed)
    costs = rng.integers(lo, hi + 1, size=(P_OBJECTIVES, tasks, tasks), dtype=np.int64)
    return assignment_problem(costs)


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------

class _LineReader:
    def __init__(self, path, text: str):
        self.path = path
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, what: str) -> tuple[int, str]:
        while self.pos < len(self.lines):
            self.pos += 1
            line = self.lines[self.pos - 1].strip()
            if line and not line.startswith("#"):
                return self.pos, line
        raise ParseError(self.path, self.pos + 1, f"unexpected end of file, expected {what}")

    def keyword(self, key: str) -> list[str]:
        no, line = self.next(f"'{key}' line")
        parts = line.split()
        if parts[0] != key:
            raise ParseError(self.path, no, f"expected '{key}', got '{parts[0]}'")
        return parts[1:]

    def ints(self, key: str, count: int) -> list[int]:
        vals = self.keyword(key)
        return self._to_ints(vals, count, key)

    def int_row(self, what: str, count: int) -> list[int]:
        no, line = self.next(what)
        return self._to_ints(line.split(), count, what, line_no=no)

    def _to_ints(self, tokens, count, what, line_no=None):
        no = line_no if line_no is not None else self.pos
        if count is not None and len(tokens) != count:
            raise ParseError(self.path, no, f"{what}: expected {count} values, got {len(tokens)}")
        try:
            return [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(self.path, no, f"{what}: not an integer: {exc}") from None


def write_instance(problem: Problem, path) -> None:
    lines = [
        INSTANCE_MAGIC,
        f"kind {problem.kind}",
        f"n {problem.n}",
        f"p {problem.p}",
        "sense " + " ".join(problem.original_sense),
    ]
    if problem.kind == KIND_ASSIGNMENT:
        lines.append(f"tasks {problem.tasks}")
    lines.append("objectives")
    for row in problem.native_objectives():
        lines.append(" ".join(str(int(v)) for v in row))
    if problem.kind == KIND_KNAPSACK:
        lines.append("weights")
        lines.append(" ".join(str(int(v)) for v in problem.weights))
        lines.append(f"capacity {problem.capacity}")
    elif problem.kind == KIND_GENERAL:
        lines.append(f"m {problem.m}")
        lines.append("rowsense " + " ".join(problem.row_sense))
        lines.append("A")
        for row in problem.A:
            lines.append(" ".join(str(int(v)) for v in row))
        lines.append("b " + " ".join(str(int(v)) for v in problem.b))
    Path(path).write_text("\n".join(lines) + "\n")


def read_instance(path) -> Problem:
    """Parse an instance file; malformed content raises ParseError with the
    offending line, semantic violations raise ValidationError."""
    path = Path(path)
    rd = _LineReader(path, path.read_text())
    no, magic = rd.next("file magic")
    if magic != INSTANCE_MAGIC:
        raise ParseError(path, no, f"unrecognised magic line {magic!r}")
    kind = rd.keyword("kind")
    if len(kind) != 1 or kind[0] not in KINDS:
        raise ParseError(path, rd.pos, f"kind must be one of {KINDS}")
    kind = kind[0]
    n = rd.ints("n", 1)[0]
    p = rd.ints("p", 1)[0]
    if p != P_OBJECTIVES:
        raise ValidationError(f"{path}: this artifact fixes p = {P_OBJECTIVES}, file declares p = {p}")
    senses = rd.keyword("sense")
    if len(senses) != P_OBJECTIVES or any(s not in OBJ_SENSES for s in senses):
        raise ParseError(path, rd.pos, f"sense must list {P_OBJECTIVES} of {OBJ_SENSES}")
    tasks = None
    if kind == KIND_ASSIGNMENT:
        tasks = rd.ints("tasks", 1)[0]
    kw = rd.keyword("objectives")
    if kw:
        raise ParseError(path, rd.pos, "objectives keyword takes no values")
    obj = [rd.int_row(f"objective row {k + 1}", n) for k in range(P_OBJECTIVES)]
    obj = np.array(obj, dtype=np.int64)

    if kind == KIND_KNAPSACK:
        if senses != ["max"] * P_OBJECTIVES:
            raise ValidationError(f"{path}: knapsack objectives must all be max")
        kw = rd.keyword("weights")
        if kw:
            raise ParseError(path, rd.pos, "weights keyword takes no values")
        weights = rd.int_row("weights row", n)
        capacity = rd.ints("capacity", 1)[0]
        return knapsack_problem(obj, weights, capacity)

    if kind == KIND_ASSIGNMENT:
        if tasks is None or tasks * tasks != n:
            raise ValidationError(f"{path}: tasks^2 must equal n")
        if senses != ["min"] * P_OBJECTIVES:
            raise ValidationError(f"{path}: assignment objectives must all be min")
        return assignment_problem(obj.reshape(P_OBJECTIVES, tasks, tasks))

    m = rd.ints("m", 1)[0]
    row_sense = rd.keyword("rowsense")
    if len(row_sense) != m or any(s not in ROW_SENSES for s in row_sense):
        raise ParseError(path, rd.pos, f"rowsense must list {m} of {ROW_SENSES}")
    kw = rd.keyword("A")
    if kw:
        raise ParseError(path, rd.pos, "A keyword takes no values")
    a = [rd.int_row(f"constraint row {i + 1}", n) for i in range(m)]
    b = rd.ints("b", m)
    return general_problem(obj, senses, a, tuple(row_sense), b)


# ---------------------------------------------------------------------------
# front files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrontData:
    """Parsed front file: metadata plus (x, native y) records."""

    kind: str
    n: int
    sense: tuple[str, ...]
    records: tuple

    def min_points(self) -> np.ndarray:
        """Objective points converted to minimisation form."""
        signs = np.array([1 if s == "min" else -1 for s in self.sense])
        ys = np.array([rec[1] for rec in self.records], dtype=np.float64).reshape(-1, P_OBJECTIVES)
        pts = signs[None, :] * ys
        if np.allclose(pts, np.round(pts)):
            return np.round(pts).astype(np.int64)
        return pts


def _format_number(v) -> str:
    f = float(v)
    if f == int(f):
        return str(int(f))
    return repr(f)


def write_front(path, problem: Problem, entries: Iterable) -> None:
    """Write a front file.

    ``entries`` may be Solution objects or (x, y) pairs where y is in
    minimisation form.  Integral vectors are written as 0/1 strings,
    fractional ones (LB-set exports) are flagged with '~' and written as
    comma-separated values.  Objective points are written in the original
    senses.
    """
    records = []
    for entry in entries:
        if isinstance(entry, Solution):
            x, y = entry.x, entry.y
        else:
            x, y = entry
        xa = np.asarray(x, dtype=np.float64)
        y_native = [s * float(v) for s, v in zip(problem.sense_signs(), y)]
        if np.all(np.abs(xa - np.round(xa)) <= 1e-9):
            xs = "".join(str(int(round(v))) for v in xa)
        else:
            xs = "~" + ",".join(_format_number(v) for v in xa)
        records.append(xs + " " + " ".join(_format_number(v) for v in y_native))
    lines = [
        FRONT_MAGIC,
        f"kind {problem.kind}",
        f"n {problem.n}",
        f"p {problem.p}",
        "sense " + " ".join(problem.original_sense),
        f"count {len(records)}",
        "solutions",
    ]
    Path(path).write_text("\n".join(lines + records) + "\n")


def read_front(path) -> FrontData:
    path = Path(path)
    rd = _LineReader(path, path.read_text())
    no, magic = rd.next("file magic")
    if magic != FRONT_MAGIC:
        raise ParseError(path, no, f"unrecognised magic line {magic!r}")
    kind = rd.keyword("kind")[0]
    n = rd.ints("n", 1)[0]
    p = rd.ints("p", 1)[0]
    if p != P_OBJECTIVES:
        raise ValidationError(f"{path}: this artifact fixes p = {P_OBJECTIVES}, file declares p = {p}")
    sense = tuple(rd.keyword("sense"))
    count = rd.ints("count", 1)[0]
    kw = rd.keyword("solutions")
    if kw:
        raise ParseError(path, rd.pos, "solutions keyword takes no values")
    records = []
    for _ in range(count):
        no, line = rd.next("solution record")
        parts = line.split()
        if len(parts) != 1 + P_OBJECTIVES:
            raise ParseError(path, no, f"record needs x plus {P_OBJECTIVES} objective values")
        xs = parts[0]
        try:
            if xs.startswith("~"):
                x = np.array([float(t) for t in xs[1:].split(",")], dtype=np.float64)
            else:
                x = np.array([int(c) for c in xs], dtype=np.int8)
            y = tuple(float(t) for t in parts[1:])
        except ValueError as exc:
            raise ParseError(path, no, f"bad solution record: {exc}") from None
        if len(x) != n:
            raise ParseError(path, no, f"solution vector length {len(x)} != n={n}")
        records.append((x, y))
    return FrontData(kind=kind, n=n, sense=sense, records=tuple(records))
