"""Exact rational linear programming.

A two-phase primal simplex over :class:`fractions.Fraction` with Bland's
pivoting rule.  Every number that enters or leaves this module is an exact
rational; the only non-rational values are the sentinels ``INF`` and
``NEG_INF`` used to encode unbounded optimal values.

The solver is deliberately simple (dense tableau, sparse-aware row updates);
it is sized for desk-scale instances of a few hundred rows and columns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "INF",
    "NEG_INF",
    "LinearProgram",
    "LpOutcome",
    "FeasibilityResult",
    "solve",
    "solve_objectives",
    "solve_feasibility",
    "dual_objective",
    "enumerate_vertices",
    "VertexEnumeration",
    "as_fraction",
    "format_extended",
    "parse_extended",
]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Sentinels for the extended real line.  Only ever compared, never mixed
#: into arithmetic with finite values.
INF = math.inf
NEG_INF = -math.inf

RELATIONS = ("<=", "=", ">=")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and rational strings; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact rational")


def format_extended(v) -> str:
    if v == INF:
        return "+inf"
    if v == NEG_INF:
        return "-inf"
    return str(v)


def parse_extended(s: str):
    s = s.strip()
    if s in ("+inf", "inf"):
        return INF
    if s == "-inf":
        return NEG_INF
    return Fraction(s)


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` c.x subject to rows and per-variable bounds.

    ``constraints`` holds ``(row, relation, rhs)`` triples with relation one
    of ``"<="``, ``"="``, ``">="``.  ``bounds`` holds one ``(lower, upper)``
    pair per variable, ``None`` meaning unbounded on that side; when
    ``bounds`` is omitted every variable is nonnegative.
    """

    objective: Sequence
    constraints: Sequence = ()
    bounds: Optional[Sequence] = None
    sense: str = "min"

    def __post_init__(self):
        n = len(self.objective)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for k, (row, rel, _rhs) in enumerate(self.constraints):
            if len(row) != n:
                raise ValueError(f"constraint {k} has {len(row)} coefficients, expected {n}")
            if rel not in RELATIONS:
                raise ValueError(f"constraint {k} has unknown relation {rel!r}")
        if self.bounds is not None and len(self.bounds) != n:
            raise ValueError(f"expected {n} bounds, got {len(self.bounds)}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def variable_bounds(self):
        if self.bounds is None:
            return [(ZERO, None)] * self.num_vars
        return [
            (None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))
            for lo, hi in self.bounds
        ]


@dataclass(frozen=True)
class LpOutcome:
    """Result of :func:`solve`.

    ``dual`` holds one shadow price per constraint row, d(value)/d(rhs);
    ``reduced_costs`` holds c_j - A_j.dual, nonzero only for variables
    resting at a bound.
    """

    status: str
    value: object = None
    solution: Optional[tuple] = None
    dual: Optional[tuple] = None
    reduced_costs: Optional[tuple] = None
    basis: Optional[tuple] = None
    ray: Optional[tuple] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[tuple] = None
    certificate: Optional[tuple] = None


# ---------------------------------------------------------------------------
# Tableau machinery
# ---------------------------------------------------------------------------


class _Tableau:
    """Dense simplex tableau, rows ``[coeffs..., rhs]``."""

    def __init__(self, rows, rhs, basis):
        self.rows = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.ncols = len(rows[0]) if rows else 0
        self.cost = None

    def copy(self):
        other = _Tableau.__new__(_Tableau)
        other.rows = [list(r) for r in self.rows]
        other.basis = list(self.basis)
        other.ncols = self.ncols
        other.cost = None
        return other

    def set_costs(self, costs):
        # reduced-cost row: d_j = c_j - sum_i c_B(i) T[i][j]; last entry = -z
        n = self.ncols
        d = list(costs) + [ZERO]
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                row = self.rows[i]
                for j in range(n + 1):
                    v = row[j]
                    if v:
                        d[j] -= cb * v
        self.cost = d

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            prow = [v / p if v else ZERO for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = self.cost[c]
        if f:
            cost = self.cost
            for j in nz:
                cost[j] -= f * prow[j]
        self.basis[r] = c

    def run(self, allowed):
        """Bland's rule until optimal; returns ``None`` or an unbounded column."""
        n = self.ncols
        while True:
            cost = self.cost
            enter = -1
            for j in range(n):
                if allowed[j] and cost[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return None
            best = None
            leave = -1
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[n] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best, leave = ratio, i
            if leave < 0:
                return enter
            self.pivot(leave, enter)

    def column_values(self):
        x = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rows[i][self.ncols]
        return x


@dataclass
class _StandardForm:
    # x_orig[j] = offset[j] + sum(coef * col for col, coef in expansion[j])
    offsets: list
    expansion: list
    rows: list
    rhs: list
    signs: list  # +1/-1 row flip applied to each internal row
    n_struct: int  # columns before slacks
    n_orig_rows: int
    identity: list = field(default_factory=list)  # per row, column holding +e_i
    artificial: list = field(default_factory=list)
    ncols: int = 0


def _standard_form(lp: LinearProgram) -> _StandardForm:
    bounds = lp.variable_bounds()
    offsets, expansion = [], []
    extra_rows = []  # (struct col, upper) for doubly bounded vars
    col = 0
    for lo, hi in bounds:
        if lo is not None:
            offsets.append(lo)
            expansion.append([(col, ONE)])
            if hi is not None:
                extra_rows.append((col, hi - lo))
            col += 1
        elif hi is not None:
            offsets.append(hi)
            expansion.append([(col, -ONE)])
            col += 1
        else:
            offsets.append(ZERO)
            expansion.append([(col, ONE), (col + 1, -ONE)])
            col += 2
    n_struct = col

    raw = []  # (struct coeffs, relation, rhs)
    for row, rel, rhs in lp.constraints:
        coeffs = [ZERO] * n_struct
        b = as_fraction(rhs)
        for j, a in enumerate(row):
            if not a:
                continue
            a = as_fraction(a)
            b -= a * offsets[j]
            for c, s in expansion[j]:
                coeffs[c] += a * s
        raw.append((coeffs, rel, b))
    for c, ub in extra_rows:
        coeffs = [ZERO] * n_struct
        coeffs[c] = ONE
        raw.append((coeffs, "<=", ub))

    n_slack = sum(1 for _, rel, _ in raw if rel != "=")
    total = n_struct + n_slack
    rows, rhs, signs, identity = [], [], [], []
    slack = n_struct
    for coeffs, rel, b in raw:
        full = coeffs + [ZERO] * n_slack
        slack_col = None
        if rel == "<=":
            full[slack] = ONE
            slack_col = slack
            slack += 1
        elif rel == ">=":
            full[slack] = -ONE
            slack_col = slack
            slack += 1
        sign = 1
        if b < 0:
            full = [-v for v in full]
            b = -b
            sign = -1
        rows.append(full)
        rhs.append(b)
        signs.append(sign)
        identity.append(slack_col if slack_col is not None and full[slack_col] == 1 else None)

    artificial = []
    ncols = total
    for i, ident in enumerate(identity):
        if ident is None:
            identity[i] = ncols
            artificial.append(ncols)
            ncols += 1
    for i, row in enumerate(rows):
        ext = [ZERO] * (ncols - total)
        if identity[i] >= total:
            ext[identity[i] - total] = ONE
        rows[i] = row + ext
    return _StandardForm(
        offsets=offsets,
        expansion=expansion,
        rows=rows,
        rhs=rhs,
        signs=signs,
        n_struct=n_struct,
        n_orig_rows=len(lp.constraints),
        identity=identity,
        artificial=artificial,
        ncols=ncols,
    )


def _phase_one(sf: _StandardForm):
    """Run phase one; returns ``(tableau, infeasible)``."""
    m = len(sf.rows)
    if m == 0:
        tab = _Tableau([], [], [])
        tab.ncols = sf.ncols
        tab.cost = [ZERO] * (sf.ncols + 1)
        return tab, False
    tab = _Tableau(sf.rows, sf.rhs, sf.identity)
    art = set(sf.artificial)
    if not art:
        return tab, False
    tab.set_costs([ONE if j in art else ZERO for j in range(sf.ncols)])
    tab.run([True] * sf.ncols)
    if -tab.cost[sf.ncols] > 0:
        return tab, True
    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] in art:
            row = tab.rows[i]
            for j in range(sf.ncols):
                if j not in art and row[j]:
                    tab.pivot(i, j)
                    break
    return tab, False


def _row_duals(tab: _Tableau, sf: _StandardForm, costs):
    # y'_i = c_{id_i} - d_{id_i} for the identity column of row i
    return [costs[k] - tab.cost[k] for k in sf.identity]


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.

    Returns an :class:`LpOutcome` whose status is ``"optimal"``,
    ``"infeasible"`` or ``"unbounded"``.  Optimal solutions are basic, and
    identical inputs give identical outputs.
    """
    return solve_objectives(lp, [lp.objective])[0]


def solve_objectives(lp: LinearProgram, objectives) -> list:
    """Solve ``lp`` once per objective in ``objectives``, sharing phase one.

    ``lp.objective`` itself is ignored; each outcome equals what
    :func:`solve` returns for ``lp`` with that objective.
    """
    sf = _standard_form(lp)
    base, infeasible = _phase_one(sf)
    sigma = 1 if lp.sense == "min" else -1
    if infeasible:
        return [LpOutcome("infeasible", value=INF if sigma == 1 else NEG_INF) for _ in objectives]
    return [_phase_two(lp, sf, base.copy(), list(obj), sigma) for obj in objectives]


def _phase_two(lp, sf, tab, objective, sigma):
    costs = [ZERO] * sf.ncols
    const = ZERO
    for j, c in enumerate(objective):
        if not c:
            continue
        c = as_fraction(c) * sigma
        const += c * sf.offsets[j]
        for col, s in sf.expansion[j]:
            costs[col] += c * s
    art = set(sf.artificial)
    allowed = [j not in art for j in range(sf.ncols)]
    tab.set_costs(costs)
    unbounded_col = tab.run(allowed)
    if unbounded_col is not None:
        ray = _recover_ray(tab, sf, unbounded_col, lp.num_vars)
        return LpOutcome("unbounded", value=NEG_INF if sigma == 1 else INF, ray=ray)

    cols = tab.column_values()
    x = []
    for j in range(lp.num_vars):
        v = sf.offsets[j]
        for col, s in sf.expansion[j]:
            v += s * cols[col]
        x.append(v)
    value = sum((as_fraction(c) * v for c, v in zip(objective, x) if c), ZERO)
    ydash = _row_duals(tab, sf, costs)
    y = [sigma * sf.signs[i] * ydash[i] for i in range(sf.n_orig_rows)]
    reduced = []
    for j in range(lp.num_vars):
        r = as_fraction(objective[j])
        for i, (row, _rel, _rhs) in enumerate(lp.constraints):
            a = row[j]
            if a and y[i]:
                r -= as_fraction(a) * y[i]
        reduced.append(r)
    assert value == sigma * (const - tab.cost[sf.ncols]), "objective bookkeeping drifted"
    return LpOutcome(
        "optimal",
        value=value,
        solution=tuple(x),
        dual=tuple(y),
        reduced_costs=tuple(reduced),
        basis=tuple(tab.basis),
    )


def _recover_ray(tab, sf, col, nvars):
    # direction in column space: +1 on the entering column, -T[i][col] on basics
    d = [ZERO] * sf.ncols
    d[col] = ONE
    for i, b in enumerate(tab.basis):
        d[b] -= tab.rows[i][col]
    ray = []
    for j in range(nvars):
        ray.append(sum((s * d[c] for c, s in sf.expansion[j]), ZERO))
    return tuple(ray)


def dual_objective(lp: LinearProgram, outcome: LpOutcome) -> Fraction:
    """Value of the dual program at ``outcome.dual``.

    Uses only the rows, their right-hand sides, the reduced costs and the
    variable bounds, never the primal solution.
    """
    if not outcome.optimal:
        raise ValueError("dual objective needs an optimal outcome")
    total = sum(
        (as_fraction(rhs) * y for (_row, _rel, rhs), y in zip(lp.constraints, outcome.dual) if y),
        ZERO,
    )
    minimize = lp.sense == "min"
    for (lo, hi), r in zip(lp.variable_bounds(), outcome.reduced_costs):
        if not r:
            continue
        at_lower = (r > 0) == minimize
        bound = lo if at_lower else hi
        if bound is None:
            raise ArithmeticError("reduced cost pushes a variable onto a missing bound")
        total += r * bound
    return total


def solve_feasibility(constraints, num_vars: Optional[int] = None) -> FeasibilityResult:
    """Decide feasibility of a system of rows over free variables.

    ``constraints`` is a sequence of ``(row, relation, rhs)``.  A feasible
    system comes back with a witness.  An infeasible one comes back with a
    Farkas certificate ``y``: ``y >= 0`` on ``<=`` rows, ``y <= 0`` on ``>=``
    rows, ``sum_i y_i a_i = 0`` and ``sum_i y_i b_i = -1``.
    """
    constraints = [(list(r), rel, as_fraction(b)) for r, rel, b in constraints]
    if num_vars is None:
        if not constraints:
            raise ValueError("num_vars is required for an empty system")
        num_vars = len(constraints[0][0])
    lp = LinearProgram(
        objective=[ZERO] * num_vars,
        constraints=constraints,
        bounds=[(None, None)] * num_vars,
    )
    sf = _standard_form(lp)
    tab, infeasible = _phase_one(sf)
    if not infeasible:
        out = solve(lp)
        return FeasibilityResult(True, witness=out.solution)
    art = set(sf.artificial)
    ydash = _row_duals(tab, sf, [ONE if j in art else ZERO for j in range(sf.ncols)])
    z = [sf.signs[i] * ydash[i] for i in range(len(constraints))]
    zb = sum((zi * b for zi, (_r, _rel, b) in zip(z, constraints)), ZERO)
    cert = tuple(-zi / zb for zi in z)
    _check_farkas(constraints, cert, num_vars)
    return FeasibilityResult(False, certificate=cert)


def _check_farkas(constraints, cert, n):
    combo = [ZERO] * n
    rhs = ZERO
    for y, (row, rel, b) in zip(cert, constraints):
        if rel == "<=" and y < 0 or rel == ">=" and y > 0:
            raise ArithmeticError("Farkas certificate has a wrong-signed multiplier")
        if y:
            rhs += y * b
            for j, a in enumerate(row):
                if a:
                    combo[j] += y * as_fraction(a)
    if any(combo) or rhs != -1:
        raise ArithmeticError("Farkas certificate does not certify infeasibility")


# ---------------------------------------------------------------------------
# Vertex enumeration for {x >= 0 : A x = b}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexEnumeration:
    vertices: tuple
    truncated: bool


def _independent_rows(A, b):
    """Drop linearly dependent rows; ``None`` if the system is inconsistent."""
    rows = [[as_fraction(v) for v in r] + [as_fraction(bi)] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    keep, reduced = [], []
    pivots = []  # (column, reduced row)
    for idx, r in enumerate(rows):
        r = list(r)
        for col, prow in pivots:
            f = r[col]
            if f:
                r = [x - f * y for x, y in zip(r, prow)]
        lead = next((j for j in range(n) if r[j]), None)
        if lead is None:
            if r[n]:
                return None
            continue
        p = r[lead]
        r = [x / p for x in r]
        # keep previously reduced rows consistent with the new pivot
        pivots = [(c, [x - pr[lead] * y for x, y in zip(pr, r)]) for c, pr in pivots]
        pivots.append((lead, r))
        keep.append(idx)
    return [list(A[i]) for i in keep], [b[i] for i in keep]


def _basic_solution(A, b, basis):
    """Solve B x_B = b; returns ``(x, T)`` with ``T = B^-1 A`` or ``None``."""
    m = len(A)
    n = len(A[0])
    M = [[as_fraction(v) for v in A[i]] + [as_fraction(b[i])] for i in range(m)]
    for k, col in enumerate(basis):
        piv = next((i for i in range(k, m) if M[i][col]), None)
        if piv is None:
            return None
        M[k], M[piv] = M[piv], M[k]
        p = M[k][col]
        M[k] = [v / p for v in M[k]]
        for i in range(m):
            if i != k and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return M


def enumerate_vertices(A, b, cap: int = 1000) -> VertexEnumeration:
    """Vertices of ``{x >= 0 : A x = b}`` by walking adjacent feasible bases.

    Deterministic: bases are explored breadth first with pivots taken in
    column order.  At most ``cap`` vertices are returned; ``truncated`` is set
    when the walk stopped early.
    """
    if cap <= 0:
        return VertexEnumeration((), True)
    if not A:
        raise ValueError("vertex enumeration needs at least one equality row")
    n = len(A[0])
    reduced = _independent_rows(A, b)
    if reduced is None:
        return VertexEnumeration((), False)
    A, b = reduced
    m = len(A)
    out = solve(LinearProgram([ZERO] * n, [(r, "=", bi) for r, bi in zip(A, b)]))
    if not out.optimal:
        return VertexEnumeration((), False)
    # extend the support of the first vertex to a basis
    basis = [j for j in range(n) if out.solution[j]]
    for j in range(n):
        if len(basis) == m:
            break
        if j in basis:
            continue
        if _basic_solution(A, b, basis + [j]) is not None:
            basis.append(j)
    basis = sorted(basis)

    seen_bases = {tuple(basis)}
    queue = [tuple(basis)]
    vertices = []
    seen_vertices = set()
    max_bases = max(50 * cap, 1000)
    truncated = False
    while queue:
        B = queue.pop(0)
        M = _basic_solution(A, b, list(B))
        x = [ZERO] * n
        for k, col in enumerate(B):
            x[col] = M[k][n]
        key = tuple(x)
        if key not in seen_vertices:
            if len(vertices) >= cap:
                truncated = True
                break
            seen_vertices.add(key)
            vertices.append(key)
        for e in range(n):
            if e in B:
                continue
            ratios = [(M[k][n] / M[k][e], k) for k in range(m) if M[k][e] > 0]
            if not ratios:
                continue
            best = min(r for r, _ in ratios)
            for r, k in ratios:
                if r != best:
                    continue
                nb = tuple(sorted(B[:k] + B[k + 1 :] + (e,)))
                if nb not in seen_bases:
                    if len(seen_bases) >= max_bases:
                        truncated = True
                        continue
                    seen_bases.add(nb)
                    queue.append(nb)
    return VertexEnumeration(tuple(vertices), truncated)
