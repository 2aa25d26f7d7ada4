"""Exact crossing minimization as a 0/1 integer linear program.

Variables: rho_u (rotate internal vertex u), d_p_q (leader of p passes left
or right of q, per undecided pair), chi_p_q (pair allowed to cross).  The
objective minimizes the sum of chi.  Leaf positions are affine in rho:
rotating an ancestor shifts a leaf's position by the size of the sibling
subtree, so the left/right-of-x* conditions become integer big-M constraints
with M = n.

The model is solved by an internal depth-first 0/1 branch-and-bound over rho
(pre-order), or exported in LP format for external solvers.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import (
    Geophylogeny,
    LeaderType,
    _x_star,
    in_po_area,
    in_s_area,
    leaders_cross,
    position_threshold,
)
from .tree import LeafOrder, PhyloTree


@dataclass
class UndecidedPair:
    i: str  # site whose leader is routed
    j: str  # blocking site
    t: int  # positions strictly left of x*
    e: int  # positions exactly at x*
    lca: int
    neutral_before: bool  # l_i left of l_j in the neutral embedding


@dataclass
class FreePair:
    i: str
    j: str
    lca: int
    neutral_cross: bool


@dataclass
class TablePair:
    """Mutual undecided pair (po-leaders with equal site heights)."""

    i: str
    j: str
    lca: int


@dataclass
class IlpModel:
    g: Geophylogeny
    ltype: LeaderType
    index: dict[str, int]  # 1-based site index in neutral leaf order
    shifts: dict[str, dict[int, int]]  # leaf -> {internal vertex: delta}
    free_pairs: list[FreePair]
    undecided: list[UndecidedPair]
    table_pairs: list[TablePair]

    @property
    def n(self) -> int:
        return self.g.tree.n

    @property
    def k(self) -> int:
        return len(self.undecided) + 2 * len(self.table_pairs)


def build_ilp(g: Geophylogeny, ltype: LeaderType) -> IlpModel:
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    labels = tree.leaf_labels
    index = {lab: i + 1 for i, lab in enumerate(labels)}
    leaf_vertex = {lab: tree.leaf_by_label(lab) for lab in labels}

    # position of l_i is affine in rho: neutral position index[i] plus,
    # per ancestor a, +n(sibling) if the sibling is neutrally right of l_i's
    # side and -n(sibling) if it is neutrally left
    shifts: dict[str, dict[int, int]] = {lab: {} for lab in labels}
    for lab in labels:
        v = leaf_vertex[lab]
        for a in tree.ancestors(v):
            left, right = tree.children(a)
            in_left = _contains(tree, left, v)
            sib = right if in_left else left
            shifts[lab][a] = tree.subtree_size(sib) * (1 if in_left else -1)

    contains = in_s_area if ltype is LeaderType.S else in_po_area
    free_pairs, undecided, table_pairs = [], [], []
    for a, b in itertools.combinations(labels, 2):
        lca = tree.lca(leaf_vertex[a], leaf_vertex[b])
        und_ab = contains(g, a, b)
        und_ba = contains(g, b, a)
        if und_ab and und_ba:
            table_pairs.append(TablePair(a, b, lca))
        elif und_ab or und_ba:
            p, q = (a, b) if und_ab else (b, a)
            t, e = position_threshold(g, _x_star(g, p, q, ltype))
            undecided.append(
                UndecidedPair(p, q, t, e, lca, index[p] < index[q])
            )
        else:
            cross = leaders_cross(g, ltype, a, index[a], b, index[b])
            free_pairs.append(FreePair(a, b, lca, cross))
    return IlpModel(g, ltype, index, shifts, free_pairs, undecided, table_pairs)


def _contains(tree: PhyloTree, root: int, v: int) -> bool:
    while v != -1:
        if v == root:
            return True
        v = tree.parent(v)
    return False


@dataclass
class ExactResult:
    order: LeafOrder
    crossings: int
    optimal: bool
    nodes: int = 0
    runtime_ms: float = 0.0

    def __iter__(self):
        return iter((self.order, self.crossings))


class InfeasibleError(ValueError):
    pass


def solve_exact(model: IlpModel, time_limit: float | None = None,
                constraints=None, seed_order: LeafOrder | None = None,
                method: str = "auto") -> ExactResult:
    """Exact crossing minimization over the rotation variables.

    Two backends: "bnb" is a pre-order 0/1 branch-and-bound, "milp" hands
    the integer program to HiGHS (scipy).  "auto" picks bnb for small trees
    and milp otherwise.  `constraints` (pins/ranges/fixed rotations, see
    internal.Constraints) restrict the search space; infeasible constraints
    raise InfeasibleError.  On timeout the best incumbent is returned with
    optimal=False.
    """
    if method not in ("auto", "bnb", "milp"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "bnb" if model.g.tree.n <= 16 else "milp"
    if method == "milp":
        result = _solve_milp(model, time_limit, constraints, seed_order)
        if result is not None:
            return result
        # solver unavailable or returned nothing: fall through to bnb
    return _solve_bnb(model, time_limit, constraints, seed_order)


def _solve_bnb(model: IlpModel, time_limit: float | None = None,
               constraints=None, seed_order: LeafOrder | None = None
               ) -> ExactResult:
    start = time.monotonic()
    g = model.g
    tree = g.tree
    n = tree.n
    internal = tree.internal
    m = len(internal)
    index = model.index

    fixed_bits = {}
    allowed = {lab: (1, n) for lab in tree.leaf_labels}
    if constraints is not None:
        constraints.validate(tree)
        for name, bit in constraints.fixed_rotations.items():
            fixed_bits[internal.index(tree.internal_by_name(name))] = bit
        for lab, p in constraints.pins.items():
            allowed[lab] = (p, p)
        for lab, (lo, hi) in constraints.ranges.items():
            a, b = allowed[lab]
            allowed[lab] = (max(a, lo), min(b, hi))
            if allowed[lab][0] > allowed[lab][1]:
                raise InfeasibleError(f"empty allowed positions for leaf {lab!r}")

    # per internal vertex: geometry-free crossings for each rotation value
    n0 = dict.fromkeys(internal, 0)
    n1 = dict.fromkeys(internal, 0)
    for fp in model.free_pairs:
        if fp.neutral_cross:
            n0[fp.lca] += 1
        else:
            n1[fp.lca] += 1
    min_free = {u: min(n0[u], n1[u]) for u in internal}

    # position bounds per leaf given a partial assignment
    labs = tree.leaf_labels
    lab_ids = {lab: i for i, lab in enumerate(labs)}
    base_lo = [0] * n
    base_hi = [0] * n
    for lab in labs:
        lo = hi = index[lab]
        for a, d in model.shifts[lab].items():
            lo += min(0, d)
            hi += max(0, d)
        base_lo[lab_ids[lab]] = lo
        base_hi[lab_ids[lab]] = hi
    shifts_by_vertex: dict[int, list[tuple[int, int]]] = {u: [] for u in internal}
    for lab in labs:
        for a, d in model.shifts[lab].items():
            shifts_by_vertex[a].append((lab_ids[lab], d))

    lo = list(base_lo)
    hi = list(base_hi)
    assigned = [None] * m
    lca_depth = {u: d for d, u in enumerate(internal)}

    table_memo: dict[tuple[str, str, int, int], bool] = {}

    # undecided pairs as flat tuples for the hot loop:
    # (i_id, j_id, t, t+e, e>0, lca depth, neutral_before)
    pairs = [
        (lab_ids[up.i], lab_ids[up.j], up.t, up.t + up.e, up.e > 0,
         lca_depth[up.lca], up.neutral_before)
        for up in model.undecided
    ]
    # pairs to re-score when a vertex gets (un)assigned: those with a leaf
    # in its subtree (covers the lca itself)
    touched: list[list[int]] = [[] for _ in range(m)]
    by_lca: list[list[int]] = [[] for _ in range(m)]
    for pid, up in enumerate(model.undecided):
        deps = set(model.shifts[up.i]) | set(model.shifts[up.j])
        for u in deps:
            touched[lca_depth[u]].append(pid)
        by_lca[lca_depth[up.lca]].append(pid)

    # table pairs join the bound once both positions are pinned down; the
    # deciding vertex is the deepest (in pre-order) ancestor of either leaf
    tpairs = []
    touched_t: list[list[int]] = [[] for _ in range(m)]
    for tp in model.table_pairs:
        deps = set(model.shifts[tp.i]) | set(model.shifts[tp.j])
        decider = max(lca_depth[u] for u in deps) if deps else -1
        tpairs.append((lab_ids[tp.i], lab_ids[tp.j], tp))
        if decider >= 0:
            touched_t[decider].append(len(tpairs) - 1)

    def pair_contrib_bits(pid: int) -> tuple[int, int]:
        """Pair's minimum contribution for each value of its lca bit.

        Crossing-free completions: p left of the threshold while before q,
        or right of it while after q.  The lca bit fixes before/after; the
        current position intervals decide whether the matching side is
        still reachable.
        """
        ii, jj, t, te, _has_on, _ld, neutral_before = pairs[pid]
        li, hi_i = lo[ii], hi[ii]
        lj, hj = lo[jj], hi[jj]
        if_before = 0 if (li <= t and hj > li) else 1
        if_after = 0 if (hi_i > te and hi_i > lj) else 1
        if neutral_before:
            return if_before, if_after
        return if_after, if_before

    def table_exact(tp: TablePair) -> int:
        pi, pj = lo[lab_ids[tp.i]], lo[lab_ids[tp.j]]
        key = (tp.i, tp.j, pi, pj)
        if key not in table_memo:
            table_memo[key] = leaders_cross(g, model.ltype, tp.i, pi, tp.j, pj)
        return int(table_memo[key])

    best: list = [None, None]  # bits, crossings
    if seed_order is not None:
        c = _evaluate_bits(model, seed_order.rotations)
        if constraints is None or constraints.satisfied_by(seed_order, tree):
            best = [seed_order.rotations, c]
    nodes = 0
    timed_out = [False]

    constrained_labs = [
        (lab_ids[lab], a, b) for lab, (a, b) in allowed.items()
        if a > 1 or b < n
    ]

    def feasible_positions() -> bool:
        for li, a, b in constrained_labs:
            if hi[li] < a or lo[li] > b:
                return False
        return True

    # running lower bound, maintained incrementally across assignments.
    # Pairs with an unassigned lca are grouped by lca: the vertex contributes
    # min(sum-if-neutral, sum-if-rotated) over all its pairs at once.  Once
    # the lca is assigned, the pair's cost is a fixed 0/1 function of the
    # routed leaf's final position; those functions accumulate in the
    # per-leaf position-cost matrix C, and each leaf contributes the minimum
    # of its C row over its current position interval.
    ps0 = [0] * len(pairs)  # pair bound if its lca bit is 0
    ps1 = [0] * len(pairs)
    s0d = [0] * m  # per-depth sums of ps0/ps1 over pairs with that lca
    s1d = [0] * m
    for pid in range(len(pairs)):
        c0, c1 = pair_contrib_bits(pid)
        ps0[pid], ps1[pid] = c0, c1
        ld = pairs[pid][5]
        s0d[ld] += c0
        s1d[ld] += c1
    free_term = [min_free[u] for u in internal]
    term = [min(s0d[d], s1d[d]) for d in range(m)]
    tcontrib = [0] * len(tpairs)
    C = np.zeros((len(labs), n + 2), dtype=np.int32)
    bmin = [0] * len(labs)
    leaves_under = {
        u: sorted({li for li, _ in shifts_by_vertex[u]}) for u in internal
    }
    running = [sum(free_term) + sum(term)]

    def refresh_term(d: int) -> None:
        # pairs with an assigned lca are charged through C instead
        t_new = 0 if assigned[d] is not None else min(s0d[d], s1d[d])
        running[0] += t_new - term[d]
        term[d] = t_new

    def refresh_bmin(li: int) -> None:
        b_new = int(C[li, lo[li]:hi[li] + 1].min())
        running[0] += b_new - bmin[li]
        bmin[li] = b_new

    def assign(depth: int, bit: int) -> tuple:
        assigned[depth] = bit
        u = internal[depth]
        for li, d in shifts_by_vertex[u]:
            if bit:
                lo[li] += d - min(0, d)
                hi[li] += d - max(0, d)
            else:
                lo[li] -= min(0, d)
                hi[li] -= max(0, d)
        # pairs decided by this bit: fixed position-cost for the routed leaf
        releaves = set()
        for pid in by_lca[depth]:
            ii, _jj, t, te, _has_on, _ld, neutral_before = pairs[pid]
            before = neutral_before != bool(bit)
            if before:
                C[ii, t + 1:n + 1] += 1  # crossing unless left of the threshold
            else:
                C[ii, 1:te + 1] += 1  # crossing unless right of it
            releaves.add(ii)
        pair_undo = []
        dirty = {depth}
        for pid in touched[depth]:
            c0, c1 = pair_contrib_bits(pid)
            if c0 != ps0[pid] or c1 != ps1[pid]:
                pair_undo.append((pid, ps0[pid], ps1[pid]))
                ld = pairs[pid][5]
                s0d[ld] += c0 - ps0[pid]
                s1d[ld] += c1 - ps1[pid]
                ps0[pid], ps1[pid] = c0, c1
                dirty.add(ld)
        term_undo = []
        for d in dirty:
            term_undo.append((d, term[d]))
            refresh_term(d)
        bmin_undo = []
        for li in leaves_under[u]:
            releaves.add(li)
        for li in releaves:
            bmin_undo.append((li, bmin[li]))
            refresh_bmin(li)
        for tid in touched_t[depth]:
            ii, jj, tp = tpairs[tid]
            tcontrib[tid] = table_exact(tp)
            running[0] += tcontrib[tid]
        running[0] += (n1[u] if bit else n0[u]) - free_term[depth]
        old_free = free_term[depth]
        free_term[depth] = n1[u] if bit else n0[u]
        return pair_undo, term_undo, bmin_undo, old_free

    def unassign(depth: int, bit: int, undo: tuple):
        pair_undo, term_undo, bmin_undo, old_free = undo
        assigned[depth] = None
        u = internal[depth]
        for li, d in shifts_by_vertex[u]:
            if bit:
                lo[li] -= d - min(0, d)
                hi[li] -= d - max(0, d)
            else:
                lo[li] += min(0, d)
                hi[li] += max(0, d)
        for pid in by_lca[depth]:
            ii, _jj, t, te, _has_on, _ld, neutral_before = pairs[pid]
            before = neutral_before != bool(bit)
            if before:
                C[ii, t + 1:n + 1] -= 1
            else:
                C[ii, 1:te + 1] -= 1
        for pid, c0, c1 in pair_undo:
            ld = pairs[pid][5]
            s0d[ld] += c0 - ps0[pid]
            s1d[ld] += c1 - ps1[pid]
            ps0[pid], ps1[pid] = c0, c1
        for d, old in term_undo:
            running[0] += old - term[d]
            term[d] = old
        for li, old in bmin_undo:
            running[0] += old - bmin[li]
            bmin[li] = old
        for tid in touched_t[depth]:
            running[0] -= tcontrib[tid]
            tcontrib[tid] = 0
        running[0] += old_free - free_term[depth]
        free_term[depth] = old_free

    def dfs(depth: int):
        nonlocal nodes
        nodes += 1
        if timed_out[0]:
            return
        if time_limit is not None and nodes % 1024 == 0:
            if time.monotonic() - start > time_limit:
                timed_out[0] = True
                return
        if not feasible_positions():
            return
        if depth == m:
            total = running[0]
            if best[1] is None or total < best[1]:
                best[0] = tuple(assigned)
                best[1] = total
            return
        if best[1] is not None and running[0] >= best[1]:
            return
        if depth in fixed_bits:
            bits = (fixed_bits[depth],)
        elif seed_order is not None:
            b0 = seed_order.rotations[depth]
            bits = (b0, 1 - b0)
        else:
            bits = (0, 1)
        for bit in bits:
            undo = assign(depth, bit)
            dfs(depth + 1)
            unassign(depth, bit, undo)
            if timed_out[0]:
                return

    dfs(0)

    if best[0] is None:
        raise InfeasibleError("no realizable order satisfies the constraints")
    order = LeafOrder.from_rotations(tree, best[0])
    return ExactResult(
        order=order,
        crossings=best[1],
        optimal=not timed_out[0],
        nodes=nodes,
        runtime_ms=(time.monotonic() - start) * 1000,
    )


def _evaluate_bits(model: IlpModel, bits) -> int:
    order = LeafOrder.from_rotations(model.g.tree, bits)
    from .model import count_crossings

    return count_crossings(model.g, order, model.ltype)


def _solve_milp(model: IlpModel, time_limit: float | None,
                constraints, seed_order: LeafOrder | None = None
                ) -> ExactResult | None:
    """Solve the integer program with HiGHS; None if scipy is unavailable.

    Variables: rho per internal vertex, chi per undecided/mutual pair, and a
    unary position encoding w[p][s] = [pos_p <= s] per routed leaf.  The w
    chain is tied to the rho-affine position by one equality row, so the
    crossing rows carry only 0/1 coefficients (no big-M except the relative
    order row of mutual pairs).
    """
    try:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp
        from scipy.sparse import csr_matrix
    except ImportError:
        return None

    start = time.monotonic()
    g = model.g
    tree = g.tree
    n = tree.n
    internal = tree.internal
    m = len(internal)
    M = n
    slot = {u: k for k, u in enumerate(internal)}

    cost = [0.0] * m
    lb = [0.0] * m
    ub = [1.0] * m
    const0 = 0
    for fp in model.free_pairs:
        # crossing count is neutral_cross + (1 - 2 neutral_cross) rho_lca
        if fp.neutral_cross:
            const0 += 1
            cost[slot[fp.lca]] -= 1.0
        else:
            cost[slot[fp.lca]] += 1.0

    rows_data: list[dict[int, float]] = []
    rows_lb: list[float] = []
    rows_ub: list[float] = []

    def new_var(c: float = 0.0) -> int:
        cost.append(c)
        lb.append(0.0)
        ub.append(1.0)
        return len(cost) - 1

    def add_row(coeffs: dict[int, float], bound: float, low=None):
        rows_data.append(coeffs)
        rows_lb.append(-float("inf") if low is None else low)
        rows_ub.append(bound)

    def pos_coeffs(lab: str, sign: float = 1.0) -> tuple[dict[int, float], int]:
        coeffs: dict[int, float] = {}
        for a, d in model.shifts[lab].items():
            coeffs[slot[a]] = coeffs.get(slot[a], 0.0) + sign * d
        return coeffs, model.index[lab]

    wchain: dict[str, int] = {}

    CONST0, CONST1 = -1, -2

    def wvar(lab: str, s: int) -> int:
        """Variable index for [pos_lab <= s]; CONST0/CONST1 when forced."""
        if s <= 0:
            return CONST0
        if s >= n:
            return CONST1
        base = wchain.get(lab)
        if base is None:
            base = new_var()
            for _ in range(n - 2):
                new_var()
            wchain[lab] = base
            for k2 in range(n - 2):  # monotone: pos<=s implies pos<=s+1
                add_row({base + k2: 1.0, base + k2 + 1: -1.0}, 0.0)
            # sum_s w_s = n - pos; pos is affine in rho
            co, idx0 = pos_coeffs(lab)
            for k2 in range(n - 1):
                co[base + k2] = co.get(base + k2, 0.0) + 1.0
            add_row(co, float(n - idx0), low=float(n - idx0))
        return base + s - 1

    def put(co: dict, var: int, coeff: float, bound: float) -> float:
        """Add coeff*var to the row; CONST0/CONST1 fold into the bound."""
        if var == CONST0:
            return bound
        if var == CONST1:
            return bound - coeff
        co[var] = co.get(var, 0.0) + coeff
        return bound

    for up in model.undecided:
        chi = new_var(1.0)
        l = slot[up.lca]
        # after-indicator b = cb + sb*rho_lca
        cb, sb = (0, 1.0) if up.neutral_before else (1, -1.0)
        # crossing when before and pos_p > t: chi + w[t] + b >= 1
        co = {chi: -1.0, l: -sb}
        bound = -1.0 + cb
        bound = put(co, wvar(up.i, up.t), -1.0, bound)
        add_row(co, bound)
        # crossing when after and pos_p <= t+e: chi >= b + w[t+e] - 1
        co = {chi: -1.0, l: sb}
        bound = 1.0 - cb
        bound = put(co, wvar(up.i, up.t + up.e), 1.0, bound)
        add_row(co, bound)

    for tp in model.table_pairs:
        chi = new_var(1.0)
        u_left, u_right = new_var(), new_var()
        xp, xq = g.sites[tp.i][0], g.sites[tp.j][0]
        tq, eq = position_threshold(g, xq)
        tpi, epi = position_threshold(g, xp)
        # crossing iff the closed x-extents of the two bent leaders overlap;
        # u witnesses strict separation on one side
        for u, p, q, t_right, t_left in (
            (u_left, tp.i, tp.j, tq, tpi + epi + 1),
            (u_right, tp.j, tp.i, tpi, tq + eq + 1),
        ):
            xs, xo = (xp, xq) if p == tp.i else (xq, xp)
            if xs >= xo or t_right < 1 or t_left > n:
                ub[u] = 0.0
                continue
            wp = wvar(p, t_right)  # pos_p strictly left of x_q
            if wp != CONST1:
                add_row({u: 1.0, wp: -1.0}, 0.0)
            wq = wvar(q, t_left - 1)  # pos_q strictly right of x_p
            if wq != CONST0:
                add_row({u: 1.0, wq: 1.0}, 1.0)
            cop, bp = pos_coeffs(p)
            coq, bq = pos_coeffs(q, -1.0)
            both = dict(cop)
            for k2, v2 in coq.items():
                both[k2] = both.get(k2, 0.0) + v2
            both[u] = both.get(u, 0.0) + M
            add_row(both, M - 1 - bp + bq)  # pos_p < pos_q
        add_row({chi: -1.0, u_left: -1.0, u_right: -1.0}, -1.0)

    if constraints is not None:
        constraints.validate(tree)
        for name, bit in constraints.fixed_rotations.items():
            k = slot[tree.internal_by_name(name)]
            lb[k] = ub[k] = float(bit)
        allowed = {}
        for lab, p in constraints.pins.items():
            allowed[lab] = (p, p)
        for lab, (a, b) in constraints.ranges.items():
            prev = allowed.get(lab, (1, n))
            allowed[lab] = (max(prev[0], a), min(prev[1], b))
        for lab, (a, b) in allowed.items():
            if a > b:
                raise InfeasibleError(f"empty allowed positions for leaf {lab!r}")
            co, base = pos_coeffs(lab)
            if b < n:
                add_row(dict(co), float(b - base))
            if a > 1:
                add_row({k2: -v2 for k2, v2 in co.items()}, float(base - a))

    seed_value = None
    if seed_order is not None and (
        constraints is None or constraints.satisfied_by(seed_order, tree)
    ):
        # objective cutoff from the incumbent; keeps it feasible (<=)
        seed_value = _evaluate_bits(model, seed_order.rotations)
        cutoff = {k2: v2 for k2, v2 in enumerate(cost) if v2}
        add_row(cutoff, float(seed_value - const0))

    nvar = len(cost)
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for co in rows_data:
        for k2, v2 in co.items():
            indices.append(k2)
            data.append(v2)
        indptr.append(len(indices))
    A = csr_matrix((data, indices, indptr), shape=(len(rows_data), nvar))
    options = {"presolve": True}
    if time_limit is not None:
        options["time_limit"] = max(time_limit - (time.monotonic() - start), 0.01)
    res = milp(
        c=np.array(cost),
        constraints=LinearConstraint(A, np.array(rows_lb), np.array(rows_ub)),
        integrality=np.ones(nvar),
        bounds=Bounds(np.array(lb), np.array(ub)),
        options=options,
    )
    if res.status == 2 and seed_value is not None:
        # the seed satisfies every row including the cutoff, so a clean
        # infeasible verdict cannot occur; treat as an unproven incumbent
        return ExactResult(
            order=seed_order,
            crossings=seed_value,
            optimal=False,
            runtime_ms=(time.monotonic() - start) * 1000,
        )
    if res.status == 2:
        raise InfeasibleError("no realizable order satisfies the constraints")
    if res.x is None:
        if seed_value is not None:
            return ExactResult(
                order=seed_order,
                crossings=seed_value,
                optimal=False,
                runtime_ms=(time.monotonic() - start) * 1000,
            )
        return None  # no incumbent within the limit; caller falls back
    bits = tuple(int(round(v)) for v in res.x[:m])
    order = LeafOrder.from_rotations(tree, bits)
    crossings = _evaluate_bits(model, bits)
    if res.status != 0 and seed_value is not None and seed_value < crossings:
        order, crossings = seed_order, seed_value
    if res.status == 0 and crossings != round(res.fun) + const0:
        raise RuntimeError(
            f"milp objective {round(res.fun) + const0} disagrees with "
            f"recount {crossings}"
        )
    return ExactResult(
        order=order,
        crossings=crossings,
        optimal=res.status == 0,
        nodes=int(getattr(res, "mip_node_count", 0) or 0),
        runtime_ms=(time.monotonic() - start) * 1000,
    )


# -- LP-format export ---------------------------------------------------------


def export_lp(model: IlpModel, sink=None) -> str:
    """Write the model in LP format (CPLEX dialect).

    Variable names: rho_<vertex>, d_<i>_<j>, chi_<i>_<j> with 1-based site
    indices in neutral leaf order.  If `sink` has a write method the text is
    also written there.
    """
    idx = model.index
    tree = model.g.tree
    n = model.n

    def chi(a, b):
        i, j = sorted((idx[a], idx[b]))
        return f"chi_{i}_{j}"

    def rho(u):
        return f"rho_{tree.vertex_name(u)}"

    def d(p, q):
        return f"d_{idx[p]}_{idx[q]}"

    chis = [f"chi_{i}_{j}" for i, j in itertools.combinations(range(1, n + 1), 2)]
    lines = ["\\ leaf-order crossing minimization", "Minimize"]
    lines.append(" obj: " + " + ".join(chis) if chis else " obj: 0")
    lines.append("Subject To")
    c = 0

    def add(row: str):
        nonlocal c
        c += 1
        lines.append(f" c{c}: {row}")

    for fp in model.free_pairs:
        if fp.neutral_cross:
            add(f"{chi(fp.i, fp.j)} + {rho(fp.lca)} >= 1")
        else:
            add(f"{chi(fp.i, fp.j)} - {rho(fp.lca)} >= 0")

    pos_constraints = list(model.undecided) + [
        UndecidedPair(tp.i, tp.j, *position_threshold(
            model.g, _x_star(model.g, tp.i, tp.j, model.ltype)),
            tp.lca, idx[tp.i] < idx[tp.j])
        for tp in model.table_pairs
    ] + [
        UndecidedPair(tp.j, tp.i, *position_threshold(
            model.g, _x_star(model.g, tp.j, tp.i, model.ltype)),
            tp.lca, idx[tp.j] < idx[tp.i])
        for tp in model.table_pairs
    ]
    for up in pos_constraints:
        x, r, dd = chi(up.i, up.j), rho(up.lca), d(up.i, up.j)
        if up.neutral_before:
            add(f"{r} - {dd} - {x} <= 0")
            add(f"{dd} - {r} - {x} <= 0")
        else:
            add(f"{r} + {dd} - {x} <= 1")
            add(f"- {r} - {dd} - {x} <= -1")
        # position of l_i is affine in rho; big-M with M = n
        terms = []
        for a, delta in model.shifts[up.i].items():
            terms.append(f"{'+' if delta >= 0 else '-'} {abs(delta)} {rho(a)}")
        expr = " ".join(terms) if terms else "0 " + rho(tree.internal[0])
        base = idx[up.i]
        add(f"{expr} - {n} {dd} <= {up.t + up.e - base}")
        add(f"{expr} - {n} {dd} >= {up.t + 1 - base - n}")

    lines.append("Binary")
    for u in tree.internal:
        lines.append(f" {rho(u)}")
    for up in pos_constraints:
        lines.append(f" {d(up.i, up.j)}")
    for name in chis:
        lines.append(f" {name}")
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text
