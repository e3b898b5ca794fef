"""Elementary strong shift equivalence: verification and bounded search.

``search_esse`` is sound (every witness it returns verifies) and complete within
its bounds.  ``search_chain`` runs a breadth-first search over elementary moves.
Neither ever claims non-equivalence without a trace certificate.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from .matrix import (
    CANONICAL_FORM_CAP,
    DimensionError,
    Matrix,
    canonical_form,
    is_regular,
    multiply,
    trace_mismatch,
    trace_power,
    zero_rows,
)
from .report import Report

log = logging.getLogger(__name__)


class NotRegularError(ValueError):
    pass


class Status(str, enum.Enum):
    FOUND = "found"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EsseWitness:
    r: Matrix
    s: Matrix

    def swapped(self) -> "EsseWitness":
        return EsseWitness(self.s, self.r)

    @property
    def inner_dim(self) -> int:
        return self.r.cols


@dataclass(frozen=True)
class SseChain:
    matrices: tuple[Matrix, ...]
    witnesses: tuple[EsseWitness, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    def __len__(self):
        return len(self.matrices)


@dataclass(frozen=True)
class SearchBounds:
    """Resource limits.  ``None`` inner/entry bounds are filled from the inputs.

    ``max_states`` caps the number of matrices the chain search expands and
    ``max_work`` the total number of enumeration nodes it may visit.  Neither
    applies to a single elementary search, which stays exhaustive.
    """

    max_inner_dim: int | None = None
    max_entry: int | None = None
    max_chain_length: int = 6
    max_intermediate_dim: int = 8
    max_states: int = 2000
    max_work: int = 2_000_000

    def __post_init__(self):
        for name in ("max_inner_dim", "max_entry"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("max_chain_length", "max_intermediate_dim", "max_states", "max_work"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def resolve(self, a: Matrix, b: Matrix) -> "SearchBounds":
        return replace(
            self,
            max_inner_dim=self.max_inner_dim or a.rows + b.rows,
            max_entry=self.max_entry or max(a.max_entry(), b.max_entry(), 1),
        )


@dataclass(frozen=True)
class Refutation:
    k: int
    trace_a: int
    trace_b: int

    def __str__(self):
        return f"trace mismatch at k={self.k} ({self.trace_a} != {self.trace_b})"


@dataclass(frozen=True)
class EsseResult:
    status: Status
    witness: EsseWitness | None = None
    refutation: Refutation | None = None

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


@dataclass(frozen=True)
class ChainResult:
    status: Status
    chain: SseChain | None = None
    refutation: Refutation | None = None
    states_expanded: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def _check_square_regular(a: Matrix, name: str) -> None:
    if not a.is_square:
        raise DimensionError(f"{name} must be square, got {a.rows}x{a.cols}")
    if not is_regular(a):
        raise NotRegularError(f"{name} is not regular (zero rows {zero_rows(a)})")


def trace_refutation(a: Matrix, b: Matrix, up_to: int | None = None) -> Refutation | None:
    k = trace_mismatch(a, b, up_to)
    if k is None:
        return None
    return Refutation(k, trace_power(a, k), trace_power(b, k))


def verify_esse(a: Matrix, b: Matrix, w: EsseWitness) -> Report:
    rep = Report("verify-esse")
    r, s = w.r, w.s
    square = rep.add("A square", a.is_square, f"{a.rows}x{a.cols}")
    square &= rep.add("B square", b.is_square, f"{b.rows}x{b.cols}")
    rs_ok = r.cols == s.rows and (r.rows, s.cols) == a.shape
    sr_ok = s.cols == r.rows and (s.rows, r.cols) == b.shape
    rep.add("witness shapes", rs_ok and sr_ok,
            f"R {r.rows}x{r.cols}, S {s.rows}x{s.cols}, A {a.rows}x{a.cols}, B {b.rows}x{b.cols}")
    if rs_ok:
        rs = multiply(r, s)
        rep.add("A = RS", rs == a, "" if rs == a else f"RS = {rs.to_rows()}")
    else:
        rep.add("A = RS", False, "RS undefined or wrong shape")
    if sr_ok:
        sr = multiply(s, r)
        rep.add("B = SR", sr == b, "" if sr == b else f"SR = {sr.to_rows()}")
    else:
        rep.add("B = SR", False, "SR undefined or wrong shape")
    for name, m in (("A", a), ("B", b), ("R", r), ("S", s)):
        zr = zero_rows(m)
        rep.add(f"{name} regular", not zr, f"{name} not regular: zero rows {zr}" if zr else "")
    if rep.ok:
        assert trace_mismatch(a, b) is None, "accepted witness violates the trace condition"
    elif square:
        ref = trace_refutation(a, b)
        if ref is not None:
            rep.notes.append(str(ref))
    return rep


def verify_chain(chain: SseChain) -> Report:
    rep = Report("verify-chain")
    mats, wits = chain.matrices, chain.witnesses
    if not mats:
        rep.add("chain nonempty", False)
        return rep
    rep.add("link count", len(wits) == len(mats) - 1,
            f"{len(mats)} matrices, {len(wits)} witnesses")
    for i, c in enumerate(mats):
        rep.add(f"C{i + 1} square", c.is_square)
        rep.add(f"C{i + 1} regular", is_regular(c))
    for i, (w, (c, d)) in enumerate(zip(wits, zip(mats, mats[1:]))):
        sub = verify_esse(c, d, w)
        detail = "; ".join(f"{f.name}: {f.detail}" if f.detail else f.name for f in sub.failures)
        rep.add(f"link {i + 1} (C{i + 1} -> C{i + 2})", sub.ok, detail)
    return rep


# -- witness enumeration ---------------------------------------------------


def _fill_s(R, A, B, n, m, max_e, budget) -> Iterator[list[list[int]]]:
    """All S (m x n) with R S = A and S R = B, in row-major lexicographic order."""
    # rs[i][j]: partial sum over filled rows of S; tail[k][i]: sum of R[i][k'] for k' >= k
    rs = [[0] * n for _ in range(n)]
    tail = [[sum(R[i][k2] for k2 in range(k, m)) for i in range(n)] for k in range(m + 1)]
    S = [[0] * n for _ in range(m)]

    def rows(k):
        if k == m:
            if rs == A:
                yield [list(r) for r in S]
            return
        Bk = B[k]
        rk = [R[i][k] for i in range(n)]
        srow = [0] * m

        def cells(j):
            budget.spend()
            if j == n:
                if srow != Bk:
                    return
                for i in range(n):
                    if tail[k + 1][i] * max_e < max(A[i][jj] - rs[i][jj] for jj in range(n)):
                        return
                yield from rows(k + 1)
                return
            Rj = R[j]
            for x in range(max_e + 1):
                if x:
                    if any(srow[l] + x * Rj[l] > Bk[l] for l in range(m)):
                        break
                    if any(rs[i][j] + rk[i] * x > A[i][j] for i in range(n)):
                        break
                S[k][j] = x
                for l in range(m):
                    srow[l] += x * Rj[l]
                for i in range(n):
                    rs[i][j] += rk[i] * x
                yield from cells(j + 1)
                for l in range(m):
                    srow[l] -= x * Rj[l]
                for i in range(n):
                    rs[i][j] -= rk[i] * x
            S[k][j] = 0

        yield from cells(0)

    yield from rows(0)


class _OutOfBudget(Exception):
    pass


class _Budget:
    """Counts search-tree nodes; raises once ``limit`` is used up."""

    def __init__(self, limit: int | None):
        self.left = limit

    def spend(self) -> None:
        if self.left is not None:
            self.left -= 1
            if self.left < 0:
                raise _OutOfBudget


_UNLIMITED = _Budget(None)


def _iter_witnesses(a: Matrix, b: Matrix, max_e: int,
                    budget: _Budget = _UNLIMITED) -> Iterator[EsseWitness]:
    """Every witness (R, S) with entries <= max_e, lexicographic in (flat R, flat S)."""
    A, B = a.to_rows(), b.to_rows()
    n, m = a.rows, b.rows
    # S has no zero row, so R[i][k] <= R[i][k] * sum(S[k]) and row i of R sums to at most sum(A[i])
    row_budget = [sum(A[i]) for i in range(n)]
    row_cap = [min(max_e, max(A[i])) for i in range(n)]
    # column i of S is nonzero whenever column i of A is; then R[i][k] <= max B[.][k]
    # and the rows i of R with that property sum, column by column, to at most the column sums of B
    live = [any(A[j][i] for j in range(n)) for i in range(n)]
    col_cap = [[row_cap[i]] * m for i in range(n)]
    for i in range(n):
        if live[i]:
            for k in range(m):
                col_cap[i][k] = min(row_cap[i], max(B[kk][k] for kk in range(m)))
    col_budget = [sum(B[kk][k] for kk in range(m)) for k in range(m)]
    R = [[0] * m for _ in range(n)]
    # RB rows are known once a row of R is complete; AR is accumulated row by row
    ar_lo = [[0] * m for _ in range(n)]
    pending = [[sum(A[i][j] for j in range(n)) * max_e for _ in range(m)] for i in range(n)]

    def rb_row(i):
        return [sum(R[i][k] * B[k][l] for k in range(m)) for l in range(m)]

    rb = [None] * n

    def feasible(done):
        for i in range(done):
            for l in range(m):
                if rb[i][l] < ar_lo[i][l] or rb[i][l] > ar_lo[i][l] + pending[i][l]:
                    return False
        return True

    def fill(i, k, row_left):
        budget.spend()
        if i == n:
            R_t = [list(r) for r in R]
            for S in _fill_s(R_t, A, B, n, m, max_e, budget):
                yield EsseWitness(Matrix.from_rows(R_t), Matrix.from_rows(S))
            return
        if k == m:
            if not any(R[i]):
                return
            rb[i] = rb_row(i)
            for i2 in range(n):
                if A[i2][i]:
                    for l in range(m):
                        ar_lo[i2][l] += A[i2][i] * R[i][l]
                        pending[i2][l] -= A[i2][i] * max_e
            if feasible(i + 1):
                yield from fill(i + 1, 0, row_budget[i + 1] if i + 1 < n else 0)
            for i2 in range(n):
                if A[i2][i]:
                    for l in range(m):
                        ar_lo[i2][l] -= A[i2][i] * R[i][l]
                        pending[i2][l] += A[i2][i] * max_e
            rb[i] = None
            return
        hi = min(col_cap[i][k], row_left)
        if live[i]:
            hi = min(hi, col_budget[k])
        for x in range(hi + 1):
            R[i][k] = x
            if live[i]:
                col_budget[k] -= x
            yield from fill(i, k + 1, row_left - x)
            if live[i]:
                col_budget[k] += x
        R[i][k] = 0

    yield from fill(0, 0, row_budget[0])


def search_esse(a: Matrix, b: Matrix, bounds: SearchBounds | None = None) -> EsseResult:
    """Find R, S with a = RS and b = SR within ``bounds``.

    The inner dimension of any witness equals ``b.rows``, so only that size is
    tried; if it exceeds ``max_inner_dim`` the answer is unknown.
    """
    return _search_esse(a, b, bounds, _UNLIMITED)


def _search_esse(a, b, bounds, budget: _Budget) -> EsseResult:
    _check_square_regular(a, "A")
    _check_square_regular(b, "B")
    bounds = (bounds or SearchBounds()).resolve(a, b)
    ref = trace_refutation(a, b)
    if ref is not None:
        return EsseResult(Status.REFUTED, refutation=ref)
    if b.rows > bounds.max_inner_dim:
        return EsseResult(Status.UNKNOWN)
    for w in _iter_witnesses(a, b, bounds.max_entry, budget):
        return EsseResult(Status.FOUND, witness=w)
    return EsseResult(Status.UNKNOWN)


def iter_factorizations(c: Matrix, m: int, max_e: int,
                        budget: _Budget = _UNLIMITED) -> Iterator[EsseWitness]:
    """Factorizations c = RS with inner dimension m and R, S free of zero rows.

    RS is the sum of the m rank-one terms (column k of R)(row k of S).  Terms
    are generated in non-increasing order, so each factorization appears once up
    to a simultaneous permutation of R's columns and S's rows; such a
    permutation only conjugates SR.
    """
    C = c.to_rows()
    n = c.rows
    rem = [list(r) for r in C]
    cols: list[tuple[int, ...]] = []
    rows: list[tuple[int, ...]] = []

    def vectors(cap):
        """Vectors v with 0 <= v[j] <= cap[j], in decreasing lexicographic order."""
        out = [()]
        for c_j in cap:
            out = [v + (x,) for v in out for x in range(c_j, -1, -1)]
        return out

    def terms(k, prev):
        budget.spend()
        if k == m:
            if not any(any(r) for r in rem):
                r_m = Matrix(n, m, tuple(cols[kk][i] for i in range(n) for kk in range(m)))
                s_m = Matrix(m, n, tuple(x for row in rows for x in row))
                if is_regular(r_m):
                    yield EsseWitness(r_m, s_m)
            return
        # the column of R: each entry bounded by what is left in its row
        u_cap = [min(max_e, max(rem[i])) for i in range(n)]
        for u in vectors(u_cap):
            if prev is not None and u > prev[0]:
                continue
            if any(u):
                v_cap = [min([max_e] + [rem[i][j] // u[i] for i in range(n) if u[i]])
                         for j in range(n)]
            else:
                if any(any(r) for r in rem):
                    # remaining terms are all zero columns and cannot cover the rest
                    return
                v_cap = [max_e] * n
            for v in vectors(v_cap):
                if not any(v):
                    continue
                if prev is not None and (u, v) > prev:
                    continue
                for i in range(n):
                    if u[i]:
                        for j in range(n):
                            rem[i][j] -= u[i] * v[j]
                cols.append(u)
                rows.append(v)
                yield from terms(k + 1, (u, v))
                cols.pop()
                rows.pop()
                for i in range(n):
                    if u[i]:
                        for j in range(n):
                            rem[i][j] += u[i] * v[j]

    yield from terms(0, None)


_KEY_PERM_LIMIT = 720


def _refine(rows: list[list[int]]) -> list[int]:
    """Stable vertex colours under iterated neighbourhood refinement."""
    n = len(rows)
    colour = [0] * n
    while True:
        sig = [(colour[i], rows[i][i],
                tuple(sorted((rows[i][j], colour[j]) for j in range(n))),
                tuple(sorted((rows[j][i], colour[j]) for j in range(n))))
               for i in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            return new
        colour = new


def state_key(a: Matrix) -> tuple:
    """A key with state_key(P a P^T) == state_key(a) for every permutation P.

    Vertices are coloured by refinement and only orderings that sort the colours
    are compared.  When the colour classes allow too many orderings the matrix
    itself is the key, which only weakens deduplication.
    """
    rows = a.to_rows()
    colour = _refine(rows)
    classes = [[v for v in range(a.rows) if colour[v] == c] for c in sorted(set(colour))]
    count = 1
    for cl in classes:
        for k in range(2, len(cl) + 1):
            count *= k
    if count > _KEY_PERM_LIMIT:
        return ("raw", a.rows, a.entries)
    best = None
    for parts in itertools.product(*(itertools.permutations(cl) for cl in classes)):
        order = [v for part in parts for v in part]
        flat = tuple(rows[i][j] for i in order for j in order)
        if best is None or flat < best:
            best = flat
    return ("canon", a.rows, best)


def search_chain(a: Matrix, b: Matrix, bounds: SearchBounds | None = None) -> ChainResult:
    """Breadth-first search for an SSE chain from ``a`` to ``b``.

    States are deduplicated by a conjugation-invariant key.  Each dequeued state first tries a
    direct elementary step to ``b`` before its neighbours are generated.
    """
    _check_square_regular(a, "A")
    _check_square_regular(b, "B")
    bounds = (bounds or SearchBounds()).resolve(a, b)
    if a == b:
        return ChainResult(Status.FOUND, SseChain((a,), ()))
    ref = trace_refutation(a, b)
    if ref is not None:
        return ChainResult(Status.REFUTED, refutation=ref)
    if bounds.max_chain_length < 2:
        return ChainResult(Status.UNKNOWN)

    # deepen the cap on intermediate size so small chains are found first
    budget = _Budget(bounds.max_work)
    expanded = 0
    start = min(max(a.rows, b.rows), bounds.max_intermediate_dim)
    try:
        for cap in range(start, bounds.max_intermediate_dim + 1):
            chain, n = _bfs(a, b, bounds, cap, budget)
            expanded += n
            if chain is not None:
                return ChainResult(Status.FOUND, chain, states_expanded=expanded)
    except _OutOfBudget:
        log.debug("chain search ran out of work budget")
        return ChainResult(Status.UNKNOWN, states_expanded=expanded)
    log.debug("chain search exhausted after %d states", expanded)
    return ChainResult(Status.UNKNOWN, states_expanded=expanded)


def _bfs(a, b, bounds, cap, budget):
    # each entry: (matrix, path of matrices, path of witnesses)
    queue = deque([(a, (a,), ())])
    seen = {state_key(a)}
    expanded = 0
    while queue:
        c, mats, wits = queue.popleft()
        expanded += 1
        direct = _search_esse(c, b, bounds, budget)
        if direct.found:
            return SseChain(mats + (b,), wits + (direct.witness,)), expanded
        # a neighbour at position len(mats)+1 still needs one more step to b
        if len(mats) + 2 > bounds.max_chain_length or expanded >= bounds.max_states:
            continue
        for m in range(1, cap + 1):
            for w in iter_factorizations(c, m, bounds.max_entry, budget):
                nxt = multiply(w.s, w.r)
                if not is_regular(nxt):
                    continue
                k = state_key(nxt)
                if k in seen:
                    continue
                seen.add(k)
                queue.append((nxt, mats + (nxt,), wits + (w,)))
    return None, expanded


def chain_from_witnesses(start: Matrix, witnesses: Sequence[EsseWitness]) -> SseChain:
    mats = [start]
    for w in witnesses:
        mats.append(multiply(w.s, w.r))
    return SseChain(tuple(mats), tuple(witnesses))
