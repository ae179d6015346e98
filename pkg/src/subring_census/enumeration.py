"""Enumeration of subring matrices of Z^n with determinant p^e.

Two engines share one definitional certificate (the identity vector and all
pairwise column products must lie in the column span):

* naive -- for every admissible diagonal, iterate the full Cartesian product
  of Hermite-form entry assignments and keep those whose matrix certifies.
  No structural shortcuts; this is the oracle the pruned engine is checked
  against.

* pruned -- backtracking over the same assignments with structural rules
  narrowing entry domains and cutting subtrees.  Each rule is a named,
  individually toggleable predicate; every survivor still receives the full
  definitional certificate before emission, so the rules only ever have to
  be sound, never complete.

Output order is canonical (diagonal composition in lexicographic order, then
column-major entry order) and independent of rule toggles and worker count.
"""

from __future__ import annotations

import itertools
import multiprocessing
import sys
from dataclasses import dataclass, field

from .combinatorics import Composition, compositions
from .hnf import (
    HnfMatrix,
    SubringMatrix,
    is_irreducible_rows,
    is_subring_rows,
    products_in_span,
)

ENGINE_VERSION = "0.1.0"

Rows = tuple[tuple[int, ...], ...]


class BudgetExceededError(RuntimeError):
    """Search node budget ran out before the enumeration completed."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"node budget exhausted: {nodes} nodes > budget {budget}")
        self.nodes = nodes
        self.budget = budget


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PruneRuleSet:
    """Toggles for the structural pruning rules of the backtracking engine.

    zero_one_outside_support: support-row entries outside support columns lie
        in {0, 1}.
    exactly_one_one: each support row carries exactly one 1 outside the
        support columns.
    block_divisibility: entries with both indices in the support are
        divisible by p.
    last_column: last-column entries lie in {0, 1}, and when exactly one of
        two support rows has a 1 there, the entry linking the two rows is 0.
    irreducible_block: the support block, bordered by an all-ones column and
        a unit row, must itself certify as an irreducible subring matrix.
    """

    zero_one_outside_support: bool = True
    exactly_one_one: bool = True
    block_divisibility: bool = True
    last_column: bool = True
    irreducible_block: bool = True

    @classmethod
    def none(cls) -> "PruneRuleSet":
        return cls(False, False, False, False, False)

    def fingerprint(self) -> str:
        bits = "".join(
            "1" if flag else "0"
            for flag in (
                self.zero_one_outside_support,
                self.exactly_one_one,
                self.block_divisibility,
                self.last_column,
                self.irreducible_block,
            )
        )
        return f"rules-v1:{bits}"


@dataclass(frozen=True)
class EnumSpec:
    """What to enumerate: dimension, prime power, mode, filters and budgets.

    corank restricts output to subrings of that corank.  In pruned mode this
    restricts diagonals to compositions with that support size; in naive mode
    matrices are filtered post hoc by their Smith-form corank, so comparing
    the two modes exercises the support-equals-corank fact rather than
    assuming it.
    """

    n: int
    p: int
    e: int
    mode: str = "pruned"
    corank: int | None = None
    diagonal: "tuple[int, ...] | Composition | None" = None
    irreducible_only: bool = False
    rules: PruneRuleSet = field(default_factory=PruneRuleSet)
    node_budget: int = 10**9
    threads: int = 1
    progress: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need n >= 1")
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 0:
            raise ValueError("need e >= 0")
        if self.mode not in ("naive", "pruned"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.corank is not None and not 0 <= self.corank < self.n:
            raise ValueError("corank filter must satisfy 0 <= k < n")
        if self.diagonal is not None:
            if len(self.diagonal) != self.n - 1:
                raise ValueError("diagonal filter must have n-1 parts")
            if sum(self.diagonal) != self.e:
                raise ValueError("diagonal filter must sum to e")
        if self.node_budget < 1:
            raise ValueError("node budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


def _template_rows(n: int, p: int, exps: tuple[int, ...]) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i] = p ** exps[i]
    rows[n - 1][n - 1] = 1
    return rows


def _fill_positions(n: int, support: tuple[int, ...]) -> list[tuple[int, int]]:
    """Free entry positions: columns left to right, bottom to top in a column."""
    supp = set(support)
    out = []
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            if i in supp:
                out.append((i, j))
    return out


def _matrix_key(rows: Rows) -> tuple[int, ...]:
    n = len(rows)
    return tuple(rows[i][j] for j in range(n) for i in range(j + 1))


def _snapshot(rows: list[list[int]]) -> Rows:
    return tuple(tuple(row) for row in rows)


def _identity_check_support(
    rows: list[list[int]], support: tuple[int, ...], powers: dict[int, int], n: int
) -> bool:
    """Identity membership evaluated only at support rows (unit rows solve to 1)."""
    c = [1] * n
    for i in reversed(support):
        row = rows[i]
        s = 1
        for j in range(i + 1, n):
            cj = c[j]
            if cj:
                s -= row[j] * cj
        q, r = divmod(s, powers[i])
        if r:
            return False
        c[i] = q
    return True


def _naive_for_diagonal(
    n: int, p: int, exps: tuple[int, ...], counter: list[int], budget: int
) -> list[Rows]:
    """Full Cartesian product over entry domains, filtered by the certificate."""
    support = tuple(i for i, v in enumerate(exps) if v > 0)
    rows = _template_rows(n, p, exps)
    positions = _fill_positions(n, support)
    powers = {i: p ** exps[i] for i in support}
    domains = [range(powers[i]) for i, _ in positions]
    out: list[Rows] = []
    if not positions:
        counter[0] += 1
        if is_subring_rows(rows):
            out.append(_snapshot(rows))
        return out
    nodes = counter[0]
    for combo in itertools.product(*domains):
        nodes += 1
        if nodes > budget:
            counter[0] = nodes
            raise BudgetExceededError(nodes, budget)
        for (i, j), v in zip(positions, combo):
            rows[i][j] = v
        if _identity_check_support(rows, support, powers, n) and products_in_span(rows):
            out.append(_snapshot(rows))
    counter[0] = nodes
    return out


def _block_rows(
    rows: list[list[int]], support: tuple[int, ...], p: int, exps: tuple[int, ...]
) -> list[list[int]]:
    """Support block bordered by an all-ones column and a bottom unit row."""
    k = len(support)
    block = [[0] * (k + 1) for _ in range(k + 1)]
    for r, i in enumerate(support):
        block[r][r] = p ** exps[i]
        for s in range(r + 1, k):
            block[r][s] = rows[i][support[s]]
        block[r][k] = 1
    block[k][k] = 1
    return block


def _pruned_for_diagonal(
    n: int,
    p: int,
    exps: tuple[int, ...],
    rules: PruneRuleSet,
    counter: list[int],
    budget: int,
) -> list[Rows]:
    support = tuple(i for i, v in enumerate(exps) if v > 0)
    supp_set = set(support)
    rows = _template_rows(n, p, exps)
    positions = _fill_positions(n, support)
    powers = {i: p ** exps[i] for i in support}
    last_col = n - 1

    unit_cols = {i: [j for j in range(i + 1, n) if j not in supp_set] for i in support}
    supp_after = {i: [j for j in support if j > i] for i in support}

    block_last_idx = -1
    for idx, (i, j) in enumerate(positions):
        if j in supp_set:
            block_last_idx = idx
    check_block = rules.irreducible_block and len(support) >= 2

    domains: list[range | tuple[int, ...]] = []
    for i, j in positions:
        bound = powers[i]
        if j in supp_set:
            domains.append(range(0, bound, p) if rules.block_divisibility else range(bound))
        elif rules.zero_one_outside_support or (rules.last_column and j == last_col):
            domains.append((0, 1))
        else:
            domains.append(range(bound))

    out: list[Rows] = []
    npos = len(positions)
    rule_one = rules.exactly_one_one
    rule_lc = rules.last_column

    def place(idx: int) -> None:
        if idx == npos:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceededError(counter[0], budget)
            if _identity_check_support(rows, support, powers, n) and products_in_span(rows):
                out.append(_snapshot(rows))
            return
        i, j = positions[idx]
        row_i = rows[i]
        for v in domains[idx]:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceededError(counter[0], budget)
            row_i[j] = v
            if j == last_col:
                if rule_one and sum(1 for jj in unit_cols[i] if row_i[jj] == 1) != 1:
                    continue
                if rule_lc:
                    v_is_one = v == 1
                    ok = True
                    for i2 in supp_after[i]:
                        if (rows[i2][last_col] == 1) != v_is_one and row_i[i2] != 0:
                            ok = False
                            break
                    if not ok:
                        continue
            if check_block and idx == block_last_idx:
                block = _block_rows(rows, support, p, exps)
                if not is_irreducible_rows(block, p) or not is_subring_rows(block):
                    continue
            place(idx + 1)
        row_i[j] = 0

    if npos == 0:
        counter[0] += 1
        if is_subring_rows(rows):
            out.append(_snapshot(rows))
    else:
        place(0)
    return out


def _irreducible_for_diagonal(
    n: int, p: int, exps: tuple[int, ...], counter: list[int], budget: int
) -> list[Rows]:
    """All irreducible subring matrices with the given full-support diagonal."""
    if any(v < 1 for v in exps):
        raise ValueError("irreducible diagonals need every exponent >= 1")
    support = tuple(range(n - 1))
    rows = _template_rows(n, p, exps)
    for i in range(n):
        rows[i][n - 1] = 1
    positions = [(i, j) for j in range(1, n - 1) for i in range(j - 1, -1, -1)]
    powers = {i: p ** exps[i] for i in support}
    domains = [range(0, powers[i], p) for i, _ in positions]
    out: list[Rows] = []
    for combo in itertools.product(*domains) if positions else [()]:
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceededError(counter[0], budget)
        for (i, j), v in zip(positions, combo):
            rows[i][j] = v
        if products_in_span(rows):
            out.append(_snapshot(rows))
    return out


def _diagonal_task(args) -> tuple[tuple[int, ...], list[Rows], int]:
    n, p, exps, mode, rules, budget = args
    counter = [0]
    if mode == "naive":
        found = _naive_for_diagonal(n, p, exps, counter, budget)
    else:
        found = _pruned_for_diagonal(n, p, exps, rules, counter, budget)
    return exps, found, counter[0]


def _diagonals_for_spec(spec: EnumSpec) -> list[tuple[int, ...]]:
    if spec.diagonal is not None:
        return [tuple(spec.diagonal)]
    comps = compositions(spec.e, spec.n - 1, strict=False)
    exps_list = [tuple(c.parts) for c in comps]
    if spec.mode == "pruned":
        if spec.irreducible_only:
            exps_list = [t for t in exps_list if all(v >= 1 for v in t)]
        if spec.corank is not None:
            k = spec.corank
            exps_list = [t for t in exps_list if sum(1 for v in t if v > 0) == k]
    return exps_list


def _post_filter_naive(spec: EnumSpec, matrices: list[SubringMatrix]) -> list[SubringMatrix]:
    out = matrices
    if spec.irreducible_only:
        out = [m for m in out if m.is_irreducible(spec.p)]
    if spec.corank is not None:
        out = [m for m in out if m.corank() == spec.corank]
    return out


def enumerate_subrings(spec: EnumSpec) -> list[SubringMatrix]:
    """All subring matrices matching the spec, in canonical order.

    Raises BudgetExceededError when the node budget runs out; partial output
    is never returned.  With threads > 1 the per-diagonal subtrees run in
    worker processes and are merged back in composition order, so the result
    is identical to a serial run.
    """
    exps_list = _diagonals_for_spec(spec)
    total = len(exps_list)
    results: list[tuple[tuple[int, ...], list[Rows]]] = []
    nodes = 0

    if spec.threads > 1 and total > 1:
        args = [(spec.n, spec.p, t, spec.mode, spec.rules, spec.node_budget) for t in exps_list]
        ctx = multiprocessing.get_context()
        with ctx.Pool(processes=spec.threads) as pool:
            done = 0
            for exps, found, used in pool.imap(_diagonal_task, args):
                nodes += used
                results.append((exps, found))
                done += 1
                if spec.progress:
                    print(f"diagonals {done}/{total}", file=sys.stderr)
        if nodes > spec.node_budget:
            raise BudgetExceededError(nodes, spec.node_budget)
    else:
        counter = [0]
        for done, exps in enumerate(exps_list, start=1):
            if spec.mode == "naive":
                found = _naive_for_diagonal(spec.n, spec.p, exps, counter, spec.node_budget)
            else:
                found = _pruned_for_diagonal(
                    spec.n, spec.p, exps, spec.rules, counter, spec.node_budget
                )
            results.append((exps, found))
            if spec.progress:
                print(f"diagonals {done}/{total}", file=sys.stderr)
        nodes = counter[0]

    matrices: list[SubringMatrix] = []
    for exps, found in sorted(results, key=lambda item: item[0]):
        for rows in sorted(found, key=_matrix_key):
            matrices.append(SubringMatrix(HnfMatrix(rows)))
    if spec.mode == "naive":
        matrices = _post_filter_naive(spec, matrices)
    return matrices


def enumerate_irreducible(
    n: int, p: int, e: int, node_budget: int = 10**9
) -> list[SubringMatrix]:
    """All irreducible subring matrices of Z^n with determinant p^e.

    Diagonals are strict compositions of e into n-1 parts, the last column is
    all ones and every other column is 0 mod p; candidates are then certified
    by the closure check.  Empty below the minimal index e = n-1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    counter = [0]
    matrices: list[SubringMatrix] = []
    for comp in compositions(e, n - 1, strict=True):
        found = _irreducible_for_diagonal(n, p, tuple(comp.parts), counter, node_budget)
        for rows in sorted(found, key=_matrix_key):
            matrices.append(SubringMatrix(HnfMatrix(rows)))
    return matrices


def count_g_alpha(alpha: Composition | tuple[int, ...], p: int) -> int:
    """Number of irreducible subring matrices with diagonal exponents alpha.

    alpha has n-1 strict parts for matrices of size n = len(alpha) + 1.
    """
    parts = tuple(alpha.parts if isinstance(alpha, Composition) else alpha)
    if any(v < 1 for v in parts):
        raise ValueError("alpha must be a strict composition")
    counter = [0]
    found = _irreducible_for_diagonal(len(parts) + 1, p, parts, counter, 10**9)
    return len(found)
