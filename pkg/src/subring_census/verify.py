"""Machine-checkable claim catalog tying enumeration to the exact formulas.

Each check computes a left- and right-hand side by two independent routes and
records them with a stable id and a self-contained description.  Failures are
report entries, never exceptions; budget exhaustion marks a check skipped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import analytics
from .catalog import catalog, irreducible_count, irreducible_count_poly
from .combinatorics import binomial
from .counting import (
    CensusValidationError,
    CountLedger,
    corank2_formula_coefficients,
    corank3_formula_coefficients,
    formula_h,
    multiplicative_extend,
    sandwich_bounds,
)
from .enumeration import (
    BudgetExceededError,
    EnumSpec,
    PruneRuleSet,
    enumerate_subrings,
)
from .hnf import HnfMatrix, smith_normal_form, snf_oracle_minor_gcds
from .polynomials import MPoly, RatFunc, expand, functional_equation_check, specialize

P = MPoly.variable("p")
X = MPoly.variable("x")
Y = MPoly.variable("y")
Z = MPoly.variable("z")


@dataclass
class CheckResult:
    check_id: str
    description: str
    lhs: object
    rhs: object
    passed: bool
    skipped: bool = False
    note: str = ""

    def to_payload(self) -> dict:
        return {
            "id": self.check_id,
            "description": self.description,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "skipped": self.skipped,
            "note": self.note,
        }


@dataclass
class VerifyScope:
    """Which suites to run and at what scale.

    prime/max_index narrow the cotype-z4 grid to a single prime and index
    bound; the other suites keep their stock grids.
    """

    suites: tuple[str, ...] = ("all",)
    small: bool = False
    stretch: bool = False
    threads: int = 1
    node_budget: int = 10**9
    prime: int | None = None
    max_index: int | None = None
    ledger: CountLedger = field(default_factory=CountLedger)

    def wants(self, name: str) -> bool:
        return "all" in self.suites or name in self.suites


def _result(check_id, description, lhs, rhs, passed=None, note="") -> CheckResult:
    if passed is None:
        passed = lhs == rhs
    return CheckResult(check_id, description, lhs, rhs, bool(passed), note=note)


def _skipped(check_id, description, note) -> CheckResult:
    return CheckResult(check_id, description, None, None, True, skipped=True, note=note)


# ---------------------------------------------------------------------------
# cocyclic: h_{n,1}(p^e) = C(n, 2)


def suite_cocyclic(scope: VerifyScope) -> list[CheckResult]:
    out = []
    n_range = (2, 3, 4) if scope.small else (2, 3, 4, 5, 6)
    p_range = (2, 3) if scope.small else (2, 3, 5)
    e_max = 3 if scope.small else 6
    for n in n_range:
        for p in p_range:
            counts = [
                scope.ledger.corank_count(n, p, e, 1, scope.node_budget, scope.threads)
                for e in range(1, e_max + 1)
            ]
            expected = [binomial(n, 2)] * e_max
            out.append(
                _result(
                    f"cocyclic/n={n}/p={p}",
                    f"count of corank-1 subrings of Z^{n} at index {p}^e equals C({n},2) for e <= {e_max}",
                    counts,
                    expected,
                )
            )
    return out


# ---------------------------------------------------------------------------
# corank-formulas: closed forms for h_{n,2} and h_{n,3}


def suite_corank_formulas(scope: VerifyScope) -> list[CheckResult]:
    out = []
    e2 = range(2, 4 if scope.small else 7)
    e3 = range(3, 5 if scope.small else 7)
    n2_range = (3, 4) if scope.small else (3, 4, 5, 6)
    n3_range = (4,) if scope.small else (4, 5, 6)
    for n in n2_range:
        for p in (2, 3):
            counts = [
                scope.ledger.corank_count(n, p, e, 2, scope.node_budget, scope.threads)
                for e in e2
            ]
            expected = [formula_h(n, 2, p, e) for e in e2]
            out.append(
                _result(
                    f"corank2-closed-form/n={n}/p={p}",
                    f"h(n={n}, k=2; {p}^e) equals a(n) g_3({p}^e) + b(n)(e-1)",
                    counts,
                    expected,
                )
            )
    for n in n3_range:
        for p in (2, 3):
            counts = [
                scope.ledger.corank_count(n, p, e, 3, scope.node_budget, scope.threads)
                for e in e3
            ]
            expected = [formula_h(n, 3, p, e) for e in e3]
            out.append(
                _result(
                    f"corank3-closed-form/n={n}/p={p}",
                    f"h(n={n}, k=3; {p}^e) equals c(n) g_4({p}^e) + d(n) sum_j (j-1) g_3({p}^j)",
                    counts,
                    expected,
                )
            )
    # informational: the variant reading with the fixed argument g_3(p^3) in
    # place of g_3(p^e) disagrees with enumeration once e != 3.
    n0, p0, e0 = n2_range[0], 2, 2
    a, b = corank2_formula_coefficients(n0)
    variant = a * irreducible_count(3, p0, 3) + b * (e0 - 1)
    true_count = scope.ledger.corank_count(n0, p0, e0, 2, scope.node_budget, scope.threads)
    out.append(
        _result(
            "corank2-variant-flag",
            "fixed-argument variant a(n) g_3(p^3) + b(n)(e-1) does NOT match enumeration "
            f"at n={n0}, p={p0}, e={e0} (informational; the e-dependent form does)",
            variant != true_count,
            True,
            note=f"variant={variant}, enumerated={true_count}",
        )
    )
    if not scope.small:
        # informational: at n = 5 the pair contribution aggregates WITHOUT the
        # (j-1) weight; enumeration sides with the unweighted sum there.
        c5, d5 = corank3_formula_coefficients(5)
        unweighted = c5 * irreducible_count(4, 2, 4) + d5 * sum(
            irreducible_count(3, 2, j) for j in range(2, 4)
        )
        enumerated = scope.ledger.corank_count(5, 2, 4, 3, scope.node_budget, scope.threads)
        out.append(
            _result(
                "corank3-weight-flag",
                "unweighted pair sum c(5) g_4(2^4) + d(5) sum_j g_3(2^j) matches "
                "enumeration at n=5 while the (j-1)-weighted form does not "
                "(informational erratum evidence)",
                unweighted == enumerated,
                True,
                note=f"unweighted={unweighted}, weighted={formula_h(5, 3, 2, 4)}, "
                f"enumerated={enumerated}",
            )
        )
    return out


# ---------------------------------------------------------------------------
# local-factors: f_3 / f_4 against series coefficients


def suite_local_factors(scope: VerifyScope) -> list[CheckResult]:
    out = []
    p_range = (2, 3) if scope.small else (2, 3, 5)
    for n, entry, e_max in ((3, "subring_local_z3", 8), (4, "subring_local_z4", 6)):
        if scope.small:
            e_max = min(e_max, 4)
        table = expand(catalog(entry), (e_max, 0, 0))
        for p in p_range:
            counts = [
                scope.ledger.census(
                    n, p, e, node_budget=scope.node_budget, threads=scope.threads
                ).f_count
                for e in range(e_max + 1)
            ]
            predicted = [table.x_coefficient_at(e, p) for e in range(e_max + 1)]
            out.append(
                _result(
                    f"local-factor/n={n}/p={p}",
                    f"census totals f_{n}({p}^e) for e <= {e_max} equal the "
                    "series coefficients of the catalogued local factor",
                    counts,
                    predicted,
                )
            )
    return out


# ---------------------------------------------------------------------------
# cotype-z4: full cotype census against the catalogued 3-variable factor


def _census_cotype_exponents(scope: VerifyScope, p: int, e: int) -> dict[tuple[int, int, int], int]:
    record = scope.ledger.census(4, p, e, node_budget=scope.node_budget, threads=scope.threads)
    out: dict[tuple[int, int, int], int] = {}
    for alphas, count in record.cotype_counts.items():
        exps = []
        for a in alphas:
            v = 0
            while a % p == 0:
                a //= p
                v += 1
            exps.append(v)
        out[tuple(exps)] = count  # type: ignore[assignment]
    return out


def suite_cotype_z4(scope: VerifyScope) -> list[CheckResult]:
    out = []
    grids = [(2, 6), (3, 4)] if scope.small else [(2, 10), (3, 6)]
    if scope.stretch:
        grids = [(2, 14), (3, 6)]
    if scope.prime is not None:
        emax = 0
        if scope.max_index is not None:
            while scope.prime ** (emax + 1) <= scope.max_index:
                emax += 1
        else:
            emax = dict(grids).get(scope.prime, 6)
        grids = [(scope.prime, emax)]
    f4 = catalog("cotype_z4")
    emax_all = max(e for _, e in grids)
    table = expand(f4, (emax_all, emax_all // 2, emax_all // 3), total=emax_all)
    predicted_all = {
        key: poly for key, poly in table.coefficients.items() if not poly.is_zero()
    }
    chain_ok = all(a >= b >= c for (a, b, c) in predicted_all)
    out.append(
        _result(
            "cotype-z4/chain-support",
            "every nonzero series coefficient of the cotype factor sits on a "
            "weakly decreasing exponent triple",
            chain_ok,
            True,
        )
    )
    census_by_p: dict[int, dict[tuple[int, int, int], int]] = {}
    for p, emax in grids:
        try:
            census: dict[tuple[int, int, int], int] = {}
            for e in range(emax + 1):
                census.update(_census_cotype_exponents(scope, p, e))
        except BudgetExceededError as exc:
            out.append(
                _skipped(
                    f"cotype-z4/p={p}",
                    f"cotype census of Z^4 at p={p} up to index {p}^{emax}",
                    f"budget exhausted: {exc}",
                )
            )
            continue
        census_by_p[p] = census
        predicted = {
            key: poly.eval(p=p)
            for key, poly in predicted_all.items()
            if sum(key) <= emax
        }
        predicted = {k: v for k, v in predicted.items() if v}
        out.append(
            _result(
                f"cotype-z4/p={p}",
                f"cotype census of Z^4 at p={p} for total index <= {p}^{emax} "
                "matches the series coefficients of the catalogued factor exactly",
                census,
                predicted,
            )
        )
    if len(census_by_p) == 2:
        shared = min(e for _, e in grids)
        matches = True
        tested = 0
        for key, poly in predicted_all.items():
            if sum(key) > shared:
                continue
            if poly.degrees()[0] > 1:
                continue
            v2 = census_by_p[2].get(key, 0)
            v3 = census_by_p[3].get(key, 0)
            c1 = v3 - v2
            c0 = 3 * v2 - 2 * v3
            interp = MPoly.monomial(c0) + MPoly.monomial(c1, ep=1) if c1 else MPoly.monomial(c0)
            tested += 1
            if interp != poly:
                matches = False
        out.append(
            _result(
                "cotype-z4/cross-prime",
                "linear interpolation of the p=2 and p=3 censuses recovers every "
                f"catalogued coefficient of degree <= 1 in p ({tested} monomials)",
                matches,
                True,
            )
        )
    return out


# ---------------------------------------------------------------------------
# identities: exact rational-function identities


def suite_identities(scope: VerifyScope) -> list[CheckResult]:
    out = []
    f2, f3, f4 = catalog("cotype_z2"), catalog("cotype_z3"), catalog("cotype_z4")
    out.append(
        _result(
            "identity/fe-rank2",
            "rank-2 cotype factor satisfies F(1/p; 1/x) = -x F(p; x)",
            functional_equation_check(f2, -X),
            True,
        )
    )
    out.append(
        _result(
            "identity/fe-rank3",
            "rank-3 cotype factor satisfies F(1/p; 1/x, 1/y) = p x y F(p; x, y)",
            functional_equation_check(f3, P * X * Y),
            True,
        )
    )
    out.append(
        _result(
            "identity/fe-rank4",
            "rank-4 cotype factor satisfies F(1/p; 1/x, 1/y, 1/z) = -p^3 x y z F(p; x, y, z)",
            functional_equation_check(f4, -(P**3) * X * Y * Z),
            True,
        )
    )
    out.append(
        _result(
            "identity/diagonal-z3",
            "rank-3 cotype factor on the diagonal equals the Z^3 subring local factor",
            specialize(f3, {"y": "x"}) == catalog("subring_local_z3"),
            True,
        )
    )
    out.append(
        _result(
            "identity/diagonal-z4",
            "rank-4 cotype factor on the diagonal equals the Z^4 subring local factor",
            specialize(f4, {"y": "x", "z": "x"}) == catalog("subring_local_z4"),
            True,
        )
    )
    one = MPoly.const(1)
    out.append(
        _result(
            "identity/corank1-z4",
            "rank-4 cotype factor at (x, 0, 0) equals (1 + 5x)/(1 - x)",
            specialize(f4, {"y": 0, "z": 0}) == RatFunc(one + 5 * X, one - X),
            True,
        )
    )
    out.append(
        _result(
            "identity/corank2-z4",
            "rank-4 cotype factor at (x, x, 0) equals the corank <= 2 local factor of Z^4",
            specialize(f4, {"y": "x", "z": 0}) == catalog("corank2_local_z4"),
            True,
        )
    )
    out.append(
        _result(
            "identity/corank2-parameterized-z4",
            "the n = 4 instance of the corank <= 2 local factor equals its Z^4 special form",
            catalog("corank2_local", 4) == catalog("corank2_local_z4"),
            True,
        )
    )
    # corank <= 2 factor series: 1 + m x^1 + sum_{e>=2} (m + a g_3(p^e) + b (e-1)) x^e
    emax = 8
    for n in (4, 5, 6):
        table = expand(catalog("corank2_local", n), (emax, 0, 0))
        a, b = corank2_formula_coefficients(n)
        m = binomial(n, 2)
        ok = table.coefficient(0) == MPoly.const(1) and table.coefficient(1) == MPoly.const(m)
        for e in range(2, emax + 1):
            expected = MPoly.const(m + b * (e - 1)) + a * irreducible_count_poly(3, e)
            if table.coefficient(e) != expected:
                ok = False
        out.append(
            _result(
                f"identity/corank2-series/n={n}",
                f"corank <= 2 local factor of Z^{n} expands to the closed-form "
                f"coefficients for e <= {emax} (exact polynomials in p)",
                ok,
                True,
            )
        )
    b2 = catalog("irreducible_z3")
    displayed = RatFunc(
        -X
        * (
            MPoly.const(-2)
            + X
            - 3 * P * X
            - 6 * P * X**2
            + 5 * P * X**3
            + 2 * P * X**4
            + 3 * P**2 * X**5
        ),
        ((MPoly.const(1) - X) ** 2) * ((MPoly.const(1) - P * X**3) ** 2),
    )
    out.append(
        _result(
            "identity/irreducible-z3-derivative",
            "x-derivative of the Z^3 irreducible series matches its displayed quotient form",
            b2.derivative("x") == displayed,
            True,
        )
    )
    weighted = expand(b2.derivative("x") * RatFunc(X, one), (emax, 0, 0))
    base = expand(b2, (emax, 0, 0))
    ok = all(
        weighted.coefficient(e) == MPoly.const(e) * base.coefficient(e) for e in range(emax + 1)
    )
    out.append(
        _result(
            "identity/irreducible-z3-weighted",
            "x d/dx of the Z^3 irreducible series has coefficients e g_3(p^e), e <= 8",
            ok,
            True,
        )
    )
    # consistency: z3 subring local factor assembled from its zeta building blocks
    assembled = RatFunc(
        (one - X**2) ** 2, (one - X) ** 3 * (one - P * X**3)
    )
    out.append(
        _result(
            "identity/z3-assembled",
            "Z^3 subring local factor equals the assembled product of its zeta factors",
            assembled == catalog("subring_local_z3"),
            True,
        )
    )
    return out


# ---------------------------------------------------------------------------
# invariants: structural facts on enumerated matrices + count sandwich


def suite_invariants(scope: VerifyScope) -> list[CheckResult]:
    out = []
    # censuses validate per-matrix structure on construction; touching them
    # here re-runs those checks across the criterion grids.
    grids = [(3, 2, 4), (3, 3, 3), (4, 2, 4), (4, 3, 3)]
    if not scope.small:
        grids += [(3, 5, 5), (4, 5, 4), (5, 2, 4), (6, 2, 3)]
    checked = 0
    violation = ""
    try:
        for n, p, emax in grids:
            for e in range(emax + 1):
                record = scope.ledger.census(
                    n, p, e, node_budget=scope.node_budget, threads=scope.threads
                )
                checked += record.f_count
    except CensusValidationError as exc:
        violation = str(exc)
    out.append(
        _result(
            "invariants/structural",
            f"corank equals diagonal support, last-column 0/1 and pair rules, and "
            f"exactly-one-1 rule hold for all {checked} matrices in the census grids",
            violation or "no violations",
            "no violations",
        )
    )
    sandwich_ok = True
    worst = ""
    for n in (3, 4, 5, 6):
        for k in (1, 2, 3):
            if k >= n:
                continue
            for p in (2, 3):
                emax = 3 if scope.small else 5
                for e in range(k, emax + 1):
                    h = scope.ledger.corank_count(n, p, e, k, scope.node_budget, scope.threads)
                    lo, hi = sandwich_bounds(n, k, p, e)
                    if not lo <= h <= hi:
                        sandwich_ok = False
                        worst = f"(n={n}, k={k}, p={p}, e={e}): {lo} <= {h} <= {hi} fails"
    out.append(
        _result(
            "invariants/count-sandwich",
            "C(n-1,k) g_{k+1}(p^e) <= h_{n,k}(p^e) <= (n-k)^k C(n-1,k) g_{k+1}(p^e) "
            "across the sampled grid",
            sandwich_ok,
            True,
            note=worst,
        )
    )
    return out


# ---------------------------------------------------------------------------
# oracle: naive vs pruned enumeration; elimination vs minor-gcd Smith form


def _matrix_set(matrices) -> set[tuple[tuple[int, ...], ...]]:
    return {m.entries for m in matrices}


def suite_oracle(scope: VerifyScope) -> list[CheckResult]:
    out = []
    e_max = 3 if scope.small else 5
    for n in (2, 3, 4):
        for p in (2, 3):
            agree = True
            detail = ""
            for e in range(e_max + 1):
                naive = enumerate_subrings(
                    EnumSpec(n=n, p=p, e=e, mode="naive", node_budget=scope.node_budget)
                )
                pruned = enumerate_subrings(
                    EnumSpec(
                        n=n,
                        p=p,
                        e=e,
                        mode="pruned",
                        node_budget=scope.node_budget,
                        threads=scope.threads,
                    )
                )
                if _matrix_set(naive) != _matrix_set(pruned) or [
                    m.entries for m in naive
                ] != [m.entries for m in pruned]:
                    agree = False
                    detail = f"mismatch at e={e}"
                    break
            out.append(
                _result(
                    f"oracle/enumeration/n={n}/p={p}",
                    f"definition-only and rule-driven enumerations agree for Z^{n} "
                    f"at p={p}, e <= {e_max} (same sets, same canonical order)",
                    agree,
                    True,
                    note=detail,
                )
            )
    rules_off = enumerate_subrings(
        EnumSpec(n=4, p=2, e=3, mode="pruned", rules=PruneRuleSet.none())
    )
    naive = enumerate_subrings(EnumSpec(n=4, p=2, e=3, mode="naive"))
    out.append(
        _result(
            "oracle/rules-off",
            "pruned engine with every rule disabled reproduces the naive output",
            [m.entries for m in rules_off],
            [m.entries for m in naive],
        )
    )
    rng = random.Random(0xC0FFEE)
    samples = 10**3 if scope.small else 10**4
    mismatches = 0
    for _ in range(samples):
        n = rng.randint(1, 5)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = rng.randint(1, 15)
            for j in range(i + 1, n):
                rows[i][j] = rng.randrange(rows[i][i])
        m = HnfMatrix.from_rows(rows)
        if smith_normal_form(m) != snf_oracle_minor_gcds(m):
            mismatches += 1
    out.append(
        _result(
            "oracle/smith-form",
            f"elimination and minor-gcd Smith forms agree on {samples} random "
            "Hermite-form matrices with n <= 5, entries < 16",
            mismatches,
            0,
        )
    )
    return out


# ---------------------------------------------------------------------------
# constants: numeric values within enclosures


QUOTED_CONSTANTS: dict[str, tuple[float, float, str]] = {
    # id: (value, absolute tolerance, kind)
    "p_R_3_1": (0.471683, 5e-6, "abs"),
    "p_R_3_2": (0.528317, 5e-6, "abs"),
    "p_R_4_1": (0.0593079, 5e-6, "abs"),
    "p_R_4_2": (0.4389531, 5e-6, "abs"),
    "p_R_4_3": (0.501739, 5e-6, "abs"),
    "ratio_C_5_2_over_C_5_1": (59.801, 1e-3, "rel"),
    "ratio_C_5_3_over_C_5_1": (679.548, 1e-3, "rel"),
    "lattice_cocyclic_limit": (0.847, 1e-3, "abs"),
    "lattice_corank2_limit": (0.994, 1e-3, "abs"),
    "lattice_corank3_limit": (0.99995, 1e-4, "abs"),
}


def compute_constant(name: str) -> analytics.BoundedValue:
    if name == "p_R_3_1":
        return analytics.corank_probability(3, 1)
    if name == "p_R_3_2":
        return analytics.corank_probability(3, 2)
    if name == "p_R_4_1":
        return analytics.corank_probability(4, 1)
    if name == "p_R_4_2":
        return analytics.corank_probability(4, 2)
    if name == "p_R_4_3":
        return analytics.corank_probability(4, 3)
    if name == "ratio_C_5_2_over_C_5_1":
        return analytics.tauberian_ratio(5, 2, 1)
    if name == "ratio_C_5_3_over_C_5_1":
        return analytics.tauberian_ratio(5, 3, 1)
    if name == "lattice_cocyclic_limit":
        return analytics.lattice_baseline(50, 1)
    if name == "lattice_corank2_limit":
        return analytics.lattice_baseline(50, 2)
    if name == "lattice_corank3_limit":
        return analytics.lattice_baseline(50, 3)
    if name == "zeta_2":
        return analytics.zeta_int(2)
    raise KeyError(f"unknown constant id {name!r}")


def suite_constants(scope: VerifyScope) -> list[CheckResult]:
    out = []
    for name, (quoted, tol, kind) in QUOTED_CONSTANTS.items():
        value = compute_constant(name)
        err = abs(value.value - quoted)
        limit = tol * abs(quoted) if kind == "rel" else tol
        # the quoted decimals themselves carry error at the tolerance scale,
        # so the enclosure must come within the tolerance of the quote and be
        # at least that tight itself.
        out.append(
            _result(
                f"constants/{name}",
                f"{name} = {quoted} within {tol} ({kind}), with an enclosure no wider",
                round(value.value, 10),
                quoted,
                passed=err <= limit and value.bound <= limit,
                note=f"bound={value.bound:.3g}",
            )
        )
    z2 = analytics.zeta_int(2)
    c32 = analytics.tauberian_constant(3, 2, target=2e-7)
    ref32 = 1 / (2 * z2)
    out.append(
        _result(
            "constants/C_3_2-closed-form",
            "corank <= 2 accumulation constant of Z^3 equals 1/(2 zeta(2)) (relative 1e-6)",
            round(c32.value, 10),
            round(ref32.value, 10),
            passed=abs(c32.value - ref32.value) <= 1e-6 * ref32.value + c32.bound + ref32.bound,
            note=f"bounds {c32.bound:.3g} / {ref32.bound:.3g}",
        )
    )
    c43 = analytics.tauberian_constant(4, 3, target=2e-7)
    ref43 = 1 / (120 * z2**3)
    out.append(
        _result(
            "constants/C_4_3-closed-form",
            "corank <= 3 accumulation constant of Z^4 equals 1/(5! zeta(2)^3) (relative 1e-6)",
            round(c43.value, 10),
            round(ref43.value, 10),
            passed=abs(c43.value - ref43.value) <= 1e-6 * ref43.value + c43.bound + ref43.bound,
            note=f"bounds {c43.bound:.3g} / {ref43.bound:.3g}",
        )
    )
    total = analytics.corank_probability(3, 1) + analytics.corank_probability(3, 2)
    out.append(
        _result(
            "constants/z3-probabilities-sum",
            "corank probabilities of Z^3 sum to 1 within bounds",
            round(total.value, 9),
            1.0,
            passed=total.contains(1.0),
        )
    )
    total4 = (
        analytics.corank_probability(4, 1)
        + analytics.corank_probability(4, 2)
        + analytics.corank_probability(4, 3)
    )
    out.append(
        _result(
            "constants/z4-probabilities-sum",
            "corank probabilities of Z^4 sum to 1 within bounds",
            round(total4.value, 9),
            1.0,
            passed=total4.contains(1.0),
        )
    )
    out.append(
        _result(
            "constants/coprime-density-z3-p2",
            "proportion of subrings of Z^3 with odd index is exactly 1/6",
            analytics.coprime_index_ratio_exact(3, 2),
            Fraction(1, 6),
        )
    )
    out.append(
        _result(
            "constants/growth-exponent",
            "exact growth exponent at n = 7 equals 9/8",
            analytics.a_lower(7),
            Fraction(9, 8),
        )
    )
    return out


# ---------------------------------------------------------------------------
# rpstar: uniqueness of the all-p cotype


def suite_rpstar(scope: VerifyScope) -> list[CheckResult]:
    out = []
    n_range = (3, 4) if scope.small else (3, 4, 5)
    for n in n_range:
        for p in (2, 3):
            record = scope.ledger.census(
                n, p, n - 1, node_budget=scope.node_budget, threads=scope.threads
            )
            key = tuple([p] * (n - 1))
            out.append(
                _result(
                    f"rpstar/n={n}/p={p}",
                    f"exactly one subring of Z^{n} has cotype ({','.join(str(p) for _ in range(n-1))})",
                    record.cotype_counts.get(key, 0),
                    1,
                )
            )
    return out


# ---------------------------------------------------------------------------
# stretch: budget-gated extended checks


def suite_stretch(scope: VerifyScope) -> list[CheckResult]:
    out = []
    try:
        record = scope.ledger.census(
            6, 2, 7, node_budget=scope.node_budget, threads=scope.threads
        )
        out.append(
            _result(
                "stretch/z6-index-128",
                "Z^6 has at least 2^6 = 64 subrings of index 2^7",
                record.f_count,
                64,
                passed=record.f_count >= 64,
            )
        )
    except BudgetExceededError as exc:
        out.append(
            _skipped(
                "stretch/z6-index-128",
                "Z^6 has at least 64 subrings of index 2^7",
                f"budget exhausted: {exc}",
            )
        )
    limit = 200 if not scope.small else 60
    try:
        table = multiplicative_extend(3, limit, scope.ledger, node_budget=scope.node_budget)
        record22 = scope.ledger.census(3, 2, 2, node_budget=scope.node_budget)
        weight = record22.cotype_counts.get((2, 2), 0)
        # the 2-part of a qualifying subring is the unique cotype-(2,2)
        # subring of index 4, so indices are 4 * odd
        lhs = sum(
            weight * table.f[j // 4]
            for j in range(1, limit + 1)
            if j % 4 == 0 and (j // 4) % 2 == 1
        )
        rhs = sum(
            table.f[j] for j in range(1, limit // 4 + 1) if j % 2 == 1
        )
        out.append(
            _result(
                "stretch/sylow-bijection",
                f"subrings of Z^3 of index <= {limit} whose quotient has 2-part "
                "(Z/2)^2 are equinumerous with odd-index subrings of index <= "
                f"{limit // 4}",
                lhs,
                rhs,
            )
        )
    except BudgetExceededError as exc:
        out.append(
            _skipped(
                "stretch/sylow-bijection",
                "Sylow decomposition bijection for Z^3",
                f"budget exhausted: {exc}",
            )
        )
    return out


SUITES: dict[str, Callable[[VerifyScope], list[CheckResult]]] = {
    "cocyclic": suite_cocyclic,
    "corank-formulas": suite_corank_formulas,
    "local-factors": suite_local_factors,
    "cotype-z4": suite_cotype_z4,
    "identities": suite_identities,
    "invariants": suite_invariants,
    "oracle": suite_oracle,
    "constants": suite_constants,
    "rpstar": suite_rpstar,
    "stretch": suite_stretch,
}


def run_verify(scope: VerifyScope) -> list[CheckResult]:
    """Run the selected suites; check ids are unique across the run."""
    results: list[CheckResult] = []
    for name, fn in SUITES.items():
        if scope.wants(name):
            results.extend(fn(scope))
    seen: set[str] = set()
    for r in results:
        if r.check_id in seen:
            raise RuntimeError(f"duplicate check id {r.check_id}")
        seen.add(r.check_id)
    return results
