"""Witness sequences: bounded in the A-norm, unbounded in a central Segal norm.

The construction chains plateau functions u_1, u_2, ... so that

* u_n u_m = u_n exactly for all n < m (each later plateau is 1 on the
  support of every earlier one),
* every A-norm bound sqrt(h(K_n * V_n) / h(V_n)) stays below a fixed D > 1,
* the central Segal norm grows at least like h(K_n)^(1/p), because u_n is
  exactly 1 on K_n and nonnegative.

Stages are inherently sequential: K_{n+1} = K_n * V_n * ~V_n is the support
of u_n, which forces the next plateau to be 1 there.  A search that returns
a V with no growth (always possible at the identity, where the ratio is 1)
would freeze the chain, so stages expand V minimally past that point while
keeping the ratio below D^2; on finite duals the chain then stabilizes at
the full universe, which is the degenerate but valid outcome.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Collection
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import su2num
from .core import (
    CapacityError,
    Hypergroup,
    InternalInvariantError,
    Label,
    UsageError,
    support_product,
)
from .duals import Su2Dual
from .fourier import QuadratureConfig, Su2IntervalBump, bump
from .leptin import (
    LeptinCertificate,
    leptin_ratio,
    leptin_search_exhaustive,
    leptin_search_greedy,
    leptin_search_interval,
)

WITNESS_STRATEGIES = ("interval", "greedy", "exhaustive")


def _exact_cap(D: Any) -> Fraction:
    if isinstance(D, float):
        raise UsageError("D must be exact; pass a Fraction, int or string")
    cap = Fraction(D)
    if cap <= 1:
        raise UsageError(f"D must exceed 1, got {cap}")
    return cap


def _haar_sum(H: Hypergroup, labels: Collection[Label]) -> Fraction:
    if isinstance(H, Su2Dual) and isinstance(labels, range) and labels.start == 0:
        return Fraction(su2num.interval_haar_n2(labels.stop - 1))
    return H.haar_sum(labels)


@dataclass
class WitnessSequence:
    """The chained plateau functions with their interval/set scaffolding.

    ``K_chain`` has one extra entry: the support bound of the last term,
    i.e. the set the next stage would have to cover.
    """

    hypergroup: Hypergroup
    D: Fraction
    strategy: str
    terms: list[Any]
    K_chain: list[Collection[Label]]
    V_chain: list[Collection[Label]]
    ratios: list[Fraction]
    certificates: list[LeptinCertificate] = field(default_factory=list)
    _a_cache: dict[tuple, list[Any]] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def a_bounds(self) -> list[float]:
        return [math.sqrt(float(r)) for r in self.ratios]

    def a_values(self, config: QuadratureConfig | None = None) -> list[Any]:
        """Measured A-norms per term (quadrature on su2-hat, exact on finite duals)."""
        key = (config.nodes, config.tolerance, config.scheme) if config else None
        cached = self._a_cache.get(key)
        if cached is None:
            cached = [term.a_norm(config) for term in self.terms]
            self._a_cache[key] = cached
        return cached

    def chain_failures(self) -> list[tuple[int, int, str]]:
        """Exact check of u_n u_m = u_n for all n < m; witnesses on failure."""
        failures = []
        for i in range(len(self.terms)):
            for j in range(i + 1, len(self.terms)):
                witness = absorption_witness(self.terms[i], self.terms[j])
                if witness is not None:
                    failures.append((i + 1, j + 1, self.hypergroup.label_str(witness)))
        return failures


def absorption_witness(earlier: Any, later: Any) -> Label | None:
    """A label where earlier * later != earlier, or None when absorbed."""
    if isinstance(earlier, Su2IntervalBump) and isinstance(later, Su2IntervalBump):
        top = earlier.k2 + 2 * earlier.m2
        if top <= later.k2:
            return None
        for z in range(later.k2 + 1, top + 1):
            if later.value(z) != 1:
                return z
        return None
    mine = earlier.as_finite_function()
    product = mine * later.as_finite_function()
    if product == mine:
        return None
    diff = product - mine
    return diff.support[0]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _su2_interval_witness(H: Su2Dual, K0: Collection[int], cap: Fraction,
                          n_terms: int) -> WitnessSequence:
    eps = cap * cap - 1
    k2 = max(K0)
    terms, k_chain, v_chain, ratios, certs = [], [], [], [], []
    for stage in range(n_terms):
        cert = leptin_search_interval(
            Fraction(k2, 2), eps, hypergroup=H, min_m2=max(k2, 1))
        m2 = max(cert.V)
        term = Su2IntervalBump.build(H, k2, m2)
        if term.ratio != cert.ratio or not term.ratio < cap * cap:
            raise InternalInvariantError(f"stage {stage + 1}: ratio bound violated")
        terms.append(term)
        k_chain.append(range(k2 + 1))
        v_chain.append(range(m2 + 1))
        ratios.append(term.ratio)
        certs.append(cert)
        k2 = k2 + 2 * m2
    k_chain.append(range(k2 + 1))
    return WitnessSequence(H, cap, "interval", terms, k_chain, v_chain, ratios, certs)


def _expansion_pool(H: Hypergroup, K: Collection[Label], V: set[Label]) -> list[Label]:
    pool = set(support_product(H, K, V)) | set(support_product(H, V, V))
    if H.universe is not None:
        pool |= set(H.universe)
    elif isinstance(H, Su2Dual):
        pool.add(max(V) + 1)
    return sorted(pool - V)


def _generic_witness(H: Hypergroup, K0: Collection[Label], cap: Fraction,
                     n_terms: int, strategy: str, max_size: int) -> WitnessSequence:
    eps = cap * cap - 1
    bound = cap * cap
    K = frozenset(K0)
    terms, k_chain, v_chain, ratios, certs = [], [], [], [], []
    for stage in range(n_terms):
        if strategy == "greedy":
            cert = leptin_search_greedy(H, K, eps, max_size=max_size)
            if cert is None:
                raise CapacityError(
                    f"stage {stage + 1}: greedy search found no set of size "
                    f"<= {max_size} with ratio below {bound}")
        else:
            cert = leptin_search_exhaustive(H, K, eps)
        V = set(cert.V)

        def grown_support() -> frozenset:
            kv = support_product(H, K, V)
            return support_product(H, kv, frozenset(H.involution(x) for x in V))

        next_k = grown_support()
        # expand V past a frozen chain while the ratio allows it
        while next_k <= K:
            progressed = False
            for candidate in _expansion_pool(H, K, V):
                if len(V) >= max_size:
                    break
                trial = V | {candidate}
                if leptin_ratio(H, K, trial) < bound:
                    V = trial
                    progressed = True
                    next_k = grown_support()
                    break
            if not progressed:
                break

        ratio = leptin_ratio(H, K, V)
        if not ratio < bound:
            raise InternalInvariantError(f"stage {stage + 1}: expansion broke the ratio bound")
        term = bump(H, K, V)
        terms.append(term)
        k_chain.append(K)
        v_chain.append(frozenset(V))
        ratios.append(ratio)
        certs.append(LeptinCertificate(
            strategy=cert.strategy, K=K, V=frozenset(V), ratio=ratio,
            epsilon=eps, hypergroup=H))
        certs[-1].verify()
        K = next_k
    k_chain.append(K)
    return WitnessSequence(H, cap, strategy, terms, k_chain, v_chain, ratios, certs)


def build_witness(H: Hypergroup, K0: Collection[Label], D: Any, N: int,
                  search: str = "greedy", *, max_size: int = 64) -> WitnessSequence:
    """Build the N-term witness chain with per-stage ratio below D^2.

    ``search`` picks the per-stage Leptin engine: "interval" (dual of SU(2)
    only; K0 is widened to the spin interval below its top label), "greedy",
    or "exhaustive" (finite duals).  Verifies exactly, at every stage, that
    the ratio is below D^2 and that each plateau is 1 on the support bound
    of the previous one.
    """
    cap = _exact_cap(D)
    if N < 1:
        raise UsageError(f"N must be at least 1, got {N}")
    if not K0:
        raise UsageError("K0 must be nonempty")
    for x in K0:
        H.check_label(x)
    if search not in WITNESS_STRATEGIES:
        raise UsageError(f"unknown witness strategy {search!r}")
    if search == "interval":
        if not isinstance(H, Su2Dual):
            raise UsageError("the interval strategy needs the dual of SU(2)")
        w = _su2_interval_witness(H, K0, cap, N)
    else:
        w = _generic_witness(H, K0, cap, N, search, max_size)
    failures = w.chain_failures()
    if failures:
        raise InternalInvariantError(f"chain law failed at stages {failures[:3]}")
    return w


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class BlowupRow:
    n: int
    K_size: int
    V_size: int
    ratio: Fraction
    a_bound: float
    a_value: Any
    segal_p: float
    lower_bound: float


@dataclass
class BlowupReport:
    """Per-stage norms and the measured Segal-norm growth factor."""

    p: Any
    rows: list[BlowupRow]
    growth_factor: float
    exact_growth_power: Fraction | None  # segal_p(u_N)^p / segal_p(u_1)^p when p is integral

    CSV_COLUMNS = ("n", "K_size", "V_size", "ratio", "a_bound", "a_value",
                   "segal_p", "lower_bound")

    def to_json_dict(self) -> dict[str, Any]:
        def num(x: Any) -> Any:
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            return x

        return {
            "p": num(self.p),
            "growth_factor": self.growth_factor,
            "exact_growth_power": num(self.exact_growth_power)
            if self.exact_growth_power is not None else None,
            "rows": [
                {col: num(getattr(row, col)) for col in self.CSV_COLUMNS}
                for row in self.rows
            ],
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([
                row.n, row.K_size, row.V_size,
                f"{row.ratio.numerator}/{row.ratio.denominator}",
                f"{row.a_bound:.17g}",
                f"{float(row.a_value):.17g}" if row.a_value is not None else "",
                f"{row.segal_p:.17g}",
                f"{row.lower_bound:.17g}",
            ])
        return buf.getvalue()


def blowup_report(w: WitnessSequence, p: Any,
                  config: QuadratureConfig | None = None,
                  include_a_values: bool = True) -> BlowupReport:
    """Tabulate a_bound, a_value, the p-Segal norm and its exact lower bound.

    The lower bound h(K_n)^(1/p) is certified in rational arithmetic: each
    u_n is exactly 1 on K_n and nonnegative, so the norm's p-th power
    dominates h(K_n) term by term.
    """
    if not (1 <= p <= 2):
        raise UsageError(f"the central Segal norm requires p in [1, 2], got {p}")
    integral_p = float(p).is_integer()
    a_values = w.a_values(config) if include_a_values else [None] * len(w)
    rows = []
    power_sums: list[Fraction | None] = []
    for idx, term in enumerate(w.terms):
        k_set = w.K_chain[idx]
        v_set = w.V_chain[idx]
        h_k = _haar_sum(w.hypergroup, k_set)
        if integral_p:
            power = term.segal_power_sum(int(p))
            if power < h_k:
                raise InternalInvariantError(
                    f"stage {idx + 1}: Segal power sum {power} below its "
                    f"certified lower bound {h_k}")
            power_sums.append(power)
            segal_value = float(power) ** (1.0 / float(p))
        else:
            if not term.is_one_on(k_set):
                raise InternalInvariantError(
                    f"stage {idx + 1}: plateau is not 1 on K")
            power_sums.append(None)
            segal_value = term.segal_norm(p)
        rows.append(BlowupRow(
            n=idx + 1,
            K_size=len(k_set),
            V_size=len(v_set),
            ratio=w.ratios[idx],
            a_bound=math.sqrt(float(w.ratios[idx])),
            a_value=a_values[idx],
            segal_p=segal_value,
            lower_bound=float(h_k) ** (1.0 / float(p)),
        ))
    growth = rows[-1].segal_p / rows[0].segal_p
    exact_growth = None
    if integral_p and power_sums[0]:
        exact_growth = power_sums[-1] / power_sums[0]
    return BlowupReport(p=p, rows=rows, growth_factor=growth,
                        exact_growth_power=exact_growth)


@dataclass
class CheckReport:
    """Outcome of the multiplier-boundedness verification."""

    product_ok: bool
    product_failures: list[tuple[int, int, str]]
    a_values: list[Any]
    max_a_value: float
    cap: float
    tolerance: float

    @property
    def bound_ok(self) -> bool:
        return self.max_a_value <= self.cap + self.tolerance

    @property
    def ok(self) -> bool:
        return self.product_ok and self.bound_ok

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "product_ok": self.product_ok,
            "product_failures": [
                {"n": n, "m": m, "label": label}
                for n, m, label in self.product_failures
            ],
            "a_values": [float(a) for a in self.a_values],
            "max_a_value": self.max_a_value,
            "cap": self.cap,
            "tolerance": self.tolerance,
            "bound_ok": self.bound_ok,
            "ok": self.ok,
        }


def check_multiplier_bounded(w: WitnessSequence,
                             config: QuadratureConfig | None = None,
                             tolerance: float = 1e-6) -> CheckReport:
    """Verify the chain law exactly and the A-norm cap within tolerance.

    Failures are recorded with witnesses, not raised: a corrupted sequence
    produces a failing report.
    """
    failures = w.chain_failures()
    a_values = w.a_values(config)
    max_a = max(float(a) for a in a_values)
    return CheckReport(
        product_ok=not failures,
        product_failures=failures,
        a_values=a_values,
        max_a_value=max_a,
        cap=float(w.D),
        tolerance=tolerance,
    )
