"""Discrete hypergroups in exact rational arithmetic.

A discrete hypergroup is a set with an identity, an involution ``x -> ~x``
and a "fusion" rule sending each pair of points to a finitely supported
probability measure.  Everything here is computed with `fractions.Fraction`,
so identities such as "fusion masses sum to one" and "h(x) * (d_~x * d_x)(e) = 1"
are checked by exact equality, never by tolerance.

Labels are opaque: each concrete family chooses its own encoding (see
:mod:`hypergroups.duals`).  The only requirements are hashability and a
total order, which is used for all deterministic tie-breaking.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Collection, Hashable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

Label = Hashable

EXACT = "exact"
FLOAT = "float"


class HypergroupError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(HypergroupError):
    """A caller violated an operation's precondition."""


class LabelDomainError(UsageError):
    """A label does not belong to the hypergroup it was used with."""


class InvalidTableError(HypergroupError):
    """A character table violates its structural invariants."""


class CapacityError(HypergroupError):
    """A bounded search or enumeration exceeded its configured budget."""


class NumericError(HypergroupError):
    """A numerical routine failed to reach its accuracy target."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class InternalInvariantError(HypergroupError):
    """Something the library itself guarantees was violated; indicates a bug."""


class AxiomViolationError(HypergroupError):
    """The supplied fusion data does not define a hypergroup."""


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise UsageError(f"exact rational expected, got {type(value).__name__}: {value!r}")


class FiniteMeasure:
    """A finitely supported measure with nonnegative rational masses.

    Zero masses are pruned at construction so that support equality is
    well defined.  Point-fusion results additionally have total mass 1,
    which callers can check with :meth:`total`.
    """

    __slots__ = ("_mass",)

    def __init__(self, masses: dict[Label, Any]):
        clean: dict[Label, Fraction] = {}
        for label, value in masses.items():
            q = _as_fraction(value)
            if q < 0:
                raise UsageError(f"negative mass {q} at label {label!r}")
            if q:
                clean[label] = q
        self._mass = clean

    @classmethod
    def point(cls, x: Label) -> "FiniteMeasure":
        return cls({x: Fraction(1)})

    def mass(self, x: Label) -> Fraction:
        return self._mass.get(x, Fraction(0))

    @property
    def support(self) -> tuple[Label, ...]:
        return tuple(sorted(self._mass))

    def items(self) -> list[tuple[Label, Fraction]]:
        return sorted(self._mass.items())

    def total(self) -> Fraction:
        return sum(self._mass.values(), Fraction(0))

    def map_labels(self, fn: Callable[[Label], Label]) -> "FiniteMeasure":
        return FiniteMeasure({fn(x): v for x, v in self._mass.items()})

    def __len__(self) -> int:
        return len(self._mass)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMeasure):
            return NotImplemented
        return self._mass == other._mass

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}: {v}" for x, v in self.items())
        return f"FiniteMeasure({{{body}}})"


class FiniteFunction:
    """A finitely supported function, either exact-rational or floating point.

    The ``lane`` tag records which arithmetic the values live in; mixing
    lanes in one operation is a usage error.  The support is exactly the
    set of labels with nonzero value.
    """

    __slots__ = ("_value", "_lane")

    def __init__(self, values: dict[Label, Any], lane: str = EXACT):
        if lane not in (EXACT, FLOAT):
            raise UsageError(f"unknown lane {lane!r}")
        clean: dict[Label, Any] = {}
        if lane == EXACT:
            for label, value in values.items():
                q = _as_fraction(value)
                if q:
                    clean[label] = q
        else:
            for label, value in values.items():
                f = float(value)
                if f != 0.0:
                    clean[label] = f
        self._value = clean
        self._lane = lane

    @classmethod
    def point(cls, x: Label, value: Any = 1, lane: str = EXACT) -> "FiniteFunction":
        return cls({x: value}, lane)

    @classmethod
    def indicator(cls, labels: Iterable[Label], lane: str = EXACT) -> "FiniteFunction":
        return cls({x: 1 for x in labels}, lane)

    @property
    def lane(self) -> str:
        return self._lane

    def value(self, x: Label) -> Any:
        zero = Fraction(0) if self._lane == EXACT else 0.0
        return self._value.get(x, zero)

    @property
    def support(self) -> tuple[Label, ...]:
        return tuple(sorted(self._value))

    def items(self) -> list[tuple[Label, Any]]:
        return sorted(self._value.items())

    def _require_same_lane(self, other: "FiniteFunction") -> None:
        if self._lane != other._lane:
            raise UsageError(f"lane mismatch: {self._lane} vs {other._lane}")

    def __add__(self, other: "FiniteFunction") -> "FiniteFunction":
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        self._require_same_lane(other)
        out = dict(self._value)
        for label, value in other._value.items():
            out[label] = out.get(label, 0) + value
        return FiniteFunction(out, self._lane)

    def __sub__(self, other: "FiniteFunction") -> "FiniteFunction":
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return self + other.scale(-1)

    def __mul__(self, other: "FiniteFunction") -> "FiniteFunction":
        """Pointwise product."""
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        self._require_same_lane(other)
        out = {}
        for label, value in self._value.items():
            if label in other._value:
                out[label] = value * other._value[label]
        return FiniteFunction(out, self._lane)

    def scale(self, c: Any) -> "FiniteFunction":
        if self._lane == EXACT:
            c = _as_fraction(c)
        else:
            c = float(c)
        return FiniteFunction({x: c * v for x, v in self._value.items()}, self._lane)

    def __bool__(self) -> bool:
        return bool(self._value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return self._lane == other._lane and self._value == other._value

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}: {v}" for x, v in self.items())
        return f"FiniteFunction({{{body}}}, lane={self._lane!r})"


class Hypergroup:
    """A discrete hypergroup given by a point-fusion oracle.

    Instances are immutable after construction.  Fusion and Haar values are
    memoised; the caches only ever grow and are guarded by a lock, so
    concurrent readers are safe.
    """

    def __init__(
        self,
        *,
        name: str,
        fuse: Callable[[Label, Label], dict[Label, Fraction]],
        involution: Callable[[Label], Label],
        identity: Label,
        commutative: bool,
        universe: Iterable[Label] | None = None,
        validator: Callable[[Label], bool] | None = None,
        labeler: Callable[[Label], str] | None = None,
    ):
        self.name = name
        self._fuse_fn = fuse
        self._involution_fn = involution
        self._identity = identity
        self._commutative = bool(commutative)
        self._universe = tuple(sorted(universe)) if universe is not None else None
        self._validator = validator
        self._labeler = labeler or str
        self._fusion_cache: dict[tuple[Label, Label], FiniteMeasure] = {}
        self._haar_cache: dict[Label, Fraction] = {}
        self._lock = threading.Lock()

    @property
    def identity(self) -> Label:
        return self._identity

    @property
    def commutative(self) -> bool:
        return self._commutative

    @property
    def universe(self) -> tuple[Label, ...] | None:
        """All labels for finite hypergroups, None for infinite ones."""
        return self._universe

    @property
    def is_finite(self) -> bool:
        return self._universe is not None

    def check_label(self, x: Label) -> None:
        if self._validator is not None and not self._validator(x):
            raise LabelDomainError(f"{x!r} is not a label of {self.name}")

    def label_str(self, x: Label) -> str:
        return self._labeler(x)

    def fuse(self, x: Label, y: Label) -> FiniteMeasure:
        """The fusion measure d_x * d_y."""
        key = (x, y)
        cached = self._fusion_cache.get(key)
        if cached is not None:
            return cached
        self.check_label(x)
        self.check_label(y)
        result = FiniteMeasure(self._fuse_fn(x, y))
        with self._lock:
            self._fusion_cache[key] = result
            if self._commutative:
                self._fusion_cache[(y, x)] = result
        return result

    def involution(self, x: Label) -> Label:
        self.check_label(x)
        return self._involution_fn(x)

    def haar(self, x: Label) -> Fraction:
        """Haar mass h(x) = 1 / (d_~x * d_x)(e), normalised so h(e) = 1."""
        cached = self._haar_cache.get(x)
        if cached is not None:
            return cached
        mass_at_identity = self.fuse(self.involution(x), x).mass(self._identity)
        if mass_at_identity == 0:
            raise AxiomViolationError(
                f"identity not in support of fusion of {self.label_str(x)} with its "
                f"involute; {self.name} is not a hypergroup"
            )
        result = 1 / mass_at_identity
        with self._lock:
            self._haar_cache[x] = result
        return result

    def haar_sum(self, labels: Iterable[Label]) -> Fraction:
        return sum((self.haar(x) for x in labels), Fraction(0))

    def __repr__(self) -> str:
        size = len(self._universe) if self._universe is not None else "infinite"
        return f"<Hypergroup {self.name} ({size})>"


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def convolve_points(H: Hypergroup, x: Label, y: Label) -> FiniteMeasure:
    """Fusion of two point masses; nonnegative rational masses summing to 1."""
    return H.fuse(x, y)


def haar(H: Hypergroup, x: Label) -> Fraction:
    """Exact Haar mass of a point."""
    return H.haar(x)


def convolve_h(H: Hypergroup, f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """Convolution in the weighted algebra L1(H, h).

    Bilinear extension of ``(d_x conv d_y)(z) = (d_x * d_y)(z) h(x) h(y) / h(z)``.
    Both inputs must live in the same arithmetic lane; the exact lane prunes
    exact zeros from the result.
    """
    f._require_same_lane(g)
    exact = f.lane == EXACT
    acc: dict[Label, Any] = {}
    for x, fx in f.items():
        hx = H.haar(x)
        for y, gy in g.items():
            weight = fx * gy * (hx * H.haar(y) if exact else float(hx * H.haar(y)))
            for z, mass in H.fuse(x, y).items():
                term = weight * (mass / H.haar(z) if exact else float(mass / H.haar(z)))
                acc[z] = acc.get(z, 0) + term
    return FiniteFunction(acc, f.lane)


def involute(H: Hypergroup, f: FiniteFunction) -> FiniteFunction:
    """The function x -> f(~x)."""
    return FiniteFunction({H.involution(x): v for x, v in f.items()}, f.lane)


def support_product(
    H: Hypergroup, A: Collection[Label], B: Collection[Label]
) -> frozenset[Label]:
    """Union of fusion supports over all pairs from A x B."""
    out: set[Label] = set()
    for x in A:
        for y in B:
            out.update(H.fuse(x, y).support)
    return frozenset(out)


def _fuse_measure_point(H: Hypergroup, mu: FiniteMeasure, z: Label) -> FiniteMeasure:
    acc: dict[Label, Fraction] = {}
    for t, mass in mu.items():
        for w, m2 in H.fuse(t, z).items():
            acc[w] = acc.get(w, Fraction(0)) + mass * m2
    return FiniteMeasure(acc)


def _fuse_point_measure(H: Hypergroup, x: Label, nu: FiniteMeasure) -> FiniteMeasure:
    acc: dict[Label, Fraction] = {}
    for t, mass in nu.items():
        for w, m2 in H.fuse(x, t).items():
            acc[w] = acc.get(w, Fraction(0)) + mass * m2
    return FiniteMeasure(acc)


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomFailure:
    check: str
    labels: tuple[str, ...]
    detail: str


@dataclass
class AxiomReport:
    """Outcome of the exact axiom suite; failures are data, not exceptions."""

    hypergroup: str
    sample_size: int
    checks: dict[str, int] = field(default_factory=dict)
    failures: list[AxiomFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "hypergroup": self.hypergroup,
            "sample_size": self.sample_size,
            "checks": dict(sorted(self.checks.items())),
            "ok": self.ok,
            "failures": [
                {"check": f.check, "labels": list(f.labels), "detail": f.detail}
                for f in self.failures
            ],
        }

    def summary(self) -> str:
        lines = [f"axiom report for {self.hypergroup}: "
                 f"{'PASS' if self.ok else 'FAIL'} ({self.sample_size} sample labels)"]
        for name, count in sorted(self.checks.items()):
            lines.append(f"  {name}: {count} checks")
        for f in self.failures:
            lines.append(f"  FAIL {f.check} at ({', '.join(f.labels)}): {f.detail}")
        return "\n".join(lines)


def _check_pairs(H: Hypergroup, sample: list[Label]) -> tuple[dict[str, int], list[AxiomFailure]]:
    counts = {"normalization": 0, "identity": 0, "involution_antihom": 0,
              "inverse_support": 0}
    if H.commutative:
        counts["commutativity"] = 0
    failures: list[AxiomFailure] = []
    e = H.identity

    for x in sample:
        counts["identity"] += 2
        if H.fuse(e, x) != FiniteMeasure.point(x):
            failures.append(AxiomFailure("identity", (H.label_str(x),),
                                         "fusion with identity on the left is not a point mass"))
        if H.fuse(x, e) != FiniteMeasure.point(x):
            failures.append(AxiomFailure("identity", (H.label_str(x),),
                                         "fusion with identity on the right is not a point mass"))
        counts["inverse_support"] += 1
        if H.fuse(H.involution(x), x).mass(e) == 0:
            failures.append(AxiomFailure("inverse_support", (H.label_str(x),),
                                         "identity missing from fusion with the involute"))

    for x in sample:
        for y in sample:
            mu = H.fuse(x, y)
            counts["normalization"] += 1
            total = mu.total()
            if total != 1:
                failures.append(AxiomFailure(
                    "normalization", (H.label_str(x), H.label_str(y)),
                    f"total mass {total} != 1"))
            counts["involution_antihom"] += 1
            tilde = mu.map_labels(H.involution)
            if tilde != H.fuse(H.involution(y), H.involution(x)):
                failures.append(AxiomFailure(
                    "involution_antihom", (H.label_str(x), H.label_str(y)),
                    "involute of the fusion differs from fusion of the swapped involutes"))
            if H.commutative:
                counts["commutativity"] += 1
                if mu != H.fuse(y, x):
                    failures.append(AxiomFailure(
                        "commutativity", (H.label_str(x), H.label_str(y)),
                        "fusion is not symmetric"))
    return counts, failures


def _associativity_failures(H: Hypergroup, triples: list[tuple[Label, Label, Label]]) -> list[AxiomFailure]:
    failures = []
    for x, y, z in triples:
        left = _fuse_measure_point(H, H.fuse(x, y), z)
        right = _fuse_point_measure(H, x, H.fuse(y, z))
        if left != right:
            failures.append(AxiomFailure(
                "associativity",
                (H.label_str(x), H.label_str(y), H.label_str(z)),
                "bilinear extensions of (x*y)*z and x*(y*z) differ"))
    return failures


def check_axioms(H: Hypergroup, sample: Collection[Label], threads: int = 1) -> AxiomReport:
    """Exact verification of the hypergroup axioms over a finite sample.

    Checks mass normalization, identity laws, associativity of point fusion
    (extended bilinearly) over all triples, the involution anti-homomorphism
    law, presence of the identity in ``~x * x``, and commutativity when the
    hypergroup is flagged commutative.  Every failure carries a witness.
    """
    sample = sorted(set(sample))
    if not sample:
        raise UsageError("axiom check requires a nonempty sample")
    for x in sample:
        H.check_label(x)

    counts, failures = _check_pairs(H, sample)
    triples = [(x, y, z) for x in sample for y in sample for z in sample]
    counts["associativity"] = len(triples)

    if threads > 1 and len(triples) > 1:
        chunk = max(1, len(triples) // (threads * 4))
        blocks = [triples[i:i + chunk] for i in range(0, len(triples), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for result in pool.map(lambda block: _associativity_failures(H, block), blocks):
                failures.extend(result)
    else:
        failures.extend(_associativity_failures(H, triples))

    return AxiomReport(hypergroup=H.name, sample_size=len(sample),
                       checks=counts, failures=failures)
