"""Set-function oracles with query accounting.

Everything downstream consumes a value oracle: a black box mapping subsets
(bit masks) to non-negative reals, with complexity measured in the number
of evaluations. Concrete families here (coverage, modular, explicit table)
are monotone submodular by construction. Derived oracles (restrictions,
projections, min-of-family) forward their evaluations to the underlying
oracle so query counts stay honest.

Two layers of type:

* :class:`SetFunction` -- anything queryable. ``min_of_family`` returns
  this, because a pointwise minimum of submodular functions is generally
  not submodular.
* :class:`SubmodularOracle` -- the subtype operations may demand when
  their guarantees rely on monotonicity plus diminishing returns.
"""

from __future__ import annotations

import numpy as np

from .bitsets import elements, full_mask, iter_elements
from .errors import OutOfDomainError

#: absolute tolerance for value comparisons inside algorithms
EPS_CMP = 1e-9


class _Counter:
    __slots__ = ("value",)

    def __init__(self):
        self.value = 0


class SetFunction:
    """A queryable set function on {0..n-1}; not necessarily submodular."""

    def __init__(self, n: int, descriptor: str):
        if n < 1:
            raise ValueError(f"ground set must be non-empty, got n={n}")
        self.n = n
        self.descriptor = descriptor
        self._full = full_mask(n)

    def __call__(self, mask: int) -> float:
        if mask < 0 or mask & ~self._full:
            raise OutOfDomainError(
                f"subset {mask:#x} outside ground set of size {self.n}"
            )
        return self._evaluate(mask)

    def _evaluate(self, mask: int) -> float:
        raise NotImplementedError

    def _counters(self) -> tuple[_Counter, ...]:
        raise NotImplementedError

    @property
    def query_count(self) -> int:
        """Total evaluations charged to this oracle's underlying counters."""
        seen: set[int] = set()
        total = 0
        for c in self._counters():
            if id(c) not in seen:
                seen.add(id(c))
                total += c.value
        return total

    def clone(self) -> "SetFunction":
        """Same function, fresh query counters."""
        raise NotImplementedError

    def marginal(self, X: int, A: int) -> float:
        """f(X|A) = f(A u X) - f(A). Always issues two queries, even for
        X a subset of A, so accounting stays uniform."""
        hi = self(A | X)
        lo = self(A)
        return hi - lo

    def restrict(self, S: int) -> "SetFunction":
        return restrict(self, S)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class SubmodularOracle(SetFunction):
    """Marker base for functions monotone submodular by construction."""


def require_submodular(f: SetFunction) -> SubmodularOracle:
    if not isinstance(f, SubmodularOracle):
        raise TypeError(
            f"operation requires a monotone submodular oracle, got {f!r}"
        )
    return f


class ModularFunction(SubmodularOracle):
    """Additive weights; satisfies the diminishing-returns inequality with
    equality."""

    def __init__(self, weights, descriptor: str | None = None):
        ws = tuple(float(w) for w in weights)
        if any(w < 0 for w in ws):
            raise ValueError("modular weights must be non-negative")
        super().__init__(len(ws), descriptor or f"modular(n={len(ws)})")
        self.weights = ws
        self._counter = _Counter()

    def _evaluate(self, mask):
        self._counter.value += 1
        total = 0.0
        w = self.weights
        while mask:
            low = mask & -mask
            total += w[low.bit_length() - 1]
            mask ^= low
        return total

    def _counters(self):
        return (self._counter,)

    def clone(self):
        return ModularFunction(self.weights, self.descriptor)


class CoverageFunction(SubmodularOracle):
    """Weight of the union of covered universe points.

    ``point_sets[i]`` lists the universe points element i covers. With no
    weights the value is the plain count; ``divisor`` rescales counts to
    count/divisor via a single float division, which keeps rational values
    like (k-1)/k exactly reproducible; ``weights`` attaches an arbitrary
    non-negative weight per universe point.
    """

    def __init__(self, point_sets, universe: int, weights=None,
                 divisor: int | None = None, descriptor: str | None = None):
        if universe < 0:
            raise ValueError("universe size must be >= 0")
        if weights is not None and divisor is not None:
            raise ValueError("weights and divisor are mutually exclusive")
        masks = []
        ufull = full_mask(universe) if universe else 0
        for s in point_sets:
            m = 0
            for p in s:
                if p < 0 or p >= universe:
                    raise ValueError(f"universe point {p} out of range")
                m |= 1 << p
            masks.append(m)
        super().__init__(
            len(masks),
            descriptor or f"coverage(n={len(masks)},u={universe})",
        )
        self.point_masks = tuple(masks)
        self.universe = universe
        self.weights = None if weights is None else tuple(float(w) for w in weights)
        if self.weights is not None:
            if len(self.weights) != universe:
                raise ValueError("one weight per universe point required")
            if any(w < 0 for w in self.weights):
                raise ValueError("universe weights must be non-negative")
        if divisor is not None and divisor <= 0:
            raise ValueError("divisor must be positive")
        self.divisor = divisor
        self._ufull = ufull
        self._counter = _Counter()

    def _evaluate(self, mask):
        self._counter.value += 1
        union = 0
        pm = self.point_masks
        while mask:
            low = mask & -mask
            union |= pm[low.bit_length() - 1]
            mask ^= low
        if self.weights is None:
            c = union.bit_count()
            if self.divisor is not None:
                return c / self.divisor
            return float(c)
        total = 0.0
        w = self.weights
        while union:
            low = union & -union
            total += w[low.bit_length() - 1]
            union ^= low
        return total

    def _counters(self):
        return (self._counter,)

    def clone(self):
        f = CoverageFunction.__new__(CoverageFunction)
        SetFunction.__init__(f, self.n, self.descriptor)
        f.point_masks = self.point_masks
        f.universe = self.universe
        f.weights = self.weights
        f.divisor = self.divisor
        f._ufull = self._ufull
        f._counter = _Counter()
        return f


#: explicit tables are capped at this many elements (2^16 table entries)
EXPLICIT_MAX_N = 16


class ExplicitFunction(SubmodularOracle):
    """Value table over all 2^n subsets; exact replay of small instances.

    The table is trusted to be monotone submodular; use
    :func:`check_monotone_submodular` (or exhaustive sweeps at this scale)
    to verify a table of unknown provenance.
    """

    def __init__(self, table, descriptor: str | None = None):
        arr = np.asarray(table, dtype=float)
        if arr.ndim != 1 or arr.size < 2 or arr.size & (arr.size - 1):
            raise ValueError("table length must be a power of two >= 2")
        n = arr.size.bit_length() - 1
        if n > EXPLICIT_MAX_N:
            raise ValueError(f"explicit tables are capped at n={EXPLICIT_MAX_N}")
        if arr[0] != 0.0:
            raise ValueError("explicit table must have value 0 on the empty set")
        if (arr < 0).any():
            raise ValueError("explicit table values must be non-negative")
        super().__init__(n, descriptor or f"explicit(n={n})")
        self.table = arr
        self._counter = _Counter()

    def _evaluate(self, mask):
        self._counter.value += 1
        return float(self.table[mask])

    def _counters(self):
        return (self._counter,)

    def clone(self):
        f = ExplicitFunction.__new__(ExplicitFunction)
        SetFunction.__init__(f, self.n, self.descriptor)
        f.table = self.table
        f._counter = _Counter()
        return f


class _Restriction(SubmodularOracle):
    """h(A) = f(A u S) - f(S); monotone submodular for any fixed S.

    Evaluations are forwarded to (and counted against) the base oracle,
    two per call.
    """

    def __init__(self, base: SubmodularOracle, pinned: int):
        require_submodular(base)
        if pinned < 0 or pinned & ~full_mask(base.n):
            raise OutOfDomainError("restriction set outside ground set")
        super().__init__(base.n, f"{base.descriptor}|{pinned:#x}")
        self.base = base
        self.pinned = pinned

    def _evaluate(self, mask):
        return self.base(mask | self.pinned) - self.base(self.pinned)

    def _counters(self):
        return self.base._counters()

    def clone(self):
        return _Restriction(self.base.clone(), self.pinned)


def restrict(f: SubmodularOracle, S: int) -> SubmodularOracle:
    """Oracle for the marginal gain on top of a fixed set S."""
    return _Restriction(f, S)


class MinOfFamily(SetFunction):
    """Pointwise minimum of a family of set functions.

    Not submodular in general, hence a plain :class:`SetFunction`:
    operations that require a :class:`SubmodularOracle` reject it. One
    evaluation queries every family member once.
    """

    def __init__(self, fs):
        fs = tuple(fs)
        if not fs:
            raise ValueError("min_of_family needs at least one function")
        n = fs[0].n
        if any(g.n != n for g in fs):
            raise ValueError("family members must share one ground set")
        super().__init__(n, f"min[{', '.join(g.descriptor for g in fs)}]")
        self.members = fs

    def _evaluate(self, mask):
        return min(g(mask) for g in self.members)

    def _counters(self):
        out = []
        for g in self.members:
            out.extend(g._counters())
        return tuple(out)

    def clone(self):
        return MinOfFamily(tuple(g.clone() for g in self.members))


def min_of_family(fs) -> MinOfFamily:
    return MinOfFamily(fs)


def _random_mask(rng, n: int) -> int:
    return int.from_bytes(rng.bytes((n + 7) // 8), "little") & full_mask(n)


def check_monotone_submodular(f: SetFunction, samples: int = 1000,
                              seed: int = 0, eps: float = EPS_CMP) -> list[str]:
    """Randomized monotonicity and diminishing-returns audit.

    Samples nested pairs B <= A plus an element a outside A and checks
    f(B) <= f(A) and f(a|A) <= f(a|B). Runs on a clone so the audited
    oracle's query counter is untouched. Returns violation descriptions;
    an empty list is a clean pass.
    """
    g = f.clone()
    rng = np.random.default_rng(seed)
    n = g.n
    bad: list[str] = []
    for i in range(samples):
        a_mask = _random_mask(rng, n)
        b_mask = a_mask & _random_mask(rng, n)
        fa = g(a_mask)
        fb = g(b_mask)
        if fb > fa + eps:
            bad.append(f"monotonicity: f({b_mask:#x})={fb} > f({a_mask:#x})={fa}")
        outside = full_mask(n) & ~a_mask
        if outside:
            outs = elements(outside)
            x = outs[int(rng.integers(0, len(outs)))]
            xb = 1 << x
            gain_a = g(a_mask | xb) - fa
            gain_b = g(b_mask | xb) - fb
            if gain_a > gain_b + eps:
                bad.append(
                    f"submodularity: f({x}|{a_mask:#x})={gain_a} > "
                    f"f({x}|{b_mask:#x})={gain_b}"
                )
        if len(bad) > 50:
            break
    return bad


def check_exhaustive(f: SetFunction, eps: float = EPS_CMP) -> list[str]:
    """Exhaustive monotone/submodular audit, feasible for n <= 12."""
    g = f.clone()
    n = g.n
    if n > 12:
        raise ValueError("exhaustive audit limited to n <= 12")
    vals = [g(m) for m in range(1 << n)]
    bad = []
    for m in range(1 << n):
        for x in range(n):
            xb = 1 << x
            if m & xb:
                continue
            if vals[m | xb] < vals[m] - eps:
                bad.append(f"monotonicity at {m:#x}+{x}")
            for y in range(n):
                yb = 1 << y
                if m & yb or y == x:
                    continue
                big, small = m | yb, m
                if vals[big | xb] - vals[big] > vals[small | xb] - vals[small] + eps:
                    bad.append(f"submodularity at {m:#x},{y},{x}")
    return bad
