"""Problem instances and adversarial generators.

An :class:`Instance` bundles an oracle with the cardinality budget k and
the robustness level tau (up to tau chosen elements may be deleted by an
adversary). Generators here produce the pathological constructions that
drive the test suite -- the set on which plain greedy collapses after one
deletion, the partial-copies instance separating tuple sizes, copy
augmentation, and the value-preserving reduction that plants tau
irresistible decoys -- plus seeded random coverage instances.

Pathological instances are realized as unit coverage rescaled by 1/k so
every value is a correctly-rounded rational t/k, which keeps the published
values exactly reproducible in float arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .bitsets import elements, full_mask, iter_elements, size
from .constraints import IndependenceSystem, system_from_json, system_to_json
from .errors import PreconditionError
from .oracle import (
    EXPLICIT_MAX_N,
    CoverageFunction,
    ExplicitFunction,
    ModularFunction,
    SetFunction,
    SubmodularOracle,
    _Counter,
)


@dataclass(frozen=True)
class CopyMap:
    """Id scheme for duplicated elements.

    Originals keep ids 0..n-1; copy b (0-based) of original x gets id
    n*(b+1) + x. Projection collapses every copy onto its original.
    """

    n_original: int
    copies_per: int

    @property
    def total(self) -> int:
        return self.n_original * (self.copies_per + 1)

    @property
    def originals(self) -> int:
        return full_mask(self.n_original)

    def copies_of(self, x: int) -> tuple[int, ...]:
        if not 0 <= x < self.n_original:
            raise ValueError(f"no original with id {x}")
        n = self.n_original
        return tuple(n * (b + 1) + x for b in range(self.copies_per))

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return {x: self.copies_of(x) for x in range(self.n_original)}

    def project(self, mask: int) -> int:
        n = self.n_original
        out = mask & full_mask(n)
        for b in range(1, self.copies_per + 1):
            out |= (mask >> (n * b)) & full_mask(n)
        return out


class _ProjectionOracle(SubmodularOracle):
    """h(A) = f(project(A)): copies are exact stand-ins for originals.

    One forwarded base query per evaluation.
    """

    def __init__(self, base: SubmodularOracle, copy_map: CopyMap):
        if base.n != copy_map.n_original:
            raise ValueError("copy map does not match the base ground set")
        super().__init__(copy_map.total,
                         f"{base.descriptor}+copies({copy_map.copies_per})")
        self.base = base
        self.copy_map = copy_map

    def _evaluate(self, mask):
        return self.base(self.copy_map.project(mask))

    def _counters(self):
        return self.base._counters()

    def clone(self):
        return _ProjectionOracle(self.base.clone(), self.copy_map)


@dataclass
class Instance:
    """One robust maximization problem: oracle, budget k, removal level tau."""

    oracle: SubmodularOracle
    k: int
    tau: int
    label: str
    system: IndependenceSystem | None = None
    copy_map: CopyMap | None = None

    def __post_init__(self):
        if not 0 <= self.tau < self.k <= self.oracle.n:
            raise ValueError(
                f"need 0 <= tau < k <= n, got tau={self.tau}, k={self.k}, "
                f"n={self.oracle.n}"
            )

    @property
    def n(self) -> int:
        return self.oracle.n

    def fresh(self) -> "Instance":
        """Copy with an independently counted oracle clone."""
        return replace(self, oracle=self.oracle.clone())


def _expect(cond: bool, what: str):
    if not cond:
        raise AssertionError(f"instance construction self-check failed: {what}")


def gen_greedy_failure(k: int) -> Instance:
    """Ground set of 2k elements on which value-greedy is worthless after
    one adversarial deletion.

    Element 0 is worth 1 on its own and absorbs everything; elements
    1..k-1 are worthless; elements k..2k-1 are worth 1/k each and are
    redundant with element 0. Greedy picks element 0 plus dead weight and
    loses everything when element 0 is removed, while the k redundant
    elements keep value 1 - 1/k under any single deletion.
    """
    if k < 2:
        raise PreconditionError("greedy-failure construction needs k >= 2")
    sets = [tuple(range(k))]
    sets += [()] * (k - 1)
    sets += [(j,) for j in range(k)]
    f = CoverageFunction(sets, universe=k, divisor=k,
                         descriptor=f"greedy-failure(k={k})")
    _validate_greedy_failure(f, k)
    return Instance(f, k=k, tau=1, label=f"greedy-failure(k={k})")


def _validate_greedy_failure(f: CoverageFunction, k: int):
    """Pin the realization to every stated value of the construction."""
    g = f.clone()
    n = 2 * k
    _expect(g(1) == 1.0, "f(a_1) = 1")
    for i in range(1, k):
        _expect(g(1 << i) == 0.0, "null singletons")
    for j in range(k, n):
        _expect(g(1 << j) == 1 / k, "redundant singletons worth 1/k")
    rng = np.random.default_rng(0)
    if n <= 12:
        masks = range(1 << n)
    else:
        masks = {int.from_bytes(rng.bytes((n + 7) // 8), "little") & full_mask(n)
                 for _ in range(2000)}
    for X in masks:
        fx = g(X)
        for j in range(k, n):
            jb = 1 << j
            if X & jb:
                continue
            gain = g(X | jb) - fx
            want = 1 / k if not X & (1 | jb) else 0.0
            _expect(abs(gain - want) < 1e-12, "redundant-element marginal law")
    return f


class PartialCopiesLayout(NamedTuple):
    """Element ids of the partial-copies construction."""

    a1: int
    a2: int
    garbage: tuple[int, ...]
    partials_1: tuple[int, ...]   # weak stand-ins for a1, worth 1/k each
    partials_2: tuple[int, ...]   # weak stand-ins for a2
    a1_copy: int                  # exact stand-in for a1


def partial_copies_layout(k: int) -> PartialCopiesLayout:
    return PartialCopiesLayout(
        a1=0,
        a2=1,
        garbage=tuple(range(2, k)),
        partials_1=tuple(range(k, 2 * k)),
        partials_2=tuple(range(2 * k, 3 * k)),
        a1_copy=3 * k,
    )


def gen_partial_copies(k: int) -> Instance:
    """Two unit-value anchors, one exact copy of the first anchor, k weak
    partial stand-ins (worth 1/k) for each anchor, and k-2 worthless
    elements.

    Separates what tuple additions of size 1, 2 and 3 can achieve while
    both anchors are the adversary's best targets. Element ids are laid
    out so that smallest-id tie-breaking realizes the worst case: the
    worthless elements come right after the anchors, and the exact copy
    comes last (see :func:`partial_copies_layout`).
    """
    if k < 4:
        raise PreconditionError("partial-copies construction needs k >= 4")
    lay = partial_copies_layout(k)
    side1 = tuple(range(k))
    side2 = tuple(range(k, 2 * k))
    sets: list[tuple[int, ...]] = [()] * (3 * k + 1)
    sets[lay.a1] = side1
    sets[lay.a2] = side2
    for g in lay.garbage:
        sets[g] = ()
    for j, e in enumerate(lay.partials_1):
        sets[e] = (j,)
    for j, e in enumerate(lay.partials_2):
        sets[e] = (k + j,)
    sets[lay.a1_copy] = side1
    f = CoverageFunction(sets, universe=2 * k, divisor=k,
                         descriptor=f"partial-copies(k={k})")
    _validate_partial_copies(f, k, lay)
    return Instance(f, k=k, tau=1, label=f"partial-copies(k={k})")


def _validate_partial_copies(f: CoverageFunction, k: int,
                             lay: PartialCopiesLayout):
    g = f.clone()
    b = lambda x: 1 << x
    _expect(g(b(lay.a1)) == 1.0, "f(a_1) = 1")
    _expect(g(b(lay.a2)) == 1.0, "f(a_2) = 1")
    _expect(g(b(lay.a1) | b(lay.a2)) == 2.0, "f({a_1,a_2}) = 2")
    _expect(g(b(lay.a1_copy)) == 1.0, "the copy matches a_1's value")
    _expect(g(b(lay.a1_copy) | b(lay.a1)) == 1.0, "the copy adds nothing to a_1")
    gmask = 0
    for x in lay.garbage:
        gmask |= b(x)
    _expect(g(gmask) == 0.0, "worthless block has value 0")
    for i, partials in ((1, lay.partials_1), (2, lay.partials_2)):
        anchor = lay.a1 if i == 1 else lay.a2
        stand_ins = (b(lay.a1) | b(lay.a1_copy)) if i == 1 else b(lay.a2)
        for e in partials:
            _expect(g(b(e)) == 1 / k, "partial stand-ins worth 1/k")
            _expect(g(b(e) | b(anchor)) - g(b(anchor)) == 0.0,
                    "partials add nothing to their anchor")
        rng = np.random.default_rng(1)
        n = f.n
        for _ in range(500):
            X = int.from_bytes(rng.bytes((n + 7) // 8), "little") & full_mask(n)
            e = partials[int(rng.integers(0, len(partials)))]
            if X & b(e):
                continue
            gain = g(X | b(e)) - g(X)
            want = 1 / k if not X & (stand_ins | b(e)) else 0.0
            _expect(abs(gain - want) < 1e-12, "partial-copy marginal law")


def augment_with_copies(inst: Instance, c: int) -> tuple[Instance, CopyMap]:
    """Ground set blown up with c exact copies of every element.

    The new oracle projects copies onto originals, so a copy has its
    original's value and zero marginal on it, for every context. k and
    tau carry over.
    """
    if c < 1:
        raise PreconditionError("need at least one copy per element")
    cmap = CopyMap(inst.oracle.n, c)
    oracle = _ProjectionOracle(inst.oracle.clone(), cmap)
    return (
        Instance(oracle, k=inst.k, tau=inst.tau,
                 label=f"{inst.label}+copies({c})", copy_map=cmap),
        cmap,
    )


def _max_singleton_value(f: SetFunction) -> float:
    g = f.clone()
    return max(g(1 << x) for x in range(g.n))


def gen_hardness_augment(inst: Instance, tau_new: int) -> Instance:
    """Plant tau fully additive decoys worth (k+1) times the best singleton.

    Every adversary removes exactly the decoys, so the robust optimum of
    the augmented instance (budget k+tau, removal level tau) equals the
    plain optimum of the base instance -- a value-preserving reduction
    from the non-robust problem.
    """
    if inst.tau != 0:
        raise PreconditionError("base instance must have tau = 0")
    if tau_new < 1:
        raise PreconditionError("need tau >= 1 decoys")
    f = inst.oracle
    n, k, t = f.n, inst.k, tau_new
    top = _max_singleton_value(f)
    label = f"{inst.label}+decoys({t})"
    if isinstance(f, ModularFunction):
        w = (k + 1) * top
        oracle: SubmodularOracle = ModularFunction(
            f.weights + (w,) * t, descriptor=label)
    elif isinstance(f, CoverageFunction) and f.weights is None:
        # decoys cover fresh points; counts keep the scaled/unscaled value law
        per = round(top * (f.divisor or 1)) * (k + 1)
        sets = [elements(m) for m in f.point_masks]
        u = f.universe
        for i in range(t):
            sets.append(tuple(range(u + i * per, u + (i + 1) * per)))
        oracle = CoverageFunction(sets, universe=u + t * per,
                                  divisor=f.divisor, descriptor=label)
    elif isinstance(f, CoverageFunction):
        w = (k + 1) * top
        sets = [elements(m) for m in f.point_masks]
        u = f.universe
        for i in range(t):
            sets.append((u + i,))
        oracle = CoverageFunction(sets, universe=u + t,
                                  weights=f.weights + (w,) * t,
                                  descriptor=label)
    else:
        if n + t > EXPLICIT_MAX_N:
            raise PreconditionError(
                f"cannot augment {type(f).__name__} beyond n={EXPLICIT_MAX_N}")
        w = (k + 1) * top
        g = f.clone()
        base_vals = [g(m) for m in range(1 << n)]
        table = [
            base_vals[m & full_mask(n)] + w * (m >> n).bit_count()
            for m in range(1 << (n + t))
        ]
        oracle = ExplicitFunction(table, descriptor=label)
    return Instance(oracle, k=k + t, tau=t, label=label)


def gen_random_coverage(n: int, universe: int, density: float, seed: int,
                        k: int, tau: int) -> Instance:
    """Seeded random coverage instance; every element covers each universe
    point independently with the given probability."""
    if n < 1 or universe < 1:
        raise PreconditionError("n and universe must be positive")
    if not 0 < density <= 1:
        raise PreconditionError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    hits = rng.random((n, universe)) < density
    sets = [tuple(np.flatnonzero(hits[i]).tolist()) for i in range(n)]
    label = f"coverage(n={n},u={universe},d={density},seed={seed})"
    f = CoverageFunction(sets, universe=universe, descriptor=label)
    return Instance(f, k=k, tau=tau, label=label)


# ---------------------------------------------------------------------------
# JSON format
#
# { "kind": "coverage"|"modular"|"explicit", "n": int, "k": int, "tau": int,
#   "sets"/"weights"/"table": ..., optional "universe", "point_weights",
#   "divisor", "label", "constraint", "copies" }
# ---------------------------------------------------------------------------


def _explicit_fallback_table(f: SetFunction) -> list[float]:
    if f.n > EXPLICIT_MAX_N:
        raise ValueError(
            f"no compact serialization for {f!r} and n > {EXPLICIT_MAX_N}")
    g = f.clone()
    return [g(m) for m in range(1 << f.n)]


def instance_to_json(inst: Instance) -> dict:
    d: dict = {"n": inst.n, "k": inst.k, "tau": inst.tau, "label": inst.label}
    f = inst.oracle
    if isinstance(f, _ProjectionOracle) and isinstance(f.base, CoverageFunction):
        # copies cover exactly what their originals cover
        base = f.base
        cm = f.copy_map
        sets = [elements(base.point_masks[cm.project(1 << i).bit_length() - 1])
                for i in range(cm.total)]
        d.update(kind="coverage", sets=sets, universe=base.universe,
                 divisor=base.divisor,
                 copies={"n_original": cm.n_original,
                         "copies_per": cm.copies_per})
        if base.weights is not None:
            d["point_weights"] = list(base.weights)
    elif isinstance(f, CoverageFunction):
        d.update(kind="coverage", sets=[elements(m) for m in f.point_masks],
                 universe=f.universe, divisor=f.divisor)
        if f.weights is not None:
            d["point_weights"] = list(f.weights)
    elif isinstance(f, ModularFunction):
        d.update(kind="modular", weights=list(f.weights))
    elif isinstance(f, ExplicitFunction):
        d.update(kind="explicit", table=[float(v) for v in f.table])
    else:
        d.update(kind="explicit", table=_explicit_fallback_table(f))
        if inst.copy_map is not None:
            d["copies"] = {"n_original": inst.copy_map.n_original,
                           "copies_per": inst.copy_map.copies_per}
    if inst.system is not None:
        d["constraint"] = system_to_json(inst.system)
    return d


def instance_from_json(d: dict) -> Instance:
    kind = d.get("kind")
    label = d.get("label", f"{kind}(n={d.get('n')})")
    if kind == "coverage":
        f: SubmodularOracle = CoverageFunction(
            d["sets"], universe=d["universe"],
            weights=d.get("point_weights"), divisor=d.get("divisor"),
            descriptor=label)
    elif kind == "modular":
        f = ModularFunction(d["weights"], descriptor=label)
    elif kind == "explicit":
        f = ExplicitFunction(d["table"], descriptor=label)
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    if f.n != d["n"]:
        raise ValueError("declared n does not match the oracle data")
    cm = None
    if "copies" in d:
        cm = CopyMap(d["copies"]["n_original"], d["copies"]["copies_per"])
        if cm.total != f.n:
            raise ValueError("copy map does not match the ground set")
    system = None
    if "constraint" in d:
        system = system_from_json(d["constraint"])
    return Instance(f, k=d["k"], tau=d["tau"], label=label,
                    system=system, copy_map=cm)


def save_instance(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_json(inst), fh, indent=1)


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))
