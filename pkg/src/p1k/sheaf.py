"""Direct sums of twisting sheaves O(k, l), their morphisms and bounded complexes.

A morphism O(k_j, l_j) -> O(k_i, l_i) is left multiplication by a ring
element supported in degrees [l_j - l_i, k_i - k_j]; exactly these
elements carry R_{<=k_j} into R_{<=k_i} and R_{>=-l_j} into R_{>=-l_i}.
All three components of the sheaf morphism are that one multiplication.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import exactla
from .errors import NotChainMap, RangeViolation, ShapeMismatch
from .graded_ring import GradedRingModel, RingElement, crossed_product_witness, left_mult_matrix

# ---------------------------------------------------------------------------
# objects


@dataclass(frozen=True)
class TwistSum:
    """Formal direct sum of twisting sheaves; may be empty (the zero sheaf)."""

    summands: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple((int(k), int(l)) for k, l in self.summands))

    def __len__(self):
        return len(self.summands)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.summands)

    def __getitem__(self, i):
        return self.summands[i]

    def __add__(self, other: "TwistSum") -> "TwistSum":
        return TwistSum(self.summands + other.summands)

    def twist(self, a: int, b: int) -> "TwistSum":
        return TwistSum(tuple((k + a, l + b) for k, l in self.summands))

    def is_vect0(self) -> bool:
        # H^1 of every twist with k + l >= 0 vanishes iff each k_i + l_i >= -1
        return all(k + l >= -1 for k, l in self.summands)

    def __repr__(self):
        if not self.summands:
            return "0"
        return " + ".join(f"O({k},{l})" for k, l in self.summands)


def O(k: int, l: int) -> TwistSum:
    return TwistSum(((k, l),))


@dataclass(frozen=True)
class RangedElement:
    element: RingElement
    lo: int
    hi: int

    def is_valid(self) -> bool:
        return all(self.lo <= n <= self.hi for n in self.element.degrees)


def hom_range(src: tuple[int, int], tgt: tuple[int, int]) -> tuple[int, int]:
    """Degree interval of multiplication elements O(src) -> O(tgt)."""
    return src[1] - tgt[1], tgt[0] - src[0]


def hom_basis(model: GradedRingModel, src: tuple[int, int], tgt: tuple[int, int]) -> list[RangedElement]:
    lo, hi = hom_range(src, tgt)
    out = []
    for n in range(lo, hi + 1):
        for x in model.component_elements(n):
            out.append(RangedElement(x, lo, hi))
    return out


# ---------------------------------------------------------------------------
# morphisms


class SheafMorphism:
    """Matrix (target x source) of left-multiplication elements."""

    __slots__ = ("model", "source", "target", "entries")

    def __init__(self, model: GradedRingModel, source: TwistSum, target: TwistSum, entries: Sequence[Sequence[RingElement]]):
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != len(target) or any(len(r) != len(source) for r in rows):
            raise ShapeMismatch(f"entry matrix does not have shape {len(target)}x{len(source)}")
        for r in rows:
            for e in r:
                if e.model is not model:
                    raise ShapeMismatch("morphism entry from a different ring model")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, key, value):
        raise AttributeError("SheafMorphism is immutable")

    @classmethod
    def zero(cls, model, source: TwistSum, target: TwistSum) -> "SheafMorphism":
        z = model.zero()
        return cls(model, source, target, [[z] * len(source) for _ in range(len(target))])

    @classmethod
    def identity(cls, model, X: TwistSum) -> "SheafMorphism":
        z, one = model.zero(), model.unit
        return cls(model, X, X, [[one if i == j else z for j in range(len(X))] for i in range(len(X))])

    @classmethod
    def block(cls, model, sources: Sequence[TwistSum], targets: Sequence[TwistSum], blocks) -> "SheafMorphism":
        """Assemble from blocks[r][c] : sources[c] -> targets[r] (None means zero)."""
        src = sum(sources, TwistSum())
        tgt = sum(targets, TwistSum())
        z = model.zero()
        rows = [[z] * len(src) for _ in range(len(tgt))]
        r0 = 0
        for r, T in enumerate(targets):
            c0 = 0
            for c, S in enumerate(sources):
                b = blocks[r][c]
                if b is not None:
                    if b.source != S or b.target != T:
                        raise ShapeMismatch(f"block ({r},{c}) has wrong source/target")
                    for i in range(len(T)):
                        for j in range(len(S)):
                            rows[r0 + i][c0 + j] = b.entries[i][j]
                c0 += len(S)
            r0 += len(T)
        return cls(model, src, tgt, rows)

    def entry_range(self, i: int, j: int) -> tuple[int, int]:
        return hom_range(self.source[j], self.target[i])

    def ranged(self, i: int, j: int) -> RangedElement:
        lo, hi = self.entry_range(i, j)
        return RangedElement(self.entries[i][j], lo, hi)

    def violations(self) -> list[tuple[int, int, int]]:
        bad = []
        for i in range(len(self.target)):
            for j in range(len(self.source)):
                lo, hi = self.entry_range(i, j)
                for n in self.entries[i][j].degrees:
                    if not lo <= n <= hi:
                        bad.append((i, j, n))
        return bad

    def is_valid(self) -> bool:
        return not self.violations()

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def __add__(self, other: "SheafMorphism") -> "SheafMorphism":
        if other.source != self.source or other.target != self.target:
            raise ShapeMismatch("cannot add morphisms with different source/target")
        return SheafMorphism(
            self.model, self.source, self.target,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "SheafMorphism":
        return SheafMorphism(self.model, self.source, self.target, [[-a for a in r] for r in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SheafMorphism):
            return NotImplemented
        return (
            self.model is other.model
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def twist(self, a: int, b: int) -> "SheafMorphism":
        return SheafMorphism(self.model, self.source.twist(a, b), self.target.twist(a, b), self.entries)

    def max_support(self) -> int | None:
        degs = [n for r in self.entries for e in r for n in e.degrees]
        return max(degs) if degs else None

    def min_support(self) -> int | None:
        degs = [n for r in self.entries for e in r for n in e.degrees]
        return min(degs) if degs else None

    def __repr__(self):
        return f"SheafMorphism({self.source} -> {self.target}, {[list(r) for r in self.entries]})"


def compose(g: SheafMorphism, f: SheafMorphism) -> SheafMorphism:
    """g o f; ranges of the product are re-verified."""
    if g.source != f.target:
        raise ShapeMismatch(f"cannot compose: {f.target} != {g.source}")
    model = g.model
    rows = []
    for i in range(len(g.target)):
        row = []
        for j in range(len(f.source)):
            acc = model.zero()
            for m in range(len(g.source)):
                a, b = g.entries[i][m], f.entries[m][j]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            row.append(acc)
        rows.append(row)
    out = SheafMorphism(model, f.source, g.target, rows)
    bad = out.violations()
    if bad:
        raise RangeViolation(f"composite has entries outside their mandated range: {bad}")
    return out


# ---------------------------------------------------------------------------
# complexes


class SheafComplex:
    """Bounded chain complex; ``differentials[n]`` is d_n : C_n -> C_{n-1}."""

    __slots__ = ("model", "levels", "differentials")

    def __init__(self, model: GradedRingModel, levels: Mapping[int, TwistSum], differentials: Mapping[int, SheafMorphism] | None = None):
        lv = {int(n): X for n, X in levels.items() if len(X)}
        diffs = {}
        for n, d in (differentials or {}).items():
            n = int(n)
            if d.source != lv.get(n, TwistSum()) or d.target != lv.get(n - 1, TwistSum()):
                raise ShapeMismatch(f"d_{n} does not map C_{n} -> C_{n - 1}")
            if not d.is_zero():
                diffs[n] = d
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "levels", dict(sorted(lv.items())))
        object.__setattr__(self, "differentials", dict(sorted(diffs.items())))

    def __setattr__(self, key, value):
        raise AttributeError("SheafComplex is immutable")

    @classmethod
    def single(cls, model, X: TwistSum, degree: int = 0) -> "SheafComplex":
        return cls(model, {degree: X})

    @classmethod
    def from_morphism(cls, f: SheafMorphism, degree: int = 0) -> "SheafComplex":
        """Two-term complex target (degree) <- source (degree + 1)."""
        return cls(f.model, {degree: f.target, degree + 1: f.source}, {degree + 1: f})

    def level(self, n: int) -> TwistSum:
        return self.levels.get(n, TwistSum())

    def d(self, n: int) -> SheafMorphism:
        d = self.differentials.get(n)
        if d is None:
            return SheafMorphism.zero(self.model, self.level(n), self.level(n - 1))
        return d

    @property
    def lo(self) -> int:
        return min(self.levels) if self.levels else 0

    @property
    def hi(self) -> int:
        return max(self.levels) if self.levels else -1

    def is_zero(self) -> bool:
        return not self.levels

    def summands(self) -> Iterable[tuple[int, tuple[int, int]]]:
        for n, X in self.levels.items():
            for s in X:
                yield n, s

    def is_vect0(self) -> bool:
        return all(X.is_vect0() for X in self.levels.values())

    def twist(self, a: int, b: int) -> "SheafComplex":
        return SheafComplex(
            self.model,
            {n: X.twist(a, b) for n, X in self.levels.items()},
            {n: d.twist(a, b) for n, d in self.differentials.items()},
        )

    def shift(self, s: int) -> "SheafComplex":
        """C[s]_n = C_{n-s} with differential (-1)^s d."""
        sign = -1 if s % 2 else 1
        return SheafComplex(
            self.model,
            {n + s: X for n, X in self.levels.items()},
            {n + s: (d if sign == 1 else -d) for n, d in self.differentials.items()},
        )

    def direct_sum(self, other: "SheafComplex") -> "SheafComplex":
        if other.model is not self.model:
            raise ShapeMismatch("complexes over different ring models")
        ns = sorted(set(self.levels) | set(other.levels))
        levels = {n: self.level(n) + other.level(n) for n in ns}
        diffs = {}
        for n in ns:
            a, b = self.d(n), other.d(n)
            diffs[n] = SheafMorphism.block(
                self.model, [self.level(n), other.level(n)], [self.level(n - 1), other.level(n - 1)],
                [[a, None], [None, b]],
            )
        return SheafComplex(self.model, levels, diffs)

    def __repr__(self):
        parts = [f"[{n}] {X}" for n, X in self.levels.items()]
        return "SheafComplex(" + "; ".join(parts) + ")"

    def __eq__(self, other):
        if not isinstance(other, SheafComplex):
            return NotImplemented
        return self.model is other.model and self.levels == other.levels and self.differentials == other.differentials

    def __hash__(self):
        return hash((tuple(self.levels.items()), tuple(self.differentials.items())))


def twist(X, a: int, b: int):
    """theta_{a,b} on twist sums, morphisms and complexes."""
    if isinstance(X, TwistSum):
        return X.twist(a, b)
    if isinstance(X, (SheafMorphism, SheafComplex)):
        return X.twist(a, b)
    raise TypeError(f"cannot twist {type(X).__name__}")


@dataclass(frozen=True)
class ChainMap:
    source: SheafComplex
    target: SheafComplex
    components: Mapping[int, SheafMorphism] = dc_field(default_factory=dict)

    def at(self, n: int) -> SheafMorphism:
        f = self.components.get(n)
        if f is None:
            return SheafMorphism.zero(self.source.model, self.source.level(n), self.target.level(n))
        return f

    def degrees(self) -> list[int]:
        return sorted(set(self.source.levels) | set(self.target.levels))

    def check(self) -> None:
        for n in self.degrees():
            f = self.at(n)
            if f.source != self.source.level(n) or f.target != self.target.level(n):
                raise NotChainMap(f"component {n} has the wrong source/target")
            if not f.is_valid():
                raise NotChainMap(f"component {n} has out-of-range entries")
        for n in range(min(self.degrees(), default=0), max(self.degrees(), default=-1) + 2):
            lhs = compose(self.target.d(n), self.at(n))
            rhs = compose(self.at(n - 1), self.source.d(n))
            if lhs != rhs:
                raise NotChainMap(f"d f != f d in degree {n}")

    def twist(self, a: int, b: int) -> "ChainMap":
        return ChainMap(self.source.twist(a, b), self.target.twist(a, b), {n: f.twist(a, b) for n, f in self.components.items()})

    @classmethod
    def identity(cls, C: SheafComplex) -> "ChainMap":
        return cls(C, C, {n: SheafMorphism.identity(C.model, X) for n, X in C.levels.items()})

    @classmethod
    def from_morphism(cls, f: SheafMorphism, degree: int = 0) -> "ChainMap":
        return cls(SheafComplex.single(f.model, f.source, degree), SheafComplex.single(f.model, f.target, degree), {degree: f})


def cone(f) -> SheafComplex:
    """Mapping cone: Cone_n = Y_n (+) X_{n-1}, d = [[d_Y, f], [0, -d_X]].

    Accepts a ChainMap or a bare SheafMorphism (placed in degree 0).
    """
    if isinstance(f, SheafMorphism):
        f = ChainMap.from_morphism(f)
    f.check()
    X, Y = f.source, f.target
    model = X.model
    ns = set(Y.levels) | {n + 1 for n in X.levels}
    if not ns:
        return SheafComplex(model, {})
    lo, hi = min(ns), max(ns)
    levels = {n: Y.level(n) + X.level(n - 1) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi + 1):
        diffs[n] = SheafMorphism.block(
            model,
            [Y.level(n), X.level(n - 1)],
            [Y.level(n - 1), X.level(n - 2)],
            [[Y.d(n), f.at(n - 1)], [None, -X.d(n - 1)]],
        )
    C = SheafComplex(model, levels, diffs)
    rep = validate(C)
    if not rep:  # pragma: no cover - guaranteed by the chain-map check
        raise NotChainMap("; ".join(rep.problems))
    return C


@dataclass(frozen=True)
class R0FreeComplex:
    """Bounded complex of free right R_0-modules R_0^{rank_n}.

    ``differentials[n]`` is a rank_{n-1} x rank_n matrix of degree-0 ring
    elements acting by left multiplication on column vectors.
    """

    model: GradedRingModel
    ranks: Mapping[int, int]
    differentials: Mapping[int, Sequence[Sequence[RingElement]]] = dc_field(default_factory=dict)

    @classmethod
    def free(cls, model, rank: int, degree: int = 0) -> "R0FreeComplex":
        return cls(model, {degree: rank})


def psi(k: int, l: int, C: R0FreeComplex) -> SheafComplex:
    """Canonical sheaves functor: C |-> C (x) O(k, l)."""
    model = C.model
    levels = {n: TwistSum(((k, l),) * r) for n, r in C.ranks.items()}
    diffs = {}
    for n, mat in C.differentials.items():
        src, tgt = levels.get(n, TwistSum()), levels.get(n - 1, TwistSum())
        for row in mat:
            for e in row:
                if any(d != 0 for d in e.degrees):
                    raise ShapeMismatch("psi expects differentials with entries in R_0")
        diffs[n] = SheafMorphism(model, src, tgt, mat)
    return SheafComplex(model, levels, diffs)


@dataclass
class ValidationReport:
    problems: list[str] = dc_field(default_factory=list)

    def __bool__(self):
        return not self.problems

    @property
    def ok(self) -> bool:
        return not self.problems


def validate(X) -> ValidationReport:
    """Check entry ranges (and d o d = 0 for complexes); never raises."""
    rep = ValidationReport()
    if isinstance(X, SheafMorphism):
        for i, j, n in X.violations():
            lo, hi = X.entry_range(i, j)
            rep.problems.append(f"entry ({i},{j}) has degree {n} outside [{lo},{hi}]")
        return rep
    if isinstance(X, SheafComplex):
        for n, d in X.differentials.items():
            for i, j, deg in d.violations():
                lo, hi = d.entry_range(i, j)
                rep.problems.append(f"d_{n} entry ({i},{j}) has degree {deg} outside [{lo},{hi}]")
        if rep.problems:
            return rep
        for n in X.differentials:
            if (n - 1) in X.differentials:
                dd = compose(X.d(n - 1), X.d(n))
                if not dd.is_zero():
                    rep.problems.append(f"d_{n - 1} o d_{n} != 0")
        return rep
    raise TypeError(f"cannot validate {type(X).__name__}")


# ---------------------------------------------------------------------------
# cartesian square


def cartesian_sequence(model: GradedRingModel, k: int, l: int) -> tuple[SheafComplex, bool]:
    """0 -> O(k,l) -> O(k+1,l) + O(k,l+1) -> O(k+1,l+1) -> 0 and its exactness.

    Maps are (lambda over rho) and (-rho, lambda), all inclusions, i.e.
    multiplication by 1.  Exactness is checked degreewise on every
    component (-, 0, +) over a window around the twist parameters.
    """
    cx, _ = cartesian_sequence_complex(model, k, l)
    w = abs(k) + abs(l) + 3
    exact = all(
        degreewise_exact(cx, part, m) for part in ("-", "0", "+") for m in range(-w, w + 1)
    )
    return cx, exact


def _part_has(part: str, summand: tuple[int, int], m: int) -> bool:
    k, l = summand
    if part == "-":
        return m <= k
    if part == "+":
        return m >= -l
    return True


def degreewise_exact(cx: SheafComplex, part: str, m: int) -> bool:
    """Exactness of the part-component of a complex with degree-0 entries, in internal degree m."""
    model = cx.model
    dm = model.dim(m)
    dims, mats = {}, {}
    for n in range(cx.lo, cx.hi + 1):
        idx = [i for i, s in enumerate(cx.level(n)) if _part_has(part, s, m)]
        dims[n] = (idx, len(idx) * dm)
    for n in range(cx.lo, cx.hi + 2):
        d = cx.d(n)
        src_idx, src_dim = dims.get(n, ([], 0))
        tgt_idx, tgt_dim = dims.get(n - 1, ([], 0))
        M = model.field.zeros((tgt_dim, src_dim))
        for a, i in enumerate(tgt_idx):
            for b, j in enumerate(src_idx):
                e = d.entries[i][j]
                if any(deg != 0 for deg in e.degrees):
                    raise ValueError("degreewise_exact expects degree-0 entries")
                if not e.is_zero():
                    M[a * dm:(a + 1) * dm, b * dm:(b + 1) * dm] = left_mult_matrix(e, 0, m)
        mats[n] = M
    for n in range(cx.lo, cx.hi + 1):
        _, dim = dims[n]
        r_out = exactla.rank(model.field, mats[n]) if mats[n].size else 0
        r_in = exactla.rank(model.field, mats[n + 1]) if mats[n + 1].size else 0
        if dim - r_out - r_in != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# random generation


def random_element(model: GradedRingModel, lo: int, hi: int, rng: np.random.Generator, max_terms: int = 2) -> RingElement:
    """Random element supported in [lo, hi] (zero if the interval is empty)."""
    if lo > hi:
        return model.zero()
    degs = [n for n in range(lo, hi + 1) if model.dim(n)]
    if not degs:
        return model.zero()
    count = int(rng.integers(1, min(max_terms, len(degs)) + 1))
    chosen = rng.choice(len(degs), size=count, replace=False)
    sup = {}
    for c in sorted(int(x) for x in chosen):
        n = degs[c]
        sup[n] = model.field.random(rng, size=model.dim(n))
    return model.element(sup)


def random_morphism(model, source: TwistSum, target: TwistSum, rng, density: float = 0.7) -> SheafMorphism:
    rows = []
    for i in range(len(target)):
        row = []
        for j in range(len(source)):
            if rng.random() < density:
                lo, hi = hom_range(source[j], target[i])
                row.append(random_element(model, lo, hi, rng))
            else:
                row.append(model.zero())
        rows.append(row)
    return SheafMorphism(model, source, target, rows)


def random_twist_sum(model, rng, count: int, bounds: tuple[int, int], vect0: bool = False) -> TwistSum:
    lo, hi = bounds
    out = []
    for _ in range(count):
        k = int(rng.integers(lo, hi + 1))
        if vect0:
            l = int(rng.integers(max(lo, -1 - k), max(hi, -1 - k) + 1))
        else:
            l = int(rng.integers(lo, hi + 1))
        out.append((k, l))
    return TwistSum(tuple(out))


def _nonzero_scalar(model, rng):
    while True:
        c = model.field.random(rng)
        if c != 0:
            return c


def random_automorphism(model, X: TwistSum, rng, steps: int = 2, allow_units: bool = True) -> tuple[SheafMorphism, SheafMorphism, TwistSum]:
    """Random isomorphism phi: X -> X' with its inverse.

    Built from elementary matrices I + a E_ij, invertible scalars, and (for
    crossed products) multiplication by an invertible degree-1 element,
    which moves a summand O(k, l) to O(k+1, l-1).
    """
    phi = SheafMorphism.identity(model, X)
    inv = SheafMorphism.identity(model, X)
    target = X
    wit = _unit_witness(model) if allow_units else None
    n = len(X)
    for _ in range(steps):
        choice = rng.random()
        if n >= 2 and choice < 0.6:
            i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
            lo, hi = hom_range(target[j], target[i])
            a = random_element(model, lo, hi, rng)
            E, Einv = _elementary(model, target, i, j, a)
        elif wit is not None and choice < 0.8 and n >= 1:
            i = int(rng.integers(n))
            new = list(target.summands)
            k, l = new[i]
            up = rng.random() < 0.5
            new[i] = (k + 1, l - 1) if up else (k - 1, l + 1)
            new_target = TwistSum(tuple(new))
            u, uinv = (wit.unit, wit.inverse) if up else (wit.inverse, wit.unit)
            E = _diag(model, target, new_target, i, u)
            Einv = _diag(model, new_target, target, i, uinv)
            target = new_target
        elif n >= 1:
            i = int(rng.integers(n))
            c = _nonzero_scalar(model, rng)
            E = _diag(model, target, target, i, model.unit.scale(c))
            Einv = _diag(model, target, target, i, model.unit.scale(model.field.inv(c)))
        else:
            continue
        phi = compose(E, phi)
        inv = compose(inv, Einv)
    return phi, inv, target


_WITNESS_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _unit_witness(model):
    key = model
    if key not in _WITNESS_CACHE:
        try:
            w = crossed_product_witness(model)
        except Exception:  # noqa: BLE001 - windowed models may not reach degree +-1
            w = None
        _WITNESS_CACHE[key] = w if w else None
    return _WITNESS_CACHE[key]


def _elementary(model, X: TwistSum, i: int, j: int, a: RingElement):
    n = len(X)
    z, one = model.zero(), model.unit
    E = [[one if r == c else z for c in range(n)] for r in range(n)]
    F = [[one if r == c else z for c in range(n)] for r in range(n)]
    E[i][j] = a
    F[i][j] = -a
    return SheafMorphism(model, X, X, E), SheafMorphism(model, X, X, F)


def _diag(model, X: TwistSum, Y: TwistSum, i: int, u: RingElement) -> SheafMorphism:
    n = len(X)
    z, one = model.zero(), model.unit
    rows = [[(u if r == i else one) if r == c else z for c in range(n)] for r in range(n)]
    return SheafMorphism(model, X, Y, rows)


def conjugate(C: SheafComplex, autos: Mapping[int, tuple[SheafMorphism, SheafMorphism, TwistSum]]) -> tuple[SheafComplex, "ChainMap"]:
    """Transport C along levelwise isomorphisms; returns (C', phi: C -> C')."""
    model = C.model
    phis, invs, levels = {}, {}, {}
    for n, X in C.levels.items():
        if n in autos:
            phi, inv, Xp = autos[n]
        else:
            phi = inv = SheafMorphism.identity(model, X)
            Xp = X
        phis[n], invs[n], levels[n] = phi, inv, Xp
    diffs = {}
    for n, d in C.differentials.items():
        diffs[n] = compose(phis[n - 1], compose(d, invs[n]))
    Cp = SheafComplex(model, levels, diffs)
    return Cp, ChainMap(C, Cp, phis)


def random_complex(
    model: GradedRingModel,
    length: int,
    max_summands: int = 3,
    twist_bounds: tuple[int, int] = (-2, 2),
    seed: int = 0,
    vect0: bool = False,
) -> SheafComplex:
    """Reproducible random complex on chain levels 0..length.

    d o d = 0 holds by construction: the complex is a direct sum of single
    objects, two-term pieces A -> B and twisted cartesian sequences, then
    conjugated levelwise by random automorphisms.
    """
    rng = np.random.default_rng(seed)
    budget = {n: max_summands for n in range(length + 1)}
    pieces: list[SheafComplex] = []

    def take(ns, sizes):
        if all(budget[n] >= s for n, s in zip(ns, sizes)):
            for n, s in zip(ns, sizes):
                budget[n] -= s
            return True
        return False

    if length == 0:
        count = int(rng.integers(1, max_summands + 1))
        take([0], [count])
        pieces.append(SheafComplex.single(model, random_twist_sum(model, rng, count, twist_bounds, vect0), 0))
    for n in range(length, 0, -1):
        r = rng.random()
        if n >= 2 and r < 0.3:
            k = int(rng.integers(twist_bounds[0], twist_bounds[1] + 1))
            l = int(rng.integers(max(twist_bounds[0], -1 - k) if vect0 else twist_bounds[0], max(twist_bounds[1], -1 - k) + 1))
            if take([n, n - 1, n - 2], [1, 2, 1]):
                cx, _ = cartesian_sequence_complex(model, k, l)
                pieces.append(cx.shift(n - 2))
            continue
        if r < 0.9:
            a = int(rng.integers(1, 3))
            b = int(rng.integers(1, 3))
            if take([n, n - 1], [a, b]):
                A = random_twist_sum(model, rng, a, twist_bounds, vect0)
                B = random_twist_sum(model, rng, b, twist_bounds, vect0)
                f = random_morphism(model, A, B, rng)
                pieces.append(SheafComplex.from_morphism(f, n - 1))
    for n in range(length + 1):
        if budget[n] > 0 and rng.random() < 0.4:
            take([n], [1])
            pieces.append(SheafComplex.single(model, random_twist_sum(model, rng, 1, twist_bounds, vect0), n))
    if not pieces:
        pieces.append(SheafComplex.single(model, random_twist_sum(model, rng, 1, twist_bounds, vect0), 0))
    C = pieces[0]
    for P in pieces[1:]:
        C = C.direct_sum(P)
    autos = {n: random_automorphism(model, X, rng, steps=2, allow_units=False) for n, X in C.levels.items()}
    C, _ = conjugate(C, autos)
    return C


def cartesian_sequence_complex(model, k: int, l: int) -> tuple[SheafComplex, None]:
    one = model.unit
    A, B, C = O(k, l), O(k + 1, l) + O(k, l + 1), O(k + 1, l + 1)
    d2 = SheafMorphism(model, A, B, [[one], [one]])
    d1 = SheafMorphism(model, B, C, [[-one, one]])
    return SheafComplex(model, {2: A, 1: B, 0: C}, {2: d2, 1: d1}), None


def random_isomorphism(model, C: SheafComplex, rng, steps: int = 3) -> "ChainMap":
    """Random chain isomorphism out of C (units of degree 1 used when available).

    Draws are repeated a few times to avoid returning the identity, which
    happens easily over small fields or with one-summand levels.
    """
    for _ in range(8):
        autos = {n: random_automorphism(model, X, rng, steps=steps) for n, X in C.levels.items()}
        _, phi = conjugate(C, autos)
        if any(phi.at(n) != SheafMorphism.identity(model, X) for n, X in C.levels.items()):
            break
    return phi
