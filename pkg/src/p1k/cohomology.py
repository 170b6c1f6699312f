"""Cech cohomology of twist sums, global sections and hypercohomology.

For O(k, l) the Cech complex is R_{<=k} + R_{>=-l} -> R, (a, b) -> a - b.
Degreewise it is R_n + R_n -> R_n, R_n -> R_n or 0 -> R_n, so

    H^0 = sum of R_n for -l <= n <= k,      H^1 = sum of R_n for k < n < -l.

Both carry the right R_0-action by right multiplication.  Cohomology
classes are recorded in K_0(R_0) as multiplicities of the simple modules
attached to the model's central idempotents, or as plain k_0-dimension
when the model supplies none.
"""

from __future__ import annotations

import os
import weakref
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import exactla
from .errors import NonIntegralMultiplicity, NotVect0, ShapeMismatch, TruncationUnstable
from .graded_ring import GradedRingModel, RingElement, left_mult_matrix, right_mult_matrix
from .sheaf import SheafComplex, SheafMorphism, TwistSum

DEFAULT_WINDOW_CAP = 16
STABILITY_STEP = 4


# ---------------------------------------------------------------------------
# K_0(R_0)


@dataclass(frozen=True)
class K0Class:
    """Integer combination of simple R_0-modules; ``simple_dims[i]`` is dim_{k_0} S_i."""

    mults: tuple
    simple_dims: tuple

    def __post_init__(self):
        if len(self.mults) != len(self.simple_dims):
            raise ShapeMismatch("multiplicity vector and simple dimensions differ in length")
        object.__setattr__(self, "mults", tuple(_normalize(x) for x in self.mults))

    @classmethod
    def zero(cls, model: GradedRingModel) -> "K0Class":
        sd = simple_dims(model)
        return cls((0,) * len(sd), sd)

    @property
    def dim(self):
        return _normalize(sum(m * s for m, s in zip(self.mults, self.simple_dims)))

    def _check(self, other):
        if not isinstance(other, K0Class) or other.simple_dims != self.simple_dims:
            raise ShapeMismatch("K0 classes over different block structures")

    def __add__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(tuple(a + b for a, b in zip(self.mults, other.mults)), self.simple_dims)

    def __sub__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(tuple(a - b for a, b in zip(self.mults, other.mults)), self.simple_dims)

    def __neg__(self) -> "K0Class":
        return K0Class(tuple(-a for a in self.mults), self.simple_dims)

    def __mul__(self, n) -> "K0Class":
        return K0Class(tuple(a * n for a in self.mults), self.simple_dims)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.mults)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.mults)

    def __str__(self):
        if len(self.mults) == 1:
            return str(self.mults[0])
        return "(" + ", ".join(str(a) for a in self.mults) + ")"


def _normalize(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    return int(x)


def simple_dims(model: GradedRingModel) -> tuple:
    if model.idempotents:
        return tuple(int(b.simple_dim) for b in model.idempotents)
    return (1,)


# ---------------------------------------------------------------------------
# right R_0-modules


class R0Module:
    """Finite-dimensional right R_0-module.

    ``action[b]`` is the matrix of m -> m * b_b on column vectors, one per
    basis element of R_0; right action means A(x) A(y) = A(y x).
    """

    __slots__ = ("model", "dim", "action")

    def __init__(self, model: GradedRingModel, dim: int, action: Sequence[np.ndarray]):
        d0 = model.dim(0)
        if len(action) != d0:
            raise ShapeMismatch(f"expected {d0} action matrices, got {len(action)}")
        mats = []
        for A in action:
            A = np.asarray(A, dtype=model.field.dtype)
            if A.shape != (dim, dim):
                raise ShapeMismatch(f"action matrix has shape {A.shape}, expected {(dim, dim)}")
            A.setflags(write=False)
            mats.append(A)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "action", tuple(mats))

    def __setattr__(self, key, value):
        raise AttributeError("R0Module is immutable")

    @classmethod
    def zero(cls, model) -> "R0Module":
        return cls(model, 0, [model.field.zeros((0, 0))] * model.dim(0))

    @classmethod
    def component(cls, model, n: int) -> "R0Module":
        """R_n with right multiplication."""
        d = model.dim(n)
        return cls(model, d, [right_mult_matrix(b, n, 0) for b in model.component_elements(0)])

    @classmethod
    def free(cls, model, rank: int) -> "R0Module":
        return direct_sum([cls.component(model, 0)] * rank, model)

    def action_of(self, x: RingElement) -> np.ndarray:
        """Matrix of right multiplication by the degree-0 part of x."""
        f = self.model.field
        out = f.zeros((self.dim, self.dim))
        for c, A in zip(x.component(0), self.action):
            if c != 0:
                out = f.reduce(out + A * c)
        return out

    def validate(self) -> bool:
        """Check the unit law and A(b_j) A(b_i) = A(b_i b_j) on a basis."""
        model, f = self.model, self.model.field
        if not exactla.Mat(f, self.action_of(model.unit)) == exactla.Mat.identity(f, self.dim):
            return False
        T = model.mul_tensor(0, 0)
        d0 = model.dim(0)
        for i in range(d0):
            for j in range(d0):
                lhs = exactla.matmul(f, self.action[j], self.action[i])
                rhs = f.zeros((self.dim, self.dim))
                for k in range(d0):
                    if T[i, j, k] != 0:
                        rhs = f.reduce(rhs + self.action[k] * T[i, j, k])
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def __repr__(self):
        return f"R0Module(dim={self.dim})"


def direct_sum(mods: Sequence[R0Module], model: GradedRingModel | None = None) -> R0Module:
    if not mods:
        if model is None:
            raise ValueError("direct_sum of nothing needs a model")
        return R0Module.zero(model)
    model = mods[0].model
    n = sum(M.dim for M in mods)
    mats = []
    for b in range(model.dim(0)):
        A = model.field.zeros((n, n))
        o = 0
        for M in mods:
            A[o:o + M.dim, o:o + M.dim] = M.action[b]
            o += M.dim
        mats.append(A)
    return R0Module(model, n, mats)


def _block_rank(field, E: np.ndarray) -> int:
    return exactla.rank(field, E) if E.size else 0


def _class_from_ranks(model: GradedRingModel, ranks: Sequence[int], what: str) -> K0Class:
    sd = simple_dims(model)
    mults = []
    for r, s in zip(ranks, sd):
        if r % s:
            raise NonIntegralMultiplicity(f"{what}: block dimension {r} not divisible by simple dimension {s}")
        mults.append(r // s)
    return K0Class(tuple(mults), sd)


def k0_class(M: R0Module) -> K0Class:
    """Multiplicities dim(M e_i) / dim S_i; total dimension without idempotent data."""
    model = M.model
    if not model.idempotents:
        return K0Class((M.dim,), (1,))
    if M.dim == 0:
        return K0Class.zero(model)
    ranks = [_block_rank(model.field, M.action_of(b.central)) for b in model.idempotents]
    if sum(ranks) != M.dim:
        raise NonIntegralMultiplicity(f"central idempotents do not decompose a module of dimension {M.dim}")
    return _class_from_ranks(model, ranks, "k0_class")


# ---------------------------------------------------------------------------
# tensor products with R_k


@dataclass(frozen=True)
class QuotientModule:
    """V / W with V = k_0^n, W the column span of ``relations``; ``action`` acts on V."""

    model: GradedRingModel
    ambient: int
    relations: np.ndarray
    action: tuple

    def _action_of(self, x: RingElement) -> np.ndarray:
        f = self.model.field
        out = f.zeros((self.ambient, self.ambient))
        for c, A in zip(x.component(0), self.action):
            if c != 0:
                out = f.reduce(out + A * c)
        return out

    @property
    def dim(self) -> int:
        return self.ambient - _block_rank(self.model.field, self.relations)

    def k0_class(self) -> K0Class:
        model, f = self.model, self.model.field
        if not model.idempotents:
            return K0Class((self.dim,), (1,))
        rw = _block_rank(f, self.relations)
        ranks = []
        for b in model.idempotents:
            E = self._action_of(b.central)
            ranks.append(_block_rank(f, np.hstack([self.relations, E])) - rw)
        return _class_from_ranks(model, ranks, "tensor class")


def _tensor_relations(M: R0Module, k: int) -> tuple[np.ndarray, list[np.ndarray]]:
    model, f = M.model, M.model.field
    dk = model.dim(k)
    m = M.dim
    basis0 = model.component_elements(0)
    Ik, Im = f.array(np.eye(dk, dtype=np.int64)), f.array(np.eye(m, dtype=np.int64))
    rels = []
    for b, A in zip(basis0, M.action):
        Lb = left_mult_matrix(b, 0, k)
        rels.append(f.reduce(np.kron(A, Ik) - np.kron(Im, Lb)))
    W = np.hstack(rels) if rels else f.zeros((m * dk, 0))
    act = [f.reduce(np.kron(Im, right_mult_matrix(b, k, 0))) for b in basis0]
    return W, act


def tensor_component(M: R0Module, k: int) -> QuotientModule:
    """M (x)_{R_0} R_k presented as (M (x) R_k) / <m b (x) r - m (x) b r>."""
    W, act = _tensor_relations(M, k)
    return QuotientModule(M.model, M.dim * M.model.dim(k), W, tuple(act))


# ---------------------------------------------------------------------------
# bimodule pairing K_0(R_0) x {classes of R_n} -> K_0(R_0)

_PAIRING_CACHE: "weakref.WeakKeyDictionary[GradedRingModel, dict]" = weakref.WeakKeyDictionary()
_CHI_CACHE: "weakref.WeakKeyDictionary[GradedRingModel, dict]" = weakref.WeakKeyDictionary()


def pairing_row(model: GradedRingModel, n: int) -> tuple:
    """Row i is the class of S_i (x)_{R_0} R_n = f_i R_n, f_i primitive.

    Without idempotent data the factor dim R_n / dim R_0 is returned.
    """
    cache = _PAIRING_CACHE.setdefault(model, {})
    row = cache.get(n)
    if row is not None:
        return row
    if not model.idempotents:
        row = (Fraction(model.dim(n), model.dim(0)),)
    else:
        f = model.field
        out = []
        for blk in model.idempotents:
            Lf = left_mult_matrix(blk.primitive, 0, n)
            ranks = []
            for cb in model.idempotents:
                Re = right_mult_matrix(cb.central, n, 0)
                ranks.append(_block_rank(f, exactla.matmul(f, Lf, Re)))
            out.append(_class_from_ranks(model, ranks, "pairing"))
        row = tuple(out)
    cache[n] = row
    return row


def pair_with_component(c: K0Class, model: GradedRingModel, n: int) -> K0Class:
    row = pairing_row(model, n)
    if not model.idempotents:
        return K0Class((c.mults[0] * row[0],), (1,))
    acc = K0Class.zero(model)
    for ci, r in zip(c.mults, row):
        acc = acc + r * ci
    return acc


def chi_bands(k: int, l: int) -> tuple[int, range]:
    """Sign and degree band whose R_n classes sum to chi(O(k, l))."""
    if k + l >= 0:
        return 1, range(-l, k + 1)
    return -1, range(k + 1, -l)


def pair_with_chi(c: K0Class, model: GradedRingModel, k: int, l: int) -> K0Class:
    """c . chi(O(k, l)), chi(O(k, l)) = [H^0] - [H^1] as a bimodule class."""
    sign, band = chi_bands(k, l)
    acc = K0Class.zero(model) if model.idempotents else K0Class((0,), (1,))
    for n in band:
        acc = acc + pair_with_component(c, model, n)
    return acc * sign


# ---------------------------------------------------------------------------
# cohomology of twist sums


def h0_band(k: int, l: int) -> range:
    return range(-l, k + 1)


def h1_band(k: int, l: int) -> range:
    return range(k + 1, -l)


def _band_layout(model, X: TwistSum, band) -> tuple[list[tuple[int, int, int]], int]:
    """Rows (summand, degree, offset) of the direct sum of bands; total dimension."""
    rows, off = [], 0
    for i, (k, l) in enumerate(X):
        for n in band(k, l):
            rows.append((i, n, off))
            off += model.dim(n)
    return rows, off


def _band_module(model, X: TwistSum, band) -> R0Module:
    return direct_sum([R0Module.component(model, n) for (_, n, _) in _band_layout(model, X, band)[0]], model)


def coh_object(model: GradedRingModel, k: int, l: int) -> tuple[R0Module, R0Module]:
    """(H^0, H^1) of O(k, l)."""
    return coh_sum(model, TwistSum(((k, l),)))


def coh_sum(model: GradedRingModel, X: TwistSum) -> tuple[R0Module, R0Module]:
    return _band_module(model, X, h0_band), _band_module(model, X, h1_band)


def coh_dims(model: GradedRingModel, k: int, l: int) -> tuple[int, int]:
    return sum(model.dim(n) for n in h0_band(k, l)), sum(model.dim(n) for n in h1_band(k, l))


def coh_map(f: SheafMorphism, q: int) -> np.ndarray:
    """Induced map on H^q in the band bases of coh_sum.

    On H^1 the product is projected onto the target band: a degree outside
    [k'+1, -l'-1] is at most k' or at least -l', so that component lies in
    the image of R_{<=k'} + R_{>=-l'} and vanishes in the cokernel.
    """
    if q not in (0, 1):
        raise ValueError("q must be 0 or 1")
    model = f.model
    band = h0_band if q == 0 else h1_band
    src_rows, sdim = _band_layout(model, f.source, band)
    tgt_rows, tdim = _band_layout(model, f.target, band)
    where = {(i, n): off for i, n, off in tgt_rows}
    M = model.field.zeros((tdim, sdim))
    for j, n, soff in src_rows:
        dn = model.dim(n)
        for i in range(len(f.target)):
            a = f.entries[i][j]
            for s in a.degrees:
                toff = where.get((i, n + s))
                if toff is None:
                    if q == 0:  # pragma: no cover - ruled out by entry ranges
                        raise AssertionError("H^0 image left the target band")
                    continue
                blk = left_mult_matrix(a, s, n)
                M[toff:toff + blk.shape[0], soff:soff + dn] = model.field.reduce(
                    M[toff:toff + blk.shape[0], soff:soff + dn] + blk
                )
    return M


# ---------------------------------------------------------------------------
# complexes of R_0-modules


@dataclass(frozen=True)
class R0Complex:
    """Bounded complex of right R_0-modules; ``differentials[n]`` : C_n -> C_{n-1}."""

    model: GradedRingModel
    levels: Mapping[int, R0Module]
    differentials: Mapping[int, np.ndarray] = dc_field(default_factory=dict)

    def level(self, n: int) -> R0Module:
        return self.levels.get(n) or R0Module.zero(self.model)

    def d(self, n: int) -> np.ndarray:
        D = self.differentials.get(n)
        if D is None:
            return self.model.field.zeros((self.level(n - 1).dim, self.level(n).dim))
        return D

    def degrees(self) -> range:
        if not self.levels:
            return range(0)
        return range(min(self.levels), max(self.levels) + 1)

    def is_complex(self) -> bool:
        f = self.model.field
        for n in self.degrees():
            if self.level(n + 1).dim and self.level(n - 1).dim:
                if np.any(exactla.matmul(f, self.d(n), self.d(n + 1)) != 0):
                    return False
        return True

    def homology_dims(self) -> dict[int, int]:
        f = self.model.field
        out = {}
        for n in self.degrees():
            out[n] = self.level(n).dim - _block_rank(f, self.d(n)) - _block_rank(f, self.d(n + 1))
        return out

    def homology_classes(self) -> dict[int, K0Class]:
        model, f = self.model, self.model.field
        if not model.idempotents:
            return {n: K0Class((h,), (1,)) for n, h in self.homology_dims().items()}
        out = {}
        degs = list(self.degrees())
        E = {n: [self.level(n).action_of(b.central) for b in model.idempotents] for n in degs + [degs[-1] + 1] if degs}
        for n in degs:
            ranks = []
            for i in range(len(model.idempotents)):
                En = E[n][i]
                r = _block_rank(f, En)
                r -= _block_rank(f, exactla.matmul(f, self.d(n), En)) if self.level(n - 1).dim else 0
                if self.level(n + 1).dim:
                    r -= _block_rank(f, exactla.matmul(f, self.d(n + 1), E[n + 1][i]))
                ranks.append(r)
            out[n] = _class_from_ranks(model, ranks, "homology class")
        return out

    def is_acyclic(self) -> bool:
        return all(h == 0 for h in self.homology_dims().values())

    def euler_class(self) -> K0Class:
        acc = K0Class.zero(self.model) if self.model.idempotents else K0Class((0,), (1,))
        for n, M in self.levels.items():
            c = k0_class(M)
            acc = acc + c if n % 2 == 0 else acc - c
        return acc


def require_vect0(Y: SheafComplex) -> None:
    for n, X in Y.levels.items():
        for s in X:
            if s[0] + s[1] < -1:
                raise NotVect0(s, n)


def gamma(Y: SheafComplex) -> R0Complex:
    """Global sections of a Vect_0 complex, levelwise H^0 with induced maps."""
    require_vect0(Y)
    model = Y.model
    levels = {n: coh_sum(model, X)[0] for n, X in Y.levels.items()}
    diffs = {n: coh_map(d, 0) for n, d in Y.differentials.items()}
    return R0Complex(model, levels, diffs)


# ---------------------------------------------------------------------------
# hypercohomology


@dataclass(frozen=True)
class Hypercohomology:
    """Homology of the Cech total complex by total degree (chain degree minus Cech degree)."""

    dims: Mapping[int, int]
    classes: Mapping[int, K0Class] | None
    pad: int

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.dims.values())

    def nonzero(self) -> dict[int, int]:
        return {t: v for t, v in self.dims.items() if v}


def window_cap() -> int:
    raw = os.environ.get("P1K_WINDOW_CAP")
    if not raw:
        return DEFAULT_WINDOW_CAP
    cap = int(raw)
    if not 0 <= cap <= 64:
        raise ValueError("P1K_WINDOW_CAP must lie in [0, 64]")
    return cap


def _level_windows(Y: SheafComplex, pad: int) -> dict[int, tuple[int, int]]:
    """Internal-degree windows [L_p, H_p] per chain level.

    Everything below L_p in R_{<=k} and R, and everything above H_p in
    R_{>=-l} and R, forms a subcomplex on which the Cech map is an
    isomorphism; the conditions L_p <= L_{p-1} - max deg(d_p) and
    H_p >= H_{p-1} - min deg(d_p) make those pieces closed under d.
    """
    out = {}
    prev = None
    for p in range(Y.lo, Y.hi + 1):
        X = Y.level(p)
        if len(X):
            L = min(min(-l, k + 1) for k, l in X) - pad
            H = max(max(k, -l - 1) for k, l in X) + pad
        else:
            L, H = prev if prev is not None else (0, 0)
        d = Y.differentials.get(p)
        if d is not None and prev is not None:
            L = min(L, prev[0] - d.max_support())
            H = max(H, prev[1] - d.min_support())
        out[p] = (L, H)
        prev = (L, H)
    return out


class _Blocks:
    """Index of a direct sum of graded pieces (summand, degree) -> offset."""

    def __init__(self, model, pieces):
        self.where = {}
        off = 0
        for i, n in pieces:
            self.where[(i, n)] = off
            off += model.dim(n)
        self.pieces = list(pieces)
        self.dim = off


def _cech_levels(model, Y: SheafComplex, win):
    minus, plus, zero = {}, {}, {}
    for p in range(Y.lo - 2, Y.hi + 3):
        X = Y.level(p)
        L, H = win.get(p, (0, -1))
        minus[p] = _Blocks(model, [(i, n) for i, (k, l) in enumerate(X) for n in range(L, k + 1)])
        plus[p] = _Blocks(model, [(i, n) for i, (k, l) in enumerate(X) for n in range(-l, H + 1)])
        zero[p] = _Blocks(model, [(i, n) for i in range(len(X)) for n in range(L, H + 1)])
    return minus, plus, zero


def _mult_block(model, d: SheafMorphism, S: _Blocks, T: _Blocks) -> np.ndarray:
    """Left multiplication by d between windowed pieces; images leaving T are dropped."""
    f = model.field
    M = f.zeros((T.dim, S.dim))
    for (j, n) in S.pieces:
        soff = S.where[(j, n)]
        dn = model.dim(n)
        for i in range(len(d.target)):
            a = d.entries[i][j]
            for s in a.degrees:
                toff = T.where.get((i, n + s))
                if toff is None:
                    continue
                blk = left_mult_matrix(a, s, n)
                M[toff:toff + blk.shape[0], soff:soff + dn] = f.reduce(
                    M[toff:toff + blk.shape[0], soff:soff + dn] + blk
                )
    return M


def _inclusion(model, S: _Blocks, T: _Blocks, sign: int) -> np.ndarray:
    f = model.field
    M = f.zeros((T.dim, S.dim))
    for key, soff in S.where.items():
        toff = T.where.get(key)
        if toff is None:  # pragma: no cover - windows nest by construction
            continue
        d = model.dim(key[1])
        for r in range(d):
            M[toff + r, soff + r] = f(sign)
    return M


def _right_action(model, B: _Blocks, e: RingElement) -> np.ndarray:
    f = model.field
    M = f.zeros((B.dim, B.dim))
    for (i, n), off in B.where.items():
        d = model.dim(n)
        M[off:off + d, off:off + d] = right_mult_matrix(e, n, 0)
    return M


def total_complex(Y: SheafComplex, pad: int = 0):
    """Windowed Cech total complex: (dims, differentials, blocks) keyed by total degree.

    T_t = (Y^-_t + Y^+_t) + Y^0_{t+1} and
    D_t = [[d_t, 0], [cech_t, -d_{t+1}]] with cech(a, b) = a - b.
    """
    model = Y.model
    win = _level_windows(Y, pad)
    minus, plus, zero = _cech_levels(model, Y, win)
    f = model.field
    ts = range(Y.lo - 1, Y.hi + 1)

    def dims(t):
        return minus[t].dim + plus[t].dim, zero[t + 1].dim

    D = {}
    for t in list(ts) + [Y.hi + 1]:
        a0, a1 = dims(t)
        b0, b1 = dims(t - 1)
        M = f.zeros((b0 + b1, a0 + a1))
        d = Y.differentials.get(t)
        if d is not None:
            dm = _mult_block(model, d, minus[t], minus[t - 1])
            dp = _mult_block(model, d, plus[t], plus[t - 1])
            M[: minus[t - 1].dim, : minus[t].dim] = dm
            M[minus[t - 1].dim: b0, minus[t].dim: a0] = dp
        M[b0:, : minus[t].dim] = _inclusion(model, minus[t], zero[t], 1)
        M[b0:, minus[t].dim: a0] = _inclusion(model, plus[t], zero[t], -1)
        d1 = Y.differentials.get(t + 1)
        if d1 is not None:
            M[b0:, a0:] = f.reduce(-_mult_block(model, d1, zero[t + 1], zero[t]))
        D[t] = M
    blocks = {t: (minus[t], plus[t], zero[t + 1]) for t in [Y.lo - 2] + list(ts) + [Y.hi + 1]}
    return {t: sum(dims(t)) for t in list(ts) + [Y.hi + 1]}, D, blocks


def _hyper_once(Y: SheafComplex, pad: int, want_classes: bool) -> tuple[dict, dict | None]:
    model, f = Y.model, Y.model.field
    dims, D, blocks = total_complex(Y, pad)
    ts = list(range(Y.lo - 1, Y.hi + 1))
    ranks = {t: _block_rank(f, D[t]) for t in ts + [Y.hi + 1]}
    out = {t: dims[t] - ranks[t] - ranks[t + 1] for t in ts}
    if not want_classes:
        return out, None
    if not model.idempotents:
        return out, {t: K0Class((h,), (1,)) for t, h in out.items()}

    def E(t, e):
        mb, pb, zb = blocks[t]
        parts = [_right_action(model, B, e) for B in (mb, pb, zb)]
        n = sum(p.shape[0] for p in parts)
        M = f.zeros((n, n))
        o = 0
        for p in parts:
            M[o:o + p.shape[0], o:o + p.shape[0]] = p
            o += p.shape[0]
        return M

    classes = {}
    Es = {t: [E(t, b.central) for b in model.idempotents] for t in [ts[0] - 1] + ts + [Y.hi + 1]}
    for t in ts:
        ranks_i = []
        for i in range(len(model.idempotents)):
            ranks_i.append(_block_homology_rank(f, D, Es, t, i))
        classes[t] = _class_from_ranks(model, ranks_i, "hypercohomology class")
    return out, classes


def _coordinate_projection(E: np.ndarray) -> np.ndarray | None:
    """Indices kept by E when E is a diagonal 0/1 matrix, else None."""
    if E.size == 0:
        return np.zeros(0, dtype=np.int64)
    if np.count_nonzero(E) != np.count_nonzero(np.diagonal(E)):
        return None
    diag = np.diagonal(E)
    if not all(x == 0 or x == 1 for x in diag):
        return None
    return np.flatnonzero(np.array([x == 1 for x in diag], dtype=bool))


def _restricted_rank(f, D: np.ndarray, E_src: np.ndarray, E_tgt: np.ndarray) -> int:
    """rank(D E_src) for a chain map D commuting with the idempotents."""
    if D.size == 0:
        return 0
    cols = _coordinate_projection(E_src)
    rows = _coordinate_projection(E_tgt)
    if cols is not None and rows is not None:
        sub = D[np.ix_(rows, cols)]
        return _block_rank(f, sub)
    return _block_rank(f, exactla.matmul(f, D, E_src))


def _block_homology_rank(f, D, Es, t, i) -> int:
    """dim of the homology of T e_i in total degree t."""
    Et = Es[t][i]
    idx = _coordinate_projection(Et)
    r = len(idx) if idx is not None else _block_rank(f, Et)
    if (t - 1) in Es:
        r -= _restricted_rank(f, D[t], Et, Es[t - 1][i])
    elif D[t].size:
        r -= _block_rank(f, exactla.matmul(f, D[t], Et))
    r -= _restricted_rank(f, D[t + 1], Es[t + 1][i], Et)
    return r


def hypercoh(Y: SheafComplex, classes: bool = False, pad: int = 0) -> Hypercohomology:
    """Hypercohomology dims (and optionally K_0 classes) per total degree.

    The window is certified by recomputing with the padding enlarged by
    4 and requiring equal dims; the padding grows up to the cap
    (P1K_WINDOW_CAP, default 16) before TruncationUnstable is raised.
    """
    if Y.is_zero():
        return Hypercohomology({}, {} if classes else None, pad)
    cap = window_cap()
    cur = pad
    dims, cls = _hyper_once(Y, cur, classes)
    while True:
        if cur + STABILITY_STEP > pad + cap:
            raise TruncationUnstable(f"hypercohomology did not stabilise within padding {pad + cap}")
        nxt, ncls = _hyper_once(Y, cur + STABILITY_STEP, classes)
        if nxt == dims and ncls == cls:
            return Hypercohomology(dims, cls, cur)
        cur += STABILITY_STEP
        dims, cls = nxt, ncls


# ---------------------------------------------------------------------------
# Euler characteristics and the twist theorem


def chi_class(model: GradedRingModel, k: int, l: int) -> K0Class:
    cache = _CHI_CACHE.setdefault(model, {})
    c = cache.get((k, l))
    if c is None:
        h0, h1 = coh_object(model, k, l)
        c = cache[(k, l)] = k0_class(h0) - k0_class(h1)
    return c


def euler(Y, k: int = 0, l: int = 0) -> K0Class:
    """Sum over chain levels n and summands of (-1)^n ([H^0] - [H^1]) of the (k, l) twist."""
    if isinstance(Y, TwistSum):
        raise TypeError("euler expects a SheafComplex; wrap objects with SheafComplex.single")
    model = Y.model
    acc = K0Class.zero(model) if model.idempotents else K0Class((0,), (1,))
    for n, X in Y.levels.items():
        for a, b in X:
            c = chi_class(model, a + k, b + l)
            acc = acc + c if n % 2 == 0 else acc - c
    return acc


@dataclass(frozen=True)
class TwistCheck:
    holds: bool
    lhs: tuple
    rhs: tuple

    def __bool__(self):
        return self.holds


def _quotient_complex_classes(model, V: dict[int, int], W: dict[int, np.ndarray], D: dict[int, np.ndarray], act: dict[int, list]) -> tuple[dict, dict]:
    """Homology of the quotient complex V_n / W_n with D_n(W_n) inside W_{n-1}."""
    f = model.field
    ns = sorted(V)
    rw = {n: _block_rank(f, W[n]) for n in ns}

    def img(n, E=None):
        if n not in D or (n - 1) not in V:
            return 0
        M = D[n] if E is None else exactla.matmul(f, D[n], E)
        return _block_rank(f, np.hstack([M, W[n - 1]])) - rw[n - 1]

    dims = {n: (V[n] - rw[n]) - img(n) - img(n + 1) for n in ns}
    if not model.idempotents:
        return dims, {n: K0Class((h,), (1,)) for n, h in dims.items()}
    classes = {}
    for n in ns:
        ranks = []
        for i, blk in enumerate(model.idempotents):
            E = act[n][i]
            r = _block_rank(f, np.hstack([W[n], E])) - rw[n]
            r -= img(n, E)
            if n + 1 in V:
                r -= img(n + 1, act[n + 1][i])
            ranks.append(r)
        classes[n] = _class_from_ranks(model, ranks, "tensor homology class")
    return dims, classes


def tensor_complex_homology(G: R0Complex, k: int) -> tuple[dict, dict]:
    """Homology of G (x)_{R_0} R_k, with differentials d (x) 1 on the presentations."""
    model, f = G.model, G.model.field
    dk = model.dim(k)
    Ik = f.array(np.eye(dk, dtype=np.int64))
    V, W, D, act = {}, {}, {}, {}
    for n in G.degrees():
        M = G.level(n)
        Wn, actn = _tensor_relations(M, k)
        V[n], W[n] = M.dim * dk, Wn
        if model.idempotents:
            act[n] = [_comb(model, actn, b.central) for b in model.idempotents]
    for n in G.degrees():
        if n - 1 in V:
            D[n] = f.reduce(np.kron(G.d(n), Ik))
    return _quotient_complex_classes(model, V, W, D, act)


def _comb(model, mats, x: RingElement):
    f = model.field
    n = mats[0].shape[0] if mats else 0
    out = f.zeros((n, n))
    for c, A in zip(x.component(0), mats):
        if c != 0:
            out = f.reduce(out + A * c)
    return out


def twist_theorem_check(Y, k: int) -> TwistCheck:
    """H^q(Y(k, -k)) against H^q(Y) (x)_{R_0} R_k.

    Single objects are compared summandwise on H^0 and H^1 through
    coh_object on one side and the explicit tensor presentation on the
    other.  Vect_0 complexes are compared on homology: hypercohomology of
    the twist against homology of gamma(Y) (x) R_k.
    """
    if isinstance(Y, TwistSum):
        raise TypeError("pass a SheafComplex (SheafComplex.single wraps an object)")
    model = Y.model
    if len(Y.levels) <= 1 and not Y.differentials:
        X = Y.level(Y.lo) if Y.levels else TwistSum()
        lhs, rhs = [], []
        for q in (0, 1):
            Ml = coh_sum(model, X.twist(k, -k))[q]
            Mr = tensor_component(coh_sum(model, X)[q], k)
            lhs.append((Ml.dim, k0_class(Ml)))
            rhs.append((Mr.dim, Mr.k0_class()))
        return TwistCheck(lhs == rhs, tuple(lhs), tuple(rhs))
    require_vect0(Y)
    left = hypercoh(Y.twist(k, -k), classes=True)
    ldims = {t: v for t, v in left.dims.items() if v}
    lcls = {t: c for t, c in left.classes.items() if not c.is_zero()}
    rd, rc = tensor_complex_homology(gamma(Y), k)
    rdims = {t: v for t, v in rd.items() if v}
    rcls = {t: c for t, c in rc.items() if not c.is_zero()}
    holds = ldims == rdims and lcls == rcls
    return TwistCheck(holds, (ldims, lcls), (rdims, rcls))


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class CohomologyCell:
    k: int
    l: int
    h0: int
    h1: int
    c0: K0Class
    c1: K0Class


@dataclass(frozen=True)
class CohomologyTable:
    cells: tuple

    @classmethod
    def compute(cls, model: GradedRingModel, k_range: Sequence[int], l_range: Sequence[int]) -> "CohomologyTable":
        out = []
        for k in k_range:
            for l in l_range:
                h0, h1 = coh_object(model, k, l)
                out.append(CohomologyCell(k, l, h0.dim, h1.dim, k0_class(h0), k0_class(h1)))
        return cls(tuple(out))

    def __len__(self):
        return len(self.cells)

    def lookup(self, k: int, l: int) -> CohomologyCell:
        for c in self.cells:
            if c.k == k and c.l == l:
                return c
        raise KeyError((k, l))

    def to_csv(self) -> str:
        lines = ["k,l,h0,h1,h0_class,h1_class"]
        for c in self.cells:
            lines.append(f"{c.k},{c.l},{c.h0},{c.h1},{_csv_class(c.c0)},{_csv_class(c.c1)}")
        return "\n".join(lines) + "\n"


def _csv_class(c: K0Class) -> str:
    return ";".join(str(a) for a in c.mults)
