"""Weak equivalences, acyclicity and the K_0 splitting of Vect_0 complexes.

Every Vect_0 complex Y has a class (c, d) in K_0(R_0)^2 with

    [Y] = [Psi_{-1,0}(c)] + [Psi_{0,0}(d)].

Global sections recover d, and global sections of the (1, 0) twist
recover c once the contribution d (x) H^0(O(1, 0)) = d + d (x) R_1 is
removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import exactla
from .cohomology import (
    K0Class,
    R0Complex,
    R0Module,
    coh_sum,
    coh_map,
    euler,
    gamma,
    pair_with_chi,
    require_vect0,
    tensor_component,
)
from .sheaf import ChainMap, SheafComplex, SheafMorphism, TwistSum, cone, hom_basis

DEFAULT_GRID = range(-3, 4)


def is_vect0(Y) -> bool:
    if isinstance(Y, TwistSum):
        return Y.is_vect0()
    return Y.is_vect0()


@dataclass(frozen=True)
class EquivalenceVerdict:
    kind: str
    holds: bool
    witness: tuple | None = None  # (k, l, homology degree) when holds is False

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a witness is present exactly when the verdict fails")

    def __bool__(self):
        return self.holds


def global_sections(Y: SheafComplex) -> R0Complex:
    """Levelwise H^0 with induced maps; no Vect_0 requirement."""
    model = Y.model
    levels = {n: coh_sum(model, X)[0] for n, X in Y.levels.items()}
    diffs = {n: coh_map(d, 0) for n, d in Y.differentials.items()}
    return R0Complex(model, levels, diffs)


def _first_homology(G: R0Complex) -> int | None:
    for n, h in sorted(G.homology_dims().items()):
        if h:
            return n
    return None


def is_acyclic(Y: SheafComplex) -> EquivalenceVerdict:
    """Gamma(Y) and Gamma(Y(1, 0)) both acyclic, for Y in Vect_0."""
    require_vect0(Y)
    for k, l in ((0, 0), (1, 0)):
        n = _first_homology(gamma(Y.twist(k, l)))
        if n is not None:
            return EquivalenceVerdict("q", False, (k, l, n))
    return EquivalenceVerdict("q", True)


def _as_chain_map(f) -> ChainMap:
    if isinstance(f, SheafMorphism):
        return ChainMap.from_morphism(f)
    return f


_TWISTS = {0: ((-1, 1), (0, 0), (1, -1)), 1: ((0, 1), (1, 0), (2, -1))}


def is_q_equiv(f, kind: str = "q") -> EquivalenceVerdict:
    """Decide q-, q_0- or q_1-equivalence of a chain map through its cone.

    q_0 and q_1 test three twists with k + l = 0 (and k + l = 1) rather
    than one; any disagreement between them would signal a bug.
    """
    f = _as_chain_map(f)
    C = cone(f)
    if kind == "q":
        v = is_acyclic(C)
        return EquivalenceVerdict("q", v.holds, v.witness)
    if kind not in ("q0", "q1"):
        raise ValueError(f"unknown equivalence kind {kind!r}")
    sums = (0,) if kind == "q0" else (0, 1)
    for s in sums:
        for k, l in _TWISTS[s]:
            n = _first_homology(global_sections(C.twist(k, l)))
            if n is not None:
                return EquivalenceVerdict(kind, False, (k, l, n))
    return EquivalenceVerdict(kind, True)


def check_lemma_q0(f, n: int = 0, k_range: Iterable[int] = range(-3, 4)) -> bool:
    """Acyclicity of Gamma(cone(f)(k, n - k)) does not depend on k."""
    C = cone(_as_chain_map(f))
    verdicts = {_first_homology(global_sections(C.twist(k, n - k))) is None for k in k_range}
    return len(verdicts) <= 1


def additivity_check(Y: SheafComplex) -> bool:
    """chi(Y(1,0)) + chi(Y(0,1)) = chi(Y) + chi(Y(1,1)) in K_0(R_0)."""
    return euler(Y, 1, 0) + euler(Y, 0, 1) == euler(Y, 0, 0) + euler(Y, 1, 1)


# ---------------------------------------------------------------------------
# Psi / Gamma adjunction


def hom_r0_dim(C: R0Module, M: R0Module) -> int:
    """dim_{k_0} Hom_{R_0}(C, M) as the solution space of X A_C(b) = A_M(b) X."""
    f = C.model.field
    c, m = C.dim, M.dim
    if c == 0 or m == 0:
        return 0
    Ic = f.array(np.eye(c, dtype=np.int64))
    Im = f.array(np.eye(m, dtype=np.int64))
    # column-major vec: vec(X A) = (A^T (x) I_m) vec X, vec(A X) = (I_c (x) A) vec X
    eqs = [f.reduce(np.kron(Ac.T, Im) - np.kron(Ic, Am)) for Ac, Am in zip(C.action, M.action)]
    S = np.vstack(eqs)
    return c * m - exactla.rank(f, S)


@dataclass(frozen=True)
class AdjunctionCheck:
    sheaf_side: int
    module_side: int

    @property
    def holds(self) -> bool:
        return self.sheaf_side == self.module_side

    def __bool__(self):
        return self.holds


def adjunction_check(model, rank: int, B: TwistSum) -> AdjunctionCheck:
    """dim Hom(Psi_{0,0}(R_0^rank), B) against dim Hom_{R_0}(R_0^rank, H^0(B))."""
    sheaf_side = rank * sum(len(hom_basis(model, (0, 0), s)) for s in B)
    module_side = hom_r0_dim(R0Module.free(model, rank), coh_sum(model, B)[0])
    return AdjunctionCheck(sheaf_side, module_side)


# ---------------------------------------------------------------------------
# K_0 splitting


@dataclass(frozen=True)
class K0Pair:
    c: K0Class
    d: K0Class

    def __add__(self, other: "K0Pair") -> "K0Pair":
        return K0Pair(self.c + other.c, self.d + other.d)

    def __sub__(self, other: "K0Pair") -> "K0Pair":
        return K0Pair(self.c - other.c, self.d - other.d)

    def __neg__(self) -> "K0Pair":
        return K0Pair(-self.c, -self.d)

    def is_zero(self) -> bool:
        return self.c.is_zero() and self.d.is_zero()

    def __str__(self):
        return f"({self.c}, {self.d})"


def _tensor_euler(Y: SheafComplex, k: int) -> K0Class:
    """sum_n (-1)^n [H^0(Y_n) (x)_{R_0} R_k] by explicit tensor presentations."""
    model = Y.model
    acc = K0Class.zero(model)
    for n, X in Y.levels.items():
        cls = tensor_component(coh_sum(model, X)[0], k).k0_class()
        acc = acc + cls if n % 2 == 0 else acc - cls
    return acc


def split_k0(Y: SheafComplex, basis: str = "-1,0") -> K0Pair:
    """(c, d) with [Y] = [Psi_{-1,0}(c)] + [Psi_{0,0}(d)].

    ``basis="0,-1"`` uses Psi_{0,-1} instead of Psi_{-1,0}; the two
    answers are kept side by side for comparison only.
    """
    require_vect0(Y)
    d = euler(Y, 0, 0)
    if basis == "-1,0":
        c = euler(Y, 1, 0) - d - _tensor_euler(Y, 1)
    elif basis == "0,-1":
        c = euler(Y, 0, 1) - d - _tensor_euler(Y, -1)
    else:
        raise ValueError(f"unknown splitting basis {basis!r}")
    return K0Pair(c, d)


@dataclass(frozen=True)
class SplittingCell:
    k: int
    l: int
    expected: K0Class
    computed: K0Class

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


@dataclass(frozen=True)
class SplittingReport:
    pair: K0Pair
    cells: tuple

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cells if c.ok)

    @property
    def total(self) -> int:
        return len(self.cells)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def __bool__(self):
        return self.ok

    def violations(self) -> list[SplittingCell]:
        return [c for c in self.cells if not c.ok]

    def to_text(self) -> str:
        lines = [f"(c,d) = {self.pair}", "k,l,expected,computed,verdict"]
        for c in self.cells:
            lines.append(f"{c.k},{c.l},{c.expected},{c.computed},{'pass' if c.ok else 'FAIL'}")
        lines.append(f"{self.passed}/{self.total} cells pass")
        return "\n".join(lines) + "\n"


def verify_splitting(Y: SheafComplex, grid: Sequence[int] | tuple = DEFAULT_GRID) -> SplittingReport:
    """chi(Y(k, l)) = c . chi(O(k-1, l)) + d . chi(O(k, l)) on the grid."""
    pair = split_k0(Y)
    model = Y.model
    if isinstance(grid, tuple) and len(grid) == 2 and all(isinstance(g, range) for g in grid):
        ks, ls = grid
    else:
        ks = ls = grid
    cells = []
    for k in ks:
        for l in ls:
            expected = pair_with_chi(pair.c, model, k - 1, l) + pair_with_chi(pair.d, model, k, l)
            cells.append(SplittingCell(k, l, expected, euler(Y, k, l)))
    return SplittingReport(pair, tuple(cells))
