"""Acceptance criteria, exact arithmetic throughout.

Each criterion records a verdict in VERDICTS; conftest prints one
PASS/FAIL line per criterion at the end of the run.  Running this file
directly does the same without pytest.
"""

import time

import numpy as np
import pytest

from conftest import STRONG, model
from p1k import cohomology as coh
from p1k import graded_ring as gr
from p1k import sheaf as sh
from p1k import splitting as sp

VERDICTS = {}
GRID3 = range(-3, 4)


def _record(n, ok, detail, t0):
    VERDICTS[n] = (ok, f"{detail} [{time.perf_counter() - t0:.1f}s]")
    return ok


def _seeds(base, count):
    return [base * 1000 + i for i in range(count)]


# 1 ---------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    bad = []
    for name in STRONG:
        cert = gr.is_strongly_graded(model(name))
        if not isinstance(cert, gr.Certificate):
            bad.append(f"{name} not certified")
            continue
        for pou, k in ((cert.pou_pos, 1), (cert.pou_neg, -1)):
            unit = model(name).unit
            if pou.k != k or pou.total() != unit:
                bad.append(f"{name} PoU k={k}")
            if any(lam.degrees != [k] or rho.degrees != [-k] for lam, rho in pou.pairs):
                bad.append(f"{name} PoU degrees k={k}")
    verdict = gr.is_strongly_graded(model("polynomial"))
    if not (isinstance(verdict, gr.Refutation) and verdict.degree == -1):
        bad.append("polynomial not refuted at k=-1")
    return _record(1, not bad, "; ".join(bad) or "3 certificates, polynomial refuted at k=-1", t0)


# 2 ---------------------------------------------------------------------------


def _board_dim(n):
    return 5 if n % 2 == 0 else 4


def criterion_2():
    t0 = time.perf_counter()
    bad = 0
    cells = 0
    for k in range(-5, 6):
        for l in range(-5, 6):
            s = k + l
            h0, h1 = coh.coh_dims(model("laurent"), k, l)
            bad += (h0, h1) != (max(s + 1, 0), max(-s - 1, 0))
            e0 = sum(_board_dim(n) for n in range(-l, k + 1))
            e1 = sum(_board_dim(n) for n in range(k + 1, -l))
            bad += coh.coh_dims(model("checkerboard"), k, l) != (e0, e1)
            cells += 2
    return _record(2, bad == 0, f"{cells - bad}/{cells} cells match", t0)


# 3 ---------------------------------------------------------------------------


def criterion_3():
    t0 = time.perf_counter()
    fails = [(name, k, l) for name in STRONG for k in GRID3 for l in GRID3
             if not sh.cartesian_sequence(model(name), k, l)[1]]
    return _record(3, not fails, f"{147 - len(fails)}/147 sequences exact", t0)


# 4 ---------------------------------------------------------------------------


def criterion_4():
    t0 = time.perf_counter()
    total = fails = 0
    for name in STRONG:
        m = model(name)
        for a in range(-2, 3):
            for b in range(-2, 3):
                Y = sh.SheafComplex.single(m, sh.O(a, b))
                for k in GRID3:
                    total += 1
                    fails += not coh.twist_theorem_check(Y, k).holds
    return _record(4, fails == 0, f"{total - fails}/{total} checks hold", t0)


# 5 ---------------------------------------------------------------------------

TWISTS9 = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]


def _iso_cone(m, seed):
    rng = np.random.default_rng(seed)
    X = sh.random_twist_sum(m, rng, int(rng.integers(1, 3)), (-1, 2), vect0=True)
    phi = sh.random_isomorphism(m, sh.SheafComplex.single(m, X), rng, steps=2)
    return sh.cone(phi)


def criterion_5():
    t0 = time.perf_counter()
    sound = complete = 0
    for i, name in enumerate(STRONG):
        m = model(name)
        for s in _seeds(50 + i, 50):
            C = _iso_cone(m, s)
            sound += sp.is_acyclic(C).holds and all(coh.hypercoh(C.twist(a, b)).is_zero() for a, b in TWISTS9)
            rng = np.random.default_rng(s)
            X = sh.random_twist_sum(m, rng, int(rng.integers(1, 3)), (-2, 2), vect0=True)
            complete += not sp.is_acyclic(sh.SheafComplex.single(m, X)).holds
    ok = sound == complete == 150
    return _record(5, ok, f"iso cones acyclic {sound}/150, single objects rejected {complete}/150", t0)


# 6 ---------------------------------------------------------------------------


def criterion_6():
    t0 = time.perf_counter()
    agree = stable = 0
    for i, name in enumerate(STRONG):
        m = model(name)
        for s in _seeds(60 + i, 30):
            Y = sh.random_complex(m, 2, 2, (-2, 2), seed=s, vect0=True)
            H = coh.hypercoh(Y)
            G = {n: h for n, h in coh.gamma(Y).homology_dims().items() if h}
            agree += H.nonzero() == G
            stable += coh.hypercoh(Y, pad=H.pad + 4).nonzero() == H.nonzero()
    ok = agree == stable == 90
    return _record(6, ok, f"hypercoh = gamma homology {agree}/90, window+4 stable {stable}/90", t0)


# 7 ---------------------------------------------------------------------------


def _psi_levels_vanish(m, k, l, rank):
    Y = sh.psi(k, l, sh.R0FreeComplex.free(m, rank))
    H0, H1 = coh.coh_sum(m, Y.level(0))
    d0, d1 = coh.coh_dims(m, k, l)
    return H0.dim == rank * d0 and H1.dim == rank * d1, H0.dim, H1.dim


def criterion_7():
    t0 = time.perf_counter()
    adj = 0
    for i, name in enumerate(STRONG):
        m = model(name)
        rng = np.random.default_rng(70 + i)
        for _ in range(10):
            B = sh.random_twist_sum(m, rng, int(rng.integers(1, 4)), (-2, 2))
            adj += sp.adjunction_check(m, int(rng.integers(1, 4)), B).holds
    psi_bad = 0
    for name in STRONG:
        m = model(name)
        for r in (1, 2):
            for k in GRID3:
                for l in GRID3:
                    ok, h0, h1 = _psi_levels_vanish(m, k, l, r)
                    psi_bad += not ok
                    psi_bad += k + l <= -1 and h0 != 0
                    psi_bad += k + l >= -1 and h1 != 0
            for a in GRID3:
                # twists of Psi_{-1,0}(C) with total degree 0
                _, h0, h1 = _psi_levels_vanish(m, a - 1, -a, r)
                psi_bad += h0 != 0 or h1 != 0
    ok = adj == 30 and psi_bad == 0
    return _record(7, ok, f"adjunction {adj}/30, H of Psi violations {psi_bad}", t0)


# 8 ---------------------------------------------------------------------------


def _random_free_complex(m, rng):
    r0, r1 = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    if r0 + r1 == 0:
        r0 = 1
    d = [[sh.random_element(m, 0, 0, rng) for _ in range(r1)] for _ in range(r0)]
    return sh.R0FreeComplex(m, {0: r0, 1: r1}, {1: d} if r0 and r1 else {}), r0 - r1


def criterion_8():
    t0 = time.perf_counter()
    bad = []
    for i, name in enumerate(STRONG):
        m = model(name)
        R0 = coh.k0_class(coh.R0Module.free(m, 1))
        zero = coh.K0Class.zero(m)
        rng = np.random.default_rng(80 + i)
        for _ in range(5):
            C, e = _random_free_complex(m, rng)
            if sp.split_k0(sh.psi(-1, 0, C)) != sp.K0Pair(e * R0, zero):
                bad.append(f"{name} Psi_-1,0")
            if sp.split_k0(sh.psi(0, 0, C)) != sp.K0Pair(zero, e * R0):
                bad.append(f"{name} Psi_0,0")
        for s in _seeds(85 + i, 20):
            Y = sh.random_complex(m, 2, 2, (-2, 2), seed=s, vect0=True)
            rep = sp.verify_splitting(Y)
            if not rep.ok:
                bad.append(f"{name} seed {s}: {rep.passed}/{rep.total}")
    L = model("laurent")
    rep = sp.verify_splitting(sh.SheafComplex.single(L, sh.O(2, 1)))
    c, d = rep.pair.c.mults, rep.pair.d.mults
    if (c, d, rep.passed, rep.total) != ((-3,), (4,), 49, 49):
        bad.append(f"O(2,1): (c,d) = ({c}, {d}), {rep.passed}/{rep.total}")
    return _record(8, not bad, "; ".join(bad) or "Psi images split, 60 complexes verified, O(2,1) -> (-3, 4) 49/49", t0)


# 9 ---------------------------------------------------------------------------


def criterion_9():
    t0 = time.perf_counter()
    total = fails = 0
    for i, name in enumerate(STRONG):
        m = model(name)
        for a in GRID3:
            for b in GRID3:
                total += 1
                fails += not sp.additivity_check(sh.SheafComplex.single(m, sh.O(a, b)))
        for s in _seeds(90 + i, 20):
            total += 1
            fails += not sp.additivity_check(sh.random_complex(m, 2, 2, (-3, 3), seed=s))
    return _record(9, fails == 0, f"{total - fails}/{total} identities hold", t0)


# 10 --------------------------------------------------------------------------


def criterion_10():
    t0 = time.perf_counter()
    B = model("checkerboard")
    w = gr.crossed_product_witness(B)
    cert = gr.is_strongly_graded(B)
    found = gr.crossed_product_witness(model("laurent"))
    ok = w.kind == "nonexistence_by_dimension" and isinstance(cert, gr.Certificate) and bool(found)
    return _record(10, ok, f"checkerboard: {w.kind} (dim R_1 = {w.dims[0]}, dim R_0 = {w.dims[1]}), strongly graded", t0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    assert criterion(), VERDICTS[int(criterion.__name__.split("_")[1])][1]


if __name__ == "__main__":
    for f in CRITERIA:
        f()
        n = int(f.__name__.split("_")[1])
        ok, detail = VERDICTS[n]
        print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}", flush=True)
