"""Command-line front end.

    p1k ring SPEC (--check | --pou K | --crossed)
    p1k coh SPEC [--object K L | --complex FILE] [--grid A B C D] [-o OUT]
    p1k split SPEC COMPLEX [--grid LO HI] [--compare-basis]
    p1k verify SPEC [--seed S] [--cases N]

Exit codes: 0 success, 1 error or failed property, 2 strong grading
refuted, 3 a complex outside Vect_0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Mapping

import numpy as np

from . import cohomology as coh
from . import graded_ring as gr
from . import sheaf as sh
from . import splitting as sp
from .errors import NotStronglyGraded, NotVect0, P1KError, SchemaError

EXIT_OK, EXIT_FAIL, EXIT_REFUTED, EXIT_PRECONDITION = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# complex files


def _ring_from(value, base: Path | None) -> gr.GradedRingModel:
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = base / path
        return gr.load_ring(path)
    return gr.model_from_spec(value)


def complex_from_json(data: Mapping, model: gr.GradedRingModel | None = None, base: Path | None = None) -> sh.SheafComplex:
    """Parse {"ring"?, "levels": {...}, "differentials": {...}}."""
    if not isinstance(data, Mapping):
        raise SchemaError("complex file must hold a JSON object")
    unknown = set(data) - {"ring", "levels", "differentials"}
    if unknown:
        raise SchemaError(f"unknown fields in complex file: {sorted(unknown)}")
    if model is None:
        if "ring" not in data:
            raise SchemaError("complex file names no ring and none was given")
        model = _ring_from(data["ring"], base)
    try:
        levels = {int(n): sh.TwistSum(tuple((int(k), int(l)) for k, l in s)) for n, s in data.get("levels", {}).items()}
        diffs = {}
        for n, entries in data.get("differentials", {}).items():
            n = int(n)
            src, tgt = levels.get(n, sh.TwistSum()), levels.get(n - 1, sh.TwistSum())
            rows = [[model.zero() for _ in range(len(src))] for _ in range(len(tgt))]
            for i, j, support in entries:
                rows[int(i)][int(j)] = rows[int(i)][int(j)] + model.element({int(d): v for d, v in support.items()})
            diffs[n] = sh.SheafMorphism(model, src, tgt, rows)
    except (TypeError, ValueError, IndexError, AttributeError) as exc:
        if isinstance(exc, P1KError):
            raise
        raise SchemaError(f"malformed complex file: {exc}") from exc
    Y = sh.SheafComplex(model, levels, diffs)
    rep = sh.validate(Y)
    if not rep:
        raise SchemaError("invalid complex: " + "; ".join(rep.problems))
    return Y


def complex_to_json(Y: sh.SheafComplex, include_ring: bool = True) -> dict:
    f = Y.model.field
    out: dict = {}
    if include_ring:
        out["ring"] = Y.model.to_spec()
    out["levels"] = {str(n): [list(s) for s in X] for n, X in Y.levels.items()}
    diffs = {}
    for n, d in Y.differentials.items():
        entries = []
        for i, row in enumerate(d.entries):
            for j, e in enumerate(row):
                if not e.is_zero():
                    entries.append([i, j, {str(deg): [f.to_json(x) for x in v] for deg, v in e.support.items()}])
        diffs[str(n)] = entries
    out["differentials"] = diffs
    return out


def load_complex(path: str | Path, model: gr.GradedRingModel | None = None) -> sh.SheafComplex:
    path = Path(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    return complex_from_json(data, model, base=path.parent)


# ---------------------------------------------------------------------------
# subcommands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _format_pairs(pou) -> list[str]:
    return [f"  lambda = {lam}   rho = {rho}" for lam, rho in pou.pairs]


def cmd_ring(args) -> int:
    model = gr.load_ring(args.spec)
    if args.pou is not None:
        pou = gr.partition_of_unity(model, args.pou)
        if pou is None:
            print(f"no partition of unity of type ({args.pou},{-args.pou})")
            return EXIT_REFUTED
        print(f"partition of unity of type ({args.pou},{-args.pou}), {len(pou.pairs)} pairs, sum = 1 verified")
        print("\n".join(_format_pairs(pou)))
        return EXIT_OK
    if args.crossed:
        w = gr.crossed_product_witness(model)
        if w.kind == "found":
            print(f"yes: u = {w.unit} of degree 1 with inverse {w.inverse}")
        elif w.kind == "nonexistence_by_dimension":
            print(f"no: dim R_1 = {w.dims[0]} != dim R_0 = {w.dims[1]}")
        else:
            print("unknown: no invertible degree-1 element found by search")
        return EXIT_OK
    verdict = gr.is_strongly_graded(model)
    if verdict:
        print("strongly graded: yes")
        for pou in (verdict.pou_pos, verdict.pou_neg):
            print(f"partition of unity of type ({pou.k},{-pou.k}):")
            print("\n".join(_format_pairs(pou)))
        return EXIT_OK
    print(f"strongly graded: no, refuted at k={verdict.degree}")
    return EXIT_REFUTED


def cmd_coh(args) -> int:
    model = gr.load_ring(args.spec)
    if args.complex:
        Y = load_complex(args.complex, model)
        twists = [(0, 0)]
        if args.grid:
            a, b, c, d = args.grid
            twists = [(k, l) for k in range(a, b + 1) for l in range(c, d + 1)]
        lines = ["k,l,degree,dim,class"]
        for k, l in twists:
            H = coh.hypercoh(Y.twist(k, l), classes=True)
            for t in sorted(H.dims):
                lines.append(f"{k},{l},{t},{H.dims[t]},{coh._csv_class(H.classes[t])}")
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    if args.grid:
        a, b, c, d = args.grid
        ks, ls = range(a, b + 1), range(c, d + 1)
    elif args.object:
        ks, ls = [args.object[0]], [args.object[1]]
    else:
        print("coh: give --object K L, --grid A B C D or --complex FILE", file=sys.stderr)
        return EXIT_FAIL
    if args.object and args.grid:
        # twists of the given object
        k0, l0 = args.object
        ks, ls = [k0 + k for k in ks], [l0 + l for l in ls]
    table = coh.CohomologyTable.compute(model, ks, ls)
    _emit(table.to_csv(), args.output)
    return EXIT_OK


def cmd_split(args) -> int:
    model = gr.load_ring(args.spec)
    Y = load_complex(args.complex, model)
    lo, hi = args.grid
    report = sp.verify_splitting(Y, range(lo, hi + 1))
    text = report.to_text()
    if args.compare_basis:
        alt = sp.split_k0(Y, basis="0,-1")
        text += f"basis (0,-1): (c,d) = {alt}\n"
    _emit(text, args.output)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify


def _iso_cone(model, rng, twist_bounds=(-2, 2)) -> sh.SheafComplex:
    n = int(rng.integers(1, 3))
    X = sh.random_twist_sum(model, rng, n, twist_bounds, vect0=True)
    C = sh.SheafComplex.single(model, X)
    phi = sh.random_isomorphism(model, C, rng, steps=2)
    return sh.cone(phi)


def run_verify(model, seed: int, cases: int, log=print) -> tuple[bool, list[str]]:
    """The full property suite; returns (ok, failure lines)."""
    failures: list[str] = []

    def check(name, ok, case):
        if not ok:
            failures.append(f"FAIL {name} seed={seed} case={case}")

    grid = range(-3, 4)
    for k in grid:
        for l in grid:
            check("cartesian_exactness", sh.cartesian_sequence(model, k, l)[1], f"({k},{l})")
    log("cartesian exactness: checked 49 cells")
    for a in range(-2, 3):
        for b in range(-2, 3):
            Y = sh.SheafComplex.single(model, sh.O(a, b))
            for k in grid:
                check("twist_theorem", _twist_ok(Y, k), f"O({a},{b}) k={k}")
            check("additivity", sp.additivity_check(Y), f"O({a},{b})")
    log("twist theorem and additivity: checked 25 objects")
    rng = np.random.default_rng(seed)
    for i in range(cases):
        s = int(rng.integers(2**31))
        Y = sh.random_complex(model, 2, 2, (-2, 2), seed=s, vect0=True)
        check("additivity", sp.additivity_check(Y), i)
        check("splitting", sp.verify_splitting(Y).ok, i)
        r = int(rng.integers(1, 3))
        B = sh.random_twist_sum(model, rng, int(rng.integers(1, 3)), (-2, 2))
        check("adjunction", sp.adjunction_check(model, r, B).holds, i)
        C = _iso_cone(model, rng)
        check("acyclicity", sp.is_acyclic(C).holds and coh.hypercoh(C).is_zero(), i)
        f = sh.random_morphism(model, sh.random_twist_sum(model, rng, 1, (-2, 2), True), sh.random_twist_sum(model, rng, 1, (-2, 2), True), rng)
        check("lemma_q0", sp.check_lemma_q0(f, 0, range(-2, 3)), i)
    log(f"random cases: {cases} (splitting, additivity, adjunction, acyclicity, q0 lemma)")
    return not failures, failures


def _twist_ok(Y, k) -> bool:
    return coh.twist_theorem_check(Y, k).holds


def cmd_verify(args) -> int:
    model = gr.load_ring(args.spec)
    verdict = gr.is_strongly_graded(model)
    if not verdict:
        print(f"strongly graded: no, refuted at k={verdict.degree}; the suite requires strong grading")
        return EXIT_REFUTED
    ok, failures = run_verify(model, args.seed, args.cases)
    for line in failures:
        print(line)
    print("all properties hold" if ok else f"{len(failures)} failures")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="p1k", description=__doc__.split("\n\n")[0])
    p.add_argument("--window-cap", type=int, default=None, help="padding cap for hypercohomology windows (<= 64)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("ring", help="strong grading certificates and witnesses")
    r.add_argument("spec")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--check", action="store_true")
    g.add_argument("--pou", type=int, metavar="K")
    g.add_argument("--crossed", action="store_true")
    r.set_defaults(func=cmd_ring)

    c = sub.add_parser("coh", help="cohomology tables and hypercohomology")
    c.add_argument("spec")
    c.add_argument("--object", type=int, nargs=2, metavar=("K", "L"))
    c.add_argument("--complex", metavar="FILE")
    c.add_argument("--grid", type=int, nargs=4, metavar=("A", "B", "C", "D"))
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_coh)

    s = sub.add_parser("split", help="K_0 splitting of a Vect_0 complex")
    s.add_argument("spec")
    s.add_argument("complex")
    s.add_argument("--grid", type=int, nargs=2, default=(-3, 3), metavar=("LO", "HI"))
    s.add_argument("--compare-basis", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_split)

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("spec")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.window_cap is not None:
        if not 0 <= args.window_cap <= 64:
            parser.error("--window-cap must lie in [0, 64]")
        os.environ["P1K_WINDOW_CAP"] = str(args.window_cap)
    try:
        return args.func(args)
    except NotVect0 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NotStronglyGraded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except (P1KError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
