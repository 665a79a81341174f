"""Command-line front end.

Exit status: 0 on success, 1 when a domain check fails (bad parameter,
violated invariant, instance too large), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import constructions as cons
from .cop import has_kcop, kcop_bound, two_cop_bound, two_cop_conjecture_bound, two_cop_reduce
from .errors import DetlabError
from .graphs import Graph, gram_det, incidence_matrix, lemma_gram_bound
from .leafrank import leaf_rank, leaf_rank_upper_bound
from .linalg import (
    BoundValue,
    RyserParams,
    det_exact,
    gram_determinant,
    hadamard_row_bound,
    prop01_bound,
    ryser_bound,
    two_n_ones_bound,
)
from .matrix import ExactMatrix
from .paths import (
    PathFamily,
    RootedTree,
    ancestor_transform,
    extremal_path_instance,
    find_realization,
    path_edge_matrix,
    reduce_path_matrix,
)
from .search import CSV_HEADER, VARIANTS, MatrixClass, max_det
from .verify import SUITES


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit_matrix(M: ExactMatrix, fmt: str, out) -> None:
    if fmt == "json":
        out.write(M.to_json() + "\n")
    else:
        out.write(M.to_text())


def _write_matrix_file(M: ExactMatrix, path: str | None, fmt: str) -> None:
    if path is None:
        _emit_matrix(M, fmt, sys.stdout)
        return
    with open(path, "w") as fh:
        _emit_matrix(M, fmt, fh)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


# -- verbs --------------------------------------------------------------------


def cmd_det(args) -> int:
    M = ExactMatrix.parse(_read(args.matrix))
    d = det_exact(M)
    h = hadamard_row_bound(M)
    print(f"det={_fmt(d)}")
    print(f"abs_det={_fmt(abs(d))}")
    print(f"hadamard={h.value:.6g}")
    return 0


def cmd_gram(args) -> int:
    text = _read(args.input)
    if args.graph:
        G = Graph.parse(text)
        print(f"n={G.n} m={G.m}")
        print(f"gram_det={gram_determinant(incidence_matrix(G))}")
        print(f"formula={gram_det(G)}")
        print(f"bound={lemma_gram_bound(G.n, G.m).value:.6g}")
    else:
        M = ExactMatrix.parse(text)
        print(f"gram_det={_fmt(gram_determinant(M))}")
    return 0


CONSTRUCTIONS = ("cyclic", "fano", "kcop", "two-cop", "prop01")


def _build(args):
    if args.name == "cyclic":
        return cons.cyclic_block_matrix(_need(args, "n"))
    if args.name == "fano":
        return cons.fano_block_matrix(_need(args, "n"))
    if args.name == "kcop":
        return cons.kcop_construct(_need(args, "k"), _need(args, "p"))
    if args.name == "two-cop":
        return cons.two_cop_construct(_need(args, "p"))
    return cons.prop01_extremal(_need(args, "n"), _need(args, "t"))


class UsageError(Exception):
    pass


def _need(args, name: str) -> int:
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"construct {args.name} needs --{name}")
    return v


def cmd_construct(args) -> int:
    res = _build(args)
    _write_matrix_file(res.matrix, args.output, args.format)
    print(f"abs_det={res.predicted_abs_det}")
    return 0


def cmd_cop(args) -> int:
    if args.action == "bound":
        if args.n is None:
            raise UsageError("cop bound needs --n")
        rows = [kcop_bound(args.n, args.k)]
        if args.k == 2:
            rows += [two_cop_bound(args.n), two_cop_conjecture_bound(args.n)]
        for b in rows:
            print(f"{b.value:.6g}\t{b.formula_tag}")
        return 0
    if args.matrix is None:
        raise UsageError(f"cop {args.action} needs a matrix file")
    A = ExactMatrix.parse(_read(args.matrix))
    if args.action == "check":
        ok = A.is_01() and has_kcop(A, args.k)
        print(f"{args.k}-cop={'yes' if ok else 'no'}")
        return 0
    red = two_cop_reduce(A)
    print(f"abs_det={red.abs_det}")
    print(f"R={list(red.partition.R)} S={list(red.partition.S)} S'={list(red.partition.S_prime)}")
    print(f"short_rows={red.short_row_count()}")
    print(f"hadamard={red.hadamard_product():.6g}")
    print(f"bound={two_cop_bound(A.nrows).value:.6g}")
    _emit_matrix(red.matrix, args.format, sys.stdout)
    return 0


def cmd_path(args) -> int:
    if args.action == "extremal":
        if args.depth is None:
            raise UsageError("path extremal needs --depth")
        T, P, want = extremal_path_instance(args.depth)
        sys.stdout.write(T.to_text())
        print("# paths")
        sys.stdout.write(P.to_text())
        print(f"abs_det={want}")
        return 0
    if args.action == "realize":
        if args.matrix is None:
            raise UsageError("path realize needs a matrix file")
        found = find_realization(ExactMatrix.parse(_read(args.matrix)))
        if found is None:
            print("realizable=no")
            return 0
        tree, order, P = found
        print("realizable=yes")
        sys.stdout.write(tree.to_text())
        print("# paths")
        sys.stdout.write(P.to_text())
        return 0
    if args.tree is None or args.paths is None:
        raise UsageError("path matrix needs --tree and --paths")
    T = RootedTree.from_text(_read(args.tree))
    P = PathFamily.from_text(_read(args.paths))
    P.validate(T.graph)
    order = T.bfs_edges()
    A = path_edge_matrix(T.graph, P, order)
    _emit_matrix(A, args.format, sys.stdout)
    n = T.n
    if A.is_square:
        d = abs(det_exact(A))
        print(f"abs_det={d}")
        print(f"bound={2 ** (n - 1)}")
        if args.reduce and d:
            st = reduce_path_matrix(ancestor_transform(A, T, order), T, order)
            print(f"updates={len(st.updates)} R={list(st.Rset)} S={list(st.Sset)}")
            print(f"final_bound={st.final_bound():.6g}")
    return 0


def cmd_leafrank(args) -> int:
    G = Graph.parse(_read(args.graph))
    res = leaf_rank(G)
    print(res.to_json())
    return 0


def cmd_search(args) -> int:
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("DETLAB_THREADS", "1") or 1)
    cls = MatrixClass(args.cls, args.budget, args.n)
    rep = max_det(cls, exhaustive=args.exhaustive, threads=threads)
    print(CSV_HEADER)
    print(rep.csv_row())
    if args.witness:
        _write_matrix_file(rep.witness, None if args.witness == "-" else args.witness, "text")
    return 0


def bounds_table(n: int, ones: int | None = None, k: int = 2) -> list[tuple[str, BoundValue]]:
    """Every bound that applies at dimension n, in a fixed order."""
    if n < 1:
        raise DetlabError("n must be at least 1")
    t = 2 * n if ones is None else ones
    rows: list[tuple[str, BoundValue]] = []
    if n == 1:
        one = BoundValue(1.0, "n=1: |det| <= 1")
        return [(name, one) for name in ("hadamard", "kcop", "path", "leafrank")]
    rows.append(("hadamard", prop01_bound(n, t)))
    if t % n == 0:
        try:
            rows.append(("ryser", ryser_bound(RyserParams(n, t // n))))
        except DetlabError:
            pass
    if t <= 2 * n:
        rows.append(("2n-ones", two_n_ones_bound(n)))
        rows.append(("conjecture", BoundValue(2 ** (n / 3), f"conjecture: 2^(n/3), n={n}")))
    if t == 3 * n:
        rows.append(("fano-lower", BoundValue(24 ** (n / 7), f"fano blocks (lower): 24^(n/7), n={n}")))
    rows.append(("kcop", kcop_bound(n, k)))
    if k == 2:
        rows.append(("two-cop", two_cop_bound(n)))
        rows.append(("two-cop-conjecture", two_cop_conjecture_bound(n)))
    rows.append(("path", BoundValue(float(2 ** (n - 1)), f"path-edge: 2^(n-1), n={n}")))
    rows.append(("path-transformed", BoundValue(6 ** ((n - 1) / 2), f"path-edge, transformed: 6^((n-1)/2), n={n}")))
    rows.append(("leafrank", leaf_rank_upper_bound(n)))
    return rows


def cmd_bounds(args) -> int:
    rows = bounds_table(args.n, args.ones, args.k)
    if args.format == "json":
        print(json.dumps([{"name": name, "value": b.value, "formula": b.formula_tag} for name, b in rows]))
    else:
        for name, b in rows:
            print(f"{name}\t{b.value:.6g}\t{b.formula_tag}")
    return 0


SUITE_OPTIONS = {
    "gram-tree": ("max_n", "samples", "seed"),
    "gram-formula": ("max_n",),
    "gram-bound": ("max_n",),
    "gram-invariance": ("trials", "seed"),
    "constructions": (),
    "search": (),
    "two-cop": ("samples", "seed"),
    "paths": ("samples", "seed"),
    "leafrank": ("max_n",),
    "exponent": (),
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        opts = {}
        for key in SUITE_OPTIONS[name]:
            v = getattr(args, key)
            if v is not None:
                opts[key] = v
        res = SUITES[name](**opts)
        print(f"{res.summary()} suite={name} seconds={res.seconds:.1f}")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="detlab", description="Exact determinant bounds for sparse 0/1 matrices.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("det", help="exact determinant of a matrix file")
    s.add_argument("matrix", help="matrix file (text or JSON, '-' for stdin)")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("gram", help="determinant of the row Gram matrix")
    s.add_argument("input")
    s.add_argument("--graph", action="store_true", help="input is a graph; use its incidence matrix")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("construct", help="build a named matrix family")
    s.add_argument("name", choices=CONSTRUCTIONS)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("cop", help="consecutive ones: check, reduce, bound")
    s.add_argument("action", choices=("check", "reduce", "bound"))
    s.add_argument("matrix", nargs="?")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_cop)

    s = sub.add_parser("path", help="path-edge incidence matrices of trees")
    s.add_argument("action", choices=("matrix", "extremal", "realize"))
    s.add_argument("matrix", nargs="?", help="matrix file for 'realize'")
    s.add_argument("--tree")
    s.add_argument("--paths")
    s.add_argument("--depth", type=int)
    s.add_argument("--reduce", action="store_true")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("leafrank", help="exact leaf rank of a small graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_leafrank)

    s = sub.add_parser("search", help="maximum |det| over a class of 0/1 matrices")
    s.add_argument("--class", dest="cls", choices=VARIANTS, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--threads", type=int)
    s.add_argument("--witness", help="write the witness matrix here ('-' for stdout)")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("bounds", help="table of determinant bounds at dimension n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ones", type=int, help="total number of ones (default 2n)")
    s.add_argument("--k", type=int, default=2, help="block budget for the k-COP rows")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", choices=("all", *SUITES))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-n", dest="max_n", type=int)
    s.add_argument("--samples", type=int)
    s.add_argument("--trials", type=int)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DetlabError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
