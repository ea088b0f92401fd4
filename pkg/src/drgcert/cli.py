"""Command-line interface.

Subcommands: build, eigensystem, widths, certify, search, verify-theorem,
selftest.  All reports are JSON on stdout with every rational value rendered
as an exact "num/den" string; identical command plus seed gives byte-identical
output except for wall-time fields.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 tier exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .errors import DrgError, ParameterError, TierLimitExceeded
from .exact import format_fraction, q_binomial
from .graphs import (
    DEFAULT_VERTEX_CAP,
    build_bilinear,
    build_grassmann,
    build_hamming,
    build_johnson,
    build_twisted_grassmann,
    check_distance_regular,
    distance_census,
    graph_cache_text,
)
from .lp_cert import certify_subset, expected_bound, hamming_certificate, solve_certificate
from .scheme import (
    eigensystem_cache_key,
    eigensystem_from_array,
    eigensystem_to_json,
)
from .subsets import VertexSubset, inner_distribution, load_subset, width_and_dual_width
from . import ekr_search

FAMILY_PARAMS = {
    "johnson": ("v", "d"),
    "hamming": ("d", "q"),
    "grassmann": ("q", "v", "d"),
    "bilinear": ("q", "d", "e"),
    "twisted": ("q", "d"),
}

BUILDERS = {
    "johnson": build_johnson,
    "hamming": build_hamming,
    "grassmann": build_grassmann,
    "bilinear": build_bilinear,
    "twisted": build_twisted_grassmann,
}


def _family_and_params(args):
    family = args.family_opt or args.family
    if family is None:
        raise ParameterError("a graph family is required (positional or --family)")
    if family not in FAMILY_PARAMS:
        raise ParameterError(
            f"unknown family {family!r}; choose from {sorted(FAMILY_PARAMS)}"
        )
    params = {}
    for name in FAMILY_PARAMS[family]:
        value = getattr(args, name, None)
        if value is None:
            raise ParameterError(f"family {family!r} needs -{name}")
        params[name] = value
    return family, params


def _build(family, params, vertex_cap):
    return BUILDERS[family](**params, vertex_cap=vertex_cap)


def _config(args, family=None, params=None):
    return {
        "command": args.command,
        "family": family,
        "params": params,
        "t": getattr(args, "t", None),
        "vertex_cap": getattr(args, "vertex_cap", None),
        "enum_cap": getattr(args, "enum_cap", None),
        "cache": getattr(args, "cache", None),
        "out": getattr(args, "out", None),
        "seed": getattr(args, "seed", None),
        "subset": getattr(args, "subset", None),
    }


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":"))
    print(text)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text + "\n", encoding="ascii")


def _cache_write(path: Path, content: str) -> None:
    """Write-if-absent; an existing file must be byte-identical."""
    if path.exists():
        if path.read_text(encoding="ascii") != content:
            raise DrgError(f"cache file {path} differs from a fresh computation")
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="ascii")


def _graph_cache_path(args, family, params) -> Path:
    key = eigensystem_cache_key(family, params)
    return Path(args.cache) / f"{family}-{key}.drg"


def cmd_build(args) -> int:
    family, params = _family_and_params(args)
    graph = _build(family, params, args.vertex_cap)
    census = distance_census(graph)
    arr = check_distance_regular(graph, census)
    cache_path = _graph_cache_path(args, family, graph.params)
    _cache_write(cache_path, graph_cache_text(graph))
    report = {
        "config": _config(args, family, graph.params),
        "vertices": graph.n,
        "edges": graph.edge_count(),
        "valency": arr.b0,
        "diameter": census.diameter,
        "intersection_array": {"b": list(arr.b), "c": list(arr.c)},
        "cache_file": str(cache_path),
    }
    _emit(report, args)
    return 0


def _eigensystem_for(family, params, vertex_cap):
    graph = _build(family, params, vertex_cap)
    census = distance_census(graph)
    arr = check_distance_regular(graph, census)
    sys_ = eigensystem_from_array(arr, graph.n)
    return graph, census, arr, sys_


def cmd_eigensystem(args) -> int:
    family, params = _family_and_params(args)
    graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
    content = eigensystem_to_json(sys_, family, graph.params)
    key = eigensystem_cache_key(family, graph.params)
    cache_path = Path(args.cache) / f"{family}-{key}.eig.json"
    _cache_write(cache_path, content)
    report = {
        "config": _config(args, family, graph.params),
        "n": sys_.n,
        "d": sys_.d,
        "eigenvalues": list(sys_.eigenvalues),
        "k": [format_fraction(x) for x in sys_.k],
        "m": [format_fraction(x) for x in sys_.m],
        "P": [[format_fraction(x) for x in row] for row in sys_.P.rows],
        "Q": [[format_fraction(x) for x in row] for row in sys_.Q.rows],
        "ordering": list(sys_.ordering),
        "passing_orderings": [list(p) for p in sys_.passing_orderings],
        "cache_file": str(cache_path),
    }
    _emit(report, args)
    return 0


def cmd_widths(args) -> int:
    family, params = _family_and_params(args)
    graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
    subset = load_subset(args.subset, graph)
    dist = inner_distribution(subset, census, sys_)
    report_w = width_and_dual_width(dist)
    report = {
        "config": _config(args, family, graph.params),
        "size": subset.size,
        "e": [format_fraction(x) for x in dist.e],
        "eQ": [format_fraction(x) for x in dist.eq],
        "width": report_w.width,
        "dual_width": report_w.dual_width,
        "diameter": report_w.diameter,
        "descendent": report_w.descendent,
    }
    _emit(report, args)
    return 0


def cmd_certify(args) -> int:
    family, params = _family_and_params(args)
    if args.t is None:
        raise ParameterError("certify needs -t")
    graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
    cert = solve_certificate(sys_, args.t)
    table_value, hypothesis_met = expected_bound(family, graph.params, args.t)
    report = {
        "family": family,
        "params": graph.params,
        "t": args.t,
        "f": [format_fraction(x) for x in cert.f],
        "feasible": cert.feasible,
        "bound": format_fraction(cert.bound),
        "hypothesis_met": hypothesis_met,
        "table_value": format_fraction(table_value),
        "match": cert.bound == table_value,
        "config": _config(args, family, graph.params),
    }
    if family == "hamming":
        mds_cert = hamming_certificate(params["d"], params["q"], args.t)
        report["mds_route_agrees"] = mds_cert.f == cert.f
    if args.subset:
        subset = load_subset(args.subset, graph)
        dist = inner_distribution(subset, census, sys_)
        cr = certify_subset(dist, cert)
        report["subset_report"] = {
            "size": format_fraction(cr.size),
            "bound": format_fraction(cr.bound),
            "verdict": cr.verdict,
            "width_is_extremal": cr.width_is_extremal,
            "dual_width_is_extremal": cr.dual_width_is_extremal,
            "slack": format_fraction(cr.slack),
            "slack_terms": [format_fraction(x) for x in cr.slack_terms],
        }
    _emit(report, args)
    if args.subset and report["subset_report"]["verdict"] == "violated-bug":
        return 2
    return 0


def cmd_search(args) -> int:
    family, params = _family_and_params(args)
    if args.t is None:
        raise ParameterError("search needs -t")
    graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
    cert = solve_certificate(sys_, args.t)
    thr = ekr_search.threshold_graph(graph, census, args.t)
    warm = None
    if family == "twisted":
        fams = ekr_search.enumerate_descendent_families(
            graph.params["q"], graph.params["d"], args.t
        )
        warm = max(
            ([graph.index_of(lab) for lab in fam.labels()] for fam in fams), key=len
        )
    hint = None
    if cert.feasible and cert.bound.denominator == 1:
        hint = int(cert.bound)
    result = ekr_search.max_clique(
        thr,
        upper_bound_hint=hint,
        warm_start=warm,
        enum_cap=args.enum_cap,
        exhaustive_cap=args.vertex_cap,
    )
    report = {
        "graph": {"family": family, "params": graph.params},
        "t": args.t,
        "threshold": census.diameter - args.t,
        "optimum": result.optimum,
        "bound": format_fraction(cert.bound) if cert.feasible else None,
        "tight": cert.feasible and cert.bound == result.optimum,
        "maximizers": [
            [graph.vertices[i] for i in fam] for fam in result.families
        ],
        "truncated": result.truncated,
        "nodes": result.nodes,
        "seconds": round(result.seconds, 3),
        "config": _config(args, family, graph.params),
    }
    _emit(report, args)
    return 0


def cmd_verify_theorem(args) -> int:
    if args.q is None or args.d is None or args.t is None:
        raise ParameterError("verify-theorem needs -q, -d and -t")
    report = ekr_search.verify_theorem(
        args.q, args.d, args.t,
        search_cap=args.vertex_cap,
        enum_cap=args.enum_cap,
    )
    doc = {
        "config": _config(args, "twisted", {"q": args.q, "d": args.d}),
        "passed": report.passed,
        "n": report.n,
        "arrays_match": report.arrays_match,
        "q_matrices_match": report.q_matrices_match,
        "certificate_feasible": report.certificate_feasible,
        "bound": format_fraction(report.bound),
        "expected": format_fraction(report.expected),
        "optimum": report.optimum,
        "maximizers_match": report.maximizers_match,
        "n_maximizers": report.n_maximizers,
        "n_descendent_families": report.n_descendent_families,
        "truncated": report.truncated,
        "nodes": report.nodes,
        "seconds": round(report.seconds, 3),
        "verdict": "PASS" if report.passed else "FAIL",
    }
    _emit(doc, args)
    return 0 if report.passed else 2


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    checks = []

    def record(name, ok):
        checks.append({"name": name, "passed": bool(ok)})

    ok = True
    for m in range(9):
        for n in range(m + 1):
            for q in (2, 3):
                if q_binomial(m, n, q) != q_binomial(m, m - n, q):
                    ok = False
                lhs = q_binomial(m, n, q)
                if n >= 1 and m >= 1:
                    rhs = q_binomial(m - 1, n - 1, q) + q ** n * q_binomial(m - 1, n, q)
                    if lhs != rhs:
                        ok = False
    record("q-binomial symmetry and Pascal identity", ok)

    from .exact import ExactMatrix

    ok = True
    for family, params in (
        ("johnson", {"v": 5, "d": 2}),
        ("hamming", {"d": 3, "q": 2}),
        ("hamming", {"d": 1, "q": 5}),
    ):
        graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
        prod = sys_.P * sys_.Q
        if prod != ExactMatrix.identity(sys_.d + 1).scale(sys_.n):
            ok = False
        if sum(sys_.m) != sys_.n:
            ok = False
    record("eigensystem identities PQ = |X| I", ok)

    ok = True
    for family, params in (("johnson", {"v": 5, "d": 2}), ("hamming", {"d": 3, "q": 2})):
        graph, census, arr, sys_ = _eigensystem_for(family, params, args.vertex_cap)
        for _ in range(200):
            size = rng.randint(1, graph.n)
            idx = rng.sample(range(graph.n), size)
            dist = inner_distribution(VertexSubset(graph, idx), census, sys_)
            rep = width_and_dual_width(dist)
            if rep.width + rep.dual_width < sys_.d:
                ok = False
    record("fundamental inequality on random subsets", ok)

    graph, census, arr, sys_ = _eigensystem_for("johnson", {"v": 7, "d": 3}, args.vertex_cap)
    cert = solve_certificate(sys_, 1)
    record("classical certificate bound", cert.feasible and cert.bound == 15)

    passed = all(c["passed"] for c in checks)
    _emit({"config": _config(args), "checks": checks, "passed": passed}, args)
    return 0 if passed else 2


def _add_common(p, with_family=True, with_t=False, with_subset=False,
                with_enum=False, cap_default=DEFAULT_VERTEX_CAP):
    if with_family:
        p.add_argument("family", nargs="?", choices=sorted(FAMILY_PARAMS))
        p.add_argument("--family", dest="family_opt", choices=sorted(FAMILY_PARAMS))
        p.add_argument("-q", type=int)
        p.add_argument("-v", type=int)
        p.add_argument("-d", type=int)
        p.add_argument("-e", type=int)
    if with_t:
        p.add_argument("-t", type=int)
    if with_subset:
        p.add_argument("--subset", metavar="FILE")
    if with_enum:
        p.add_argument("--enum-cap", type=int, default=ekr_search.ENUM_CAP)
    p.add_argument("--cache", metavar="DIR", default="drg-cache")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--vertex-cap", type=int, default=cap_default,
        help="vertex tier; for search commands this is the exhaustive-search cap",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drgcert",
        description="Exact scheme eigensystems, dual certificates, and "
        "extremal-family search for distance-regular graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a graph and cache it")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eigensystem", help="exact P, Q, multiplicities")
    _add_common(p)
    p.set_defaults(func=cmd_eigensystem)

    p = sub.add_parser("widths", help="inner distribution and widths of a subset")
    _add_common(p, with_subset=True)
    p.set_defaults(func=cmd_widths)

    p = sub.add_parser("certify", help="solve and check the dual certificate")
    _add_common(p, with_t=True, with_subset=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="exhaustive maximum t-intersecting family search")
    _add_common(p, with_t=True, with_enum=True, cap_default=ekr_search.EXHAUSTIVE_CAP)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-theorem", help="full pipeline on the twisted graph")
    p.add_argument("-q", type=int)
    p.add_argument("-d", type=int)
    p.add_argument("-t", type=int)
    _add_common(p, with_family=False, with_enum=True,
                cap_default=ekr_search.EXHAUSTIVE_CAP)
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("selftest", help="fast internal consistency battery")
    _add_common(p, with_family=False)
    p.set_defaults(func=cmd_selftest, seed=0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TierLimitExceeded as exc:
        print(f"tier exceeded: {exc}", file=sys.stderr)
        return 3
    except DrgError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
