"""Command-line front end and flat-file formats.

Files are restricted structured text (JSON: objects, arrays, strings,
integers, booleans; angles and arc endpoints are reduced fractions of a
turn written as strings like "3/4"). One loader validates each format and
every datum before use. Reports are deterministic: identical inputs and
flags produce byte-identical output.

Exit codes: 0 success / check passed; 1 definitive verification failure
(replayable witness printed); 2 inconclusive or resource-limited; 3 input
errors. Unknown flags are rejected with exit 3.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from .disc import (
    Arc,
    ArcFamily,
    FiniteTriangulation,
    InfiniteTriangulation,
    flip_arc,
    frac_str,
    limit_arcs,
    parse_arc_label,
    parse_frac,
    seed_from_triangulation,
    validate_triangulation,
)
from .colimits import (
    ORACLES,
    FiniteSeedOracle,
    build_filtration,
    stable_mutation,
    triangulation_filtration,
)
from .errors import (
    ClusterLabError,
    CrossingPair,
    Inconclusive,
    InvalidSeed,
    LaurentParseError,
    NotAdmissible,
    NotAdmissibleAtStage,
    NotExchangeable,
    NotFlippable,
    NotMaximal,
    ParseError,
    ResourceLimit,
    SearchBudgetExceeded,
)
from .laurent import LaurentPoly, format_poly, parse_poly
from .morphisms import (
    ClusterMap,
    check_cm3,
    check_ideal_witness,
    image_seed,
)
from .seeds import (
    Seed,
    check_similar,
    check_skew_symmetrizable,
    connected_components,
    coproduct,
    enumerate_cluster_variables,
    mutate_sequence,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


# -- file formats -------------------------------------------------------------


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc


def _expect(cond: bool, message: str, expected: str | None = None):
    if not cond:
        raise ParseError(message, expected=expected)


def load_seed_file(path: str) -> Seed:
    """Parse, validate, and skew-symmetrizability-check a seed file."""
    data = _load_json(path)
    _expect(isinstance(data, dict), "seed file must be an object")
    _expect("variables" in data, "seed file needs a 'variables' key")
    _expect(isinstance(data["variables"], list), "'variables' must be a list")
    labels: list[str] = []
    exchangeable: set[str] = set()
    for entry in data["variables"]:
        _expect(
            isinstance(entry, dict) and "id" in entry,
            "each variable needs an 'id'",
            expected='{"id": ..., "exchangeable": ...}',
        )
        _expect(isinstance(entry["id"], str), "variable ids must be strings")
        labels.append(entry["id"])
        if entry.get("exchangeable", False):
            exchangeable.add(entry["id"])
    label_set = set(labels)
    entries: list[tuple[str, str, int]] = []
    for triple in data.get("matrix", []):
        _expect(
            isinstance(triple, list) and len(triple) == 3,
            "matrix entries are [row, col, value] triples",
        )
        row, col, value = triple
        _expect(
            isinstance(value, int) and not isinstance(value, bool),
            "matrix values must be integers",
        )
        if row not in label_set or col not in label_set:
            raise ParseError(
                f"matrix entry references undeclared variable {row!r} or {col!r}"
            )
        entries.append((row, col, value))
    try:
        seed = Seed.initial(labels, exchangeable, entries)
        if "values" in data:
            values = {}
            for pair in data["values"]:
                _expect(
                    isinstance(pair, list) and len(pair) == 2,
                    "'values' entries are [id, laurent-text] pairs",
                )
                vid, text = pair
                if vid not in label_set:
                    raise ParseError(
                        f"values entry references undeclared variable {vid!r}"
                    )
                values[vid] = parse_poly(text)
            _expect(set(values) == label_set, "'values' must cover every variable")
            seed = Seed(seed.labels, seed.exchangeable, seed.matrix, values)
        check_skew_symmetrizable(seed.matrix, seed.labels)
    except LaurentParseError as exc:
        raise ParseError(f"bad laurent text: {exc}") from exc
    except ClusterLabError as exc:
        raise InvalidSeed(str(exc)) from exc
    return seed


def seed_to_data(seed: Seed) -> dict:
    return {
        "variables": [
            {"id": l, "exchangeable": l in seed.exchangeable}
            for l in sorted(seed.labels)
        ],
        "matrix": sorted(
            [v, w, b] for v, row in seed.matrix.items() for w, b in row.items()
        ),
        "values": [[l, format_poly(seed.values[l])] for l in sorted(seed.labels)],
    }


def save_seed_file(seed: Seed, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(seed_to_data(seed), fh, indent=2)
        fh.write("\n")


def load_triangulation_file(path: str) -> FiniteTriangulation | InfiniteTriangulation:
    data = _load_json(path)
    _expect(isinstance(data, dict), "triangulation file must be an object")
    points = []
    for p in data.get("points", []):
        _expect(isinstance(p, str), "points are fraction strings")
        points.append(parse_frac(p))
    arcs = set()
    for pair in data.get("arcs", []):
        _expect(
            isinstance(pair, list) and len(pair) == 2,
            "arcs are [point, point] pairs",
        )
        arcs.add(Arc.of(parse_frac(pair[0]), parse_frac(pair[1])))
    families = []
    for fam in data.get("families", []):
        _expect(isinstance(fam, dict) and "kind" in fam, "families need a 'kind'")
        kwargs: dict[str, Any] = {"kind": fam["kind"]}
        for key in ("limit", "scale", "base", "limit2", "scale2"):
            if key in fam:
                kwargs[key] = Fraction(fam[key]) if key.startswith("scale") else parse_frac(fam[key])
        if "start" in fam:
            _expect(isinstance(fam["start"], int), "'start' must be an integer")
            kwargs["start"] = fam["start"]
        families.append(ArcFamily(**kwargs))
    if families:
        return InfiniteTriangulation(
            families=tuple(families),
            extra_arcs=frozenset(arcs),
            finite_points=tuple(points),
        )
    return validate_triangulation(points, arcs)


def triangulation_to_data(t: FiniteTriangulation) -> dict:
    return {
        "points": [frac_str(p) for p in t.points],
        "arcs": sorted([frac_str(a.p), frac_str(a.q)] for a in t.arcs),
    }


def load_map_file(path: str, source: Seed, target: Seed) -> ClusterMap:
    data = _load_json(path)
    _expect(isinstance(data, dict), "map file must be an object")
    _expect("assignment" in data, "map file needs an 'assignment' key")
    assignment: dict[str, str | int] = {}
    for pair in data["assignment"]:
        _expect(
            isinstance(pair, list) and len(pair) == 2,
            "assignment entries are [source-id, target-id-or-integer] pairs",
        )
        src, img = pair
        _expect(isinstance(src, str), "assignment sources are ids")
        ok_img = isinstance(img, str) or (
            isinstance(img, int) and not isinstance(img, bool)
        )
        _expect(ok_img, "assignment images are ids or integers")
        assignment[src] = img
    extra: dict[LaurentPoly, str | int] = {}
    for pair in data.get("extra", []):
        _expect(
            isinstance(pair, list) and len(pair) == 2,
            "'extra' entries are [laurent-text, target-id-or-integer] pairs",
        )
        text, img = pair
        try:
            gen = parse_poly(text)
        except LaurentParseError as exc:
            raise ParseError(f"bad laurent text in 'extra': {exc}") from exc
        extra[gen] = img
    try:
        return ClusterMap(source, target, assignment, extra)
    except ClusterLabError as exc:
        raise InvalidSeed(str(exc)) from exc


# -- reporting ------------------------------------------------------------------


def _render_plain(report: dict, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_plain(value, indent + 1))
        elif isinstance(value, list):
            if all(not isinstance(x, (dict, list)) for x in value):
                lines.append(f"{pad}{key}: " + ", ".join(str(x) for x in value))
            else:
                lines.append(f"{pad}{key}:")
                for x in value:
                    if isinstance(x, dict):
                        lines.append(f"{pad}  -")
                        lines.extend(_render_plain(x, indent + 2))
                    elif isinstance(x, list):
                        lines.append(f"{pad}  - " + ", ".join(str(y) for y in x))
                    else:
                        lines.append(f"{pad}  - {x}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def emit(report: dict, fmt: str) -> None:
    if fmt == "structured":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_render_plain(report)) + "\n")


# -- commands ---------------------------------------------------------------------


def _cmd_mutate(args) -> tuple[int, dict]:
    seed = load_seed_file(args.seed)
    steps = args.sequence.split(",") if args.sequence else [args.at]
    result = mutate_sequence(seed, steps)
    if args.out:
        save_seed_file(result, args.out)
    return EXIT_OK, {
        "command": "mutate",
        "sequence": steps,
        "seed": seed_to_data(result),
    }


def _cmd_enumerate(args) -> tuple[int, dict]:
    seed = load_seed_file(args.seed)
    values = enumerate_cluster_variables(seed, args.depth, args.nodes)
    return EXIT_OK, {
        "command": "enumerate",
        "depth": args.depth,
        "count": len(values),
        "values": [format_poly(v) for v in values],
    }


def _cmd_components(args) -> tuple[int, dict]:
    seed = load_seed_file(args.seed)
    parts = connected_components(seed)
    return EXIT_OK, {
        "command": "components",
        "count": len(parts),
        "parts": [sorted(p.labels) for p in parts],
    }


def _cmd_coproduct(args) -> tuple[int, dict]:
    seeds = [load_seed_file(p) for p in args.seeds]
    result = coproduct(seeds)
    if args.out:
        save_seed_file(result, args.out)
    return EXIT_OK, {"command": "coproduct", "seed": seed_to_data(result)}


def _cmd_similar(args) -> tuple[int, dict]:
    s = load_seed_file(args.src)
    t = load_seed_file(args.dst)
    bijection = check_similar(s, t)
    if bijection is None:
        return EXIT_FAIL, {"command": "similar", "similar": False}
    return EXIT_OK, {
        "command": "similar",
        "similar": True,
        "bijection": [[v, bijection[v]] for v in sorted(bijection)],
    }


def _report_cm(report) -> dict:
    out = {
        "cm1": report.cm1,
        "cm2": report.cm2,
        "cm2_witnesses": list(report.cm2_witnesses),
    }
    if report.counterexample is None:
        out["cm3"] = f"verified-to-depth {report.cm3_verified_to}"
    else:
        ce = report.counterexample
        out["cm3"] = "counterexample"
        out["counterexample"] = {
            "sequence": list(ce.sequence),
            "variable": ce.variable,
            "lhs": format_poly(ce.lhs),
            "rhs": format_poly(ce.rhs),
        }
    out["nodes"] = report.nodes
    return out


def _cmd_check_morphism(args) -> tuple[int, dict]:
    src = load_seed_file(args.src)
    dst = load_seed_file(args.dst)
    m = load_map_file(args.map, src, dst)
    report = check_cm3(m, args.depth, args.nodes)
    code = EXIT_OK if report.passed else EXIT_FAIL
    return code, {"command": "check-morphism", **_report_cm(report)}


def _cmd_image_seed(args) -> tuple[int, dict]:
    src = load_seed_file(args.src)
    dst = load_seed_file(args.dst)
    m = load_map_file(args.map, src, dst)
    img = image_seed(m)
    if args.out:
        save_seed_file(img, args.out)
    return EXIT_OK, {"command": "image-seed", "seed": seed_to_data(img)}


def _cmd_check_ideal(args) -> tuple[int, dict]:
    src = load_seed_file(args.src)
    dst = load_seed_file(args.dst)
    m = load_map_file(args.map, src, dst)
    morphism_report = check_cm3(m, args.depth, args.nodes)
    if not morphism_report.passed:
        return EXIT_FAIL, {
            "command": "check-ideal",
            "error": "the map is not a verified rooted cluster morphism",
            **_report_cm(morphism_report),
        }
    ideal = check_ideal_witness(m, args.depth, args.nodes)
    if ideal.is_witness:
        return EXIT_FAIL, {
            "command": "check-ideal",
            "status": "witness",
            "witness": format_poly(ideal.witness),
            "depth": ideal.depth,
        }
    return EXIT_OK, {
        "command": "check-ideal",
        "status": "ideal-to-depth",
        "depth": ideal.depth,
    }


def _cmd_validate_tri(args) -> tuple[int, dict]:
    tri = load_triangulation_file(args.tri)
    kind = "finite" if isinstance(tri, FiniteTriangulation) else "infinite"
    out = {"command": "validate-tri", "valid": True, "kind": kind}
    if kind == "finite":
        out["points"] = len(tri.points)
        out["arcs"] = len(tri.arcs)
    return EXIT_OK, out


def _cmd_flip(args) -> tuple[int, dict]:
    tri = load_triangulation_file(args.tri)
    if not isinstance(tri, FiniteTriangulation):
        raise ParseError("flip applies to finite triangulations")
    arc = parse_arc_label(args.arc)
    result = flip_arc(tri, arc)
    new_arc = next(iter(result.arcs - tri.arcs))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(triangulation_to_data(result), fh, indent=2)
            fh.write("\n")
    return EXIT_OK, {
        "command": "flip",
        "removed": arc.label,
        "added": new_arc.label,
        "triangulation": triangulation_to_data(result),
    }


def _cmd_tri_seed(args) -> tuple[int, dict]:
    tri = load_triangulation_file(args.tri)
    if not isinstance(tri, FiniteTriangulation):
        raise ParseError("tri-seed applies to finite triangulations")
    seed = seed_from_triangulation(tri)
    if args.out:
        save_seed_file(seed, args.out)
    return EXIT_OK, {"command": "tri-seed", "seed": seed_to_data(seed)}


def _cmd_limit_arcs(args) -> tuple[int, dict]:
    tri = load_triangulation_file(args.tri)
    if isinstance(tri, FiniteTriangulation):
        found: list[str] = []
    else:
        found = sorted(a.label for a in limit_arcs(tri))
    return EXIT_OK, {"command": "limit-arcs", "limit_arcs": found}


def _oracle_from_args(args):
    name = args.oracle
    if name.startswith("wrap:"):
        return FiniteSeedOracle(load_seed_file(name[len("wrap:") :]))
    if name not in ORACLES:
        raise ParseError(
            f"unknown oracle {name!r}",
            expected="path-quiver | fan | split-fountain | nest | wrap:SEEDFILE",
        )
    return ORACLES[name]()


def _cmd_filtration(args) -> tuple[int, dict]:
    if args.tri:
        tri = load_triangulation_file(args.tri)
        fil = triangulation_filtration(tri, args.steps)
    else:
        fil = build_filtration(_oracle_from_args(args), args.steps)
    if args.out_dir:
        import os

        os.makedirs(args.out_dir, exist_ok=True)
        for i, stage in enumerate(fil.stages):
            save_seed_file(stage, os.path.join(args.out_dir, f"stage{i}.seed"))
    return EXIT_OK, {
        "command": "filtration",
        "provenance": fil.provenance,
        "stages": [
            {"index": i, "size": len(s.labels), "exchangeable": len(s.exchangeable)}
            for i, s in enumerate(fil.stages)
        ],
    }


def _cmd_stable_mutate(args) -> tuple[int, dict]:
    oracle = _oracle_from_args(args)
    seq = args.sequence.split(",") if args.sequence else []
    value, stage = stable_mutation(oracle, seq, args.target)
    return EXIT_OK, {
        "command": "stable-mutate",
        "sequence": seq,
        "target": args.target,
        "value": format_poly(value),
        "stage": stage,
        "certified_against": stage + 1,
    }


def _cmd_positivity(args) -> tuple[int, dict]:
    oracle = _oracle_from_args(args)
    seq = args.sequence.split(",") if args.sequence else []
    value, stage = stable_mutation(oracle, seq, args.target)
    positive = value.has_nonnegative_coefficients()
    report = {
        "command": "positivity",
        "sequence": seq,
        "target": args.target,
        "value": format_poly(value),
        "stage": stage,
        "positive": positive,
    }
    if not positive:
        bad = sorted(
            (format_poly(LaurentPoly({m: c})) for m, c in value.terms.items() if c < 0)
        )
        report["negative_terms"] = bad
        return EXIT_FAIL, report
    return EXIT_OK, report


# -- parser ------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="clusterlab",
        description="Exact computations in rooted cluster algebras.",
    )
    parser.add_argument(
        "--format",
        choices=("plain", "structured"),
        default="plain",
        help="report format (structured = JSON with the same content)",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="cap on internal parallelism; execution is deterministic and "
        "currently sequential regardless",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, depth=True, nodes=True):
        if depth:
            p.add_argument("--depth", type=int, default=4)
        if nodes:
            p.add_argument("--nodes", type=int, default=100_000)

    p = sub.add_parser("mutate", help="mutate a seed at a variable or along a sequence")
    p.add_argument("--seed", required=True)
    p.add_argument("--at")
    p.add_argument("--sequence")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_mutate)

    p = sub.add_parser("enumerate", help="depth-bounded cluster variable census")
    p.add_argument("--seed", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--nodes", type=int, default=100_000)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("components", help="connected components of a seed")
    p.add_argument("--seed", required=True)
    p.set_defaults(func=_cmd_components)

    p = sub.add_parser("coproduct", help="disjoint union of seeds")
    p.add_argument("--seeds", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coproduct)

    p = sub.add_parser("similar", help="similarity of two seeds")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.set_defaults(func=_cmd_similar)

    p = sub.add_parser("check-morphism", help="CM1/CM2/CM3 verification")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--map", required=True)
    common(p)
    p.set_defaults(func=_cmd_check_morphism)

    p = sub.add_parser("image-seed", help="image seed of a candidate morphism")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_image_seed)

    p = sub.add_parser("check-ideal", help="search for a non-ideal witness")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--map", required=True)
    common(p)
    p.set_defaults(func=_cmd_check_ideal)

    p = sub.add_parser("validate-tri", help="validate a triangulation file")
    p.add_argument("--tri", required=True)
    p.set_defaults(func=_cmd_validate_tri)

    p = sub.add_parser("flip", help="diagonal flip of an exchangeable arc")
    p.add_argument("--tri", required=True)
    p.add_argument("--arc", required=True, help="arc label like 0/1~1/2")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_flip)

    p = sub.add_parser("tri-seed", help="seed of a finite triangulation")
    p.add_argument("--tri", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_tri_seed)

    p = sub.add_parser("limit-arcs", help="limit arcs of an infinite triangulation")
    p.add_argument("--tri", required=True)
    p.set_defaults(func=_cmd_limit_arcs)

    p = sub.add_parser("filtration", help="finite full-subseed filtration")
    p.add_argument("--oracle", default="path-quiver")
    p.add_argument("--tri", help="build from a triangulation file instead")
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_filtration)

    p = sub.add_parser("stable-mutate", help="mutation in an infinite seed")
    p.add_argument("--oracle", required=True)
    p.add_argument("--sequence", default="")
    p.add_argument("--target", required=True)
    p.set_defaults(func=_cmd_stable_mutate)

    p = sub.add_parser("positivity", help="positivity of a stable mutation value")
    p.add_argument("--oracle", required=True)
    p.add_argument("--sequence", default="")
    p.add_argument("--target", required=True)
    p.set_defaults(func=_cmd_positivity)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    if args.verb == "mutate" and not (args.at or args.sequence):
        parser.error("mutate needs --at or --sequence")
    try:
        code, report = args.func(args)
    except (ParseError, InvalidSeed, LaurentParseError) as exc:
        emit({"error": str(exc)}, args.format)
        return EXIT_INPUT
    except (NotExchangeable, NotAdmissible, NotFlippable, NotAdmissibleAtStage) as exc:
        emit({"error": str(exc)}, args.format)
        return EXIT_INPUT
    except (CrossingPair, NotMaximal) as exc:
        emit({"error": str(exc), "valid": False}, args.format)
        return EXIT_FAIL
    except (Inconclusive, ResourceLimit, SearchBudgetExceeded) as exc:
        emit({"inconclusive": str(exc)}, args.format)
        return EXIT_INCONCLUSIVE
    except ClusterLabError as exc:
        emit({"error": str(exc)}, args.format)
        return EXIT_FAIL
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
