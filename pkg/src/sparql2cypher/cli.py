"""``s2c``: translate SPARQL to Cypher, build catalogs, verify translations.

Exit codes: 0 success, 1 I/O error, 2 translation or validation error,
3 verification or golden mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .catalog import SchemaCatalog, derive_catalog
from .cypher.render import normalize_whitespace, render
from .errors import S2CError
from .oracle import DEFAULT_MAX_DEPTH, check_equivalence, inject_fault
from .pg_model import rdf_to_pg
from .rdf_model import RdfGraph, parse_ntriples, parse_prefix_file
from .sparql.parser import parse_sparql
from .translator import TranslateOptions, translate

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from None


@dataclass
class Config:
    prefixes: dict[str, str]
    catalog: SchemaCatalog
    dataset: RdfGraph | None
    options: TranslateOptions


def _load_dataset(path: str, prefixes: dict[str, str]) -> RdfGraph:
    try:
        return parse_ntriples(_read(path), prefixes)
    except S2CError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from None


def _config(args, need_dataset: bool) -> Config:
    prefixes = {}
    if args.prefixes:
        try:
            prefixes = parse_prefix_file(_read(args.prefixes))
        except S2CError as exc:
            raise CliError(f"{args.prefixes}: {exc}", EXIT_INVALID) from None
    if not need_dataset and bool(args.catalog) == bool(args.dataset):
        raise CliError("give exactly one catalog source: --catalog FILE or --dataset FILE", EXIT_INVALID)
    dataset = _load_dataset(args.dataset, prefixes) if args.dataset else None
    try:
        if args.catalog:
            cat = SchemaCatalog.from_json(_read(args.catalog))
        else:
            cat = derive_catalog(dataset, args.mixed_predicate)
    except S2CError as exc:
        raise CliError(f"{args.catalog or args.dataset}: {exc}", EXIT_INVALID) from None
    options = TranslateOptions(rel_names=args.rel_names, null_guards=args.null_guards, prefixes=prefixes)
    return Config(prefixes, cat, dataset, options)


def _query_files(inputs: list[str]) -> list[Path]:
    files: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files.extend(sorted(p.glob("*.rq")))
        elif p.exists():
            files.append(p)
        else:
            raise CliError(f"cannot read {item}: no such file", EXIT_IO)
    if not files:
        raise CliError("no query files found", EXIT_IO)
    return files


# --- translate ------------------------------------------------------------------


def cmd_translate(args) -> int:
    cfg = _config(args, need_dataset=False)
    files = _query_files(args.queries)
    out_dir = Path(args.output) if args.output else None
    golden = Path(args.golden) if args.golden else None
    status = EXIT_OK
    for f in files:
        try:
            t0 = time.perf_counter()
            text = render(translate(parse_sparql(_read(f)), cfg.catalog, cfg.options), pretty=args.pretty)
            elapsed = (time.perf_counter() - t0) * 1000
        except S2CError as exc:
            print(f"{f}: {exc}", file=sys.stderr)
            status = max(status, EXIT_INVALID)
            continue
        if out_dir is not None:
            _write(out_dir / (f.stem + ".cypher"), text + "\n")
        else:
            if len(files) > 1:
                print(f"// {f.name}")
            print(text)
        if args.timing:
            print(f"{f.name}: translated in {elapsed:.2f} ms", file=sys.stderr)
        if golden is not None:
            expected_file = golden / (f.stem + ".cypher") if golden.is_dir() else golden
            expected = _read(expected_file)
            if normalize_whitespace(expected) == normalize_whitespace(text):
                print(f"{f.name}: matches {expected_file}", file=sys.stderr)
            else:
                print(f"{f.name}: differs from {expected_file}", file=sys.stderr)
                print(f"  expected: {normalize_whitespace(expected)}", file=sys.stderr)
                print(f"  actual:   {normalize_whitespace(text)}", file=sys.stderr)
                status = max(status, EXIT_MISMATCH)
    return status


# --- catalog --------------------------------------------------------------------


def cmd_catalog(args) -> int:
    prefixes = parse_prefix_file(_read(args.prefixes)) if args.prefixes else {}
    g = _load_dataset(args.dataset, prefixes)
    try:
        cat = derive_catalog(g, args.mixed_predicate)
    except S2CError as exc:
        raise CliError(f"{args.dataset}: {exc}", EXIT_INVALID) from None
    if args.output:
        _write(Path(args.output), cat.to_json())
    else:
        sys.stdout.write(cat.to_json())
    print(f"|T| = {len(cat.relationship_types)}, |P| = {len(cat.property_keys)}", file=sys.stderr)
    return EXIT_OK


# --- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = _config(args, need_dataset=True)
    files = _query_files(args.queries)
    g = cfg.dataset
    display = {**g.prefix_map, **cfg.prefixes}
    try:
        n_nodes = len(rdf_to_pg(g, cfg.catalog, display).nodes)
    except S2CError as exc:
        raise CliError(f"{args.dataset}: {exc}", EXIT_INVALID) from None
    if n_nodes > args.node_bound:
        raise CliError(
            f"{args.dataset} maps to {n_nodes} nodes, above the oracle bound of {args.node_bound}; "
            "use a smaller sample or raise --node-bound",
            EXIT_INVALID,
        )
    reports = []
    for f in files:
        try:
            q = parse_sparql(_read(f))
        except S2CError as exc:
            print(f"FAIL {f.stem}: {f}: {exc}")
            reports.append({"name": f.stem, "passed": False, "error": str(exc)})
            continue
        rep = check_equivalence(
            q, g, cfg.catalog, cfg.options, name=f.stem, max_depth=args.max_depth,
            corrupt=inject_fault if args.inject_fault else None,
        )
        print(rep.summary_line() if rep.passed else rep.diff_text())
        reports.append(rep.to_dict())
    passed = sum(1 for r in reports if r["passed"])
    print(f"{passed}/{len(reports)} queries preserved their answers")
    if args.report:
        _write(Path(args.report), json.dumps({"passed": passed, "total": len(reports), "queries": reports}, indent=2) + "\n")
    return EXIT_OK if passed == len(reports) else EXIT_MISMATCH


# --- entry point ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--catalog", help="catalog JSON file")
    p.add_argument("--dataset", help="N-Triples dataset (derives the catalog when --catalog is absent)")
    p.add_argument("--prefixes", help="prefix file: one `prefix iri` pair per line")
    p.add_argument("--mixed-predicate", choices=("edge", "property"), help="how to classify predicates seen with both object kinds")
    p.add_argument("--rel-names", choices=("predicate", "anonymous"), default="predicate", help="naming of relationship variables")
    p.add_argument("--null-guards", action="store_true", help="require every bound property to be present")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="s2c", description="Translate SPARQL SELECT queries into Cypher.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("translate", help="translate .rq files to Cypher")
    t.add_argument("queries", nargs="+", help=".rq files or directories")
    _common(t)
    t.add_argument("--pretty", action="store_true", help="one clause per line")
    t.add_argument("--timing", action="store_true", help="report translation time per query")
    t.add_argument("--golden", help="expected .cypher file or directory to compare against")
    t.add_argument("-o", "--output", help="directory for .cypher output files")
    t.set_defaults(func=cmd_translate)

    c = sub.add_parser("catalog", help="derive a catalog from a dataset")
    c.add_argument("dataset", help="N-Triples dataset")
    c.add_argument("--prefixes", help="prefix file")
    c.add_argument("--mixed-predicate", choices=("edge", "property"))
    c.add_argument("-o", "--output", help="catalog file to write (default: stdout)")
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("verify", help="check that translations preserve answers on a dataset")
    v.add_argument("queries", nargs="+", help=".rq files or directories")
    _common(v)
    v.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH, help="bound on variable-length expansion")
    v.add_argument("--node-bound", type=int, default=10_000, help="refuse datasets with more nodes than this")
    v.add_argument("--report", help="write a JSON summary here")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify" and not args.dataset:
        print("s2c verify: --dataset is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        print(f"s2c {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
