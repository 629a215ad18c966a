"""
Command-line entry point: `ectff <subcommand> ...`.

Results go to stdout (or -o FILE), diagnostics to stderr. Exit codes are 0 on
success, 1 on domain or input-validation errors and 2 on usage errors.
"""
import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from .models.catalog import CatalogEngine, default_engine
from .models.designs import search_dds, search_df, verify_dds
from .models.errors import EctffError, ParameterError
from .models.frames import (
    FusionFrame,
    construct_2r4r,
    construct_f_zero,
    construct_trivial,
    construct_zauner,
    direct_sum,
    hoggar_realify,
    naimark_complement,
    spatial_complement,
    verify,
)
from .models.groups import parse_group, parse_subgroup, parse_subset
from .models.harmonic import HarmonicSpec, build, dds_to_ectff, from_df
from .models.triples import (
    NumberField,
    ParamTriple,
    classify,
    orbit_nodes,
    sequence,
    tff_exists,
    window_bounds,
)
from .report.exporter import TableExporter
from .report.generator import ReportGenerator
from .settings import get_settings
from .utils.data_persistence import (
    DataPersistence,
    dds_to_payload,
    family_to_payload,
    frame_to_payload,
    read_dds,
    read_design,
    read_family,
    read_frame,
    read_text,
    to_json,
)
from .utils.validators import parse_batch

logger = logging.getLogger("ectff")

FIELDS = {"real": NumberField.REAL, "complex": NumberField.COMPLEX}


class _Output:
    """Where and how a subcommand writes its result."""

    def __init__(self, args: argparse.Namespace):
        self.json = getattr(args, "json", False) or getattr(args, "pretty", False)
        self.pretty = getattr(args, "pretty", False)
        self.target = getattr(args, "out", None) or "-"
        self.store = DataPersistence()

    def emit(self, text: str) -> None:
        self.store.write_output(self.target, text)

    def emit_json(self, data) -> None:
        self.emit(to_json(data, pretty=self.pretty))


def _triple(args: argparse.Namespace) -> ParamTriple:
    return ParamTriple.of(args.D, args.N, args.R)


def _engine(args: argparse.Namespace) -> CatalogEngine:
    path = args.catalog or get_settings().catalog
    return default_engine(str(path) if path else None, search=getattr(args, "search", False))


def _parse_json_arg(text: str, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParameterError(f"{name} must be a JSON array: {e}") from e


def _orbit_record(t: ParamTriple) -> Dict:
    orbit = classify(t)
    verdict = tff_exists(t)
    return {
        "query": t.model_dump(),
        "class": orbit.tag.value,
        "f": orbit.f_value,
        "minimal_point": orbit.minimal_point.model_dump() if orbit.minimal_point else None,
        "sample": [p.model_dump() for p in orbit.orbit_sample],
        "exists": verdict.exists,
        "seed": verdict.seed.model_dump() if verdict.seed else None,
        "chain": [m.value for m in verdict.chain],
    }


def cmd_orbit(args: argparse.Namespace, out: _Output) -> int:
    t = _triple(args)
    width = args.window if args.window is not None else get_settings().window
    if args.emit_plot_data:
        table = TableExporter.orbit_plot_data(orbit_nodes(t, width))
        if out.json:
            out.emit_json(table.to_dict(orient="records"))
        else:
            out.emit(TableExporter.to_csv(table))
        return 0
    k_min, k_max = window_bounds(width)
    points = sequence(t, k_min, k_max)
    if out.json:
        out.emit_json(points)
    else:
        out.emit(ReportGenerator().orbit(points, k_min))
    return 0


def cmd_classify(args: argparse.Namespace, out: _Output) -> int:
    t = _triple(args)
    if out.json:
        out.emit_json(_orbit_record(t))
    else:
        out.emit(ReportGenerator().classification(t, classify(t)))
    return 0


def cmd_exists(args: argparse.Namespace, out: _Output) -> int:
    t = _triple(args)
    verdict = tff_exists(t)
    if out.json:
        if t.N == 1:
            record = {"query": t.model_dump(), "class": None, "f": None, "minimal_point": None, "sample": [],
                      "exists": verdict.exists, "seed": verdict.seed.model_dump() if verdict.seed else None,
                      "chain": []}
        else:
            record = _orbit_record(t)
        out.emit_json(record)
    else:
        out.emit(ReportGenerator().existence(t, verdict))
    return 0


def cmd_certify(args: argparse.Namespace, out: _Output) -> int:
    engine = _engine(args)
    field = FIELDS[args.field]
    if args.batch:
        triples, errors = parse_batch(read_text(args.batch))
        for message in errors:
            logger.error("%s", message)
        if errors:
            raise ParameterError(f"{len(errors)} unparseable line(s) in {args.batch}")
        reports = engine.certify_batch(triples, field)
        if out.json:
            out.emit(TableExporter.to_jsonl([r.model_dump(mode="json") for r in reports]))
        else:
            out.emit(TableExporter.to_text(TableExporter.certification_table(reports)))
        return 0
    if args.D is None or args.N is None or args.R is None:
        raise ParameterError("certify needs D N R or --batch FILE")
    t = _triple(args)
    report = engine.certify(t, field)
    text = ReportGenerator().certification(report)
    if out.json:
        out.emit_json(report)
    else:
        out.emit(text)
    if args.report_dir:
        envelope = ReportGenerator.envelope("certify", str(t), report.model_dump(mode="json"), report)
        path = DataPersistence(args.report_dir).save_report(str(t), text, envelope)
        logger.info("saved report to %s", path)
    return 0


def _integers(values: List[str], count: int, usage: str) -> List[int]:
    if len(values) != count:
        raise ParameterError(usage)
    try:
        return [int(v) for v in values]
    except ValueError as e:
        raise ParameterError(f"{usage}: {e}") from e


def _frame_from_args(args: argparse.Namespace) -> FusionFrame:
    variant = args.variant
    if variant == "trivial":
        return construct_trivial(ParamTriple.of(*_integers(args.values, 3, "construct trivial needs D N R")))
    if variant in ("c2r4r", "fzero"):
        R, = _integers(args.values, 1, f"construct {variant} needs R")
        return construct_2r4r(R, FIELDS[args.field]) if variant == "c2r4r" else construct_f_zero(R)
    if variant == "zauner":
        if not args.design:
            raise ParameterError("construct zauner needs --design FILE")
        return construct_zauner(read_design(args.design))
    if variant in ("naimark", "spatial", "hoggar"):
        frame = read_frame(args.inputs[0] if args.inputs else "-")
        if variant == "naimark":
            return naimark_complement(frame, args.tol)
        return spatial_complement(frame) if variant == "spatial" else hoggar_realify(frame)
    if variant == "dsum":
        if not args.inputs or len(args.inputs) != 2:
            raise ParameterError("construct dsum needs exactly two --in frames")
        return direct_sum(read_frame(args.inputs[0]), read_frame(args.inputs[1]))
    if variant == "from-df":
        source = args.file or (args.values[0] if args.values else None) or (args.inputs[0] if args.inputs else "-")
        return from_df(read_family(source), args.tol).frame
    if variant == "dds" and args.file:
        return dds_to_ectff(read_dds(args.file), args.tol).frame
    if variant in ("harmonic", "dds"):
        if not (args.group and args.subgroup and args.set):
            raise ParameterError(f"construct {variant} needs --group, --subgroup and --set (or --file for dds)")
        group = parse_group(args.group)
        subgroup = parse_subgroup(group, args.subgroup)
        subset = parse_subset(group, _parse_json_arg(args.set, "--set"))
        if variant == "harmonic":
            result = build(HarmonicSpec(group=group, subgroup=subgroup, subset=subset), args.tol)
            logger.info("harmonic frame %s: df=%s ds_each=%s", result.params,
                        result.combinatorial_flags.is_df, result.combinatorial_flags.is_ds_each)
            return result.frame
        dds = verify_dds(group, subgroup, subset)
        if dds is None:
            raise ParameterError(f"the set is not a divisible difference set of {group} relative to {args.subgroup}")
        return dds_to_ectff(dds, args.tol).frame
    raise ParameterError(f"unknown construction {variant!r}")


def cmd_construct(args: argparse.Namespace, out: _Output) -> int:
    frame = _frame_from_args(args)
    logger.info("constructed %s frame %s", frame.field_tag.value, frame.params)
    out.emit_json(frame_to_payload(frame))
    return 0


def cmd_complement(args: argparse.Namespace, out: _Output) -> int:
    frame = read_frame(args.inputs[0] if args.inputs else "-")
    result = naimark_complement(frame, args.tol) if args.kind == "naimark" else spatial_complement(frame)
    out.emit_json(frame_to_payload(result))
    return 0


def cmd_verify(args: argparse.Namespace, out: _Output) -> int:
    frame = read_frame(args.inputs[0] if args.inputs else "-")
    report = verify(frame, args.tol)
    text = ReportGenerator(angle_rows=None if args.all_angles else 20).verification(report)
    if out.json:
        out.emit_json(report)
    elif args.angles_csv:
        out.emit(TableExporter.to_csv(TableExporter.principal_angle_table(report)))
    else:
        out.emit(text)
    if args.report_dir:
        envelope = ReportGenerator.envelope("verify", str(frame.params), report.model_dump(mode="json"))
        DataPersistence(args.report_dir).save_report(str(frame.params), text, envelope)
    return 0


def cmd_search_df(args: argparse.Namespace, out: _Output) -> int:
    group = parse_group(args.group)
    families = search_df(group, args.k, args.lam, limit=args.limit, cap=args.cap)
    if not families:
        logger.warning("no DF(%d,%d,%d) exists in %s", group.order, args.k, args.lam, group)
    payloads = [family_to_payload(df) for df in families]
    if out.json:
        out.emit_json(payloads[0] if args.limit == 1 and payloads else payloads)
    else:
        out.emit(ReportGenerator().families(families))
    return 0


def cmd_search_dds(args: argparse.Namespace, out: _Output) -> int:
    group = parse_group(args.group)
    subgroup = parse_subgroup(group, args.subgroup)
    found = search_dds(group, subgroup, args.size, semiregular_only=not args.all, limit=args.limit)
    if not found:
        logger.warning("no divisible difference set of size %d in %s relative to %s", args.size, group, args.subgroup)
    payloads = [dds_to_payload(dds) for dds in found]
    out.emit_json(payloads[0] if args.limit == 1 and payloads else payloads)
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, _Output], int]] = {
    "orbit": cmd_orbit,
    "classify": cmd_classify,
    "exists": cmd_exists,
    "certify": cmd_certify,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "search-df": cmd_search_df,
    "search-dds": cmd_search_dds,
    "complement": cmd_complement,
}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="Compact JSON output")
    fmt.add_argument("--pretty", action="store_true", help="Indented JSON output")
    common.add_argument("-o", "--out", default=None, help="Write the result to FILE instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr")
    common.add_argument("--catalog", default=None, help="Alternate catalog JSON (falls back to ECTFF_CATALOG)")
    common.add_argument("--tol", type=float, default=None, help="Verification tolerance (default 1e-9)")
    return common


def _add_triple(parser: argparse.ArgumentParser, optional: bool = False) -> None:
    nargs = "?" if optional else None
    parser.add_argument("D", type=int, nargs=nargs, help="Ambient dimension")
    parser.add_argument("N", type=int, nargs=nargs, help="Number of subspaces")
    parser.add_argument("R", type=int, nargs=nargs, help="Subspace dimension")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ectff", description="Naimark-spatial orbits, harmonic "
                                     "equichordal tight fusion frames and novelty certification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", parents=[common], help="Window of the Naimark-spatial sequence")
    _add_triple(p)
    p.add_argument("--window", type=int, default=None, help="Window width (default 16)")
    p.add_argument("--emit-plot-data", action="store_true", help="Dump (D,R) nodes and moves for plotting")

    p = sub.add_parser("classify", parents=[common], help="Orbit class and minimal point")
    _add_triple(p)

    p = sub.add_parser("exists", parents=[common], help="Does a TFF(D,N,R) exist")
    _add_triple(p)

    p = sub.add_parser("certify", parents=[common], help="Certify ECTFF parameters against the catalog")
    _add_triple(p, optional=True)
    p.add_argument("--field", choices=sorted(FIELDS), default="complex")
    p.add_argument("--batch", default=None, help="File of 'D N R' lines, '-' for stdin")
    p.add_argument("--search", action="store_true", help="Search for difference families when checking constructions")
    p.add_argument("--report-dir", default=None, help="Also save a markdown report with a metadata sidecar")

    p = sub.add_parser("construct", parents=[common], help="Build a fusion frame and print it as JSON")
    p.add_argument("variant", choices=["trivial", "c2r4r", "fzero", "zauner", "naimark", "spatial", "hoggar",
                                       "dsum", "harmonic", "from-df", "dds"])
    p.add_argument("values", nargs="*", help="D N R for trivial, R for c2r4r and fzero, a family file for from-df")
    p.add_argument("--file", default=None, help="Difference family JSON for from-df, divisible difference set JSON for dds")
    p.add_argument("--in", dest="inputs", action="append", default=None, help="Input frame JSON ('-' for stdin)")
    p.add_argument("--design", default=None, help="Block design JSON for zauner")
    p.add_argument("--group", default=None, help='Group literal, e.g. "Z13xZ2"')
    p.add_argument("--subgroup", default=None, help='Subgroup literal, e.g. "Z13x{0}"')
    p.add_argument("--set", default=None, help="JSON array of group elements")
    p.add_argument("--field", choices=sorted(FIELDS), default="complex")

    p = sub.add_parser("verify", parents=[common], help="Verify tightness, equichordality and equi-isoclinicity")
    p.add_argument("--in", dest="inputs", action="append", default=None, help="Frame JSON ('-' for stdin, the default)")
    p.add_argument("--all-angles", action="store_true", help="List every pair in the principal-angle table")
    p.add_argument("--angles-csv", action="store_true", help="Print the principal-angle table as CSV (i,j,k,cos2)")
    p.add_argument("--report-dir", default=None, help="Also save a markdown report with a metadata sidecar")

    p = sub.add_parser("search-df", parents=[common], help="Exhaustive difference family search")
    p.add_argument("--group", required=True, help='Group literal, e.g. "Z19"')
    p.add_argument("--k", type=int, required=True, help="Block size K")
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="Lambda")
    p.add_argument("--limit", type=int, default=None, help="Stop after this many families")
    p.add_argument("--cap", type=int, default=None, help="Largest group order searched (default 64)")

    p = sub.add_parser("search-dds", parents=[common], help="Exhaustive divisible difference set search (JSON)")
    p.add_argument("--group", required=True, help='Group literal, e.g. "Z3xZ3"')
    p.add_argument("--subgroup", required=True, help='Subgroup literal, e.g. "{0}xZ3"')
    p.add_argument("--size", type=int, required=True, help="Set size D")
    p.add_argument("--limit", type=int, default=None, help="Stop after this many sets")
    p.add_argument("--all", action="store_true", help="Also report sets that are not semiregular")

    p = sub.add_parser("complement", parents=[common], help="Naimark or spatial complement of a frame")
    p.add_argument("kind", choices=["naimark", "spatial"])
    p.add_argument("--in", dest="inputs", action="append", default=None, help="Frame JSON ('-' for stdin, the default)")
    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_settings().log_level.upper(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args, _Output(args))
    except ValidationError as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return 1
    except EctffError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
