import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

try:
    from . import db
    from . import migrations
    from .constants import (
        DENOMINATORS,
        conservative_constant,
        democratic_constant,
        greedy_type_constant,
        indicator_extremes,
        quasi_greedy_constant,
        reverse_conservative_constant,
    )
    from .corpus import make_corpus
    from .errors import FUNCTIONALS, SIDES, dist_indicator, sigma_gag, sigma_overlap
    from .exceptions import GreedyBasesError, InvalidParameterError
    from .greedy import BRANCH_RULES, WEAK_POLICIES, BranchSelector, bga_run, greedy_ordering, wtga
    from .logger import get_logger, setup_logging
    from .records import dumps_record, jsonable, one_based
    from .settings import configure_settings, get_settings, reset_settings_cache
    from .space import basis_constant, dual_norm_witness, is_absolute, norm, project
    from .specfile import parse_space, parse_vector, vector_extent
    from .storage import record_run
    from .verify import CSV_COLUMNS, run_suite
except ImportError:
    # Allow running as a script directly (e.g. python src/greedybases/cli.py)
    sys.path.append(str(Path(__file__).parent))
    import db
    import migrations
    from constants import (
        DENOMINATORS,
        conservative_constant,
        democratic_constant,
        greedy_type_constant,
        indicator_extremes,
        quasi_greedy_constant,
        reverse_conservative_constant,
    )
    from corpus import make_corpus
    from errors import FUNCTIONALS, SIDES, dist_indicator, sigma_gag, sigma_overlap
    from exceptions import GreedyBasesError, InvalidParameterError
    from greedy import BRANCH_RULES, WEAK_POLICIES, BranchSelector, bga_run, greedy_ordering, wtga
    from logger import get_logger, setup_logging
    from records import dumps_record, jsonable, one_based
    from settings import configure_settings, get_settings, reset_settings_cache
    from space import basis_constant, dual_norm_witness, is_absolute, norm, project
    from specfile import parse_space, parse_vector, vector_extent
    from storage import record_run
    from verify import CSV_COLUMNS, run_suite

logger = get_logger("greedybases.cli")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


# -------------------------------
# Input / output helpers
# -------------------------------


def _load_space(args):
    dim = args.dim
    if dim is None and getattr(args, "vec", None):
        dim = vector_extent(args.vec)
    return parse_space(args.space, dim)


def _csv_cell(value):
    value = jsonable(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return "" if value is None else value


def _render(records: list[dict], fmt: str, columns=None) -> str:
    if fmt == "json":
        return "".join(dumps_record(r) + "\n" for r in records)
    if columns is None:
        columns = list(records[0]) if records else []
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({c: _csv_cell(r.get(c)) for c in columns})
    return buffer.getvalue()


def _emit(args, records: list[dict], columns=None):
    """Write the whole report once, to --out or stdout."""
    text = _render(records, args.format, columns)
    if args.out:
        out = Path(args.out).expanduser()
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        logger.info(f"Report written to {out}")
    else:
        sys.stdout.write(text)


# -------------------------------
# Commands
# -------------------------------


def run_norm(args):
    space = _load_space(args)
    x = parse_vector(args.vec, space.dim)
    record = {"space": args.space, "vector": x, "norm": norm(space, x)}
    if args.dual:
        value, witness = dual_norm_witness(space, x)
        record.update({"dual_norm": value, "dual_witness": witness})
    _emit(args, [record])
    return EXIT_OK


def _branch_thresholds(x: np.ndarray, chosen, tau: float) -> list[float]:
    residual = x.copy()
    out = []
    for idx in chosen:
        out.append(float(tau * np.max(np.abs(residual))))
        residual[idx] = 0.0
    return out


def run_greedy(args):
    space = _load_space(args)
    x = parse_vector(args.vec, space.dim)
    record = {"space": args.space, "algo": args.algo, "m": args.m, "vector": x}
    if args.algo == "tga":
        selection = greedy_ordering(x, args.m)
        chosen = selection.order[: args.m]
        approximant = project(x, chosen)
        record["thresholds"] = [abs(v) for v in selection.values[: args.m]]
    elif args.algo == "wtga":
        selection, approximant = wtga(x, args.m, args.tau, args.policy)
        chosen = selection.indices
        record.update({"tau": args.tau, "policy": selection.policy, "thresholds": selection.thresholds})
    else:
        run = bga_run(x, args.m, BranchSelector(args.tau, args.rule))
        chosen = run.indices
        approximant = run.approximant
        record.update({
            "tau": args.tau,
            "rule": args.rule,
            "thresholds": _branch_thresholds(x, chosen, args.tau),
            "admissible_sets": [one_based(s) for s in run.admissible_sets],
        })
    residual = x - approximant
    record.update({
        "selection": one_based(chosen),
        "index_set": sorted(one_based(chosen)),
        "approximant": approximant,
        "residual": residual,
        "residual_norm": norm(space, residual),
    })
    _emit(args, [record])
    return EXIT_OK


def run_errors(args):
    space = _load_space(args)
    x = parse_vector(args.vec, space.dim)
    m_values = [args.m] if args.m is not None else range(1, space.dim + 1)
    records = []
    for m in m_values:
        values = [func(space, x, m) for func in FUNCTIONALS.values()]
        values.extend(dist_indicator(space, x, m, side) for side in SIDES)
        values.append(sigma_gag(space, x, m))
        if args.lam is not None:
            values.append(sigma_overlap(space, x, m, args.lam))
        for i, value in enumerate(values):
            record = {"space": args.space, "m": m, **value.to_record()}
            if value.functional == "dist_indicator":
                record["side"] = SIDES[i - len(FUNCTIONALS)]
            records.append(record)
    _emit(args, records, columns=("m", "functional", "side", "value", "feasible", "witness_set"))
    return EXIT_OK


def run_constants(args):
    space = _load_space(args)
    seed = get_settings().seed
    estimates = [
        basis_constant(space, seed=seed),
        democratic_constant(space),
        conservative_constant(space),
        reverse_conservative_constant(space),
    ]
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()] if args.kinds else []
    unknown = [k for k in kinds if k not in DENOMINATORS]
    if unknown:
        raise InvalidParameterError(f"Unknown constant kinds {unknown}. Available: {', '.join(DENOMINATORS)}")
    corpus = None
    if kinds or not is_absolute(space):
        corpus = make_corpus(space.dim, args.corpus_size, seed)
    estimates.append(quasi_greedy_constant(space, corpus))
    for kind in kinds:
        estimates.append(greedy_type_constant(space, kind, corpus, seed=seed))

    records = [{"space": args.space, **e.to_record()} for e in estimates]
    extremes = indicator_extremes(space)
    phi, running = [], 0.0
    for row in extremes:
        running = max(running, row.max_value)
        phi.append(running)
    records.append({
        "space": args.space,
        "kind": "fundamental_function",
        "value": phi,
        "exactness": "exact",
        "witness": {"max_sets": [one_based(r.max_set) for r in extremes]},
        "budget": {"size_cap": len(extremes)},
        "seed": None,
    })
    _emit(args, records, columns=("kind", "value", "exactness"))
    return EXIT_OK


def run_verify(args):
    space = _load_space(args)
    seed = get_settings().seed
    reports = run_suite(
        space,
        args.suite,
        corpus_size=args.corpus_size,
        seed=seed,
        tau=args.tau,
        rule=args.rule,
    )
    records = [r.to_record() for r in reports]
    _emit(args, records, columns=CSV_COLUMNS)

    if not args.no_record:
        record_run(
            space=args.space,
            suite=args.suite,
            seed=seed,
            reports=reports,
            report_text=_render(records, "json"),
            corpus_size=args.corpus_size or get_settings().corpus_size,
        )

    failed = [r.check_id for r in reports if r.violation_count]
    skipped = [r.check_id for r in reports if r.skipped is not None]
    if skipped:
        logger.info(f"Skipped: {', '.join(skipped)}")
    if failed:
        logger.warning(f"Violations in: {', '.join(failed)}")
        return EXIT_VIOLATION
    logger.info(f"All {len(reports) - len(skipped)} checks passed on {space.label}")
    return EXIT_OK


def run_history_list(args):
    runs = db.list_runs(limit=args.limit, space=args.space)
    if not runs:
        print("No verify runs recorded.")
        return EXIT_OK

    print("Recorded runs:")
    for r in runs:
        print(f"  * #{r['id']} {r['created_at']} {r['space']} suite={r['suite']} seed={r['seed']} {r['status']} ({r['violations']} violations)")
    return EXIT_OK


def run_history_show(args):
    run = db.get_run(args.run_id)
    if run is None:
        raise InvalidParameterError(f"No recorded run with id {args.run_id}")
    sys.stdout.write(run["report"] or "")
    return EXIT_OK


def run_history_delete(args):
    if not db.delete_run(args.run_id):
        raise InvalidParameterError(f"No recorded run with id {args.run_id}")
    print(f"Deleted run #{args.run_id}")
    return EXIT_OK


# -------------------------------
# Parser
# -------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", type=str, required=True, help="lp:<p>[:<d>], weighted:<w,...>, example:<n>, summing:<d>, dual(<spec>) or file:<path>")
    common.add_argument("--dim", type=int, default=None, help="Dimension for lp shorthands without one")
    common.add_argument("--seed", type=int, default=None, help="Corpus seed (default from settings: 42)")
    common.add_argument("--cap-dim", type=int, default=None, help="Largest dimension for subset enumeration")
    common.add_argument("--cap-subset", type=int, default=None, help="Largest subset size for indicator tables")
    common.add_argument("--workers", type=int, default=None, help="Worker threads for independent jobs")
    common.add_argument("--out", type=str, default=None, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="JSON lines or CSV")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Greedy approximation toolkit for finite-dimensional normed spaces")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")
    common = _common_parser()

    # Subcommand: norm
    parser_norm = subparsers.add_parser("norm", parents=[common], help="Norm (and dual norm) of a vector")
    parser_norm.add_argument("--vec", type=str, required=True, help="e<i>, <c>x[a..b], sums of those, comma list or file:<path>")
    parser_norm.add_argument("--dual", action="store_true", help="Also print the dual norm with its LP witness")
    parser_norm.set_defaults(func=run_norm)

    # Subcommand: greedy
    parser_greedy = subparsers.add_parser("greedy", parents=[common], help="Run TGA, WTGA or BGA on a vector")
    parser_greedy.add_argument("--vec", type=str, required=True)
    parser_greedy.add_argument("--m", type=int, required=True, help="Number of terms")
    parser_greedy.add_argument("--algo", choices=["tga", "wtga", "bga"], default="tga")
    parser_greedy.add_argument("--tau", type=float, default=0.5, help="Weakness parameter in (0, 1)")
    parser_greedy.add_argument("--policy", choices=sorted(WEAK_POLICIES), default="greedy", help="WTGA admissible-index policy")
    parser_greedy.add_argument("--rule", choices=BRANCH_RULES, default="smallest-index", help="BGA selector rule")
    parser_greedy.set_defaults(func=run_greedy)

    # Subcommand: errors
    parser_errors = subparsers.add_parser("errors", parents=[common], help="Table of best m-term error functionals")
    parser_errors.add_argument("--vec", type=str, required=True)
    parser_errors.add_argument("--m", type=int, default=None, help="One m (default: every m from 1 to dim)")
    parser_errors.add_argument("--lambda", dest="lam", type=float, default=None, help="Also compute the overlap-restricted error")
    parser_errors.set_defaults(func=run_errors)

    # Subcommand: constants
    parser_constants = subparsers.add_parser("constants", parents=[common], help="Basis, democracy-type and greedy-type constants")
    parser_constants.add_argument("--corpus-size", type=int, default=None)
    parser_constants.add_argument("--kinds", type=str, default=None, help=f"Greedy-type constants to estimate: {', '.join(DENOMINATORS)}")
    parser_constants.set_defaults(func=run_constants)

    # Subcommand: verify
    parser_verify = subparsers.add_parser("verify", parents=[common], help="Run inequality check suites")
    parser_verify.add_argument("--suite", type=str, default="all", help="'all', a suite name or a comma list")
    parser_verify.add_argument("--tau", type=float, default=0.5)
    parser_verify.add_argument("--rule", choices=BRANCH_RULES, default="smallest-index")
    parser_verify.add_argument("--corpus-size", type=int, default=None)
    parser_verify.add_argument("--no-record", action="store_true", help="Do not store the run in the history database")
    parser_verify.set_defaults(func=run_verify)

    # Subcommand: history
    parser_history = subparsers.add_parser("history", help="Recorded verify runs")
    history_subparsers = parser_history.add_subparsers(dest="subcommand", required=True)

    parser_history_list = history_subparsers.add_parser("list", help="List recorded runs")
    parser_history_list.add_argument("--limit", type=int, default=50)
    parser_history_list.add_argument("--space", type=str, default=None, help="Only runs on this space")
    parser_history_list.set_defaults(func=run_history_list)

    parser_history_show = history_subparsers.add_parser("show", help="Print the report of a run")
    parser_history_show.add_argument("run_id", type=int)
    parser_history_show.set_defaults(func=run_history_show)

    parser_history_delete = history_subparsers.add_parser("delete", help="Delete a run")
    parser_history_delete.add_argument("run_id", type=int)
    parser_history_delete.set_defaults(func=run_history_delete)

    return parser


def _needs_db(args) -> bool:
    return args.command == "history" or (args.command == "verify" and not args.no_record)


def main(argv=None) -> int:
    setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    # Only recording and history touch the database
    if _needs_db(args):
        migrations.init_db()

    try:
        configure_settings(
            cap_dim=getattr(args, "cap_dim", None),
            cap_subset=getattr(args, "cap_subset", None),
            workers=getattr(args, "workers", None),
            seed=getattr(args, "seed", None),
            corpus_size=getattr(args, "corpus_size", None),
        )
        return args.func(args)
    except (GreedyBasesError, ValueError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    finally:
        reset_settings_cache()


if __name__ == "__main__":
    sys.exit(main())
