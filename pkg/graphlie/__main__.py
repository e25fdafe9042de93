import argparse
import itertools
import logging
import random
import sys
import time
from datetime import datetime

from graphlie.field import FieldKind, field_create
from graphlie.graph import (
    canonical_form,
    enumerate_graphs,
    graph_iso,
    graphs_with_total,
    is_permutation,
    read_graph,
)
from graphlie.group import GroupElement, bch_multiply, group_law_checks
from graphlie.iso import (
    GradedIsoSearch,
    fingerprint,
    lie_iso_equivalent,
    theorem_check,
)
from graphlie.liealg import algebra_checks, build_algebra, export_structure_constants
from graphlie.morphism import functor_pushforward
from graphlie.pcl import pcl_isomorphic, pcl_mod_cube, verify_quotient
from graphlie.proofreplay import ReplayInput, replay, sheared_isomorphism
from graphlie.utils import (
    VerificationError,
    configure_logging,
    load_json_argument,
    read_config,
    write_document,
)

logger = logging.getLogger("graphlie")

common = argparse.ArgumentParser(add_help=False)
common.add_argument(
    "--field", type=str, help='field spec, "q" or "fp:<p>" (default from the config)'
)
common.add_argument("--out", type=str, help="write the JSON document here instead of stdout")
common.add_argument("--seed", type=int, help="seed for randomized steps (default from the config)")
common.add_argument("--jobs", type=int, default=1, help="worker processes for the iso search")
common.add_argument("-c", "--config", type=str, help="filepath for configuration JSON file")
common.add_argument("--log-file", type=str, help="write a run log to this file")
common.add_argument(
    "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
)
common.add_argument("--no-progress", action="store_true", help="hide progress bars")

parser = argparse.ArgumentParser(
    prog="graph-lie",
    description="Two-step nilpotent Lie algebras of graphs, with exact arithmetic.",
)
subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

build_parser = subparsers.add_parser(
    "build", parents=[common], help="structure constants of n(S, E)"
)
build_parser.add_argument("graph", help="graph file (edge list or JSON)")

check_parser = subparsers.add_parser(
    "check", parents=[common], help="invariant suite for one algebra and its group"
)
check_parser.add_argument("graph", help="graph file (edge list or JSON)")
check_parser.add_argument("--trials", type=int, help="random triples and pairs to draw")

iso_graph_parser = subparsers.add_parser(
    "iso-graph", parents=[common], help="graph isomorphism of two graphs"
)
iso_graph_parser.add_argument("graphs", nargs=2, help="two graph files")

iso_lie_parser = subparsers.add_parser(
    "iso-lie", parents=[common], help="Lie isomorphism of two graph algebras"
)
iso_lie_parser.add_argument("graphs", nargs=2, help="two graph files")

enumerate_parser = subparsers.add_parser(
    "enumerate", parents=[common], help="isomorphism classes of graphs"
)
enumerate_parser.add_argument("--nmax", type=int, required=True, help="largest vertex count")
enumerate_parser.add_argument(
    "--exhaustive", action="store_true", help="canonicalize every edge subset"
)

classify_parser = subparsers.add_parser(
    "classify", parents=[common], help="graph algebras of a given total dimension"
)
classify_parser.add_argument("--total", type=int, required=True, help="|S| + |E|")

group_mul_parser = subparsers.add_parser(
    "group-mul", parents=[common], help="BCH product of two group elements"
)
group_mul_parser.add_argument("graph", help="graph file (edge list or JSON)")
group_mul_parser.add_argument("left", help='element as JSON {"v": [...], "z": [...]} or a path')
group_mul_parser.add_argument("right", help="second element, same format")

functor_parser = subparsers.add_parser(
    "functor", parents=[common], help="Lie isomorphism induced by a vertex permutation"
)
functor_parser.add_argument("graph", help="graph file (edge list or JSON)")
functor_parser.add_argument("--perm", type=str, required=True, help="images of 0..n-1, e.g. 1,0,2")
functor_parser.add_argument(
    "--target", type=str, help="target graph file (default: the permuted graph)"
)

replay_parser = subparsers.add_parser(
    "replay", parents=[common], help="replay the proof steps on a sheared isomorphism"
)
replay_parser.add_argument("graph", help="graph file (edge list or JSON)")
replay_parser.add_argument("--perm", type=str, help="vertex permutation (default: random)")

pcl_parser = subparsers.add_parser(
    "pcl-verify", parents=[common], help="l(S, E) / l^3 against n(S, E)"
)
pcl_parser.add_argument("graphs", nargs="+", help="one graph file, or two to compare")

theorem_parser = subparsers.add_parser(
    "theorem-check", parents=[common], help="graph iso against Lie iso for all small pairs"
)
theorem_parser.add_argument("--nmax", type=int, required=True, help="largest vertex count")
theorem_parser.add_argument(
    "--cross-check",
    action="store_true",
    help="repeat the check over the cross-check field from the config",
)


def parse_permutation(text, n):
    """Parse ``"1,0,2"`` into a permutation of ``0..n-1``."""
    try:
        sigma = tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise ValueError(f"--perm must be comma-separated integers, got {text!r}") from e
    if not is_permutation(sigma, n):
        raise ValueError(f"--perm {text!r} is not a permutation of 0..{n - 1}")
    return sigma


def _field(args, config, group):
    return field_create(args.field or config["fields"][group])


def _seed(args, config):
    return config["seed"] if args.seed is None else args.seed


def run_build(args, config):
    fld = _field(args, config, "algebra")
    return export_structure_constants(build_algebra(read_graph(args.graph), fld)), True


def run_check(args, config):
    fld = _field(args, config, "algebra")
    g = read_graph(args.graph)
    a = build_algebra(g, fld)
    rng = random.Random(_seed(args, config))
    triples = config["check"]["random_triples"] if args.trials is None else args.trials
    pairs = config["check"]["random_pairs"] if args.trials is None else args.trials
    invariants, checks = algebra_checks(a, rng, triples, progress=not args.no_progress)
    checks.update(group_law_checks(a, rng, triples, pairs))
    ok = all(checks.values())
    document = {
        "graph": g.to_dict(),
        "field": str(fld.spec),
        "invariants": invariants.to_dict(),
        "checks": checks,
        "ok": ok,
    }
    return document, ok


def run_iso_graph(args, config):
    g, h = (read_graph(path) for path in args.graphs)
    sigma = graph_iso(g, h)
    limit = config["limits"]["canonical_vertices"]
    document = {
        "graphs": [g.to_dict(), h.to_dict()],
        "canonical": [canonical_form(g, limit=limit), canonical_form(h, limit=limit)]
        if g.n == h.n and g.n <= limit
        else None,
        "graph_iso": sigma is not None,
        "graph_witness": None if sigma is None else list(sigma),
    }
    return document, True


def run_iso_lie(args, config):
    g, h = (read_graph(path) for path in args.graphs)
    report = lie_iso_equivalent(
        g,
        h,
        args.field or config["fields"]["iso"],
        limit=config["limits"]["search_vertices"],
        jobs=args.jobs,
    )
    if not report.consistent:
        logger.error("graph and Lie isomorphism disagree")
    return report.to_dict(), report.consistent


def run_enumerate(args, config):
    limit = config["limits"]["enumerate_vertices"]
    counts = {}
    graphs = []
    for n in range(1, args.nmax + 1):
        classes = enumerate_graphs(
            n, exhaustive=args.exhaustive, limit=limit, progress=not args.no_progress
        )
        counts[str(n)] = len(classes)
        graphs.extend(
            {**g.to_dict(), "canonical": canonical_form(g, limit=limit)} for g in classes
        )
    return {"n_max": args.nmax, "counts": counts, "graphs": graphs}, True


def classify(total, fld, config, jobs=1, progress=False):
    """Classes with ``|S| + |E| = total``, fingerprints, and searches between same-shape classes."""
    start = time.perf_counter()
    classes = graphs_with_total(
        total, limit=config["limits"]["classify_total"], progress=progress
    )
    fingerprints = [fingerprint(build_algebra(g, fld)) for g in classes]
    search_spec = fld.spec if fld.spec.kind is FieldKind.PRIME else config["fields"]["iso"]
    separations = []
    for i, j in itertools.combinations(range(len(classes)), 2):
        g, h = classes[i], classes[j]
        if (g.n, g.m) != (h.n, h.m) or g.n > config["limits"]["search_vertices"]:
            continue
        search = GradedIsoSearch(
            g, h, search_spec, limit=config["limits"]["search_vertices"], jobs=jobs
        )
        witness = search.run()
        separations.append(
            {"pair": [i, j], "lie_iso": witness is not None, "search_nodes": search.nodes}
        )
        if witness is not None:
            raise VerificationError(
                f"classes {i} and {j} are Lie isomorphic", {"pair": [i, j], "witness": witness.to_dict()}
            )
    distinct = len(set(fingerprints)) == len(fingerprints)
    logger.info(
        "classified %d classes in %d ms", len(classes), (time.perf_counter() - start) * 1000
    )
    return {
        "total": total,
        "field": str(fld.spec),
        "count": len(classes),
        "classes": [
            {"graph": g.to_dict(), "fingerprint": fp.to_list()}
            for g, fp in zip(classes, fingerprints, strict=True)
        ],
        "fingerprints_distinct": distinct,
        "search_separations": separations,
    }


def run_classify(args, config):
    fld = _field(args, config, "iso")
    document = classify(
        args.total, fld, config, jobs=args.jobs, progress=not args.no_progress
    )
    return document, True


def run_group_mul(args, config):
    fld = _field(args, config, "group")
    a = build_algebra(read_graph(args.graph), fld)
    left = GroupElement.from_dict(a, load_json_argument(args.left))
    right = GroupElement.from_dict(a, load_json_argument(args.right))
    return bch_multiply(left, right).to_dict(), True


def run_functor(args, config):
    fld = _field(args, config, "algebra")
    g = read_graph(args.graph)
    sigma = parse_permutation(args.perm, g.n)
    target = read_graph(args.target) if args.target else g.permute(sigma)
    return functor_pushforward(sigma, g, target, fld).to_dict(), True


def run_replay(args, config):
    fld = _field(args, config, "algebra")
    g = read_graph(args.graph)
    rng = random.Random(_seed(args, config))
    sigma = parse_permutation(args.perm, g.n) if args.perm else None
    F = sheared_isomorphism(
        g, fld, rng=rng, sigma=sigma, bound=config["replay"]["shear_entry_bound"]
    )
    report = replay(ReplayInput(F), rng=rng)
    return report.to_dict(), report.ok


def run_pcl_verify(args, config):
    fld = _field(args, config, "algebra")
    if len(args.graphs) > 2:
        raise ValueError("pcl-verify takes one or two graph files")
    graphs = [read_graph(path) for path in args.graphs]
    if len(graphs) == 2:
        report = pcl_isomorphic(
            *graphs,
            fld,
            limit=config["limits"]["search_vertices"],
            search_field=config["fields"]["iso"],
        )
        return report.to_dict(), True
    g = graphs[0]
    certified, witness = verify_quotient(g, fld)
    document = {
        "graph": g.to_dict(),
        "field": str(fld.spec),
        "certified": certified,
        "quotient": export_structure_constants(pcl_mod_cube(g, fld)),
        "witness": witness.to_dict(),
    }
    return document, certified


def run_theorem_check(args, config):
    specs = [args.field or config["fields"]["iso"]]
    if args.cross_check:
        specs.append(config["fields"]["cross_check"])
    reports = [
        theorem_check(
            args.nmax,
            spec,
            limit=config["limits"]["theorem_vertices"],
            search_limit=config["limits"]["search_vertices"],
            jobs=args.jobs,
            progress=not args.no_progress,
        )
        for spec in specs
    ]
    document = reports[0].to_dict()
    if args.cross_check:
        document["cross_check"] = reports[1].to_dict()
    return document, not any(report.violations for report in reports)


RUNNERS = {
    "build": run_build,
    "check": run_check,
    "iso-graph": run_iso_graph,
    "iso-lie": run_iso_lie,
    "enumerate": run_enumerate,
    "classify": run_classify,
    "group-mul": run_group_mul,
    "functor": run_functor,
    "replay": run_replay,
    "pcl-verify": run_pcl_verify,
    "theorem-check": run_theorem_check,
}


def main(argv=None):
    """The main entrypoint for the graph-lie CLI.

    :return: 0 on success, 1 when a verification fails, 2 on usage errors
    """
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.log_file)
    cdate = datetime.now()
    if args.log_file:
        logger.info(
            "graph-lie log file from %02d:%02d on %d/%d/%d",
            cdate.hour,
            cdate.minute,
            cdate.day,
            cdate.month,
            cdate.year,
        )
        logger.info("Command: %s", args.command)
        logger.info(
            "Arguments: %s",
            {k: v for k, v in vars(args).items() if k not in ("command", "verbose")},
        )

    try:
        config = read_config(args.config)
        document, ok = RUNNERS[args.command](args, config)
    except VerificationError as e:
        logger.error("verification failed: %s", e)
        print(f"verification failed: {e}", file=sys.stderr)
        if e.payload is not None:
            write_document(e.payload, args.out, sys.stdout)
        return 1
    except (ValueError, OSError, ArithmeticError) as e:
        logger.error("usage error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return 2

    write_document(document, args.out, sys.stdout)
    if not ok:
        logger.error("%s finished with failed checks", args.command)
        return 1
    logger.info("%s finished successfully", args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
