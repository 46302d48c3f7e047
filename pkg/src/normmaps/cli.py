"""Command-line interface.

Exit codes: 0 success, 1 a verification failed on valid input, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field

from . import serialize as ser
from .cover import (CoveringError, discrete_cat_diagram, grothendieck_cat, grothendieck_set,
                    is_covering_category)
from .fincat import CategoryError
from .groups import GroupError, SizeError, transversal
from .monoidal import get_instance
from .norms import NormContext, gm_norm, hhr_norm, verify_theorem
from .suite import SUITE_DATA, SUITE_INSTANCES, suite_case, seeded_diagram

log = logging.getLogger("normmaps")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors that mean "the input was bad" rather than "the check failed"
INPUT_ERRORS = (ser.InputError, GroupError, CategoryError, SizeError, OSError,
                json.JSONDecodeError, KeyError, TypeError, ValueError)


@dataclass
class RunConfig:
    command: str
    suite: str | None = None
    group: str | None = None
    subgroup: str | None = None
    transversal: str | None = None
    diagram: str | None = None
    input: str | None = None
    instances: list[str] = field(default_factory=lambda: list(SUITE_INSTANCES))
    seed: int = 0
    count: int = 20
    construction: str = "both"
    mode: str = "set"
    cap: int | None = None
    out: str | None = None


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_output(text: str, path: str | None) -> None:
    """Write to ``path`` atomically, or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cases(cfg: RunConfig) -> list[tuple[str, NormContext]]:
    """The (name, context) pairs selected by the config."""
    if cfg.suite is not None:
        names = list(SUITE_DATA) if cfg.suite == "all" else [cfg.suite]
        out = []
        for name in names:
            if name not in SUITE_DATA:
                raise ser.InputError(f"unknown suite case {name!r}; "
                                     f"choose from {', '.join(SUITE_DATA)}")
            case = suite_case(name)
            out.append((name, NormContext.build(case.G, case.H)))
        return out
    if cfg.group is None or cfg.subgroup is None:
        raise ser.InputError("give --suite or both --group and --subgroup")
    G = ser.group_from_json(_load(cfg.group), cfg.cap)
    H = ser.subgroup_from_json(G, _load(cfg.subgroup))
    t = (ser.transversal_from_json(H, _load(cfg.transversal)) if cfg.transversal
         else transversal(G, H))
    return [("custom", NormContext.build(G, H, t))]


def _diagrams(cfg: RunConfig, ctx: NormContext, instance, key: tuple[int, ...]):
    if cfg.diagram is not None:
        return [ser.diagram_from_json(_load(cfg.diagram), ctx.H_cat, instance)]
    return [seeded_diagram(ctx.H_cat, instance, cfg.seed, *key, k) for k in range(cfg.count)]


def cmd_verify_theorem(cfg: RunConfig) -> int:
    cases = _cases(cfg)
    results = []
    for ci, (name, ctx) in enumerate(cases):
        for ii, inst_name in enumerate(cfg.instances):
            C = get_instance(inst_name)
            key = (list(SUITE_DATA).index(name) if name in SUITE_DATA else ci, ii)
            for k, X in enumerate(_diagrams(cfg, ctx, C, key)):
                rep = verify_theorem(ctx, X)
                entry = {"case": name, "diagram": k, "X": ser.diagram_to_json(X)}
                entry.update(rep.to_json(ctx, inst_name))
                results.append(entry)
    ok = all(r["total"] for r in results)
    failed = sum(not r["total"] for r in results)
    write_output(dump_json({"seed": cfg.seed, "count": len(results), "all_total": ok,
                            "reports": results}), cfg.out)
    print(f"verified {len(results)} diagrams, {failed} failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _covering_input(data):
    source = ser.category_from_json(ser._require(data, "source"))
    target = ser.category_from_json(ser._require(data, "target"))
    return ser.functor_from_json(ser._require(data, "functor"), source, target)


def cmd_check_covering(cfg: RunConfig) -> int:
    if cfg.input is None:
        raise ser.InputError("--input FILE is required")
    p = _covering_input(_load(cfg.input))
    report = is_covering_category(p)
    if report.ok and report.n == 0:
        print("warning: empty covering, n = 0", file=sys.stderr)
    write_output(dump_json(report.to_json()), cfg.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_grothendieck(cfg: RunConfig) -> int:
    if cfg.input is None:
        raise ser.InputError("--input FILE is required")
    data = _load(cfg.input)
    if cfg.mode == "set":
        P = ser.finset_diagram_from_json(data)
        problem = P.audit()
        if problem:
            raise ser.InputError(f"invalid P: {problem}")
        q = grothendieck_set(P).p
    else:
        P = ser.cat_diagram_from_json(data)
        problem = P.audit()
        if problem:
            raise ser.InputError(f"invalid P: {problem}")
        q = grothendieck_cat(P)
    write_output(dump_json({"source": ser.category_to_json(q.source),
                            "target": ser.category_to_json(q.target),
                            "functor": ser.functor_to_json(q)}), cfg.out)
    return EXIT_OK


def cmd_norm(cfg: RunConfig) -> int:
    cases = _cases(cfg)
    if len(cases) != 1:
        raise ser.InputError("norm takes a single (G, H) pair")
    name, ctx = cases[0]
    if len(cfg.instances) != 1:
        raise ser.InputError("norm takes a single --instance")
    C = get_instance(cfg.instances[0])
    if cfg.diagram is not None:
        X = ser.diagram_from_json(_load(cfg.diagram), ctx.H_cat, C)
    else:
        X = seeded_diagram(ctx.H_cat, C, cfg.seed, 0, 0, 0)
    if cfg.construction == "hhr":
        write_output(dump_json(ser.diagram_to_json(hhr_norm(ctx, X))), cfg.out)
        return EXIT_OK
    if cfg.construction == "gm":
        write_output(dump_json(ser.diagram_to_json(gm_norm(ctx, X))), cfg.out)
        return EXIT_OK
    a, b = hhr_norm(ctx, X), gm_norm(ctx, X)
    equal = a == b
    write_output(dump_json({"hhr": ser.diagram_to_json(a), "gm": ser.diagram_to_json(b),
                            "verdict": "equal" if equal else "different"}), cfg.out)
    return EXIT_OK if equal else EXIT_FAIL


COMMANDS = {
    "verify-theorem": cmd_verify_theorem,
    "check-covering": cmd_check_covering,
    "grothendieck": cmd_grothendieck,
    "norm": cmd_norm,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normmaps",
                                     description="Build and compare equivariant norm maps.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_flags(p):
        p.add_argument("--suite", nargs="?", const="all", default=None,
                       help="builtin case name, or every case when no name is given")
        p.add_argument("--group", metavar="FILE")
        p.add_argument("--subgroup", metavar="FILE")
        p.add_argument("--transversal", metavar="FILE")
        p.add_argument("--diagram", metavar="FILE", help="input H-diagram X")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=None, help="group order cap")

    p = sub.add_parser("verify-theorem", help="check that both norms agree")
    group_flags(p)
    p.add_argument("--instance", action="append", choices=SUITE_INSTANCES,
                   help="repeatable; default is every instance")
    p.add_argument("--count", type=int, default=20, help="random diagrams per instance")
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("norm", help="compute a norm of one diagram")
    group_flags(p)
    p.add_argument("--instance", action="append", choices=SUITE_INSTANCES)
    p.add_argument("--construction", choices=("hhr", "gm", "both"), default="both")
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("check-covering", help="test the unique lifting conditions")
    p.add_argument("--input", metavar="FILE", required=True)
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("grothendieck", help="build a Grothendieck construction")
    p.add_argument("--mode", choices=("set", "cat"), default="set")
    p.add_argument("--input", metavar="FILE", required=True)
    p.add_argument("--out", metavar="FILE")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("suite", "group", "subgroup", "transversal", "diagram", "input", "seed",
                 "count", "construction", "mode", "cap", "out"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "instance", None):
        cfg.instances = list(args.instance)
    elif args.command == "norm":
        cfg.instances = ["matrix_f2"]
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    cfg = config_from_args(args)
    try:
        return COMMANDS[cfg.command](cfg)
    except CoveringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except INPUT_ERRORS as exc:
        log.debug("input error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
