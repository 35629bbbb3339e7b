"""Command-line entry point.

    holomat run <config.toml>              execute a configured check suite
    holomat catalog                        list the model catalog
    holomat check <name> --model <m> ...   run a single check

Exit codes: 0 all checks pass (or vacuous), 1 bad input, 2 any check failed,
3 holonomy approximation unstable.  HOLOMAT_THREADS caps parallelism.
"""

import argparse
import json
import sys

from . import __version__, verify
from .models import CATALOG_NAMES, ModelError, catalog
from .conn import KINDS


def _parser():
    p = argparse.ArgumentParser(
        prog="holomat",
        description="Numerical verification of Hermitian-connection identities",
    )
    p.add_argument("--version", action="version", version=f"holomat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a TOML check suite")
    p_run.add_argument("config", help="path to the TOML configuration")
    p_run.add_argument("--output", help="override the report output path")

    sub.add_parser("catalog", help="list available models")

    p_chk = sub.add_parser("check", help="run a single named check")
    p_chk.add_argument("name", choices=verify.CHECK_NAMES)
    p_chk.add_argument("--model", required=True, choices=CATALOG_NAMES)
    p_chk.add_argument("--kind", default="chern", choices=KINDS)
    p_chk.add_argument("--t", type=float, default=None,
                       help="Gauduchon parameter (kind=gauduchon)")
    p_chk.add_argument("--samples", type=int, default=verify.DEFAULT_SAMPLES)
    p_chk.add_argument("--json", dest="json_path", default=None,
                       help="write the check entry as JSON to this path")
    return p


def _cmd_run(args):
    try:
        code, report = verify.run(args.config, output_override=args.output)
    except (verify.ConfigError, ModelError, OSError) as exc:
        print(f"holomat: {exc}", file=sys.stderr)
        return 1
    s = report["summary"]
    for entry in report["checks"]:
        where = entry["model"]
        if entry["kind"]:
            where += f"/{entry['kind']}"
            if entry["t"] is not None:
                where += f"(t={entry['t']})"
        branch = f"  [{entry['branch']}]" if entry["branch"] else ""
        print(f"{entry['status']:>22}  {entry['check']:<18} {where}{branch}")
    print(
        f"total {s['total']}: {s['pass']} pass, {s['fail']} fail, "
        f"{s['hypothesis-not-met']} hypothesis-not-met, "
        f"{s['approximation-unstable']} unstable"
    )
    return code


def _cmd_catalog(_args):
    for name in CATALOG_NAMES:
        print(name)
    return 0


def _cmd_check(args):
    if args.kind == "gauduchon" and args.t is None:
        print("holomat: kind=gauduchon needs --t", file=sys.stderr)
        return 1
    try:
        model = catalog(args.model)
    except ModelError as exc:
        print(f"holomat: {exc}", file=sys.stderr)
        return 1
    import numpy as np

    rng = np.random.default_rng([verify.DEFAULT_SEED, 0])
    fn = verify._CHECK_FNS[args.name]
    kwargs = {"samples": args.samples, "rng": rng}
    if args.name in verify.KIND_CHECKS:
        entry = fn(model, args.kind, t=args.t, **kwargs)
    else:
        entry = fn(model, **kwargs)
    entry = verify._jsonable(entry)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(entry, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"check:  {entry['check']} on {entry['model']}"
          + (f" ({entry['kind']})" if entry["kind"] else ""))
    print(f"status: {entry['status']}"
          + (f"  [{entry['branch']}]" if entry["branch"] else ""))
    for key, val in entry["evidence"].items():
        print(f"  {key}: {val}")
    if entry["status"] == verify.FAIL:
        return 2
    if entry["status"] == verify.UNSTABLE:
        return 3
    return 0


def main(argv=None):
    args = _parser().parse_args(argv)
    return {"run": _cmd_run, "catalog": _cmd_catalog, "check": _cmd_check}[
        args.command
    ](args)


if __name__ == "__main__":
    sys.exit(main())
