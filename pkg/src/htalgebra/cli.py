"""Command line front end: trace, identities, toda-sim.

Exit codes: 0 success, 1 a check failed or a run diverged, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .errors import (ConfigError, DivergenceError, HtAlgebraError, MalformedInputError,
                     NonIntegralPoleError, ParseError, UnsupportedError)
from .expressions import format_rational, parse_k

log = logging.getLogger("htalgebra")

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def configure_logging() -> None:
    name = os.environ.get("HT_ALGEBRA_LOG", "quiet").strip().lower() or "quiet"
    if name not in LOG_LEVELS:
        raise ConfigError(f"HT_ALGEBRA_LOG must be one of {sorted(LOG_LEVELS)}, got {name!r}")
    logging.basicConfig(level=LOG_LEVELS[name], format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htalgebra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="print the trace of a K expression as an exact rational")
    p.add_argument("expr", help="expression such as 'tau(1)/tau(2)' or 'T^3(1/tau)'")

    p = sub.add_parser("identities", help="run an identity suite and print a JSON report")
    p.add_argument("suite", help="hopf, sequences, localization, distributions, conformal, toda-symbolic or vertex")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algebra", default="ctoda", help="conformal suite: ctoda, ctoda-typo, sl2 or abelian")
    p.add_argument("--algebra-file", help="conformal suite: JSON description of an algebra")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("toda-sim", help="integrate the Toda lattice and write the trajectory")
    p.add_argument("--config", help="JSON file with n, dt, steps, topology, seed, kmax (flags override)")
    p.add_argument("--n", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--kmax", type=int, help="number of traces tr(L^k) to record (default min(4, n))")
    p.add_argument("--topology", choices=("open", "periodic"))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output file; standard output when omitted")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


# trace -----------------------------------------------------------------------------

def cmd_trace(args) -> int:
    value = parse_k(args.expr).trace()
    print(format_rational(value))
    return EXIT_OK


# identities ------------------------------------------------------------------------

def cmd_identities(args) -> int:
    from .suites import SUITES, run_suite

    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    if args.window < 0:
        raise ConfigError("window must be nonnegative")
    log.info("running suite %s at window %d", args.suite, args.window)
    report = run_suite(args.suite, args.window, args.seed, algebra=args.algebra, algebra_file=args.algebra_file)
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    _emit(text, args.out)
    for check in report["checks"]:
        log.info("%s: %s", check["name"], "pass" if check["ok"] else "FAIL")
    return EXIT_OK if report["ok"] else EXIT_FAIL


# toda-sim -----------------------------------------------------------------------------

DEFAULT_SIM = {"n": 8, "dt": 1e-3, "steps": 10000, "topology": "periodic", "seed": 0, "kmax": 4}


def sim_config(args) -> dict:
    config = dict(DEFAULT_SIM)
    loaded = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(DEFAULT_SIM) - {"b", "c"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        config.update(loaded)
    for key in DEFAULT_SIM:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    explicit_kmax = args.kmax is not None or (args.config and "kmax" in loaded)
    if not explicit_kmax and isinstance(config["n"], int):
        config["kmax"] = min(DEFAULT_SIM["kmax"], config["n"])
    if not isinstance(config["n"], int) or config["n"] < 2:
        raise ConfigError("the lattice needs n >= 2 sites")
    if not config["dt"] > 0:
        raise ConfigError("dt must be positive")
    if not isinstance(config["steps"], int) or config["steps"] < 0:
        raise ConfigError("steps must be a nonnegative integer")
    if not isinstance(config["kmax"], int) or not 1 <= config["kmax"] <= config["n"]:
        raise ConfigError("kmax must satisfy 1 <= kmax <= n")
    if config["topology"] not in ("open", "periodic"):
        raise ConfigError("topology must be open or periodic")
    return config


def initial_state(config: dict):
    from .toda import TodaStateNumeric

    state = TodaStateNumeric.random(config["n"], config["seed"], config["topology"])
    b = config.get("b", state.b)
    c = config.get("c", state.c)
    if len(b) != config["n"] or len(c) != config["n"]:
        raise ConfigError("initial arrays must have length n")
    return TodaStateNumeric(b, c, config["topology"])


def trajectory_rows(traj) -> tuple:
    n = traj.b.shape[1]
    kmax = traj.traces.shape[1]
    header = ["t"] + [f"B{i}" for i in range(n)] + [f"C{i}" for i in range(n)] + [f"trL{k}" for k in range(1, kmax + 1)]
    rows = []
    for i, t in enumerate(traj.times):
        rows.append([float(t)] + [float(x) for x in traj.b[i]] + [float(x) for x in traj.c[i]]
                    + [float(x) for x in traj.traces[i]])
    return header, rows


def cmd_toda_sim(args) -> int:
    from .toda import simulate

    config = sim_config(args)
    state = initial_state(config)
    log.info("simulating %s", json.dumps(config, sort_keys=True, default=list))
    traj = simulate(state, config["dt"], config["steps"], config["kmax"])
    header, rows = trajectory_rows(traj)
    drift = traj.max_relative_drift()
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(x) for x in row])
        text = buf.getvalue()
    else:
        payload = {"config": {k: config[k] for k in DEFAULT_SIM}, "columns": header, "rows": rows,
                   "max_relative_drift": {f"trL{k + 1}": d for k, d in enumerate(drift)}}
        text = json.dumps(payload, sort_keys=True) + "\n"
    _emit(text, args.out)
    summary = "max relative drift: " + ", ".join(f"trL{k + 1}={d:.3e}" for k, d in enumerate(drift))
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


COMMANDS = {"trace": cmd_trace, "identities": cmd_identities, "toda-sim": cmd_toda_sim}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        configure_logging()
        return COMMANDS[args.command](args)
    except (ParseError, NonIntegralPoleError, MalformedInputError, ConfigError, UnsupportedError,
            ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HtAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
