"""Command-line driver: family, construct, verify, lemma-suite, params.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
usage or configuration error.  Errors are also written to stderr as JSON.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .config import ConfigError, RunConfig
from .descriptors import dumps, loads
from .family import GOLDEN, SILVER, SturmianSpec, generate_family, sturmian_sequence
from .omega import verify_scramble_pair
from .scramble import build_p_beta, construction_params, h_beta_proxy
from .suite import run_suite, select_lemmas

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
NAMED_SLOPES = {"silver": SILVER, "golden": GOLDEN}


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="RunConfig JSON file")
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--horizon", type=int, default=default)
    parser.add_argument("--depths", default=default, help="comma-separated depths K")
    parser.add_argument("--out", default=default, help="output path")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="print the JSON result on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omega-scramble", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="generate a certified family of Sturmian slopes")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--separation", default=None)

    p = sub.add_parser("construct", help="build p_beta and write its descriptor")
    p.add_argument("--slope", default="golden", help="decimal in (0,1), 'silver' or 'golden'")
    p.add_argument("--sqrt", type=int, default=None, metavar="M", help="use slope sqrt(M) - floor(sqrt(M))")
    p.add_argument("--intercept", default="0")
    p.add_argument("--instance", default=None, help="JSON file with t0, t1, s, xi descriptors")

    p = sub.add_parser("verify", help="check the scramble proxies for every pair of points")
    p.add_argument("points", nargs="+", help="descriptor files written by construct")

    p = sub.add_parser("lemma-suite", help="run the lemma registry")
    p.add_argument("--lemma", action="append", default=None, help="restrict to this lemma (repeatable)")
    p.add_argument("--epsilon", default=None, help="override epsilon (non-strict; for fault injection)")

    p = sub.add_parser("params", help="print the derived parameters")
    p.add_argument("--instance", default=None)

    for name, action in sub.choices.items():
        _common(action, suppress=True)
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.horizon is not None:
        cfg.horizon = args.horizon
    if args.depths is not None:
        try:
            cfg.depths = [int(k) for k in args.depths.split(",") if k.strip()]
        except ValueError:
            raise UsageError(f"--depths must be comma-separated integers, got {args.depths!r}") from None
    if args.out is not None:
        cfg.out = args.out
    if getattr(args, "instance", None) is not None:
        cfg.instance = args.instance
    return cfg


def _beta_spec(args) -> SturmianSpec:
    try:
        if args.sqrt is not None:
            return SturmianSpec.sqrt_fractional(args.sqrt, args.intercept)
        named = NAMED_SLOPES.get(args.slope)
        if named is not None:
            return SturmianSpec(named.slope, args.intercept, named.defining)
        return SturmianSpec(args.slope, args.intercept)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"invalid slope: {exc}") from None


def cmd_family(cfg: RunConfig, args) -> tuple[dict, int]:
    count = cfg.family_size if args.count is None else args.count
    separation = cfg.separation if args.separation is None else args.separation
    if count < 2:
        raise UsageError("--count must be at least 2")
    try:
        cert = generate_family(count, seed=cfg.seed, separation=separation)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cert.to_json(), EXIT_OK if cert.certified else EXIT_FAIL


def cmd_construct(cfg: RunConfig, args) -> tuple[dict, int]:
    spec = _beta_spec(args)
    params = cfg.params()
    beta = sturmian_sequence(spec)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        enum = h_beta_proxy(beta, params, cfg.shift_depth, cfg.orbit_depth)
    p = build_p_beta(beta, params, enum)
    return json.loads(dumps(p)), EXIT_OK


def _load_point(path: str):
    try:
        return loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{path} is not a sequence descriptor: {exc}") from None


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    if len(args.points) < 2:
        raise UsageError("verify needs at least two points")
    points = [_load_point(p) for p in args.points]
    recorded = [construction_params(p) for p in points]
    if any(r is None for r in recorded):
        raise ConfigError("every point must carry its construction parameters")
    params = recorded[0]
    for path, r in zip(args.points, recorded):
        if not r.same_as(params):
            raise ConfigError(f"parameter mismatch: {path} was built with different parameters")
    cfg.validate(params)
    rp = cfg.recurrence()
    for K in cfg.depths:
        try:
            rp.check_depth(K)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    reports = []
    for i, j in itertools.combinations(range(len(points)), 2):
        rep = verify_scramble_pair(points[i], points[j], params, cfg.depths, rp,
                                   names=(args.points[i], args.points[j]))
        reports.append(rep.to_json())
    ok = all(r["passed"] for r in reports)
    return {"reports": reports, "passed": ok, "seed": cfg.seed}, EXIT_OK if ok else EXIT_FAIL


def cmd_lemma_suite(cfg: RunConfig, args) -> tuple[dict, int]:
    if args.epsilon is not None:
        cfg.epsilon, cfg.strict = args.epsilon, False
    try:
        names = select_lemmas(args.lemma)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = cfg.params()
        result = run_suite(cfg, names, params)
    return result.to_json(), EXIT_OK if result.passed else EXIT_FAIL


def cmd_params(cfg: RunConfig, args) -> tuple[dict, int]:
    params = cfg.params()
    data = params.to_json()
    data["stride"] = params.stride
    data["separations"] = {k: str(Fraction(v)) for k, v in params.separations.items()}
    return data, EXIT_OK


COMMANDS = {
    "family": cmd_family,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "lemma-suite": cmd_lemma_suite,
    "params": cmd_params,
}


def _summary(command: str, data: dict, code: int) -> str:
    if command == "lemma-suite":
        lines = [f"{name:18s} {v['verdict']}  {v['detail']}" for name, v in data["result"]["lemmas"].items()]
        return "\n".join(lines)
    if command == "verify":
        return "\n".join(f"{' vs '.join(r['pair'])}: {'pass' if r['passed'] else 'FAIL'}"
                         for r in data["reports"])
    if command == "family":
        return "\n".join(f"slope {m['slope'][:20]}  m={(m.get('defining') or {}).get('m')}"
                         for m in data["members"])
    return "ok" if code == EXIT_OK else "failed"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args)
        data, code = COMMANDS[args.command](cfg, args)
    except (UsageError, ConfigError) as exc:
        kind = "usage" if isinstance(exc, UsageError) else "config"
        sys.stderr.write(json.dumps({"error": str(exc), "kind": kind}) + "\n")
        return EXIT_USAGE
    text = json.dumps(data, sort_keys=True, indent=2)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n", encoding="utf-8")
    if args.json:
        sys.stdout.write(text + "\n")
    else:
        sys.stdout.write(_summary(args.command, data, code) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
