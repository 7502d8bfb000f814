"""Batch command-line front end.

Every subcommand writes a header block (library version and resolved
configuration, plus wall time with --timing) followed by rows. Numbers are
written with repr, which is the shortest string that parses back to the same
double, so outputs are byte-stable across runs and worker counts.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .eisenstein import DomainError, EisensteinInt

THREADS_ENV = "CUBIC_HECKE_THREADS"


@dataclass
class RunConfig:
    norm_bound: Optional[int] = None
    x_param: object = "default"
    L: Optional[float] = None
    threads: int = 1
    output_path: str = "-"
    output_format: str = "csv"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self):
        for name in ("norm_bound", "L", "threads"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise DomainError(f"{name} must be positive")
        if self.x_param != "default" and float(self.x_param) <= 0:
            raise DomainError("x must be positive")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def jsonable(v):
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, EisensteinInt):
        return [v.a, v.b]
    return v


def header_lines(command: str, config: dict, seconds: Optional[float]) -> list:
    lines = [f"cubic_hecke {__version__}", f"command: {command}"]
    for k in sorted(config):
        lines.append(f"config: {k}={fmt(config[k])}")
    if seconds is not None:
        lines.append(f"wall_time_s: {seconds!r}")
    return lines


def render(command: str, config: dict, columns: list, rows: list, fmt_kind: str, seconds, report=None) -> str:
    if fmt_kind == "json":
        doc = {"header": {"version": __version__, "command": command, "config": jsonable(config)}}
        if seconds is not None:
            doc["header"]["wall_time_s"] = seconds
        if report is not None:
            doc["report"] = jsonable(report)
        else:
            doc["rows"] = [jsonable(dict(zip(columns, r))) for r in rows]
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    for line in header_lines(command, config, seconds):
        buf.write("# " + line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    if report is not None:
        w.writerow(["key", "value"])
        for k, v in sorted(jsonable(report).items()):
            w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else fmt(v)])
    else:
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def parse_eisenstein(text: str) -> EisensteinInt:
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return EisensteinInt(int(parts[0]), 0)
        if len(parts) == 2:
            return EisensteinInt(int(parts[0]), int(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot read {text!r} as an Eisenstein integer; use 'a' or 'a,b'")


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def need(value, flag: str):
    if value is None:
        raise UsageError(f"missing {flag}")


def float_arg(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


# ---------------------------------------------------------------------------
# subcommands


def _resolve_x(X: float, x):
    from .dirichlet_poly import default_x

    if x in (None, "default"):
        return default_x(X), "default"
    return float(x), "explicit"


def cmd_family(args, cfg):
    from .sweep import family_arrays

    need(cfg.norm_bound, "--xmax")
    fam = family_arrays(int(cfg.norm_bound), int(args.xmin))
    rows = list(zip(fam.a.tolist(), fam.b.tolist(), fam.norm.tolist()))
    return ["a", "b", "norm"], rows, {"xmax": cfg.norm_bound, "xmin": args.xmin}, None


def cmd_gauss(args, cfg):
    from .gauss import gauss_bruteforce, gauss_factored

    need(args.k, "--k")
    need(args.n, "--n")
    k, n = parse_eisenstein(args.k), parse_eisenstein(args.n)
    g = gauss_factored(k, n)
    row = [k.a, k.b, n.a, n.b, g.value.real, g.value.imag, abs(g.value), g.exact_zero]
    cols = ["k_a", "k_b", "n_a", "n_b", "re", "im", "abs", "structural_zero"]
    if args.check:
        b = gauss_bruteforce(k, n).value
        row += [b.real, b.imag, abs(b - g.value)]
        cols += ["brute_re", "brute_im", "difference"]
    return cols, [row], {"k": str(k), "n": str(n), "check": args.check}, None


def random_poisson_cases(count: int, seed: int, q_norm_max: int = 25, M_range=(1e2, 1e4)):
    """Seeded (q, r, M) with 0 < N(q) <= q_norm_max and M uniform in M_range."""
    from .eisenstein import lattice_points

    rng = np.random.default_rng(seed)
    qa, qb, qn = lattice_points(q_norm_max, norm_min=0)
    cases = []
    for _ in range(count):
        i = int(rng.integers(len(qa)))
        q = EisensteinInt(int(qa[i]), int(qb[i]))
        r = EisensteinInt(int(rng.integers(-10, 11)), int(rng.integers(-10, 11)))
        M = float(rng.uniform(*M_range))
        cases.append((q, r, M))
    return cases


def cmd_poisson(args, cfg):
    from .testfunc import poisson_check

    if args.cases:
        cases = random_poisson_cases(args.cases, cfg.seed)
    else:
        if args.q is None or args.M is None:
            raise UsageError("poisson-check needs --q and --M, or --cases")
        cases = [(parse_eisenstein(args.q), parse_eisenstein(args.r), float(args.M))]
    rows = []
    for q, r, M in cases:
        lhs, rhs, res = poisson_check(q, r, M)
        rows.append([q.a, q.b, r.a, r.b, M, lhs, rhs, abs(res)])
    return ["q_a", "q_b", "r_a", "r_b", "M", "lhs", "rhs", "residual"], rows, {"cases": args.cases or 1}, None


def cmd_moments(args, cfg):
    from .dirichlet_poly import moment_sum
    from .testfunc import FEJER

    for flag in ("X", "k", "j"):
        need(getattr(args, flag), "--" + flag)
    x, how = _resolve_x(args.X, cfg.x_param)
    zs = (FEJER, cfg.L) if cfg.L else None
    rep = moment_sum(args.X, args.k, args.j, x, with_zero_sum=zs, workers=cfg.threads)
    row = rep.row()
    cols = ["X", "x", "k", "j", "computed_re", "computed_im", "main_term", "relative_gap", "family_count"]
    return cols, [[row[c] for c in cols]], {"X": args.X, "x": x, "x_preset": how, "k": args.k, "j": args.j, "L": cfg.L}, None


def cmd_central_values(args, cfg):
    from .stats import central_values

    need(cfg.norm_bound, "--norm-max")
    rows = []
    for r in central_values(cfg.norm_bound, cfg.threads):
        rows.append([r.a, r.b, r.norm, r.value.real, r.value.imag, abs(r.value),
                     r.root_number.real, r.root_number.imag, r.fe_residual])
    cols = ["conductor_a", "conductor_b", "norm", "L_re", "L_im", "abs_L", "root_re", "root_im", "fe_residual"]
    return cols, rows, {"norm_max": cfg.norm_bound}, None


def cmd_zeros(args, cfg):
    from .characters import FamilyMember
    from .lfunc import find_zeros, lfunction
    from .sweep import family_arrays

    if args.conductor:
        members = [FamilyMember.of(parse_eisenstein(args.conductor))]
    else:
        if not cfg.norm_bound:
            raise UsageError("zeros needs --conductor or --norm-max")
        fam = family_arrays(cfg.norm_bound)
        members = [FamilyMember.of(EisensteinInt(int(a), int(b))) for a, b in zip(fam.a, fam.b)]
    rows = []
    for f in members:
        zl = find_zeros(lfunction(f, args.T), args.T)
        for g in zl.ordinates:
            rows.append([str(f.conductor), g, zl.certified])
    return ["conductor", "gamma", "certified"], rows, {"T": args.T, "norm_max": cfg.norm_bound, "conductor": args.conductor}, None


def cmd_density(args, cfg):
    import warnings

    from .density import Route, one_level_density

    need(args.X, "--X")
    need(cfg.L, "--L")
    ell = parse_eisenstein(args.ell)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = one_level_density(args.X, cfg.L, ell, Route(args.route), workers=cfg.threads)
    row = rep.row()
    if not args.timing:
        row["seconds"] = None
    cols = list(row)
    return cols, [[row[c] for c in cols]], {"X": args.X, "L": cfg.L, "ell": str(ell), "route": args.route}, None


def cmd_distribution(args, cfg):
    from .stats import distribution_P, distribution_logL

    x, how = _resolve_x(args.X, cfg.x_param)
    if args.kind == "logL":
        rep = distribution_logL(args.X_cap, x, args.alpha, args.beta, workers=cfg.threads)
    else:
        rep = distribution_P(args.X, x, args.alpha, args.beta, workers=cfg.threads)
    conf = {"X": args.X, "x": x, "x_preset": how, "alpha": args.alpha, "beta": args.beta, "kind": args.kind}
    if args.kind == "logL":
        conf["X_cap"] = args.X_cap
    return None, None, conf, rep.to_json()


def cmd_selftest(args, cfg):
    from .acceptance import run_all

    results = run_all(quick=args.quick, seed=cfg.seed, workers=cfg.threads)
    rows = [[r.number, r.name, r.passed, r.summary] for r in results]
    return ["criterion", "name", "passed", "summary"], rows, {"quick": args.quick}, None


COMMANDS = {
    "family": cmd_family,
    "gauss-sum": cmd_gauss,
    "poisson-check": cmd_poisson,
    "moments": cmd_moments,
    "central-values": cmd_central_values,
    "zeros": cmd_zeros,
    "density": cmd_density,
    "distribution": cmd_distribution,
    "selftest": cmd_selftest,
}


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", "--threads", dest="threads", type=int, default=None)
    common.add_argument("--format", dest="output_format", choices=["csv", "json"], default=None)
    common.add_argument("--output", "-o", dest="output_path", default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--config", default=None, help="flat key=value file; flags override it")
    common.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identity)")

    p = argparse.ArgumentParser(prog="cubic-hecke", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cubic_hecke {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("family", parents=[common], help="family conductors in canonical order")
    s.add_argument("--xmax", dest="norm_bound", type=float_arg, default=None)
    s.add_argument("--xmin", type=float_arg, default=0)

    s = sub.add_parser("gauss-sum", parents=[common], help="g(k, n) from the factored formula")
    s.add_argument("--k", default=None)
    s.add_argument("--n", default=None)
    s.add_argument("--check", action="store_true", help="also sum over a residue system")

    s = sub.add_parser("poisson-check", parents=[common], help="lattice sum against its Poisson dual")
    s.add_argument("--q")
    s.add_argument("--r", default="0")
    s.add_argument("--M", type=float_arg)
    s.add_argument("--cases", type=int, default=0, help="seeded random (q, r, M) suite")

    s = sub.add_parser("moments", parents=[common], help="family moments of P against main terms")
    s.add_argument("--X", type=float_arg, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--j", type=int, default=None)
    s.add_argument("--x", dest="x_param", default=None)
    s.add_argument("--L", type=float_arg, default=None, help="weight by zero sums at this L")

    s = sub.add_parser("central-values", parents=[common], help="L(1/2) for all conductors up to a norm")
    s.add_argument("--norm-max", dest="norm_bound", type=float_arg, default=None)

    s = sub.add_parser("zeros", parents=[common], help="critical-line zeros up to height T")
    s.add_argument("--conductor")
    s.add_argument("--norm-max", dest="norm_bound", type=float_arg, default=None)
    s.add_argument("--T", type=float_arg, default=20.0)

    s = sub.add_parser("density", parents=[common], help="twisted one-level density")
    s.add_argument("--X", type=float_arg, default=None)
    s.add_argument("--L", type=float_arg, default=None)
    s.add_argument("--ell", default="1")
    s.add_argument("--route", choices=["zeros", "prime-sums"], default="prime-sums")

    s = sub.add_parser("distribution", parents=[common], help="distribution of Re P or log|L(1/2)|")
    s.add_argument("--X", type=float_arg, default=1e6)
    s.add_argument("--x", dest="x_param", default=None)
    s.add_argument("--alpha", type=float_arg, default=-1.0)
    s.add_argument("--beta", type=float_arg, default=1.0)
    s.add_argument("--kind", choices=["P", "logL"], default="P")
    s.add_argument("--X-cap", dest="X_cap", type=float_arg, default=1e4)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--quick", action="store_true", help="sub-minute subset")
    return p, dict(sub.choices)


CONFIG_FIELDS = ("norm_bound", "x_param", "L", "threads", "output_path", "output_format", "seed")
ALIASES = {"x": "x_param", "workers": "threads", "format": "output_format", "output": "output_path",
           "norm_max": "norm_bound", "xmax": "norm_bound"}


def apply_config_file(parser, subparsers: dict, argv, args):
    """Re-parse with config-file values as subcommand defaults, so flags win."""
    conf = {ALIASES.get(k, k): v for k, v in read_config_file(args.config).items()}
    sp = subparsers[args.command]
    defaults = {}
    for action in sp._actions:
        if action.dest in conf:
            v = conf[action.dest]
            if isinstance(action, argparse._StoreTrueAction):
                v = v.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                v = action.type(v)
            defaults[action.dest] = v
    unknown = set(conf) - {a.dest for a in sp._actions}
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(sorted(unknown))}")
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def resolve_config(args) -> RunConfig:
    """defaults < environment (threads) < config file < flags."""
    cfg = RunConfig()
    env = os.environ.get(THREADS_ENV)
    if env:
        cfg.threads = int(env)
    for k in CONFIG_FIELDS:
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if cfg.norm_bound is not None:
        cfg.norm_bound = int(cfg.norm_bound)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = apply_config_file(parser, subparsers, argv, args)
        cfg = resolve_config(args)
        t0 = time.perf_counter()
        cols, rows, conf, report = COMMANDS[args.command](args, cfg)
        seconds = time.perf_counter() - t0 if args.timing else None
    except (UsageError, DomainError, OSError) as e:
        print(f"cubic-hecke {args.command}: precondition violated: {e}", file=sys.stderr)
        return 2
    conf = dict(conf)
    conf["seed"] = cfg.seed
    text = render(args.command, conf, cols, rows, cfg.output_format, seconds, report)
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if args.command == "selftest":
        return 0 if all(r[2] for r in rows) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
