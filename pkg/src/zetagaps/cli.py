"""Command-line entry point: ``zetagaps <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from . import __version__
from . import constants as K
from .errors import ZetaGapsError
from .numerics import set_precision

ENV_PREFIX = "ZETAGAPS_"

# constants whose published values the commands rely on
ANCHORS = (
    "eps = 1/88", "log x0 = 20000", "log log 2 pi M = 30.76", "M1 = e^4.3", "M2 = e^22.49",
    "M3 = e^58.87", "K = 8 pi^2 e^99.8", "omega0 = e^12.8471", "L0 = 642.86", "a0 = 1.5453",
)


@dataclass
class RunConfig:
    precision_bits: int = 160
    quad_points: int = 15
    sieve_limit: int = 10 ** 7
    zero_radius: float = 1e-9
    output_format: str = "json"
    seed: int = 0

    def validate(self) -> RunConfig:
        if self.precision_bits < 128:
            raise ValueError("precision_bits must be at least 128")
        if self.quad_points < 2:
            raise ValueError("quad_points must be at least 2")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.zero_radius > 0:
            raise ValueError("zero_radius must be positive")
        return self

    @classmethod
    def resolve(cls, args: Optional[argparse.Namespace] = None, env=None) -> RunConfig:
        """Flags override environment variables, which override defaults."""
        env = os.environ if env is None else env
        cfg = cls()
        for f in fields(cls):
            conv = int if f.type in ("int", int) else float if f.type in ("float", float) else str
            raw = env.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                setattr(cfg, f.name, _parse(conv, raw))
            flag = getattr(args, f.name, None) if args is not None else None
            if flag is not None:
                setattr(cfg, f.name, flag)
        return cfg.validate()


def _parse(conv, raw: str):
    if conv is int:
        return int(float(raw)) if "e" in raw.lower() else int(raw)
    return conv(raw)


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return _clean(v.item())
    return v


class Emitter:
    def __init__(self, out, fmt: str):
        self.out = out
        self.fmt = fmt

    def record(self, rec: dict) -> None:
        self.out.write(json.dumps(_clean(rec), ensure_ascii=False) + "\n")

    def header(self, command: str, cfg: RunConfig, params: dict) -> None:
        self.record({"record": "header", "command": command, "version": __version__,
                     "config": asdict(cfg), "params": params, "anchors": list(ANCHORS)})


# -- subcommands -----------------------------------------------------------

def cmd_constants(args, cfg: RunConfig, em: Emitter) -> int:
    names = [args.name] if args.name else list(K.REPORT_NAMES)
    lam = args.lambda_ if args.lambda_ is not None else 1
    em.header("constants", cfg, {"names": names, "lambda": lam, "audit": bool(args.audit)})
    bad = 0
    for n in names:
        rep = K.build_report(n, lam=lam)
        em.record(dict(record="constant", **rep.to_dict()))
        bad += rep.status == K.EXCEEDS
    if args.audit:
        em.record({"record": "audit", "reports": len(names), "exceeds": bad})
    return 1 if bad else 0


def _floats(text: Optional[str]):
    return [float(x) for x in text.split(",") if x.strip()] if text else []


def cmd_zeros(args, cfg: RunConfig, em: Emitter) -> int:
    from .zeros import gap_statistics, isolate_zeros
    zl = isolate_zeros(args.min, args.max, cfg.zero_radius)
    alphas = _floats(args.alpha_grid)
    params = {"t_min": args.min, "t_max": args.max, "alpha_grid": alphas}
    if args.out:
        zl.to_csv(args.out)
    if cfg.output_format == "csv" and not args.out:
        em.out.write(zl.to_csv())
        return 0
    em.header("zeros", cfg, params)
    if not args.out:
        for i, (g, r) in enumerate(zl.ordinates, start=1):
            em.record({"record": "zero", "index": i, "gamma": g, "radius": r})
    em.record({"record": "zero_summary", "count": len(zl), "certified": zl.count_certified,
               "csv": args.out})
    if args.stats or alphas:
        if len(zl) >= 2:
            gs = gap_statistics(zl, alphas)
            d = gs.to_dict()
            i = gs.max_gap_index
            d["max_gap_pair"] = [float(zl.gammas[i]), float(zl.gammas[i + 1])]
            em.record(dict(record="gap_stats", **d))
        else:
            em.record({"record": "gap_stats", "gap_count": 0})
    return 0


def cmd_sfun(args, cfg: RunConfig, em: Emitter) -> int:
    from .zeta_engine import ARG_TRACKING, COUNT_MINUS_MAIN, s_of_t
    ts = args.t or []
    em.header("sfun", cfg, {"t": ts})
    ok = True
    for t in ts:
        a = s_of_t(t, COUNT_MINUS_MAIN)
        b = s_of_t(t, ARG_TRACKING)
        agree = abs(a.s_value - b.s_value) <= 10 * (a.est_error + b.est_error)
        ok &= agree
        em.record({"record": "sfun", "t": t, "count_minus_main": a.s_value, "count_error": a.est_error,
                   "arg_tracking": b.s_value, "arg_error": b.est_error, "agree": agree})
    return 0 if ok else 1


def cmd_moments(args, cfg: RunConfig, em: Emitter) -> int:
    from .moments import holder_chain, moments_J
    from .suites import cached_zeros
    T = float(args.T)
    h = 2 * math.pi / math.log(T) if args.h == "auto" else float(args.h)
    powers = [int(p) for p in args.powers.split(",")]
    em.header("moments", cfg, {"T": T, "h": h, "powers": powers})
    zl = cached_zeros(10.0, 2 * T + h + 1.0, cfg.zero_radius)
    js = moments_J(powers, T, h, zl, cfg.quad_points)
    for n in powers:
        em.record(dict(record="moment", **js[n].to_dict()))
    if {1, 2, 4} <= set(powers):
        good = holder_chain(js[1].value, js[2].value, js[4].value)
        em.record({"record": "holder", "J1": js[1].value, "J2": js[2].value, "J4": js[4].value,
                   "holds": good})
        return 0 if good else 1
    return 0


def cmd_primesum(args, cfg: RunConfig, em: Emitter) -> int:
    from .primesums import lemma_grid, prime_lemma_check
    from .suites import cached_table
    table = cached_table(cfg.sieve_limit)
    if args.X is not None and args.h is not None:
        pts = [(args.X, args.h)]
    else:
        pts = lemma_grid(tuple(X for X in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7)
                               if X <= table.limit))
    em.header("primesum", cfg, {"points": len(pts)})
    ok = True
    for X, h in pts:
        r = prime_lemma_check(X, h, table)
        ok &= r.holds
        em.record({"record": "prime_lemma", "X": r.X, "h": r.h, "value": r.value, "bound": r.bound,
                   "branch": r.branch, "holds": r.holds})
    return 0 if ok else 1


def cmd_verify(args, cfg: RunConfig, em: Emitter) -> int:
    from .suites import run_suite
    em.header("verify", cfg, {"suite": args.suite, "trials": args.trials})
    recs, ok = run_suite(args.suite, cfg.seed, args.trials, sieve_limit=cfg.sieve_limit)
    for r in recs:
        em.record(dict(record="suite", **r))
    em.record({"record": "verify_summary", "suite": args.suite, "passed": bool(ok)})
    return 0 if ok else 1


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetagaps", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--precision-bits", dest="precision_bits", type=int)
    p.add_argument("--quad-points", dest="quad_points", type=int)
    p.add_argument("--sieve-limit", dest="sieve_limit", type=lambda s: int(float(s)))
    p.add_argument("--zero-radius", dest="zero_radius", type=float)
    p.add_argument("--format", dest="output_format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="write records to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="evaluate and audit the explicit constants")
    c.add_argument("--audit", action="store_true")
    c.add_argument("--name", choices=K.REPORT_NAMES)
    c.add_argument("--lambda", dest="lambda_", type=float)
    c.set_defaults(func=cmd_constants)

    z = sub.add_parser("zeros", help="isolate zero ordinates and gap statistics")
    z.add_argument("--min", type=float, required=True)
    z.add_argument("--max", type=float, required=True)
    z.add_argument("--alpha-grid", default="")
    z.add_argument("--stats", action="store_true")
    z.add_argument("--out", help="CSV file for the zero list")
    z.set_defaults(func=cmd_zeros)

    s = sub.add_parser("sfun", help="S(t) by two independent methods")
    s.add_argument("--t", type=float, action="append")
    s.set_defaults(func=cmd_sfun)

    m = sub.add_parser("moments", help="moments of S(t+h) - S(t) over [T, 2T]")
    m.add_argument("--T", type=float, required=True)
    m.add_argument("--h", default="auto")
    m.add_argument("--powers", default="1,2,4")
    m.set_defaults(func=cmd_moments)

    q = sub.add_parser("primesum", help="cosine prime-sum lemma checks")
    q.add_argument("--X", type=float)
    q.add_argument("--h", type=float)
    q.set_defaults(func=cmd_primesum)

    v = sub.add_parser("verify", help="seeded property suites")
    v.add_argument("--suite", default="all", choices=("all",) + tuple(
        ("mvh", "imag_moment", "primesum", "constants", "holder", "gaps")))
    v.add_argument("--trials", type=int, default=1000)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    fh = None
    try:
        cfg = RunConfig.resolve(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.output:
        fh = open(args.output, "w", encoding="utf-8", newline="\n")
        out = fh
    em = Emitter(out, cfg.output_format)
    set_precision(cfg.precision_bits)
    try:
        return args.func(args, cfg, em)
    except ZetaGapsError as exc:
        em.record({"record": "error", "type": type(exc).__name__, "message": str(exc)})
        return 2
    finally:
        if fh is not None:
            fh.close()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
