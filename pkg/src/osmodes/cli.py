"""Command-line front end.

    osmodes eigen --profile exp --R 1e7 --beta 0.2 --A 1.0
    osmodes branch --beta 0.2 --A 1.0 --R 1e6,1e7,1e8
    osmodes critical_A --R 1e7,1e8
    osmodes oracle_compare --R 1e5 --alpha 0.1
    osmodes verify

Settings come from an optional flat ``key = value`` file (``--config``),
then ``--set key=value`` pairs, then the dedicated flags.  Exit status is 0 on
success, 1 when a verification fails, 2 for configuration errors and 3 for
numerical failures (the error is written to stderr as JSON).
"""

import argparse
import csv
import io
import json
import math
import sys

from .dispersion import blasius_dispersion_check, find_critical_A, solve_eigenvalue, trace_branch
from .errors import ConfigError, NumericalFailure
from .oracle import DEFAULT_N, assemble_pencil, nearest_eigenvalue, pencil_residual
from .profile import ShearProfile
from .verification import run_all

DEFAULTS = {
    "profile.kind": "exponential",
    "profile.params": "",
    "mode": "full",
    "root.tol": "1e-10",
    "root.maxiter": "40",
    "sweep.workers": "1",
    "oracle.N": str(DEFAULT_N),
    "output.format": None,
    "output.path": "-",
}
GRID_KEYS = ("fast_support", "fast_margin", "slow_width", "crit_ratio", "fast_phase", "z_max")
BRANCH_HEADER = ["R", "alpha", "re_c", "im_c", "growth_product"]


def read_config(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected 'key = value'")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _float(cfg, key):
    try:
        return float(cfg[key])
    except KeyError:
        raise ConfigError(f"missing setting {key!r}") from None
    except ValueError:
        raise ConfigError(f"setting {key!r} is not a number: {cfg[key]!r}") from None


def _float_list(cfg, key):
    if key not in cfg or cfg[key] in (None, ""):
        raise ConfigError(f"missing setting {key!r}")
    try:
        return [float(x) for x in str(cfg[key]).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"setting {key!r} is not a list of numbers: {cfg[key]!r}") from None


def build_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            cfg.update(read_config(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        cfg[k.strip()] = v.strip()
    flags = {"profile": "profile.kind", "R": "R", "alpha": "alpha", "beta": "beta", "A": "A",
             "mode": "mode", "output": "output.path", "format": "output.format",
             "workers": "sweep.workers", "N": "oracle.N"}
    for attr, key in flags.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    return cfg


def profile_from(cfg):
    params = [float(x) for x in str(cfg.get("profile.params") or "").split(",") if x.strip()]
    try:
        return ShearProfile(cfg["profile.kind"], tuple(params))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def grid_options(cfg):
    return {k: float(cfg["grid." + k]) for k in GRID_KEYS if cfg.get("grid." + k) not in (None, "")}


def alpha_from(cfg, R):
    """(alpha, A, beta): alpha given directly or as A R^-beta."""
    if cfg.get("alpha") not in (None, ""):
        return _float(cfg, "alpha"), None, None
    if cfg.get("beta") in (None, "") or cfg.get("A") in (None, ""):
        raise ConfigError("give either alpha or both beta and A")
    A, beta = _float(cfg, "A"), _float(cfg, "beta")
    return A * R ** (-beta), A, beta


def solver_options(cfg):
    mode = cfg.get("mode", "full")
    if mode not in ("full", "surrogate"):
        raise ConfigError(f"mode must be 'full' or 'surrogate', not {mode!r}")
    return dict(mode=mode, tol=_float(cfg, "root.tol"), maxiter=int(_float(cfg, "root.maxiter")),
                grid_options=grid_options(cfg))


def fmt(x):
    return f"{x:.16e}"


def _emit(cfg, text):
    path = cfg.get("output.path") or "-"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _format(cfg, default):
    f = cfg.get("output.format") or default
    if f not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, not {f!r}")
    return f


def branch_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BRANCH_HEADER)
    for r in results:
        if hasattr(r, "c"):
            w.writerow([fmt(r.R), fmt(r.alpha), fmt(r.c.real), fmt(r.c.imag), fmt(r.growth_product)])
    return buf.getvalue()


def _failure_record(R, exc):
    return {"R": R, "error": type(exc).__name__, "message": str(exc)}


# -- commands ----------------------------------------------------------------
def cmd_eigen(cfg):
    prof = profile_from(cfg)
    R = _float(cfg, "R")
    alpha, A, beta = alpha_from(cfg, R)
    res = solve_eigenvalue(prof, alpha, R, A=A, beta=beta, **solver_options(cfg))
    if _format(cfg, "json") == "csv":
        _emit(cfg, branch_csv([res]))
    else:
        _emit(cfg, json.dumps(res.to_dict()) + "\n")
    return 0


def cmd_branch(cfg):
    prof = profile_from(cfg)
    R_list = _float_list(cfg, "R")
    A, beta = _float(cfg, "A"), _float(cfg, "beta")
    opts = solver_options(cfg)
    opts.pop("tol")
    opts.pop("maxiter")
    res = trace_branch(prof, R_list, beta, A, opts["mode"], int(_float(cfg, "sweep.workers")),
                       opts["grid_options"])
    failed = [(R, r) for R, r in zip(R_list, res) if isinstance(r, Exception)]
    for R, exc in failed:
        sys.stderr.write(json.dumps(_failure_record(R, exc)) + "\n")
    if _format(cfg, "csv") == "csv":
        _emit(cfg, branch_csv(res))
    else:
        recs = [r.to_dict() if not isinstance(r, Exception) else _failure_record(R, r)
                for R, r in zip(R_list, res)]
        _emit(cfg, json.dumps(recs) + "\n")
    return 3 if failed else 0


def cmd_critical_A(cfg):
    prof = profile_from(cfg)
    R_list = _float_list(cfg, "R")
    beta = float(cfg.get("beta") or 0.25)
    opts = solver_options(cfg)
    rows = []
    for R in R_list:
        out = find_critical_A(prof, R, beta, mode=opts["mode"], grid_options=opts["grid_options"])
        zd = out.zc_over_delta
        rows.append({"R": R, "beta": beta, "A_c": out.A_c, "bracket": list(out.bracket),
                     "zc_over_delta": [zd.real, zd.imag], "A_c_four_thirds": out.A_c ** (4 / 3)})
    if _format(cfg, "json") == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R", "beta", "A_c", "A_lo", "A_hi"])
        for r in rows:
            w.writerow([fmt(r["R"]), fmt(r["beta"]), fmt(r["A_c"])] + [fmt(x) for x in r["bracket"]])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, json.dumps(rows) + "\n")
    return 0


def cmd_oracle_compare(cfg):
    prof = profile_from(cfg)
    R = _float(cfg, "R")
    alpha, A, beta = alpha_from(cfg, R)
    res = solve_eigenvalue(prof, alpha, R, A=A, beta=beta, **solver_options(cfg))
    N = int(_float(cfg, "oracle.N"))
    out = {"R": R, "alpha": alpha, "constructed": [res.c.real, res.c.imag]}
    cs = []
    for n in (N, int(math.ceil(1.5 * N))):
        pen = assemble_pencil(prof, alpha, R, n)
        c, v = nearest_eigenvalue(pen, res.c)
        cs.append(c)
        out[f"oracle_N{n}"] = [c.real, c.imag]
        out[f"pencil_residual_N{n}"] = pencil_residual(pen, c, v)
    out["relative_difference"] = abs(cs[0] - res.c) / abs(res.c)
    out["refinement_change"] = abs(cs[1] - cs[0])
    out["oracle_unstable"] = cs[0].imag > 0
    _emit(cfg, json.dumps(out) + "\n")
    return 0


def cmd_verify(cfg=None):
    checks = run_all()
    blas = blasius_dispersion_check()
    ok = all(c.passed for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} (limit {c.limit:.1e})")
    print(f"INFO  blasius/exponential remainder ratio of ratios: {blas['ratio_of_ratios']:.3f}")
    return 0 if ok else 1


COMMANDS = {"eigen": cmd_eigen, "branch": cmd_branch, "critical_A": cmd_critical_A,
            "oracle_compare": cmd_oracle_compare, "verify": cmd_verify}


def parser():
    p = argparse.ArgumentParser(prog="osmodes", description="Viscous boundary-layer instability modes")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config")
        s.add_argument("--set", action="append", metavar="KEY=VALUE")
        if name == "verify":
            continue
        s.add_argument("--profile")
        s.add_argument("--R")
        s.add_argument("--alpha")
        s.add_argument("--beta")
        s.add_argument("--A")
        s.add_argument("--mode")
        s.add_argument("--output")
        s.add_argument("--format")
        s.add_argument("--workers")
        s.add_argument("--N")
    return p


def _origin(exc):
    tb = exc.__traceback__
    while tb is not None and tb.tb_next is not None:
        tb = tb.tb_next
    return tb.tb_frame.f_globals.get("__name__", "?") if tb is not None else "?"


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except NumericalFailure as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "module": _origin(exc),
                                     "message": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
