"""Command line front end.

Subcommands: spectrum, index, nonlocal, verify, convergence.  Output is
a JSON document (optionally a CSV next to it), written atomically and
byte-identical across runs with the same configuration apart from the
timestamp field.  Numbers carry 17 significant digits; non-finite
values (unmeasurable orders and the like) serialize as null.

Exit codes: 0 on success with every requested certification passing,
2 for an invalid configuration, 3 when a certification fails.  The
env var FBMS_THREADS caps the per-mode fan-out of the solvers.
"""

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import geometry, spectra, verify
from .eigensolve import count_below

DEFAULT_GRIDS = (512, 1024, 2048)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    surface: str = "catenoid"
    problem: str = "robin"
    modes: tuple = tuple(range(9))
    grids: tuple = DEFAULT_GRIDS
    guard: float = 1e-6
    fmt: str = "json"
    out: str = ""
    csv: str = ""
    seed: int = 7
    m_max: int = 16

    def validate(self):
        if self.surface not in ("catenoid", "disk"):
            raise ConfigError("surface must be catenoid or disk")
        if self.problem not in ("robin", "dirichlet",
                                "steklov-laplacian", "steklov-jacobi"):
            raise ConfigError("unknown problem %r" % self.problem)
        if not self.grids:
            raise ConfigError("at least one grid size is required")
        if any(b <= a for a, b in zip(self.grids, self.grids[1:])):
            raise ConfigError("grid sizes must be strictly increasing")
        if not self.modes:
            raise ConfigError("empty mode range")
        if any(m < 0 for m in self.modes):
            raise ConfigError("modes must be nonnegative")
        if self.guard <= 0.0:
            raise ConfigError("guard must be positive")
        if self.fmt not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        return self


def _parse_modes(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(p) for p in text.split(",") if p != "")


def _parse_grids(text):
    return tuple(int(p) for p in text.split(",") if p != "")


# ---------------------------------------------------------------------------
# serialization


def _num(x):
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return "%d" % int(x)
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        return "null"
    out = "%.17g" % x
    return out


def _jstr(s):
    out = ['"']
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _emit(obj, parts, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            parts.append(pad + "  " + _jstr(k) + ": ")
            _emit(v, parts, indent + 1)
            parts.append(",\n" if i + 1 < len(obj) else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, str):
        parts.append(_jstr(obj))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            parts.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray))
                   for v in items)
        if flat:
            parts.append("[" + ", ".join(
                _jstr(v) if isinstance(v, str) else _num(v) for v in items) + "]")
            return
        parts.append("[\n")
        for i, v in enumerate(items):
            parts.append(pad + "  ")
            _emit(v, parts, indent + 1)
            parts.append(",\n" if i + 1 < len(items) else "\n")
        parts.append(pad + "]")
    elif obj is None:
        parts.append("null")
    else:
        parts.append(_num(obj))


def to_json(obj):
    parts = []
    _emit(obj, parts, 0)
    parts.append("\n")
    return "".join(parts)


def _write_atomic(path, text):
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".fbms-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            try:
                os.unlink(tmp)
            except OSError:
                pass


def _deliver(cfg, text):
    if cfg.out:
        _write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


def _timestamp():
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _config_dict(cfg):
    return {
        "surface": cfg.surface,
        "problem": cfg.problem,
        "modes": list(cfg.modes),
        "grids": list(cfg.grids),
        "guard": cfg.guard,
        "seed": cfg.seed,
        "m_max": cfg.m_max,
    }


def _spectrum_record(problem, res, certified):
    rec = {
        "problem": problem,
        "mode": [int(m) for m in np.atleast_1d(res.m)],
        "eigenvalues": list(np.asarray(res.eigenvalues, dtype=float)),
        "multiplicity": [int(x) for x in res.multiplicity]
        if res.multiplicity is not None else [1] * len(res.eigenvalues),
        "extrapolated": list(res.extrapolated)
        if res.extrapolated is not None else list(res.eigenvalues),
        "order": list(res.order) if res.order is not None
        else [None] * len(res.eigenvalues),
        "certified": bool(certified),
    }
    return rec


def _identity_record(rep):
    return {
        "identity": rep.name,
        "left": rep.left,
        "right": rep.right,
        "residual": rep.residual,
        "relative": rep.relative,
        "n": rep.n,
        "order": rep.order,
    }


def _csv_text(records):
    lines = ["problem,mode,index,value,extrapolated,order"]
    for rec in records:
        for i, v in enumerate(rec["eigenvalues"]):
            order = rec["order"][i]
            lines.append("%s,%d,%d,%s,%s,%s" % (
                rec["problem"], rec["mode"][i], i,
                _num(float(v)), _num(float(rec["extrapolated"][i])),
                "" if order is None else _num(float(order))))
    return "\n".join(lines) + "\n"


def _finish(cfg, records, identities, certified):
    doc = {
        "config": _config_dict(cfg),
        "results": records,
        "identities": identities,
        "timestamp": _timestamp(),
    }
    if cfg.fmt == "csv":
        _deliver(cfg, _csv_text(records))
    else:
        _deliver(cfg, to_json(doc))
    if cfg.csv:
        _write_atomic(cfg.csv, _csv_text(records))
    return 0 if certified else 3


# ---------------------------------------------------------------------------
# subcommands


def _surface(cfg):
    return geometry.catenoid() if cfg.surface == "catenoid" else geometry.disk()


def _solve_problem(cfg, surface):
    if cfg.problem == "robin":
        return spectra.robin_spectrum(surface, modes=cfg.modes, n=cfg.grids)
    if cfg.problem == "dirichlet":
        return spectra.dirichlet_spectrum(surface, modes=cfg.modes, n=cfg.grids)
    op = cfg.problem.split("-", 1)[1]
    return spectra.steklov_spectrum(surface, operator=op, modes=cfg.modes,
                                    n=cfg.grids)


def _print_spectrum(res):
    vals = res.values
    for i in range(len(vals)):
        mult = 1 if res.multiplicity is None else int(res.multiplicity[i])
        sys.stderr.write("m=%-3d x%d  %- .12e\n" % (int(res.m[i]), mult, vals[i]))


def cmd_spectrum(cfg):
    surface = _surface(cfg)
    res = _solve_problem(cfg, surface)
    cb = count_below(res, 0.0, cfg.guard)
    _print_spectrum(res)
    sys.stderr.write("negative count %d, certified %s\n"
                     % (cb["count"], cb["certified"]))
    rec = _spectrum_record(cfg.problem, res, cb["certified"])
    return _finish(cfg, [rec], [], cb["certified"])


def cmd_index(cfg):
    surface = _surface(cfg)
    mi = spectra.morse_index(surface, m_max=cfg.m_max, n=cfg.grids,
                             guard=cfg.guard)
    res = mi["spectrum"]
    rec = _spectrum_record("robin", res, mi["certified"])
    rec["index"] = mi["index"]
    sys.stderr.write("index %d, certified %s\n" % (mi["index"], mi["certified"]))
    return _finish(cfg, [rec], [], mi["certified"])


def cmd_nonlocal(cfg):
    surface = _surface(cfg)
    nl = spectra.nonlocal_spectrum(surface, m_max=cfg.m_max, n=cfg.grids)
    rec = {
        "problem": "nonlocal",
        "mode": [int(m) for m in nl.mode],
        "eigenvalues": list(nl.mu),
        "multiplicity": [int(x) for x in nl.multiplicity],
        "extrapolated": list(nl.mu),
        "order": list(nl.order),
        "certified": bool(nl.tail_certified),
    }
    sys.stderr.write("lowest nonlocal eigenvalues: %s\n"
                     % ", ".join("%.9g" % v for v in nl.mu[:6]))
    return _finish(cfg, [rec], [], nl.tail_certified)


def cmd_verify(cfg):
    surface = _surface(cfg)
    axes = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    reports = []
    for v in axes:
        reports.append(verify.check_fsn(surface, v))
    for i, (name, f) in enumerate(verify.ipp_corpus(seed=cfg.seed)):
        reports.append(verify.check_ipp(surface, axes[i % 3], f, name=name))
    for v in axes:
        reports.extend(verify.check_lemma63(surface, v=v))
    if surface.kind == "catenoid":
        reports.append(verify.check_q1xi(surface))
    ok = all(not (rep.order == rep.order and np.isfinite(rep.order)
                  and rep.order < 1.9) for rep in reports)
    worst = max(reports, key=lambda rep: rep.relative)
    sys.stderr.write("%d identities, worst relative residual %.3e (%s)\n"
                     % (len(reports), worst.relative, worst.name))
    return _finish(cfg, [], [_identity_record(rep) for rep in reports], ok)


def cmd_convergence(cfg):
    if len(cfg.grids) < 3:
        raise ConfigError("a convergence study needs at least three grids")
    surface = _surface(cfg)
    res = _solve_problem(cfg, surface)
    ok = True
    for m in cfg.modes:
        where = np.nonzero(np.atleast_1d(res.m) == m)[0]
        if where.shape[0] == 0:
            continue
        first = where[0]
        order = res.order[first]
        sys.stderr.write("m=%-3d lowest %- .12e order %s\n"
                         % (m, res.values[first], _num(order)))
        if np.isfinite(order) and order < 1.9:
            ok = False
    rec = _spectrum_record(cfg.problem, res, ok)
    return _finish(cfg, [rec], [], ok)


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(p, modes_default="0..8"):
    p.add_argument("--surface", default="catenoid")
    p.add_argument("--modes", default=modes_default)
    p.add_argument("--n", default="512,1024,2048")
    p.add_argument("--guard", type=float, default=1e-6)
    p.add_argument("--format", dest="fmt", default="json")
    p.add_argument("--out", default="")
    p.add_argument("--csv", default="")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--m-max", dest="m_max", type=int, default=16)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fbms",
        description="Spectral computations for free boundary minimal "
                    "surfaces in the unit ball")
    sub = ap.add_subparsers(dest="command", required=True)
    ps = sub.add_parser("spectrum", help="assembled eigenvalue problems")
    ps.add_argument("--problem", default="robin")
    _add_common(ps)
    pi = sub.add_parser("index", help="negative-direction count")
    pi.add_argument("--problem", default="robin")
    _add_common(pi, modes_default="0..16")
    pn = sub.add_parser("nonlocal", help="boundary-operator spectrum")
    pn.add_argument("--problem", default="robin")
    _add_common(pn, modes_default="0..16")
    pv = sub.add_parser("verify", help="independent identity checks")
    pv.add_argument("--problem", default="robin")
    _add_common(pv)
    pc = sub.add_parser("convergence", help="order-of-accuracy study")
    pc.add_argument("--problem", default="robin")
    _add_common(pc)
    return ap


def config_from_args(args):
    cfg = RunConfig(
        surface=args.surface,
        problem=args.problem,
        modes=_parse_modes(args.modes),
        grids=_parse_grids(args.n),
        guard=args.guard,
        fmt=args.fmt,
        out=args.out,
        csv=args.csv,
        seed=args.seed,
        m_max=args.m_max,
    )
    return cfg.validate()


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        sys.stderr.write("invalid configuration: %s\n" % exc)
        return 2
    handler = {
        "spectrum": cmd_spectrum,
        "index": cmd_index,
        "nonlocal": cmd_nonlocal,
        "verify": cmd_verify,
        "convergence": cmd_convergence,
    }[args.command]
    try:
        return handler(cfg)
    except ConfigError as exc:
        sys.stderr.write("invalid configuration: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
