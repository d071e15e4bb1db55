"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input.
Reports are JSON (sorted keys) or CSV; rationals are "num/den" strings.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__

SCHEMA_VERSION = 1
CACHE_ENV = "N2ZHU_CACHE_DIR"

MODULE_ALIASES = {
    "vac": "vacuum-ns2", "vacuum": "vacuum-ns2", "verma": "verma-ns2", "chiral": "chiral-verma-ns2",
    "gen-verma": "gen-verma-ns2", "vac-affine": "vacuum-affine",
}


class InvalidInput(ValueError):
    pass


def rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    pp: int | None = None
    r: int | None = None
    s: int = 0
    j: Fraction | None = None
    h: Fraction | None = None
    m: int | None = None
    module: str | None = None
    algebra: str = "ns2"
    level: Fraction | None = None
    charge: Fraction | None = None
    max_level: Fraction | None = None
    window: tuple | None = None
    mode_window: int = 4
    slack_bound: int = 6
    variant: str | None = None
    expr: str | None = None
    epsilon: int | None = None
    odd: bool = False
    literal_twist: bool = False
    simple: bool = False
    criteria: tuple = ()
    fmt: str = "json"
    cache_dir: str | None = None

    def semantic_key(self) -> str:
        d = asdict(self)
        d.pop("cache_dir")
        d["engine"] = __version__
        return json.dumps(d, sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# cache


class ResultCache:
    """Content-addressed report store; corrupted entries count as misses."""

    def __init__(self, root):
        self.root = Path(root)

    def _path(self, key):
        digest = hashlib.sha256(key.encode()).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, key):
        path = self._path(key)
        try:
            blob = json.loads(path.read_text())
            text, code = blob["report"], blob["exit_code"]
            if blob["sha256"] != hashlib.sha256(text.encode()).hexdigest() or blob["key"] != key:
                raise ValueError("checksum mismatch")
            return text, code
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError):
            path.unlink(missing_ok=True)
            return None

    def put(self, key, text, code):
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = {"key": key, "report": text, "exit_code": code,
                "sha256": hashlib.sha256(text.encode()).hexdigest()}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(blob, sort_keys=True))
        tmp.replace(path)


def default_cache_dir():
    return os.environ.get(CACHE_ENV) or str(Path.home() / ".cache" / "n2zhu")


# ---------------------------------------------------------------------------
# helpers


def _params(cfg):
    from .superalg import Parameters
    if cfg.p is None or cfg.pp is None:
        raise InvalidInput("--p and --pp are required")
    return Parameters(cfg.p, cfg.pp)


def _q(x):
    from .superalg import fmt_q
    return fmt_q(Fraction(x))


def _vector_table(free, vec):
    out = {}
    spec = free.spec
    for (mono, t), c in sorted(vec.items()):
        parts = [spec.label(g) for g in mono]
        if t > 0:
            parts.append(f"F[0]^{t}")
        elif t < 0:
            parts.append(f"E[0]^{-t}")
        out[" ".join(parts) or "1"] = _q(c)
    return out


def _dump(obj):
    return json.dumps({"schema": SCHEMA_VERSION, **obj}, sort_keys=True, indent=2, default=str) + "\n"


# ---------------------------------------------------------------------------
# commands: each returns (report text, exit code)


def cmd_check_jacobi(cfg):
    from .superalg import build_algebra, check_super_jacobi
    params = None if cfg.algebra == "gl11" else _params(cfg)
    rep = check_super_jacobi(build_algebra(cfg.algebra, params), cfg.mode_window)
    bad = rep["violations"] or rep["antisymmetry_violations"]
    rep["violations"] = [list(v) for v in rep["violations"]]
    rep["antisymmetry_violations"] = [list(v) for v in rep["antisymmetry_violations"]]
    return _dump(rep), 1 if bad else 0


def cmd_pbw_reduce(cfg):
    from .pbw import Pbw, format_element, parse_expr
    from .superalg import build_algebra
    params = None if cfg.algebra == "gl11" else _params(cfg)
    spec = build_algebra(cfg.algebra, params)
    if not cfg.expr:
        raise InvalidInput("--expr is required")
    nf = Pbw(spec).normal_order(parse_expr(spec, cfg.expr))
    return _dump({"algebra": spec.name, "expr": cfg.expr, "normal_form": format_element(spec, nf)}), 0


def _presentation(cfg):
    from .reps import KINDS, present_module
    kind = MODULE_ALIASES.get(cfg.module, cfg.module)
    if kind not in KINDS:
        raise InvalidInput(f"unknown module kind {cfg.module!r}")
    ev = {}
    for name in ("h", "j", "m"):
        val = getattr(cfg, name)
        if val is not None:
            ev[name] = val
    params = None if kind == "gl11-verma" else _params(cfg)
    if kind == "gl11-verma":
        ev = {"z": cfg.h if cfg.h is not None else 0, "j": cfg.j or 0}
    try:
        return present_module(kind, params, **ev)
    except KeyError as exc:
        raise InvalidInput(f"module {kind} needs eigenvalue {exc.args[0]}")


def cmd_singular_search(cfg):
    from .reps import find_singular
    pres = _presentation(cfg)
    if cfg.level is None or cfg.charge is None:
        raise InvalidInput("--level and --charge are required")
    if cfg.level < 0:
        raise InvalidInput("level >= 0 violated")
    vecs = find_singular(pres, cfg.level, cfg.charge)
    return _dump({"module": pres.kind, "weight": f"{_q(cfg.level)}@{_q(cfg.charge)}",
                  "dimension": len(vecs),
                  "vectors": [_vector_table(pres.free, v) for v in vecs]}), 0


def cmd_char(cfg):
    from .reps import module_character, simple_character
    pres = _presentation(cfg)
    if cfg.max_level is None or cfg.max_level < 0:
        raise InvalidInput("--max-level >= 0 required")
    window = cfg.window
    if window is None and pres.zero_dir:
        window = pres.default_window(cfg.max_level)
    if cfg.simple:
        ch = simple_character(pres, cfg.max_level, window=window)
    else:
        ch = module_character(pres, cfg.max_level, window=window)
    rows = [(l - pres.h0, c, d) for (l, c), d in sorted(ch.entries.items()) if d]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "charge", "dim"])
        for l, c, d in rows:
            w.writerow([_q(l), _q(c), d])
        return buf.getvalue(), 0
    return _dump({"module": pres.kind, "rows": [{"level": _q(l), "charge": _q(c), "dim": d}
                                                for l, c, d in rows]}), 0


def _poly_tables(expr, gens):
    from .zhu import poly_table
    return poly_table(expr, gens)


def cmd_zhu_sigma(cfg):
    from . import references, zhu
    from .reps import find_singular, present_module
    P = _params(cfg)
    lvl = (P.p - 1) * P.pp
    vac = present_module("vacuum-ns2", P)
    vecs = find_singular(vac, lvl, 0)
    if len(vecs) != 1:
        return _dump({"error": f"expected one singular vector, found {len(vecs)}"}), 1
    ctx = zhu.build_o_span("sigma", P, lvl, slack_bound=cfg.slack_bound)
    phi = zhu.coset_to_gl11(ctx, zhu.zhu_reduce(ctx, vecs[0]))
    out = {"p": P.p, "pp": P.pp, "delta": lvl, "phi": phi.normalized().table(),
           "certificate": ctx.certificate}
    code = 0
    try:
        ref = zhu.Gl11Element(*references.phi(P.p, P.pp))
        out["proportional_to_reference"] = phi.proportional_to(ref)
        code = 0 if out["proportional_to_reference"] else 1
    except KeyError:
        out["proportional_to_reference"] = None
    return _dump(out), code


def cmd_zhu_id(cfg):
    from . import zhu
    P = _params(cfg)
    f, g = zhu.zhu_polys(P)
    gens = (zhu.hs, zhu.qs)
    return _dump({"p": P.p, "pp": P.pp, "f_c": _poly_tables(f, gens),
                  "g_c": _poly_tables(g, gens)}), 0


def cmd_fz_fusion(cfg):
    import sympy as sp
    from . import zhu
    P = _params(cfg)
    if cfg.epsilon is not None:
        if cfg.epsilon not in (-1, 0, 1):
            raise InvalidInput("epsilon in {-1, 0, 1} violated")
        label = f"C({cfg.epsilon})"
    elif cfg.j is not None:
        label = f"C_{_q(cfg.j)}"
    else:
        raise InvalidInput("give --j or --epsilon")
    h, q = zhu.label_eigenvalues(P, label)
    rep = zhu.fz_kernel_and_fusion(P, h, q, right_odd=cfg.odd)

    def s(x):
        return zhu._sfmt(sp.nsimplify(x))

    return _dump({"right": {"label": label, "h": s(h), "q": s(q), "odd": cfg.odd},
                  "dimension": int(rep["dimension"]),
                  "xl_eigenvalues": [s(x) for x in rep["xl_eigenvalues"]],
                  "parities": rep["parities"],
                  "summands": [x["label"] for x in rep["summands"]]}), 0


def cmd_bgg_verify(cfg):
    from .resolutions import ResolutionSpec, verify_euler
    if cfg.variant is None or cfg.r is None or cfg.max_level is None:
        raise InvalidInput("--variant, --r and --max-level are required")
    spec = ResolutionSpec(cfg.variant, _params(cfg), cfg.r, cfg.s, cfg.j, window=cfg.window,
                          literal_twist=cfg.literal_twist)
    rep = verify_euler(spec, cfg.max_level)
    return _dump(rep), 0 if rep["match"] else 1


def cmd_reproduce(cfg):
    from .acceptance import CRITERIA, run_all
    sel = list(cfg.criteria) or sorted(CRITERIA)
    for n in sel:
        if n not in CRITERIA:
            raise InvalidInput(f"criterion in 1..{len(CRITERIA)} violated ({n})")
    results = run_all(sel)
    lines = [r.line() for r in results]
    body = {"criteria": [{"number": r.number, "name": r.name, "ok": r.ok, "detail": r.detail}
                         for r in results],
            "summary": lines}
    return _dump(body), 0 if all(r.ok for r in results) else 1


COMMANDS = {
    "algebra check-jacobi": cmd_check_jacobi,
    "pbw reduce": cmd_pbw_reduce,
    "singular search": cmd_singular_search,
    "char": cmd_char,
    "zhu sigma": cmd_zhu_sigma,
    "zhu id": cmd_zhu_id,
    "fz fusion": cmd_fz_fusion,
    "bgg verify": cmd_bgg_verify,
    "reproduce": cmd_reproduce,
}

UNCACHED = {"reproduce", "pbw reduce", "algebra check-jacobi"}


def run(cfg: RunConfig, use_cache=True):
    """Execute a config; returns (exit code, report text)."""
    fn = COMMANDS[cfg.command]
    cache = None
    if use_cache and cfg.command not in UNCACHED:
        cache = ResultCache(cfg.cache_dir or default_cache_dir())
        hit = cache.get(cfg.semantic_key())
        if hit is not None:
            text, code = hit
            return code, text
    try:
        text, code = fn(cfg)
    except (InvalidInput, ValueError, argparse.ArgumentTypeError) as exc:
        return 2, f"invalid input: {exc}\n"
    if cache is not None and code in (0, 1):
        try:
            cache.put(cfg.semantic_key(), text, code)
        except OSError:
            pass
    return code, text


# ---------------------------------------------------------------------------
# argument parsing


def _common(p, params=True):
    if params:
        p.add_argument("--p", type=int)
        p.add_argument("--pp", type=int)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir")
    p.add_argument("--no-cache", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="n2zhu", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="group", required=True)

    alg = sub.add_parser("algebra").add_subparsers(dest="action", required=True)
    x = alg.add_parser("check-jacobi")
    _common(x)
    x.add_argument("--algebra", default="ns2", choices=("ns2", "affine-sl2", "gl11"))
    x.add_argument("--window", dest="mode_window", type=int, default=4)

    pbw = sub.add_parser("pbw").add_subparsers(dest="action", required=True)
    x = pbw.add_parser("reduce")
    _common(x)
    x.add_argument("--algebra", default="ns2", choices=("ns2", "affine-sl2", "gl11"))
    x.add_argument("--expr", required=True)

    sing = sub.add_parser("singular").add_subparsers(dest="action", required=True)
    x = sing.add_parser("search")
    _common(x)
    x.add_argument("--algebra", default="ns2")
    x.add_argument("--module", required=True)
    for name in ("h", "j"):
        x.add_argument(f"--{name}", type=rational)
    x.add_argument("--m", type=int)
    x.add_argument("--level", type=rational, required=True)
    x.add_argument("--charge", type=rational, required=True)

    x = sub.add_parser("char")
    _common(x)
    x.add_argument("--module", required=True)
    for name in ("h", "j"):
        x.add_argument(f"--{name}", type=rational)
    x.add_argument("--m", type=int)
    x.add_argument("--max-level", type=rational, required=True)
    x.add_argument("--window", type=window_pair)
    x.add_argument("--simple", action="store_true")

    z = sub.add_parser("zhu").add_subparsers(dest="action", required=True)
    x = z.add_parser("sigma")
    _common(x)
    x.add_argument("--express-singular", action="store_true", required=True)
    x.add_argument("--slack-bound", type=int, default=6)
    x = z.add_parser("id")
    _common(x)
    x.add_argument("--polys", action="store_true", required=True)

    fz = sub.add_parser("fz").add_subparsers(dest="action", required=True)
    x = fz.add_parser("fusion")
    _common(x, params=False)
    x.add_argument("--p", type=int, default=3)
    x.add_argument("--pp", type=int, default=2)
    x.add_argument("--j", type=rational)
    x.add_argument("--epsilon", type=int)
    x.add_argument("--odd", action="store_true")

    b = sub.add_parser("bgg").add_subparsers(dest="action", required=True)
    x = b.add_parser("verify")
    _common(x)
    x.add_argument("--variant", required=True)
    x.add_argument("--r", type=int, required=True)
    x.add_argument("--s", type=int, default=0)
    x.add_argument("--j", type=rational)
    x.add_argument("--max-level", type=rational, required=True)
    x.add_argument("--window", type=window_pair)
    x.add_argument("--literal-twist", action="store_true")

    x = sub.add_parser("reproduce")
    _common(x, params=False)
    g = x.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true")
    g.add_argument("--criterion", type=int, action="append")
    return ap


def config_from_args(ns) -> RunConfig:
    command = ns.group if getattr(ns, "action", None) is None else f"{ns.group} {ns.action}"
    cfg = RunConfig(command=command, fmt=ns.fmt, cache_dir=ns.cache_dir)
    for name in ("p", "pp", "r", "s", "j", "h", "m", "module", "algebra", "level", "charge",
                 "max_level", "mode_window", "slack_bound", "variant", "expr", "epsilon",
                 "odd", "literal_twist", "simple"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "window", None):
        cfg.window = ns.window
    if command == "reproduce":
        cfg.criteria = tuple(ns.criterion or ())
    return cfg


def window_pair(text):
    lo, sep, hi = text.partition(",")
    if not sep:
        raise argparse.ArgumentTypeError(f"window must be 'lo,hi', got {text!r}")
    return rational(lo), rational(hi)


def _join_negative_values(argv):
    # argparse would read "--j -1/3" as two options; "--window lo hi" becomes "--window=lo,hi"
    out = []
    argv = list(argv)
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--window" and i + 2 < len(argv) and not argv[i + 2].startswith("--"):
            out.append(f"--window={argv[i + 1]},{argv[i + 2]}")
            i += 3
            continue
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"^-\d", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
        i += 1
    return out


def main(argv=None):
    ap = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = config_from_args(ns)
    code, text = run(cfg, use_cache=not ns.no_cache)
    (sys.stdout if code != 2 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
