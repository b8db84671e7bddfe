"""knotchar command line.

    knotchar charvar --knot fig8
    knotchar norm 1 0 --knot fig8
    knotchar surgery 3 1 --json out.json
    knotchar surgery --range 5 5 --jobs 4
    knotchar volcs --driver "circle(1.0, 0.1)" --csv samples.csv
    knotchar volcs --loops auto
    knotchar tame "l" "m + 2" --at 0,0
    knotchar verify --knot fig8

Exit codes: 0 success, 2 verification failure, 3 input error, 4 numeric failure.
Reports are JSON (``--json PATH``, ``-`` for stdout) with a top-level
``"schema": 1`` and the preset, seed, tolerances and package version.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4
SCHEMA = 1


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    knot: str
    command: str
    tol: float
    loop_tol: float
    max_den: int
    seed: int
    jobs: int
    json_path: str | None
    csv_path: str | None

    def tolerances(self):
        from .verify import Tolerances

        return Tolerances(point=self.tol, loop=self.loop_tol, holonomy=self.loop_tol, max_den=self.max_den)


def _cnum(z) -> list[float]:
    z = complex(z)
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def _envelope(cfg: RunConfig, preset: str, result) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": cfg.command, "preset": preset,
            "seed": cfg.seed, "tolerances": cfg.tolerances().to_json(), "result": result}


def _emit(cfg: RunConfig, doc: dict, text: str):
    if cfg.json_path == "-":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)
        if cfg.json_path:
            with open(cfg.json_path, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands; each returns (result dict, text, exit code)


def cmd_charvar(knot, cfg, args):
    from .charvar import is_smooth_affine, reducible_characters

    curve = knot.curve
    comps = knot.components
    red = [p for c in comps for p in reducible_characters(c, knot.pres.alexander)]
    smooth = [is_smooth_affine(c) for c in comps]
    result = {"defining_polynomial": str(curve.poly), "factors": [str(f) for f in curve.factors],
              "nonabelian_components": [str(c.poly) for c in comps], "smooth": smooth,
              "reducible_characters": [p.to_json() for p in red]}
    lines = [f"defining polynomial: {curve.poly}"]
    lines += [f"  factor: {f}" for f in curve.factors]
    lines += [f"nonabelian component {i}: {c.poly}  (smooth affine: {s})"
              for i, (c, s) in enumerate(zip(comps, smooth))]
    lines += [f"reducible character: x = {p.x_exact or _cnum(p.x)}, z = {p.z_exact or _cnum(p.z)}, "
              f"multiplicity {p.multiplicity}" for p in red]
    return result, "\n".join(lines), EXIT_OK


def cmd_restrict(knot, cfg, args):
    tr = knot.triple
    rem = tr.surface_remainder()
    result = {"component": str(knot.component.poly), "I_mu": str(tr.I_mu), "I_lambda": str(tr.I_lambda),
              "I_mulambda": str(tr.I_mulambda), "surface_remainder": str(rem)}
    text = (f"component: {knot.component.poly}\nI_mu = x\nF = I_lambda = {tr.I_lambda}\n"
            f"G = I_mulambda = {tr.I_mulambda}\nx^2 + F^2 + G^2 - xFG - 4 mod component: {rem}")
    return result, text, EXIT_OK


def cmd_apoly(knot, cfg, args):
    from .boundary import is_involution_symmetric, point_test

    det = knot.apoly_details
    A = det.curve.poly
    test = point_test(A, knot.triple, 50, np.random.default_rng(cfg.seed), tol=cfg.tol)
    result = {"A0": str(A), "factors": [str(f) for f in det.kept], "discarded": [str(f) for f in det.discarded],
              "symmetric": is_involution_symmetric(A), "base_point": [_cnum(v) for v in knot.base],
              "point_test": {"passed": test.passed, "tried": test.tried, "max_residual": test.max_residual}}
    text = (f"A0(m, l) = {A}\nsymmetric under (m, l) -> (1/m, 1/l): {result['symmetric']}\n"
            f"base point (m, l) = ({knot.base[0]:.6g}, {knot.base[1]:.6g})\n"
            f"membership: {test.passed}/{test.tried} points, max residual {test.max_residual:.2e}")
    return result, text, EXIT_OK


def cmd_norm(knot, cfg, args):
    from .ideal import eigen_functionals, ideal_orders

    p, q = args.p, args.q
    if (p, q) == (0, 0):
        raise InputError("(p, q) = (0, 0) has no norm")
    nd = knot.norm
    value = nd.norm(p, q)
    rows = nd.breakdown(p, q)
    orders = ideal_orders(nd, p, q)
    for r, o, (a, b) in zip(rows, orders, eigen_functionals(nd)):
        r["v_f_gamma"] = o
        r["eigen_functional"] = [str(a), str(b)]
    result = {"slope": [p, q], "norm": value, "ideal_points": rows}
    lines = [f"|({p},{q})| = {value}"]
    lines += [f"  {r['point']} e={r['e']}: v(I_mu)={r['v_I_mu']} v(I_lambda)={r['v_I_lambda']} "
              f"sign={r['sign']:+d} phi={r['phi']} v(f_gamma)={r['v_f_gamma']}" for r in rows]
    return result, "\n".join(lines), EXIT_OK


def _surgery_text(rep, cmp) -> str:
    lines = [f"slope {rep.slope}: I_gamma = {rep.gamma_poly}",
             f"  b = {rep.b}, lambda = {rep.lam}, norm = {cmp['norm']}, I_hat = {cmp['I_hat']} "
             f"(shear {rep.shear}, seed {rep.seed})"]
    for sign, fac in rep.x_eliminants.items():
        lines.append(f"  x-eliminant chi(gamma) = {sign}: " + " * ".join(f"({f})^{k}" for f, k in fac))
    for c in rep.chi_list:
        flags = [n for n, v in (("excluded", c.excluded), ("reducible", c.reducible),
                                ("boundary-branch-point", c.boundary_branch_point)) if v]
        x = c.x_exact if c.x_exact is not None else f"{c.x:.10g}"
        z = c.z_exact if c.z_exact is not None else f"{c.z:.10g}"
        lines.append(f"  chi(gamma) = {2 * c.sign:+d}: x = {x}, z = {z}, multiplicity {c.multiplicity}"
                     + (f" [{', '.join(flags)}]" if flags else ""))
    return "\n".join(lines)


def cmd_surgery(knot, cfg, args):
    from .surgery import SurgerySlope, batch_reports, compare_with_norm, intersection_set

    if args.range:
        P, Q = args.range
        if P < 0 or Q < 0:
            raise InputError("--range bounds must be non-negative")
        reps = batch_reports(knot.component, knot.triple, P, Q, knot.pres.alexander, cfg.seed, cfg.jobs)
    else:
        if args.p is None or args.q is None:
            raise InputError("surgery needs p q or --range P Q")
        try:
            slope = SurgerySlope(args.p, args.q)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        reps = [intersection_set(slope, knot.component, knot.triple, knot.pres.alexander, cfg.seed)]
    out, texts = [], []
    for r in reps:
        cmp = compare_with_norm(r, knot.norm)
        d = r.to_json()
        d["comparison"] = cmp
        out.append(d)
        texts.append(_surgery_text(r, cmp))
    result = out[0] if len(out) == 1 and not args.range else {"reports": out}
    return result, "\n".join(texts), EXIT_OK


def _path_csv(paths) -> str:
    rows = []
    for k, (label, path) in enumerate(paths):
        body = path.to_csv().splitlines()
        if k == 0:
            rows.append("path," + body[0])
        rows += [f"{label},{line}" for line in body[1:]]
    return "\n".join(rows) + "\n"


def cmd_volcs(knot, cfg, args):
    from .regulator import (PathSpec, detect_rational, integrate_forms, loop_library, parse_driver,
                            refined, track_path, vol_cs)

    volK = knot.pres.vol_constant or 0.0
    csK = knot.pres.cs_constant or 0.0
    m0, l0 = knot.base
    result, lines, csv_paths = {}, [], []
    if args.driver:
        try:
            pieces = parse_driver(args.driver, m0)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        path = track_path(knot.eigencurve, PathSpec(pieces, l0, branch=args.branch))
        fi = integrate_forms(path, tol=cfg.loop_tol)
        vol, cs = vol_cs(path, volK, csK)
        d = {"driver": args.driver, "closed": path.closed, "l_drift": float(path.l_drift),
             "samples": int(path.m.size), "max_residual": float(path.max_residual),
             "integrals": fi.to_json(), "vol": vol, "cs": cs, "volK": volK, "csK": csK}
        lines.append(f"driver {args.driver} from (m, l) = ({m0:.6g}, {l0:.6g}), {path.m.size} samples")
        lines.append(f"  int eta = {fi.eta:.3e}, int xi = {fi.xi:.12g} (error {fi.error:.1e})")
        lines.append(f"  Vol = {vol:.12g} (volK {volK}), CS = {cs:.12g} (csK {csK})")
        if path.closed:
            rat = detect_rational(fi.xi_loop / (4 * np.pi ** 2), cfg.max_den, cfg.loop_tol)
            d["xi_rational"] = None if rat is None else list(rat)
            lines.append(f"  closed: l-drift {path.l_drift:.1e}, xi/4pi^2 = {fi.xi_loop / (4 * np.pi ** 2):.12g}"
                         f" ~ {'none' if rat is None else f'{rat[0]}/{rat[1]}'}")
        result["driver"] = d
        csv_paths.append(("driver", path))
    if args.loops == "auto":
        loops = []
        for i, (loop, path) in enumerate(loop_library(knot.eigencurve)):
            rats, etas = [], []
            for k in (0, 1, 2):
                fi = integrate_forms(refined(loop, knot.eigencurve, k), tol=cfg.loop_tol)
                etas.append(fi.eta)
                rats.append(detect_rational(fi.xi_loop / (4 * np.pi ** 2), cfg.max_den, cfg.loop_tol))
            fi0 = integrate_forms(path, tol=cfg.loop_tol)
            stable = len(set(rats)) == 1 and rats[0] is not None
            loops.append({"name": loop.name, "turns": loop.turns, "start_l": _cnum(path.l[0]),
                          "integrals": fi0.to_json(), "eta_max": max(abs(e) for e in etas),
                          "xi_rational": None if rats[0] is None else list(rats[0]), "stable": stable})
            lines.append(f"loop {i}: {loop.name} from l = {path.l[0]:.6g} ({loop.turns} turn(s)): "
                         f"eta {max(abs(e) for e in etas):.1e}, xi/4pi^2 ~ "
                         f"{'none' if rats[0] is None else f'{rats[0][0]}/{rats[0][1]}'}, stable={stable}")
            csv_paths.append((f"loop{i}", path))
        result["loops"] = loops
    if not result:
        raise InputError("volcs needs --driver or --loops auto")
    if cfg.csv_path:
        with open(cfg.csv_path, "w", encoding="utf-8") as fh:
            fh.write(_path_csv(csv_paths))
    return result, "\n".join(lines), EXIT_OK


def cmd_tame(knot, cfg, args):
    from .charvar import PlaneCurve
    from .ideal import (affine_point, branch_expansions, format_point, ideal_points, projective_closure,
                        tame_symbol, valuation)
    from .poly import parse_rational

    if args.curve == "apoly":
        curve, vars = PlaneCurve(knot.apoly.poly, ("m", "l")), ("m", "l")
    else:
        curve, vars = knot.component, tuple(knot.component.vars)
    try:
        f, g = parse_rational(args.f, vars), parse_rational(args.g, vars)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    pc = projective_closure(curve)
    if args.at:
        try:
            a, b = (complex(s.strip().replace("i", "j")) for s in args.at.split(","))
        except ValueError as exc:
            raise InputError(f"--at expects 'a,b', got {args.at!r}") from exc
        if abs(complex(curve.poly.evaluate({vars[0]: a, vars[1]: b}))) > cfg.tol:
            raise InputError(f"({a}, {b}) is not on the curve")
        points = [affine_point(pc, a, b)]
    else:
        points = ideal_points(pc)
    coords = ":".join(str(v) for v in pc.poly.vars)
    rows, lines = [], [f"tame symbols of ({args.f}, {args.g}) on {curve.poly}", f"  points as [{coords}]"]
    for P in points:
        for br in branch_expansions(pc, P):
            vf, vg = valuation(f, br).value, valuation(g, br).value
            T = tame_symbol(f, g, br)
            rows.append({"point": format_point(P), "e": br.e, "v_f": vf, "v_g": vg, "tame": _cnum(T)})
            lines.append(f"  {format_point(P)} e={br.e}: v(f)={vf}, v(g)={vg}, T = {T:.12g}")
    return ({"f": args.f, "g": args.g, "curve": args.curve, "coordinates": list(pc.poly.vars), "branches": rows},
            "\n".join(lines), EXIT_OK)


def cmd_verify(knot, cfg, args):
    from .verify import run_all

    checks = run_all(knot, cfg.tolerances(), jobs=cfg.jobs)
    failed = [c for c in checks if c.passed is False]
    result = {"checks": [c.to_json() for c in checks], "passed": not failed}
    text = "\n".join(c.line() for c in checks)
    text += f"\n{len(checks) - len(failed)}/{len(checks)} checks without failure"
    return result, text, EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"charvar": cmd_charvar, "restrict": cmd_restrict, "apoly": cmd_apoly, "norm": cmd_norm,
            "surgery": cmd_surgery, "volcs": cmd_volcs, "tame": cmd_tame, "verify": cmd_verify}


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 3 with the JSON error record."""

    def error(self, message):
        self.print_usage(sys.stderr)
        command = self.prog.split()[-1] if " " in self.prog else None
        doc = {"schema": SCHEMA, "version": __version__, "command": command,
               "error": {"type": "UsageError", "message": message}, "exit": EXIT_INPUT}
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--knot", default="fig8", help="preset name or path to a .knot file (default fig8)")
    common.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report ('-' for stdout)")
    common.add_argument("--csv", dest="csv_path", metavar="PATH", help="CSV sample dump (volcs)")
    common.add_argument("--tol", type=float, default=1e-7, help="numeric point tolerance")
    common.add_argument("--loop-tol", type=float, default=1e-6, help="loop integral tolerance")
    common.add_argument("--max-den", type=int, default=64, help="largest denominator for rational detection")
    common.add_argument("--seed", type=int, default=0, help="seed for random coordinate changes and samples")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch runs")

    ap = _Parser(prog="knotchar", description=__doc__.split("\n\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"knotchar {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("charvar", parents=[common], help="defining polynomial and reducible characters")
    sub.add_parser("restrict", parents=[common], help="boundary traces (I_mu, I_lambda, I_mulambda)")
    sub.add_parser("apoly", parents=[common], help="the A-polynomial factor A0(m, l)")
    sp = sub.add_parser("norm", parents=[common], help="Culler-Shalen norm of p*mu + q*lambda")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp = sub.add_parser("surgery", parents=[common], help="surgery intersection report")
    sp.add_argument("p", type=int, nargs="?")
    sp.add_argument("q", type=int, nargs="?")
    sp.add_argument("--range", type=int, nargs=2, metavar=("P", "Q"), help="all coprime |p| <= P, |q| <= Q")
    sp = sub.add_parser("volcs", parents=[common], help="path and loop integrals on the A0 curve")
    sp.add_argument("--driver", help='m-driver, e.g. "circle(1.0, 0.1)" or "segment(1, 1.1)"')
    sp.add_argument("--loops", choices=["auto"], help="run the automatic loop library")
    sp.add_argument("--branch", choices=["geometric", "other"], default="geometric",
                    help="branch of A0 leaving the base point")
    sp = sub.add_parser("tame", parents=[common], help="tame symbols of two rational functions")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--at", help="affine point 'a,b' (default: all ideal points)")
    sp.add_argument("--curve", choices=["apoly", "component"], default="apoly")
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return ap


def _config(args) -> RunConfig:
    if args.tol <= 0 or args.loop_tol <= 0:
        raise InputError("tolerances must be positive")
    if args.max_den < 1:
        raise InputError("--max-den must be at least 1")
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    return RunConfig(args.knot, args.command, args.tol, args.loop_tol, args.max_den, args.seed, args.jobs,
                     args.json_path, args.csv_path)


def _fail(cfg_or_args, code: int, exc: BaseException) -> int:
    doc = {"schema": SCHEMA, "version": __version__, "command": getattr(cfg_or_args, "command", None),
           "error": {"type": type(exc).__name__, "message": str(exc)}, "exit": code}
    text = json.dumps(doc, sort_keys=True)
    print(text, file=sys.stderr)
    path = getattr(cfg_or_args, "json_path", None)
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


def main(argv=None) -> int:
    from .pipeline import Knot
    from .poly import PolyParseError
    from .presentation import PresetError

    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        knot = Knot(cfg.knot, seed=cfg.seed)
        knot.pres  # noqa: B018 - parse errors surface here
        result, text, code = COMMANDS[cfg.command](knot, cfg, args)
    except (InputError, PresetError, PolyParseError, FileNotFoundError) as exc:
        return _fail(args, EXIT_INPUT, exc)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(args, EXIT_NUMERIC, exc)
    except ValueError as exc:
        return _fail(args, EXIT_INPUT, exc)
    _emit(cfg, _envelope(cfg, knot.name, result), text)
    return code


if __name__ == "__main__":
    sys.exit(main())
