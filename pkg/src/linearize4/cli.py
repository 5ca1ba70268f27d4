"""Command-line front end.

    linearize4 test REQUEST        decide linearizability (exit 0 yes, 1 no, 2 error)
    linearize4 construct REQUEST   build the map and the linear target, then verify it
    linearize4 oracle REQUEST      write the equation a given map produces
    linearize4 verify REQUEST      check a given map against an equation

REQUEST is a JSON file or one of the bundled fixtures example1..example4.
Reports are JSON on stdout (or --out); logs go to stderr.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .candidates import (NAMES_I, NAMES_II, CandidateI, LinearTarget, PointMap, classify,
                         coefficients_from_table, forward_coefficients_I,
                         forward_coefficients_II, parse_rhs)
from .errors import LinearizeError, RequestError, ShapeMismatch
from .exprcore import SamplePlan, diff, free_vars, parse_expr, simplify
from .lintest import check_coefficients

log = logging.getLogger("linearize4")

FIXTURES = ("example1", "example2", "example3", "example4")
REQUEST_KEYS = {"parameters", "candidateI", "candidateII", "rhs", "samplePlan", "construct",
                "transform"}
EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class AnalysisRequest:
    """A parsed request file."""

    source: str
    parameters: dict = field(default_factory=dict)
    coefficients: object = None
    plan: SamplePlan = SamplePlan()
    chi0: float = 0.0
    grid: int = 41
    seeds: dict = field(default_factory=dict)
    transform: dict = None


def _number(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise RequestError(f"{what} must be a number, got {v!r}")
    try:
        return Fraction(str(v))
    except ValueError:
        raise RequestError(f"{what} must be a number, got {v!r}") from None


def read_request(name):
    """Raw request dict from a path or a fixture name."""
    if name in FIXTURES:
        text = resources.files("linearize4").joinpath("fixtures", f"{name}.json").read_text("utf-8")
        return json.loads(text), name
    path = Path(name)
    if not path.exists():
        raise RequestError(f"no such request file or fixture: {name}")
    return json.loads(path.read_text("utf-8")), str(path)


def parse_request(raw, source="<request>", overrides=None, need_equation=True):
    """Validate a raw request and turn it into an AnalysisRequest."""
    overrides = overrides or {}
    if not isinstance(raw, dict):
        raise RequestError("a request must be a JSON object")
    unknown = set(raw) - REQUEST_KEYS
    if unknown:
        raise RequestError(f"unknown request keys {sorted(unknown)}")
    params = {k: _number(v, f"parameter {k}") for k, v in (raw.get("parameters") or {}).items()}
    params.update({k: _number(v, f"parameter {k}") for k, v in overrides.get("parameters", {}).items()})

    sources = [k for k in ("rhs", "candidateI", "candidateII") if k in raw]
    if len(sources) > 1:
        raise RequestError(f"exactly one equation source is allowed, got {sources}")
    coefficients = None
    if sources:
        coefficients = _equation(raw, sources[0], params)
    elif need_equation:
        raise RequestError("the request has no equation (rhs, candidateI or candidateII)")

    sp = dict(raw.get("samplePlan") or {})
    unknown = set(sp) - {"box", "points", "seed", "epsSing", "mode"}
    if unknown:
        raise RequestError(f"unknown samplePlan keys {sorted(unknown)}")
    plan_args = {}
    if "box" in sp:
        plan_args["box"] = tuple(tuple(float(v) for v in side) for side in sp["box"])
    for key, attr in (("points", "points"), ("seed", "seed"), ("epsSing", "eps_sing"),
                      ("mode", "mode")):
        if key in sp:
            plan_args[attr] = sp[key]
    for attr in ("box", "points", "seed"):
        if overrides.get(attr) is not None:
            plan_args[attr] = overrides[attr]
    try:
        plan = SamplePlan(**plan_args)
    except (TypeError, ValueError) as exc:
        raise RequestError(f"bad samplePlan: {exc}") from None

    cons = dict(raw.get("construct") or {})
    unknown = set(cons) - {"chi0", "grid", "seeds"}
    if unknown:
        raise RequestError(f"unknown construct keys {sorted(unknown)}")
    transform = raw.get("transform")
    if transform is not None:
        missing = {"phi", "psi"} - set(transform)
        if missing:
            raise RequestError(f"transform lacks {sorted(missing)}")
    return AnalysisRequest(source, params, coefficients, plan, float(cons.get("chi0", 0.0)),
                           int(cons.get("grid", 41)), dict(cons.get("seeds") or {}), transform)


def _equation(raw, key, params):
    if key == "rhs":
        rhs = parse_rhs(str(raw["rhs"]), parameters=tuple(params))
        verdict = classify(rhs, params)
        if not isinstance(verdict, CandidateI):
            raise ShapeMismatch(list(verdict.monomials), detail=verdict.reason)
        c = verdict.coefficients
    else:
        table = raw[key]
        if not isinstance(table, dict):
            raise RequestError(f"{key} must be an object of coefficient strings")
        c = coefficients_from_table(table, "I" if key == "candidateI" else "II", params)
    missing = (set().union(*(free_vars(e) for _, e in c.items())) - {"x", "y"}) - set(params)
    if missing:
        raise RequestError(f"unbound parameters {sorted(missing)}")
    return c


# ---------------------------------------------------------------------------
# Commands

def cmd_test(req, tol=1e-9):
    report = check_coefficients(req.coefficients, req.plan, tol)
    out = report.to_dict()
    out["request"] = req.source
    return (EXIT_OK if report.linearizable else EXIT_NO), out


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def transform_report(pm):
    out = {"kind": pm.kind, "closed": pm.is_closed, "notes": list(pm.notes)}
    if pm.is_closed:
        out["phi"] = str(pm.phi)
        out["psi"] = str(pm.psi)
    g = pm.grid
    if g:
        xs, ys = g["x"], g["y"]
        block = {"x": [float(xs[0]), float(xs[-1]), len(xs)],
                 "y": [float(ys[0]), float(ys[-1]), len(ys)],
                 "layout": "row-major, x index outer"}
        for name in ("phi", "psi", "Delta", "alpha", "beta"):
            if name in g:
                block[name] = _floats(g[name])
        out["grid"] = block
    return out


def target_report(target, kind, aux=None):
    out = {"alpha": None if target.alpha is None else str(target.alpha),
           "beta": None if target.beta is None else str(target.beta),
           "statement": target.statement()}
    if aux is not None:
        out["omega" if kind == "I" else "theta"] = str(aux)
    if target.t is not None:
        out["t"] = _floats(target.t)
        out["alphaSamples"] = _floats(target.alpha_samples)
        out["betaSamples"] = _floats(target.beta_samples)
    return out


def cmd_construct(req, tol=1e-9):
    from .construct import construct_I, construct_II, theta
    from .verify import roundtrip_check
    code, tested = cmd_test(req, tol)
    out = {"request": req.source, "verdict": tested["verdict"], "conditions": tested["conditions"]}
    if code != EXIT_OK:
        return code, out
    c = req.coefficients.bind()
    box = req.plan.box
    if c.kind == "I":
        built = construct_I(c, box, chi0=req.chi0, grid=req.grid)
        aux = built.target.extras.get("omega")
        out["chi"] = {"chi0": built.chi.chi0, "identicallyZero": built.chi.exact_zero}
    else:
        built = construct_II(c, box, seeds=req.seeds, grid=req.grid)
        aux = theta(c)
        out["gridResiduals"] = built.residuals
    out["transform"] = transform_report(built.point_map)
    out["alphaBeta"] = target_report(built.target, c.kind, aux)
    rt = roundtrip_check(c, built.point_map, built.target, box=box, seed=req.plan.seed)
    out["roundtripResidual"] = rt.max_residual
    out["roundtrip"] = rt.to_dict()
    return EXIT_OK, out


def _transform_exprs(tr):
    phi = parse_expr(str(tr["phi"]))
    psi = parse_expr(str(tr["psi"]))
    alpha = parse_expr(str(tr.get("alpha", "0")), variables=("t",))
    beta = parse_expr(str(tr.get("beta", "0")), variables=("t",))
    return phi, psi, alpha, beta


def _map_kind(phi):
    return "I" if diff(phi, "y").is_zero() else "II"


def cmd_oracle(req, tol=None):
    if req.transform is None:
        raise RequestError("oracle needs a transform {phi, psi, alpha, beta}")
    phi, psi, alpha, beta = _transform_exprs(req.transform)
    if _map_kind(phi) == "I":
        c, key = forward_coefficients_I(phi, psi, alpha, beta), "candidateI"
    else:
        c, key = forward_coefficients_II(phi, psi, alpha, beta), "candidateII"
    (xl, xh), (yl, yh) = req.plan.box
    out = {key: {n: str(simplify(e)) for n, e in c.items()},
           "samplePlan": {"box": [[xl, xh], [yl, yh]], "points": req.plan.points,
                          "seed": req.plan.seed, "epsSing": req.plan.eps_sing}}
    return EXIT_OK, out


def cmd_verify(req, tol=1e-5):
    from .verify import chainrule_coefficient_oracle, roundtrip_check
    if req.transform is None:
        raise RequestError("verify needs a transform {phi, psi, alpha, beta}")
    phi, psi, alpha, beta = _transform_exprs(req.transform)
    kind = _map_kind(phi)
    c = req.coefficients
    if c is None:
        c = (forward_coefficients_I if kind == "I" else forward_coefficients_II)(phi, psi, alpha, beta)
    c = c.bind()
    if c.kind != kind:
        raise RequestError(f"the transform gives a candidate {kind} equation, the request has {c.kind}")
    out = {"request": req.source, "kind": kind}
    rng = req.plan.rng()
    xs, ys = req.plan.draw(rng, req.plan.points, False)
    pts = list(zip(map(float, xs), map(float, ys)))
    forward = (forward_coefficients_I if kind == "I" else forward_coefficients_II)(phi, psi, alpha, beta)
    chain = chainrule_coefficient_oracle(phi, psi, alpha, beta, kind, pts)
    from .exprcore import evaluate
    worst = 0.0
    names = NAMES_I if kind == "I" else NAMES_II
    for n in names:
        fv, _ = evaluate(forward[n], {"x": np.asarray(xs, float), "y": np.asarray(ys, float)})
        fv = np.broadcast_to(np.asarray(fv, dtype=float), (len(pts),))
        scale = np.maximum(1.0, np.maximum(np.abs(fv), np.abs(chain[n])))
        worst = max(worst, float(np.max(np.abs(fv - chain[n]) / scale)))
    out["dualPathMaxRel"] = worst
    equal = []
    for n in names:
        gv, _ = evaluate(c[n] - forward[n], {"x": np.asarray(xs, float), "y": np.asarray(ys, float)})
        equal.append(float(np.max(np.abs(np.asarray(gv, dtype=float)))))
    out["equationMismatch"] = max(equal)
    pm = PointMap(kind, closed=(phi, psi))
    target = LinearTarget(alpha=alpha, beta=beta)
    rt = roundtrip_check(c, pm, target, box=req.plan.box, seed=req.plan.seed)
    out["roundtripResidual"] = rt.max_residual
    out["roundtrip"] = rt.to_dict()
    ok = worst <= 1e-8 and rt.max_residual <= tol
    out["verdict"] = "verified" if ok else "failed"
    return (EXIT_OK if ok else EXIT_NO), out


COMMANDS = {
    "test": (cmd_test, 1e-9, True),
    "construct": (cmd_construct, 1e-9, True),
    "oracle": (cmd_oracle, None, False),
    "verify": (cmd_verify, 1e-5, False),
}


def run(command, name, overrides=None, tol=None):
    """Run one command on one request; returns (exit code, report dict)."""
    fn, default_tol, need_equation = COMMANDS[command]
    try:
        raw, source = read_request(name)
        req = parse_request(raw, source, overrides, need_equation)
        return fn(req, default_tol if tol is None else tol)
    except (LinearizeError, ValueError, KeyError, TypeError, OSError) as exc:
        log.error("%s: %s", name, exc)
        return EXIT_ERROR, {"request": str(name), "error": {"type": type(exc).__name__,
                                                            "message": str(exc)}}


def render(report):
    return json.dumps(report, indent=2) + "\n"


def _batch_job(args):
    command, path, overrides, tol = args
    code, report = run(command, path, overrides, tol)
    return path, code, render(report)


def run_batch(command, directory, out_dir, overrides, tol, workers=None):
    directory = Path(directory)
    files = sorted(str(p) for p in directory.glob("*.json"))
    if not files:
        log.error("no request files in %s", directory)
        return EXIT_ERROR
    out_dir = Path(out_dir) if out_dir else directory / "reports"
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(command, f, overrides, tol) for f in files]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_batch_job, jobs))
    codes = []
    for path, code, text in results:
        (out_dir / f"{Path(path).stem}.json").write_text(text, encoding="utf-8")
        log.info("%s -> exit %d", path, code)
        codes.append(code)
    return EXIT_ERROR if EXIT_ERROR in codes else max(codes)


def _box(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("--box wants x_lo,x_hi,y_lo,y_hi") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("--box wants x_lo,x_hi,y_lo,y_hi")
    return ((vals[0], vals[1]), (vals[2], vals[3]))


def _param(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError("--param wants NAME=VALUE")
    return name.strip(), value.strip()


def build_parser():
    p = argparse.ArgumentParser(prog="linearize4", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (("test", "decide linearizability"),
                            ("construct", "build the map and target, then verify"),
                            ("oracle", "equation produced by a given map"),
                            ("verify", "check a given map against an equation")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("request", nargs="?", help="JSON request file or example1..example4")
        s.add_argument("--seed", type=int)
        s.add_argument("--box", type=_box, help="x_lo,x_hi,y_lo,y_hi")
        s.add_argument("--points", type=int)
        s.add_argument("--tol", type=float)
        s.add_argument("--param", type=_param, action="append", default=[],
                       help="bind a parameter, NAME=VALUE (repeatable)")
        s.add_argument("--out", help="report file (directory with --batch)")
        s.add_argument("--batch", metavar="DIR", help="run over every *.json in DIR")
        s.add_argument("--workers", type=int)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"seed": args.seed, "box": args.box, "points": args.points,
                 "parameters": dict(args.param)}
    if args.batch:
        return run_batch(args.command, args.batch, args.out, overrides, args.tol, args.workers)
    if not args.request:
        log.error("a request file or fixture name is required")
        return EXIT_ERROR
    code, report = run(args.command, args.request, overrides, args.tol)
    text = render(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
