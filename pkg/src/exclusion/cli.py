"""Command-line front end: verify / steady / profile / transfer / bench.

All rationals cross this boundary as 'p/q' strings; floating point is
formatting only (17 significant digits), and --exact switches every numeric
cell to the exact rational string.  Same config + same seed -> byte-identical
output (bench excepted: it reports wall times).

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import ansatz as an
from . import models as m
from . import transfer as tr
from . import verifier as vf
from .markov import KernelError, build_markov, observables, steady_state_exact
from .sampling import sample_points
from .scalars import float_repr, format_rational, parse_rational
from .tensor import PoleError

SCHEMA = 1


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _add_shared(p: argparse.ArgumentParser):
    p.add_argument("--model", required=True, choices=m.MODEL_NAMES)
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="1")
    p.add_argument("--gamma", default="0")
    p.add_argument("--delta", default="0")
    p.add_argument("--q", default="2")
    p.add_argument("--kappa", default="3")
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--theta", default=None, help="comma list of rationals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--out", default=None)
    p.add_argument("--format", default=None, choices=("csv", "json"))
    p.add_argument("--exact", action="store_true")
    p.add_argument("--truncation-cap", type=int, default=an.CAP)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exclusion")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in (("verify", cmd_verify), ("steady", cmd_steady),
                     ("profile", cmd_profile), ("transfer", cmd_transfer),
                     ("bench", cmd_bench)):
        sp = sub.add_parser(name)
        _add_shared(sp)
        sp.set_defaults(fn=fn)
    for sp_name, sp in sub.choices.items():
        if sp_name == "steady":
            sp.add_argument("--method", default="nullspace",
                            choices=("nullspace", "ansatz", "both"))
        if sp_name == "profile":
            sp.add_argument("--asymptotics", action="store_true")
        if sp_name == "transfer":
            sp.add_argument("--check", default="commutation",
                            choices=("commutation", "markov-derivative",
                                     "eigenvalue", "left-eigenvector",
                                     "crossing", "conjugated",
                                     "inhomogeneous-eigenvector"))
            sp.add_argument("--x", default="3")
            sp.add_argument("--x2", default="5")
    return p


def _rates(args) -> dict:
    try:
        out = {k: parse_rational(getattr(args, k))
               for k in ("alpha", "beta", "gamma", "delta", "q", "kappa")}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return out


def _model(args) -> m.ModelDescriptor:
    r = _rates(args)
    try:
        if args.model == m.ASEP:
            return m.asep(r["q"], r["alpha"], r["beta"], r["gamma"], r["delta"])
        if args.model == m.TASEP:
            if r["gamma"] != 0 or r["delta"] != 0:
                raise UsageError("tasep has no gamma/delta rates")
            return m.tasep(r["alpha"], r["beta"])
        if args.model == m.SSEP:
            return m.ssep(r["alpha"], r["beta"], r["gamma"], r["delta"])
        return m.rd(r["kappa"], r["alpha"], r["beta"], r["gamma"], r["delta"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _thetas(args, model, L):
    if args.theta is None:
        return None
    try:
        parts = [parse_rational(t) for t in args.theta.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(parts) != L:
        raise UsageError(f"need {L} inhomogeneities, got {len(parts)}")
    return tuple(parts)


def _emit(text: str, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(value, args) -> str:
    if value is None:
        return ""
    return format_rational(value) if args.exact else float_repr(value)


def _report_rows(reports, params):
    rows = []
    for r in reports:
        row = {"model": r.model, "check": r.check, "params": params,
               "points": list(r.points), "status": r.status}
        if r.witness is not None:
            row["witness"] = r.witness
        if r.reason is not None:
            row["reason"] = r.reason
        rows.append(row)
    return rows


def _params_json(model: m.ModelDescriptor) -> dict:
    return {k: format_rational(v) for k, v in model.rates().items()}


def _finish_reports(reports, args, model, extra=None) -> int:
    params = _params_json(model)
    counts = {"pass": sum(r.status == vf.PASS for r in reports),
              "fail": sum(r.status == vf.FAIL for r in reports),
              "skipped": sum(r.status == vf.SKIPPED for r in reports)}
    doc = {"schema": SCHEMA, "model": model.name, "params": params,
           "seed": args.seed, "counts": counts,
           "checks": _report_rows(reports, params)}
    if extra:
        doc.update(extra)
    _emit(json.dumps(doc, indent=2) + "\n", args)
    return 0 if counts["fail"] == 0 else 1


def cmd_verify(args) -> int:
    model = _model(args)
    points = sample_points(model, args.samples, args.seed)
    reports = vf.run_model_suite(model, points)
    return _finish_reports(reports, args, model)


def _steady_distributions(args, model):
    L = args.L
    method = args.method
    if method in ("nullspace", "both"):
        if L > 10:
            raise DomainError("nullspace method capped at L = 10")
    if method in ("ansatz", "both"):
        if L > 8:
            raise DomainError("ansatz method capped at L = 8")
        if model.name not in (m.TASEP, m.RD):
            raise DomainError("ansatz steady state exists for tasep and rd only")
    null_dist = ansatz_dist = None
    if method in ("nullspace", "both"):
        try:
            null_dist = steady_state_exact(build_markov(model, L))
        except KernelError as exc:
            raise DomainError(str(exc)) from None
    if method in ("ansatz", "both"):
        try:
            if model.name == m.TASEP:
                rep = an.tasep_representation(model.alpha, model.beta, L + 1)
                ansatz_dist = an.steady_from_ansatz(rep, L)
            else:
                rep = an.rd_representation(model.kappa, model.alpha, model.beta,
                                           model.gamma, model.delta, max(L + 4, 6))
                ansatz_dist = an.steady_from_ansatz(rep, L,
                                                    cap=args.truncation_cap)
        except ValueError as exc:
            raise DomainError(str(exc)) from None
    return null_dist, ansatz_dist


def cmd_steady(args) -> int:
    model = _model(args)
    null_dist, ansatz_dist = _steady_distributions(args, model)
    primary = null_dist if null_dist is not None else ansatz_dist
    probs = primary.probabilities()
    alt = ansatz_dist.probabilities() if (null_dist is not None and
                                          ansatz_dist is not None) else None
    obs = observables(primary, model)
    fmt = args.format or "csv"
    L = args.L
    if fmt == "json":
        weights = []
        for i, p in enumerate(probs):
            row = {"config": _bits(i, L), "weight": _cell(p, args)}
            if alt is not None:
                row["weight_ansatz"] = _cell(alt[i], args)
                row["rel_diff"] = _cell(_rel_diff(p, alt[i]), args)
            weights.append(row)
        sites = [{"site": i + 1, "density": _cell(obs["density"][i], args),
                  "current_lat": _cell(obs["current_lat"][i], args)
                  if i < L - 1 else "",
                  "current_eva": _cell(obs["current_eva"][i], args)
                  if i < L - 1 else ""}
                 for i in range(L)]
        doc = {"schema": SCHEMA, "model": model.name,
               "params": _params_json(model), "L": L, "method": args.method,
               "weights": weights, "observables": sites}
        if alt is not None:
            doc["max_rel_diff"] = _cell(max(_rel_diff(p, a)
                                            for p, a in zip(probs, alt)), args)
        _emit(json.dumps(doc, indent=2) + "\n", args)
        return 0
    buf = io.StringIO()
    wcsv = csv.writer(buf, lineterminator="\n")
    header = ["config", "weight"] + (["weight_ansatz", "rel_diff"]
                                     if alt is not None else [])
    wcsv.writerow(header)
    for i, p in enumerate(probs):
        row = [_bits(i, L), _cell(p, args)]
        if alt is not None:
            row += [_cell(alt[i], args), _cell(_rel_diff(p, alt[i]), args)]
        wcsv.writerow(row)
    wcsv.writerow([])
    wcsv.writerow(["site", "density", "current_lat", "current_eva"])
    for i in range(L):
        wcsv.writerow([i + 1, _cell(obs["density"][i], args),
                       _cell(obs["current_lat"][i], args) if i < L - 1 else "",
                       _cell(obs["current_eva"][i], args) if i < L - 1 else ""])
    _emit(buf.getvalue(), args)
    return 0


def _bits(index: int, L: int) -> str:
    return format(index, f"0{L}b")


def _rel_diff(p: Fraction, a: Fraction) -> Fraction:
    if a == 0:
        return abs(p)
    return abs(p - a) / abs(a)


def cmd_profile(args) -> int:
    model = _model(args)
    if model.name != m.RD:
        raise DomainError("profile is the RD closed-form command")
    L = args.L
    if L < 2 or L > 10 ** 4:
        raise DomainError("profile needs 2 <= L <= 10^4")
    co = an.rd_boundary_coefficients(model.kappa, model.alpha, model.beta,
                                     model.gamma, model.delta)
    if co["c"] == 0 or co["d"] == 0:
        raise DomainError("degenerate boundary coefficients: alpha = gamma "
                          "or beta = delta makes c or d vanish")
    try:
        rows = list(an.rd_profile_rows(model.kappa, model.alpha, model.beta,
                                       model.gamma, model.delta, L,
                                       asymptotics=args.asymptotics))
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    fmt = args.format or "csv"
    if fmt == "json":
        doc = {"schema": SCHEMA, "model": model.name,
               "params": _params_json(model), "L": L,
               "profile": [{"site": i + 1,
                            "density": _cell(r["density"], args),
                            "current_lat": _cell(r["current_lat"], args),
                            "current_eva": _cell(r["current_eva"], args),
                            **({"density_asymptotic":
                                _cell(r["density_asymptotic"], args)}
                               if args.asymptotics else {})}
                           for i, r in enumerate(rows)]}
        _emit(json.dumps(doc, indent=2) + "\n", args)
        return 0
    buf = io.StringIO()
    wcsv = csv.writer(buf, lineterminator="\n")
    header = ["site", "density", "current_lat", "current_eva"]
    if args.asymptotics:
        header.append("density_asymptotic")
    wcsv.writerow(header)
    for i, r in enumerate(rows):
        row = [i + 1, _cell(r["density"], args), _cell(r["current_lat"], args),
               _cell(r["current_eva"], args)]
        if args.asymptotics:
            row.append(_cell(r["density_asymptotic"], args))
        wcsv.writerow(row)
    _emit(buf.getvalue(), args)
    return 0


def cmd_transfer(args) -> int:
    model = _model(args)
    L = args.L
    if L > 5:
        raise DomainError("transfer checks capped at L = 5")
    thetas = _thetas(args, model, L)
    spec = tr.TransferSpec(model, L, thetas)
    try:
        x = parse_rational(args.x)
        x2 = parse_rational(args.x2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    extra = {}
    try:
        if args.check == "commutation":
            reports = [tr.check_commutation(spec, x, x2)]
        elif args.check == "markov-derivative":
            reports = [tr.markov_from_transfer(model, L)]
        elif args.check == "eigenvalue":
            lam = tr.lambda_eigenvalue(model, x, spec.thetas)
            extra["lambda"] = format_rational(lam)
            if spec.homogeneous:
                vec = steady_state_exact(build_markov(model, L)).probabilities()
            else:
                vec = tr.eigenvector_from_nullspace(spec, x2)
            reports = [tr.check_eigenpair(spec, x, vec, side="right")]
        elif args.check == "left-eigenvector":
            lam = tr.lambda_eigenvalue(model, x, spec.thetas)
            extra["lambda"] = format_rational(lam)
            reports = [tr.left_eigen_ones(spec, x)]
        elif args.check == "crossing":
            reports = [tr.check_crossing_symmetry_t(spec, x)]
        elif args.check == "conjugated":
            reports = tr.ssep_conjugated(spec, x)
        else:
            reports = _inhomogeneous_eigen_reports(model, spec,
                                                   args.truncation_cap)
    except m.UnsupportedError as exc:
        raise DomainError(str(exc)) from None
    except PoleError as exc:
        raise DomainError(f"pole collision: {exc}") from None
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    for rep in reports:
        if rep.status == vf.SKIPPED and rep.reason and \
                rep.reason.startswith("pole"):
            raise DomainError(f"pole collision: {rep.reason}")
    return _finish_reports(reports, args, model, extra=extra)


def _inhomogeneous_eigen_reports(model, spec, cap) -> list:
    if model.name != m.RD:
        raise DomainError("inhomogeneous-eigenvector is the RD check")
    # probe every evaluation point before paying for the convergence loop
    for theta in spec.thetas:
        for x in (theta, 1 / theta):
            tr.build_transfer(spec, x)
    state, meta = an.rd_inhomogeneous_converged(model, spec.thetas, cap=cap)
    tol = Fraction(1, 10 ** 10)
    reports = []
    for i, theta in enumerate(spec.thetas):
        for x in (theta, 1 / theta):
            rep = tr.check_eigenpair(spec, x, state, side="right",
                                     eigenvalue=Fraction(1), tolerance=tol)
            reports.append(rep)
    return reports


def cmd_bench(args) -> int:
    model = _model(args)
    L = args.L
    rows = []

    def timed(task, fn):
        t0 = time.perf_counter()
        fn()
        rows.append({"task": task, "model": model.name, "L": L,
                     "seconds": round(time.perf_counter() - t0, 6)})

    M = build_markov(model, L)
    timed("build_markov", lambda: build_markov(model, L))
    timed("steady_nullspace", lambda: steady_state_exact(M))
    if model.name == m.TASEP:
        rep = an.tasep_representation(model.alpha, model.beta, L + 1)
        timed("steady_ansatz", lambda: an.steady_from_ansatz(rep, L))
    if model.name == m.RD:
        rep = an.rd_representation(model.kappa, model.alpha, model.beta,
                                   model.gamma, model.delta, max(L + 4, 6))
        timed("steady_ansatz", lambda: an.steady_from_ansatz(rep, L))
    spec = tr.TransferSpec(model, min(L, 4))
    x, x2 = Fraction(3), Fraction(5)
    timed("transfer_build", lambda: tr.build_transfer(spec, x))
    timed("transfer_commutation", lambda: tr.check_commutation(spec, x, x2))
    fmt = args.format or "csv"
    if fmt == "json":
        _emit(json.dumps({"schema": SCHEMA, "bench": rows}, indent=2) + "\n",
              args)
        return 0
    buf = io.StringIO()
    wcsv = csv.writer(buf, lineterminator="\n")
    wcsv.writerow(["task", "model", "L", "seconds"])
    for r in rows:
        wcsv.writerow([r["task"], r["model"], r["L"], r["seconds"]])
    _emit(buf.getvalue(), args)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, KernelError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
