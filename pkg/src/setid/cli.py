"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 data error, 3 infeasible or incoherent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import binary, elections, knightian, parametric, polytope, simulation, svg
from ._validation import as_fraction, fraction_to_str
from .artstein import (
    ChoiceFrequencies, ChoiceParamVector, build_sharp_region, find_selection, members, subset_label, subset_order,
)
from .exceptions import CoherenceError, DataError, InfeasibleError, InvalidInputError, SetIdError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 1, 2, 3
_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc.msg})", row=exc.lineno) from None


def _emit(args, payload, svg_text=None):
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if svg_text is not None and args.svg:
        target = args.svg if args.svg is not True else (
            str(Path(args.out).with_suffix(".svg")) if args.out else "figure.svg")
        Path(target).write_text(svg_text, encoding="utf-8")


def _theta_name(mask, n):
    return "θ" + subset_label(mask, n).translate(_SUB)


def _p_name(mask, n):
    return " + ".join(f"p{str(i).translate(_SUB)}" for i in members(mask))


# --------------------------------------------------------------------------


def _cmd_region_binary(args):
    obs = binary.BinaryObservation(args.p0, args.p1)
    stages = {"no_assumption": binary.no_assumption_region(obs)}
    current = stages["no_assumption"]
    extra = {}
    if args.iv:
        raw = _load_json(args.iv)
        table = {str(z): (v if isinstance(v, list) else (1 - as_fraction(v), as_fraction(v)))
                 for z, v in raw.items()}
        res = binary.iv_region(table)
        stages["iv"] = current = res.region
        extra["delta0"] = fraction_to_str(res.delta0)
        extra["theta01_lower"] = fraction_to_str(res.theta01_lower)
    if args.nu is not None:
        stages["min_vagueness"] = current = polytope.intersect_halfplane(current, (1, 1), 1 - as_fraction(args.nu))
    if args.gamma is not None:
        mode = binary.UnobservedMode(args.unobserved_mode)
        stages[f"abstention:{mode.value}"] = current = binary.abstention_region(current, args.gamma, mode)
    if args.pi0 is not None or args.pi1 is not None:
        stages["consideration"] = current = binary.consideration_region(current, args.pi0 or 0, args.pi1 or 0)
    payload = {"regions": {k: r.to_dict() for k, r in stages.items()}, "final": current.to_dict(),
               "final_decimal": [list(v) for v in current.rounded(3)], **extra}
    _emit(args, payload, svg.render(list(stages.items()), title="binary identification region"))
    return EXIT_OK


def _probs(path):
    raw = _load_json(path)
    if isinstance(raw, dict):
        raw = raw.get("p", raw.get("probs"))
    if not isinstance(raw, list):
        raise DataError(f"{path}: expected a list of probabilities")
    return ChoiceFrequencies(tuple(as_fraction(v) for v in raw))


def _cmd_region_multi(args):
    p = _probs(args.p)
    if args.n is not None and args.n != p.n:
        raise InvalidInputError(f"--n {args.n} disagrees with {p.n} probabilities")
    sys_ = build_sharp_region(p)
    table = []
    for k, m in enumerate(subset_order(p.n)):
        d = [0] * sys_.dimension
        d[k] = 1
        hi = polytope.support(sys_, d)
        d[k] = -1
        lo = -polytope.support(sys_, d)
        table.append({"subset": subset_label(m, p.n), "min": fraction_to_str(lo), "max": fraction_to_str(hi)})
    _emit(args, {"system": sys_.to_dict(), "support": table})
    return EXIT_OK


def _theta(path, n):
    raw = _load_json(path)
    if isinstance(raw, dict) and "theta" in raw:
        raw = raw["theta"]
    if isinstance(raw, list):
        return ChoiceParamVector.from_vector(n, raw)
    if isinstance(raw, dict):
        return ChoiceParamVector.from_labels(n, raw)
    raise DataError(f"{path}: expected a list or mapping of subset masses")


def _cmd_oracle(args):
    p = _probs(args.p)
    theta = _theta(args.theta, p.n)
    sys_ = build_sharp_region(p)
    point = theta.as_vector()
    bad = [i for i in polytope.violated(sys_, point)]
    plan = find_selection(theta, p)
    payload = {"feasible": plan is not None, "theta": theta.to_dict(),
               "p": [fraction_to_str(v) for v in p.probs]}
    if plan is not None:
        payload["flow"] = [{"subset": subset_label(m, p.n), "alternative": i, "mass": fraction_to_str(q)}
                           for (m, i), q in sorted(plan.items())]
        _emit(args, payload)
        return EXIT_OK
    order = subset_order(p.n)
    n_simplex = len(order)
    msgs = []
    for i in bad:
        if i < n_simplex:
            continue
        mask = order[i - n_simplex]
        lhs = " + ".join(_theta_name(m, p.n) for m in order if m & ~mask == 0)
        msgs.append(f"{lhs} > {_p_name(mask, p.n)}")
    payload["violated"] = msgs
    _emit(args, payload)
    sys.stderr.write("infeasible: " + ("; ".join(msgs) or "no selection exists") + "\n")
    return EXIT_INFEASIBLE


def _seed(args, spec_dict):
    if args.seed is not None:
        return args.seed
    if "seed" in spec_dict:
        return spec_dict["seed"]
    env = os.environ.get("SETID_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SETID_SEED must be an integer, got {env!r}") from None
    raise UsageError("simulate needs a seed: --seed, a 'seed' entry in the spec, or SETID_SEED")


def _cmd_simulate(args):
    raw = _load_json(args.spec)
    if not isinstance(raw, dict):
        raise DataError(f"{args.spec}: expected a JSON object")
    raw = dict(raw, seed=_seed(args, raw))
    if args.n_jobs is not None:
        raw["n_jobs"] = args.n_jobs
    spec = simulation.PopulationSpec.from_dict(raw)
    report = simulation.simulate(spec)
    payload = report.to_dict()
    payload["artstein_pass"] = simulation.verify_artstein(report)
    _emit(args, payload)
    return EXIT_OK


def _cmd_policy(args):
    out = {"cdf": args.cdf, "p1": float(as_fraction(args.p1)), "delta": float(as_fraction(args.delta))}
    out["p1_delta_complete"] = parametric.policy_complete(args.p1, args.delta, args.cdf)
    if args.sigma is not None:
        out["incomplete"] = parametric.policy_incomplete_interval(args.p1, args.sigma, args.delta, args.cdf).to_dict()
    if args.nonparametric:
        try:
            with open(args.nonparametric, newline="", encoding="utf-8") as fh:
                F = parametric.TabulatedCDF.from_csv(fh)
        except OSError as exc:
            raise DataError(f"cannot read {args.nonparametric}: {exc.strerror}") from None
        out["nonparametric"] = parametric.nonparametric_policy_bounds(args.p1, args.delta, F).to_dict()
    _emit(args, out)
    return EXIT_OK


def _cmd_election(args):
    try:
        records = elections.ingest_path(args.data)
    except OSError as exc:
        raise DataError(f"cannot read {args.data}: {exc.strerror}") from None
    summary = elections.summarize(records, args.race, args.turnout_source)
    payload = {"summary": summary.to_dict(), "rotation_issues": elections.check_rotation(records, args.race)}
    svg_text = None
    if args.figures:
        cfg = {}
        if args.overrides:
            cfg = _load_json(args.overrides).get(args.race, {})
        opts = elections.FigureOptions(
            use_iv=True, conditional=cfg.get("conditional"), abstention=True,
            mode=binary.UnobservedMode(args.unobserved_mode),
            pi=tuple(cfg["pi"]) if "pi" in cfg else None)
        figs = elections.figure_pipeline(summary, opts)
        payload["figures"] = figs.to_dict()
        svg_text = svg.render(list(figs.regions.items()), x_label=f"theta1 ({summary.candidates[1]})",
                              y_label=f"theta0 ({summary.candidates[0]})", title=args.race)
    else:
        figs = elections.figure_pipeline(summary)
        svg_text = svg.render(list(figs.regions.items()), title=args.race)
    _emit(args, payload, svg_text)
    return EXIT_OK


def _cmd_knightian(args):
    model = _load_json(args.model)
    try:
        su = knightian.StateUtility(model["states"], model["utilities"])
        if "priors" in model:
            priors = knightian.PriorSet(tuple(model["priors"]))
        else:
            priors = knightian.PriorSet.from_halfspaces(polytope.HalfspaceSystem.from_dict(model["prior_halfspaces"]))
    except KeyError as exc:
        raise DataError(f"{args.model}: missing key {exc.args[0]!r}") from None
    alts = su.alternatives
    pairs = []
    for i, x in enumerate(alts):
        for y in alts[i + 1:]:
            pairs.append({"x": x, "y": y, "result": knightian.bewley_prefers(x, y, su, priors).value})
    payload = {"comparisons": pairs, "nondominated": list(knightian.knightian_nondominated(alts, su, priors)),
               "prior_vertices": [[fraction_to_str(v) for v in pi] for pi in priors.vertices]}
    _emit(args, payload)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--svg", nargs="?", const=True, default=None,
                        help="also write an SVG drawing (optional path)")

    parser = _Parser(prog="setid", description="Set identification for choices under incomplete preferences.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    region = sub.add_parser("region", help="identification regions")
    rsub = region.add_subparsers(dest="kind", parser_class=_Parser)
    rsub.required = True
    rb = rsub.add_parser("binary", parents=[common], help="binary-choice region in (theta1, theta0)")
    rb.add_argument("--p0", required=True, type=as_fraction)
    rb.add_argument("--p1", required=True, type=as_fraction)
    rb.add_argument("--nu", type=as_fraction)
    rb.add_argument("--iv", help="JSON {z: p1|z} or {z: [p0|z, p1|z]}")
    rb.add_argument("--gamma", type=as_fraction)
    rb.add_argument("--unobserved-mode", default="agnostic", choices=[m.value for m in binary.UnobservedMode])
    rb.add_argument("--pi0", type=as_fraction)
    rb.add_argument("--pi1", type=as_fraction)
    rb.set_defaults(func=_cmd_region_binary)
    rm = rsub.add_parser("multi", parents=[common], help="sharp region over subsets")
    rm.add_argument("--p", required=True, help="JSON list of choice probabilities")
    rm.add_argument("--n", type=int)
    rm.set_defaults(func=_cmd_region_multi)

    orc = sub.add_parser("oracle", parents=[common], help="check a parameter against the data")
    orc.add_argument("--theta", required=True)
    orc.add_argument("--p", required=True)
    orc.set_defaults(func=_cmd_oracle)

    sim = sub.add_parser("simulate", parents=[common], help="simulate a population")
    sim.add_argument("--spec", required=True)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--n-jobs", type=int)
    sim.set_defaults(func=_cmd_simulate)

    pol = sub.add_parser("policy", parents=[common], help="predicted effect of a utility shift")
    pol.add_argument("--p1", required=True, type=as_fraction)
    pol.add_argument("--sigma", type=as_fraction)
    pol.add_argument("--delta", required=True, type=as_fraction)
    pol.add_argument("--cdf", default="probit", choices=sorted(parametric.CDFS))
    pol.add_argument("--nonparametric", help="CSV with columns x,F")
    pol.set_defaults(func=_cmd_policy)

    el = sub.add_parser("election", parents=[common], help="precinct returns to regions")
    el.add_argument("--data", required=True)
    el.add_argument("--race", required=True)
    el.add_argument("--figures", action="store_true")
    el.add_argument("--overrides", help="JSON with per-race conditional shares and pi")
    el.add_argument("--turnout-source", default=elections.TURNOUT_RACE, choices=[elections.TURNOUT_RACE, "column"])
    el.add_argument("--unobserved-mode", default="all-incomparable",
                    choices=[m.value for m in binary.UnobservedMode])
    el.set_defaults(func=_cmd_election)

    kn = sub.add_parser("knightian", parents=[common], help="compare alternatives under several priors")
    kn.add_argument("--model", required=True)
    kn.set_defaults(func=_cmd_knightian)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (InfeasibleError, CoherenceError) as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (DataError, InvalidInputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except SetIdError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
