"""Command-line experiment runner.

Subcommands:
  gen        generate a pseudo-orbit file with its measured discrepancies
  shadow     run a shadowing method on an orbit file, write certificates
  verify     run a check suite, emit JSON-lines reports and a summary table
  stability  the perturbed-map semiconjugacy experiment on the torus
  report     render delimited series and figures for a run

Every run is reproducible from its config and seed; the environment
variable SHADOWKIT_SEED overrides the configured seed.  Exit codes:
0 all checks passed, 1 a check failed, 2 configuration or admissibility
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bowen import InadmissibleOrbit, NonConvergence, StageBoundError
from .core import discrepancy1, discrepancy2
from .serialize import (RunConfig, dump_json, load_json,
                        orbit_from_jsonable, orbit_to_jsonable,
                        result_to_jsonable)


def _config_from_args(args) -> RunConfig:
    if getattr(args, "config", None):
        cfg = RunConfig.from_jsonable(load_json(args.config))
    else:
        cfg = RunConfig()
    overrides = {}
    for field in ("system", "method", "schedule", "delta", "seed",
                  "window", "suite", "out", "tol", "quiet_halfwidth"):
        val = getattr(args, field.replace("-", "_"), None)
        if val is not None:
            overrides[field] = val
    if getattr(args, "no_assert_lemmas", False):
        overrides["assert_lemmas"] = False
    elif getattr(args, "assert_lemmas_flag", False):
        overrides["assert_lemmas"] = True
    if overrides:
        import dataclasses
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg.with_env_seed()


def cmd_gen(args) -> int:
    cfg = _config_from_args(args)
    from .generators import make_pseudo_orbit
    from .systems import get_system
    try:
        sysm = get_system(cfg.system, **cfg.system_params)
        x = make_pseudo_orbit(sysm, cfg.seed, cfg.schedule, cfg.delta,
                              -cfg.window, cfg.window,
                              quiet_halfwidth=cfg.quiet_halfwidth)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    d1 = discrepancy1(x)
    d2 = discrepancy2(x)
    obj = orbit_to_jsonable(sysm, x, extra={
        "d1": d1, "d2": {"value": d2.value, "tail_bound": d2.tail_bound},
        "seed": cfg.seed, "schedule": cfg.schedule, "delta": cfg.delta,
    })
    out = cfg.out or f"orbit-{cfg.system}-{cfg.seed}.json"
    dump_json(obj, out)
    print(f"wrote {out}  D1={d1:.4g}  D2={d2.value:.4g}(+{d2.tail_bound:.2g})")
    return 0


def cmd_shadow(args) -> int:
    cfg = _config_from_args(args)
    from .systems import get_system
    from .verify import build_method, shadow_error
    from .bowen import bowen_shadow, symmetric_shadow, per_index_errors
    try:
        orbit_obj = load_json(args.orbit)
        sysm = get_system(orbit_obj["system_id"])
        x = orbit_from_jsonable(orbit_obj, sysm)
        method = build_method(sysm, cfg.method, tol=cfg.tol)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.method in ("bowen", "symmetric-bowen"):
            runner = bowen_shadow if cfg.method == "bowen" else symmetric_shadow
            res = runner(sysm, method.bracket, method.cfg, x,
                         assert_lemmas=cfg.assert_lemmas)
        else:
            point = method.apply(x)
            from .bowen import ShadowResult
            res = ShadowResult(point=point, stages_used=0, tail_bound=0.0,
                               per_index_error=per_index_errors(sysm, point, x))
    except InadmissibleOrbit as exc:
        print(f"inadmissible orbit: {exc}", file=sys.stderr)
        return 2
    except (StageBoundError, NonConvergence) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return 1
    err = max(res.per_index_error.values())
    obj = result_to_jsonable(sysm, res, extra={"method": cfg.method,
                                               "shadow_error": err})
    out = cfg.out or f"shadow-{cfg.method}-{cfg.seed}.json"
    dump_json(obj, out)
    print(f"wrote {out}  stages={res.stages_used}  "
          f"tail={res.tail_bound:.3g}  error={err:.4g}")
    return 0


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    from .verify import run_suite, SUITES
    if cfg.suite not in SUITES:
        print(f"error: unknown suite {cfg.suite!r} (choose from "
              f"{', '.join(SUITES)})", file=sys.stderr)
        return 2
    try:
        reports = run_suite(cfg)
    except (InadmissibleOrbit, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    lines = [json.dumps(r.to_jsonable(), sort_keys=True) for r in reports]
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    for r in reports:
        print(r.summary_line())
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


def cmd_stability(args) -> int:
    cfg = _config_from_args(args)
    if cfg.system != "cat":
        print("error: the stability experiment runs on the torus "
              "automorphism (--system cat)", file=sys.stderr)
        return 2
    from .systems import get_system
    from .systems.cat import PerturbedCatSystem
    from .verify import stability_experiment_cat
    sysm = get_system("cat")
    g = PerturbedCatSystem(amplitude=cfg.delta)
    reports = []
    for mid, kw in (("oracle", {"defect_tol": 1e-6}), ("bowen", {})):
        reports.append(stability_experiment_cat(
            sysm, g, mid, grid_side=args.grid, window=cfg.window, **kw))
    for r in reports:
        print(r.summary_line())
        for k, v in r.details.items():
            print(f"      {k}: {v}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            for r in reports:
                fh.write(json.dumps(r.to_jsonable(), sort_keys=True) + "\n")
    return 0 if all(r.passed for r in reports) else 1


def cmd_report(args) -> int:
    cfg = _config_from_args(args)
    from .report import write_report
    try:
        paths = write_report(cfg, out_dir=cfg.out or "report-out",
                             orbit_file=getattr(args, "orbit", None))
    except (InadmissibleOrbit, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shadowkit",
        description="pseudo-orbit shadowing experiments on concrete systems")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, orbit_arg=False):
        p.add_argument("--config", help="JSON run config; flags override")
        p.add_argument("--system", help="system id (cat, ns-circle, "
                                        "shift-3, shift-circle, odometer-8)")
        p.add_argument("--method", help="bowen | symmetric-bowen | "
                                        "projection | oracle | shift-canonical")
        p.add_argument("--schedule", help="constant | one-spike | "
                                          "geometric-decay | quiet-window | "
                                          "true-orbit | periodic")
        p.add_argument("--seed", type=int)
        p.add_argument("--window", type=int)
        p.add_argument("--delta", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--quiet-halfwidth", type=int)
        p.add_argument("--suite", help="check suite for verify")
        p.add_argument("--out", help="output path")
        p.add_argument("--assert-lemmas", action="store_true",
                       dest="assert_lemmas_flag",
                       help="enable per-stage bound assertions (default)")
        p.add_argument("--no-assert-lemmas", action="store_true",
                       dest="no_assert_lemmas",
                       help="disable per-stage bound assertions")
        if orbit_arg:
            p.add_argument("--orbit", required=False,
                           help="pseudo-orbit JSON file")

    p_gen = sub.add_parser("gen", help="generate a pseudo-orbit file")
    common(p_gen)
    p_gen.set_defaults(fn=cmd_gen)

    p_sh = sub.add_parser("shadow", help="shadow an orbit file")
    common(p_sh)
    p_sh.add_argument("--orbit", required=True)
    p_sh.set_defaults(fn=cmd_shadow)

    p_ver = sub.add_parser("verify", help="run a check suite")
    common(p_ver)
    p_ver.set_defaults(fn=cmd_verify)

    p_st = sub.add_parser("stability", help="semiconjugacy experiment")
    common(p_st)
    p_st.add_argument("--grid", type=int, default=128)
    p_st.set_defaults(fn=cmd_stability)

    p_rep = sub.add_parser("report", help="write CSV series and figures")
    common(p_rep, orbit_arg=True)
    p_rep.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
