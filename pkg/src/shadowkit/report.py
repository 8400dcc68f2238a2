"""Report rendering: delimited series plus matplotlib figures.

The library core never touches a plotting backend; this module imports
matplotlib lazily (Agg) and is reached only through the CLI's ``report``
subcommand.  Each figure-worthy series is written twice: a plain CSV
(index, value columns) next to a PNG rendering, so downstream tooling
can re-plot without parsing figures.
"""

from __future__ import annotations

import csv
import os


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def write_report(cfg, out_dir: str, orbit_file: str | None = None):
    """Run one shadowing pass plus a self-tuning ladder and render:

    * per-index shadow error against the certificate envelope,
    * the empirical tuning curve,
    * the decay profile on a geometric-decay orbit.
    """
    from .bowen import check_self_tuning, per_index_errors
    from .generators import make_pseudo_orbit
    from .serialize import dump_json, load_json, orbit_from_jsonable, \
        result_to_jsonable
    from .systems import get_system
    from .verify import build_method, self_tuning_cases

    os.makedirs(out_dir, exist_ok=True)
    sysm = get_system(cfg.system, **cfg.system_params)
    method = build_method(sysm, cfg.method, tol=cfg.tol)
    if orbit_file:
        x = orbit_from_jsonable(load_json(orbit_file), sysm)
    else:
        x = make_pseudo_orbit(sysm, cfg.seed, cfg.schedule, cfg.delta,
                              -cfg.window, cfg.window,
                              quiet_halfwidth=cfg.quiet_halfwidth)
    paths = []
    plt = _plt()

    # 1. per-index error against the certificate envelope
    point = method.apply(x)
    errs = per_index_errors(sysm, point, x)
    env = ({i: method.envelope(x, i) for i in errs}
           if method.envelope else None)
    rows = [(i, errs[i]) + ((env[i],) if env else ())
            for i in sorted(errs)]
    header = ["index", "shadow_error"] + (["certificate"] if env else [])
    paths.append(write_csv(os.path.join(out_dir, "per_index_error.csv"),
                           header, rows))
    fig, ax = plt.subplots(figsize=(7, 4))
    idx = sorted(errs)
    ax.semilogy(idx, [max(errs[i], 1e-18) for i in idx], ".-",
                label="shadow error", lw=0.8, ms=3)
    if env:
        ax.semilogy(idx, [max(env[i], 1e-18) for i in idx], "--",
                    label="certificate envelope", lw=1.2)
    ax.set_xlabel("orbit index")
    ax.set_ylabel("distance")
    ax.set_title(f"{cfg.system} / {cfg.method}: per-index shadowing error")
    ax.legend()
    fig.tight_layout()
    fig_path = os.path.join(out_dir, "per_index_error.png")
    fig.savefig(fig_path, dpi=130)
    plt.close(fig)
    paths.append(fig_path)

    res_obj = result_to_jsonable(sysm, _as_result(point, errs),
                                 extra={"method": cfg.method})
    shadow_path = os.path.join(out_dir, "shadow_result.json")
    dump_json(res_obj, shadow_path)
    paths.append(shadow_path)

    # 2. tuning curve (skip on systems without local generators)
    try:
        cases = self_tuning_cases(sysm, cfg.seed, max(cfg.delta, 1e-6),
                                  window=cfg.window,
                                  quiet_halfwidth=cfg.quiet_halfwidth)
        rep = check_self_tuning(method, sysm, cases)
        curve = rep.details.get("curve", {})
    except Exception:
        curve = {}
    if curve:
        gs = sorted((float(g) for g in curve), reverse=True)
        rows = [(g, curve[f"{g:g}"]) for g in gs]
        paths.append(write_csv(os.path.join(out_dir, "tuning_curve.csv"),
                               ["gamma", "epsilon"], rows))
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog([r[0] for r in rows],
                  [max(r[1], 1e-18) for r in rows], "o-")
        ax.set_xlabel("local discrepancy threshold")
        ax.set_ylabel("worst local shadow error")
        ax.set_title(f"{cfg.system} / {cfg.method}: self-tuning curve")
        ax.invert_xaxis()
        fig.tight_layout()
        fig_path = os.path.join(out_dir, "tuning_curve.png")
        fig.savefig(fig_path, dpi=130)
        plt.close(fig)
        paths.append(fig_path)

    # 3. decay profile on a two-sided-limit pseudo-orbit
    xd = make_pseudo_orbit(sysm, cfg.seed + 1, "geometric-decay",
                           cfg.delta, -cfg.window, cfg.window)
    pd = method.apply(xd)
    errs_d = per_index_errors(sysm, pd, xd)
    rows = [(i, errs_d[i]) for i in sorted(errs_d)]
    paths.append(write_csv(os.path.join(out_dir, "decay_profile.csv"),
                           ["index", "shadow_error"], rows))
    fig, ax = plt.subplots(figsize=(7, 4))
    idx = sorted(errs_d)
    ax.semilogy(idx, [max(errs_d[i], 1e-18) for i in idx], ".-", lw=0.8,
                ms=3)
    ax.set_xlabel("orbit index")
    ax.set_ylabel("shadow error")
    ax.set_title(f"{cfg.system} / {cfg.method}: decay on a two-sided-limit "
                 "pseudo-orbit")
    fig.tight_layout()
    fig_path = os.path.join(out_dir, "decay_profile.png")
    fig.savefig(fig_path, dpi=130)
    plt.close(fig)
    paths.append(fig_path)
    return paths


def _as_result(point, errs):
    from .bowen import ShadowResult
    return ShadowResult(point=point, stages_used=0, tail_bound=0.0,
                        per_index_error=errs)
