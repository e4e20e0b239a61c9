"""Command-line front end.

Every subcommand computes its full table first and only then writes, so
a failed run never leaves a partial file.  Exit codes: 0 success,
2 configuration error, 3 domain error, 4 convergence failure.

Rotation input comes either from a physical frame (--mass-amu,
--radius-um, --sites, plus --omega where a single angle is needed) or
directly as --gamma/--theta; supplying both is a configuration error.
A flat key=value config file can preload any flag of the chosen
subcommand; explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, io, sensing
from .core import RingFrame
from .errors import EXIT_OK, ConfigError, RotobhError
from .landau import kappa
from .oracle import MeanFieldProblem, boundary_numeric, minimize_order_parameter
from .phase_diagram import (SweepSpec, boundary_hopping, lobe_index, sweep)
from .sensing import delta_exact, fit_a, invert_rotation_change, resolution

FIT_PROTOCOL = {
    "form": "sqrt(a*dtheta)*exp(-sqrt(a*dtheta))",
    "grid": "uniform dtheta grid on [0, theta]",
    "search": "golden-section over log10(a) in [-3, 3], 61-point coarse scan",
}
TOLERANCES = {
    "bisection_dtheta": 1e-10,
    "oracle_boundary_dD": 1e-6,
    "oracle_golden_dpsi": 1e-8,
    "lobe_tip_dmu": 1e-10,
}


def parse_grid(text: str):
    """'start:stop:step' (inclusive), 'x,y,z', or a single value."""
    s = text.strip()
    try:
        if ":" in s:
            parts = s.split(":")
            if len(parts) != 3:
                raise ConfigError("grid %r is not start:stop:step" % (text,))
            start, stop, step = (float(p) for p in parts)
            if not (math.isfinite(start) and math.isfinite(stop)
                    and math.isfinite(step)) or step <= 0.0 or stop < start:
                raise ConfigError("bad grid range %r" % (text,))
            count = int(math.floor((stop - start) / step + 1.0 + 1e-9))
            return tuple(start + i * step for i in range(count))
        if "," in s:
            vals = tuple(float(p) for p in s.split(","))
            if not vals:
                raise ConfigError("empty grid %r" % (text,))
            return vals
        return (float(s),)
    except ValueError:
        raise ConfigError("cannot parse grid %r" % (text,))


def load_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    entries = {}
    try:
        with open(path, "r", encoding="utf-8") as fp:
            for lineno, raw in enumerate(fp, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError("%s:%d: expected key=value" % (path, lineno))
                key, value = line.split("=", 1)
                entries[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc))
    return entries


def _add_output_flags(sub):
    sub.add_argument("--output", default="-",
                     help="output path, or - for stdout (default)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--config", default=None,
                     help="key=value file preloading this subcommand's flags")


def _add_frame_flags(sub, with_omega=True):
    sub.add_argument("--mass-amu", type=float, default=None)
    sub.add_argument("--radius-um", type=float, default=None)
    sub.add_argument("--sites", type=int, default=None)
    if with_omega:
        sub.add_argument("--omega", type=float, default=None,
                         help="rotation angular velocity [rad/s]")
    sub.add_argument("--gamma", type=float, default=None,
                     help="rotation-to-phase scale factor [s]")


def _resolve_gamma(args, required=False):
    frame_given = [v for v in (args.mass_amu, args.radius_um, args.sites)
                   if v is not None]
    if frame_given and args.gamma is not None:
        raise ConfigError("give either the frame flags or --gamma, not both")
    if frame_given:
        if len(frame_given) != 3:
            raise ConfigError("--mass-amu, --radius-um and --sites go together")
        frame = RingFrame.from_lab_units(args.mass_amu, args.radius_um,
                                         args.sites)
        return frame.gamma
    if args.gamma is not None:
        if not (math.isfinite(args.gamma) and args.gamma > 0.0):
            raise ConfigError("--gamma must be finite and > 0")
        return args.gamma
    if required:
        raise ConfigError("this subcommand needs --gamma or the frame flags")
    return None


def _resolve_theta(args):
    if args.theta is not None:
        if getattr(args, "omega", None) is not None:
            raise ConfigError("give either --theta or --omega, not both")
        return args.theta
    if getattr(args, "omega", None) is not None:
        gamma = _resolve_gamma(args, required=True)
        return gamma * args.omega
    raise ConfigError("this subcommand needs --theta, or --omega with a frame")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rotobh",
        description="Rotating-ring Bose-Hubbard phase diagrams and "
                    "rotation-velocity sensing at the Mott transition edge.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = subs.choices  # used by the config loader

    p = subs.add_parser("phase-diagram",
                        help="phase labels and psi over a (mu, D) grid")
    p.add_argument("--mu-grid", required=True)
    p.add_argument("--d-grid", required=True)
    p.add_argument("--convention", choices=("paper", "variational"),
                   default="paper")
    p.add_argument("--psi-method", choices=("landau", "variational"),
                   default="landau")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    _add_output_flags(p)

    p = subs.add_parser("order-parameter",
                        help="psi surface along the sensing loop at fixed mu")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--theta-grid", default=None)
    p.add_argument("--omega-grid", default=None)
    p.add_argument("--convention", choices=("paper", "variational"),
                   default="paper")
    p.add_argument("--psi-method", choices=("landau", "variational"),
                   default="landau")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    _add_frame_flags(p, with_omega=False)
    _add_output_flags(p)

    p = subs.add_parser("costheta-curve",
                        help="critical cos(theta) versus t/U per lobe")
    p.add_argument("--t-grid", required=True)
    p.add_argument("--lobes", default="1,2,3")
    p.add_argument("--mu-by-lobe", default=None,
                   help="comma list of mu values, one per lobe "
                          "(default: each lobe tip)")
    p.add_argument("--convention", choices=("paper", "variational"),
                   default="paper")
    p.add_argument("--workers", type=int, default=1)
    _add_output_flags(p)

    p = subs.add_parser("sensitivity",
                        help="delta surface over (theta, dtheta)")
    p.add_argument("--theta-grid", required=True)
    p.add_argument("--dtheta-points", type=int, default=100)
    _add_output_flags(p)

    p = subs.add_parser("resolution",
                        help="half-maximum resolution per operating angle")
    p.add_argument("--theta-grid", required=True)
    p.add_argument("--mode", choices=("exact", "fit"), default="exact")
    p.add_argument("--grid-points", type=int, default=sensing.FIT_GRID_POINTS)
    p.add_argument("--literal-exponent", action="store_true",
                   help="use the a^-2 prefactor variant in fit mode")
    p.add_argument("--workers", type=int, default=1)
    _add_frame_flags(p, with_omega=False)
    _add_output_flags(p)

    p = subs.add_parser("fit-delta",
                        help="surrogate-fit parameter a(theta) and quality")
    p.add_argument("--theta-grid", required=True)
    p.add_argument("--grid-points", type=int, default=sensing.FIT_GRID_POINTS)
    _add_output_flags(p)

    p = subs.add_parser("invert",
                        help="recover dOmega from a measured order-parameter "
                             "change")
    p.add_argument("--delta-measured", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--lobe", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--convention", choices=("paper", "variational"),
                   default="paper")
    _add_frame_flags(p, with_omega=True)
    _add_output_flags(p)

    p = subs.add_parser("oracle-check",
                        help="convention-ratio and kappa-recovery report")
    p.add_argument("--mu", required=True, help="mu/U value or comma list")
    p.add_argument("--lobe", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--dthetas", default="0.002,0.005")
    _add_output_flags(p)

    return parser


_VARIANT = {"paper": "consistent", "variational": "variational"}


def _cmd_phase_diagram(args):
    spec = SweepSpec(kind="diagram", convention=args.convention,
                     psi_method=args.psi_method,
                     mu_values=parse_grid(args.mu_grid),
                     D_values=parse_grid(args.d_grid),
                     n_max=args.n_max, workers=args.workers)
    grid = sweep(spec)
    meta = {"convention": grid.convention, "psi_method": grid.psi_method}
    return grid.columns, grid.rows, meta


def _cmd_order_parameter(args):
    if (args.theta_grid is None) == (args.omega_grid is None):
        raise ConfigError("give exactly one of --theta-grid or --omega-grid")
    gamma = None
    if args.omega_grid is not None:
        gamma = _resolve_gamma(args, required=True)
        thetas = tuple(gamma * w for w in parse_grid(args.omega_grid))
    else:
        if _resolve_gamma(args) is not None:
            raise ConfigError("frame flags are unused with --theta-grid")
        thetas = parse_grid(args.theta_grid)
    spec = SweepSpec(kind="sensing-loop", convention=args.convention,
                     psi_method=args.psi_method, mu_values=(args.mu,),
                     t_values=parse_grid(args.t_grid), theta_values=thetas,
                     n_max=args.n_max, workers=args.workers)
    grid = sweep(spec)
    meta = {"convention": grid.convention, "psi_method": grid.psi_method,
            "mu_over_U": args.mu, "gamma": gamma}
    return grid.columns, grid.rows, meta


def _cmd_costheta_curve(args):
    lobes = tuple(int(v) for v in parse_grid(args.lobes))
    lobe_mu = () if args.mu_by_lobe is None else parse_grid(args.mu_by_lobe)
    spec = SweepSpec(kind="costheta-curve", convention=args.convention,
                     t_values=parse_grid(args.t_grid), lobes=lobes,
                     lobe_mu=lobe_mu, workers=args.workers)
    grid = sweep(spec)
    meta = {"convention": grid.convention,
            "mu_by_lobe": "lobe tips" if not lobe_mu else list(lobe_mu)}
    return grid.columns, grid.rows, meta


def _cmd_sensitivity(args):
    thetas = parse_grid(args.theta_grid)
    if args.dtheta_points < 2:
        raise ConfigError("--dtheta-points must be >= 2")
    rows = []
    for theta in thetas:
        for i in range(args.dtheta_points):
            dtheta = theta * i / (args.dtheta_points - 1)
            rows.append((theta, dtheta, delta_exact(theta, dtheta)))
    meta = {"dtheta_points": args.dtheta_points}
    return ("theta", "dtheta", "delta"), tuple(rows), meta


def _cmd_resolution(args):
    thetas = parse_grid(args.theta_grid)
    gamma = _resolve_gamma(args)

    def profile_row(theta):
        prof = resolution(theta, mode=args.mode, gamma=gamma,
                          grid_points=args.grid_points,
                          literal_exponent=args.literal_exponent)
        return (prof.theta,
                math.nan if prof.omega is None else prof.omega,
                prof.a_fit, prof.delta_max, prof.epsilon_theta,
                math.nan if prof.epsilon_omega is None else prof.epsilon_omega,
                prof.mode)

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = tuple(pool.map(profile_row, thetas))
    else:
        rows = tuple(profile_row(t) for t in thetas)
    meta = {"mode": args.mode, "gamma": gamma,
            "grid_points": args.grid_points,
            "literal_exponent": args.literal_exponent,
            "fit_protocol": FIT_PROTOCOL, "tolerances": TOLERANCES,
            "theta_crossover_exact": sensing.theta_crossover("exact"),
            "theta_crossover_fit": sensing.theta_crossover("fit")}
    return ("theta", "omega", "a_fit", "delta_max", "epsilon_theta",
            "epsilon_omega", "mode"), rows, meta


def _cmd_fit_delta(args):
    thetas = parse_grid(args.theta_grid)
    rows = []
    for theta in thetas:
        a, rms = fit_a(theta, args.grid_points)
        dm = sensing.delta_max(theta, "fit")
        dts = [theta * i / 400.0 for i in range(401)]
        dev = max(abs(float(sensing.fit_form(a, d)) - delta_exact(theta, d))
                  for d in dts)
        rows.append((theta, a, rms, dm, dev))
    meta = {"grid_points": args.grid_points, "fit_protocol": FIT_PROTOCOL}
    return ("theta", "a_fit", "rms", "delta_max_fit", "max_abs_dev"), \
        tuple(rows), meta


def _cmd_invert(args):
    theta = _resolve_theta(args)
    gamma = _resolve_gamma(args, required=True)
    lobe = lobe_index(args.mu) if args.lobe is None else args.lobe
    result = invert_rotation_change(args.delta_measured, args.mu, lobe,
                                    theta, gamma,
                                    variant=_VARIANT[args.convention])
    meta = {"convention": args.convention, "gamma": gamma,
            "tolerances": TOLERANCES}
    rows = ((args.delta_measured, theta, gamma, result.delta_theta,
             result.delta_omega, result.ambiguous),)
    return ("delta_measured", "theta", "gamma", "delta_theta", "delta_omega",
            "ambiguous"), rows, meta


def _cmd_oracle_check(args):
    mus = parse_grid(args.mu)
    dthetas = parse_grid(args.dthetas)
    theta = args.theta
    rows = []
    for mu in mus:
        lobe = lobe_index(mu) if args.lobe is None else args.lobe
        n_max = (lobe + 8) if args.n_max is None else args.n_max
        D_c = boundary_hopping(mu, lobe, "paper")
        D_cv = boundary_numeric(mu, n_max)
        kap_var = kappa(mu, lobe, "variational")
        t_edge = boundary_hopping(mu, lobe, "variational") / math.cos(theta)
        for dtheta in dthetas:
            D = t_edge * math.cos(theta - dtheta)
            psi = minimize_order_parameter(
                MeanFieldProblem.for_lobe(mu, D, n_max=n_max)).psi_star
            delta = delta_exact(theta, dtheta)
            kap_rec = psi / delta
            rows.append((mu, lobe, dtheta, D_c, D_cv, D_cv / D_c, psi,
                         kap_var, kap_rec, kap_rec / kap_var - 1.0))
    meta = {"theta": theta, "n_max": args.n_max,
            "superfluid_threshold": 1e-5, "tolerances": TOLERANCES}
    return ("mu_over_U", "lobe_n", "dtheta", "D_c_paper", "D_cv_oracle",
            "ratio", "psi_star", "kappa_variational", "kappa_recovered",
            "rel_err"), tuple(rows), meta


_COMMANDS = {
    "phase-diagram": _cmd_phase_diagram,
    "order-parameter": _cmd_order_parameter,
    "costheta-curve": _cmd_costheta_curve,
    "sensitivity": _cmd_sensitivity,
    "resolution": _cmd_resolution,
    "fit-delta": _cmd_fit_delta,
    "invert": _cmd_invert,
    "oracle-check": _cmd_oracle_check,
}


def _config_path(argv):
    for i, token in enumerate(argv):
        if token == "--config":
            return argv[i + 1] if i + 1 < len(argv) else None
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _expand_config(parser, argv):
    """Splice config-file entries into argv, ahead of explicit flags.

    Runs before parsing so flags the subparser marks as required can be
    satisfied from the file; explicit flags still win because argparse
    keeps the last occurrence.
    """
    path = _config_path(argv)
    if path is None or not argv or argv[0] not in parser.subcommands:
        return argv
    sub = argv[0]
    subparser = parser.subcommands[sub]
    flags = []
    for key, value in load_config(path).items():
        opt = "--" + key.strip().replace("_", "-")
        if opt == "--config":
            raise ConfigError("config files cannot nest --config")
        action = subparser._option_string_actions.get(opt)
        if action is None:
            raise ConfigError("unknown config key %r for %s" % (key, sub))
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes"):
                flags.append(opt)
            elif value.lower() not in ("0", "false", "no"):
                raise ConfigError("boolean config key %r needs true/false"
                                  % (key,))
        else:
            flags.extend([opt, value])
    return [sub] + flags + list(argv[1:])


def _emit(args, columns, rows, meta):
    meta = dict(meta)
    meta["version"] = __version__
    if args.format == "csv":
        text = io.csv_text(args.command, columns, rows)
    else:
        text = io.json_text(args.command, columns, rows, meta)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # argparse reports its own diagnostics
            return int(exc.code or 0)
        columns, rows, meta = _COMMANDS[args.command](args)
        _emit(args, columns, rows, meta)
    except RotobhError as exc:
        print("rotobh: error: %s" % exc, file=sys.stderr)
        return exc.exit_status
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
