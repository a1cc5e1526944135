"""Command line front end.

Subcommands sweep the exponent engines and the simulator and emit
plot-ready CSV: `exponent` and `mimo` interleave closed-form and
numeric rows, `feedback` covers minimum-energy sweeps, on-off curves
and (g0, tau) meshes, `simulate` runs the Monte Carlo estimator or the
deterministic gamma oracle, and `shape` optimizes two-antenna input
shaping. Exit codes: 0 ok, 2 bad arguments, 3 numeric failure.
"""
import argparse
import configparser
import json
import math
import sys

import numpy as np

from .errors import WidebandOutageError
from .fading import ScalarFadingModel, closed_form_exponent, log_mgf
from .feedback import (
    FeedbackProtocol,
    feedback_eta_bar,
    mesh,
    onoff_envelope,
    onoff_exponent,
)
from .ldp import Status, eta_bar, wideband_exponent
from .mimo import (
    CovariancePair,
    correlated_exponent,
    two_antenna_exponent,
    two_antenna_shaping,
    white_exponent,
)
from .montecarlo import (
    SimulationConfig,
    estimate_outage,
    fit_slope,
    gamma_oracle,
)

_FMT = "%.12g"


def _fmt(value) -> str:
    if isinstance(value, float):
        return _FMT % value
    return str(value)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _parse_grid(text: str, kind: str) -> np.ndarray:
    """Grid syntax: 'start:stop:count' (linspace) for eta grids,
    'start:stop:step' (inclusive arange) for K and mesh grids, or a
    comma list for either."""
    if "," in text or ":" not in text:
        return np.array([float(t) for t in text.split(",")])
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad grid {text!r}, want start:stop:{kind}")
    start, stop, last = (float(p) for p in parts)
    if kind == "count":
        n = int(last)
        if n < 1:
            raise ValueError("grid count must be at least 1")
        return np.linspace(start, stop, n)
    if last <= 0:
        raise ValueError("grid step must be positive")
    n = int(math.floor((stop - start) / last + 1e-9)) + 1
    return start + last * np.arange(max(n, 1))


def _eta_grid(args, parser) -> np.ndarray:
    given = [
        name
        for name in ("eta", "eta_db", "eta_grid", "eta_db_grid")
        if getattr(args, name, None) is not None
    ]
    if len(given) != 1:
        parser.error("give exactly one of --eta, --eta-db, --eta-grid, --eta-db-grid")
    try:
        if args.eta is not None:
            grid = np.array([args.eta])
        elif args.eta_db is not None:
            grid = np.array([10.0 ** (args.eta_db / 10.0)])
        elif args.eta_grid is not None:
            grid = _parse_grid(args.eta_grid, "count")
        else:
            grid = 10.0 ** (_parse_grid(args.eta_db_grid, "count") / 10.0)
    except ValueError as exc:
        parser.error(str(exc))
    if np.any(grid <= 0.0):
        parser.error("eta values must be positive")
    return grid


def _add_eta_flags(sub):
    sub.add_argument("--eta", type=float, help="single energy per nat (linear)")
    sub.add_argument("--eta-db", type=float, help="single energy per nat in dB")
    sub.add_argument("--eta-grid", help="linear grid start:stop:count or comma list")
    sub.add_argument("--eta-db-grid", help="dB grid start:stop:count or comma list")


def _eta_columns(eta: float) -> tuple[float, float]:
    return 10.0 * math.log10(eta), eta * math.log(2.0)


def _scalar_model(args, parser) -> ScalarFadingModel:
    try:
        if args.model == "rayleigh":
            return ScalarFadingModel.rayleigh()
        if args.model == "rician":
            return ScalarFadingModel.rician(args.kappa)
        return ScalarFadingModel.nakagami(args.m)
    except WidebandOutageError as exc:
        parser.error(str(exc))


def _scalar_lambda_star(model: ScalarFadingModel, eta: float) -> float:
    """Stationary point of the closed-form sup, for the CSV column."""
    if model.family == "rician" and model.kappa > 0.0:
        k2 = model.kappa**2
        b = 1.0 - k2
        z = (-b + math.sqrt(b * b + 4.0 * k2 / eta)) / (2.0 * k2)
        return (1.0 - 1.0 / z) / b
    if model.family == "nakagami":
        return model.m * (1.0 - eta)
    return 1.0 - eta


def _exponent_rows(closed, numeric, grid):
    """Interleave closed-form and numeric rows over an eta grid."""
    rows = []
    for eta in grid:
        eta = float(eta)
        eta_db, eta_bit = _eta_columns(eta)
        cexp, clam = closed(eta)
        rows.append((eta, eta_db, eta_bit, cexp, clam, "closed_form"))
        res = numeric(eta)
        rows.append((eta, eta_db, eta_bit, res.exponent, res.lambda_star, "numeric"))
    return rows


_EXPONENT_HEADER = ("eta", "eta_db", "eta_bit", "exponent", "lambda_star", "source")


def cmd_exponent(args, parser) -> int:
    model = _scalar_model(args, parser)
    grid = _eta_grid(args, parser)
    mgf = log_mgf(model)
    bar = eta_bar(mgf)

    def closed(eta):
        if eta < bar:
            return 0.0, 0.0
        return closed_form_exponent(model, eta), _scalar_lambda_star(model, eta)

    rows = _exponent_rows(closed, lambda eta: wideband_exponent(mgf, eta), grid)
    _write_csv(args.output, _EXPONENT_HEADER, rows)
    return 0


def _read_matrix(raw: str) -> np.ndarray:
    rows = [
        [complex(tok) for tok in line.split()]
        for line in raw.strip().splitlines()
        if line.strip()
    ]
    return np.array(rows, dtype=complex)


def _pair_from_config(path: str) -> CovariancePair:
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise WidebandOutageError(f"cannot read config file {path!r}")
    if cp.has_section("separable"):
        sec = cp["separable"]
        psi_t = _read_matrix(sec["psi_t"])
        psi_r = _read_matrix(sec["psi_r"])
        sigma = _read_matrix(sec["sigma"]) if "sigma" in sec else None
        return CovariancePair.separable(psi_t, psi_r, sigma=sigma)
    if cp.has_section("full"):
        sec = cp["full"]
        return CovariancePair.full(
            _read_matrix(sec["psi"]),
            _read_matrix(sec["sigma"]),
            n_t=sec.getint("nt"),
            n_r=sec.getint("nr"),
        )
    raise WidebandOutageError("config needs a [separable] or [full] section")


def cmd_mimo(args, parser) -> int:
    grid = _eta_grid(args, parser)
    if args.config is not None:
        pair = _pair_from_config(args.config)
        rows = []
        for eta in grid:
            eta = float(eta)
            eta_db, eta_bit = _eta_columns(eta)
            res = correlated_exponent(pair, eta)
            rows.append(
                (eta, eta_db, eta_bit, res.exponent, res.lambda_star, "numeric")
            )
        _write_csv(args.output, _EXPONENT_HEADER, rows)
        return 0
    n_t, n_r = args.nt, args.nr
    bar = 1.0 / n_r

    def closed(eta):
        if eta < bar:
            return 0.0, 0.0
        value = n_t * n_r * (1.0 / (n_r * eta) - 1.0 + math.log(n_r * eta))
        return value, n_t * (1.0 - n_r * eta)

    pair = CovariancePair.separable(np.eye(n_t), np.eye(n_r))
    rows = _exponent_rows(closed, lambda eta: correlated_exponent(pair, eta), grid)
    _write_csv(args.output, _EXPONENT_HEADER, rows)
    return 0


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",")]


def cmd_feedback(args, parser) -> int:
    if args.mode == "etabar-sweep":
        try:
            g0s = _float_list(args.g0)
            taus = _parse_grid(args.tau, "count")
        except ValueError as exc:
            parser.error(str(exc))
        rows = []
        for g0 in g0s:
            for tau in taus:
                proto = FeedbackProtocol(tau=float(tau), g0=g0)
                rows.append((g0, float(tau), feedback_eta_bar(proto)))
        _write_csv(args.output, ("g0", "tau", "eta_bar"), rows)
        return 0

    if args.mode == "onoff-curves":
        try:
            taus = _float_list(args.tau)
        except ValueError as exc:
            parser.error(str(exc))
        grid = _eta_grid(args, parser)
        rows = []
        for tau in taus:
            bar = 1.0 / (tau + 1.0)
            for eta in grid:
                eta = float(eta)
                eta_db, eta_bit = _eta_columns(eta)
                value = onoff_exponent(tau, eta) if eta >= bar else 0.0
                rows.append((tau, eta, eta_db, eta_bit, value, "curve"))
        for eta in grid:
            eta = float(eta)
            eta_db, eta_bit = _eta_columns(eta)
            tau_star, value = onoff_envelope(eta)
            rows.append((tau_star, eta, eta_db, eta_bit, value, "envelope"))
        _write_csv(
            args.output,
            ("tau", "eta", "eta_db", "eta_bit", "exponent", "kind"),
            rows,
        )
        return 0

    # mesh
    grid = _eta_grid(args, parser)
    if grid.size != 1:
        parser.error("mesh wants a single --eta or --eta-db")
    eta = float(grid[0])
    try:
        g0_grid = _parse_grid(args.g0_grid, "step")
        tau_grid = _parse_grid(args.tau_grid, "step")
    except ValueError as exc:
        parser.error(str(exc))
    points, best = mesh(eta, g0_grid, tau_grid)
    rows = [(p.g0, p.tau, eta, p.exponent, p.status) for p in points]
    rows.append((best.g0, best.tau, eta, best.exponent, "ARGMAX"))
    _write_csv(args.output, ("g0", "tau", "eta", "exponent", "status"), rows)
    return 0


def _parse_k_list(text: str) -> list[int]:
    return [int(round(k)) for k in _parse_grid(text, "step")]


def cmd_simulate(args, parser) -> int:
    grid = _eta_grid(args, parser)
    if grid.size != 1:
        parser.error("simulate wants a single --eta or --eta-db")
    eta = float(grid[0])
    try:
        k_list = _parse_k_list(args.K)
    except ValueError as exc:
        parser.error(str(exc))

    if args.oracle is not None:
        rows = []
        neglogs = []
        for K in k_list:
            p = gamma_oracle(K, eta)
            neglogs.append(-math.log(p))
            rows.append((K, p, neglogs[-1]))
        _write_csv(args.output, ("K", "p", "neglog_p"), rows)
        ks = np.array(k_list, dtype=float)
        ys = np.array(neglogs)
        a = np.vstack([ks, np.ones_like(ks)]).T
        coef, residual, _, _ = np.linalg.lstsq(a, ys, rcond=None)
        dof = max(len(k_list) - 2, 1)
        scale = float(residual[0]) / dof if residual.size else 0.0
        stderr = math.sqrt(scale / float(np.sum((ks - ks.mean()) ** 2)))
        theory = wideband_exponent(
            log_mgf(ScalarFadingModel.rayleigh()), eta
        ).exponent
        print(f"theoretical exponent {theory:.12g}", file=sys.stderr)
        print(
            json.dumps(
                {
                    "exponent_hat": coef[0],
                    "stderr": stderr,
                    "points_used": len(k_list),
                }
            )
        )
        return 0

    if args.model is None:
        parser.error("give --model or --oracle")
    model = _scalar_model(args, parser)
    cfg = SimulationConfig(
        rho=args.rho,
        eta=eta,
        K_list=k_list,
        trials=args.trials,
        seed=args.seed,
        rate_mode=args.mode,
        workers=args.workers,
    )
    estimates = estimate_outage(model, cfg)
    rows = [
        (e.K, e.trials, e.outage_count, e.p_hat, e.ci_lo, e.ci_hi)
        for e in estimates
    ]
    _write_csv(
        args.output, ("K", "trials", "outages", "p_hat", "ci_lo", "ci_hi"), rows
    )
    fit = fit_slope(estimates)
    theory = wideband_exponent(log_mgf(model), eta).exponent
    print(f"theoretical exponent {theory:.12g}", file=sys.stderr)
    print(
        json.dumps(
            {
                "exponent_hat": fit.exponent_hat,
                "stderr": fit.stderr,
                "points_used": len(fit.k_values),
            }
        )
    )
    return 0


def cmd_shape(args, parser) -> int:
    grid = _eta_grid(args, parser)
    rows = []
    for eta in grid:
        eta = float(eta)
        eta_db, _ = _eta_columns(eta)
        xi_star, value = two_antenna_shaping(args.delta, eta)
        rows.append(
            (
                eta,
                eta_db,
                xi_star,
                value,
                two_antenna_exponent(args.delta, 0.0, eta),
                two_antenna_exponent(args.delta, 1.0, eta),
            )
        )
    _write_csv(
        args.output,
        ("eta", "eta_db", "xi_star", "exponent", "exponent_xi0", "exponent_xi1"),
        rows,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wideband-outage",
        description="Wideband outage exponents for slow-fading parallel channels.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("exponent", help="scalar fading exponent sweep")
    p.add_argument(
        "--model",
        required=True,
        choices=("rayleigh", "rician", "nakagami"),
    )
    p.add_argument("--kappa", type=float, default=0.0, help="rician LOS amplitude")
    p.add_argument("--m", type=float, default=1.0, help="nakagami fading figure")
    _add_eta_flags(p)
    p.add_argument("--output", default="-")

    p = subs.add_parser("mimo", help="MIMO exponent sweep")
    p.add_argument("--nt", type=int, default=2, help="transmit antennas")
    p.add_argument("--nr", type=int, default=2, help="receive antennas")
    p.add_argument("--config", help="INI file with correlation matrices")
    _add_eta_flags(p)
    p.add_argument("--output", default="-")

    p = subs.add_parser("feedback", help="one-bit feedback protocol curves")
    p.add_argument("mode", choices=("etabar-sweep", "onoff-curves", "mesh"))
    p.add_argument("--g0", default="0", help="comma list of weak-side fractions")
    p.add_argument("--tau", default="1", help="threshold grid or comma list")
    p.add_argument("--g0-grid", default="0:0.9:0.1", help="mesh grid start:stop:step")
    p.add_argument("--tau-grid", default="0.2:4:0.1", help="mesh grid start:stop:step")
    _add_eta_flags(p)
    p.add_argument("--output", default="-")

    p = subs.add_parser("simulate", help="Monte Carlo outage estimation")
    p.add_argument("--model", choices=("rayleigh", "rician", "nakagami"))
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--oracle", choices=("gamma",), help="deterministic oracle mode")
    p.add_argument("--mode", choices=("exact", "linear"), default="exact")
    p.add_argument("--rho", type=float, default=1.0, help="total average power")
    p.add_argument("--K", required=True, help="channel counts, comma list or grid")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_eta_flags(p)
    p.add_argument("--output", default="-")

    p = subs.add_parser("shape", help="two-antenna input shaping sweep")
    p.add_argument("--delta", type=float, required=True, help="transmit correlation")
    _add_eta_flags(p)
    p.add_argument("--output", default="-")

    return parser


_NEGATIVE_VALUE_FLAGS = ("--eta-db-grid", "--eta-db")


def _fold_negative_flag_values(argv):
    """Merge '-3:13:80' style values into --flag=value form.

    argparse treats any token with a leading dash that is not a bare
    number as an option, so dB grids starting below zero would not
    parse as separate tokens."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NEGATIVE_VALUE_FLAGS and i + 1 < len(argv):
            nxt = argv[i + 1]
            if len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_fold_negative_flag_values(argv))
    handlers = {
        "exponent": cmd_exponent,
        "mimo": cmd_mimo,
        "feedback": cmd_feedback,
        "simulate": cmd_simulate,
        "shape": cmd_shape,
    }
    try:
        return handlers[args.command](args, parser)
    except WidebandOutageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
