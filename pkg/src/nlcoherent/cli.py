"""Command-line front end: figure data as CSV/JSON and a verification run.

Subcommands
-----------
state-scan   photon-number probabilities, mean and Mandel Q over a |z| grid
joint        joint output distribution of the beam splitter plus port statistics
g2-scan      second-order coherence at an output port over a |z| grid
moments      moment equation of the closure measure
verify       moment, oracle-equivalence and invariant checks; exit 1 on failure

Exit status is 0 on success, 1 when a check fails or a computation errors
out, and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._errors import NLCoherentError, UnsupportedVariantError
from ._twomode import TwoModeState
from .algebra import (
    AlgebraSpec,
    Variant,
    annihilated_levels,
    annihilation_matrix,
    creation_matrix,
    e_values,
    load_algebra,
    number_matrix,
    su11_generators,
)
from .beamsplitter import (
    bs_oracle,
    channel_marginal,
    channel_report,
    factorization_test,
    joint_coherent,
    joint_fock,
    joint_from_state,
    joint_su11,
    total_variation,
)
from .completeness import measure_parameters, verify_moments
from .states import coherent_state, eigen_residual, number_state, photon_distribution, photon_statistics

COMMANDS = ("state-scan", "joint", "verify", "g2-scan", "moments")


class ConfigError(ValueError):
    """Invalid command-line configuration (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    algebra: AlgebraSpec
    algebra_source: str
    command: str
    z_min: float = 0.0
    z_max: float = 4.0
    steps: int = 41
    cutoff: int | None = None
    tol: float = 1e-12
    out: Path | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not (math.isfinite(self.z_min) and self.z_min >= 0):
            raise ConfigError(f"--z-min must be >= 0, got {self.z_min}")
        if not (math.isfinite(self.z_max) and self.z_max >= self.z_min):
            raise ConfigError(f"--z-max must be >= --z-min, got {self.z_max}")
        if self.steps < 1:
            raise ConfigError(f"--steps must be >= 1, got {self.steps}")
        if not (0 < self.tol <= 1e-3):
            raise ConfigError(f"--tol must lie in (0, 1e-3], got {self.tol}")
        if self.cutoff is not None and self.cutoff < 0:
            raise ConfigError(f"--cutoff must be >= 0, got {self.cutoff}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json, got {self.format!r}")

    def z_grid(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.z_min])
        return np.linspace(self.z_min, self.z_max, self.steps)

    def meta(self) -> dict:
        return {
            "tool": "nlcoherent",
            "version": __version__,
            "command": self.command,
            "algebra": self.algebra.to_dict(),
            "tol": self.tol,
            "cutoff": self.cutoff,
            "z_min": self.z_min,
            "z_max": self.z_max,
            "steps": self.steps,
        }


@dataclass
class Table:
    """Rows of numbers plus metadata, rendered as CSV or JSON."""

    columns: list
    rows: list
    meta: dict

    def render(self, fmt: str) -> str:
        if fmt == "json":
            data = [dict(zip(self.columns, row)) for row in self.rows]
            return json.dumps({"meta": self.meta, "data": data}, indent=1, sort_keys=True, default=_json_default) + "\n"
        buf = io.StringIO()
        for k, v in self.meta.items():
            buf.write(f"# {k}: {json.dumps(v, sort_keys=True, default=_json_default)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows([_fmt(v) for v in row] for row in self.rows)
        return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _fmt(v) -> str:
    if v is None:
        return "nan"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def _state(cfg: RunConfig, z: float):
    try:
        return coherent_state(cfg.algebra, z, tol=cfg.tol, cutoff=cfg.cutoff)
    except NLCoherentError as exc:
        raise NLCoherentError(f"state construction failed at |z|={z!r}: {exc}") from exc


def cmd_state_scan(cfg: RunConfig, levels) -> Table:
    cols = ["z"] + [f"P{n}" for n in levels] + ["mean", "variance", "mandel_q", "channel_mandel_q", "cutoff"]
    rows = []
    for z in cfg.z_grid():
        st = _state(cfg, float(z))
        p = photon_distribution(st)
        s = photon_statistics(p)
        ch = photon_statistics(channel_marginal(p))
        probs = [float(p[n]) if n < p.size else 0.0 for n in levels]
        rows.append([float(z), *probs, s.mean, s.variance, s.mandel_q, ch.mandel_q, st.cutoff])
    return Table(cols, rows, cfg.meta() | {"levels": list(levels)})


def cmd_g2_scan(cfg: RunConfig, input_kind: str, n_max: int) -> Table:
    rows = []
    if input_kind == "fock":
        cols = ["n", "g2_input", "g2_channel"]
        for n in range(1, n_max + 1):
            p = photon_distribution(number_state(n))
            rows.append([n, photon_statistics(p).g2, photon_statistics(channel_marginal(p)).g2])
        return Table(cols, rows, cfg.meta() | {"input": "fock"})
    cols = ["z", "g2_input", "g2_channel"]
    for z in cfg.z_grid():
        if z == 0:
            # vacuum input: g2 is undefined at both ports
            rows.append([0.0, None, None])
            continue
        p = photon_distribution(_state(cfg, float(z)))
        rows.append([float(z), photon_statistics(p).g2, photon_statistics(channel_marginal(p)).g2])
    return Table(cols, rows, cfg.meta() | {"input": "algebra"})


def cmd_joint(cfg: RunConfig, input_kind: str, param: float) -> Table:
    if input_kind == "fock":
        if param < 0 or param != int(param):
            raise ConfigError(f"fock input needs a nonnegative integer --param, got {param}")
        joint = joint_fock(int(param))
    elif param < 0:
        raise ConfigError(f"--param must be >= 0, got {param}")
    elif input_kind == "coherent":
        joint = joint_coherent(param, tol=cfg.tol)
    else:
        joint = joint_su11(param, tol=cfg.tol)
    report = channel_report(joint, strict=False)
    fact = factorization_test(joint)
    meta = cfg.meta() | {
        "input": input_kind,
        "param": param,
        "cutoff_total": joint.cutoff_total,
        "tail_bound": joint.tail_bound,
        "channel": report.to_dict(),
        "separable": fact.separable,
    }
    meta.pop("algebra")
    return Table(["n", "m", "p"], [list(r) for r in joint.to_rows()], meta)


def cmd_moments(cfg: RunConfig, n_max: int) -> Table:
    report = verify_moments(cfg.algebra, n_max, quad_tol=cfg.tol)
    rows = [[e.n, e.quadrature_value, e.target, e.relative_error, e.status] for e in report.entries]
    return Table(["n", "quadrature_value", "target", "relative_error", "status"], rows,
                 cfg.meta() | {"max_relative_error": report.max_relative_error})


def _check(rows, name, fn, tol):
    """Run one check; errors are recorded as failures without stopping the suite."""
    try:
        value = float(fn())
        ok = bool(value <= tol)
        note = ""
    except Exception as exc:  # noqa: BLE001 - every failure is reported, none aborts the run
        value, ok, note = math.nan, False, f"{type(exc).__name__}: {exc}"
    rows.append([name, value, tol, ok, note])


def relative_gap(lhs, rhs) -> float:
    """Largest entrywise ``|lhs - rhs| / max(1, |rhs|)``."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)), initial=0.0))


def _algebra_checks(rows, spec, cutoff=40):
    a = annihilation_matrix(spec, cutoff)
    ad = creation_matrix(spec, cutoff)
    n = number_matrix(cutoff)
    inner = slice(0, cutoff)  # the top level feels the truncation
    _check(rows, "commutator [n a] = -a", lambda: relative_gap((n @ a - a @ n)[inner, inner], -a[inner, inner]), 1e-12)
    _check(rows, "a^dagger a = E(n)",
           lambda: relative_gap((ad @ a)[inner, inner], np.diag(e_values(spec, np.arange(cutoff)))), 1e-12)
    dead = sorted(annihilated_levels(spec, cutoff))
    if len(dead) > 1:
        def annihilation():
            vac = [a[:, k] for k in dead] + [ad[:, 0]]
            return max(float(np.abs(v).max()) for v in vac)
        _check(rows, "annihilated levels " + " ".join(map(str, dead)), annihilation, 1e-12)
    if spec.variant is Variant.SU11:
        def su11():
            km, kp, k0 = su11_generators(spec, cutoff)
            return relative_gap((km @ kp - kp @ km)[inner, inner], 2 * k0[inner, inner])
        _check(rows, "su(1 1) commutator [K- K+] = 2 K0", su11, 1e-12)


def cmd_verify(cfg: RunConfig) -> tuple[Table, bool]:
    rows = []
    spec = cfg.algebra
    try:
        measure_parameters(spec)
        moment_tol = 1e-8 if spec.variant is Variant.IDENTITY else 1e-6
        _check(rows, "moment equation n <= 10", lambda: _moment_error(spec), moment_tol)
    except UnsupportedVariantError as exc:
        rows.append(["moment equation", math.nan, math.nan, True, f"skipped: {exc}"])
    _algebra_checks(rows, spec)
    z = max(cfg.z_max, 1e-3)
    _check(rows, f"eigen-equation residual at |z|={z:g}",
           lambda: eigen_residual(coherent_state(spec, z, tol=cfg.tol), spec, z), 1e-8)
    _check(rows, "joint_fock(n=6) vs oracle",
           lambda: np.abs(joint_fock(6).probs - joint_from_state(number_state(6)).probs).max(), 1e-9)
    _check(rows, "joint_coherent(|z|=4) vs oracle", lambda: _oracle_gap(AlgebraSpec.identity(), joint_coherent, 4.0, cfg.tol), 1e-9)
    _check(rows, "joint_su11(|z|=4) vs oracle", lambda: _oracle_gap(AlgebraSpec.su11(), joint_su11, 4.0, cfg.tol), 1e-9)
    _check(rows, "beam splitter unitarity at cutoff_total 30", _unitarity_gap, 1e-12)
    st = coherent_state(spec, z, tol=cfg.tol)
    joint = joint_from_state(st)
    p = photon_distribution(st)
    _check(rows, "total photon number invariant (TV)",
           lambda: total_variation(joint.total_photon_distribution() / joint.total_mass(), p / p.sum()), 1e-12)
    _check(rows, "channel Q = input Q / 2",
           lambda: abs(channel_report(joint, strict=False).horizontal.mandel_q - photon_statistics(p).mandel_q / 2), 1e-9)
    _check(rows, "channel g2 = input g2",
           lambda: abs(channel_report(joint).g2_horizontal - photon_statistics(p).g2), 1e-9)
    passed = all(r[3] for r in rows)
    return Table(["check", "value", "tolerance", "passed", "note"], rows, cfg.meta() | {"passed": passed}), passed


def _moment_error(spec):
    return verify_moments(spec, 10, quad_tol=1e-10).max_relative_error


def _oracle_gap(spec, closed, z, tol):
    a = closed(z, tol=tol).probs
    b = joint_from_state(coherent_state(spec, z, tol=tol)).probs
    return np.abs(a - b).max()


def _unitarity_gap(n=30, seed=7):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
    amps[np.add.outer(np.arange(n + 1), np.arange(n + 1)) > n] = 0
    amps /= np.linalg.norm(amps)
    out = bs_oracle(TwoModeState(amps))
    return abs(out.norm() - 1.0)


def _gnuplot_script(path: Path, table: Table, command: str) -> str:
    cols = table.columns
    x = cols[0]
    lines = [
        f"# companion plot for {path.name}",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{x}'",
    ]
    if command == "joint":
        lines += ["set ylabel 'm'", "set view map", f"splot '{path.name}' using 1:2:3 with points pointtype 5 palette"]
    else:
        series = [c for c in cols[1:] if c not in ("cutoff", "status", "note", "check")]
        plots = ", ".join(f"'{path.name}' using 1:'{c}' with lines" for c in series)
        lines.append(f"plot {plots}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="su11",
                        help="algebra JSON file or registered name (default: su11)")
    common.add_argument("--z-min", type=float, default=0.0)
    common.add_argument("--z-max", type=float, default=4.0)
    common.add_argument("--steps", type=int, default=41)
    common.add_argument("--tol", type=float, default=1e-12,
                        help="truncation tolerance; quadrature tolerance for moments")
    common.add_argument("--cutoff", type=int, default=None, help="fixed Fock cutoff instead of the adaptive one")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-plot-script", action="store_true",
                        help="do not write the companion gnuplot script next to CSV output")

    parser = argparse.ArgumentParser(prog="nlcoherent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state-scan", parents=[common], help="probabilities, mean and Mandel Q over |z|")
    p.add_argument("--levels", default="0,1,2,3,4", help="comma-separated Fock levels to tabulate")

    p = sub.add_parser("joint", parents=[common], help="beam-splitter joint distribution")
    p.add_argument("--input", choices=("fock", "coherent", "su11"), default="su11")
    p.add_argument("--param", type=float, default=4.0, help="photon number for fock, |z| otherwise")

    p = sub.add_parser("g2-scan", parents=[common], help="second-order coherence at an output port")
    p.add_argument("--input", choices=("algebra", "fock"), default="algebra")
    p.add_argument("--n-max", type=int, default=20, help="largest photon number for fock input")

    p = sub.add_parser("moments", parents=[common], help="moment equation of the closure measure")
    p.add_argument("--n-max", type=int, default=10)

    sub.add_parser("verify", parents=[common], help="run the verification suite")
    return parser


def _config(args) -> RunConfig:
    try:
        spec = load_algebra(args.algebra)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot load algebra {args.algebra!r}: {exc}") from exc
    return RunConfig(spec, args.algebra, args.command, args.z_min, args.z_max, args.steps,
                     args.cutoff, args.tol, args.out, args.format)


def _emit(cfg: RunConfig, table: Table, write_plot: bool):
    text = table.render(cfg.format)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(text)
    if cfg.format == "csv" and write_plot:
        gp_dir = cfg.out.parent / "gnuplot"
        gp_dir.mkdir(exist_ok=True)
        (gp_dir / (cfg.out.stem + ".gp")).write_text(_gnuplot_script(cfg.out, table, cfg.command))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        passed = True
        if cfg.command == "state-scan":
            try:
                levels = [int(v) for v in args.levels.split(",") if v.strip()]
            except ValueError as exc:
                raise ConfigError(f"--levels must be comma-separated integers: {exc}") from exc
            if any(n < 0 for n in levels):
                raise ConfigError("--levels must be nonnegative")
            table = cmd_state_scan(cfg, levels)
        elif cfg.command == "joint":
            table = cmd_joint(cfg, args.input, args.param)
        elif cfg.command == "g2-scan":
            table = cmd_g2_scan(cfg, args.input, args.n_max)
        elif cfg.command == "moments":
            if args.n_max < 0:
                raise ConfigError("--n-max must be >= 0")
            table = cmd_moments(cfg, args.n_max)
        else:
            table, passed = cmd_verify(cfg)
        _emit(cfg, table, not args.no_plot_script)
    except (ConfigError, UnsupportedVariantError) as exc:
        print(f"nlcoherent: configuration error: {exc}", file=sys.stderr)
        return 2
    except (NLCoherentError, ArithmeticError) as exc:
        print(f"nlcoherent: {exc}", file=sys.stderr)
        return 1
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
