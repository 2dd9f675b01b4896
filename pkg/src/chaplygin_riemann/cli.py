"""Command-line front end.

Problem configurations are TOML files::

    c = 1.0
    [left]
    n = 1.0
    rho = 2.0
    v = 0.5
    [right]
    n = 1.0
    rho = 2.0
    v = 0.0

with optional ``[sample]``, ``[grid]``, ``[sim]``, ``[verify]`` and
``[tolerance]`` tables (see ``configs/annotated.toml``).  Output is CSV with
``#``-prefixed metadata lines; floats are written with 17 significant digits.

Exit codes: 0 success, 2 configuration error, 3 inadmissible data,
4 solver or simulator error, 5 verification tolerance breach.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__, fvm
from .eigen import assemble_matrices, degeneracy_defect, eigenvalues, eigenvectors
from .errors import ChaplyginError, ConfigError, DomainError, InadmissibleStateError
from .riemann import (
    ClassicalFan,
    DeltaShock,
    Region,
    RiemannData,
    RiemannSolution,
    WaveKind,
    sample,
    solve,
)
from .state import ModelParams, PrimitiveState, pressure
from .verify import (
    QuadratureSpec,
    entropy_window,
    grh_residual,
    limit_study,
    random_test_functions,
    weak_residual,
)
from .wavecurves import rh_residual

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INADMISSIBLE = 3
EXIT_SOLVER = 4
EXIT_TOLERANCE = 5

DEFAULT_TOLERANCES = {"rh": 1e-12, "grh": 1e-12, "weak": 1e-9}
DEFAULT_EPSILONS = (0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001)
SECTIONS = {"c", "left", "right", "sample", "grid", "sim", "verify", "tolerance"}


@dataclass(frozen=True)
class VerifyConfig:
    epsilons: tuple = DEFAULT_EPSILONS
    seed: int = 0
    count: int = 20
    panels: int = 64
    order: int = 8


@dataclass(frozen=True)
class SampleConfig:
    t: float = 1.0
    xmin: float = -1.0
    xmax: float = 1.0
    npoints: int = 201


@dataclass(frozen=True)
class ProblemConfig:
    params: ModelParams
    left: PrimitiveState
    right: PrimitiveState
    sha256: str
    sample: SampleConfig = SampleConfig()
    grid: fvm.Grid1D | None = None
    sim: fvm.SimConfig | None = None
    verify: VerifyConfig = VerifyConfig()
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    @property
    def data(self) -> RiemannData:
        return RiemannData(self.left, self.right, self.params)


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite, got {value!r}")
    return value


def _table(raw, name, keys, required=False):
    block = raw.get(name)
    if block is None:
        if required:
            raise ConfigError(f"missing [{name}] table")
        return None
    if not isinstance(block, dict):
        raise ConfigError(f"[{name}] must be a table")
    unknown = set(block) - set(keys)
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    return block


def _state(raw, name):
    block = _table(raw, name, ("n", "rho", "v"), required=True)
    missing = [k for k in ("n", "rho", "v") if k not in block]
    if missing:
        raise ConfigError(f"[{name}] lacks {missing}")
    return PrimitiveState(*(_number(block[k], f"{name}.{k}") for k in ("n", "rho", "v")))


def _build(cls, block, name, casts):
    kwargs = {}
    for key, value in block.items():
        cast = casts.get(key, _number)
        kwargs[key] = cast(value, f"{name}.{key}")
    try:
        return cls(**kwargs)
    except ChaplyginError as exc:
        raise ConfigError(str(exc)) from exc


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _numbers(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty list of numbers")
    return tuple(_number(v, where) for v in value)


def _string(value, where):
    if not isinstance(value, str):
        raise ConfigError(f"{where} must be a string, got {value!r}")
    return value


def parse_config(text: bytes) -> ProblemConfig:
    """Parse TOML bytes into a :class:`ProblemConfig` (states are not checked here)."""
    try:
        raw = tomllib.loads(text.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    unknown = set(raw) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    try:
        params = ModelParams(_number(raw.get("c", 1.0), "c"))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    out = {
        "params": params,
        "left": _state(raw, "left"),
        "right": _state(raw, "right"),
        "sha256": hashlib.sha256(text).hexdigest(),
    }

    block = _table(raw, "sample", [f.name for f in dataclasses.fields(SampleConfig)])
    if block is not None:
        out["sample"] = _build(SampleConfig, block, "sample", {"npoints": _integer})
    block = _table(raw, "grid", ("xmin", "xmax", "ncells"))
    if block is not None:
        out["grid"] = _build(fvm.Grid1D, block, "grid", {"ncells": _integer})
    block = _table(raw, "sim", [f.name for f in dataclasses.fields(fvm.SimConfig)])
    if block is not None:
        out["sim"] = _build(
            fvm.SimConfig, block, "sim",
            {"flux": _string, "snapshot_times": _numbers, "window_cells": _integer},
        )
    block = _table(raw, "verify", [f.name for f in dataclasses.fields(VerifyConfig)])
    if block is not None:
        out["verify"] = _build(
            VerifyConfig, block, "verify",
            {"epsilons": _numbers, "seed": _integer, "count": _integer, "panels": _integer, "order": _integer},
        )
    block = _table(raw, "tolerance", tuple(DEFAULT_TOLERANCES))
    tolerances = dict(DEFAULT_TOLERANCES)
    if block is not None:
        tolerances.update({k: _number(v, f"tolerance.{k}") for k, v in block.items()})
    out["tolerances"] = tolerances
    return ProblemConfig(**out)


def load_config(path) -> ProblemConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def fmt(x) -> str:
    """Round-trip representation of a number; empty for missing values."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


class Table:
    """CSV output with leading ``#`` metadata lines."""

    def __init__(self, header, meta=()):
        self.header = list(header)
        self.meta = list(meta)
        self.rows = []

    def add(self, *row):
        self.rows.append([v if isinstance(v, str) else fmt(v) for v in row])

    def render(self) -> str:
        buf = io.StringIO()
        for key, value in self.meta:
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()


def _meta(cfg: ProblemConfig | None, command, **extra):
    items = [("chaplygin-riemann", __version__), ("command", command)]
    if cfg is not None:
        items.append(("config_sha256", cfg.sha256))
    items.extend((k, v if isinstance(v, str) else fmt(v)) for k, v in extra.items())
    return items


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def solution_record(sol: RiemannSolution, cfg: ProblemConfig | None = None) -> Table:
    table = Table(["quantity", "value"], _meta(cfg, "solve"))
    table.add("classification", sol.kind.value)
    wave = sol.wave
    if isinstance(wave, ClassicalFan):
        a, v_s, b = wave.speeds
        table.add("a", a)
        table.add("v_star", v_s)
        table.add("b", b)
        table.add("rho_star", wave.rho_star)
        table.add("n_star1", wave.states[1].n)
        table.add("n_star2", wave.states[2].n)
    else:
        for name in ("sigma", "h_slope", "w_slope", "E", "F", "G"):
            table.add(name, getattr(wave, name))
    return table


def _perturbed(sol: RiemannSolution, delta: float) -> RiemannSolution:
    if not delta:
        return sol
    wave = sol.wave
    if isinstance(wave, DeltaShock):
        return RiemannSolution(sol.data, dataclasses.replace(wave, sigma=wave.sigma + delta))
    return RiemannSolution(sol.data, dataclasses.replace(wave, speeds=tuple(s + delta for s in wave.speeds)))


def cmd_solve(cfg: ProblemConfig, args) -> int:
    _emit(solution_record(solve(cfg.data), cfg).render(), args.out)
    return EXIT_OK


def sample_table(sol: RiemannSolution, t, xmin, xmax, npoints, cfg=None) -> Table:
    if not t > 0:
        raise ConfigError(f"sampling time must be positive, got {t}")
    if npoints < 2 or not xmin < xmax:
        raise ConfigError("sampling needs npoints >= 2 and xmin < xmax")
    xis = [x / t for x in np.linspace(xmin, xmax, npoints)]
    if isinstance(sol.wave, DeltaShock):
        sigma = sol.wave.sigma
        if xis[0] <= sigma <= xis[-1] and sigma not in xis:
            xis = sorted(xis + [sigma])
    table = Table(
        ["xi", "region", "n", "rho", "v", "p", "h_slope", "w_slope"],
        _meta(cfg, "sample", t=t, xmin=xmin, xmax=xmax, npoints=float(npoints)),
    )
    for xi in xis:
        s = sample(sol, xi)
        if s.region is Region.DELTA:
            table.add(xi, s.region.value, None, None, None, None, s.carrier.h_slope, s.carrier.w_slope)
        else:
            st = s.state
            table.add(xi, s.region.value, st.n, st.rho, st.v, pressure(st.rho), None, None)
    return table


def cmd_sample(cfg: ProblemConfig, args) -> int:
    sc = cfg.sample
    t = sc.t if args.t is None else args.t
    xmin = sc.xmin if args.xmin is None else args.xmin
    xmax = sc.xmax if args.xmax is None else args.xmax
    npoints = sc.npoints if args.npoints is None else args.npoints
    _emit(sample_table(solve(cfg.data), t, xmin, xmax, npoints, cfg).render(), args.out)
    return EXIT_OK


def verify_table(sol: RiemannSolution, cfg: ProblemConfig, tolerances, seed, perturb=0.0):
    """Residual report and whether every check met its tolerance."""
    data = cfg.data
    checked = _perturbed(sol, perturb)
    table = Table(
        ["check", "residual", "tolerance", "status"],
        _meta(cfg, "verify", seed=float(seed), perturb_sigma=perturb),
    )
    ok = True

    def record(name, value, tol):
        nonlocal ok
        passed = value < tol
        ok &= passed
        table.add(name, value, tol, "pass" if passed else "FAIL")

    wave = checked.wave
    if isinstance(wave, ClassicalFan):
        for k in range(3):
            res = rh_residual(wave.states[k], wave.states[k + 1], wave.speeds[k], data.params)
            record(f"rh_J{k + 1}", res.relative, tolerances["rh"])
    else:
        record("grh", grh_residual(wave, data).relative, tolerances["grh"])
        window = entropy_window(wave, data)
        table.add("entropy_window", None, None, "pass" if window.satisfied else "FAIL")
        ok &= window.satisfied
    vc = cfg.verify
    quad = QuadratureSpec(vc.panels, vc.order)
    for i, phi in enumerate(random_test_functions(sol, vc.count, seed)):
        record(f"weak_{i}", weak_residual(checked, phi, quad).max_abs, tolerances["weak"])
    return table, ok


def cmd_verify(cfg: ProblemConfig, args) -> int:
    tolerances = dict(cfg.tolerances)
    tolerances.update(args.tolerance)
    seed = cfg.verify.seed if args.seed is None else args.seed
    table, ok = verify_table(solve(cfg.data), cfg, tolerances, seed, args.perturb_sigma)
    _emit(table.render(), args.out)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_limit_study(cfg: ProblemConfig, args) -> int:
    study = limit_study(cfg.left, cfg.params, cfg.verify.epsilons)
    table = Table(
        ["kind", "eps", "int_rho", "int_n", "int_v", "target_rho", "target_n", "target_v", "err_rho", "err_n", "err_v"],
        _meta(cfg, "limit-study"),
    )
    targets = (study.target_rho, study.target_n, study.target_v)
    for r in study.rows:
        table.add("row", r.eps, r.int_rho, r.int_n, r.int_v, *targets, r.err_rho, r.err_n, r.err_v)
    ext = study.extrapolated()
    table.add("extrapolated", 0.0, *ext, *targets, *(abs(x - y) for x, y in zip(ext, targets)))
    _emit(table.render(), args.out)
    return EXIT_OK


def cmd_simulate(cfg: ProblemConfig, args) -> int:
    if cfg.grid is None or cfg.sim is None:
        raise ConfigError("simulate needs [grid] and [sim] tables")
    sim = cfg.sim if args.flux is None else dataclasses.replace(cfg.sim, flux=args.flux)
    data = cfg.data
    result = fvm.run(fvm.riemann_initial(data.left, data.right), cfg.grid, sim, data.params)
    sol = solve(data)
    classical = sol.kind is WaveKind.CLASSICAL

    diag = result.diagnostics
    table = Table(
        ["t", "spike_position", "window_mass_En", "window_mass_D", "l1_rho"],
        _meta(cfg, "simulate", flux=sim.flux, steps=float(result.steps)),
    )
    for k, snap in enumerate(result.snapshots):
        l1 = fvm.l1_error(snap, sol, cfg.grid) if classical else None
        table.add(diag.times[k], diag.spike_position[k], diag.window_mass_En[k], diag.window_mass_D[k], l1)

    if args.out is None or args.out == "-":
        _emit(table.render(), None)
        return EXIT_OK
    os.makedirs(args.out, exist_ok=True)
    _emit(table.render(), os.path.join(args.out, "diagnostics.csv"))
    for k, snap in enumerate(result.snapshots):
        st = Table(["t", "x", "D", "M", "En", "n", "rho", "v"], _meta(cfg, "simulate", t=snap.t))
        for i in range(len(snap.x)):
            st.add(snap.t, snap.x[i], *snap.U[:, i], snap.n[i], snap.rho[i], snap.v[i])
        _emit(st.render(), os.path.join(args.out, f"snapshot_{k:03d}.csv"))
    return EXIT_OK


def cmd_eigen(cfg: ProblemConfig | None, args) -> int:
    if args.state is not None:
        params = ModelParams(args.c)
        state = PrimitiveState(*args.state)
    elif cfg is not None:
        params, state = cfg.params, cfg.left
    else:
        raise ConfigError("eigen needs --config or --state")
    pair = assemble_matrices(state, params)
    lams = eigenvalues(state, params)
    vecs = eigenvectors(state, params)
    defects = degeneracy_defect(state, params)
    table = Table(["quantity", "i", "c0", "c1", "c2"], _meta(cfg, "eigen", n=state.n, rho=state.rho, v=state.v, c=params.c))
    for name, mat in (("A", pair.A), ("B", pair.B)):
        for i in range(3):
            table.add(name, float(i), *mat[i])
    for i in range(3):
        table.add("lambda", float(i + 1), lams[i], None, None)
        table.add("r", float(i + 1), *vecs[i])
        table.add("degeneracy_defect", float(i + 1), defects[i], None, None)
    _emit(table.render(), args.out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "limit-study": cmd_limit_study,
    "simulate": cmd_simulate,
    "eigen": cmd_eigen,
}


def _tolerance(text):
    key, sep, value = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE with KEY in {sorted(DEFAULT_TOLERANCES)}, got {text!r}")
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key} must be a number, got {value!r}") from None
    return key, number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaplygin-riemann",
        description="Exact Riemann solutions, verification and finite-volume runs for the Chaplygin-gas relativistic Euler system.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, metavar="PATH", help="TOML problem configuration")
        p.add_argument("--out", metavar="PATH", help="output file (directory for simulate); default stdout")

    common(sub.add_parser("solve", help="classify and print the solution constants"))

    p = sub.add_parser("sample", help="tabulate the solution at time t")
    common(p)
    p.add_argument("--t", type=float)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--npoints", type=int)

    p = sub.add_parser("verify", help="jump-condition and weak-form residuals")
    common(p)
    p.add_argument("--tolerance", type=_tolerance, action="append", default=[], metavar="KEY=VALUE",
                   help="override a tolerance (keys: rh, grh, weak); repeatable")
    p.add_argument("--seed", type=int, help="seed for test-function placement")
    p.add_argument("--perturb-sigma", type=float, default=0.0, metavar="DELTA",
                   help="debug: shift the wave speeds by DELTA before checking")

    common(sub.add_parser("limit-study", help="integrals over [a, b] as b approaches a"))

    p = sub.add_parser("simulate", help="finite-volume run with concentration diagnostics")
    common(p)
    p.add_argument("--flux", choices=fvm.FLUXES)

    p = sub.add_parser("eigen", help="quasilinear matrices and eigenvectors at a state")
    common(p, config_required=False)
    p.add_argument("--state", type=float, nargs=3, metavar=("N", "RHO", "V"))
    p.add_argument("--c", type=float, default=1.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if hasattr(args, "tolerance"):
        args.tolerance = dict(args.tolerance)
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None:
            cfg.data  # validates both states
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InadmissibleStateError as exc:
        print(f"inadmissible data: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ChaplyginError as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
