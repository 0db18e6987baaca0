"""Command-line front end.

Subcommands
-----------
compute   speed limits and certificates for one model (JSON, or CSV summary)
evolve    full and mean-field trajectories with rates/energies (CSV)
witness   two-time separability test of a measured expectation series (JSON)
figures   regenerate the three reference data files (CSV)
sweep     speed limits over a parameter range (CSV)

A JSON config file (--config) may supply any long-flag value, keyed by
the flag name with dashes replaced by underscores; explicitly passed
flags override the file.  Exit codes: 0 success, 2 bad usage or config,
3 solver non-convergence (reports are still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__, dynamics, models, reports, speedlimits
from .backend import BACKEND
from .errors import ConfigError, QslLabError, SeriesFormatError
from .linalg import HermitianOperator, hermitian_eig
from .spaces import ProductState, embed
from .speedlimits import SolverConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3

_MODEL_NAMES = ("swap", "qudit", "nmode")

# keys a config file may provide (same vocabulary as the long flags)
_CONFIG_KEYS = {
    "model", "kappa", "q", "d", "n", "k_split", "gamma_re", "gamma_im",
    "e0", "eperp", "hbar", "dt", "t_max", "samples", "starts", "seed",
    "tol", "max_iters", "out", "format", "l_inf", "qsl_sep_plus",
    "cone_out", "out_dir", "which", "values", "jobs",
}


@dataclass(frozen=True)
class IntegratorConfig:
    """Time-grid settings for trajectory subcommands."""

    dt: float | None = None
    t_max: float = 2.0 * math.pi
    samples: int = 101

    def __post_init__(self):
        if self.dt is not None and not float(self.dt) > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not float(self.t_max) > 0.0:
            raise ConfigError(f"t-max must be positive, got {self.t_max!r}")
        if int(self.samples) < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully validated run: model, solver, integrator, output."""

    model: str
    params: object  # SwapModelParams | QuditModelParams | NModeModelParams
    solver: SolverConfig
    integrator: IntegratorConfig
    hbar: float = 1.0
    out: str | None = None
    fmt: str = "json"


# ---------------------------------------------------------------------------
# config assembly
# ---------------------------------------------------------------------------


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _merged_options(args: argparse.Namespace) -> dict:
    merged = {}
    if getattr(args, "config", None):
        merged.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _as_complex(value, name: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError as exc:
            raise ConfigError(f"cannot parse {name}={value!r} as a complex number") from exc
    return complex(value)


def _solver_from(options: dict) -> SolverConfig:
    try:
        return SolverConfig(
            starts=int(options.get("starts", 32)),
            max_iters=int(options.get("max_iters", 10000)),
            tol=float(options.get("tol", 1e-12)),
            seed=int(options.get("seed", 1234)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _model_params_from(options: dict):
    name = options.get("model")
    if name not in _MODEL_NAMES:
        raise ConfigError(
            f"--model must be one of {', '.join(_MODEL_NAMES)}, got {name!r}"
        )
    try:
        if name == "swap":
            if options.get("kappa") is None:
                raise ConfigError("swap model needs --kappa")
            return models.SwapModelParams(
                kappa=float(options["kappa"]),
                q=_as_complex(options.get("q", 0.0), "q"),
            )
        if name == "qudit":
            if options.get("d") is None:
                raise ConfigError("qudit model needs --d")
            return models.QuditModelParams(
                d=int(options["d"]),
                e0=float(options.get("e0", 0.0)),
                e_perp=float(options.get("eperp", 1.0)),
            )
        if options.get("n") is None:
            raise ConfigError("nmode model needs --n")
        n = int(options["n"])
        return models.NModeModelParams(
            n_parties=n,
            k_split=int(options.get("k_split", 1)),
            gamma=complex(
                float(options.get("gamma_re", 1.0)),
                float(options.get("gamma_im", 0.0)),
            ),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    options = _merged_options(args)
    params = _model_params_from(options)
    try:
        integrator = IntegratorConfig(
            dt=float(options["dt"]) if options.get("dt") is not None else None,
            t_max=float(options.get("t_max", 2.0 * math.pi)),
            samples=int(options.get("samples", 101)),
        )
        hbar = float(options.get("hbar", 1.0))
        if not hbar > 0.0:
            raise ConfigError(f"hbar must be positive, got {hbar}")
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    fmt = str(options.get("format", "json"))
    if fmt not in ("json", "csv"):
        raise ConfigError(f"--format must be json or csv, got {fmt!r}")
    return ScenarioConfig(
        model=options["model"],
        params=params,
        solver=_solver_from(options),
        integrator=integrator,
        hbar=hbar,
        out=options.get("out"),
        fmt=fmt,
    )


def _build_model(config: ScenarioConfig):
    """Returns (operator, initial ProductState, params-as-dict)."""
    p = config.params
    if config.model == "swap":
        h, state0 = models.build_swap(p, hbar=config.hbar)
        desc = {"name": "swap", "kappa": p.kappa, "q": [p.q.real, p.q.imag]}
        return h, state0, desc
    if config.model == "qudit":
        h = models.build_qudit(p)
        desc = {"name": "qudit", "d": p.d, "e0": p.e0, "e_perp": p.e_perp}
    else:
        h = models.build_nmode(p)
        desc = {
            "name": "nmode",
            "n_parties": p.n_parties,
            "k_split": p.k_split,
            "gamma": [p.gamma.real, p.gamma.imag],
        }
    rng = np.random.default_rng(config.solver.seed)
    kets = []
    for d in h.space.dims:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        kets.append(v / np.linalg.norm(v))
    return h, ProductState.from_locals(kets), desc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------


def cmd_compute(config: ScenarioConfig) -> tuple[reports.ReportDocument, int]:
    """Run the speed-limit analysis for one scenario and emit the report."""
    started = time.perf_counter()
    operator, _, desc = _build_model(config)
    report = speedlimits.qsl_sep_bound(operator, config.solver, hbar=config.hbar)
    wall = time.perf_counter() - started
    doc = reports.ReportDocument(
        report=report,
        model=desc,
        dims=operator.space.dims,
        solver=config.solver,
        hbar=config.hbar,
        backend=BACKEND,
        wall_time_s=wall,
    )
    if config.fmt == "csv":
        header = [
            "qsl", "qsl_sep_plus", "ratio", "ratio_infinite",
            "e_min", "e_max", "e_min_sep", "e_max_sep", "n_parties", "converged",
        ]
        row = [
            report.qsl, report.qsl_sep_plus, report.ratio,
            float(report.ratio_infinite), report.e_min, report.e_max,
            report.e_min_sep, report.e_max_sep, float(report.n_parties),
            float(report.converged),
        ]
        text = ",".join(header) + "\n" + ",".join(
            reports.format_number(x) for x in row
        ) + "\n"
    else:
        text = doc.to_json()
    _emit(text, config.out)
    return doc, EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------


def _default_dt(operator: HermitianOperator, hbar: float) -> float:
    h_norm = float(np.abs(hermitian_eig(operator).values).max())
    if h_norm == 0.0:
        return 0.01
    return 0.005 * hbar / h_norm


def _oracle_states(config: ScenarioConfig, state0: ProductState, t: float):
    """Closed-form product state at time t, or None when no oracle exists."""
    if config.model == "swap":
        return models.swap_separable_closed(state0, config.params.kappa, t)
    if config.model == "qudit":
        return models.qudit_separable_closed(state0, config.params, t, hbar=config.hbar)
    return None


def cmd_evolve(config: ScenarioConfig) -> int:
    """Simulate both dynamics on one model and export the rate/energy table."""
    operator, state0, desc = _build_model(config)
    grid = np.linspace(0.0, config.integrator.t_max, config.integrator.samples)
    dt = config.integrator.dt
    if dt is None:
        dt = _default_dt(operator, config.hbar)
    full = dynamics.evolve_full(operator, embed(state0), grid, hbar=config.hbar)
    separable = dynamics.evolve_separable(operator, state0, grid, dt, hbar=config.hbar)
    has_oracle = config.model in ("swap", "qudit")
    header = ["t", "rate_full", "rate_sep", "energy_full", "energy_sep"]
    if has_oracle:
        header.append("fidelity_to_oracle")
    rows = []
    for k, t in enumerate(grid):
        row = [
            float(t),
            full.rates[k],
            separable.rates[k],
            full.energies[k],
            separable.energies[k],
        ]
        if has_oracle:
            oracle = _oracle_states(config, state0, float(t))
            overlap = complex(
                np.vdot(embed(oracle).vector, embed(separable.states[k]).vector)
            )
            row.append(abs(overlap) ** 2)
        rows.append(row)
    meta = [
        ("model", json.dumps(desc)),
        ("hbar", reports.format_number(config.hbar)),
        ("dt", reports.format_number(dt)),
        ("seed", str(config.solver.seed)),
    ]
    lines = [f"# {k}: {v}" for k, v in meta]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(reports.format_number(x) for x in row))
    _emit("\n".join(lines) + "\n", config.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------


def read_series(path: str) -> np.ndarray:
    """Parse a 't,expectation' CSV; SeriesFormatError points at the bad line."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SeriesFormatError(f"cannot read series file: {exc}") from exc
    if not lines:
        raise SeriesFormatError("series file is empty", line_number=1)
    if lines[0].strip() != "t,expectation":
        raise SeriesFormatError(
            f"expected header 't,expectation', got {lines[0]!r}", line_number=1
        )
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise SeriesFormatError(
                f"expected two comma-separated fields, got {line!r}", line_number=number
            )
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise SeriesFormatError(
                f"non-numeric value in {line!r}", line_number=number
            ) from exc
    if len(rows) < 2:
        raise SeriesFormatError("series needs at least two samples")
    return np.array(rows, dtype=np.float64)


def cmd_witness(args: argparse.Namespace) -> int:
    """Check a measured series against the separable cone; emit a verdict."""
    options = _merged_options(args)
    series = read_series(args.series)
    l_inf = float(options.get("l_inf", 1.0))
    solver_converged = None
    if options.get("qsl_sep_plus") is not None:
        bound = float(options["qsl_sep_plus"])
        if bound < 0.0:
            raise ConfigError(f"qsl-sep-plus must be >= 0, got {bound}")
    else:
        if options.get("model") is None:
            raise ConfigError("witness needs either --qsl-sep-plus or a --model")
        config = scenario_from_args(args)
        operator, _, _ = _build_model(config)
        report = speedlimits.qsl_sep_bound(operator, config.solver, hbar=config.hbar)
        bound = report.qsl_sep_plus
        solver_converged = report.converged
    try:
        verdict = dynamics.witness_check(series, bound, l_inf)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    document = {
        "schema": "qsl-lab/witness/v1",
        "violated": verdict.violated,
        "max_excess": verdict.max_excess,
        "violating_interval": (
            list(verdict.violating_interval) if verdict.violating_interval else None
        ),
        "qsl_sep_plus": bound,
        "l_inf": l_inf,
        "samples": int(series.shape[0]),
        "solver_converged": solver_converged,
    }
    _emit(json.dumps(document, indent=2) + "\n", options.get("out"))
    cone_out = options.get("cone_out")
    if cone_out:
        elapsed = series[:, 0] - series[0, 0]
        lower, upper = dynamics.cone_bounds(series[0, 1], bound, l_inf, elapsed)
        reports.write_csv(
            cone_out,
            ["t", "lower", "upper"],
            zip(series[:, 0], lower, upper),
            metadata=[("anchor", reports.format_number(series[0, 1]))],
        )
    if solver_converged is False:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

_CROSSING_Q = 2.0 ** (-0.25)


def _figure_one(out_path: str, solver: SolverConfig, samples: int) -> None:
    """Rates versus overlap for the exchange pair, normalized by |kappa|."""
    kappa = 1.0
    grid = sorted(set(np.linspace(0.0, 1.0, samples)) | {_CROSSING_Q})
    h, _ = models.build_swap(models.SwapModelParams(kappa=kappa, q=0.0))
    limit = speedlimits.qsl_exact(h).qsl / kappa
    sep_limit = speedlimits.qsl_sep_bound(h, solver).qsl_sep_plus / kappa
    rows = []
    for q in grid:
        params = models.SwapModelParams(kappa=kappa, q=q)
        h, state0 = models.build_swap(params)
        measured_full = dynamics.rate_full(h, embed(state0)).rate / kappa
        measured_sep = dynamics.rate_separable(h, state0).rate / kappa
        closed_full, closed_sep = models.analytic_rates(params)
        rows.append(
            (
                q,
                measured_full,
                closed_full / kappa,
                measured_sep,
                closed_sep / kappa,
                limit,
                sep_limit,
            )
        )
    reports.write_csv(
        out_path,
        [
            "q_abs",
            "rate_full",
            "rate_full_closed",
            "rate_sep",
            "rate_sep_closed",
            "qsl",
            "qsl_sep_plus",
        ],
        rows,
        metadata=[
            ("figure", "1"),
            ("model", "swap"),
            ("normalization", "rates divided by |kappa|"),
            ("crossing", "rate_full meets qsl_sep_plus at |q| = 2^(-1/4)"),
            ("seed", str(solver.seed)),
        ],
    )


def _figure_two(out_path: str, solver: SolverConfig) -> None:
    """Speedup ratio of the projector model for d = 2..10."""
    rows = []
    for d in range(2, 11):
        h = models.build_qudit(models.QuditModelParams(d=d))
        report = speedlimits.qsl_sep_bound(h, solver)
        rows.append(
            (d, report.ratio, models.qudit_speedup(d), report.qsl, report.qsl_sep_plus)
        )
    reports.write_csv(
        out_path,
        ["d", "ratio", "ratio_closed", "qsl", "qsl_sep_plus"],
        rows,
        metadata=[("figure", "2"), ("model", "qudit"), ("seed", str(solver.seed))],
    )


def _figure_three(out_path: str, solver: SolverConfig) -> None:
    """Speedup ratio of the collective model for N = 2..10 (log-scale data)."""
    rows = []
    for n in range(2, 11):
        params = models.NModeModelParams(n_parties=n, k_split=1, gamma=1.0)
        h = models.build_nmode(params)
        report = speedlimits.qsl_sep_bound(h, solver)
        rows.append(
            (n, report.ratio, models.nmode_speedup(n), report.qsl, report.qsl_sep_plus)
        )
    reports.write_csv(
        out_path,
        ["n", "ratio", "ratio_closed", "qsl", "qsl_sep_plus"],
        rows,
        metadata=[
            ("figure", "3"),
            ("model", "nmode"),
            ("scale", "log y"),
            ("seed", str(solver.seed)),
        ],
    )


def cmd_figures(args: argparse.Namespace) -> int:
    """Regenerate the reference figure data files into --out-dir."""
    options = _merged_options(args)
    solver = _solver_from(options)
    which = options.get("which") or [1, 2, 3]
    which = sorted({int(w) for w in which})
    bad = [w for w in which if w not in (1, 2, 3)]
    if bad:
        raise ConfigError(f"--which accepts 1, 2, 3; got {bad}")
    out_dir = options.get("out_dir") or "."
    samples = int(options.get("samples", 101))
    import os

    os.makedirs(out_dir, exist_ok=True)
    for w in which:
        path = os.path.join(out_dir, f"fig{w}.csv")
        if w == 1:
            _figure_one(path, solver, samples)
        elif w == 2:
            _figure_two(path, solver)
        else:
            _figure_three(path, solver)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_values(spec: str, integer: bool) -> list:
    """Comma list ('2,3,4') or inclusive range ('2:8')."""
    spec = spec.strip()
    try:
        if ":" in spec:
            lo, hi = spec.split(":")
            return list(range(int(lo), int(hi) + 1))
        items = [s for s in spec.split(",") if s.strip()]
        return [int(s) if integer else float(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --values {spec!r}") from exc


def _sweep_point(model: str, value, options: dict, solver: SolverConfig):
    if model == "swap":
        params = models.SwapModelParams(
            kappa=float(options.get("kappa", 1.0)), q=value
        )
        h, _ = models.build_swap(params)
        closed = math.sqrt(2.0)
    elif model == "qudit":
        params = models.QuditModelParams(
            d=int(value),
            e0=float(options.get("e0", 0.0)),
            e_perp=float(options.get("eperp", 1.0)),
        )
        h = models.build_qudit(params)
        closed = models.qudit_speedup(int(value))
    else:
        params = models.NModeModelParams(
            n_parties=int(value),
            k_split=min(int(options.get("k_split", 1)), int(value)),
            gamma=complex(
                float(options.get("gamma_re", 1.0)),
                float(options.get("gamma_im", 0.0)),
            ),
        )
        h = models.build_nmode(params)
        closed = models.nmode_speedup(int(value))
    report = speedlimits.qsl_sep_bound(h, solver)
    return (
        float(value),
        report.qsl,
        report.qsl_sep_plus,
        report.ratio,
        closed,
        float(report.converged),
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    """Tabulate speed limits over a model-parameter range, in input order."""
    options = _merged_options(args)
    model = options.get("model")
    if model not in _MODEL_NAMES:
        raise ConfigError(
            f"--model must be one of {', '.join(_MODEL_NAMES)}, got {model!r}"
        )
    if options.get("values") is None:
        raise ConfigError("sweep needs --values")
    values = _parse_values(str(options["values"]), integer=model != "swap")
    solver = _solver_from(options)
    jobs = int(options.get("jobs", 1))
    if jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {jobs}")
    if jobs == 1:
        rows = [_sweep_point(model, v, options, solver) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(
                pool.map(lambda v: _sweep_point(model, v, options, solver), values)
            )
    param_name = {"swap": "q_abs", "qudit": "d", "nmode": "n"}[model]
    all_converged = all(row[5] == 1.0 for row in rows)
    reports.write_csv(
        options.get("out") or "/dev/stdout",
        [param_name, "qsl", "qsl_sep_plus", "ratio", "ratio_closed", "converged"],
        rows,
        metadata=[("model", model), ("seed", str(solver.seed))],
    )
    return EXIT_OK if all_converged else EXIT_NO_CONVERGENCE


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", choices=_MODEL_NAMES, default=None)
    sub.add_argument("--kappa", type=float, default=None, help="swap coupling rate")
    sub.add_argument("--q", type=str, default=None, help="swap initial overlap (complex ok)")
    sub.add_argument("--d", type=int, default=None, help="qudit local dimension")
    sub.add_argument("--n", type=int, default=None, help="nmode party count")
    sub.add_argument("--k-split", dest="k_split", type=int, default=None)
    sub.add_argument("--gamma-re", dest="gamma_re", type=float, default=None)
    sub.add_argument("--gamma-im", dest="gamma_im", type=float, default=None)
    sub.add_argument("--e0", type=float, default=None, help="qudit ground energy")
    sub.add_argument("--eperp", type=float, default=None, help="qudit excited energy")
    sub.add_argument("--hbar", type=float, default=None)


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--starts", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--tol", type=float, default=None)
    sub.add_argument("--max-iters", dest="max_iters", type=int, default=None)


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="JSON config file")
    sub.add_argument("--out", default=None, help="output path (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsl-lab",
        description="Exact and separable quantum speed limits for multipartite models.",
    )
    parser.add_argument("--version", action="version", version=f"qsl-lab {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="speed limits for one model")
    _add_model_flags(compute)
    _add_solver_flags(compute)
    _add_common_flags(compute)
    compute.add_argument("--format", choices=("json", "csv"), default=None)
    compute.set_defaults(func=lambda a: cmd_compute(scenario_from_args(a))[1])

    evolve = commands.add_parser("evolve", help="trajectory table for one model")
    _add_model_flags(evolve)
    _add_solver_flags(evolve)
    _add_common_flags(evolve)
    evolve.add_argument("--dt", type=float, default=None, help="integrator step")
    evolve.add_argument("--t-max", dest="t_max", type=float, default=None)
    evolve.add_argument("--samples", type=int, default=None)
    evolve.set_defaults(func=lambda a: cmd_evolve(scenario_from_args(a)))

    witness = commands.add_parser("witness", help="two-time separability test")
    witness.add_argument("series", help="CSV file with header 't,expectation'")
    _add_model_flags(witness)
    _add_solver_flags(witness)
    _add_common_flags(witness)
    witness.add_argument("--l-inf", dest="l_inf", type=float, default=None,
                         help="spectral norm of the measured observable (default 1)")
    witness.add_argument("--qsl-sep-plus", dest="qsl_sep_plus", type=float, default=None,
                         help="separable bound; computed from --model when omitted")
    witness.add_argument("--cone-out", dest="cone_out", default=None,
                         help="also write the cone envelope CSV here")
    witness.set_defaults(func=cmd_witness)

    figures = commands.add_parser("figures", help="regenerate reference data files")
    figures.add_argument("--which", type=int, nargs="+", default=None,
                         help="subset of {1,2,3}; default all")
    figures.add_argument("--out-dir", dest="out_dir", default=None)
    figures.add_argument("--samples", type=int, default=None,
                         help="overlap grid size for figure 1")
    _add_solver_flags(figures)
    figures.add_argument("--config", default=None, help="JSON config file")
    figures.set_defaults(func=cmd_figures)

    sweep = commands.add_parser("sweep", help="speed limits over a parameter range")
    _add_model_flags(sweep)
    _add_solver_flags(sweep)
    _add_common_flags(sweep)
    sweep.add_argument("--values", default=None,
                       help="comma list (0.1,0.5) or inclusive int range (2:8)")
    sweep.add_argument("--jobs", type=int, default=None,
                       help="concurrent solver instances (default 1)")
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeriesFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QslLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
