"""Command-line front end for the harmonic-analysis toolkit.

Subcommands
-----------
lattice        shell points, shell counts, and ring partitions as CSV
kernel-coeffs  windowed-kernel coefficient tables as CSV
sum            partial-sum trajectories of torus fields as CSV
integral       partial integrals of compact fields, or transform decay scans
riesz          threshold probes of point-mass means over a radius grid
verify         run one lemma verification (or the whole campaign)
localize       localization experiments: series ratios or integral trends

Configuration comes from an optional ``key = value`` file with ``[scan]``
and ``[run]`` sections; command-line flags override file values, and
anything not set explicitly falls back to the documented defaults.  When
no scan key is set explicitly, ``verify`` lets each lemma run at its own
default geometry; explicit scan keys override the generic and the
localization geometry alike, so one ``--dimension``/``--seed`` pair pins
the whole campaign.

Every run writes a ``manifest.json`` (resolved configuration, package
version, seed) next to its artifacts, never writes outside the output
directory, and is deterministic: the same configuration produces
byte-identical files.  The output directory is ``--output`` when given,
else ``$SPHERSUM_OUTPUT_ROOT/<subcommand>``, else ``./sphersum-out/<subcommand>``.

Exit codes: 0 success, 1 computation failure, 2 usage or configuration
error, 3 verification verdict failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import itertools
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, csvio
from . import verify as vf
from .errors import (
    ConfigurationError,
    ParameterError,
    PreconditionError,
    ResourceError,
)
from .fields import SpectralField, random_field
from .integral import (
    CompactField,
    RieszSpec,
    annulus_bump_profile,
    partial_integral,
    riesz_mean,
    threshold_probe,
    windowed_kernel_transform,
)
from .kernels import build_kernel_coeffs
from .lattice import build_partition, build_shell_table, sphere_shell
from .sums import sum_trajectory
from .windows import WindowSpec, build_window

_SCAN_KEYS = (
    "dimension",
    "band",
    "shells",
    "exponents",
    "window_R",
    "window_r",
    "grid",
    "seed",
)
_RUN_KEYS = ("output", "threads", "lambda_max", "trials")

# lemmas whose handlers draw per-trial randomness and accept a trial count
_TRIAL_LEMMAS = frozenset(
    {"W2-identity", "sum-bound", "tevzadze", "localization-series", "MAX1-ratio"}
)

_RHO_STEP = 0.5
_RIESZ_GRID_SIZE = 36


@dataclasses.dataclass
class RunConfig:
    """Resolved run configuration; ``explicit`` records which keys the user
    set (by file or flag) as opposed to defaulted."""

    subcommand: str = ""
    selection: str = ""
    dimension: int = 2
    band: int = 24
    shells: int = 12
    exponents: tuple[int, ...] = (1, 2, 4)
    window_R: float = 2.5
    window_r: float = 0.5
    grid: int = 256
    seed: int = 20260816
    lambda_max: float = 512.0
    trials: int = 100
    output: str = ""
    threads: int = 0
    explicit: set = dataclasses.field(default_factory=set)

    def as_dict(self) -> dict:
        out = {}
        for key in (*_SCAN_KEYS, *_RUN_KEYS):
            value = getattr(self, key)
            out[key] = list(value) if isinstance(value, tuple) else value
        return out


# ---------------------------------------------------------------------------
# value parsing


def _parse_int_tuple(text) -> tuple[int, ...]:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigurationError(f"expected a comma-separated integer list, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigurationError(f"bad integer list {text!r}") from exc


def _parse_float_list(text) -> list[float]:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigurationError(f"expected a comma-separated number list, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigurationError(f"bad number list {text!r}") from exc


def _parse_vector(text, N: int, kind=float) -> tuple:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    try:
        values = tuple(kind(p) for p in parts)
    except ValueError as exc:
        raise ConfigurationError(f"bad coordinate vector {text!r}") from exc
    if len(values) != N:
        raise ConfigurationError(
            f"coordinate vector {text!r} has {len(values)} entries, expected {N}"
        )
    return values


_CONVERTERS = {
    "dimension": int,
    "band": int,
    "shells": int,
    "grid": int,
    "seed": int,
    "threads": int,
    "trials": int,
    "window_R": float,
    "window_r": float,
    "lambda_max": float,
    "exponents": _parse_int_tuple,
    "output": str,
}


def _convert(key: str, raw: str):
    try:
        return _CONVERTERS[key](raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from exc


# ---------------------------------------------------------------------------
# configuration assembly


def load_config_file(path) -> dict:
    """Read [scan]/[run] key = value settings; unknown keys are rejected."""
    file = Path(path)
    if not file.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # window_R / window_r are case-sensitive
    try:
        parser.read_string(file.read_text(encoding="utf-8"))
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse config file {path}: {exc}") from exc
    if parser.defaults():
        keys = ", ".join(sorted(parser.defaults()))
        raise ConfigurationError(f"keys outside [scan]/[run] are not allowed: {keys}")
    values: dict = {}
    for section in parser.sections():
        if section == "scan":
            allowed = set(_SCAN_KEYS)
        elif section == "run":
            allowed = set(_RUN_KEYS)
        else:
            raise ConfigurationError(
                f"unknown config section [{section}]; expected [scan] or [run]"
            )
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ConfigurationError(
                    f"unknown key {key!r} in [{section}]; allowed: {sorted(allowed)}"
                )
            values[key] = _convert(key, raw)
    return values


def _validate(config: RunConfig) -> None:
    if config.dimension < 1:
        raise ConfigurationError(f"dimension must be >= 1, got {config.dimension}")
    if config.band < 1:
        raise ConfigurationError(f"band must be >= 1, got {config.band}")
    if config.shells < 1:
        raise ConfigurationError(f"shells must be >= 1, got {config.shells}")
    if not config.exponents or any(l < 1 for l in config.exponents):
        raise ConfigurationError(
            f"exponents must be positive integers, got {config.exponents}"
        )
    if config.grid < 2 or config.grid & (config.grid - 1):
        raise ConfigurationError(f"grid size must be a power of two, got {config.grid}")
    if not 0.0 < config.window_r < config.window_R < math.pi:
        raise ConfigurationError(
            "window radii need 0 < r < R < pi, got "
            f"R = {config.window_R}, r = {config.window_r}"
        )
    if config.lambda_max <= 0.0:
        raise ConfigurationError(f"lambda_max must be positive, got {config.lambda_max}")
    if config.trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {config.trials}")
    if config.threads < 0:
        raise ConfigurationError(f"threads must be >= 0, got {config.threads}")


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by config-file keys, overridden by flags."""
    config = RunConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            setattr(config, key, value)
            config.explicit.add(key)
    for key in (*_SCAN_KEYS, *_RUN_KEYS):
        value = getattr(args, key, None)
        if value is None:
            continue
        setattr(config, key, _convert(key, value) if isinstance(value, str) else value)
        config.explicit.add(key)
    config.subcommand = args.subcommand
    config.selection = getattr(args, "lemma", "") or getattr(args, "target", "")
    _validate(config)
    return config


def resolved_scan(config: RunConfig, base: vf.ScanRange) -> vf.ScanRange | None:
    """The scan a run should use, or None when every scan key is defaulted
    (letting each lemma keep its own default geometry)."""
    kwargs: dict = {}
    if "dimension" in config.explicit:
        kwargs["N"] = config.dimension
    if "band" in config.explicit:
        kwargs["n_max"] = config.band
    if "shells" in config.explicit:
        kwargs["k_max"] = config.shells
    if "exponents" in config.explicit:
        kwargs["ls"] = config.exponents
    if "grid" in config.explicit:
        kwargs["M"] = config.grid
    if "seed" in config.explicit:
        kwargs["seed"] = config.seed
    if "window_R" in config.explicit or "window_r" in config.explicit:
        R = config.window_R if "window_R" in config.explicit else base.window[0]
        r = config.window_r if "window_r" in config.explicit else base.window[1]
        kwargs["window"] = (R, r)
    if not kwargs:
        return None
    return dataclasses.replace(base, **kwargs)


def resolve_output_dir(config: RunConfig) -> Path:
    if config.output:
        out = Path(config.output)
    else:
        root = os.environ.get("SPHERSUM_OUTPUT_ROOT", "")
        out = (Path(root) if root else Path("sphersum-out")) / config.subcommand
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, config: RunConfig, arguments: dict) -> None:
    csvio.write_json(
        out / "manifest.json",
        {
            "tool": "sphersum",
            "version": __version__,
            "subcommand": config.subcommand,
            "selection": config.selection,
            "seed": config.seed,
            "config": config.as_dict(),
            "arguments": arguments,
        },
    )


_THREAD_LIMITER = None


def _apply_thread_limit(threads: int) -> None:
    """Cap BLAS/FFT pools when asked; 0 keeps the libraries' own defaults
    (available parallelism)."""
    global _THREAD_LIMITER
    if threads <= 0:
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # limiting is best-effort; results do not depend on it
        return
    _THREAD_LIMITER = threadpool_limits(limits=threads)


# ---------------------------------------------------------------------------
# subcommand handlers


def _run_lattice(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    if args.shell is not None and args.shell < 0:
        raise ConfigurationError(f"--shell must be >= 0, got {args.shell}")
    max_shell = args.max_shell
    if max_shell is None:
        max_shell = args.shell if args.shell is not None else 25
    if max_shell < 0:
        raise ConfigurationError(f"--max-shell must be >= 0, got {max_shell}")
    arguments = {
        "shell": args.shell,
        "max_shell": max_shell,
        "center": args.center,
        "k": args.k,
    }
    _write_manifest(out, config, arguments)

    table = build_shell_table(N, max_shell)
    counts = table.counts()
    rows = [(N, j, int(c)) for j, c in enumerate(counts)]
    n = csvio.write_csv(
        out / "counts.csv",
        csvio.shell_count_columns(),
        rows,
        metadata={"N": N, "max_shell": max_shell},
    )
    print(f"counts.csv: {n} rows")

    if args.shell is not None:
        pts = sphere_shell(args.shell, N)
        rows = [(N, args.shell, *(int(c) for c in p)) for p in pts]
        n = csvio.write_csv(
            out / "shell.csv",
            csvio.shell_point_columns(N),
            rows,
            metadata={"N": N, "j": args.shell},
        )
        print(f"shell.csv: {n} rows")

    if (args.center is None) != (args.k is None):
        raise ConfigurationError("the partition listing needs both --center and --k")
    if args.center is not None:
        center = _parse_vector(args.center, N, kind=int)
        partition = build_partition(center, args.k, table=None)
        rows = [
            (N, *center, args.k, partition.bin_of(p), p, partition.tags[p])
            for p in partition.offsets()
        ]
        n = csvio.write_csv(
            out / "partitions.csv",
            csvio.partition_columns(N),
            rows,
            metadata={
                "N": N,
                "k": args.k,
                "degenerate": "yes" if partition.degenerate else "no",
            },
        )
        print(f"partitions.csv: {n} rows")
    return 0


def _run_kernel_coeffs(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    if args.j_max < 0:
        raise ConfigurationError(f"--j-max must be >= 0, got {args.j_max}")
    arguments = {"table": args.table, "j_max": args.j_max}
    _write_manifest(out, config, arguments)

    spec = WindowSpec(config.window_R, config.window_r, N)
    window = build_window(spec, config.grid)
    kc = build_kernel_coeffs(window, args.j_max, config.band)
    accessor = kc.ball_coeff if args.table == "ball" else kc.shell_coeff
    j_count = args.j_max + 2 if args.table == "ball" else args.j_max + 1

    rows = []
    for j in range(j_count):
        for n in itertools.product(range(-config.band, config.band + 1), repeat=N):
            value = accessor(j, n)
            rows.append(
                (
                    N,
                    config.window_R,
                    config.window_r,
                    config.grid,
                    j,
                    *n,
                    value.real,
                    value.imag,
                )
            )
    count = csvio.write_csv(
        out / f"{args.table}.csv",
        csvio.coeff_columns(N),
        rows,
        metadata={
            "N": N,
            "R": config.window_R,
            "r": config.window_r,
            "M": config.grid,
            "table": args.table,
            "j_max": args.j_max,
        },
    )
    print(f"{args.table}.csv: {count} rows")
    return 0


def _delta_field(N: int, mode: tuple[int, ...]) -> SpectralField:
    band = max(1, max(abs(m) for m in mode))
    coeffs = np.zeros((2 * band + 1,) * N, dtype=complex)
    coeffs[tuple(m + band for m in mode)] = 1.0
    return SpectralField(N, band, coeffs)


def _run_sum(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    lambdas = sorted(set(_parse_float_list(args.lambdas or "4,8,16")))
    if any(l <= 0 for l in lambdas):
        raise ConfigurationError(f"--lambda values must be positive, got {args.lambdas!r}")
    probe_texts = args.probe if args.probe else [",".join(["0"] * N)]
    probes = np.asarray([_parse_vector(t, N) for t in probe_texts], dtype=float)

    if args.field == "delta":
        mode_text = args.mode if args.mode else ",".join(["1"] + ["0"] * (N - 1))
        mode = _parse_vector(mode_text, N, kind=int)
        fields = [_delta_field(N, mode)]
        field_note = {"mode": list(mode)}
    elif args.field == "random":
        trials = config.trials if "trials" in config.explicit else 1
        rng = np.random.default_rng(config.seed)
        fields = [random_field(N, config.band, rng) for _ in range(trials)]
        field_note = {"band": config.band, "trials": trials}
    else:  # smooth
        scan = resolved_scan(config, vf.LOCALIZATION_SCAN)
        fields = [vf.smooth_annulus_fixture(scan)]
        field_note = {"band": fields[0].band}

    arguments = {
        "field": args.field,
        "lambdas": lambdas,
        "probes": [list(p) for p in probes],
        **field_note,
    }
    _write_manifest(out, config, arguments)

    rows = []
    for trial, field in enumerate(fields):
        trajectory = sum_trajectory(field, lambdas, probes)
        for li, lam in enumerate(lambdas):
            for pi in range(probes.shape[0]):
                v = complex(trajectory[li, pi])
                rows.append(
                    (trial, lam, *(float(c) for c in probes[pi]), v.real, v.imag, abs(v))
                )
    count = csvio.write_csv(
        out / "trajectory.csv",
        csvio.trajectory_columns(N),
        rows,
        metadata={"N": N, "field": args.field},
    )
    print(f"trajectory.csv: {count} rows")
    print(f"max |S_lambda| over trajectory: {max(r[-1] for r in rows)!r}")
    return 0


def _run_integral(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    if args.decay_scan:
        return _run_decay_scan(config, args, out)

    if not 0.0 < args.inner < args.outer:
        raise ConfigurationError(
            f"need 0 < inner < outer, got inner = {args.inner}, outer = {args.outer}"
        )
    if args.spacing <= 0.0:
        raise ConfigurationError(f"--spacing must be positive, got {args.spacing}")
    lambdas = sorted(set(_parse_float_list(args.lambdas or "5,10,20")))
    if any(l <= 0 for l in lambdas):
        raise ConfigurationError(f"--lambda values must be positive, got {args.lambdas!r}")
    probe_texts = args.probe if args.probe else [",".join(["0"] * N)]
    probes = np.asarray([_parse_vector(t, N) for t in probe_texts], dtype=float)

    arguments = {
        "inner": args.inner,
        "outer": args.outer,
        "spacing": args.spacing,
        "lambdas": lambdas,
        "probes": [list(p) for p in probes],
    }
    _write_manifest(out, config, arguments)

    bump = annulus_bump_profile(args.inner, args.outer)
    field = CompactField.from_profile(
        N,
        args.inner,
        args.outer,
        args.spacing,
        lambda pts: bump(np.linalg.norm(pts, axis=-1)),
    )
    rows = []
    for lam in lambdas:
        values = partial_integral(field, lam, probes)
        for pi in range(probes.shape[0]):
            v = complex(values[pi])
            rows.append((0, lam, *(float(c) for c in probes[pi]), v.real, v.imag, abs(v)))
    count = csvio.write_csv(
        out / "trajectory.csv",
        csvio.trajectory_columns(N),
        rows,
        metadata={
            "N": N,
            "inner": args.inner,
            "outer": args.outer,
            "spacing": args.spacing,
        },
    )
    print(f"trajectory.csv: {count} rows")
    return 0


def _run_decay_scan(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    window = vf.FT_WINDOW
    lambdas = sorted(set(_parse_float_list(args.lambdas or "4,8")))
    if any(l <= 0 for l in lambdas):
        raise ConfigurationError(f"--lambda values must be positive, got {lambdas!r}")

    arguments = {
        "decay_scan": True,
        "lambdas": lambdas,
        "exponents": list(config.exponents),
        "rho_step": _RHO_STEP,
        "window": {
            "probe_radius": window.probe_radius,
            "clear_radius": window.clear_radius,
            "support_radius": window.support_radius,
            "rolloff": window.rolloff,
        },
    }
    _write_manifest(out, config, arguments)

    rows = []
    for lam in lambdas:
        reach = lam + window.support_end
        steps = int(round(reach / _RHO_STEP)) + 1
        for i in range(steps):
            rho = i * _RHO_STEP
            eta = np.zeros(N)
            eta[0] = rho
            value = abs(windowed_kernel_transform(lam, eta, window))
            for l in config.exponents:
                weighted = value * (1.0 + abs(rho - lam)) ** l
                rows.append((N, lam, rho, l, weighted))
    count = csvio.write_csv(
        out / "decay.csv",
        csvio.decay_columns(),
        rows,
        metadata={
            "N": N,
            "window_probe": window.probe_radius,
            "window_clear": window.clear_radius,
            "window_support": window.support_radius,
            "window_rolloff": window.rolloff,
            "rho_step": _RHO_STEP,
        },
    )
    print(f"decay.csv: {count} rows")
    return 0


def _run_riesz(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    N = config.dimension
    orders = list(dict.fromkeys(_parse_float_list(args.orders)))
    sobolev = args.sobolev if args.sobolev is not None else N / 2.0
    alpha_text = args.alpha if args.alpha else ",".join(["0"] * N)
    alpha = _parse_vector(alpha_text, N, kind=int)
    point_text = args.point if args.point else ",".join(["0.5"] + ["0"] * (N - 1))
    point = _parse_vector(point_text, N)
    lambdas = np.geomspace(4.0, config.lambda_max, _RIESZ_GRID_SIZE)

    arguments = {
        "orders": orders,
        "sobolev": sobolev,
        "alpha": list(alpha),
        "point": list(point),
        "lambda_grid": [float(l) for l in lambdas],
    }
    _write_manifest(out, config, arguments)

    rows = []
    metadata = {"N": N, "sobolev": sobolev, "alpha": csvio.format_multi_index(alpha)}
    x = np.asarray(point, dtype=float)
    for s in orders:
        spec = RieszSpec(order=s, sobolev=sobolev, alpha=alpha)
        report = threshold_probe(spec, x, lambdas)
        metadata[f"classification[{format(s, 'g')}]"] = report.classification
        metadata[f"slope[{format(s, 'g')}]"] = report.slope
        print(f"s = {format(s, 'g')}: {report.classification} (slope {report.slope:+.3f})")
        for i, lam in enumerate(lambdas):
            v = riesz_mean(spec, s, float(lam), x)
            rows.append(
                (
                    N,
                    s,
                    csvio.format_multi_index(alpha),
                    float(lam),
                    *point,
                    v.real,
                    v.imag,
                    float(report.values[i]),
                    float(report.envelope[i]),
                )
            )
    metadata["membership_threshold"] = N / 2.0 + sum(alpha)
    count = csvio.write_csv(out / "probes.csv", csvio.probe_columns(N), rows, metadata=metadata)
    print(f"probes.csv: {count} rows")
    return 0


def _run_verify(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    if args.lemma != "all" and args.lemma not in vf.LEMMA_CLAIMS:
        known = ", ".join(vf.LEMMA_CLAIMS)
        raise ParameterError(f"unknown lemma id {args.lemma!r}; choose 'all' or one of: {known}")
    lemmas = list(vf.LEMMA_CLAIMS) if args.lemma == "all" else [args.lemma]

    arguments = {"lemma": args.lemma, "lemmas": lemmas}
    _write_manifest(out, config, arguments)

    generic = resolved_scan(config, vf.DEFAULT_SCAN)
    localized = resolved_scan(config, vf.LOCALIZATION_SCAN)
    reports = []
    for lemma in lemmas:
        scan = (
            localized
            if vf.default_scan_for(lemma) is vf.LOCALIZATION_SCAN
            else generic
        )
        options = {}
        if "trials" in config.explicit and lemma in _TRIAL_LEMMAS:
            options["trials"] = config.trials
        report = vf.verify_lemma(lemma, scan, **options)
        reports.append(report)
        print(f"{lemma}: {report.verdict}")
    passed = vf.campaign_passed(reports)
    csvio.write_json(
        out / "verdicts.json",
        {
            "schema": vf.SCHEMA_VERSION,
            "passed": passed,
            "reports": [report.to_dict() for report in reports],
        },
    )
    print(f"campaign: {'pass' if passed else 'fail'} ({len(reports)} lemmas)")
    return 0 if passed else 3


def _run_localize(config: RunConfig, args: argparse.Namespace, out: Path) -> int:
    if args.target == "series":
        base = vf.LOCALIZATION_SCAN
        scan = resolved_scan(config, base)
        effective = scan if scan is not None else base
        arguments = {"target": "series", "trials": config.trials}
        _write_manifest(out, config, arguments)

        report = vf.run_localization_series(scan, trials=config.trials)
        lambdas, points, values = vf.series_trend_trace(scan)
        rows = []
        for li, lam in enumerate(lambdas):
            for pi in range(points.shape[0]):
                v = complex(values[li, pi])
                rows.append(
                    (
                        0,
                        float(lam),
                        *(float(c) for c in points[pi]),
                        v.real,
                        v.imag,
                        abs(v),
                    )
                )
        count = csvio.write_csv(
            out / "trend.csv",
            csvio.trajectory_columns(effective.N),
            rows,
            metadata={"N": effective.N, "fixture": "smooth-annulus"},
        )
        print(f"trend.csv: {count} rows")

        ratio_rows = []
        for band_row in report.details["bands"]:
            for trial, ratio in enumerate(band_row["ratios"]):
                ratio_rows.append((effective.N, band_row["band"], trial, ratio))
        count = csvio.write_csv(
            out / "ratios.csv",
            csvio.ratio_columns(),
            ratio_rows,
            metadata={"N": effective.N, "trials": config.trials},
        )
        print(f"ratios.csv: {count} rows")
    else:
        base = vf.DEFAULT_SCAN
        scan = resolved_scan(config, base)
        effective = scan if scan is not None else base
        arguments = {"target": "integral"}
        _write_manifest(out, config, arguments)

        report = vf.run_localization_integral(scan)
        lambdas, radii, values = vf.integral_trend_trace(scan)
        rows = []
        pad = [0.0] * (effective.N - 1)
        for li, lam in enumerate(lambdas):
            for ri, radius in enumerate(radii):
                value = float(values[li, ri])
                rows.append((0, float(lam), float(radius), *pad, value, 0.0, abs(value)))
        count = csvio.write_csv(
            out / "trend.csv",
            csvio.trajectory_columns(effective.N),
            rows,
            metadata={"N": effective.N, "fixture": "annulus-bump", "x1": "radial distance"},
        )
        print(f"trend.csv: {count} rows")

    csvio.write_json(
        out / "verdict.json",
        {"schema": vf.SCHEMA_VERSION, "report": report.to_dict()},
    )
    print(f"{report.lemma}: {report.verdict}")
    return 0 if report.passed else 3


_SUBCOMMANDS = {
    "lattice": _run_lattice,
    "kernel-coeffs": _run_kernel_coeffs,
    "sum": _run_sum,
    "integral": _run_integral,
    "riesz": _run_riesz,
    "verify": _run_verify,
    "localize": _run_localize,
}


# ---------------------------------------------------------------------------
# argument parsing


def _shared_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("shared options")
    g.add_argument("--config", metavar="FILE", help="key = value file with [scan]/[run] sections")
    g.add_argument("--dimension", type=int, help="ambient dimension N (default 2)")
    g.add_argument("--band", type=int, help="mode box half-width (default 24)")
    g.add_argument("--shells", type=int, help="largest ring index k (default 12)")
    g.add_argument("--exponents", help="decay exponents, e.g. 1,2,4")
    g.add_argument("--window-R", dest="window_R", type=float, help="window support radius")
    g.add_argument("--window-r", dest="window_r", type=float, help="window probe radius")
    g.add_argument("--grid", type=int, help="samples per axis, power of two (default 256)")
    g.add_argument("--seed", type=int, help="random seed (default 20260816)")
    g.add_argument("--lambda-max", dest="lambda_max", type=float, help="largest radius for probes")
    g.add_argument("--trials", type=int, help="trial count for randomized runs")
    g.add_argument("--output", help="output directory (default $SPHERSUM_OUTPUT_ROOT/<cmd> or ./sphersum-out/<cmd>)")
    g.add_argument("--threads", type=int, help="cap numeric thread pools (0 = library default)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphersum",
        description="Partial sums and integrals of multiple Fourier series, "
        "windowed-kernel tables, and an empirical lemma-verification campaign.",
    )
    parser.add_argument("--version", action="version", version=f"sphersum {__version__}")
    common = _shared_options()
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

    p = sub.add_parser("lattice", parents=[common], help="shell points, counts, and ring partitions")
    p.add_argument("--shell", type=int, help="list the points of this squared-norm shell")
    p.add_argument("--max-shell", dest="max_shell", type=int, help="largest squared norm in counts.csv")
    p.add_argument("--center", help="partition center, e.g. 3,1")
    p.add_argument("--k", type=int, help="partition ring index")

    p = sub.add_parser("kernel-coeffs", parents=[common], help="windowed-kernel coefficient tables")
    p.add_argument("--table", choices=("ball", "shell"), default="shell", help="which table to dump")
    p.add_argument("--j-max", dest="j_max", type=int, default=9, help="largest shell index (default 9)")

    p = sub.add_parser("sum", parents=[common], help="partial-sum trajectories of torus fields")
    p.add_argument("--field", choices=("delta", "random", "smooth"), default="delta")
    p.add_argument("--mode", help="mode of the delta field, e.g. 1,0")
    p.add_argument("--lambda", dest="lambdas", help="comma-separated radii (default 4,8,16)")
    p.add_argument("--probe", action="append", help="evaluation point, repeatable (default origin)")

    p = sub.add_parser("integral", parents=[common], help="partial integrals of compact fields")
    p.add_argument("--inner", type=float, default=1.0, help="annulus inner radius")
    p.add_argument("--outer", type=float, default=2.0, help="annulus outer radius")
    p.add_argument("--spacing", type=float, default=0.02, help="sample grid spacing")
    p.add_argument("--lambda", dest="lambdas", help="comma-separated radii (default 5,10,20; decay scans 4,8)")
    p.add_argument("--probe", action="append", help="evaluation point, repeatable (default origin)")
    p.add_argument(
        "--decay-scan",
        dest="decay_scan",
        action="store_true",
        help="emit the windowed-transform decay table instead of a trajectory",
    )

    p = sub.add_parser("riesz", parents=[common], help="threshold probes of point-mass means")
    p.add_argument("--orders", default="0,2", help="comma-separated mean orders s")
    p.add_argument("--sobolev", type=float, help="Sobolev index (default N/2)")
    p.add_argument("--alpha", help="derivative multi-index, e.g. 0,0")
    p.add_argument("--point", help="evaluation point (default 0.5,0,...)")

    p = sub.add_parser("verify", parents=[common], help="run lemma verifications")
    p.add_argument("lemma", help="lemma id or 'all'")

    p = sub.add_parser("localize", parents=[common], help="localization experiments")
    p.add_argument("target", choices=("series", "integral"), help="which experiment to run")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        _apply_thread_limit(config.threads)
        out = resolve_output_dir(config)
        code = _SUBCOMMANDS[config.subcommand](config, args, out)
        print(f"sphersum: outputs in {out}", file=sys.stderr)
        return code
    except ConfigurationError as exc:
        print(f"sphersum: configuration error: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"sphersum: parameter error: {exc}", file=sys.stderr)
        return 2
    except (ResourceError, PreconditionError) as exc:
        print(f"sphersum: computation failed: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # computation failures map to exit code 1
        print(f"sphersum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
