"""Command-line interface: run, sweep, transpile.

Angles cross this boundary in units of pi (e.g. ``--theta0 0.575`` means
0.575*pi radians); the library itself works in radians throughout.  Exit
codes: 0 success, 2 usage/configuration errors, 3 runtime failures.  All
outputs are deterministic: the same configuration and seed produce
byte-identical files.

Noisy runs sample the logical circuit under the arity-keyed noise model;
transpilation (basis decomposition + routing) feeds the reported fidelity
estimate.  Mitigated results unmix the sampled counts with the device's
exact confusion matrix.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .analysis import eta_from_counts, gamma_from_counts, run_statistics
from .circuit import CircuitError, simulate_ideal
from .experiments import ExperimentSpec, chain_angles_for_sweep, eta_general, gamma_closed
from .mitigation import exact_confusion_matrix, mitigate
from .noise import DeviceModel, device_preset, ideal_counts, load_device, simulate_noisy
from .qasm import QasmError, emit, parse
from .transpile import estimate_fidelity, transpile

CSV_COLUMNS = (
    "experiment", "N", "theta_over_pi", "theta0_over_pi", "theta1_over_pi",
    "shots", "seed", "observable", "value", "theory", "std_dev", "device",
    "mitigated",
)


class ConfigError(ValueError):
    """Bad combination of flags/config-file values."""


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    return doc


def _merged(args: argparse.Namespace, config: dict, key: str, default=None):
    """Explicit flag > config file > default."""
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in config and config[key] is not None:
        return config[key]
    return default


def _parse_angle_list(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) * np.pi for v in text)
    try:
        return tuple(float(v) * np.pi for v in str(text).split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad angle list {text!r}: {exc}") from exc


def _resolve_device(label: str) -> DeviceModel | None:
    """'ideal' -> None; else a preset name or a calibration JSON path."""
    if label is None or label == "ideal":
        return None
    try:
        return device_preset(label)
    except KeyError:
        pass
    if os.path.exists(label) or label.lstrip().startswith("{"):
        try:
            return load_device(label)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(
        f"device {label!r} is neither 'ideal', a preset, nor a calibration file"
    )


def _experiment_from(args: argparse.Namespace, config: dict) -> ExperimentSpec:
    kind = _merged(args, config, "experiment")
    if kind is None:
        raise ConfigError("an experiment is required (--experiment or config file)")
    kind = str(kind)
    try:
        if kind == "eraser":
            return ExperimentSpec("eraser", erase=bool(_merged(args, config, "erase", True)))
        if kind == "bomb":
            return ExperimentSpec("bomb", present=bool(_merged(args, config, "bomb", True)))
        if kind == "general-bomb":
            angles = _merged(args, config, "angles")
            if angles is None:
                raise ConfigError("general-bomb requires --angles (units of pi)")
            return ExperimentSpec("general-bomb", angles=_parse_angle_list(angles))
        if kind == "hardy":
            theta0 = _merged(args, config, "theta0")
            theta1 = _merged(args, config, "theta1")
            if theta0 is None or theta1 is None:
                raise ConfigError("hardy requires --theta0 and --theta1 (units of pi)")
            return ExperimentSpec(
                "hardy", theta0=float(theta0) * np.pi, theta1=float(theta1) * np.pi
            )
        raise ConfigError(f"unknown experiment {kind!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def _observable_value(spec: ExperimentSpec, dist) -> float | dict:
    """Extract this experiment's observable from a distribution/counts."""
    name = spec.observable()
    if name == "distribution":
        if hasattr(dist, "probabilities"):
            return dist.probabilities()
        total = sum(dist.values())
        return {k: v / total for k, v in sorted(dist.items())}
    if name == "eta":
        labeling = "single-stage" if spec.kind == "bomb" else "multi-stage"
        return eta_from_counts(dist, labeling=labeling)
    return gamma_from_counts(dist)


def execute_run(
    spec: ExperimentSpec,
    device: DeviceModel | None,
    device_label: str,
    shots: int,
    seed: int,
    mitigate_flag: bool,
    exact: bool,
) -> dict:
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise ConfigError(f"seed must be >= 0, got {seed}")
    if mitigate_flag and device is None:
        raise ConfigError("--mitigate needs a noisy device")

    circuit = spec.build()
    doc: dict = {
        "experiment": spec.kind,
        "observable": spec.observable(),
        "device": device_label,
        "seed": seed,
        "exact": bool(exact),
        "theory": spec.theory(),
        "parameters": {},
    }
    if spec.kind == "eraser":
        doc["parameters"]["erase"] = spec.erase
    elif spec.kind == "bomb":
        doc["parameters"]["present"] = spec.present
    elif spec.kind == "general-bomb":
        doc["parameters"]["angles_over_pi"] = [t / np.pi for t in spec.angles]
    else:
        doc["parameters"]["theta0_over_pi"] = spec.theta0 / np.pi
        doc["parameters"]["theta1_over_pi"] = spec.theta1 / np.pi

    if device is not None:
        transpiled = transpile(circuit, device)
        fidelity, error = estimate_fidelity(transpiled, device)
        doc["fidelity_estimate"] = fidelity
        doc["error_estimate"] = error
        doc["swap_count"] = transpiled.swap_count
    else:
        doc["fidelity_estimate"] = 1.0
        doc["error_estimate"] = 0.0

    if exact:
        state = simulate_ideal(circuit)
        dist = {k: float(v) for k, v in state.probability_dict().items()}
        doc["shots"] = None
        doc["value"] = _observable_value(spec, dist)
        doc["probabilities"] = dict(sorted(dist.items()))
        return doc

    doc["shots"] = shots
    if device is None:
        counts = ideal_counts(circuit, shots, seed)
    else:
        counts = simulate_noisy(circuit, device, shots, seed)
    doc["counts"] = dict(sorted(counts.counts.items()))
    doc["value"] = _observable_value(spec, counts)

    if mitigate_flag:
        confusion = exact_confusion_matrix(device, len(circuit.measured_qubits))
        corrected = mitigate(counts, confusion)
        doc["mitigated_probabilities"] = dict(sorted(corrected.items()))
        doc["mitigated_value"] = _observable_value(spec, corrected)
    return doc


def _run_rows(doc: dict, spec: ExperimentSpec) -> list[dict]:
    """Flatten a run document into CSV rows (one per observable/provenance)."""
    base = {
        "experiment": doc["experiment"],
        "N": {"eraser": 2, "bomb": 2, "general-bomb": len(spec.angles), "hardy": 3}[spec.kind],
        "theta_over_pi": "",
        "theta0_over_pi": doc["parameters"].get("theta0_over_pi", ""),
        "theta1_over_pi": doc["parameters"].get("theta1_over_pi", ""),
        "shots": doc["shots"] if doc["shots"] is not None else "",
        "seed": "" if doc["exact"] else doc["seed"],
        "std_dev": "",
        "device": doc["device"],
    }
    rows = []
    theory = doc["theory"]
    if spec.observable() == "distribution":
        value = doc["value"]
        keys = sorted(set(value) | set(theory or {}))
        for key in keys:
            rows.append({**base, "observable": f"p_{key}", "value": value.get(key, 0.0),
                         "theory": (theory or {}).get(key, ""), "mitigated": "false"})
        if "mitigated_probabilities" in doc:
            for key in keys:
                rows.append({**base, "observable": f"p_{key}",
                             "value": doc["mitigated_probabilities"].get(key, 0.0),
                             "theory": (theory or {}).get(key, ""), "mitigated": "true"})
    else:
        rows.append({**base, "observable": doc["observable"], "value": doc["value"],
                     "theory": theory if theory is not None else "", "mitigated": "false"})
        if "mitigated_value" in doc:
            rows.append({**base, "observable": doc["observable"], "value": doc["mitigated_value"],
                         "theory": theory if theory is not None else "", "mitigated": "true"})
    return rows


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive [start, stop] walk in pi units, cleaned of float dust."""
    if step <= 0:
        raise ConfigError(f"theta-step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"theta range is empty: [{start}, {stop}]")
    points = []
    k = 0
    while start + k * step <= stop + 1e-9:
        points.append(round(start + k * step, 10))
        k += 1
    return points


def _derived_seed(base: int, *context: int) -> int:
    """Deterministic per-row seed; printed in the CSV so rows self-reproduce."""
    return int(np.random.SeedSequence((base, *context)).generate_state(1)[0])


def _sweep_point_rows(
    spec: ExperimentSpec,
    point: dict,
    device: DeviceModel | None,
    device_label: str,
    shots: int,
    base_seed: int,
    point_index: int,
    repeats: int,
    mitigate_flag: bool,
) -> list[dict]:
    labeling = "multi-stage" if spec.kind == "general-bomb" else None
    circuit = spec.build()
    state = simulate_ideal(circuit)
    exact_dist = state.probability_dict()
    if spec.kind == "general-bomb":
        exact_value = eta_from_counts(exact_dist, labeling=labeling)
        observable = "eta"
    else:
        exact_value = gamma_from_counts(exact_dist)
        observable = "gamma"
    theory = spec.theory()

    def row(value, shots_cell, seed_cell, dev_cell, mitigated, std=""):
        return {**point, "experiment": spec.kind, "shots": shots_cell,
                "seed": seed_cell, "observable": observable, "value": value,
                "theory": theory, "std_dev": std, "device": dev_cell,
                "mitigated": mitigated}

    rows = [row(exact_value, "", "", "ideal", "false")]
    if device is None:
        return rows

    noisy_rows, mitig_rows = [], []
    noisy_vals, mitig_vals = [], []
    confusion = exact_confusion_matrix(device, circuit.num_qubits) if mitigate_flag else None
    for r in range(repeats):
        seed_r = _derived_seed(base_seed, point_index, r)
        counts = simulate_noisy(circuit, device, shots, seed_r)
        value = (eta_from_counts(counts, labeling=labeling)
                 if labeling else gamma_from_counts(counts))
        noisy_vals.append(value)
        noisy_rows.append(row(value, shots, seed_r, device_label, "false"))
        if mitigate_flag:
            corrected = mitigate(counts, confusion)
            mvalue = (eta_from_counts(corrected, labeling=labeling)
                      if labeling else gamma_from_counts(corrected))
            mitig_vals.append(mvalue)
            mitig_rows.append(row(mvalue, shots, seed_r, device_label, "true"))

    def stamp_std(rows_list, vals):
        std = run_statistics(vals, 1.0).std_dev if vals else ""
        for entry in rows_list:
            entry["std_dev"] = std

    stamp_std(noisy_rows, noisy_vals)
    stamp_std(mitig_rows, mitig_vals)
    return rows + noisy_rows + mitig_rows


def execute_sweep(
    experiment: str,
    n_values: tuple[int, ...],
    theta_grid: list[float],
    hardy_grid: str,
    device: DeviceModel | None,
    device_label: str,
    shots: int,
    seed: int,
    repeats: int,
    mitigate_flag: bool,
) -> list[dict]:
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}")
    if mitigate_flag and device is None:
        raise ConfigError("--mitigate needs a noisy device")
    rows: list[dict] = []
    index = 0
    if experiment == "general-bomb":
        if not n_values:
            raise ConfigError("general-bomb sweep needs --n-values")
        for n in n_values:
            for t in theta_grid:
                if not 0.0 < t < 1.0:
                    raise ConfigError(
                        f"theta/pi must lie strictly inside (0, 1), got {t}")
                spec = ExperimentSpec(
                    "general-bomb", angles=chain_angles_for_sweep(t * np.pi, n))
                point = {"N": n, "theta_over_pi": t,
                         "theta0_over_pi": "", "theta1_over_pi": ""}
                rows.extend(_sweep_point_rows(
                    spec, point, device, device_label, shots, seed, index,
                    repeats, mitigate_flag))
                index += 1
        return rows
    if experiment == "hardy":
        pairs = ([(t, t) for t in theta_grid] if hardy_grid == "diagonal"
                 else [(a, b) for a in theta_grid for b in theta_grid])
        for t0, t1 in pairs:
            spec = ExperimentSpec("hardy", theta0=t0 * np.pi, theta1=t1 * np.pi)
            point = {"N": 3, "theta_over_pi": t0 if hardy_grid == "diagonal" else "",
                     "theta0_over_pi": t0, "theta1_over_pi": t1}
            rows.extend(_sweep_point_rows(
                spec, point, device, device_label, shots, seed, index,
                repeats, mitigate_flag))
            index += 1
        return rows
    raise ConfigError(f"sweep supports general-bomb and hardy, not {experiment!r}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _csv_cell(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # plain-float repr; numpy scalars would otherwise print np.float64(...)
        return repr(float(value))
    return str(value)


def _rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for entry in rows:
        lines.append(",".join(_csv_cell(entry.get(col, "")) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _write_text(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommand drivers
# ---------------------------------------------------------------------------

def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config)
    spec = _experiment_from(args, config)
    device_label = str(_merged(args, config, "device", "ideal"))
    device = _resolve_device(device_label)
    if device is not None:
        device_label = device.name
    doc = execute_run(
        spec,
        device,
        device_label,
        shots=int(_merged(args, config, "shots", 8192)),
        seed=int(_merged(args, config, "seed", 0)),
        mitigate_flag=bool(_merged(args, config, "mitigate", False)),
        exact=bool(_merged(args, config, "exact", False)),
    )
    fmt = str(_merged(args, config, "format", "json"))
    if fmt == "json":
        text = _dump_json(doc)
    elif fmt == "csv":
        text = _rows_to_csv(_run_rows(doc, spec))
    else:
        raise ConfigError(f"unknown format {fmt!r} (expected json or csv)")
    _write_text(text, _merged(args, config, "output"))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config)
    experiment = _merged(args, config, "experiment")
    if experiment is None:
        raise ConfigError("a sweep experiment is required (--experiment)")
    n_values = _merged(args, config, "n_values", "")
    if isinstance(n_values, str):
        n_values = tuple(int(v) for v in n_values.split(",") if v.strip())
    else:
        n_values = tuple(int(v) for v in n_values)
    start = _merged(args, config, "theta_start")
    stop = _merged(args, config, "theta_stop")
    step = _merged(args, config, "theta_step")
    if start is None or stop is None or step is None:
        raise ConfigError("sweep needs --theta-start, --theta-stop, --theta-step (units of pi)")
    device_label = str(_merged(args, config, "device", "ideal"))
    device = _resolve_device(device_label)
    if device is not None:
        device_label = device.name
    rows = execute_sweep(
        str(experiment),
        n_values,
        _grid(float(start), float(stop), float(step)),
        str(_merged(args, config, "hardy_grid", "diagonal")),
        device,
        device_label,
        shots=int(_merged(args, config, "shots", 8192)),
        seed=int(_merged(args, config, "seed", 0)),
        repeats=int(_merged(args, config, "repeats", 1)),
        mitigate_flag=bool(_merged(args, config, "mitigate", False)),
    )
    fmt = str(_merged(args, config, "format", "csv"))
    if fmt == "csv":
        text = _rows_to_csv(rows)
    elif fmt == "json":
        text = _dump_json({"rows": rows})
    else:
        raise ConfigError(f"unknown format {fmt!r} (expected csv or json)")
    _write_text(text, _merged(args, config, "output"))
    return 0


def _cmd_transpile(args: argparse.Namespace) -> int:
    if not os.path.exists(args.input):
        raise ConfigError(f"input file not found: {args.input}")
    with open(args.input, encoding="utf-8") as fh:
        source = fh.read()
    circuit = parse(source)  # QasmError -> exit 2 in main()
    device = _resolve_device(args.device)
    if device is None:
        raise ConfigError("transpile requires a real device (--device PRESET|FILE)")
    layout = None
    if args.layout:
        layout = tuple(int(v) for v in args.layout.split(","))
    result = transpile(circuit, device, initial_layout=layout, fuse=args.fuse)
    fidelity, error = estimate_fidelity(result, device)
    counts = result.circuit.count_gates()
    report = [
        f"device: {device.name}",
        f"qubits: logical {circuit.num_qubits} -> physical {result.circuit.num_qubits}",
        "gate counts: " + (", ".join(f"{name} x{counts[name]}"
                                     for name in sorted(counts)) or "none"),
        f"swaps inserted: {result.swap_count}",
        f"initial layout: {list(result.initial_layout)}",
        f"final layout: {list(result.final_layout)}",
        f"estimated fidelity: {fidelity:.6f}",
        f"estimated error: {error:.6f}",
    ]
    sys.stdout.write("\n".join(report) + "\n")
    text = emit(result.circuit)
    if args.output:
        _write_text(text, args.output)
    else:
        sys.stdout.write("\n" + text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzsim",
        description="Simulate interferometer-style experiments on noisy virtual devices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--device", help="'ideal' (default), a preset name, or a calibration JSON file")
        p.add_argument("--shots", type=int, help="samples per execution (default 8192)")
        p.add_argument("--seed", type=int, help="base RNG seed (default 0)")
        p.add_argument("--mitigate", action="store_true", default=None,
                       help="also report readout-mitigated results")
        p.add_argument("--output", help="write to this file instead of stdout")

    run_p = sub.add_parser("run", help="execute one experiment")
    add_common(run_p)
    run_p.add_argument("--experiment", choices=["eraser", "bomb", "general-bomb", "hardy"])
    run_p.add_argument("--erase", action=argparse.BooleanOptionalAction, default=None,
                       help="eraser: include the erasing H on the marker qubit")
    run_p.add_argument("--bomb", action=argparse.BooleanOptionalAction, default=None,
                       help="bomb: whether the probe object is present")
    run_p.add_argument("--angles", help="general-bomb: comma list in units of pi, summing to 1")
    run_p.add_argument("--theta0", type=float, help="hardy: first angle / pi")
    run_p.add_argument("--theta1", type=float, help="hardy: second angle / pi")
    run_p.add_argument("--exact", action="store_true", default=None,
                       help="use exact probabilities instead of sampling")
    run_p.add_argument("--format", choices=["json", "csv"], help="output format (default json)")
    run_p.set_defaults(handler=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="scan an experiment over a parameter grid")
    add_common(sweep_p)
    sweep_p.add_argument("--experiment", choices=["general-bomb", "hardy"])
    sweep_p.add_argument("--n-values", help="general-bomb: comma list of chain lengths")
    sweep_p.add_argument("--theta-start", type=float, help="grid start, units of pi")
    sweep_p.add_argument("--theta-stop", type=float, help="grid stop (inclusive), units of pi")
    sweep_p.add_argument("--theta-step", type=float, help="grid step, units of pi")
    sweep_p.add_argument("--hardy-grid", choices=["diagonal", "full"],
                         help="hardy: theta0=theta1 line or full 2-D grid")
    sweep_p.add_argument("--repeats", type=int, help="sampled repetitions per grid point")
    sweep_p.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    sweep_p.set_defaults(handler=_cmd_sweep)

    tr_p = sub.add_parser("transpile", help="map an OPENQASM file onto a device")
    tr_p.add_argument("input", help="OPENQASM 2.0 source file")
    tr_p.add_argument("--device", required=True,
                      help="preset name or calibration JSON file")
    tr_p.add_argument("--layout", help="comma list: physical qubit for each logical qubit")
    tr_p.add_argument("--fuse", action="store_true",
                      help="merge adjacent single-qubit gates into one U3")
    tr_p.add_argument("--output", help="write transpiled QASM here")
    tr_p.set_defaults(handler=_cmd_transpile)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, QasmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CircuitError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
