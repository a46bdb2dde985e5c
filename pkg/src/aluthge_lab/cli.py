"""Command-line front end.

Exit codes: 0 on success, 1 on I/O, configuration or numerical failure, and
2 when a property check fails.
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import KINDS, write_corpus
from .dynamics import iterate
from .exceptions import AluthgeLabError, ConfigError, PropertyViolation
from .linalg import normality_defect, spectral_norm
from .matrix_io import matrix_to_dict, read_matrix
from .means import dominance_chain, dominance_check, parse_mean
from .numrange import range_of_transform_report
from .shiftlab import oscillation_table
from .transform import transform_report
from .verify import SCHEMA_VERSION, SUITES, run_verification

log = logging.getLogger("aluthge_lab")

COMMANDS = ("transform", "iterate", "shift-sim", "numrange", "dominance", "verify", "corpus")

_OPTIONS = {
    "transform": {"mean": "geometric:0.5", "oracle": None},
    "iterate": {"mean": "arithmetic:0.5", "max_steps": 2000, "tol": 1e-10},
    "shift-sim": {"a": 1.0, "b": 2.0, "lambda": 0.5, "levels": 6, "mean": "geometric:0.5"},
    "numrange": {"means": "harmonic:0.5,geometric:0.5,logarithmic,arithmetic:0.5", "angles": 720},
    "dominance": {"means": "harmonic:0.5,arithmetic:0.5", "s": "1,2,5"},
    "verify": {"suite": "all"},
    "corpus": {"kind": "invertible", "m": 4, "count": 10, "format": "json"},
}

_PATHS = {
    "transform": {"matrix", "out"},
    "iterate": {"matrix", "out", "emit_trace"},
    "shift-sim": {"out"},
    "numrange": {"matrix", "out"},
    "dominance": {"out"},
    "verify": {"out"},
    "corpus": {"out_dir"},
}

_DEFAULT_TOLERANCES = {
    "closed_form": 1e-9,
    "quadrature": 1e-5,
    "norm_contraction": 1e-9,
    "trace": 1e-9,
    "range_inclusion": 1e-7,
    "dominance": 1e-10,
}


@dataclass
class ExperimentConfig:
    """Validated description of one CLI run."""

    command: str
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        bad = set(self.tolerances) - set(_DEFAULT_TOLERANCES)
        if bad:
            raise ConfigError(f"unknown tolerance keys: {sorted(bad)}")
        bad = set(self.paths) - _PATHS[self.command]
        if bad:
            raise ConfigError(f"unknown path keys for {self.command}: {sorted(bad)}")
        bad = set(self.options) - set(_OPTIONS[self.command])
        if bad:
            raise ConfigError(f"unknown option keys for {self.command}: {sorted(bad)}")
        self.options = {**_OPTIONS[self.command], **self.options}
        self.tolerances = {**_DEFAULT_TOLERANCES, **self.tolerances}

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {"command", "seed", "tolerances", "paths", "options"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "command" not in data:
            raise ConfigError("config needs a 'command'")
        return cls(
            command=data["command"],
            seed=data.get("seed", 0),
            tolerances=dict(data.get("tolerances", {})),
            paths=dict(data.get("paths", {})),
            options=dict(data.get("options", {})),
        )

    def path(self, key, required=False):
        value = self.paths.get(key)
        if value is None and required:
            raise ConfigError(f"{self.command} needs a '{key}' path")
        return None if value is None else Path(value)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _failures(checks, tolerances):
    return [(k, v, tolerances[k]) for k, v in checks.items() if v > tolerances[k]]


def _cmd_transform(cfg):
    T = read_matrix(cfg.path("matrix", required=True))
    mean = parse_mean(cfg.options["mean"])
    res, report = transform_report(T, mean, cfg.options["oracle"])
    tol = cfg.tolerances
    residual_checks = {
        "closed_form": report["residuals"].get("closed_form", 0.0),
        "quadrature": report["residuals"].get("quadrature", 0.0),
        "norm_contraction": report["checks"]["norm-contraction"],
        "trace": report["checks"]["trace-preservation"],
    }
    failed = _failures(residual_checks, tol)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "transform",
        "mean": report["mean"],
        "weight": report["weight"],
        "delta": matrix_to_dict(res.delta),
        "basis_conditioning": report["basis_conditioning"],
        "residuals": report["residuals"],
        "checks": {
            "norm-contraction": report["checks"]["norm-contraction"],
            "trace-preservation": report["checks"]["trace-preservation"],
        },
        "passed": not failed,
    }
    _write_json(cfg.path("out"), payload)
    return failed


def _cmd_iterate(cfg):
    T = read_matrix(cfg.path("matrix", required=True))
    mean = parse_mean(cfg.options["mean"])
    trace = iterate(T, mean, int(cfg.options["max_steps"]), float(cfg.options["tol"]), keep_iterates=False)
    emit = cfg.path("emit_trace")
    if emit is not None:
        with open(emit, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["step", "stepDelta", "defect", "traceRe", "traceIm"])
            for i in range(trace.steps):
                tr = trace.traces[i]
                writer.writerow([i + 1, *(repr(float(v)) for v in (trace.step_deltas[i], trace.defects[i], tr.real, tr.imag))])
    nT = max(spectral_norm(T), 1e-14)
    trace_err = abs(trace.traces[-1] - np.trace(T)) / nT
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "iterate",
        "mean": mean.label,
        "steps": trace.steps,
        "converged": trace.converged,
        "rate": trace.rate,
        "final": matrix_to_dict(trace.last),
        "final_defect": normality_defect(trace.last),
        "checks": {"trace-preservation": trace_err},
    }
    _write_json(cfg.path("out"), payload)
    return _failures({"trace": trace_err}, cfg.tolerances)


def _cmd_shift_sim(cfg):
    o = cfg.options
    mean = parse_mean(o["mean"])
    osc, sw, rows = oscillation_table(float(o["a"]), float(o["b"]), float(o["lambda"]), int(o["levels"]), mean)
    out = cfg.path("out")
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "gamma0", "lower", "upper", "blockTarget"])
        for n, g, lo, up, tgt in rows:
            writer.writerow([int(n), *(repr(float(v)) for v in (g, lo, up, tgt))])
    finally:
        if out:
            fh.close()
    log.info("switch points: %s", osc.switch_points.tolist())
    return [("sandwich", sw.violation(), 1e-12)] if sw.violation() > 1e-12 else []


def _split_means(text):
    return [parse_mean(d) for d in text.split(",") if d.strip()]


def _cmd_numrange(cfg):
    T = read_matrix(cfg.path("matrix", required=True))
    means = _split_means(cfg.options["means"])
    rep = range_of_transform_report(T, means, int(cfg.options["angles"]), cfg.tolerances["range_inclusion"])
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "numrange",
        "labels": rep["labels"],
        "n_angles": rep["n_angles"],
        "tolerance": rep["tolerance"],
        "boundaries": {
            label: {
                "points": [[float(z.real), float(z.imag)] for z in b.points],
                "support_values": b.support_values.tolist(),
            }
            for label, b in zip(rep["labels"], rep["boundaries"])
        },
        "inclusion": rep["inclusion"],
        "max_violation": rep["max_violation"],
    }
    _write_json(cfg.path("out"), payload)
    # only pairs whose order is known from the dominance chain are enforced,
    # plus the geometric transform sitting inside W(T)
    chain = [m.label for m in dominance_chain()]
    labels = rep["labels"]
    failures = []
    for i in range(1, len(labels)):
        for j in range(1, len(labels)):
            a, b = labels[i], labels[j]
            if a in chain and b in chain and chain.index(a) < chain.index(b) and not rep["inclusion"][i][j]:
                failures.append((f"range-nesting[{a}<={b}]", rep["max_violation"][i][j], rep["tolerance"]))
        if labels[i] == "geometric:0.5" and not rep["inclusion"][i][0]:
            failures.append(("range-geometric-inside-T", rep["max_violation"][i][0], rep["tolerance"]))
    return failures


def _cmd_dominance(cfg):
    means = _split_means(cfg.options["means"])
    if len(means) != 2:
        raise ConfigError("dominance needs exactly two means")
    s = [float(x) for x in str(cfg.options["s"]).split(",")]
    res = dominance_check(means[0], means[1], s, cfg.tolerances["dominance"])
    _write_json(
        cfg.path("out"),
        {
            "schema_version": SCHEMA_VERSION,
            "command": "dominance",
            "means": [m.label for m in means],
            "s": s,
            "dominated": res.dominated,
            "min_eigenvalue": res.min_eigenvalue,
        },
    )
    return []


def _cmd_verify(cfg):
    suite = cfg.options["suite"]
    if suite != "all" and suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {['all', *SUITES]}")
    report = run_verification(suite, cfg.seed)
    _write_json(cfg.path("out"), report)
    return [(c["tag"], c["residual"], c["tolerance"]) for c in report["checks"] if not c["passed"]]


def _cmd_corpus(cfg):
    o = cfg.options
    paths = write_corpus(cfg.path("out_dir", required=True), o["kind"], int(o["m"]), int(o["count"]), cfg.seed, o["format"])
    log.info("wrote %d matrices", len(paths))
    return []


_HANDLERS = {
    "transform": _cmd_transform,
    "iterate": _cmd_iterate,
    "shift-sim": _cmd_shift_sim,
    "numrange": _cmd_numrange,
    "dominance": _cmd_dominance,
    "verify": _cmd_verify,
    "corpus": _cmd_corpus,
}


def run(config):
    """Execute ``config``; return the process exit code."""
    try:
        failures = _HANDLERS[config.command](config)
    except (OSError, AluthgeLabError, ValueError, np.linalg.LinAlgError) as exc:
        field_name = getattr(exc, "field", None)
        suffix = f" (field: {field_name})" if field_name and field_name not in str(exc) else ""
        print(f"error: {exc}{suffix}", file=sys.stderr)
        return 1
    for tag, residual, tol in failures:
        print(f"property violation: {PropertyViolation(tag, residual, tol)}", file=sys.stderr)
    return 2 if failures else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="aluthge-lab", description="Generalized Aluthge transformations of matrices.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("transform", help="transform one matrix")
    t.add_argument("--matrix", required=True)
    t.add_argument("--mean", default="geometric:0.5")
    t.add_argument("--oracle", choices=["quadrature", "closed"])
    t.add_argument("--out")

    it = sub.add_parser("iterate", help="iterate the transform")
    it.add_argument("--matrix", required=True)
    it.add_argument("--mean", default="arithmetic:0.5")
    it.add_argument("--max-steps", type=int, default=2000)
    it.add_argument("--tol", type=float, default=1e-10)
    it.add_argument("--emit-trace")
    it.add_argument("--out")

    sh = sub.add_parser("shift-sim", help="oscillating weighted-shift construction")
    sh.add_argument("--a", type=float, default=1.0)
    sh.add_argument("--b", type=float, default=2.0)
    sh.add_argument("--lambda", dest="lam", type=float, default=0.5)
    sh.add_argument("--levels", type=int, default=6)
    sh.add_argument("--mean", default="geometric:0.5")
    sh.add_argument("--out")

    nr = sub.add_parser("numrange", help="numerical ranges of transforms")
    nr.add_argument("--matrix", required=True)
    nr.add_argument("--means", default=_OPTIONS["numrange"]["means"])
    nr.add_argument("--angles", type=int, default=720)
    nr.add_argument("--out")

    dm = sub.add_parser("dominance", help="PSD test of a perspective ratio matrix")
    dm.add_argument("--means", default=_OPTIONS["dominance"]["means"])
    dm.add_argument("--s", default="1,2,5")
    dm.add_argument("--out")

    vf = sub.add_parser("verify", help="run the property suites")
    vf.add_argument("--suite", default="all", choices=["all", *SUITES])
    vf.add_argument("--seed", type=int, default=42)
    vf.add_argument("--out")

    cp = sub.add_parser("corpus", help="write a seeded random corpus")
    cp.add_argument("--kind", choices=KINDS, default="invertible")
    cp.add_argument("--m", type=int, default=4)
    cp.add_argument("--count", type=int, default=10)
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--format", choices=["json", "csv"], default="json")
    cp.add_argument("--out-dir", required=True)

    rn = sub.add_parser("run", help="run an ExperimentConfig JSON file")
    rn.add_argument("config")
    return p


def _config_from_args(args):
    c = args.command
    if c == "run":
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        return ExperimentConfig.from_dict(data)
    if c == "transform":
        return ExperimentConfig(c, paths={"matrix": args.matrix, "out": args.out}, options={"mean": args.mean, "oracle": args.oracle})
    if c == "iterate":
        return ExperimentConfig(
            c,
            paths={"matrix": args.matrix, "out": args.out, "emit_trace": args.emit_trace},
            options={"mean": args.mean, "max_steps": args.max_steps, "tol": args.tol},
        )
    if c == "shift-sim":
        return ExperimentConfig(
            c, paths={"out": args.out},
            options={"a": args.a, "b": args.b, "lambda": args.lam, "levels": args.levels, "mean": args.mean},
        )
    if c == "numrange":
        return ExperimentConfig(c, paths={"matrix": args.matrix, "out": args.out}, options={"means": args.means, "angles": args.angles})
    if c == "dominance":
        return ExperimentConfig(c, paths={"out": args.out}, options={"means": args.means, "s": args.s})
    if c == "verify":
        return ExperimentConfig(c, seed=args.seed, paths={"out": args.out}, options={"suite": args.suite})
    return ExperimentConfig(
        c, seed=args.seed, paths={"out_dir": args.out_dir},
        options={"kind": args.kind, "m": args.m, "count": args.count, "format": args.format},
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = _config_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
