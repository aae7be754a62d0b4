"""Command line front end.

Subcommands:
    correlator   expectations of words read from a JSON config
    gram         Gram matrix and positivity report for a list of states
    amplitude    multi-disc amplitude entries for occupation tuples
    hsnorm       truncated Hilbert-Schmidt partial sums with the closed-form bound
    verify       run the cross-module identity suites

Results are JSON documents on stdout (or --out).  In exact mode the output
is byte-identical across runs; rationals are rendered as "p/q" strings.
Exit codes: 0 success, 1 configuration or domain error, 2 verify failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from fractions import Fraction

from . import scalars
from .algebra import Insertion, LinearCombination, WickGroup, WickWord
from .amplitude import Disc, DiscConfiguration, amplitude_entry, hs_bound, hs_truncated
from .correlator import expect_combo
from .errors import EngineError, RegimeWarning, SchemaError
from .fock import FockIndex
from .hilbert import gram
from .verify import run_suites

_ALLOWED_KEYS = {
    "correlator": {"mode", "words"},
    "gram": {"mode", "states", "tolerance"},
    "amplitude": {"mode", "discs", "states"},
    "hsnorm": {"mode", "discs", "truncation", "max_tuples"},
    "verify": {"suites", "seed"},
}


# ---------------------------------------------------------------- scalars i/o

def _parse_component(value, exact: bool, where: str) -> Fraction | float:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a number, got a boolean")
    if exact:
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise SchemaError(f"{where}: cannot parse {value!r} as a rational") from None
        raise SchemaError(
            f"{where}: exact mode takes integers or \"p/q\" strings, got {value!r}"
        )
    if isinstance(value, (int, float)):
        return float(value)
    raise SchemaError(f"{where}: float mode takes numbers only, got {value!r}")


def _parse_point(obj, exact: bool, where: str, re_key="re", im_key="im"):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    re = _parse_component(obj.get(re_key, 0), exact, f"{where}.{re_key}")
    im = _parse_component(obj.get(im_key, 0), exact, f"{where}.{im_key}")
    if exact:
        return scalars.rational(re, im)
    return complex(re, im)


def _frac_str(x: Fraction) -> str:
    return str(x)


def _scalar_json(value):
    """Encode a scalar for JSON output.

    rational        -> "p/q" string
    gaussian        -> [re_str, im_str]
    with radicals   -> {"radicals": {"s": [re_str, im_str], ...}}
    float           -> [re, im] numbers
    """
    if scalars.is_exact(value):
        if value.is_rational():
            return _frac_str(value.rational())
        if value.is_gaussian():
            g = value.gaussian()
            return [_frac_str(g[0]), _frac_str(g[1])]
        return {
            "radicals": {
                str(s): [_frac_str(re), _frac_str(im)] for s, re, im in value.terms
            }
        }
    z = complex(value)
    return [z.real, z.imag]


def _scalar_csv(value) -> str:
    if scalars.is_exact(value) and value.is_rational():
        return _frac_str(value.rational())
    return repr(float(complex(value).real))


# ---------------------------------------------------------------- config -> objects

def _require(config: dict, key: str, command: str):
    if key not in config:
        raise SchemaError(f"{command} config requires the key {key!r}")
    return config[key]


def _parse_insertion(obj, exact: bool, where: str) -> Insertion:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an insertion object")
    extra = set(obj) - {"m", "re", "im"}
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")
    m = obj.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise SchemaError(f"{where}.m: expected a positive integer order")
    return Insertion(m, _parse_point(obj, exact, where))


def _parse_word(obj, exact: bool, where: str) -> WickWord:
    """A word is a list of groups; each group is a list of insertions.

    Singleton groups reproduce plain insertions exactly (a normal-ordered
    single field is the field), so one shape covers both word kinds.
    """
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{where}: expected a non-empty list of groups")
    built = []
    for i, grp in enumerate(obj):
        if not isinstance(grp, list) or not grp:
            raise SchemaError(f"{where}[{i}]: expected a non-empty list of insertions")
        built.append(
            WickGroup(
                tuple(
                    _parse_insertion(e, exact, f"{where}[{i}][{j}]")
                    for j, e in enumerate(grp)
                )
            )
        )
    return WickWord(tuple(built))


def _parse_discs(entries, exact: bool, command: str) -> DiscConfiguration:
    if not isinstance(entries, list):
        raise SchemaError(f"{command}.discs: expected a list")
    discs = []
    for i, obj in enumerate(entries):
        if not isinstance(obj, dict):
            raise SchemaError(f"{command}.discs[{i}]: expected an object")
        extra = set(obj) - {"a_re", "a_im", "q_re", "q_im"}
        if extra:
            raise SchemaError(f"{command}.discs[{i}]: unknown keys {sorted(extra)}")
        center = _parse_point(obj, exact, f"{command}.discs[{i}]", "a_re", "a_im")
        q = _parse_point(obj, exact, f"{command}.discs[{i}]", "q_re", "q_im")
        discs.append(Disc(center, q))
    return DiscConfiguration(tuple(discs))


def _parse_occupations(obj, where: str) -> FockIndex:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an occupation map")
    occ = {}
    for key, count in obj.items():
        try:
            mode = int(key)
        except (TypeError, ValueError):
            raise SchemaError(f"{where}: mode keys must be integers, got {key!r}") from None
        if mode < 1:
            raise SchemaError(f"{where}: modes are positive, got {mode}")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise SchemaError(f"{where}[{key}]: counts are positive integers")
        occ[mode] = count
    return FockIndex.of(occ)


def _check_keys(config: dict, command: str):
    if not isinstance(config, dict):
        raise SchemaError("config document must be a JSON object")
    extra = set(config) - _ALLOWED_KEYS[command]
    if extra:
        raise SchemaError(f"unknown config keys for {command}: {sorted(extra)}")


def _mode(config: dict) -> bool:
    mode = config.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise SchemaError(f"mode must be 'exact' or 'float', got {mode!r}")
    return mode == "exact"


# ---------------------------------------------------------------- commands

def _run_correlator(config: dict) -> dict:
    exact = _mode(config)
    entries = _require(config, "words", "correlator")
    if not isinstance(entries, list) or not entries:
        raise SchemaError("correlator.words: expected a non-empty list")
    expectations = []
    stats: dict = {}
    for i, obj in enumerate(entries):
        word = _parse_word(obj, exact, f"words[{i}]")
        expectations.append(
            _scalar_json(expect_combo(LinearCombination.of(word), stats))
        )
    return {
        "command": "correlator",
        "mode": "exact" if exact else "float",
        "expectations": expectations,
        "pairings": stats.get("pairings", 0),
    }


def _run_gram(config: dict) -> dict:
    exact = _mode(config)
    entries = _require(config, "states", "gram")
    if not isinstance(entries, list) or not entries:
        raise SchemaError("gram.states: expected a non-empty list")
    tol = config.get("tolerance", 1e-10)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
        raise SchemaError("gram.tolerance: expected a positive number")
    states = [_parse_word(obj, exact, f"states[{i}]") for i, obj in enumerate(entries)]
    report = gram(states, tol=float(tol))
    doc = {
        "command": "gram",
        "mode": "exact" if exact else "float",
        "size": report.size,
        "matrix": [[_scalar_json(v) for v in row] for row in report.matrix],
        "min_eigenvalue": report.min_eigenvalue,
        "hermiticity_defect": report.hermiticity_defect,
        "tolerance": float(tol),
        "psd": report.psd,
    }
    if report.witness is not None:
        doc["witness"] = [[z.real, z.imag] for z in report.witness]
    return doc


def _run_amplitude(config: dict) -> dict:
    exact = _mode(config)
    discs = _parse_discs(_require(config, "discs", "amplitude"), exact, "amplitude")
    tuples = _require(config, "states", "amplitude")
    if not isinstance(tuples, list) or not tuples:
        raise SchemaError("amplitude.states: expected a non-empty list")
    entries = []
    for i, tup in enumerate(tuples):
        if not isinstance(tup, list) or len(tup) != len(discs.discs):
            raise SchemaError(
                f"amplitude.states[{i}]: expected one occupation map per disc "
                f"({len(discs.discs)} discs)"
            )
        indices = tuple(
            _parse_occupations(obj, f"amplitude.states[{i}][{j}]")
            for j, obj in enumerate(tup)
        )
        entries.append(_scalar_json(amplitude_entry(discs, indices)))
    return {
        "command": "amplitude",
        "mode": "exact" if exact else "float",
        "discs": len(discs.discs),
        "entries": entries,
    }


def _run_hsnorm(config: dict) -> dict:
    exact = _mode(config)
    discs = _parse_discs(_require(config, "discs", "hsnorm"), exact, "hsnorm")
    trunc = _require(config, "truncation", "hsnorm")
    if not isinstance(trunc, dict) or set(trunc) != {"M", "N"}:
        raise SchemaError("hsnorm.truncation: expected an object with keys M and N")
    M, N = trunc["M"], trunc["N"]
    for label, v in (("M", M), ("N", N)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SchemaError(f"hsnorm.truncation.{label}: expected a non-negative integer")
    max_tuples = config.get("max_tuples", 100_000)
    if not isinstance(max_tuples, int) or isinstance(max_tuples, bool) or max_tuples < 1:
        raise SchemaError("hsnorm.max_tuples: expected a positive integer")
    regime = discs.hs_regime()
    bound = hs_bound(discs) if regime else None
    threads = _thread_count()
    with warnings.catch_warnings():
        # out-of-regime sweeps are allowed here; the flag carries the information
        warnings.simplefilter("ignore", RegimeWarning)
        rows = hs_truncated(discs, M, N, max_tuples=max_tuples, threads=threads)
    return {
        "command": "hsnorm",
        "mode": "exact" if exact else "float",
        "truncation": {"M": M, "N": N},
        "regime": regime,
        "bound": None if bound is None else _scalar_json(bound),
        "rows": [
            {
                "total_insertions": row.total_insertions,
                "tuple_count": row.tuple_count,
                "partial_sum": _scalar_json(row.partial_sum),
            }
            for row in rows
        ],
    }


def _run_verify(config: dict) -> dict:
    names = config.get("suites")
    if names is not None:
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaError("verify.suites: expected a list of suite names")
    seed = config.get("seed", 2026)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SchemaError("verify.seed: expected an integer")
    results = run_suites(names, seed=seed)
    return {
        "command": "verify",
        "seed": seed,
        "suites": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": all(r.passed for r in results),
    }


_COMMANDS = {
    "correlator": _run_correlator,
    "gram": _run_gram,
    "amplitude": _run_amplitude,
    "hsnorm": _run_hsnorm,
    "verify": _run_verify,
}


def run(command: str, config: dict) -> dict:
    """Execute one CLI command against an already-parsed config document."""
    handler = _COMMANDS.get(command)
    if handler is None:
        raise SchemaError(f"unknown command {command!r}")
    _check_keys(config, command)
    return handler(config)


# ---------------------------------------------------------------- plumbing

def _thread_count() -> int:
    raw = os.environ.get("FREEBOSON_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise SchemaError(f"FREEBOSON_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise SchemaError("FREEBOSON_THREADS must be at least 1")
    return n


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise SchemaError("config document must be a JSON object")
    return config


def _csv_cell(encoded) -> str:
    """Flatten a JSON-encoded scalar to one CSV token (real part)."""
    if isinstance(encoded, str):
        return encoded
    if isinstance(encoded, list):
        value = encoded[0]
        return value if isinstance(value, str) else repr(float(value))
    total = 0.0
    for s, (re, _im) in encoded["radicals"].items():
        total += float(Fraction(re)) * float(int(s)) ** 0.5
    return repr(total)


def _render_csv(doc: dict) -> str:
    lines = ["total_insertions,tuple_count,partial_sum,bound"]
    bound = "" if doc["bound"] is None else _csv_cell(doc["bound"])
    for row in doc["rows"]:
        lines.append(
            f"{row['total_insertions']},{row['tuple_count']},"
            f"{_csv_cell(row['partial_sum'])},{bound}"
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeboson",
        description="free boson correlators, Gram matrices, and disc amplitudes",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("correlator", "gram", "amplitude", "hsnorm", "verify"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "verify", metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--timing", action="store_true")
        if name != "verify":
            p.add_argument("--mode", choices=("exact", "float"))
        if name == "hsnorm":
            p.add_argument("--csv", action="store_true")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the config-error code
        return 0 if exc.code in (0, None) else 1

    started = time.perf_counter()
    try:
        config = _load_config(args.config)
        if getattr(args, "mode", None) is not None:
            config = dict(config)
            config["mode"] = args.mode
        doc = run(args.command, config)
    except EngineError as exc:
        error_doc = {
            "error": {
                "module": exc.module,
                "type": type(exc).__name__,
                "message": str(exc),
            }
        }
        sys.stdout.write(json.dumps(error_doc, sort_keys=True, indent=2) + "\n")
        return 1

    if args.command == "hsnorm" and getattr(args, "csv", False):
        text = _render_csv(doc)
    else:
        if args.timing:
            doc["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _emit(text, args.out)

    if args.command == "verify" and not doc["passed"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
