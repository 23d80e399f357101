"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 domain validation error,
3 resource cap exceeded.  All JSON floats carry 17 significant digits so
payloads round-trip exactly; wall-clock time is reported in a separate
field so data payloads stay byte-identical across runs.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import sys
import time
from typing import Sequence

import click
import numpy as np

from . import capacity as cap_mod
from .fock import DimensionCapError, fock_matrix_elements, fock_to_dict
from .states import (
    GaussianState,
    InvalidStateError,
    PureAmplifier,
    PureLoss,
    beam_splitter,
    displacement,
    apply_transform,
    mean_photon_number,
    reduce_state,
    state_from_dict,
    state_to_dict,
    thermal_state,
    tmsv_state,
    two_mode_squeezer,
    validate_state,
)
from .tail import (
    CutoffCapError,
    cutoff_for_error,
    tail_bound_closed,
    tail_bound_optimized,
)
from .tracedist import gaussian_trace_distance

# ---------------------------------------------------------------------------
# deterministic JSON with 17-significant-digit floats


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(float(x), ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ", ".join(_encode(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit(payload) -> None:
    click.echo(_encode(payload))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(body):
    try:
        return body()
    except (DimensionCapError, CutoffCapError) as exc:
        _fail(3, str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(1, str(exc))
    except (ValueError, TypeError) as exc:
        _fail(2, str(exc))
    except RuntimeError as exc:
        _fail(2, str(exc))


def _load_state(path: str) -> GaussianState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))


def _parse_channel(channel: str, lam: float | None, g: float | None):
    if channel == "loss":
        if lam is None:
            raise ValueError("--channel loss needs --lam")
        return PureLoss(lam)
    if channel == "amp":
        if g is None:
            raise ValueError("--channel amp needs --g")
        return PureAmplifier(g)
    raise ValueError(f"channel must be loss or amp, got {channel!r}")


# ---------------------------------------------------------------------------


@click.group()
def main():
    """Gaussian-state numerics: tail bounds, trace distances, capacity bounds."""


# ----------------------------------------------------------------- state ---


@main.group()
def state():
    """Create, validate and manipulate Gaussian state files."""


@state.command("thermal")
@click.option("--n", "photons", type=float, required=True, help="Mean photon number.")
def state_thermal(photons):
    _guarded(lambda: _emit(state_to_dict(thermal_state(photons))))


@state.command("tmsv")
@click.option("--n", "photons", type=float, required=True, help="Mean photon number per arm.")
def state_tmsv(photons):
    _guarded(lambda: _emit(state_to_dict(tmsv_state(photons))))


@state.command("validate")
@click.argument("path", type=click.Path())
def state_validate(path):
    def body():
        report = validate_state(_load_state(path))
        _emit(report.to_dict())
        if not report.ok:
            sys.exit(2)

    _guarded(body)


@state.command("photon")
@click.argument("path", type=click.Path())
def state_photon(path):
    _guarded(lambda: _emit(mean_photon_number(_load_state(path))))


@state.command("reduce")
@click.argument("path", type=click.Path())
@click.option("--keep", required=True, help="Comma-separated mode indices to keep.")
def state_reduce(path, keep):
    def body():
        modes = [int(tok) for tok in keep.split(",") if tok.strip() != ""]
        _emit(state_to_dict(reduce_state(_load_state(path), modes)))

    _guarded(body)


@state.command("evolve")
@click.argument("path", type=click.Path())
@click.option("--beam-splitter", "bs", type=float, default=None,
              help="Apply a beam splitter of this transmissivity.")
@click.option("--two-mode-squeezer", "tms", type=float, default=None,
              help="Apply a two-mode squeezer of this gain.")
@click.option("--displace", default=None,
              help="Comma-separated phase-space shift (length 2k).")
@click.option("--modes", default=None, help="Comma-separated target modes.")
def state_evolve(path, bs, tms, displace, modes):
    def body():
        chosen = [x for x in (bs, tms, displace) if x is not None]
        if len(chosen) != 1:
            raise ValueError("pick exactly one of --beam-splitter, "
                             "--two-mode-squeezer, --displace")
        if bs is not None:
            transform = beam_splitter(bs)
        elif tms is not None:
            transform = two_mode_squeezer(tms)
        else:
            shift = [float(tok) for tok in displace.split(",")]
            transform = displacement(shift)
        targets = None
        if modes is not None:
            targets = [int(tok) for tok in modes.split(",") if tok.strip() != ""]
        _emit(state_to_dict(apply_transform(_load_state(path), transform, targets)))

    _guarded(body)


# ------------------------------------------------------------------ tail ---


@main.command("tail")
@click.argument("path", type=click.Path())
@click.option("--m", "cutoff", type=int, default=None, help="Photon cutoff M.")
@click.option("--target-eps", type=float, default=None,
              help="Pick the smallest cutoff certifying this truncation error.")
def tail_cmd(path, cutoff, target_eps):
    """Photon-number tail bounds for a Gaussian state file."""

    def body():
        if (cutoff is None) == (target_eps is None):
            raise ValueError("give exactly one of --m or --target-eps")
        s = _load_state(path)
        m = cutoff if cutoff is not None else cutoff_for_error(s, target_eps)
        closed = tail_bound_closed(s, m)
        optimized = tail_bound_optimized(s, m)
        _emit(
            {
                "closed": closed.bound,
                "optimized": optimized.bound,
                "optimizer_x": optimized.optimizer_x,
                "cutoff": m,
            }
        )

    _guarded(body)


# ------------------------------------------------------------- tracedist ---


@main.command("tracedist")
@click.argument("path_a", type=click.Path())
@click.argument("path_b", type=click.Path())
@click.option("--eps", type=float, required=True, help="Certified accuracy target.")
@click.option("--dump-fock", "dump_prefix", default=None,
              help="Write the truncated Fock blocks to PREFIX.a.json / PREFIX.b.json.")
def tracedist_cmd(path_a, path_b, eps, dump_prefix):
    """Certified trace distance between two Gaussian state files."""

    def body():
        sa = _load_state(path_a)
        sb = _load_state(path_b)
        start = time.perf_counter()
        result = gaussian_trace_distance(sa, sb, eps)
        seconds = time.perf_counter() - start
        if dump_prefix is not None:
            for suffix, st in (("a", sa), ("b", sb)):
                block = fock_matrix_elements(st, result.cutoff)
                with open(f"{dump_prefix}.{suffix}.json", "w", encoding="utf-8") as fh:
                    fh.write(_encode(fock_to_dict(block)) + "\n")
        _emit(
            {
                "estimate": result.estimate,
                "certified_error": result.certified_error,
                "cutoff": result.cutoff,
                "fock_dim": result.fock_dim,
                "seconds": seconds,
            }
        )

    _guarded(body)


# -------------------------------------------------------------- capacity ---

_METHODS = ("asymptotic", "aep", "improved", "ec-aep", "ec-variance", "best", "upper")


def _evaluate_method(method, channel, task, n, eps, photons):
    if method == "asymptotic":
        if photons is None:
            return {"value": cap_mod.asymptotic_capacity(channel, task),
                    "task": task, "method": "asymptotic"}
        return {"value": cap_mod.ec_asymptotic(channel, task, photons),
                "task": task, "method": "asymptotic", "Ns": photons}
    if n is None or eps is None:
        raise ValueError(f"method {method} needs --n and --eps")
    if method == "aep":
        if isinstance(channel, PureLoss):
            return cap_mod.aep_lower_bound_pure_loss(channel.transmissivity, n, eps, task)
        return cap_mod.aep_lower_bound_amplifier(channel.gain, n, eps, task)
    if method == "improved":
        if not isinstance(channel, PureLoss):
            raise ValueError("the improved bound covers the pure loss channel only")
        return cap_mod.improved_lower_bound_pure_loss(channel.transmissivity, n, eps, task)
    if method == "ec-aep":
        if photons is None:
            raise ValueError("method ec-aep needs --ns")
        return cap_mod.ec_aep_lower_bound(channel, photons, n, eps, task)
    if method == "ec-variance":
        if not isinstance(channel, PureLoss):
            raise ValueError("the variance bound covers the pure loss channel only")
        if photons is None:
            raise ValueError("method ec-variance needs --ns")
        return cap_mod.ec_variance_lower_bound(channel.transmissivity, photons, n, eps, task)
    if method == "best":
        return cap_mod.best_lower_bound(channel, n, eps, task, photons=photons)
    if method == "upper":
        return cap_mod.upper_bound_nshot(channel, n, eps, task)
    raise ValueError(f"method must be one of {_METHODS}, got {method!r}")


@main.command("capacity")
@click.option("--channel", required=True, type=click.Choice(["loss", "amp"]))
@click.option("--lam", type=float, default=None, help="Loss transmissivity.")
@click.option("--g", type=float, default=None, help="Amplifier gain.")
@click.option("--task", required=True, type=click.Choice(list(cap_mod.TASKS)))
@click.option("--method", required=True, type=click.Choice(list(_METHODS)))
@click.option("--n", type=int, default=None, help="Number of channel uses.")
@click.option("--eps", type=float, default=None, help="Error tolerance.")
@click.option("--ns", type=float, default=None, help="Input mean photon number.")
def capacity_cmd(channel, lam, g, task, method, n, eps, ns):
    """Evaluate one capacity bound; emits the bound with its breakdown."""

    def body():
        ch = _parse_channel(channel, lam, g)
        result = _evaluate_method(method, ch, task, n, eps, ns)
        payload = result.to_dict() if isinstance(result, cap_mod.CapacityBound) else result
        _emit(payload)

    _guarded(body)


@main.command("complexity")
@click.option("--channel", required=True, type=click.Choice(["loss", "amp"]))
@click.option("--lam", type=float, default=None)
@click.option("--g", type=float, default=None)
@click.option("--task", required=True, type=click.Choice(list(cap_mod.TASKS)))
@click.option("--k", type=float, required=True, help="Bits to transmit/generate.")
@click.option("--eps", type=float, required=True)
@click.option("--ns", type=float, default=None, help="Input mean photon number.")
def complexity_cmd(channel, lam, g, task, k, eps, ns):
    """Channel uses that suffice, and are necessary, for k bits at error eps."""

    def body():
        ch = _parse_channel(channel, lam, g)
        sufficient = cap_mod.channel_uses_sufficient(ch, k, eps, task, photons=ns)
        necessary = cap_mod.channel_uses_necessary(ch, k, eps)
        _emit({"sufficient_n": sufficient, "necessary_n": necessary})

    _guarded(body)


# ----------------------------------------------------------------- sweep ---


def _parse_range(spec_str: str) -> list[float]:
    """start:stop:count[:log] or a single value."""
    parts = str(spec_str).split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) not in (3, 4):
        raise ValueError(f"range must be start:stop:count[:log], got {spec_str!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"range count must be >= 1, got {count}")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"range suffix must be 'log', got {parts[3]!r}")
        if start <= 0 or stop <= 0:
            raise ValueError("log spacing needs positive endpoints")
        vals = np.geomspace(start, stop, count)
    else:
        vals = np.linspace(start, stop, count)
    return [float(v) for v in vals]


def _sweep_row(job) -> list[str]:
    method, task, channel_kind, param, ns, n, eps = job
    ch = PureLoss(param) if channel_kind == "loss" else PureAmplifier(param)
    result = _evaluate_method(method, ch, task, n, eps, ns)
    if isinstance(result, cap_mod.CapacityBound):
        direction = result.direction
        value = result.value
        vacuous = result.vacuous
        met = result.preconditions_met
    else:  # asymptotic: a bare rate
        direction = "exact"
        value = result["value"]
        vacuous = value < 0
        met = True
    return [
        method,
        task,
        direction,
        _fmt_float(param) if channel_kind == "loss" else "",
        _fmt_float(param) if channel_kind == "amp" else "",
        "" if ns is None else _fmt_float(ns),
        str(n),
        _fmt_float(eps),
        _fmt_float(value),
        "true" if vacuous else "false",
        "true" if met else "false",
    ]


_SWEEP_HEADER = "method,task,direction,lambda,g,Ns,n,eps,value,vacuous,preconditions_met"


@main.command("sweep")
@click.option("--config", type=click.Path(), default=None,
              help="JSON file with defaults for the options below.")
@click.option("--channel", type=click.Choice(["loss", "amp"]), default=None)
@click.option("--methods", default=None, help="Comma-separated method names.")
@click.option("--tasks", default=None, help="Comma-separated tasks.")
@click.option("--lam", default=None, help="Transmissivity range start:stop:count[:log].")
@click.option("--g", default=None, help="Gain range start:stop:count[:log].")
@click.option("--ns", default=None, help="Photon-number range (optional).")
@click.option("--n", default=None, help="Channel-use range.")
@click.option("--eps", default=None, help="Error range.")
@click.option("--out", type=click.Path(), default=None, help="CSV output path.")
@click.option("--jobs", type=int, default=1, help="Parallel workers.")
def sweep_cmd(config, channel, methods, tasks, lam, g, ns, n, eps, out, jobs):
    """Evaluate bounds over a parameter grid and write CSV.

    Row order follows the nested loops (method, task, channel parameter,
    Ns, n, eps) regardless of --jobs.
    """

    def body():
        conf = {}
        if config is not None:
            with open(config, "r", encoding="utf-8") as fh:
                conf = json.load(fh)

        def pick(flag_val, key, default=None):
            if flag_val is not None:
                return flag_val
            return conf.get(key, default)

        kind = pick(channel, "channel")
        if kind is None:
            raise ValueError("sweep needs --channel (flag or config)")
        method_list = str(pick(methods, "methods", "best")).split(",")
        task_list = str(pick(tasks, "tasks", "Q2")).split(",")
        if kind == "loss":
            params = _parse_range(pick(lam, "lam", "0.5"))
        else:
            params = _parse_range(pick(g, "g", "2.0"))
        ns_raw = pick(ns, "ns")
        ns_list = [None] if ns_raw is None else _parse_range(ns_raw)
        n_list = [int(v) for v in _parse_range(pick(n, "n", "100"))]
        eps_list = _parse_range(pick(eps, "eps", "0.1"))
        out_path = pick(out, "out")
        if out_path is None:
            raise ValueError("sweep needs --out (flag or config)")
        workers = int(pick(jobs if jobs != 1 else None, "jobs", 1))

        def defined(method: str, task: str) -> bool:
            # grids stay total: combinations with no defined quantity are
            # skipped rather than aborting the sweep
            if method == "upper" and task == "Q":
                return False
            if method == "improved" and kind == "amp":
                return False
            return True

        jobs_list = [
            (method.strip(), task.strip(), kind, param, ns_val, n_val, eps_val)
            for method in method_list
            for task in task_list
            if defined(method.strip(), task.strip())
            for param in params
            for ns_val in ns_list
            for n_val in n_list
            for eps_val in eps_list
        ]
        if workers > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_sweep_row, jobs_list))
        else:
            rows = [_sweep_row(job) for job in jobs_list]

        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(_SWEEP_HEADER + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
        click.echo(f"wrote {len(rows)} rows to {out_path}")

    _guarded(body)


if __name__ == "__main__":
    main()
