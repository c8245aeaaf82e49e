"""JSON run configuration: parsing, validation, and object construction."""

import json

import numpy as np

from .partition import build_exact, build_long_range, build_ring
from .spins import HalfInt, ProbeState, sx_top_eigenstate

MODEL_KINDS = ("exact", "long_range", "ring")


class ConfigError(ValueError):
    """A named validation failure in a run configuration."""


def _require(mapping, key, where):
    if key not in mapping:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return mapping[key]


def _number(value, where, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    v = float(value)
    if minimum is not None and (v <= minimum if strict else v < minimum):
        op = ">" if strict else ">="
        raise ConfigError(f"{where}: must be {op} {minimum}, got {v}")
    return v


def _integer(value, where, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {value}")
    return value


class RunConfig:
    """Validated parameters for one model/probe/grid run."""

    def __init__(self, data):
        if not isinstance(data, dict):
            raise ConfigError("top level: expected a JSON object")

        model = _require(data, "model", "top level")
        if not isinstance(model, dict):
            raise ConfigError("model: expected an object")
        self.model_kind = _require(model, "kind", "model")
        if self.model_kind not in MODEL_KINDS:
            raise ConfigError(
                f"model.kind: expected one of {MODEL_KINDS}, got {self.model_kind!r}"
            )
        self.n_spins = _integer(_require(model, "n_spins", "model"), "model.n_spins", 1)
        self.two_s = _integer(_require(model, "two_s", "model"), "model.two_s", 1)
        self.J = _number(model.get("J", 1.0), "model.J", 0.0)
        self.couplings = None
        if self.model_kind == "exact":
            raw = model.get("couplings")
            if raw is None:
                # default: every pair coupled with strength J
                mat = self.J * (np.ones((self.n_spins, self.n_spins)) - np.eye(self.n_spins))
            else:
                mat = np.asarray(raw, dtype=float) * self.J
                if mat.shape != (self.n_spins, self.n_spins):
                    raise ConfigError(
                        f"model.couplings: expected {self.n_spins}x{self.n_spins} matrix"
                    )
            self.couplings = mat
        elif "couplings" in model:
            raise ConfigError(f"model.couplings: only valid for kind 'exact'")
        if self.model_kind == "ring" and self.n_spins < 3:
            raise ConfigError("model.n_spins: a ring needs at least 3 spins")

        temp = _require(data, "temperature", "top level")
        if not isinstance(temp, dict):
            raise ConfigError("temperature: expected an object")
        keys = set(temp) & {"beta", "T_over_J"}
        if len(keys) != 1:
            raise ConfigError(
                "temperature: exactly one of 'beta' or 'T_over_J' must be given"
            )
        if "beta" in temp:
            self.beta = _number(temp["beta"], "temperature.beta", 0.0)
        else:
            t = temp["T_over_J"]
            if t == "inf":
                self.beta = 0.0
            else:
                t = _number(t, "temperature.T_over_J")
                if t == 0:
                    raise ConfigError(
                        "temperature.T_over_J: zero temperature not supported; "
                        "use 'inf' for infinite temperature"
                    )
                if t < 0:
                    raise ConfigError(f"temperature.T_over_J: must be positive, got {t}")
                self.beta = 1.0 / t

        probe = _require(data, "probe", "top level")
        if not isinstance(probe, dict):
            raise ConfigError("probe: expected an object")
        self.two_s0 = _integer(_require(probe, "two_s0", "probe"), "probe.two_s0", 1)
        self.delta = _integer(probe.get("delta", 1), "probe.delta", 1)
        if self.delta > self.two_s0:
            raise ConfigError(
                f"probe.delta: {self.delta} exceeds 2*s0 = {self.two_s0}"
            )
        self.h0 = _number(probe.get("h0", 0.0), "probe.h0")
        state = probe.get("state", "sx_max")
        if state == "sx_max":
            self.state_amplitudes = None
        elif isinstance(state, list):
            if len(state) != self.two_s0 + 1:
                raise ConfigError(
                    f"probe.state: expected {self.two_s0 + 1} amplitudes, got {len(state)}"
                )
            amps = []
            for k, entry in enumerate(state):
                if isinstance(entry, (int, float)) and not isinstance(entry, bool):
                    amps.append(complex(entry))
                elif isinstance(entry, list) and len(entry) == 2:
                    amps.append(complex(entry[0], entry[1]))
                else:
                    raise ConfigError(
                        f"probe.state[{k}]: expected a number or [re, im] pair"
                    )
            amps = np.asarray(amps)
            norm = float(np.sum(np.abs(amps) ** 2))
            if norm == 0:
                raise ConfigError("probe.state: amplitudes must not all vanish")
            self.state_amplitudes = amps / np.sqrt(norm)
        else:
            raise ConfigError(
                f"probe.state: expected 'sx_max' or an amplitude list, got {state!r}"
            )

        self.lam = _number(data.get("lambda", 1.0), "lambda", 0.0, strict=True)

        grid = data.get("grid", {})
        if not isinstance(grid, dict):
            raise ConfigError("grid: expected an object")
        self.steps = _integer(grid.get("steps", 4096), "grid.steps", 2)
        self.t_max = None
        if "t_max" in grid:
            self.t_max = _number(grid["t_max"], "grid.t_max", 0.0, strict=True)

        tols = data.get("tolerances", {})
        if not isinstance(tols, dict):
            raise ConfigError("tolerances: expected an object")
        self.magnitude_tol = _number(
            tols.get("magnitude_tol", 1e-6), "tolerances.magnitude_tol", 0.0, strict=True
        )
        self.match_window = _number(
            tols.get("match_window", 1e-6), "tolerances.match_window", 0.0, strict=True
        )

    def build_polynomial(self):
        s = HalfInt(self.two_s)
        if self.model_kind == "exact":
            return build_exact([s] * self.n_spins, self.couplings, self.beta)
        if self.model_kind == "long_range":
            return build_long_range(self.n_spins, s, self.J, self.beta)
        return build_ring(self.n_spins, s, self.J, self.beta)

    def probe_state(self) -> ProbeState:
        s0 = HalfInt(self.two_s0)
        if self.state_amplitudes is None:
            return sx_top_eigenstate(s0)
        return ProbeState(s0, self.state_amplitudes)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    return RunConfig(data)
