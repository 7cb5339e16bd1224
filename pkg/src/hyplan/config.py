"""Run configuration: a strict YAML schema for the CLI.

Unknown keys fail fast; silent typos in planner tuning are the dominant
user error.  Schema::

    system:
      name: bouncing_ball | pinball | multicopter
      params: {...}            # forwarded to the system config (optional)
    planner: hyrrt | hysst
    params:
      p: 0.5                   # flow-vs-jump sampling probability
      K: 10000                 # iteration cap
      Tm: 0.4                  # max flow time per edge [s]
      flow_step: 0.01          # integration step [s]
      tau_reach: 0.01          # Reached tolerance
      eps_bn: 0.8              # HySST selection radius
      eps_s: 0.2               # HySST pruning radius
      batch_size: 1            # HySST solution batch
    x0: [[...], ...]           # optional; defaults to the system's standard roots
    goal:
      box: [[min, max] | null, ...]   # one entry per state dim; null = open
      min_jumps: 0                    # optional
    seed: 7
    out: results               # optional output directory
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import yaml

from .errors import ConfigError
from .hyrrt import HyrrtParams
from .hysst import HysstParams
from .simulation import FlowParams
from .systems import make_system
from .systems.bouncing_ball import BouncingBallConfig
from .systems.multicopter import default_x0 as multicopter_default_x0
from .systems.pinball import default_x0 as pinball_default_x0
from .tree import PlannerProblem

_TOP_KEYS = {"system", "planner", "params", "x0", "goal", "seed", "out"}
_PARAM_KEYS = {"p", "K", "Tm", "flow_step", "tau_reach", "eps_bn", "eps_s", "batch_size"}
_GOAL_KEYS = {"box", "min_jumps"}
_SYSTEM_KEYS = {"name", "params"}


@dataclass
class RunConfig:
    system_name: str
    system_params: dict
    planner: str
    p: float = 0.5
    K: int = 10000
    Tm: float = 0.4
    flow_step: float = 0.01
    tau_reach: float = 1e-2
    eps_bn: float = 0.8
    eps_s: float = 0.2
    batch_size: int = 1
    x0: Optional[list] = None
    goal_box: list = field(default_factory=list)
    min_jumps: int = 0
    seed: int = 0
    out: str = "."

    def planner_params(self):
        flow = FlowParams(Tm=self.Tm, flow_step=self.flow_step)
        if self.planner == "hyrrt":
            return HyrrtParams(p=self.p, K=self.K, flow=flow, tau_reach=self.tau_reach)
        return HysstParams(
            p=self.p,
            K=self.K,
            flow=flow,
            tau_reach=self.tau_reach,
            eps_bn=self.eps_bn,
            eps_s=self.eps_s,
            batch_size=self.batch_size,
        )

    def build_system(self):
        return make_system(self.system_name, self.system_params)

    def initial_states(self):
        if self.x0 is not None:
            return [np.asarray(x, dtype=float) for x in self.x0]
        if self.system_name == "pinball":
            return pinball_default_x0()
        if self.system_name == "multicopter":
            return multicopter_default_x0()
        cfg = BouncingBallConfig(**self.system_params)
        return [np.array([cfg.h_max / 2.0, 0.0])]

    def goal_predicate(self):
        box = self.goal_box
        min_jumps = self.min_jumps

        def goal(x, time):
            if time.j < min_jumps:
                return False
            for v, entry in zip(x, box):
                if entry is None:
                    continue
                lo, hi = entry
                if not (lo <= v <= hi):
                    return False
            return True

        return goal

    def build_problem(self) -> PlannerProblem:
        sys = self.build_system()
        return PlannerProblem(system=sys, X0=self.initial_states(), goal=self.goal_predicate())


def _reject_unknown(mapping: dict, allowed: set, where: str, path: str):
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"{path}: unknown key {key!r} in {where}")


def _require(mapping: dict, key: str, where: str, path: str):
    if key not in mapping:
        raise ConfigError(f"{path}: missing required key {key!r} in {where}")
    return mapping[key]


def parse_config(data: dict, path: str = "<config>") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    _reject_unknown(data, _TOP_KEYS, "config", path)

    system = _require(data, "system", "config", path)
    if not isinstance(system, dict):
        raise ConfigError(f"{path}: 'system' must be a mapping")
    _reject_unknown(system, _SYSTEM_KEYS, "system", path)
    name = _require(system, "name", "system", path)

    planner = _require(data, "planner", "config", path)
    if planner not in ("hyrrt", "hysst"):
        raise ConfigError(f"{path}: planner must be 'hyrrt' or 'hysst', got {planner!r}")

    params = data.get("params", {}) or {}
    if not isinstance(params, dict):
        raise ConfigError(f"{path}: 'params' must be a mapping")
    _reject_unknown(params, _PARAM_KEYS, "params", path)

    goal = _require(data, "goal", "config", path)
    if not isinstance(goal, dict):
        raise ConfigError(f"{path}: 'goal' must be a mapping")
    _reject_unknown(goal, _GOAL_KEYS, "goal", path)
    box = _require(goal, "box", "goal", path)
    for entry in box:
        if entry is not None and (not isinstance(entry, (list, tuple)) or len(entry) != 2):
            raise ConfigError(f"{path}: goal box entries must be [min, max] or null")

    seed = _require(data, "seed", "config", path)

    cfg = RunConfig(
        system_name=str(name),
        system_params=dict(system.get("params", {}) or {}),
        planner=planner,
        x0=data.get("x0"),
        goal_box=list(box),
        min_jumps=int(goal.get("min_jumps", 0)),
        seed=int(seed),
        out=str(data.get("out", ".")),
    )
    for key, value in params.items():
        setattr(cfg, key, type(getattr(cfg, key))(value))
    try:
        cfg.planner_params()
        cfg.build_system()
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "unknown position"
        raise ConfigError(f"{path}: YAML parse error at {where}: {exc}") from exc
    return parse_config(data, path)
