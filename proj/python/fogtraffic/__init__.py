"""Fog-computing traffic signal simulator.

Configurations are plain dicts using the same keys as the JSON config files;
anything left out takes the built-in default.
"""

import json

from fogtraffic._core import (
    ComparisonError,
    ConfigError,
    ControllerError,
    TopologyError,
    allocate_green,
    cycle_time,
    green_time,
    iov_plan,
    itcms_plan,
    path,
    road_capacity,
    road_share,
    stl_plan,
    total_vehicles,
)
from fogtraffic import _core

__all__ = [
    "ComparisonError",
    "ConfigError",
    "ControllerError",
    "TopologyError",
    "allocate_green",
    "compare",
    "cycle_time",
    "default_config",
    "effective_config",
    "green_time",
    "iov_plan",
    "itcms_plan",
    "path",
    "road_capacity",
    "road_share",
    "route_latency",
    "run",
    "stl_plan",
    "sweep",
    "total_vehicles",
]


def _dump(config):
    return json.dumps(config or {})


def default_config():
    return json.loads(_core.default_config_json())


def effective_config(config=None):
    """Defaults merged with the given overrides."""
    return json.loads(_core.effective_config_json(_dump(config)))


def route_latency(source, destination, config=None):
    """Latency in milliseconds between two named devices."""
    return _core.route_latency(source, destination, _dump(config))


def run(config=None, out=None):
    """Run one scenario; returns the metrics report. Writes CSVs when out is set."""
    return json.loads(_core.run_json(_dump(config), out))


def compare(config=None, controllers=("itcms", "stl", "iov"), out=None):
    return json.loads(_core.compare_json(_dump(config), list(controllers), out))


def sweep(config=None, nodes=(4, 8, 14), out=None):
    return json.loads(_core.sweep_json(_dump(config), list(nodes), out))
