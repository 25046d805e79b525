"""Scenario runner: JSON configuration in, CSV/JSON tables out."""

from .config import SCENARIOS, ScenarioConfig, default_config, load_config
from .output import emit
from .runner import RunRecord, run

__all__ = ["SCENARIOS", "RunRecord", "ScenarioConfig", "default_config", "emit", "load_config", "run"]
