"""Size guards for constructions that can blow up.

Thresholds are configuration, not constants: environment variables
TREEMSO_MAX_STATES / TREEMSO_MAX_TRANSITIONS override the defaults, and
every guarded entry point accepts an explicit `GuardConfig`.
"""

import os
from dataclasses import dataclass


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class GuardConfig:
    max_states: int = 0
    max_transitions: int = 0

    def __post_init__(self):
        if not self.max_states:
            object.__setattr__(self, "max_states", _env_int("TREEMSO_MAX_STATES", 20000))
        if not self.max_transitions:
            object.__setattr__(
                self, "max_transitions", _env_int("TREEMSO_MAX_TRANSITIONS", 400000)
            )


DEFAULT_GUARD = GuardConfig()
