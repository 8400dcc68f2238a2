"""JSON codecs for pseudo-orbits, shadow results and run configs.

Formats are versioned and round-trip byte-identically for a fixed seed,
so every CLI run is reproducible from its config.
"""

from __future__ import annotations

import dataclasses
import json
import os

from .core import MetricSystem, PseudoOrbit
from .bowen import ShadowResult

SCHEMA_VERSION = 1


def orbit_to_jsonable(sysm: MetricSystem, x: PseudoOrbit,
                      extra: dict | None = None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "system_id": sysm.system_id,
        "lo": x.lo,
        "hi": x.hi,
        "extension": x.extension,
        "entries": [sysm.point_to_jsonable(p) for p in x.entries],
    }
    if extra:
        out.update(extra)
    return out


def orbit_from_jsonable(obj: dict, sysm: MetricSystem | None = None) -> PseudoOrbit:
    if sysm is None:
        from .systems import get_system
        sysm = get_system(obj["system_id"])
    entries = [sysm.point_from_jsonable(e) for e in obj["entries"]]
    return PseudoOrbit(sysm, int(obj["lo"]), int(obj["hi"]), entries,
                       obj["extension"])


def result_to_jsonable(sysm: MetricSystem, res: ShadowResult,
                       extra: dict | None = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "system_id": sysm.system_id}
    out.update(res.to_jsonable(sysm))
    if extra:
        out.update(extra)
    return out


def dump_json(obj, path: str):
    """Atomic, deterministic JSON write (sorted keys, fixed separators)."""
    text = json.dumps(obj, sort_keys=True, indent=1)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text + "\n")
    os.replace(tmp, path)


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


@dataclasses.dataclass
class RunConfig:
    """Everything one CLI run needs; round-trips through JSON unchanged."""

    system: str = "cat"
    method: str = "all"
    schedule: str = "constant"
    delta: float = 1e-4
    seed: int = 1
    window: int = 32
    quiet_halfwidth: int = 16
    tol: float = 1e-12
    max_stages: int = 512
    suite: str = "all"
    assert_lemmas: bool = True
    system_params: dict = dataclasses.field(default_factory=dict)
    out: str | None = None
    schema_version: int = SCHEMA_VERSION

    def to_jsonable(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_jsonable(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**obj)

    def with_env_seed(self) -> "RunConfig":
        env = os.environ.get("SHADOWKIT_SEED")
        if env is not None:
            return dataclasses.replace(self, seed=int(env))
        return self
