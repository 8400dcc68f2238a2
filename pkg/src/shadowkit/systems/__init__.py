"""Concrete systems, selectable by string id.

Ids: ``cat``, ``ns-circle``, ``shift-<k>`` for a k-symbol alphabet,
``shift-circle``, and ``odometer-<D>``.
"""

from __future__ import annotations

from .cat import (CatMapSystem, PerturbedCatSystem, make_cat_bracket,
                  cat_oracle_shadow, cat_oracle_error_bound)
from .northsouth import NorthSouthSystem, make_ns_bracket, \
    make_ns_bowen_bracket, ns_counterexample
from .odometer import OdometerSystem, odometer_projection_shadow
from .shift import (SequenceSystem, SeqPoint, make_shift_system,
                    make_shift_bracket, shift_canonical_shadow,
                    shift_mutual_induction, shift_limit_assembly)

_cache: dict = {}


def get_system(system_id: str, **params):
    """Build (and memoize, for default parameters) a system by id."""
    key = (system_id, tuple(sorted(params.items())))
    if key in _cache:
        return _cache[key]
    if system_id == "cat":
        sysm = CatMapSystem(**params)
    elif system_id == "ns-circle":
        sysm = NorthSouthSystem(**params)
    elif system_id.startswith("shift-"):
        suffix = system_id.split("-", 1)[1]
        k = "circle" if suffix == "circle" else int(suffix)
        sysm = make_shift_system(k, **params)
    elif system_id.startswith("odometer-"):
        digits = int(system_id.split("-", 1)[1])
        sysm = OdometerSystem(digits, **params)
    else:
        raise ValueError(f"unknown system id {system_id!r}")
    _cache[key] = sysm
    return sysm


SYSTEM_IDS = ("cat", "ns-circle", "shift-2", "shift-3", "shift-circle",
              "odometer-8")
