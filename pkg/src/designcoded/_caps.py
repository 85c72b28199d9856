"""Enumeration caps, overridable through ``DESIGNCODED_CAP``."""

from __future__ import annotations

import os

DEFAULT_CAP = 10**6


def enumeration_cap() -> int:
    raw = os.environ.get("DESIGNCODED_CAP")
    if not raw:
        return DEFAULT_CAP
    try:
        value = int(float(raw))
    except ValueError:
        raise ValueError(f"DESIGNCODED_CAP must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"DESIGNCODED_CAP must be positive, got {value}")
    return value


class CapExceeded(ValueError):
    pass
