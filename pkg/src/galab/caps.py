"""Resource caps.  ``GALAB_CAPS="degree=80,basis=4000"`` overrides the defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import InputError


@dataclass(frozen=True)
class Caps:
    degree: int = 64  # total degree of any polynomial
    basis: int = 3000  # elements in a Groebner basis under construction
    pairs: int = 200000  # S-pairs processed by one Buchberger run
    f_order: int = 32  # f-adic order search
    nilpotency: int = 64  # iterations of delta in is_lnd
    tower: int = 32  # hard loop bound for the tower, on top of nu <= p
    minpoly_degree: int = 64

    @classmethod
    def from_env(cls, env=None) -> "Caps":
        raw = (os.environ if env is None else env).get("GALAB_CAPS", "").strip()
        caps = cls()
        if not raw:
            return caps
        known = {f.name for f in fields(cls)}
        updates = {}
        for item in raw.split(","):
            if not item.strip():
                continue
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in known:
                raise InputError(f"GALAB_CAPS: unknown cap {key!r}")
            try:
                updates[key] = int(value)
            except ValueError:
                raise InputError(f"GALAB_CAPS: cap {key!r} needs an integer") from None
        return replace(caps, **updates)


_active = Caps.from_env()


def get_caps() -> Caps:
    return _active


def set_caps(caps: Caps) -> Caps:
    """Install ``caps`` globally and return the previous value."""
    global _active
    previous, _active = _active, caps
    return previous
