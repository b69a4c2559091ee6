"""Channel specifications: builtin shorthands and explicit matrix form.

Shorthands (input distribution defaults to uniform):
    bsc:p        binary symmetric, crossover p
    bec:p        binary erasure, erasure p (output alphabet 0, erased, 1)
    noiseless:k  k-ary identity

Explicit form is a mapping with ``channel_rows`` (row-stochastic matrix) and
an optional ``input_dist`` (defaults to uniform over the rows).
"""

from __future__ import annotations

import numpy as np

from .probability import Alphabet, Channel, FiniteDistribution, make_channel, make_distribution


def uniform(k: int) -> FiniteDistribution:
    return make_distribution(np.ones(k))


def bsc(p: float) -> Channel:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"crossover probability must be in [0, 1], got {p}")
    return Channel(
        Alphabet(2, ("0", "1")),
        Alphabet(2, ("0", "1")),
        np.array([[1.0 - p, p], [p, 1.0 - p]]),
    )


def bec(p: float) -> Channel:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"erasure probability must be in [0, 1], got {p}")
    return Channel(
        Alphabet(2, ("0", "1")),
        Alphabet(3, ("0", "e", "1")),
        np.array([[1.0 - p, p, 0.0], [0.0, p, 1.0 - p]]),
    )


def noiseless(k: int) -> Channel:
    if k < 1:
        raise ValueError(f"alphabet size must be >= 1, got {k}")
    return make_channel(np.eye(k))


def parse_channel_spec(spec) -> tuple[FiniteDistribution, Channel]:
    """Build (input distribution, channel) from a shorthand string or mapping."""
    if isinstance(spec, str):
        name, sep, arg = spec.partition(":")
        if not sep:
            raise ValueError(f"malformed channel shorthand {spec!r} (expected name:arg)")
        name = name.strip().lower()
        if name == "bsc":
            ch = bsc(float(arg))
        elif name == "bec":
            ch = bec(float(arg))
        elif name == "noiseless":
            ch = noiseless(int(arg))
        else:
            raise ValueError(f"unknown channel shorthand {name!r}")
        return uniform(ch.input.size), ch

    if isinstance(spec, dict):
        unknown = set(spec) - {"input_dist", "channel_rows", "shorthand"}
        if unknown:
            raise ValueError(f"unknown channel spec keys: {sorted(unknown)}")
        if spec.get("shorthand") is not None:
            if spec.get("channel_rows") is not None:
                raise ValueError("give either a shorthand or channel_rows, not both")
            qx, ch = parse_channel_spec(spec["shorthand"])
            if spec.get("input_dist") is not None:
                qx = make_distribution(np.asarray(spec["input_dist"], dtype=float))
                if qx.size != ch.input.size:
                    raise ValueError("input_dist length does not match the shorthand channel")
            return qx, ch
        if spec.get("channel_rows") is None:
            raise ValueError("channel spec needs channel_rows or a shorthand")
        ch = make_channel(np.asarray(spec["channel_rows"], dtype=float))
        if spec.get("input_dist") is not None:
            qx = make_distribution(np.asarray(spec["input_dist"], dtype=float))
            if qx.size != ch.input.size:
                raise ValueError("input_dist length does not match channel_rows")
        else:
            qx = uniform(ch.input.size)
        return qx, ch

    raise ValueError(f"cannot parse channel spec of type {type(spec).__name__}")
