"""Named instance generators for experiments.

Spec strings have the form ``name`` or ``name:arg,arg,...``:

``one-good:best,rest``
    item 0 scores ``best``, everybody else ``rest``.
``geometric:ratio``
    item ``i`` scores ``ratio**i``.
``lower-bound:theta,eps``
    the true instance of the hard family in
    :func:`plbattle.oracle.build_lower_bound_instances`.
``uniform-random:low,high,seed``
    i.i.d. uniform scores on ``[low, high]`` from a seeded generator.
``explicit:t0,t1,...``
    scores given verbatim; their count must match ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choice_model import PLInstance
from .oracle import build_lower_bound_instances

__all__ = ["InstanceSpec", "generate_instance", "INSTANCE_KINDS"]

INSTANCE_KINDS = ("lower-bound", "one-good", "geometric", "uniform-random", "explicit")


@dataclass(frozen=True)
class InstanceSpec:
    name: str
    params: tuple[float, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "InstanceSpec":
        name, _, rest = text.strip().partition(":")
        name = name.strip()
        if name not in INSTANCE_KINDS:
            raise ValueError(f"unknown instance kind {name!r}; expected one of {', '.join(INSTANCE_KINDS)}")
        try:
            params = tuple(float(x) for x in rest.split(",") if x.strip())
        except ValueError:
            raise ValueError(f"instance parameters must be numbers: {text!r}") from None
        return cls(name, params)

    def __str__(self):
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(f"{p:g}" for p in self.params)


def _want(spec: InstanceSpec, count: int):
    if len(spec.params) != count:
        raise ValueError(f"{spec.name} takes {count} parameters, got {len(spec.params)}")


def generate_instance(spec: InstanceSpec | str, n: int) -> PLInstance:
    if isinstance(spec, str):
        spec = InstanceSpec.parse(spec)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if spec.name == "one-good":
        _want(spec, 2)
        best, rest = spec.params
        thetas = np.full(n, rest)
        thetas[0] = best
        return PLInstance(thetas)
    if spec.name == "geometric":
        _want(spec, 1)
        (ratio,) = spec.params
        if ratio <= 0:
            raise ValueError("geometric ratio must be positive")
        return PLInstance(ratio ** np.arange(n, dtype=float))
    if spec.name == "lower-bound":
        _want(spec, 2)
        theta, eps = spec.params
        return build_lower_bound_instances(n, eps, theta)[0]
    if spec.name == "uniform-random":
        _want(spec, 3)
        low, high, seed = spec.params
        if not 0 < low <= high:
            raise ValueError("uniform-random needs 0 < low <= high")
        rng = np.random.default_rng(int(seed))
        return PLInstance(rng.uniform(low, high, size=n))
    if spec.name == "explicit":
        if len(spec.params) != n:
            raise ValueError(f"explicit instance lists {len(spec.params)} scores but n={n}")
        return PLInstance(np.array(spec.params))
    raise ValueError(f"unknown instance kind {spec.name!r}")
