"""Built-in test functions addressable by id (CLI and property tests).

Univariate ids: ``pow<k>`` (t^k, 0 <= k <= 16), ``exp``, ``sin``, ``cos``, ``gauss`` (exp(-t^2)).
Every function accepts complex numpy arrays. Polynomial ids also expose a
symbolic form so that operators can be applied exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgument

_POW = re.compile(r"pow(\d+)$")


@dataclass(frozen=True)
class UnivariateFunction:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    degree: int | None = None  # set for polynomials

    def __call__(self, t):
        return self.f(np.asarray(t, dtype=complex))

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None


_TRANSCENDENTAL = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "gauss": lambda t: np.exp(-t * t),
}

FAMILY = ("pow0", "pow1", "pow2", "pow3", "pow4", "pow6", "exp", "sin", "cos", "gauss")


def univariate(name: str) -> UnivariateFunction:
    m = _POW.match(name)
    if m:
        k = int(m.group(1))
        if k > 16:
            raise InvalidArgument(f"power {k} exceeds 16")
        return UnivariateFunction(name, lambda t, k=k: t**k, k)
    if name in _TRANSCENDENTAL:
        return UnivariateFunction(name, _TRANSCENDENTAL[name])
    raise InvalidArgument(f"unknown function id {name!r}; known: pow<k>, {', '.join(_TRANSCENDENTAL)}")


# -- functions on R^n used as boundary data and right-hand sides ---------------
#
# Each takes the full point array (..., n) and the index ``skip`` of the
# coordinate it must not depend on (None for right-hand sides).

def _others(x: np.ndarray, skip: int | None) -> np.ndarray:
    if skip is None:
        return x
    return np.delete(x, skip, axis=-1)


FIELD_FUNCTIONS: dict[str, Callable[[np.ndarray, int | None], np.ndarray]] = {
    "zero": lambda x, s: np.zeros(x.shape[:-1]),
    "one": lambda x, s: np.ones(x.shape[:-1]),
    "sum": lambda x, s: _others(x, s).sum(axis=-1),
    "one_plus_sum": lambda x, s: 1.0 + _others(x, s).sum(axis=-1),
    "prod": lambda x, s: np.prod(_others(x, s), axis=-1),
    "prod1": lambda x, s: np.prod(1.0 + _others(x, s), axis=-1),
    "exp_sum": lambda x, s: np.exp(_others(x, s).sum(axis=-1)),
    "cos_sum": lambda x, s: np.cos(_others(x, s).sum(axis=-1)),
    "sin_sum": lambda x, s: np.sin(_others(x, s).sum(axis=-1)),
}


def field_function(name: str) -> Callable[[np.ndarray, int | None], np.ndarray]:
    try:
        return FIELD_FUNCTIONS[name]
    except KeyError:
        raise InvalidArgument(f"unknown field function {name!r}; known: {', '.join(FIELD_FUNCTIONS)}") from None
