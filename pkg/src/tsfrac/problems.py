"""Manufactured benchmark problems with closed-form exact solutions.

Both cases share the exact solution u(x,t) = (1-x^2)^{s+alpha/2} (t^gamma + 1)
on (-1,1), zero-extended.  The time part has Caputo derivative
Gamma(1+gamma), and the spatial profile has a known fractional Laplacian

    c(s,alpha) * 2F1((alpha+1)/2, -s; 1/2; x^2),
    c(s,alpha) = 2^alpha Gamma((alpha+1)/2) Gamma(s+1+alpha/2)
                 / (sqrt(pi) Gamma(s+1)),

with the hypergeometric series terminating because -s is a negative integer.
The source term combines the two.  Case "example1" uses s = 3 and
kappa = (1+t) e^{0.8x+1}; case "example2" uses s = 1 and
kappa = 7 [ln(5+2x+t) + cos(xt)] / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .scheme import ProblemSpec

CASE_NAMES = ("example1", "example2")


@dataclass(frozen=True)
class ManufacturedCase:
    name: str
    s: int
    alpha: float
    gamma: float
    spec: ProblemSpec


def hypergeom_terminating(a: float, s: int, x2) -> np.ndarray | float:
    """2F1(a, -s; 1/2; x2) for positive integer s: an s-term Pochhammer sum.

    Exact polynomial evaluation; the series terminates at degree s.
    """
    if s < 1 or int(s) != s:
        raise ValueError(f"s must be a positive integer, got {s}")
    x2 = np.asarray(x2, dtype=float)
    total = np.ones_like(x2)
    term = np.ones_like(x2)
    for k in range(int(s)):
        term = term * (a + k) * (-s + k) / ((0.5 + k) * (1.0 + k)) * x2
        total = total + term
    return total if total.ndim else float(total)


def _ifl_prefactor(s: int, alpha: float) -> float:
    return (
        2.0 ** alpha
        * math.exp(
            gammaln((alpha + 1.0) / 2.0)
            + gammaln(s + 1.0 + alpha / 2.0)
            - gammaln(s + 1.0)
        )
        / math.sqrt(math.pi)
    )


def exact_ifl_of_bump(s: int, alpha: float, x) -> np.ndarray | float:
    """Exact fractional Laplacian of (1-x^2)^{s+alpha/2} inside [-1, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    out = _ifl_prefactor(s, alpha) * hypergeom_terminating(
        (alpha + 1.0) / 2.0, s, x * x
    )
    return out if np.ndim(out) else float(out)


def _bump(x, power: float):
    # exp((s + alpha/2) log1p(-x^2)) with an explicit zero at |x| = 1: the
    # exponent is fractional so accuracy near the boundary matters
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(power * np.log1p(-x[inside] * x[inside]))
    return out if out.ndim else float(out)


def _kappa(kind: str):
    if kind == "example1":
        return lambda x, t: (1.0 + t) * np.exp(0.8 * np.asarray(x) + 1.0)
    if kind == "example2":
        return lambda x, t: 7.0 * (np.log(5.0 + 2.0 * np.asarray(x) + t)
                                   + np.cos(np.asarray(x) * t)) / 4.0
    raise KeyError(f"unknown case {kind!r}; available: {CASE_NAMES}")


def example_source(kind: str, s: int, alpha: float, gamma: float, x, t):
    """Source f(x,t) that manufactures the exact solution for the given case."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    kappa = _kappa(kind)
    power = s + alpha / 2.0
    return (
        math.exp(gammaln(1.0 + gamma)) * _bump(x, power)
        + kappa(x, t)
        * _ifl_prefactor(s, alpha)
        * hypergeom_terminating((alpha + 1.0) / 2.0, s, x * x)
        * (t ** gamma + 1.0)
    )


def make_case(name: str, alpha: float, gamma: float, s: int | None = None,
              T: float = 1.0) -> ManufacturedCase:
    """Case registry: "example1" (s=3 default) or "example2" (s=1 fixed)."""
    if name not in CASE_NAMES:
        raise KeyError(f"unknown case {name!r}; available: {CASE_NAMES}")
    if name == "example2":
        s = 1
    elif s is None:
        s = 3
    power = s + alpha / 2.0
    kappa = _kappa(name)

    def exact(x, t, power=power, gamma=gamma):
        return _bump(x, power) * (t ** gamma + 1.0)

    spec = ProblemSpec(
        gamma=gamma,
        alpha=alpha,
        l=1.0,
        T=T,
        kappa=kappa,
        source=lambda x, t: example_source(name, s, alpha, gamma, x, t),
        initial=lambda x: _bump(x, power),
        exact=exact,
    )
    return ManufacturedCase(name=name, s=int(s), alpha=float(alpha),
                            gamma=float(gamma), spec=spec)
