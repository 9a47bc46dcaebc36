"""Distributions as lazy trees over fair bits.

Each constructor returns a tree whose leaves carry samples; expectation
folds over it recover the distribution's probabilities exactly, and the
sampler executes it against a bit source.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .cotree import Cotree, Inl, Inr, coleaf, conode, iter_cotree, map_cotree
from .order import ERat


def bernoulli(p: ERat) -> Cotree:
    """Tree returning True with probability ``p`` (a rational in [0, 1]).

    Dyadic cases resolve by direct bit splits; otherwise a rejection loop
    reads ``ceil(log2 den)`` bits per round (most significant bit first,
    true = 1) and retries when the round lands outside the denominator.
    """
    p = _check_prob(p)
    num, den = p.numerator, p.denominator
    if num == 0:
        return coleaf(False)
    if num == den:
        return coleaf(True)
    if den == 2:
        return conode(coleaf(True), coleaf(False))
    if (num, den) == (2, 3):
        # One bit accepts; a second bit rejects or retries.
        def loop() -> Cotree:
            return conode(coleaf(True), conode(coleaf(False), loop))

        return loop()

    k = (den - 1).bit_length()
    return iter_cotree(lambda state: _read_round(k, 0, num, den), ())


def _read_round(k: int, acc: int, num: int, den: int) -> Cotree:
    """Accumulate k bits into acc (MSB first), then classify the round."""
    if k == 0:
        if acc < num:
            return coleaf(Inr(True))
        if acc < den:
            return coleaf(Inr(False))
        return coleaf(Inl(()))  # out of range: retry
    return conode(
        lambda: _read_round(k - 1, acc * 2 + 1, num, den),
        lambda: _read_round(k - 1, acc * 2, num, den),
    )


def uniform(n: int) -> Cotree:
    """Uniform sample from {0, ..., n-1} by k-bit rejection."""
    if n < 1:
        raise ValueError("uniform needs n >= 1")
    if n == 1:
        return coleaf(0)
    k = (n - 1).bit_length()

    def read(j: int, acc: int) -> Cotree:
        if j == 0:
            return coleaf(Inr(acc)) if acc < n else coleaf(Inl(()))
        return conode(
            lambda: read(j - 1, acc * 2 + 1),
            lambda: read(j - 1, acc * 2),
        )

    return iter_cotree(lambda state: read(k, 0), ())


def geometric(p: ERat) -> Cotree:
    """Number of failures before the first success of a bernoulli(p) coin:
    P(k) = p * (1-p)^k."""
    frac = _check_prob(p)
    if frac.numerator == 0:
        raise ValueError("geometric requires p > 0")
    coin = ERat(frac)
    return iter_cotree(
        lambda k: map_cotree(
            lambda hit: Inr(k) if hit else Inl(k + 1), bernoulli(coin)
        ),
        0,
    )


def _check_prob(p: ERat) -> Fraction:
    if p.is_infinite:
        raise ValueError("probability must be finite")
    frac = p.frac
    if not (0 <= frac <= 1):
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return frac


# ---------------------------------------------------------------------------
# Specs for the CLI / service.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dist:
    kind: str
    param: str
    tree: Cotree


def parse_dist_spec(spec: str) -> Dist:
    """Parse 'bernoulli:2/3' | 'uniform:6' | 'geometric:1/2'."""
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise ValueError(
            f"bad distribution spec {spec!r}; expected kind:param "
            "(bernoulli:P, uniform:N, geometric:P)"
        )
    if kind == "bernoulli":
        return Dist("bernoulli", arg, bernoulli(ERat.parse(arg)))
    if kind == "uniform":
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"uniform parameter must be an integer, got {arg!r}")
        return Dist("uniform", arg, uniform(n))
    if kind == "geometric":
        return Dist("geometric", arg, geometric(ERat.parse(arg)))
    raise ValueError(f"unknown distribution kind {kind!r}")


def parse_event(event: str) -> Callable[[Any], bool]:
    """Parse an event over sample values: 'true' | 'false' | 'k=N'."""
    if event == "true":
        return lambda v: v is True
    if event == "false":
        return lambda v: v is False
    if event.startswith("k="):
        try:
            n = int(event[2:])
        except ValueError:
            raise ValueError(f"bad event {event!r}: k= needs an integer")
        return lambda v: v == n
    raise ValueError(f"unknown event {event!r}; expected true, false, or k=N")
