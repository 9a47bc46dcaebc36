"""Unbounded sieve of Eratosthenes on lazy streams, with self-verification.

The sieve peels the head ``n`` off the stream of naturals from 2 and lazily
filters all multiples of ``n`` out of the sieved tail.  Every cell is
productive, so any finite prefix forces in bounded time; the verification
report checks the forced prefix against trial division.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import List, Optional

from .colist import (
    Colist,
    Found,
    cocons,
    coexists,
    filter_colist,
    ordered_upto,
)
from .order import BudgetExhausted, StepBudget, ensure_budget


def nats(start: int) -> Colist:
    """The stream ``start, start+1, start+2, ...``."""
    return cocons(start, lambda: nats(start + 1))


def _sieve_aux(l: Colist) -> Colist:
    def cell(budget):
        c = l.force(budget)
        if c is None:
            return None
        n, tail = c
        return (n, filter_colist(lambda m: m % n != 0, _sieve_aux(tail)))

    return Colist(cell)


def sieve() -> Colist:
    """The stream of all primes in order."""
    return _sieve_aux(nats(2))


def is_prime(n: int) -> bool:
    """Trial division: ``n`` prime iff 1 < n and no m in (1, n) divides it.

    Checking divisors up to ``isqrt(n)`` is equivalent: a proper divisor
    above the square root pairs with one below it.
    """
    if n < 2:
        return False
    for m in range(2, isqrt(n) + 1):
        if n % m == 0:
            return False
    return True


@dataclass
class SieveReport:
    bound: int
    sound: bool
    complete: bool
    sorted: bool
    nodup: bool
    productive_to: int
    outputs: List[int]
    exhausted: bool


def verify_sieve(bound: int, budget: Optional[StepBudget] = None) -> SieveReport:
    """Force the sieve up to ``bound`` and check the prefix against trial division.

    ``outputs`` is the forced prefix of values <= bound; ``productive_to``
    counts the cons cells forced before stopping.  On budget exhaustion a
    partial report is returned with ``exhausted`` set.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    budget = ensure_budget(budget)
    s = sieve()
    outputs: List[int] = []
    productive_to = 0
    exhausted = False
    cur = s
    try:
        while True:
            cell = cur.force(budget)
            if cell is None:  # pragma: no cover - the sieve never bottoms out
                break
            v, cur = cell
            productive_to += 1
            if v > bound:
                break
            outputs.append(v)
    except BudgetExhausted:
        exhausted = True

    sound = all(is_prime(v) for v in outputs)
    oracle = [p for p in range(2, bound + 1) if is_prime(p)]
    search_fuel = len(oracle) + 1
    complete = not exhausted
    if complete:
        try:
            for p in oracle:
                if not isinstance(coexists(lambda x: x == p, s, search_fuel, budget), Found):
                    complete = False
                    break
        except BudgetExhausted:
            exhausted = True
            complete = False

    depth = len(outputs)
    try:
        in_order = ordered_upto(lambda a, b: a < b, s, depth, budget)
        distinct = ordered_upto(lambda a, b: a != b, s, depth, budget)
    except BudgetExhausted:
        exhausted = True
        in_order = distinct = False

    return SieveReport(
        bound=bound,
        sound=sound,
        complete=complete,
        sorted=in_order,
        nodup=distinct,
        productive_to=productive_to,
        outputs=outputs,
        exhausted=exhausted,
    )


def first_primes(
    count: int, budget: Optional[StepBudget] = None
) -> tuple[List[int], bool]:
    """The first ``count`` sieve outputs plus an exhaustion flag.

    On budget exhaustion the prefix forced so far is returned with the flag
    set, so callers can report partial progress instead of looping.
    """
    budget = ensure_budget(budget)
    s = sieve()
    out: List[int] = []
    cur = s
    try:
        for _ in range(count):
            cell = cur.force(budget)
            if cell is None:  # pragma: no cover - the sieve never bottoms out
                break
            head, cur = cell
            out.append(head)
    except BudgetExhausted:
        return out, True
    return out, False
