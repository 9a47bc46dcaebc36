"""Lazy streams with explicit divergence, folds, and fueled observation.

A :class:`Colist` is a deferred stream cell: forcing it reveals either
bottom (``None`` — a diverging tail, *not* an empty list) or a cons pair
``(head, tail)``.  Finite approximants are plain Python lists produced by
:func:`colist_idl`; stream functions are evaluated either semantically, as
chains of list folds over truncations (:func:`cofold_sem`), or lazily, with
the fold step deciding how much of the stream to force
(:func:`cofold_lazy`).
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, List, Optional, Tuple, TypeVar, Union

from .order import (
    ApproxChain,
    BudgetExhausted,
    Conat,
    Direction,
    StepBudget,
    Thunk,
    ensure_budget,
    make_chain,
)

A = TypeVar("A")
B = TypeVar("B")

Cell = Optional[Tuple[Any, "Colist"]]


class Colist(Generic[A]):
    """A lazy stream; forcing the cell spends one step of the active budget."""

    __slots__ = ("_cell_fn", "_cell", "_forced")

    def __init__(self, cell_fn: Callable[[Optional[StepBudget]], Cell]):
        self._cell_fn = cell_fn
        self._cell: Cell = None
        self._forced = False

    def force(self, budget: Optional[StepBudget] = None) -> Cell:
        """Reveal the head cell: ``None`` for bottom, else ``(head, tail)``.

        A body interrupted by budget exhaustion is not memoized; a later
        force with a fresh budget resumes from the memoized cells it reached.
        """
        if budget is not None:
            budget.spend()
        if not self._forced:
            cell = self._cell_fn(budget)
            self._cell = cell
            self._forced = True
            self._cell_fn = None  # type: ignore[assignment]
        return self._cell


def colist_bot() -> Colist:
    """The diverging stream (bottom)."""
    return Colist(lambda budget: None)


def cocons(head: Any, tail: Union[Colist, Callable[[], Colist]]) -> Colist:
    """Cons cell with an eager head and an optionally deferred tail."""
    if isinstance(tail, Colist):
        return Colist(lambda budget: (head, tail))
    return Colist(lambda budget: (head, tail()))


def incl(items: Iterable[Any]) -> Colist:
    """Inject a finite list as a bottom-terminated stream.

    The empty list maps to bottom: finite approximants cannot distinguish
    an exhausted prefix from a diverging tail.
    """
    acc = colist_bot()
    for x in reversed(list(items)):
        acc = cocons(x, acc)
    return acc


def colist_idl(l: Colist, fuel: int, budget: Optional[StepBudget] = None) -> List[Any]:
    """The fuel-indexed truncation: up to ``fuel`` heads, cut at bottom."""
    budget = ensure_budget(budget)
    out: List[Any] = []
    cur = l
    for _ in range(fuel):
        cell = cur.force(budget)
        if cell is None:
            break
        head, cur = cell
        out.append(head)
    return out


def list_fold(z: B, f: Callable[[Any, B], B], items: List[Any]) -> B:
    """Right fold over a finite list: ``f(x0, f(x1, ... f(xn-1, z)))``."""
    acc = z
    for x in reversed(items):
        acc = f(x, acc)
    return acc


def list_prefix_le(l1: List[Any], l2: List[Any]) -> bool:
    """Prefix order on finite truncations."""
    return len(l1) <= len(l2) and l2[: len(l1)] == l1


# ---------------------------------------------------------------------------
# Folds.
# ---------------------------------------------------------------------------


class _HitBottomSignal(Exception):
    pass


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


#: Returned when a lazy fold forced an explicitly diverging tail.
HIT_BOTTOM = _Marker("HIT_BOTTOM")
#: Returned when a fold or productivity check ran out of budget.
EXHAUSTED = _Marker("EXHAUSTED")


def cofold_sem(
    f: Callable[[Any, B], B],
    bottom: B,
    l: Colist,
    fuel: int,
    budget: Optional[StepBudget] = None,
    le: Optional[Callable[[Any, Any], bool]] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> ApproxChain:
    """Semantic fold: chain of list folds over the fuel-indexed truncations.

    ``values[i] = list_fold(bottom, f, colist_idl(l, i))``.  For an ``f``
    monotone in its second argument this is an increasing chain; a
    caller-supplied step that breaks the chain raises MonotonicityViolation.
    """
    budget = ensure_budget(budget)
    prefix = colist_idl(l, fuel, budget)
    values = [list_fold(bottom, f, prefix[:i]) for i in range(fuel + 1)]
    return make_chain(values, Direction.INCREASING, le=le, eq=eq)


def cofold_lazy(
    f: Callable[[Any, Thunk], B],
    l: Colist,
    budget: Optional[StepBudget] = None,
) -> Union[B, _Marker]:
    """Strictness-driven fold: ``f`` gets the head and a thunk of the tail fold.

    Only as much of the stream is forced as ``f`` demands.  Forcing an
    explicitly diverging tail yields :data:`HIT_BOTTOM`.  A fold that never
    stops demanding tails is cut off and yields :data:`EXHAUSTED` — by the
    step budget, or by the interpreter's recursion bound if that trips
    first (each forced tail is a nested call through ``f``).
    """
    budget = ensure_budget(budget)

    def go(s: Colist) -> B:
        cell = s.force(budget)
        if cell is None:
            raise _HitBottomSignal()
        head, tail = cell
        return f(head, Thunk(lambda: go(tail), budget=budget))

    try:
        return go(l)
    except _HitBottomSignal:
        return HIT_BOTTOM
    except (BudgetExhausted, RecursionError):
        return EXHAUSTED


# ---------------------------------------------------------------------------
# Stream transformers and observations.
# ---------------------------------------------------------------------------


def filter_colist(pred: Callable[[Any], bool], l: Colist) -> Colist:
    """Lazy filter.

    Keeps the computation rule: on a cons whose head passes, the output is a
    cons; otherwise filtering continues down the tail, spending budget per
    cell scanned.  Filtering bottom is bottom — and a stream with no passing
    element behaves identically: forcing it exhausts the caller's budget.
    """

    def cell(budget: Optional[StepBudget]) -> Cell:
        cur = l
        while True:
            c = cur.force(budget)
            if c is None:
                return None
            head, tail = c
            if pred(head):
                return (head, filter_colist(pred, tail))
            cur = tail

    return Colist(cell)


@dataclass(frozen=True)
class Found:
    index: int


@dataclass(frozen=True)
class NotFoundUpTo:
    fuel: int


def coexists(
    pred: Callable[[Any], bool],
    l: Colist,
    max_fuel: int,
    budget: Optional[StepBudget] = None,
) -> Union[Found, NotFoundUpTo]:
    """Semi-decide existence: scan positions ``0..max_fuel`` inclusive."""
    budget = ensure_budget(budget)
    cur = l
    for i in range(max_fuel + 1):
        cell = cur.force(budget)
        if cell is None:
            return NotFoundUpTo(max_fuel)
        head, cur = cell
        if pred(head):
            return Found(i)
    return NotFoundUpTo(max_fuel)


@dataclass(frozen=True)
class HoldsUpTo:
    depth: int


@dataclass(frozen=True)
class CounterexampleAt:
    index: int


def coforall_upto(
    pred: Callable[[Any], bool],
    l: Colist,
    depth: int,
    budget: Optional[StepBudget] = None,
) -> Union[HoldsUpTo, CounterexampleAt]:
    """Check ``pred`` on every element of the fuel-``depth`` truncation."""
    budget = ensure_budget(budget)
    cur = l
    for i in range(depth):
        cell = cur.force(budget)
        if cell is None:
            break
        head, cur = cell
        if not pred(head):
            return CounterexampleAt(i)
    return HoldsUpTo(depth)


def colength_chain(
    l: Colist, fuel: int, budget: Optional[StepBudget] = None
) -> ApproxChain:
    """Chain of truncation lengths — the fueled view of the stream's length."""
    budget = ensure_budget(budget)
    n = len(colist_idl(l, fuel, budget))
    return make_chain(
        [min(i, n) for i in range(fuel + 1)], Direction.INCREASING
    )


def colength(l: Colist) -> Conat:
    """Length of a stream as a lazy conatural (omega for productive streams)."""

    def cell(budget: Optional[StepBudget]) -> Optional[Conat]:
        c = l.force(budget)
        return None if c is None else colength(c[1])

    return Conat(cell)


def check_productive(
    l: Colist, n: int, budget: Optional[StepBudget] = None
) -> Union[bool, _Marker]:
    """True iff ``n`` cons cells force within budget; EXHAUSTED if it ran out."""
    budget = ensure_budget(budget)
    cur = l
    try:
        for _ in range(n):
            cell = cur.force(budget)
            if cell is None:
                return False
            cur = cell[1]
    except BudgetExhausted:
        return EXHAUSTED
    return True


def ordered_upto(
    relation: Callable[[Any, Any], bool],
    l: Colist,
    depth: int,
    budget: Optional[StepBudget] = None,
) -> bool:
    """Adjacent pairs of the fuel-``depth`` truncation satisfy ``relation``."""
    budget = ensure_budget(budget)
    prefix = colist_idl(l, depth, budget)
    return all(relation(prefix[i], prefix[i + 1]) for i in range(len(prefix) - 1))


def prefix_le_upto(
    l1: Colist,
    l2: Colist,
    depth: int,
    budget: Optional[StepBudget] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> bool:
    """Decide the stream order restricted to the depth-``depth`` truncation of l1.

    True iff the truncation of ``l1`` is a prefix of ``l2``: bottoming out
    early is below everything; a longer or mismatching left prefix is not.
    """
    budget = ensure_budget(budget)
    cur1, cur2 = l1, l2
    for _ in range(depth):
        c1 = cur1.force(budget)
        if c1 is None:
            return True
        c2 = cur2.force(budget)
        if c2 is None:
            return False
        if not eq(c1[0], c2[0]):
            return False
        cur1, cur2 = c1[1], c2[1]
    return True
