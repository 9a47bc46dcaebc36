"""Approximation core: exact extended rationals, step budgets, fuel chains.

Lazy structures in this package are observed through *finite truncations*:
a lazy value ``a`` is cut down to a finite approximant at each fuel level
``n``, and a function on finite approximants is evaluated along the whole
sequence.  The resulting :class:`ApproxChain` carries the values at fuels
``0..n``, the direction they move in, and a verdict about whether they
stopped changing.  Divergence is kept at bay by :class:`StepBudget`: every
force of a lazy cell spends one step, and running out raises
:class:`BudgetExhausted` instead of looping.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Generic, Iterable, Optional, Sequence, TypeVar, Union

A = TypeVar("A")
V = TypeVar("V")

DEFAULT_STEP_LIMIT = 10**6


class BudgetExhausted(Exception):
    """A StepBudget ran out before the computation finished."""

    def __init__(self, limit: int):
        super().__init__(f"step budget of {limit} exhausted")
        self.limit = limit


class StepBudget:
    """Mutable counter bounding how many lazy cells a call may force."""

    __slots__ = ("limit", "remaining")

    def __init__(self, limit: int = DEFAULT_STEP_LIMIT):
        if limit < 0:
            raise ValueError("budget limit must be nonnegative")
        self.limit = limit
        self.remaining = limit

    def spend(self, n: int = 1) -> None:
        if self.remaining < n:
            self.remaining = 0
            raise BudgetExhausted(self.limit)
        self.remaining -= n

    @property
    def used(self) -> int:
        return self.limit - self.remaining

    def __repr__(self) -> str:
        return f"StepBudget({self.remaining}/{self.limit})"


def ensure_budget(budget: Optional[StepBudget]) -> StepBudget:
    """Default budget for library entry points: a fresh 10^6-step allowance."""
    return budget if budget is not None else StepBudget(DEFAULT_STEP_LIMIT)


class Thunk(Generic[A]):
    """Memoized deferred computation.

    Forcing spends one step from the budget bound at creation time (or one
    passed explicitly).  The body runs at most once; a body interrupted by
    budget exhaustion is not memoized and will be retried on the next force.
    """

    __slots__ = ("_fn", "_value", "_forced", "_budget")

    def __init__(self, fn: Callable[[], A], budget: Optional[StepBudget] = None):
        self._fn = fn
        self._value: Any = None
        self._forced = False
        self._budget = budget

    def force(self, budget: Optional[StepBudget] = None) -> A:
        b = budget if budget is not None else self._budget
        if b is not None:
            b.spend()
        if not self._forced:
            self._value = self._fn()
            self._forced = True
            self._fn = None  # type: ignore[assignment]
        return self._value


# ---------------------------------------------------------------------------
# Exact nonnegative rationals extended with +infinity.
# ---------------------------------------------------------------------------

_ERAT_COERCIBLE = (int, Fraction)


class ERat:
    """Exact nonnegative rational extended with ``inf``.

    Addition and multiplication treat ``inf`` as absorbing, with the
    measure-theoretic convention ``0 * inf == 0``.  Subtraction is truncated
    at zero (`monus`).  Values are immutable and hashable; comparisons are a
    total order with ``inf`` on top.
    """

    __slots__ = ("_frac",)

    def __init__(self, numerator: Union[int, Fraction] = 0, denominator: int = 1):
        if isinstance(numerator, Fraction) and denominator == 1:
            frac = numerator
        else:
            frac = Fraction(numerator, denominator)
        if frac < 0:
            raise ValueError(f"ERat must be nonnegative, got {frac}")
        self._frac = frac

    @classmethod
    def _inf(cls) -> "ERat":
        self = object.__new__(cls)
        self._frac = None
        return self

    @classmethod
    def parse(cls, text: str) -> "ERat":
        """Parse ``"num/den"``, a plain integer, a decimal, or ``"inf"``."""
        s = text.strip().lower()
        if s in ("inf", "infinity", "+inf"):
            return ERAT_INF
        try:
            return cls(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a nonnegative rational: {text!r}") from exc

    @property
    def is_infinite(self) -> bool:
        return self._frac is None

    @property
    def frac(self) -> Fraction:
        if self._frac is None:
            raise ValueError("infinite ERat has no finite value")
        return self._frac

    @staticmethod
    def _coerce(x: Any) -> Optional["ERat"]:
        if isinstance(x, ERat):
            return x
        if isinstance(x, _ERAT_COERCIBLE):
            return ERat(Fraction(x))
        return None

    def __add__(self, other: Any) -> "ERat":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._frac is None or o._frac is None:
            return ERAT_INF
        return ERat(self._frac + o._frac)

    __radd__ = __add__

    def __mul__(self, other: Any) -> "ERat":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._frac is None:
            return ERAT_ZERO if o._frac == 0 else ERAT_INF
        if o._frac is None:
            return ERAT_ZERO if self._frac == 0 else ERAT_INF
        return ERat(self._frac * o._frac)

    __rmul__ = __mul__

    def monus(self, other: Any) -> "ERat":
        """Truncated subtraction: ``max(self - other, 0)``; inf - inf == 0."""
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot subtract {other!r} from ERat")
        if o._frac is None:
            return ERAT_ZERO
        if self._frac is None:
            return ERAT_INF
        d = self._frac - o._frac
        return ERat(d) if d > 0 else ERAT_ZERO

    def half(self) -> "ERat":
        if self._frac is None:
            return ERAT_INF
        return ERat(self._frac / 2)

    def __truediv__(self, other: Any) -> "ERat":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._frac is None:
            if self._frac is None:
                raise ArithmeticError("inf / inf is undefined")
            return ERAT_ZERO
        if o._frac == 0:
            raise ZeroDivisionError("ERat division by zero")
        if self._frac is None:
            return ERAT_INF
        return ERat(self._frac / o._frac)

    def _cmp_key(self) -> tuple:
        # (1, _) sorts above every finite value.
        return (1, 0) if self._frac is None else (0, self._frac)

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._frac == o._frac

    def __le__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp_key() <= o._cmp_key()

    def __lt__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp_key() < o._cmp_key()

    def __ge__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o._cmp_key() <= self._cmp_key()

    def __gt__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o._cmp_key() < self._cmp_key()

    def __hash__(self) -> int:
        return hash(float("inf")) if self._frac is None else hash(self._frac)

    def __float__(self) -> float:
        return float("inf") if self._frac is None else float(self._frac)

    def display(self) -> str:
        """Render as ``num/den``, a bare integer, or ``inf``."""
        if self._frac is None:
            return "inf"
        if self._frac.denominator == 1:
            return str(self._frac.numerator)
        return f"{self._frac.numerator}/{self._frac.denominator}"

    __str__ = display

    def __repr__(self) -> str:
        return f"ERat({self.display()})"


ERAT_ZERO = ERat(0)
ERAT_ONE = ERat(1)
ERAT_INF = ERat._inf()


# ---------------------------------------------------------------------------
# Approximation chains.
# ---------------------------------------------------------------------------


class Direction(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class MonotonicityViolation(Exception):
    """Adjacent chain entries moved against the declared direction."""

    def __init__(self, direction: Direction, fuel: int, prev: Any, cur: Any):
        super().__init__(
            f"{direction.value} chain broken at fuel {fuel}: {prev!r} -> {cur!r}"
        )
        self.direction = direction
        self.fuel = fuel
        self.prev = prev
        self.cur = cur


@dataclass(frozen=True)
class ApproxChain(Generic[V]):
    """Values of a fueled evaluation at fuels ``0..len(values)-1``.

    ``stabilized_at`` is the earliest fuel from which every later entry is
    equal; it is only claimed when the constant tail has at least two
    entries, otherwise the chain reports bounds only.
    """

    values: tuple
    direction: Direction
    stabilized_at: Optional[int]

    @property
    def fuel(self) -> int:
        return len(self.values) - 1

    @property
    def last(self):
        return self.values[-1]

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at is not None

    def __len__(self) -> int:
        return len(self.values)


def make_chain(
    values: Sequence,
    direction: Direction,
    le: Optional[Callable[[Any, Any], bool]] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> ApproxChain:
    """Check the chain invariant and compute the stabilization verdict."""
    vals = tuple(values)
    if not vals:
        raise ValueError("a chain needs at least the fuel-0 value")
    cmp = le if le is not None else operator.le
    for i in range(len(vals) - 1):
        lo, hi = vals[i], vals[i + 1]
        ok = cmp(lo, hi) if direction is Direction.INCREASING else cmp(hi, lo)
        if not ok:
            raise MonotonicityViolation(direction, i + 1, vals[i], vals[i + 1])
    stab: Optional[int] = None
    if len(vals) >= 2:
        k = len(vals) - 1
        while k > 0 and eq(vals[k - 1], vals[k]):
            k -= 1
        if k < len(vals) - 1:
            stab = k
    return ApproxChain(vals, direction, stab)


def iterate(bottom: A, f: Callable[[A], A], n: int) -> A:
    """n-fold application ``f^n(bottom)``: iteration with explicit fuel."""
    x = bottom
    for _ in range(n):
        x = f(x)
    return x


def coiter_approx(
    f: Callable[[A], A],
    bottom: A,
    fuel: int,
    le: Optional[Callable[[Any, Any], bool]] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> ApproxChain:
    """Chain of fueled iterations ``[bottom, f(bottom), ..., f^fuel(bottom)]``.

    For a monotone ``f`` this is the increasing chain whose supremum the
    unbounded iteration denotes; the chain invariant is checked and a
    violation (non-monotone ``f``) is reported as an error.
    """
    values = [bottom]
    x = bottom
    for _ in range(fuel):
        x = f(x)
        values.append(x)
    return make_chain(values, Direction.INCREASING, le=le, eq=eq)


def ext_eval(
    basis_fn: Callable[[Any], V],
    idl_fn: Callable[[Any, int], Any],
    a: Any,
    max_fuel: int,
    direction: Direction,
    le: Optional[Callable[[Any, Any], bool]] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> ApproxChain:
    """Evaluate a function on finite approximants along all fuels.

    ``values[i] = basis_fn(idl_fn(a, i))``: the i-th entry applies the basis
    function to the fuel-i truncation of ``a``.  The direction must match the
    function's variance (increasing for monotone, decreasing for antitone
    seeds such as wlp); violations raise :class:`MonotonicityViolation`.
    """
    values = [basis_fn(idl_fn(a, i)) for i in range(max_fuel + 1)]
    return make_chain(values, direction, le=le, eq=eq)


# ---------------------------------------------------------------------------
# Convergence policies.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedFuel:
    fuel: int


@dataclass(frozen=True)
class StabilizeWindow:
    window: int


@dataclass(frozen=True)
class EpsGap:
    eps: ERat


Policy = Union[FixedFuel, StabilizeWindow, EpsGap]


@dataclass(frozen=True)
class ConvergeResult:
    converged: bool
    value: Any = None
    lower: Any = None
    upper: Any = None
    at_fuel: Optional[int] = None
    detail: str = ""


def converge(
    chain: ApproxChain,
    policy: Policy,
    dual: Optional[ApproxChain] = None,
    eq: Callable[[Any, Any], bool] = operator.eq,
) -> ConvergeResult:
    """Apply a convergence policy to a chain (plus a dual chain for EpsGap).

    Non-convergence is an ordinary verdict (``converged=False``), not an
    exception; callers that must fail loudly inspect the result.
    """
    if isinstance(policy, FixedFuel):
        if policy.fuel < 0 or policy.fuel >= len(chain.values):
            raise ValueError(
                f"chain has fuels 0..{chain.fuel}, cannot read fuel {policy.fuel}"
            )
        v = chain.values[policy.fuel]
        return ConvergeResult(True, value=v, at_fuel=policy.fuel)

    if isinstance(policy, StabilizeWindow):
        w = policy.window
        if w < 2:
            raise ValueError("stabilization window must be at least 2")
        vals = chain.values
        for i in range(len(vals) - w + 1):
            if all(eq(vals[i], vals[i + j]) for j in range(1, w)):
                return ConvergeResult(True, value=vals[i], at_fuel=i)
        return ConvergeResult(
            False,
            detail=f"no window of {w} equal entries within fuel {chain.fuel}",
        )

    if isinstance(policy, EpsGap):
        if dual is None:
            raise ValueError("EpsGap needs a decreasing dual chain")
        if chain.direction is not Direction.INCREASING:
            raise ValueError("EpsGap lower chain must be increasing")
        if dual.direction is not Direction.DECREASING:
            raise ValueError("EpsGap dual chain must be decreasing")
        n = min(len(chain.values), len(dual.values))
        at: Optional[int] = None
        for i in range(n):
            gap = dual.values[i].monus(chain.values[i])
            if gap <= policy.eps:
                at = i
                break
        lower, upper = chain.values[n - 1], dual.values[n - 1]
        if at is None:
            return ConvergeResult(
                False,
                lower=lower,
                upper=upper,
                detail=f"gap {upper.monus(lower)} above eps {policy.eps} at fuel {n - 1}",
            )
        return ConvergeResult(True, lower=lower, upper=upper, at_fuel=at)

    raise TypeError(f"unknown policy {policy!r}")


# ---------------------------------------------------------------------------
# Lazy conaturals.
# ---------------------------------------------------------------------------


class Conat:
    """Lazy conatural number: zero, successor of a deferred conatural, or omega.

    Forcing reveals one constructor: ``None`` for zero, or the predecessor
    for a successor.  ``OMEGA`` is its own predecessor.
    """

    __slots__ = ("_cell_fn", "_cell", "_forced")

    def __init__(self, cell_fn: Callable[[Optional[StepBudget]], Optional["Conat"]]):
        self._cell_fn = cell_fn
        self._cell: Optional[Conat] = None
        self._forced = False

    def force(self, budget: Optional[StepBudget] = None) -> Optional["Conat"]:
        if budget is not None:
            budget.spend()
        if not self._forced:
            self._cell = self._cell_fn(budget)
            self._forced = True
            self._cell_fn = None  # type: ignore[assignment]
        return self._cell


COZERO = Conat(lambda budget: None)


def cosucc(pred: Union[Conat, Callable[[], Conat]]) -> Conat:
    if callable(pred) and not isinstance(pred, Conat):
        return Conat(lambda budget: pred())
    return Conat(lambda budget: pred)


def conat_incl(k: int) -> Conat:
    """Inject a natural number as a finite conatural."""
    if k < 0:
        raise ValueError("conaturals are nonnegative")
    n = COZERO
    for _ in range(k):
        n = cosucc(n)
    return n


OMEGA = Conat(lambda budget: OMEGA)


def conat_trunc(n: Conat, fuel: int, budget: Optional[StepBudget] = None) -> int:
    """``min(n, fuel)`` by forcing at most ``fuel`` cells."""
    count = 0
    cur = n
    while count < fuel:
        nxt = cur.force(budget)
        if nxt is None:
            return count
        count += 1
        cur = nxt
    return fuel
