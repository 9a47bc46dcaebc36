"""Lazy binary trees over the random-bit model.

A :class:`Cotree` describes a sampling process: a node consumes one fair
bit and descends (true picks the left branch), a leaf returns a value, and
bottom diverges.  Expectation folds evaluate functions of the outcome on
depth truncations: weakest pre-expectation (``wp``, from below) and its
liberal variant (``wlp``, from above) bracket the true expected value at
every fuel.  The leaf-set view (:func:`lang_cotree`) reads off which bit
strings reach leaves, whose measure recovers ``wp`` of an event exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from .order import (
    ApproxChain,
    BudgetExhausted,
    Direction,
    ERAT_ONE,
    ERAT_ZERO,
    ERat,
    StepBudget,
    ensure_budget,
    make_chain,
)

# ---------------------------------------------------------------------------
# Finite trees.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ABot:
    def __repr__(self) -> str:
        return "ABOT"


@dataclass(frozen=True)
class ALeaf:
    value: Any


@dataclass(frozen=True)
class ANode:
    left: "ATree"   # the true-bit branch
    right: "ATree"  # the false-bit branch


ATree = Union[ABot, ALeaf, ANode]
ABOT = ABot()


def atree_fold(
    z: Any,
    leaf_fn: Callable[[Any], Any],
    node_fn: Callable[[Any, Any], Any],
    t: ATree,
):
    """Structural fold: ``z`` at bottom, ``leaf_fn`` at leaves, ``node_fn``
    on the two child results."""
    if isinstance(t, ABot):
        return z
    if isinstance(t, ALeaf):
        return leaf_fn(t.value)
    return node_fn(
        atree_fold(z, leaf_fn, node_fn, t.left),
        atree_fold(z, leaf_fn, node_fn, t.right),
    )


def atree_le(t1: ATree, t2: ATree) -> bool:
    """Approximation order: bottom below everything, constructors match."""
    if isinstance(t1, ABot):
        return True
    if isinstance(t1, ALeaf):
        return t1 == t2
    if isinstance(t2, ANode):
        return atree_le(t1.left, t2.left) and atree_le(t1.right, t2.right)
    return False


def atree_leaves(t: ATree) -> List[Any]:
    """Leaf values, left (true-bit) branch first."""
    out: List[Any] = []

    def go(s: ATree) -> None:
        if isinstance(s, ALeaf):
            out.append(s.value)
        elif isinstance(s, ANode):
            go(s.left)
            go(s.right)

    go(t)
    return out


# ---------------------------------------------------------------------------
# Lazy trees.
# ---------------------------------------------------------------------------

Cell = Optional[tuple]  # None | ("leaf", value) | ("node", Cotree, Cotree)


class Cotree:
    """A lazy tree; forcing the root cell spends one step of the budget."""

    __slots__ = ("_cell_fn", "_cell", "_forced")

    def __init__(self, cell_fn: Callable[[Optional[StepBudget]], Cell]):
        self._cell_fn = cell_fn
        self._cell: Cell = None
        self._forced = False

    def force(self, budget: Optional[StepBudget] = None) -> Cell:
        if budget is not None:
            budget.spend()
        if not self._forced:
            cell = self._cell_fn(budget)
            self._cell = cell
            self._forced = True
            self._cell_fn = None  # type: ignore[assignment]
        return self._cell


def cotree_bot() -> Cotree:
    return Cotree(lambda budget: None)


def coleaf(value: Any) -> Cotree:
    return Cotree(lambda budget: ("leaf", value))


def conode(
    left: Union[Cotree, Callable[[], Cotree]],
    right: Union[Cotree, Callable[[], Cotree]],
) -> Cotree:
    """Node with optionally deferred children (pass callables for laziness)."""

    def cell(budget: Optional[StepBudget]) -> Cell:
        l = left if isinstance(left, Cotree) else left()
        r = right if isinstance(right, Cotree) else right()
        return ("node", l, r)

    return Cotree(cell)


def incl_atree(t: ATree) -> Cotree:
    """Inject a finite tree as a lazy one."""
    if isinstance(t, ABot):
        return cotree_bot()
    if isinstance(t, ALeaf):
        return coleaf(t.value)
    return conode(incl_atree(t.left), incl_atree(t.right))


def cotree_idl(t: Cotree, fuel: int, budget: Optional[StepBudget] = None) -> ATree:
    """Depth-indexed truncation: force everything shallower than ``fuel``."""
    budget = ensure_budget(budget)

    def go(s: Cotree, n: int) -> ATree:
        if n <= 0:
            return ABOT
        cell = s.force(budget)
        if cell is None:
            return ABOT
        if cell[0] == "leaf":
            return ALeaf(cell[1])
        return ANode(go(cell[1], n - 1), go(cell[2], n - 1))

    return go(t, fuel)


def map_cotree(f: Callable[[Any], Any], t: Cotree) -> Cotree:
    """Structure-preserving map over leaf values."""

    def cell(budget: Optional[StepBudget]) -> Cell:
        c = t.force(budget)
        if c is None:
            return None
        if c[0] == "leaf":
            return ("leaf", f(c[1]))
        return ("node", map_cotree(f, c[1]), map_cotree(f, c[2]))

    return Cotree(cell)


def bind(t: Cotree, k: Callable[[Any], Cotree]) -> Cotree:
    """Monadic bind: graft ``k(value)`` in place of each leaf."""

    def cell(budget: Optional[StepBudget]) -> Cell:
        c = t.force(budget)
        if c is None:
            return None
        if c[0] == "leaf":
            return k(c[1]).force(budget)
        return ("node", bind(c[1], k), bind(c[2], k))

    return Cotree(cell)


# ---------------------------------------------------------------------------
# Loops.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Inl:
    value: Any


@dataclass(frozen=True)
class Inr:
    value: Any


class _Seen:
    """Membership for loop states; falls back to linear equality scans for
    unhashable states."""

    def __init__(self):
        self._set: set = set()
        self._list: list = []

    def add(self, x: Any) -> bool:
        """Insert; returns True when x was already present."""
        try:
            if x in self._set:
                return True
            self._set.add(x)
            return False
        except TypeError:
            if any(y == x for y in self._list):
                return True
            self._list.append(x)
            return False


def iter_cotree(body: Callable[[Any], Cotree], init: Any) -> Cotree:
    """Loop: run ``body(state)``; leaves tagged ``Inl`` re-enter with a new
    state, leaves tagged ``Inr`` exit with a value.

    A state that recurs without an intervening choice node is a provable
    self-loop and collapses to bottom (the fuel view: every truncation is
    bottom).  Loops that keep producing fresh states without choice nodes
    are cut off by the caller's step budget instead.
    """
    memo: Dict[Any, Cotree] = {}

    def go(state: Any) -> Cotree:
        try:
            cached = memo.get(state)
            cacheable = True
        except TypeError:
            cached = None
            cacheable = False
        if cached is not None:
            return cached

        def cell(budget: Optional[StepBudget]) -> Cell:
            seen = _Seen()
            seen.add(state)
            cur = body(state)
            while True:
                c = cur.force(budget)
                if c is None:
                    return None
                if c[0] == "node":
                    return ("node", bind(c[1], _continue), bind(c[2], _continue))
                v = c[1]
                if isinstance(v, Inr):
                    return ("leaf", v.value)
                if isinstance(v, Inl):
                    if seen.add(v.value):
                        return None  # the loop revisited a state: diverges
                    cur = body(v.value)
                else:
                    raise TypeError(
                        f"loop body produced a bare leaf {v!r}; wrap in Inl/Inr"
                    )

        t = Cotree(cell)
        if cacheable:
            memo[state] = t
        return t

    def _continue(v: Any) -> Cotree:
        if isinstance(v, Inr):
            return coleaf(v.value)
        if isinstance(v, Inl):
            return go(v.value)
        raise TypeError(f"loop body produced a bare leaf {v!r}; wrap in Inl/Inr")

    return go(init)


# ---------------------------------------------------------------------------
# Expectation folds.
# ---------------------------------------------------------------------------

Expectation = Callable[[Any], ERat]


def indicator(pred: Callable[[Any], bool]) -> Expectation:
    return lambda a: ERAT_ONE if pred(a) else ERAT_ZERO


class ExpectationAboveOne(Exception):
    def __init__(self, value: Any, weight: ERat):
        super().__init__(f"wlp expects values <= 1, got {weight} at leaf {value!r}")
        self.value = value
        self.weight = weight


class _FoldEval:
    """Shared fueled evaluator for expectation folds.

    ``value(t, n)`` equals the structural fold over the depth-n truncation
    of ``t``.  Results memoize on (node identity, fuel): cyclic lazy trees
    (rejection loops) evaluate in time linear in fuel instead of 2^fuel.
    """

    def __init__(
        self,
        z: ERat,
        leaf_fn: Callable[[Any], ERat],
        node_fn: Callable[[ERat, ERat], ERat],
        budget: StepBudget,
    ):
        self.z = z
        self.leaf_fn = leaf_fn
        self.node_fn = node_fn
        self.budget = budget
        self._memo: Dict[Tuple[int, int], ERat] = {}
        self._pins: List[Cotree] = []  # keep ids stable for memoized nodes

    def value(self, t: Cotree, fuel: int) -> ERat:
        if fuel <= 0:
            return self.z
        key = (id(t), fuel)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        cell = t.force(self.budget)
        if cell is None:
            out = self.z
        elif cell[0] == "leaf":
            out = self.leaf_fn(cell[1])
        else:
            out = self.node_fn(
                self.value(cell[1], fuel - 1), self.value(cell[2], fuel - 1)
            )
        self._pins.append(t)
        self._memo[key] = out
        return out


def _avg(a: ERat, b: ERat) -> ERat:
    return (a + b).half()


def wp_chain(
    f: Expectation, t: Cotree, fuel: int, budget: Optional[StepBudget] = None
) -> ApproxChain:
    """Weakest pre-expectation from below.

    ``values[i]`` is the fold (bottom 0, leaf ``f``, node average) over the
    depth-i truncation: the expected value of ``f`` over runs that finish
    within i levels.  Increasing in fuel.
    """
    ev = _FoldEval(ERAT_ZERO, f, _avg, ensure_budget(budget))
    return make_chain(
        [ev.value(t, i) for i in range(fuel + 1)], Direction.INCREASING
    )


def wlp_chain(
    f: Expectation, t: Cotree, fuel: int, budget: Optional[StepBudget] = None
) -> ApproxChain:
    """Liberal pre-expectation from above (unfinished mass counts as 1).

    Requires ``f`` bounded by 1 at every reached leaf; decreasing in fuel.
    """

    def leaf_fn(v: Any) -> ERat:
        w = f(v)
        if not (w <= ERAT_ONE):
            raise ExpectationAboveOne(v, w)
        return w

    ev = _FoldEval(ERAT_ONE, leaf_fn, _avg, ensure_budget(budget))
    return make_chain(
        [ev.value(t, i) for i in range(fuel + 1)], Direction.DECREASING
    )


def wp_fold_atree(f: Expectation, t: ATree) -> ERat:
    """The finite-tree fold wp specializes to (bottom 0, leaf f, node avg)."""
    return atree_fold(ERAT_ZERO, f, _avg, t)


def wlp_fold_atree(f: Expectation, t: ATree) -> ERat:
    return atree_fold(ERAT_ONE, f, _avg, t)


# ---------------------------------------------------------------------------
# Leaf-set view and measure.
# ---------------------------------------------------------------------------


def filter_cotree(pred: Callable[[Any], bool], t: Cotree) -> Cotree:
    """Keep structure; leaves failing ``pred`` become bottom."""

    def cell(budget: Optional[StepBudget]) -> Cell:
        c = t.force(budget)
        if c is None:
            return None
        if c[0] == "leaf":
            return ("leaf", c[1]) if pred(c[1]) else None
        return ("node", filter_cotree(pred, c[1]), filter_cotree(pred, c[2]))

    return Cotree(cell)


def lang_cotree(t: Cotree) -> Cotree:
    """Replace each leaf by the bit string that reaches it ('1' = left)."""

    def cell(budget: Optional[StepBudget]) -> Cell:
        c = t.force(budget)
        if c is None:
            return None
        if c[0] == "leaf":
            return ("leaf", "")
        return (
            "node",
            map_cotree(lambda bs: "1" + bs, lang_cotree(c[1])),
            map_cotree(lambda bs: "0" + bs, lang_cotree(c[2])),
        )

    return Cotree(cell)


def preimage(pred: Callable[[Any], bool], t: Cotree) -> Cotree:
    """Bit strings that drive ``t`` to a leaf satisfying ``pred``."""
    return lang_cotree(filter_cotree(pred, t))


def mu_chain(
    s: Cotree, fuel: int, budget: Optional[StepBudget] = None
) -> ApproxChain:
    """Measure of a bit-string leaf set: each leaf at depth d weighs 2^-d.

    ``values[i]`` folds (bottom 0, leaf 1/2^len, node +) over the depth-i
    truncation; increasing in fuel.
    """
    ev = _FoldEval(
        ERAT_ZERO,
        lambda bs: ERat(1, 2 ** len(bs)),
        lambda a, b: a + b,
        ensure_budget(budget),
    )
    return make_chain(
        [ev.value(s, i) for i in range(fuel + 1)], Direction.INCREASING
    )


def mu_fold_atree(t: ATree) -> ERat:
    return atree_fold(
        ERAT_ZERO, lambda bs: ERat(1, 2 ** len(bs)), lambda a, b: a + b, t
    )


def disjoint_upto(s: Cotree, depth: int, budget: Optional[StepBudget] = None) -> bool:
    """No leaf bit string of the truncation is a prefix of another."""
    leaves = sorted(atree_leaves(cotree_idl(s, depth, budget)))
    for a, b in zip(leaves, leaves[1:]):
        if b.startswith(a):
            return False
    return True


# ---------------------------------------------------------------------------
# Sampling.
# ---------------------------------------------------------------------------

_M64 = (1 << 64) - 1


class BitSource:
    """Deterministic bit supplier.

    Seeded sources step splitmix64 once per bit and emit the output's least
    significant bit; the algorithm is pinned so seeds stay portable.  Finite
    sources replay an explicit bit list and then run dry.
    """

    def __init__(self, next_bit: Callable[[], Optional[bool]]):
        self._next = next_bit

    @classmethod
    def from_seed(cls, seed: int) -> "BitSource":
        state = seed & _M64

        def nxt() -> Optional[bool]:
            nonlocal state
            state = (state + 0x9E3779B97F4A7C15) & _M64
            z = state
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
            z ^= z >> 31
            return bool(z & 1)

        return cls(nxt)

    @classmethod
    def from_bits(cls, bits) -> "BitSource":
        """From an iterable of bools or a string of '0'/'1'."""
        if isinstance(bits, str):
            seq = [c == "1" for c in bits]
        else:
            seq = [bool(b) for b in bits]
        it = iter(seq)

        def nxt() -> Optional[bool]:
            return next(it, None)

        return cls(nxt)

    def next_bit(self) -> Optional[bool]:
        return self._next()


@dataclass(frozen=True)
class Sampled:
    value: Any
    bits_consumed: int


@dataclass(frozen=True)
class Diverged:
    """The walk reached explicit bottom."""


@dataclass(frozen=True)
class StepsExhausted:
    """The walk ran out of step budget before finishing."""


@dataclass(frozen=True)
class BitsExhausted:
    """A finite bit source ran dry mid-walk."""


SampleOutcome = Union[Sampled, Diverged, StepsExhausted, BitsExhausted]


def sample(t: Cotree, bits: BitSource, budget: Optional[StepBudget] = None) -> SampleOutcome:
    """Run the tree on a bit source: one bit per node, until a leaf."""
    budget = ensure_budget(budget)
    consumed = 0
    cur = t
    try:
        while True:
            cell = cur.force(budget)
            if cell is None:
                return Diverged()
            if cell[0] == "leaf":
                return Sampled(cell[1], consumed)
            b = bits.next_bit()
            if b is None:
                return BitsExhausted()
            consumed += 1
            cur = cell[1] if b else cell[2]
    except BudgetExhausted:
        return StepsExhausted()


# ---------------------------------------------------------------------------
# Tail bound.
# ---------------------------------------------------------------------------


def markov_check(f: Expectation, t: ATree, a: ERat) -> bool:
    """Markov inequality on a finite tree: wp[f >= a] <= wp(f) / a.

    Exact rational comparison; ``a`` must be finite and positive.
    """
    if a.is_infinite or not (a > ERAT_ZERO):
        raise ValueError("threshold must be finite and positive")
    lhs = wp_fold_atree(indicator(lambda x: f(x) >= a), t)
    rhs = wp_fold_atree(f, t) / a
    return lhs <= rhs
