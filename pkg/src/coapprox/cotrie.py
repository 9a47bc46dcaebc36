"""Total languages as lazy symbol tries, built and queried by derivatives.

A :class:`Lang` is an infinite trie: a node carries an accept flag (does the
language contain the word spelled by the path here?) and one lazy child per
alphabet symbol — the derivative of the language by that symbol.  Regular
constructions (union, intersection, complement, concatenation, star) are
productive corecursions on these nodes: each node's flag is computable from
finitely many flags of the operands, so any depth-bounded question
terminates without step budgets.

Finite approximants (:class:`TNode` / :data:`TBOT`) truncate the trie at a
depth; two languages agree on all words of length <= d exactly when their
depth-(d+1) truncations carry the same flags.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple, Union


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate-free tuple of single-character symbols."""

    symbols: Tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if any(len(s) != 1 for s in self.symbols):
            raise ValueError("alphabet symbols must be single characters")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    @classmethod
    def of(cls, symbols: Union[str, Iterable[str]]) -> "Alphabet":
        return cls(tuple(symbols))

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


class UnknownSymbol(Exception):
    def __init__(self, symbol: str, alphabet: Alphabet):
        super().__init__(f"symbol {symbol!r} not in alphabet {''.join(alphabet.symbols)!r}")
        self.symbol = symbol
        self.alphabet = alphabet


_uid_counter = itertools.count()


class Lang:
    """A lazy trie node; ``accept`` and per-symbol derivatives memoize."""

    __slots__ = ("alphabet", "_make", "_accept", "_branch_fn", "_children", "_uid")

    def __init__(
        self,
        alphabet: Alphabet,
        make: Callable[[], Tuple[bool, Callable[[str], "Lang"]]],
    ):
        self.alphabet = alphabet
        self._make = make
        self._accept: Optional[bool] = None
        self._branch_fn: Optional[Callable[[str], Lang]] = None
        self._children: Dict[str, Lang] = {}
        self._uid = next(_uid_counter)

    def _force(self) -> None:
        if self._make is not None:
            accept, branch_fn = self._make()
            self._accept = accept
            self._branch_fn = branch_fn
            self._make = None

    @property
    def accept(self) -> bool:
        """Does the language contain the word leading to this node?"""
        self._force()
        return self._accept  # type: ignore[return-value]

    def delta(self, sym: str) -> "Lang":
        """Derivative: the language of words continuing with ``sym``."""
        if sym not in self.alphabet:
            raise UnknownSymbol(sym, self.alphabet)
        child = self._children.get(sym)
        if child is None:
            self._force()
            child = self._branch_fn(sym)  # type: ignore[misc]
            self._children[sym] = child
        return child

    def __repr__(self) -> str:
        return f"<Lang #{self._uid} over {''.join(self.alphabet.symbols)!r}>"


# ---------------------------------------------------------------------------
# Constructions.  Composite nodes are hash-consed on (operation, operand
# uids): identical compositions share one node, which keeps repeated
# derivatives of stars and concatenations from re-growing the same trees.
# No algebraic rewriting happens here — the law tests exercise semantics,
# not a normalizer.
# ---------------------------------------------------------------------------

_atom_cache: Dict[tuple, Lang] = {}
_op_cache: Dict[tuple, Lang] = {}


def empty(alphabet: Alphabet) -> Lang:
    """The empty language: every flag false."""
    key = ("empty", alphabet)
    lang = _atom_cache.get(key)
    if lang is None:
        lang = Lang(alphabet, lambda: (False, lambda sym: lang))
        _atom_cache[key] = lang
    return lang


def eps(alphabet: Alphabet) -> Lang:
    """The language containing exactly the empty word."""
    key = ("eps", alphabet)
    lang = _atom_cache.get(key)
    if lang is None:
        lang = Lang(alphabet, lambda: (True, lambda sym: empty(alphabet)))
        _atom_cache[key] = lang
    return lang


def sym_lang(alphabet: Alphabet, c: str) -> Lang:
    """The singleton language {c}."""
    if c not in alphabet:
        raise UnknownSymbol(c, alphabet)
    key = ("sym", alphabet, c)
    lang = _atom_cache.get(key)
    if lang is None:
        lang = Lang(
            alphabet,
            lambda: (False, lambda sym: eps(alphabet) if sym == c else empty(alphabet)),
        )
        _atom_cache[key] = lang
    return lang


def _require_same_alphabet(a: Lang, b: Lang) -> None:
    if a.alphabet != b.alphabet:
        raise ValueError("operands built over different alphabets")


def union(a: Lang, b: Lang) -> Lang:
    _require_same_alphabet(a, b)
    key = ("union", a._uid, b._uid)
    out = _op_cache.get(key)
    if out is None:
        out = Lang(
            a.alphabet,
            lambda: (a.accept or b.accept, lambda sym: union(a.delta(sym), b.delta(sym))),
        )
        _op_cache[key] = out
    return out


def inter(a: Lang, b: Lang) -> Lang:
    _require_same_alphabet(a, b)
    key = ("inter", a._uid, b._uid)
    out = _op_cache.get(key)
    if out is None:
        out = Lang(
            a.alphabet,
            lambda: (a.accept and b.accept, lambda sym: inter(a.delta(sym), b.delta(sym))),
        )
        _op_cache[key] = out
    return out


def comp(a: Lang) -> Lang:
    key = ("comp", a._uid)
    out = _op_cache.get(key)
    if out is None:
        out = Lang(a.alphabet, lambda: (not a.accept, lambda sym: comp(a.delta(sym))))
        _op_cache[key] = out
    return out


def concat(a: Lang, b: Lang) -> Lang:
    """Concatenation a.b.

    Flag: both operands accept the empty word.  Derivative by x: continue
    inside ``a`` (x consumed from a word of a followed by all of b), plus —
    only when ``a`` accepts the empty word — the derivative of ``b``.
    """
    _require_same_alphabet(a, b)
    key = ("concat", a._uid, b._uid)
    out = _op_cache.get(key)
    if out is None:

        def make():
            def branch(sym: str) -> Lang:
                left = concat(a.delta(sym), b)
                if a.accept:
                    return union(left, b.delta(sym))
                return left

            return (a.accept and b.accept, branch)

        out = Lang(a.alphabet, make)
        _op_cache[key] = out
    return out


def star(a: Lang) -> Lang:
    """Kleene star: accepts the empty word; derivative re-enters the star."""
    key = ("star", a._uid)
    out = _op_cache.get(key)
    if out is None:
        def make():
            return (True, lambda sym: concat(a.delta(sym), out))

        out = Lang(a.alphabet, make)
        _op_cache[key] = out
    return out


def in_lang(t: Lang, word: str) -> bool:
    """Membership: walk one derivative per symbol, read the final flag.

    Forces exactly ``len(word) + 1`` nodes.
    """
    node = t
    for ch in word:
        node = node.delta(ch)
    return node.accept


# ---------------------------------------------------------------------------
# Finite approximants.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TBot:
    def __repr__(self) -> str:
        return "TBOT"


@dataclass(frozen=True)
class TNode:
    accept: bool
    branches: Tuple["TLang", ...]  # in alphabet order


TLang = Union[TBot, TNode]
TBOT = TBot()


def lang_idl(t: Lang, depth: int) -> TLang:
    """Depth-indexed truncation: flags of all nodes at paths shorter than depth."""
    if depth <= 0:
        return TBOT
    return TNode(
        t.accept,
        tuple(lang_idl(t.delta(sym), depth - 1) for sym in t.alphabet.symbols),
    )


def tlang_is_bot(tl: TLang) -> bool:
    """Bottom up to order-equivalence: no flag set anywhere."""
    if isinstance(tl, TBot):
        return True
    return not tl.accept and all(tlang_is_bot(c) for c in tl.branches)


def tlang_le(t1: TLang, t2: TLang) -> bool:
    """Approximation order on truncations, collapsing all-false trees to bottom."""
    if tlang_is_bot(t1):
        return True
    if isinstance(t2, TBot):
        return False
    # t1 is a node with some flag set somewhere
    assert isinstance(t1, TNode)
    if t1.accept and not t2.accept:
        return False
    return all(tlang_le(c1, c2) for c1, c2 in zip(t1.branches, t2.branches))


def tlang_equiv(t1: TLang, t2: TLang) -> bool:
    return tlang_le(t1, t2) and tlang_le(t2, t1)


# ---------------------------------------------------------------------------
# Depth-bounded comparison.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivResult:
    equal: bool
    counterexample: Optional[str] = None


def equiv_upto(a: Lang, b: Lang, depth: int) -> EquivResult:
    """Do the languages agree on every word of length <= depth?

    On disagreement, the returned witness is the shortest differing word,
    ties broken by alphabet order (breadth-first search in symbol order).
    """
    _require_same_alphabet(a, b)
    queue = deque([(a, b, "")])
    seen = set()
    while queue:
        x, y, word = queue.popleft()
        if x.accept != y.accept:
            return EquivResult(False, word)
        if len(word) < depth:
            for sym in a.alphabet.symbols:
                child = (x.delta(sym), y.delta(sym))
                key = (child[0]._uid, child[1]._uid)
                if key not in seen:
                    seen.add(key)
                    queue.append((child[0], child[1], word + sym))
    return EquivResult(True, None)


def le_upto(a: Lang, b: Lang, depth: int) -> bool:
    """Language containment restricted to words of length <= depth."""
    _require_same_alphabet(a, b)
    queue = deque([(a, b, 0)])
    seen = set()
    while queue:
        x, y, n = queue.popleft()
        if x.accept and not y.accept:
            return False
        if n < depth:
            for sym in a.alphabet.symbols:
                cx, cy = x.delta(sym), y.delta(sym)
                key = (cx._uid, cy._uid)
                if key not in seen:
                    seen.add(key)
                    queue.append((cx, cy, n + 1))
    return True
