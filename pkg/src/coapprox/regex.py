"""Extended regular expressions compiled to lazy tries.

Grammar (tightest binding first):

    postfix ``*`` and prefix ``~``  >  juxtaposition (concatenation)
    >  ``&`` (intersection)  >  ``+`` (union)

``0`` is the empty language, ``1`` the empty word, any other non-operator
character a symbol literal; parentheses group; whitespace is ignored.
``~`` applies to the shortest following unary term, so ``~ab`` is ``(~a)b``
and ``~a*`` is ``~(a*)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

from .cotrie import (
    Alphabet,
    Lang,
    comp,
    concat,
    empty,
    eps,
    equiv_upto,
    inter,
    le_upto,
    star,
    sym_lang,
    union,
)

# ---------------------------------------------------------------------------
# Syntax.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class REmpty:
    pass


@dataclass(frozen=True)
class REps:
    pass


@dataclass(frozen=True)
class RSym:
    symbol: str


@dataclass(frozen=True)
class RUnion:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class RInter:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class RComp:
    arg: "Regex"


@dataclass(frozen=True)
class RCat:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class RStar:
    arg: "Regex"


Regex = Union[REmpty, REps, RSym, RUnion, RInter, RComp, RCat, RStar]

_RESERVED = set("01+&~*()")


class ParseError(Exception):
    def __init__(self, position: int, expected: str):
        super().__init__(f"at position {position}: expected {expected}")
        self.position = position
        self.expected = expected


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self) -> str:
        ch = self.peek()
        assert ch is not None
        self.pos += 1
        return ch

    def parse(self) -> Regex:
        r = self.union()
        if self.peek() is not None:
            raise ParseError(self.pos, "end of pattern")
        return r

    def union(self) -> Regex:
        r = self.inter()
        while self.peek() == "+":
            self.take()
            r = RUnion(r, self.inter())
        return r

    def inter(self) -> Regex:
        r = self.cat()
        while self.peek() == "&":
            self.take()
            r = RInter(r, self.cat())
        return r

    def cat(self) -> Regex:
        parts = [self.unary()]
        while True:
            ch = self.peek()
            if ch is None or ch in "+&)":
                break
            parts.append(self.unary())
        r = parts[0]
        for p in parts[1:]:
            r = RCat(r, p)
        return r

    def unary(self) -> Regex:
        if self.peek() == "~":
            self.take()
            return RComp(self.unary())
        return self.postfix()

    def postfix(self) -> Regex:
        r = self.atom()
        while self.peek() == "*":
            self.take()
            r = RStar(r)
        return r

    def atom(self) -> Regex:
        ch = self.peek()
        if ch is None:
            raise ParseError(self.pos, "an expression")
        if ch == "(":
            self.take()
            r = self.union()
            if self.peek() != ")":
                raise ParseError(self.pos, "')'")
            self.take()
            return r
        if ch in "*+&)":
            raise ParseError(self.pos, "an expression")
        self.take()
        if ch == "0":
            return REmpty()
        if ch == "1":
            return REps()
        return RSym(ch)


def parse_regex(pattern: str) -> Regex:
    return _Parser(pattern).parse()


def regex_to_str(r: Regex) -> str:
    """Fully parenthesized rendering; parses back to the same tree."""
    if isinstance(r, REmpty):
        return "0"
    if isinstance(r, REps):
        return "1"
    if isinstance(r, RSym):
        return r.symbol
    if isinstance(r, RUnion):
        return f"({regex_to_str(r.left)}+{regex_to_str(r.right)})"
    if isinstance(r, RInter):
        return f"({regex_to_str(r.left)}&{regex_to_str(r.right)})"
    if isinstance(r, RComp):
        return f"(~{regex_to_str(r.arg)})"
    if isinstance(r, RCat):
        return f"({regex_to_str(r.left)}{regex_to_str(r.right)})"
    if isinstance(r, RStar):
        return f"({regex_to_str(r.arg)}*)"
    raise TypeError(f"not a regex: {r!r}")


def compile_regex(r: Regex, alphabet: Alphabet) -> Lang:
    """Interpret the syntax tree as a lazy trie over the given alphabet."""
    if isinstance(r, REmpty):
        return empty(alphabet)
    if isinstance(r, REps):
        return eps(alphabet)
    if isinstance(r, RSym):
        return sym_lang(alphabet, r.symbol)
    if isinstance(r, RUnion):
        return union(compile_regex(r.left, alphabet), compile_regex(r.right, alphabet))
    if isinstance(r, RInter):
        return inter(compile_regex(r.left, alphabet), compile_regex(r.right, alphabet))
    if isinstance(r, RComp):
        return comp(compile_regex(r.arg, alphabet))
    if isinstance(r, RCat):
        return concat(compile_regex(r.left, alphabet), compile_regex(r.right, alphabet))
    if isinstance(r, RStar):
        return star(compile_regex(r.arg, alphabet))
    raise TypeError(f"not a regex: {r!r}")


def compile_pattern(pattern: str, alphabet: Alphabet) -> Lang:
    return compile_regex(parse_regex(pattern), alphabet)


# ---------------------------------------------------------------------------
# Random instances and the axiom suite.
# ---------------------------------------------------------------------------


def random_regex(rng: random.Random, alphabet: Alphabet, size: int = 4) -> Regex:
    """A random syntax tree with at most ``size`` constructors."""
    if size <= 1:
        leaf = rng.randrange(4)
        if leaf == 0:
            return REmpty()
        if leaf == 1:
            return REps()
        return RSym(rng.choice(alphabet.symbols))
    choice = rng.randrange(10)
    if choice < 3:
        split = rng.randrange(1, size - 1) if size > 2 else 1
        return RUnion(
            random_regex(rng, alphabet, split),
            random_regex(rng, alphabet, size - 1 - split),
        )
    if choice < 6:
        split = rng.randrange(1, size - 1) if size > 2 else 1
        return RCat(
            random_regex(rng, alphabet, split),
            random_regex(rng, alphabet, size - 1 - split),
        )
    if choice < 8:
        return RStar(random_regex(rng, alphabet, size - 1))
    if choice < 9:
        split = rng.randrange(1, size - 1) if size > 2 else 1
        return RInter(
            random_regex(rng, alphabet, split),
            random_regex(rng, alphabet, size - 1 - split),
        )
    return RComp(random_regex(rng, alphabet, size - 1))


@dataclass
class LawFailure:
    axiom: str
    trial: int
    lhs: str
    rhs: str
    word: str


@dataclass
class AxiomResult:
    name: str
    checked: int
    failures: List[LawFailure]


@dataclass
class OrderIdentityTally:
    """How often depth-bounded containment agrees with each unit law.

    Containment a <= b is checked against both candidate identities
    ``a+b = b`` (the conventional one) and ``a+b = a``; the report shows
    which one tracks containment rather than hard-coding a choice.
    """

    trials: int
    matches_a_plus_b_eq_b: int
    matches_a_plus_b_eq_a: int


@dataclass
class LawsReport:
    depth: int
    trials: int
    seed: int
    alphabet: str
    axioms: List[AxiomResult]
    order_identity: OrderIdentityTally
    total_failures: int


def _equational_axioms() -> List[Tuple[str, Callable]]:
    """Axioms as pairs of syntax trees built from random a, b, c."""
    E, S = REps(), REmpty()
    return [
        ("union_assoc", lambda a, b, c: (RUnion(a, RUnion(b, c)), RUnion(RUnion(a, b), c))),
        ("union_comm", lambda a, b, c: (RUnion(a, b), RUnion(b, a))),
        ("union_idem", lambda a, b, c: (RUnion(a, a), a)),
        ("union_unit", lambda a, b, c: (RUnion(a, S), a)),
        ("concat_assoc", lambda a, b, c: (RCat(a, RCat(b, c)), RCat(RCat(a, b), c))),
        ("concat_unit_left", lambda a, b, c: (RCat(E, a), a)),
        ("concat_unit_right", lambda a, b, c: (RCat(a, E), a)),
        ("concat_absorb_left", lambda a, b, c: (RCat(S, a), S)),
        ("concat_absorb_right", lambda a, b, c: (RCat(a, S), S)),
        ("distrib_left", lambda a, b, c: (RCat(a, RUnion(b, c)), RUnion(RCat(a, b), RCat(a, c)))),
        ("distrib_right", lambda a, b, c: (RCat(RUnion(a, b), c), RUnion(RCat(a, c), RCat(b, c)))),
        ("star_unfold_left", lambda a, b, c: (RUnion(E, RCat(a, RStar(a))), RStar(a))),
        ("star_unfold_right", lambda a, b, c: (RUnion(E, RCat(RStar(a), a)), RStar(a))),
    ]


def ka_axiom_suite(
    depth: int, trials: int, seed: int, alphabet: Alphabet
) -> LawsReport:
    """Check the Kleene-algebra axioms on random instances up to a depth.

    Equational axioms are compared with :func:`equiv_upto`; the two star
    induction rules are checked on the instances ``x := a*b`` and
    ``x := ba*`` (premise and conclusion both via :func:`le_upto`).
    """
    rng = random.Random(seed)
    compile_ = lambda r: compile_regex(r, alphabet)
    eq_axioms = _equational_axioms()
    results = {name: AxiomResult(name, 0, []) for name, _ in eq_axioms}
    results["star_induction_left"] = AxiomResult("star_induction_left", 0, [])
    results["star_induction_right"] = AxiomResult("star_induction_right", 0, [])
    match_b = 0
    match_a = 0
    for trial in range(trials):
        a = random_regex(rng, alphabet)
        b = random_regex(rng, alphabet)
        c = random_regex(rng, alphabet)
        for name, build in eq_axioms:
            lhs, rhs = build(a, b, c)
            res = equiv_upto(compile_(lhs), compile_(rhs), depth)
            r = results[name]
            r.checked += 1
            if not res.equal:
                r.failures.append(
                    LawFailure(name, trial, regex_to_str(lhs), regex_to_str(rhs),
                               res.counterexample or "")
                )
        # star induction, left rule: if b + a x <= x then a* b <= x, at x := a* b
        x = RCat(RStar(a), b)
        lx = compile_(x)
        premise = le_upto(compile_(RUnion(b, RCat(a, x))), lx, depth)
        concl = le_upto(compile_(RCat(RStar(a), b)), lx, depth)
        r = results["star_induction_left"]
        r.checked += 1
        if premise and not concl:
            r.failures.append(
                LawFailure("star_induction_left", trial, regex_to_str(x), "", "")
            )
        # right rule: if b + x a <= x then b a* <= x, at x := b a*
        x = RCat(b, RStar(a))
        lx = compile_(x)
        premise = le_upto(compile_(RUnion(b, RCat(x, a))), lx, depth)
        concl = le_upto(compile_(RCat(b, RStar(a))), lx, depth)
        r = results["star_induction_right"]
        r.checked += 1
        if premise and not concl:
            r.failures.append(
                LawFailure("star_induction_right", trial, regex_to_str(x), "", "")
            )
        # order identity tally
        la, lb = compile_(a), compile_(b)
        contained = le_upto(la, lb, depth)
        plus = union(la, lb)
        if contained == equiv_upto(plus, lb, depth).equal:
            match_b += 1
        if contained == equiv_upto(plus, la, depth).equal:
            match_a += 1
    axioms = list(results.values())
    return LawsReport(
        depth=depth,
        trials=trials,
        seed=seed,
        alphabet="".join(alphabet.symbols),
        axioms=axioms,
        order_identity=OrderIdentityTally(trials, match_b, match_a),
        total_failures=sum(len(r.failures) for r in axioms),
    )
