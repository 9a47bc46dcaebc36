"""Acceptance gate: one test per primary criterion.

Each test prints ``[acceptance] <criterion>: PASS`` (or FAIL) — run with
``pytest tests/test_acceptance.py -s`` to see the lines as they go by.
Tolerances and sizes are stated inline; every randomized block is seeded.
"""
import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from coapprox.cli import main
from coapprox.colist import (
    EXHAUSTED,
    HIT_BOTTOM,
    Colist,
    check_productive,
    cofold_lazy,
    cofold_sem,
    colist_idl,
    filter_colist,
    incl,
)
from coapprox.cotree import (
    ABOT,
    ALeaf,
    ANode,
    BitSource,
    Sampled,
    cotree_idl,
    disjoint_upto,
    incl_atree,
    indicator,
    markov_check,
    mu_chain,
    preimage,
    sample,
    wlp_chain,
    wp_chain,
    wp_fold_atree,
)
from coapprox.cotrie import Alphabet, equiv_upto
from coapprox.dist import bernoulli, parse_dist_spec, uniform
from coapprox.order import DEFAULT_STEP_LIMIT, ERat, StepBudget
from coapprox.regex import (
    RCat,
    RComp,
    REmpty,
    REps,
    RInter,
    RStar,
    RSym,
    RUnion,
    compile_regex,
    random_regex,
)
from coapprox.sieve import first_primes, nats, sieve, verify_sieve


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


def trial_division_primes(bound):
    out = []
    for n in range(2, bound):
        if all(n % d for d in range(2, int(n**0.5) + 1)):
            out.append(n)
    return out


# --- 1 -----------------------------------------------------------------------


def test_sieve_prefix_and_verification():
    with criterion("sieve-first-25-and-verify-1000"):
        start = time.monotonic()
        primes, exhausted = first_primes(25)
        assert not exhausted
        assert primes == trial_division_primes(100)

        report = verify_sieve(1000)
        assert report.sound
        assert report.complete
        assert report.sorted
        assert report.nodup
        assert not report.exhausted
        assert time.monotonic() - start < 5.0


# --- 2 -----------------------------------------------------------------------


def test_productivity_and_bounded_divergence():
    with criterion("productivity-and-exhaustion"):
        assert check_productive(sieve(), 200) is True  # default step budget
        # A filter that never matches must report exhaustion, not hang.
        hopeless = filter_colist(lambda _: False, nats(0))
        assert check_productive(hopeless, 1) is EXHAUSTED


# --- 3 -----------------------------------------------------------------------


def _counted(l, box):
    """Wrap a stream so every forced cons cell bumps ``box[0]``."""

    def cell(budget):
        c = l.force(budget)
        if c is None:
            return None
        box[0] += 1
        return (c[0], _counted(c[1], box))

    return Colist(cell)


def test_cofold_computation_rule():
    with criterion("cofold-computation-rule"):
        rng = random.Random(31415)
        compared = 0
        for _ in range(100):
            # Stream: finite injection or an infinite arithmetic stream.
            if rng.random() < 0.6:
                items = [rng.randrange(0, 60) for _ in range(rng.randrange(0, 25))]
                stream_fn = lambda items=items: incl(items)
            else:
                start = rng.randrange(0, 10)
                stream_fn = lambda start=start: nats(start)

            m, r = rng.randrange(2, 7), rng.randrange(0, 7)
            pred = lambda x, m=m, r=r: x % m == r % m
            family = rng.choice(["or", "find"])
            if family == "or":
                lazy_f = lambda a, t, p=pred: True if p(a) else t.force()
                sem_f = lambda a, acc, p=pred: True if p(a) else acc
                bottom = False
            else:
                lazy_f = lambda a, t, p=pred: a if p(a) else t.force()
                sem_f = lambda a, acc, p=pred: a if p(a) else acc
                bottom = None

            box = [0]
            lazy = cofold_lazy(lazy_f, _counted(stream_fn(), box))
            if lazy is HIT_BOTTOM or lazy is EXHAUSTED:
                continue  # no value to compare; divergence was reported
            demanded = box[0]
            chain = cofold_sem(
                sem_f, bottom, stream_fn(), demanded + 2,
                le=lambda a, b: True,
            )
            assert chain.stabilized
            assert chain.values[chain.stabilized_at] == lazy
            assert chain.values[demanded] == lazy
            compared += 1
        assert compared >= 60, f"only {compared} pairs produced comparable values"


# --- 4 -----------------------------------------------------------------------


def test_filter_commutativity():
    with criterion("filter-commutativity"):
        rng = random.Random(27182)
        pool = [
            ("even", lambda x: x % 2 == 0, True),
            ("mod3", lambda x: x % 3 == 1, True),
            ("mod5", lambda x: x % 5 != 0, True),
            ("big", lambda x: x > 7, True),
            ("small", lambda x: x < 40, False),
            ("never", lambda x: False, False),
        ]
        for _ in range(200):
            infinite = rng.random() < 0.3
            if infinite:
                stream_fn = lambda s=rng.randrange(0, 15): nats(s)
                safe = [p for p in pool if p[2]]
            else:
                items = [rng.randrange(0, 80) for _ in range(rng.randrange(0, 40))]
                stream_fn = lambda items=items: incl(items)
                safe = pool
            _, p, _ = rng.choice(safe)
            _, q, _ = rng.choice(safe)
            depth = rng.randrange(0, 21)
            pq = filter_colist(p, filter_colist(q, stream_fn()))
            qp = filter_colist(q, filter_colist(p, stream_fn()))
            a = colist_idl(pq, depth)
            b = colist_idl(qp, depth)
            assert a == b
            # and the shared oracle: one-pass conjunction
            both = colist_idl(
                filter_colist(lambda x: p(x) and q(x), stream_fn()), depth
            )
            assert a == both


# --- 5 -----------------------------------------------------------------------


def test_kleene_algebra_laws(capsys):
    with criterion("kleene-algebra-laws"):
        start = time.monotonic()
        code = main(
            ["regex", "laws", "--depth", "6", "--trials", "200",
             "--seed", "20260825", "--json"]
        )
        out = capsys.readouterr().out
        elapsed = time.monotonic() - start
        assert code == 0
        body = json.loads(out)
        assert body["total_failures"] == 0
        assert len(body["axioms"]) == 15  # 13 equational + 2 star-induction
        for ax in body["axioms"]:
            assert ax["checked"] > 0
            assert ax["failures"] == []
        assert elapsed < 30.0


# --- 6 -----------------------------------------------------------------------


def _enum_lang(r, alphabet, maxlen):
    """Enumerate the language as a set of words of length <= maxlen."""
    universe = [""]
    frontier = [""]
    for _ in range(maxlen):
        frontier = [w + c for w in frontier for c in alphabet]
        universe.extend(frontier)
    uni = set(universe)

    def go(r):
        if isinstance(r, REmpty):
            return set()
        if isinstance(r, REps):
            return {""}
        if isinstance(r, RSym):
            return {r.symbol} if r.symbol in alphabet else set()
        if isinstance(r, RUnion):
            return go(r.left) | go(r.right)
        if isinstance(r, RInter):
            return go(r.left) & go(r.right)
        if isinstance(r, RComp):
            return uni - go(r.arg)
        if isinstance(r, RCat):
            left, right = go(r.left), go(r.right)
            return {
                u + v for u in left for v in right if len(u) + len(v) <= maxlen
            }
        if isinstance(r, RStar):
            base = go(r.arg)
            acc = {""}
            while True:
                nxt = acc | {
                    u + v for u in base for v in acc if len(u) + len(v) <= maxlen
                }
                if nxt == acc:
                    return acc
                acc = nxt
        raise TypeError(r)

    return go(r)


def test_equivalence_routes_coincide():
    with criterion("equivalence-coincidence"):
        rng = random.Random(16180)
        alpha = Alphabet.of("ab")
        depth = 5
        agreements = 0
        equal_count = 0
        for _ in range(100):
            r1 = random_regex(rng, alpha)
            r2 = random_regex(rng, alpha)
            structural = equiv_upto(
                compile_regex(r1, alpha), compile_regex(r2, alpha), depth
            ).equal
            enumerated = _enum_lang(r1, "ab", depth) == _enum_lang(r2, "ab", depth)
            assert structural == enumerated
            agreements += 1
            equal_count += structural
        assert agreements == 100
        assert 0 < equal_count < 100  # both verdicts actually occurred


# --- 7 -----------------------------------------------------------------------


def test_wp_wlp_exactness():
    with criterion("wp-wlp-exactness"):
        t = bernoulli(ERat(2, 3))
        event = indicator(lambda v: v is True)
        lo = wp_chain(event, t, 10)
        hi = wlp_chain(event, t, 10)
        assert [str(v) for v in lo.values] == [
            "0", "0", "1/2", "1/2", "5/8", "5/8",
            "21/32", "21/32", "85/128", "85/128", "341/512",
        ]
        for k in range(6):
            closed = ERat(Fraction(2, 3) * (1 - Fraction(1, 4**k)))
            assert lo.values[2 * k] == closed
        for k in range(5):
            closed = ERat(Fraction(2, 3) + Fraction(1, 3) / 4**k)
            assert hi.values[2 * k + 1] == closed
        p = ERat(2, 3)
        for wp_i, wlp_i in zip(lo.values, hi.values):
            assert wp_i <= p <= wlp_i


# --- 8 / 9 -------------------------------------------------------------------


def _random_finite_tree(rng, depth, values):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.2:
            return ABOT
        return ALeaf(rng.choice(values))
    return ANode(
        _random_finite_tree(rng, depth - 1, values),
        _random_finite_tree(rng, depth - 1, values),
    )


def _corpus():
    rng = random.Random(571)
    values = ("x", "y", "z")
    preds = [
        lambda v: v == "x",
        lambda v: v == "y",
        lambda v: v != "z",
        lambda v: True,
    ]
    return [
        (_random_finite_tree(rng, 5, values), rng.choice(preds))
        for _ in range(100)
    ]


def test_wp_is_measure_of_preimage():
    with criterion("wp-equals-measure-of-preimage"):
        for t, pred in _corpus():
            lazy = incl_atree(t)
            mu = mu_chain(preimage(pred, lazy), 7)
            wp = wp_chain(indicator(pred), lazy, 7)
            assert mu.values == wp.values
        coin = bernoulli(ERat(2, 3))
        pred = lambda v: v is True
        mu = mu_chain(preimage(pred, coin), 12)
        wp = wp_chain(indicator(pred), coin, 12)
        assert mu.values == wp.values


def test_preimage_disjointness():
    with criterion("preimage-disjointness"):
        for t, pred in _corpus():
            assert disjoint_upto(preimage(pred, incl_atree(t)), 10)
        for pred in (lambda v: v is True, lambda v: v is False):
            assert disjoint_upto(preimage(pred, bernoulli(ERat(2, 3))), 10)


# --- 10 ----------------------------------------------------------------------


def _all_atrees(depth, values):
    if depth == 0:
        return [ABOT] + [ALeaf(v) for v in values]
    smaller = _all_atrees(depth - 1, values)
    out = [ABOT] + [ALeaf(v) for v in values]
    out.extend(ANode(l, r) for l in smaller for r in smaller)
    return out


def _atree_bind(t, k):
    if isinstance(t, ALeaf):
        return k(t.value)
    if isinstance(t, ANode):
        return ANode(_atree_bind(t.left, k), _atree_bind(t.right, k))
    return ABOT


def test_wp_bind_and_markov():
    with criterion("wp-bind-and-markov"):
        values = ("x", "y")
        trees = _all_atrees(3, values)
        assert len(trees) == 21612
        tables = [
            {"x": ALeaf("x"), "y": ALeaf("y")},
            {"x": ALeaf("y"), "y": ABOT},
            {"x": ANode(ALeaf("x"), ALeaf("y")), "y": ALeaf("x")},
            {"x": ABOT, "y": ANode(ABOT, ALeaf("y"))},
        ]
        f = indicator(lambda v: v == "x")
        for tb in tables:
            k = lambda v, tb=tb: tb[v]
            inner = {v: wp_fold_atree(f, tb[v]) for v in values}
            for t in trees:
                lhs = wp_fold_atree(f, _atree_bind(t, k))
                rhs = wp_fold_atree(lambda v: inner[v], t)
                assert lhs == rhs

        rng = random.Random(9001)
        outcomes = list(range(5))
        for _ in range(500):
            t = _random_finite_tree(rng, 3, outcomes)
            weights = {
                v: ERat(rng.randrange(0, 9), rng.randrange(1, 5))
                for v in outcomes
            }
            g = lambda v, w=weights: w[v]
            a = ERat(rng.randrange(1, 10), rng.randrange(1, 4))
            assert markov_check(g, t, a)


# --- 11 ----------------------------------------------------------------------


def test_equidistribution_desk_scale():
    with criterion("equidistribution"):
        start = time.monotonic()
        n = 100_000

        coin = bernoulli(ERat(2, 3))
        src = BitSource.from_seed(42)
        budget = StepBudget(DEFAULT_STEP_LIMIT)
        hits = 0
        for _ in range(n):
            out = sample(coin, src, budget)
            assert isinstance(out, Sampled)
            hits += out.value is True
        assert abs(hits / n - 2 / 3) <= 0.01

        u3 = uniform(3)
        src = BitSource.from_seed(7)
        budget = StepBudget(DEFAULT_STEP_LIMIT)
        counts = [0, 0, 0]
        for _ in range(n):
            out = sample(u3, src, budget)
            counts[out.value] += 1
        for c in counts:
            assert abs(c / n - 1 / 3) <= 0.01

        assert time.monotonic() - start < 10.0


# --- 12 ----------------------------------------------------------------------


def _run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "coapprox", *argv],
        capture_output=True,
        timeout=120,
    )


def test_cli_determinism():
    with criterion("cli-determinism"):
        commands = [
            ("equidist", "--dist", "bernoulli:2/3", "--event", "true",
             "--n", "20000", "--seed", "42", "--tol", "1/100", "--json"),
            ("sample", "--dist", "uniform:3", "--n", "500", "--seed", "9"),
            ("sample", "--dist", "geometric:1/2", "--n", "300", "--seed", "4",
             "--json"),
            ("sieve", "--count", "25"),
            ("wp", "--dist", "bernoulli:2/3", "--event", "true",
             "--fuel", "10", "--eps", "1/100", "--json"),
            ("regex", "laws", "--depth", "4", "--trials", "25",
             "--seed", "3", "--json"),
        ]
        for argv in commands:
            a, b = _run_cli(*argv), _run_cli(*argv)
            assert a.returncode == b.returncode
            assert a.stdout == b.stdout, f"nondeterministic: {argv}"
            assert a.stderr == b.stderr
