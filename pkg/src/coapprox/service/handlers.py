"""Command handlers shared by the HTTP endpoints and the CLI.

Each handler takes a request model and returns a response model.  Input
problems surface as ValueError (or parser/alphabet errors derived from it);
budget exhaustion inside a non-report command propagates as
:class:`~coapprox.order.BudgetExhausted`.
"""
from __future__ import annotations

from dataclasses import asdict
from fractions import Fraction

from ..cotree import (
    BitSource,
    Diverged,
    Sampled,
    indicator,
    sample,
    wlp_chain,
    wp_chain,
)
from ..cotrie import Alphabet, equiv_upto, in_lang
from ..dist import parse_dist_spec, parse_event
from ..order import EpsGap, ERat, StepBudget, converge
from ..regex import compile_pattern, ka_axiom_suite
from ..sieve import first_primes, verify_sieve
from .models import (
    EquidistRequest,
    EquidistResponse,
    RegexEquivRequest,
    RegexEquivResponse,
    RegexLawsRequest,
    RegexLawsResponse,
    RegexMatchRequest,
    RegexMatchResponse,
    SampleRequest,
    SampleResponse,
    SieveRequest,
    SieveResponse,
    WpRequest,
    WpResponse,
)

# Fuel schedule for tolerance-driven bracket search.
_FUEL_LADDER = (8, 16, 32, 64, 128, 256, 512)


class BracketNotConverged(Exception):
    """The wp/wlp bracket stayed wider than the requested gap."""

    def __init__(self, lower: ERat, upper: ERat, eps: ERat, fuel: int):
        super().__init__(
            f"bracket [{lower}, {upper}] still wider than {eps} at fuel {fuel}"
        )
        self.lower = lower
        self.upper = upper
        self.eps = eps
        self.fuel = fuel


def run_sieve(req: SieveRequest) -> SieveResponse:
    primes, exhausted = first_primes(req.count, StepBudget(req.step_budget))
    if exhausted or not primes:
        return SieveResponse(count=req.count, primes=primes, exhausted=True)
    # Verify the produced prefix with a fresh budget of the same size.
    report = verify_sieve(primes[-1], StepBudget(req.step_budget))
    return SieveResponse(
        count=req.count,
        primes=primes,
        exhausted=report.exhausted,
        bound=report.bound,
        sound=report.sound,
        complete=report.complete,
        sorted=report.sorted,
        nodup=report.nodup,
        productive_to=report.productive_to,
    )


def run_regex_match(req: RegexMatchRequest) -> RegexMatchResponse:
    alpha = Alphabet.of(req.alphabet)
    lang = compile_pattern(req.pattern, alpha)
    return RegexMatchResponse(
        pattern=req.pattern,
        text=req.text,
        alphabet=req.alphabet,
        accept=in_lang(lang, req.text),
    )


def run_regex_equiv(req: RegexEquivRequest) -> RegexEquivResponse:
    alpha = Alphabet.of(req.alphabet)
    res = equiv_upto(
        compile_pattern(req.left, alpha),
        compile_pattern(req.right, alpha),
        req.depth,
    )
    return RegexEquivResponse(
        left=req.left,
        right=req.right,
        depth=req.depth,
        alphabet=req.alphabet,
        equal=res.equal,
        counterexample=res.counterexample,
    )


def run_regex_laws(req: RegexLawsRequest) -> RegexLawsResponse:
    report = ka_axiom_suite(
        req.depth, req.trials, req.seed, Alphabet.of(req.alphabet)
    )
    return RegexLawsResponse(**asdict(report))


def _bracket(tree, pred, fuel: int, budget: StepBudget):
    lo = wp_chain(indicator(pred), tree, fuel, budget)
    hi = wlp_chain(indicator(pred), tree, fuel, budget)
    return lo, hi


def run_wp(req: WpRequest) -> WpResponse:
    dist = parse_dist_spec(req.dist)
    pred = parse_event(req.event)
    lo, hi = _bracket(dist.tree, pred, req.fuel, StepBudget(req.step_budget))
    converged = at_fuel = None
    if req.eps is not None:
        res = converge(lo, EpsGap(ERat.parse(req.eps)), dual=hi)
        converged, at_fuel = res.converged, res.at_fuel
    return WpResponse(
        dist=req.dist,
        event=req.event,
        fuel=req.fuel,
        wp_lower=str(lo.last),
        wlp_upper=str(hi.last),
        eps=req.eps,
        converged=converged,
        converged_at_fuel=at_fuel,
    )


def run_sample(req: SampleRequest) -> SampleResponse:
    dist = parse_dist_spec(req.dist)
    src = BitSource.from_seed(req.seed)
    budget = StepBudget(req.step_budget)
    values = []
    n_diverged = n_exhausted = total_bits = 0
    for _ in range(req.n):
        out = sample(dist.tree, src, budget)
        if isinstance(out, Sampled):
            values.append(out.value)
            total_bits += out.bits_consumed
        else:
            values.append(None)
            if isinstance(out, Diverged):
                n_diverged += 1
            else:
                n_exhausted += 1
    return SampleResponse(
        dist=req.dist,
        n=req.n,
        seed=req.seed,
        values=values,
        n_diverged=n_diverged,
        n_exhausted=n_exhausted,
        total_bits=total_bits,
    )


def run_equidist(req: EquidistRequest) -> EquidistResponse:
    dist = parse_dist_spec(req.dist)
    pred = parse_event(req.event)
    tol = ERat.parse(req.tol)
    eps = tol / ERat(10)
    budget = StepBudget(req.step_budget)

    lo = hi = None
    result = None
    for fuel in _FUEL_LADDER:
        lo, hi = _bracket(dist.tree, pred, fuel, budget)
        result = converge(lo, EpsGap(eps), dual=hi)
        if result.converged:
            break
    if result is None or not result.converged:
        raise BracketNotConverged(lo.last, hi.last, eps, _FUEL_LADDER[-1])

    src = BitSource.from_seed(req.seed)
    hits = 0
    n_valid = 0
    n_diverged = 0
    for _ in range(req.n):
        out = sample(dist.tree, src, budget)
        if isinstance(out, Sampled):
            n_valid += 1
            hits += 1 if pred(out.value) else 0
        else:
            n_diverged += 1

    empirical = Fraction(hits, n_valid) if n_valid else Fraction(0)
    midpoint = (result.lower.frac + result.upper.frac) / 2
    passed = n_valid > 0 and abs(empirical - midpoint) <= tol.frac
    return EquidistResponse(
        dist=req.dist,
        event=req.event,
        seed=req.seed,
        n_samples=req.n,
        n_diverged=n_diverged,
        empirical_freq=float(empirical),
        wp_lower=str(result.lower),
        wlp_upper=str(result.upper),
        tolerance=req.tol,
        passed=passed,
    )
