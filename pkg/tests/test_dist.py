"""Distribution constructors: exact masses, shapes, spec parsing."""
from fractions import Fraction

import pytest

from coapprox.cotree import (
    ABOT,
    ALeaf,
    ANode,
    BitSource,
    Sampled,
    cotree_idl,
    indicator,
    sample,
    wlp_chain,
    wp_chain,
)
from coapprox.dist import (
    Dist,
    bernoulli,
    geometric,
    parse_dist_spec,
    parse_event,
    uniform,
)
from coapprox.order import ERAT_INF, ERAT_ONE, ERat


def er(num, den=1):
    return ERat(num, den)


def p_of(tree, pred, fuel=24):
    return wp_chain(indicator(pred), tree, fuel).last


class TestBernoulli:
    def test_degenerate_false(self):
        assert cotree_idl(bernoulli(er(0)), 1) == ALeaf(False)

    def test_degenerate_true(self):
        assert cotree_idl(bernoulli(er(1)), 1) == ALeaf(True)

    def test_fair_coin_is_one_node(self):
        assert cotree_idl(bernoulli(er(1, 2)), 2) == ANode(
            ALeaf(True), ALeaf(False)
        )

    def test_two_thirds_shape(self):
        t = bernoulli(er(2, 3))
        assert cotree_idl(t, 2) == ANode(ALeaf(True), ANode(ABOT, ABOT))
        assert cotree_idl(t, 3) == ANode(
            ALeaf(True), ANode(ALeaf(False), ANode(ABOT, ABOT))
        )

    def test_dyadic_terminates_exactly(self):
        # Denominator 8 fills all three bit levels: no rejection branch.
        ch = wp_chain(indicator(lambda v: v is True), bernoulli(er(3, 8)), 8)
        assert ch.stabilized
        assert ch.last == er(3, 8)
        chf = wp_chain(indicator(lambda v: v is False), bernoulli(er(3, 8)), 8)
        assert chf.last == er(5, 8)

    @pytest.mark.parametrize("num,den", [(1, 3), (3, 5), (1, 5), (5, 7), (7, 12)])
    def test_rejection_brackets_the_probability(self, num, den):
        t = bernoulli(er(num, den))
        pred = lambda v: v is True
        lo = wp_chain(indicator(pred), t, 64).last
        hi = wlp_chain(indicator(pred), t, 64).last
        p = er(num, den)
        assert lo <= p <= hi
        assert hi.monus(lo) < er(1, 10**6)

    def test_mass_splits_between_outcomes(self):
        t = bernoulli(er(3, 5))
        lo_t = wp_chain(indicator(lambda v: v is True), t, 40).last
        lo_f = wp_chain(indicator(lambda v: v is False), t, 40).last
        # The two lower bounds sum to the total discovered mass.
        total = wp_chain(indicator(lambda v: True), t, 40).last
        assert lo_t + lo_f == total
        assert total <= ERAT_ONE

    def test_rejects_bad_probabilities(self):
        with pytest.raises(ValueError):
            bernoulli(er(3, 2))
        with pytest.raises(ValueError):
            bernoulli(ERAT_INF)


class TestUniform:
    def test_singleton(self):
        assert cotree_idl(uniform(1), 1) == ALeaf(0)

    def test_power_of_two_exact(self):
        u = uniform(4)
        for k in range(4):
            ch = wp_chain(indicator(lambda v, k=k: v == k), u, 4)
            assert ch.stabilized
            assert ch.last == er(1, 4)

    def test_two_outcomes(self):
        assert cotree_idl(uniform(2), 2) == ANode(ALeaf(1), ALeaf(0))

    def test_rejection_case_evens_out(self):
        u = uniform(5)
        masses = [p_of(u, lambda v, k=k: v == k, fuel=40) for k in range(5)]
        assert len(set(masses)) == 1
        assert masses[0] > er(199, 1000)
        assert p_of(u, lambda v: v >= 5, fuel=40) == er(0)

    def test_expected_value_uniform_four(self):
        ch = wp_chain(lambda k: er(k), uniform(4), 4)
        assert ch.last == er(3, 2)

    def test_needs_positive_size(self):
        with pytest.raises(ValueError):
            uniform(0)


class TestGeometric:
    def test_fair_coin_masses(self):
        g = geometric(er(1, 2))
        for k in range(5):
            ch = wp_chain(indicator(lambda v, k=k: v == k), g, 16)
            assert ch.stabilized
            assert ch.last == er(1, 2 ** (k + 1))

    def test_certain_success(self):
        assert cotree_idl(geometric(er(1)), 1) == ALeaf(0)

    def test_biased_masses_bracket(self):
        g = geometric(er(2, 3))
        for k in range(3):
            p = ERat(Fraction(2, 3) * Fraction(1, 3) ** k)
            lo = wp_chain(indicator(lambda v, k=k: v == k), g, 40).last
            hi = wlp_chain(indicator(lambda v, k=k: v == k), g, 40).last
            assert lo <= p <= hi
            assert hi.monus(lo) < er(1, 10**6)

    def test_zero_success_rejected(self):
        with pytest.raises(ValueError):
            geometric(er(0))

    def test_sampling_counts_failures(self):
        g = geometric(er(1, 2))
        assert sample(g, BitSource.from_bits("1")) == Sampled(0, 1)
        assert sample(g, BitSource.from_bits("001")) == Sampled(2, 3)


class TestSpecParsing:
    def test_bernoulli_spec(self):
        d = parse_dist_spec("bernoulli:2/3")
        assert d.kind == "bernoulli" and d.param == "2/3"
        assert p_of(d.tree, lambda v: v is True, fuel=10) == er(341, 512)

    def test_uniform_spec(self):
        d = parse_dist_spec("uniform:6")
        assert d.kind == "uniform"
        assert p_of(d.tree, lambda v: v == 5, fuel=30) > er(16, 100)

    def test_geometric_spec(self):
        d = parse_dist_spec("geometric:1/2")
        assert p_of(d.tree, lambda v: v == 0, fuel=10) == er(1, 2)

    @pytest.mark.parametrize(
        "bad",
        [
            "bernoulli",  # missing parameter
            "bernoulli:",
            "poisson:3",  # unknown kind
            "uniform:two",
            "uniform:0",
            "bernoulli:5/3",
            "bernoulli:-1/2",
            "geometric:0",
        ],
    )
    def test_bad_specs_raise(self, bad):
        with pytest.raises(ValueError):
            parse_dist_spec(bad)

    def test_event_true_false(self):
        assert parse_event("true")(True)
        assert not parse_event("true")(False)
        assert parse_event("false")(False)
        # Events distinguish bools from ints on purpose.
        assert not parse_event("true")(1)

    def test_event_point_mass(self):
        ev = parse_event("k=3")
        assert ev(3) and not ev(2)

    @pytest.mark.parametrize("bad", ["maybe", "k=", "k=x", ""])
    def test_bad_events_raise(self, bad):
        with pytest.raises(ValueError):
            parse_event(bad)


class TestSampleStatistics:
    def test_bernoulli_frequency_smoke(self):
        t = bernoulli(er(2, 3))
        src = BitSource.from_seed(2024)
        hits = 0
        n = 3000
        for _ in range(n):
            out = sample(t, src)
            assert isinstance(out, Sampled)
            hits += out.value is True
        assert abs(hits / n - 2 / 3) < 0.03

    def test_uniform_frequency_smoke(self):
        u = uniform(3)
        src = BitSource.from_seed(7)
        counts = [0, 0, 0]
        n = 3000
        for _ in range(n):
            out = sample(u, src)
            counts[out.value] += 1
        for c in counts:
            assert abs(c / n - 1 / 3) < 0.04

    def test_same_seed_same_draws(self):
        t = parse_dist_spec("geometric:1/3").tree
        runs = []
        for _ in range(2):
            src = BitSource.from_seed(555)
            runs.append([sample(t, src) for _ in range(200)])
        assert runs[0] == runs[1]
