import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poolrisk import Utility
from poolrisk.errors import InvariantError
from poolrisk.pooling import (
    CRITERIA,
    Allocation,
    Criterion,
    SampleSpace,
    criterion_value,
    pareto_gap,
    pareto_search,
    proportional_allocation,
)

EXP1 = Utility.exponential(1.0)
UTILITIES = [EXP1, Utility.power(2.0), Utility.log()]


def two_atoms():
    return SampleSpace(("up", "down"), [2.0, 0.0], [[0.5, 0.5]])


def spaces():
    """Three test spaces with strictly positive endowment so every utility applies."""
    return [
        SampleSpace(("a", "b"), [2.0, 0.5], [[0.5, 0.5], [0.2, 0.8]], alphas=[0.0, 0.05], betas=[1.0, 1.3]),
        SampleSpace(("a", "b", "c"), [3.0, 1.0, 0.4], [[0.2, 0.5, 0.3], [0.4, 0.4, 0.2], [0.1, 0.1, 0.8]],
                    alphas=[0.0, 0.1, 0.02], betas=[1.0, 1.2, 1.05]),
        SampleSpace(("a", "b", "c", "d"), [4.0, 2.0, 1.0, 0.25], [[0.25] * 4, [0.1, 0.2, 0.3, 0.4]],
                    alphas=[0.03, 0.0], betas=[1.0, 1.1]),
    ]


class TestSpace:
    def test_weight_sum(self):
        with pytest.raises(InvariantError, match=r"models\[1\]"):
            SampleSpace(("a", "b"), [1, 1], [[0.5, 0.5], [0.5, 0.4]])

    def test_negative_weight(self):
        with pytest.raises(InvariantError):
            SampleSpace(("a", "b"), [1, 1], [[1.2, -0.2]])

    def test_shape_mismatch(self):
        with pytest.raises(InvariantError):
            SampleSpace(("a",), [1, 1], [[0.5, 0.5]])

    def test_penalty_normalization(self):
        with pytest.raises(InvariantError):
            SampleSpace(("a", "b"), [1, 1], [[0.5, 0.5]], alphas=[0.1])


class TestProportional:
    def test_single_agent(self):
        s = two_atoms()
        np.testing.assert_array_equal(proportional_allocation(s, 1).shares, [[2.0, 0.0]])

    def test_two_agents(self):
        a = proportional_allocation(two_atoms(), 2)
        np.testing.assert_array_equal(a.shares, [[1.0, 0.0], [1.0, 0.0]])
        np.testing.assert_array_equal(a.shares.sum(axis=0), two_atoms().endowment)

    def test_rejects_zero_agents(self):
        with pytest.raises(InvariantError):
            proportional_allocation(two_atoms(), 0)

    @pytest.mark.parametrize("kind", CRITERIA)
    @pytest.mark.parametrize("u", UTILITIES)
    @pytest.mark.parametrize("n", [1, 2, 3, 7])
    def test_gap_is_exactly_zero(self, kind, u, n):
        for s in spaces():
            assert pareto_gap(s, Criterion(kind, u), proportional_allocation(s, n)) == 0.0


class TestGap:
    def test_two_atom_example(self):
        gap = pareto_gap(two_atoms(), Criterion("expected-utility", EXP1), Allocation([[2.0, 0.0], [0.0, 0.0]]))
        assert gap == pytest.approx(0.5 * (1 - math.exp(-1)) ** 2, abs=1e-15)
        assert gap == pytest.approx(0.1997882004, abs=1e-10)

    def test_not_full(self):
        with pytest.raises(InvariantError):
            pareto_gap(two_atoms(), Criterion("expected-utility", EXP1), Allocation([[1.0, 0.0], [0.0, 0.0]]))

    def test_domain_exit_is_plus_inf(self):
        s = spaces()[0]
        a = Allocation([[2.5, 0.25], [-0.5, 0.25]])
        assert pareto_gap(s, Criterion("expected-utility", Utility.log()), a) == math.inf

    def test_unknown_criterion(self):
        with pytest.raises(InvariantError):
            Criterion("mean-variance", EXP1)

    @given(st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=4))
    def test_cash_transfers_neutral_for_exponential_ce(self, cash):
        s = spaces()[1]
        m = np.array(cash) - np.mean(cash)
        n = m.size
        shares = s.endowment / n + m[:, None]
        assert pareto_gap(s, Criterion("robust-ce", Utility.exponential(0.8)), Allocation(shares)) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("u", UTILITIES)
    @given(data=st.data())
    def test_strict_concavity(self, u, data):
        s = spaces()[2]
        n = data.draw(st.integers(2, 3))
        w = np.array(data.draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
        atom = data.draw(st.integers(0, 3))
        shares = np.tile(s.endowment / n, (n, 1))
        shares[:, atom] = s.endowment[atom] * w / w.sum()
        if np.abs(shares - s.endowment / n).max() <= 1e-3:
            return
        assert pareto_gap(s, Criterion("expected-utility", u), Allocation(shares)) > 0

    def test_criterion_vectorized(self):
        s = spaces()[1]
        Y = np.random.default_rng(0).uniform(0.2, 2.0, size=(5, 2, 3))
        for kind in CRITERIA:
            c = Criterion(kind, Utility.log())
            batch = criterion_value(s, c, Y)
            loop = [[criterion_value(s, c, Y[i, j]) for j in range(2)] for i in range(5)]
            np.testing.assert_allclose(batch, loop, rtol=1e-14)


class TestSearch:
    @pytest.mark.parametrize("kind", CRITERIA)
    @pytest.mark.parametrize("u", UTILITIES)
    def test_no_counterexample(self, kind, u):
        for s in spaces():
            for n in (2, 3):
                assert pareto_search(s, Criterion(kind, u), n, 2000, seed=3).min_gap >= -1e-10

    def test_deterministic(self):
        s = spaces()[0]
        c = Criterion("variational", EXP1)
        a = pareto_search(s, c, 3, 500, seed=11)
        b = pareto_search(s, c, 3, 500, seed=11)
        assert a.min_gap == b.min_gap
        np.testing.assert_array_equal(a.worst_allocation.shares, b.worst_allocation.shares)

    def test_worst_allocation_is_full(self):
        s = spaces()[2]
        r = pareto_search(s, Criterion("homothetic", Utility.log()), 3, 300, seed=1)
        r.worst_allocation.check_full(s)
        assert pareto_gap(s, Criterion("homothetic", Utility.log()), r.worst_allocation) == pytest.approx(r.min_gap, abs=1e-12)

    def test_rejects_zero_trials(self):
        with pytest.raises(InvariantError):
            pareto_search(two_atoms(), Criterion("expected-utility", EXP1), 2, 0, seed=0)
