import numpy as np
import pytest
import scipy.stats

from coevo import (
    BilinearGame,
    BilinearParams,
    BitVector,
    InteractionDistribution,
    PairedPopulations,
    PdcoeaConfig,
    PdcoeaDistribution,
    Population,
    hamming,
    mutate,
    ones,
    pdcoea_interaction,
    run_trial,
    select_pair,
    selection_slot_rates,
    singleton_target,
    spawn_stream,
    step_generation,
)
from coevo.harness import paired_from_counts
from coevo.pdcoea import _select_slots

from conftest import count_vector


class FakeRng:
    """Feeds preset slot draws into the selection step."""

    def __init__(self, rows):
        self.rows = list(rows)

    def integers(self, low, high, size):
        out = np.array(self.rows[: size[0]])
        self.rows = self.rows[size[0]:]
        return out.reshape(size)


@pytest.fixture
def game(fig_params):
    return BilinearGame(fig_params)


class TestSelectPair:
    def test_identical_population_returns_the_clone(self, fig_params, game):
        member = count_vector(4, 10)
        pops = PairedPopulations(
            Population.from_bitvectors([member] * 5),
            Population.from_bitvectors([member] * 5),
        )
        rng = spawn_stream(31, 0)
        for _ in range(10):
            x, y = select_pair(pops, game, rng)
            assert x == member and y == member

    def test_forced_draws_first_pair_dominates(self, fig_params, game):
        # slots: predators (7, 8) ones, prey (2, 3) ones; (7,2) dominates (8,3)
        pops = paired_from_counts([7, 8], [2, 3], 10)
        x, y = select_pair(pops, game, FakeRng([[0, 0, 1, 1]]))
        assert (ones(x), ones(y)) == (7, 2)

    def test_forced_draws_dominance_fails_second_wins(self, fig_params, game):
        # (7,2) does not dominate (8,1): the second pair wins the tie rule
        pops = paired_from_counts([7, 8], [2, 1], 10)
        x, y = select_pair(pops, game, FakeRng([[0, 0, 1, 1]]))
        assert (ones(x), ones(y)) == (8, 1)

    def test_generic_oracle_path_matches_counts_path(self, fig_params, game):
        class PairOracle:
            def __init__(self, params):
                self.params = params

            def dominates(self, x1, y1, x2, y2):
                from coevo import dominates
                return dominates(x1, y1, x2, y2, self.params)

        pops = paired_from_counts([7, 8, 2, 5], [2, 1, 3, 0], 10)
        draws = [[i1, k1, i2, k2]
                 for i1 in range(4) for k1 in range(4) for i2 in range(4) for k2 in range(4)]
        fast = _select_slots(pops, game, FakeRng(list(draws)), len(draws))
        slow = _select_slots(pops, PairOracle(fig_params), FakeRng(list(draws)), len(draws))
        assert np.array_equal(fast[0], slow[0]) and np.array_equal(fast[1], slow[1])


class TestMutate:
    def test_chi_zero_is_identity(self):
        v = count_vector(5, 12)
        assert mutate(v, 0.0, spawn_stream(32, 0)) == v

    def test_chi_n_is_complement(self):
        v = count_vector(5, 12)
        assert mutate(v, 12.0, spawn_stream(32, 1)) == v.complement()

    def test_input_unmodified(self):
        v = count_vector(5, 12)
        before = v.words.copy()
        mutate(v, 6.0, spawn_stream(32, 2))
        assert np.array_equal(v.words, before)

    def test_chi_out_of_range(self):
        with pytest.raises(ValueError):
            mutate(count_vector(1, 4), 4.5, spawn_stream(1, 0))

    def test_mean_flip_count_chi_one(self):
        n, draws = 100, 10**5
        rng = spawn_stream(33, 0)
        parent = count_vector(40, n)
        total = sum(hamming(parent, mutate(parent, 1.0, rng)) for _ in range(draws))
        assert 0.97 <= total / draws <= 1.03

    def test_offspring_count_distribution_matches_convolution(self):
        # two-stage law: ones' = a - Bin(a, p) + Bin(n-a, p)
        n, a, chi, draws = 10, 4, 2.0, 10**5
        p = chi / n
        rng = spawn_stream(34, 0)
        parent = count_vector(a, n)
        observed = np.bincount(
            [ones(mutate(parent, chi, rng)) for _ in range(draws)], minlength=n + 1)
        pmf = np.zeros(n + 1)
        for d1 in range(a + 1):
            for d0 in range(n - a + 1):
                pmf[a - d1 + d0] += (
                    scipy.stats.binom.pmf(d1, a, p) * scipy.stats.binom.pmf(d0, n - a, p))
        keep = pmf * draws >= 5
        obs = np.concatenate([observed[keep], [observed[~keep].sum()]])
        exp = np.concatenate([pmf[keep], [pmf[~keep].sum()]]) * draws
        _, pvalue = scipy.stats.chisquare(obs, exp * obs.sum() / exp.sum())
        assert pvalue >= 1e-3


class TestInteraction:
    def test_chi_zero_singletons_fixed_point(self, fig_params, game):
        pops = paired_from_counts([3], [7], 10)
        x, y = pdcoea_interaction(pops, game, 0.0, spawn_stream(35, 0))
        assert ones(x) == 3 and ones(y) == 7

    def test_deterministic_given_stream(self, fig_params, game):
        pops = paired_from_counts([3, 6, 2], [7, 1, 5], 10)
        a = pdcoea_interaction(pops, game, 0.8, spawn_stream(36, 4))
        b = pdcoea_interaction(pops, game, 0.8, spawn_stream(36, 4))
        assert a[0] == b[0] and a[1] == b[1]

    def test_singleton_offspring_law_through_interaction(self, fig_params, game):
        # selection is the identity on singletons; offspring counts follow the
        # same two-stage binomial convolution as mutate
        n, a, chi, draws = 8, 3, 1.5, 4 * 10**4
        params = BilinearParams(n=n, alpha=0.5, beta=0.5, epsilon=0.125)
        pops = paired_from_counts([a], [a], n)
        rng = spawn_stream(37, 0)
        p = chi / n
        observed = np.zeros(n + 1)
        for _ in range(draws):
            x, _ = pdcoea_interaction(pops, BilinearGame(params), chi, rng)
            observed[ones(x)] += 1
        pmf = np.zeros(n + 1)
        for d1 in range(a + 1):
            for d0 in range(n - a + 1):
                pmf[a - d1 + d0] += (
                    scipy.stats.binom.pmf(d1, a, p) * scipy.stats.binom.pmf(d0, n - a, p))
        keep = pmf * draws >= 5
        obs = np.concatenate([observed[keep], [observed[~keep].sum()]])
        exp = np.concatenate([pmf[keep], [pmf[~keep].sum()]]) * draws
        _, pvalue = scipy.stats.chisquare(obs, exp * obs.sum() / exp.sum())
        assert pvalue >= 1e-3


class IdentityDistribution(InteractionDistribution):
    def sample(self, pops, rng):
        return pops.predators.member(0), pops.prey.member(0)


class TestStepGeneration:
    def test_identity_distribution_keeps_singletons(self, fig_params):
        pops = paired_from_counts([4], [9], 10)
        child = step_generation(pops, IdentityDistribution(), spawn_stream(38, 0))
        assert child.predators.member(0) == pops.predators.member(0)
        assert child.prey.member(0) == pops.prey.member(0)

    def test_generation_increments(self, fig_params, game):
        pops = paired_from_counts([4, 5], [9, 2], 10)
        child = step_generation(pops, PdcoeaDistribution(game, 0.5), spawn_stream(38, 1))
        assert child.generation == pops.generation + 1
        assert child.lam == pops.lam and child.n == pops.n

    def test_offspring_fraction_matches_exact_enumeration(self, fig_params, game):
        # chi = 0 and two clone blocks, one strictly dominating: the offspring
        # share of the dominant pair converges to the enumerated probability
        from coevo import exact_selection_distribution

        lam = 6
        pops = paired_from_counts([2] * 3 + [8] * 3, [1] * 3 + [9] * 3, 10)
        exact = exact_selection_distribution(
            pops, game, lambda x, y: (ones(x), ones(y)) == (2, 1))
        dist = PdcoeaDistribution(game, 0.0)
        rng = spawn_stream(39, 0)
        reps = 2000
        hits = 0
        for _ in range(reps):
            child = step_generation(pops, dist, rng)
            hits += int(((child.predators.ones == 2) & (child.prey.ones == 1)).sum())
        freq = hits / (reps * lam)
        se = float(exact * (1 - exact) / (reps * lam)) ** 0.5
        assert abs(freq - float(exact)) <= 6 * se

    def test_slot_exchangeability(self, fig_params, game):
        # slot-wise marginals of a region event agree across slots
        pops = paired_from_counts([2, 3, 7, 8], [1, 2, 3, 9], 10)
        dist = PdcoeaDistribution(game, 0.3)
        rng = spawn_stream(40, 0)
        reps = 3000
        lam = pops.lam
        counts = np.zeros(lam)
        for _ in range(reps):
            child = step_generation(pops, dist, rng)
            counts += child.predators.ones < fig_params.beta_n
        rates = counts / reps
        pooled = rates.mean()
        se = (pooled * (1 - pooled) / reps) ** 0.5
        assert np.all(np.abs(rates - pooled) <= 6 * se + 1e-12)

    def test_shape_preserved_under_any_chi(self, fig_params, game):
        pops = paired_from_counts([0, 10, 5], [5, 0, 10], 10)
        for chi in (0.01, 1.0, 9.5, 10.0):
            child = step_generation(pops, PdcoeaDistribution(game, chi), spawn_stream(41, 0))
            assert child.n == 10 and child.predators.words.shape == pops.predators.words.shape


class TestReproductiveRate:
    def test_slot_selection_probability_bounded(self, fig_params, game):
        from fractions import Fraction

        rng = spawn_stream(42, 0)
        for lam in (2, 3, 4, 6):
            cap = Fraction(1, lam) * (2 - Fraction(1, lam))
            for _ in range(5):
                pops = paired_from_counts(
                    rng.integers(0, 11, size=lam), rng.integers(0, 11, size=lam), 10)
                pred_rates, prey_rates = selection_slot_rates(pops, game)
                assert max(pred_rates) <= cap and max(prey_rates) <= cap
                # per generation: lambda iterations
                assert lam * max(max(pred_rates), max(prey_rates)) <= 2 - Fraction(1, lam)

    def test_bound_tight_for_always_winning_slot(self, fig_params, game):
        from fractions import Fraction

        # identical prey reduce dominance to a payoff comparison on the
        # predators; the strictly better predator is selected whenever drawn
        pops = paired_from_counts([10, 0], [10, 10], 10)
        pred_rates, _ = selection_slot_rates(pops, game)
        assert pred_rates[0] == Fraction(1, 2) * (2 - Fraction(1, 2))


class TestRunTrial:
    def make_cfg(self, **kw):
        game = kw.pop("game", BilinearParams(n=10, alpha=0.4, beta=0.6, epsilon=0.1))
        base = dict(lam=8, chi=0.5, n=game.n, seed=5, budget_generations=50, game=game)
        base.update(kw)
        return PdcoeaConfig(**base)

    def test_immediate_hit_reports_zero_interactions(self):
        # beta = 1 puts every random predator in R0 w.h.p.; alpha - epsilon = 0
        # makes the prey band [0, alpha*n) catch any below-alpha prey
        game = BilinearParams(n=6, alpha=0.5, beta=1.0, epsilon=0.5)
        cfg = self.make_cfg(game=game, lam=8, seed=3, budget_generations=5)
        record = run_trial(cfg)
        assert record.hit and record.T_interactions == 0 and record.generations_run == 0

    def test_impossible_target_times_out_at_budget(self):
        game = BilinearParams(n=10, alpha=0.5, beta=0.0, epsilon=0.25)  # R0 empty
        cfg = self.make_cfg(game=game, lam=4, budget_generations=1)
        record = run_trial(cfg)
        assert not record.hit
        assert record.T_interactions == 4 and record.generations_run == 1

    def test_record_identical_across_runs(self):
        cfg = self.make_cfg(seed=11, budget_generations=30)
        assert run_trial(cfg) == run_trial(cfg)

    def test_interactions_multiple_of_lambda(self):
        for seed in range(6):
            cfg = self.make_cfg(lam=7, seed=seed, budget_generations=40)
            record = run_trial(cfg)
            assert record.T_interactions % 7 == 0

    def test_trajectory_rows_cover_evaluated_generations(self):
        cfg = self.make_cfg(seed=11, budget_generations=30)
        record = run_trial(cfg)
        assert record.trajectory is not None
        expected = record.generations_run + 1 if record.hit else record.generations_run
        assert len(record.trajectory) == expected
        assert list(record.trajectory["generation"]) == list(range(expected))

    def test_trajectory_disabled(self):
        cfg = self.make_cfg(record_trajectory=False)
        assert run_trial(cfg).trajectory is None

    def test_observer_collects_per_generation(self):
        cfg = self.make_cfg(seed=11, budget_generations=30)
        record = run_trial(cfg, observer=lambda pops: pops.generation)
        assert record.observed == tuple(range(len(record.trajectory)))

    def test_singleton_target_run(self):
        game = BilinearParams(n=8, alpha=1.0, beta=0.125, epsilon=0.125)
        target = singleton_target(BitVector.zeros(8), BitVector.all_ones(8))
        cfg = PdcoeaConfig(lam=20, chi=0.2, n=8, seed=2, budget_generations=3000,
                           game=game, target=target, record_trajectory=False)
        record = run_trial(cfg)
        assert record.hit and record.T_interactions == record.generations_run * 20

    def test_config_validation(self):
        game = BilinearParams(n=10, alpha=0.4, beta=0.6, epsilon=0.1)
        with pytest.raises(ValueError):
            PdcoeaConfig(lam=0, chi=0.5, n=10, seed=1, budget_generations=5, game=game)
        with pytest.raises(ValueError):
            PdcoeaConfig(lam=2, chi=0.0, n=10, seed=1, budget_generations=5, game=game)
        with pytest.raises(ValueError):
            PdcoeaConfig(lam=2, chi=0.5, n=12, seed=1, budget_generations=5, game=game)


class TestSingletonTarget:
    def test_exact_membership(self):
        target = singleton_target(count_vector(2, 6), count_vector(4, 6))
        hit = paired_from_counts([2, 5], [4, 0], 6)
        assert target(hit)
        # same one-counts, different genomes: no hit
        shifted_pred = Population.from_bitvectors(
            [BitVector.from_bits([0, 0, 0, 0, 1, 1]), count_vector(5, 6)])
        miss = PairedPopulations(shifted_pred, hit.prey)
        assert not target(miss)

    def test_length_mismatch(self):
        target = singleton_target(count_vector(1, 5), count_vector(1, 5))
        with pytest.raises(ValueError):
            target(paired_from_counts([1], [1], 6))
