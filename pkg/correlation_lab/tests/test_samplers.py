import io
import math

import numpy as np
from django.test import SimpleTestCase

from correlation_lab.correlation_models import CorrelationModel, polar_unit_vector
from correlation_lab.exceptions import DomainError
from correlation_lab.samplers import (
    CHSH_ANGLES, JointDistribution, OutcomePair, SeededGenerator, TrialRecord, TrialSeries,
    box_from_expectation, chsh_setting_pairs, lhv_outcome, read_trials_csv, read_trials_json,
    rederive_record, run_series, sample_box, sample_box_batch, sample_lhv, sample_lhv_batch,
    write_trials_csv, write_trials_json,
)


class SeededGeneratorTests(SimpleTestCase):

    def test_equal_identifiers_reproduce_the_stream(self):
        first = SeededGenerator(42, 3).rng.random(1000)
        second = SeededGenerator(42, 3).rng.random(1000)
        self.assertTrue(np.array_equal(first, second))

    def test_streams_and_children_are_distinct(self):
        base = SeededGenerator(42, 0).rng.random(10)
        self.assertFalse(np.array_equal(base, SeededGenerator(42, 1).rng.random(10)))
        self.assertFalse(np.array_equal(base, SeededGenerator(42, 0).child(0).rng.random(10)))
        self.assertTrue(np.array_equal(SeededGenerator(42, 0).child(5).rng.random(10),
                                       SeededGenerator(42, 0).child(5).rng.random(10)))

    def test_rejects_invalid_identifiers(self):
        with self.assertRaises(DomainError):
            SeededGenerator(-1)
        with self.assertRaises(DomainError):
            SeededGenerator(2 ** 64)
        with self.assertRaises(DomainError):
            SeededGenerator(1, -2)


class HiddenVariableSamplerTests(SimpleTestCase):

    def test_single_trial_is_dichotomic(self):
        pair = sample_lhv(polar_unit_vector(0.0), polar_unit_vector(1.0), SeededGenerator(1))
        self.assertIsInstance(pair, OutcomePair)
        self.assertIn(pair.a, (-1, 1))
        self.assertIn(pair.b, (-1, 1))

    def test_zero_projection_resolves_to_plus_one(self):
        self.assertEqual(int(lhv_outcome([0.0, 1.0], 0.0, 'A')), 1)
        self.assertEqual(int(lhv_outcome([0.0, 1.0], 0.0, 'B')), 1)

    def test_rejects_off_plane_directions(self):
        with self.assertRaises(DomainError):
            lhv_outcome([0.0, 0.6, 0.8], 0.3, 'A')
        with self.assertRaises(DomainError):
            lhv_outcome([1.0, 0.0], 0.3, 'C')

    def test_empirical_expectation_matches_closed_form(self):
        n = 10 ** 6
        gen = SeededGenerator(2024)
        for k in range(19):
            theta = math.pi * k / 18
            a, b, _ = sample_lhv_batch(polar_unit_vector(0.0), polar_unit_vector(theta), n, gen.child(k))
            empirical = float(np.mean(a * b))
            self.assertLess(abs(empirical - (2 * theta / math.pi - 1)), 4 / math.sqrt(n))


class BoxSamplerTests(SimpleTestCase):

    def test_box_from_expectation(self):
        self.assertEqual(box_from_expectation(-1.0).probabilities, (0.0, 0.5, 0.5, 0.0))
        self.assertEqual(box_from_expectation(0.5).expectation, 0.5)
        with self.assertRaises(DomainError):
            box_from_expectation(1.5)

    def test_distribution_invariants(self):
        with self.assertRaises(DomainError):
            JointDistribution(0.7, 0.0, 0.0, 0.3)
        with self.assertRaises(DomainError):
            JointDistribution(0.5, 0.5, 0.5, -0.5)
        with self.assertRaises(DomainError):
            sample_box((0.25, 0.25, 0.25, 0.25), SeededGenerator(1))

    def test_perfect_anticorrelation(self):
        a, b = sample_box_batch(box_from_expectation(-1.0), 5000, SeededGenerator(9))
        self.assertTrue(np.array_equal(a, -b))
        self.assertLess(abs(float(a.mean())), 4 / math.sqrt(5000))

    def test_single_draw_is_reproducible(self):
        dist = box_from_expectation(0.2)
        self.assertEqual(sample_box(dist, SeededGenerator(5)), sample_box(dist, SeededGenerator(5)))


class RunSeriesTests(SimpleTestCase):

    def test_local_series_shares_one_outcome_per_direction(self):
        series = run_series(CorrelationModel.classical(), chsh_setting_pairs(), 2000, SeededGenerator(3))
        self.assertIsInstance(series, TrialSeries)
        self.assertEqual(len(series), 2000)
        a, b = series.pair_outcomes('a_p:b')
        self.assertTrue(np.array_equal(a, series.direction_outcomes('A', 'a_p')))
        self.assertTrue(np.array_equal(b, series.direction_outcomes('B', 'b')))
        self.assertIsNotNone(series[0].hidden_variable)
        self.assertEqual(set(series[-1].alice), {'a_p', 'a'})

    def test_series_is_read_only(self):
        series = run_series(CorrelationModel.classical(), chsh_setting_pairs(), 10, SeededGenerator(3))
        a, _ = series.pair_outcomes('a:b')
        with self.assertRaises(ValueError):
            a[0] = 7

    def test_equal_seeds_reproduce_the_series(self):
        for model in (CorrelationModel.classical(), CorrelationModel.quantum()):
            first = run_series(model, chsh_setting_pairs(), 500, SeededGenerator(11, 2))
            second = run_series(model, chsh_setting_pairs(), 500, SeededGenerator(11, 2))
            self.assertEqual(list(first), list(second))

    def test_strong_model_is_deterministic_at_chsh_angles(self):
        series = run_series(CorrelationModel.strong(), chsh_setting_pairs(), 3000, SeededGenerator(4))
        for label in ('a_p:b', 'a:b', 'a:b_p'):
            a, b = series.pair_outcomes(label)
            self.assertTrue(np.array_equal(a, -b))
        a, b = series.pair_outcomes('a_p:b_p')
        self.assertTrue(np.array_equal(a, b))
        self.assertIsNone(series[0].hidden_variable)

    def test_noisy_local_model_damps_the_base(self):
        n = 200000
        model = CorrelationModel.noisy(CorrelationModel.classical(), 0.4)
        series = run_series(model, chsh_setting_pairs(), n, SeededGenerator(6))
        a, b = series.pair_outcomes('a_p:b_p')
        expected = 0.6 * (2 * (3 * math.pi / 4) / math.pi - 1)
        self.assertLess(abs(float(np.mean(a * b)) - expected), 4 / math.sqrt(n))

    def test_rejects_bad_arguments(self):
        with self.assertRaises(DomainError):
            run_series(CorrelationModel.classical(), [], 10, SeededGenerator(1))
        with self.assertRaises(DomainError):
            run_series(CorrelationModel.classical(), chsh_setting_pairs(), 0, SeededGenerator(1))
        with self.assertRaises(DomainError):
            chsh_setting_pairs({'a': 0.0, 'b': 1.0})

    def test_records_rederive_from_their_hidden_variable(self):
        pairs = chsh_setting_pairs(CHSH_ANGLES)
        series = run_series(CorrelationModel.classical(), pairs, 50, SeededGenerator(8))
        for record in series:
            self.assertEqual(rederive_record(record, pairs), record)
        with self.assertRaises(DomainError):
            rederive_record(TrialRecord(0, {}), pairs)


class SerializationTests(SimpleTestCase):

    def setUp(self):
        self.series = run_series(CorrelationModel.classical(), chsh_setting_pairs(), 25, SeededGenerator(12))

    def test_json_round_trip(self):
        buffer = io.StringIO()
        write_trials_json(self.series, buffer)
        buffer.seek(0)
        self.assertEqual(read_trials_json(buffer), list(self.series))

    def test_csv_round_trip_keeps_pair_outcomes(self):
        buffer = io.StringIO()
        write_trials_csv(self.series, buffer)
        self.assertTrue(buffer.getvalue().startswith('trial_index,setting_label,outcome_a,outcome_b\n'))
        buffer.seek(0)
        restored = read_trials_csv(buffer)
        self.assertEqual([r.pairs for r in restored], [r.pairs for r in self.series])

    def test_csv_with_foreign_columns(self):
        with self.assertRaises(DomainError):
            read_trials_csv(io.StringIO('index,a,b\n0,1,1\n'))
