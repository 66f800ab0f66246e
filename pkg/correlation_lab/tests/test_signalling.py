import math

from django.test import SimpleTestCase

from correlation_lab.correlation_models import CorrelationModel
from correlation_lab.exceptions import DomainError
from correlation_lab.samplers import SeededGenerator
from correlation_lab.signalling import (
    IDENTICAL, NEGATED, NEITHER, marginal_scan, max_marginal_spread, no_signalling_holds,
    sequence_relation,
)

MODELS = (
    CorrelationModel.classical(),
    CorrelationModel.quantum(),
    CorrelationModel.spin(1),
    CorrelationModel.strong(),
    CorrelationModel.noisy(CorrelationModel.classical(), 0.3),
    CorrelationModel.noisy(CorrelationModel.strong(), 0.3),
    CorrelationModel.quasi_quantum(),
)


class MarginalScanTests(SimpleTestCase):

    def test_strong_model_hides_its_setting_dependence(self):
        reports = marginal_scan(CorrelationModel.strong(), 0.0, [math.pi / 4, 3 * math.pi / 4],
                                10 ** 4, SeededGenerator(17))
        for report in reports:
            self.assertLess(abs(report.empirical_mean_a), 4 * report.standard_error)
            self.assertEqual(report.standard_error, 0.01)
        self.assertEqual([r.correlation for r in reports], [-1.0, 1.0])
        self.assertTrue(no_signalling_holds(reports))

    def test_classical_model_marginals(self):
        reports = marginal_scan(CorrelationModel.classical(), [1.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]],
                                10 ** 4, SeededGenerator(18))
        for report in reports:
            self.assertLess(abs(report.empirical_mean_a), 4 * report.standard_error)
            self.assertLess(abs(report.empirical_mean_b), 4 * report.standard_error)

    def test_rerun_is_bit_identical(self):
        model = CorrelationModel.quantum()
        grid = [0.3, 1.1, 2.9]
        first = marginal_scan(model, 0.0, grid, 10 ** 4, SeededGenerator(19))
        second = marginal_scan(model, 0.0, grid, 10 ** 4, SeededGenerator(19))
        self.assertEqual(first, second)

    def test_workers_do_not_change_the_result(self):
        model = CorrelationModel.strong()
        grid = [k * math.pi / 8 for k in range(9)]
        serial = marginal_scan(model, 0.0, grid, 5000, SeededGenerator(20), workers=1)
        threaded = marginal_scan(model, 0.0, grid, 5000, SeededGenerator(20), workers=4)
        self.assertEqual(serial, threaded)

    def test_every_model_passes_at_four_sigma(self):
        n = 10 ** 6
        grid = [k * math.pi / 4 for k in range(5)]
        for index, model in enumerate(MODELS):
            reports = marginal_scan(model, 0.0, grid, n, SeededGenerator(21, index))
            self.assertTrue(no_signalling_holds(reports, sigma=4.0), msg=model.label)
            self.assertLess(max_marginal_spread(reports), 4 * math.sqrt(2.0) / math.sqrt(n))

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            marginal_scan(CorrelationModel.strong(), 0.0, [], 100, SeededGenerator(1))
        with self.assertRaises(DomainError):
            marginal_scan(CorrelationModel.strong(), 0.0, [0.5], 0, SeededGenerator(1))
        with self.assertRaises(DomainError):
            marginal_scan(CorrelationModel.strong(), [2.0, 0.0], [0.5], 10, SeededGenerator(1))


class SequenceRelationTests(SimpleTestCase):

    def test_strong_model(self):
        strong = CorrelationModel.strong()
        self.assertEqual(sequence_relation(strong, 3 * math.pi / 4, 10 ** 4, SeededGenerator(30)), IDENTICAL)
        self.assertEqual(sequence_relation(strong, math.pi / 4, 10 ** 4, SeededGenerator(31)), NEGATED)
        self.assertEqual(sequence_relation(strong, math.pi / 2, 10 ** 4, SeededGenerator(32)), NEITHER)

    def test_other_models(self):
        quantum = CorrelationModel.quantum()
        self.assertEqual(sequence_relation(quantum, math.pi, 1000, SeededGenerator(33)), IDENTICAL)
        self.assertEqual(sequence_relation(quantum, 0.0, 1000, SeededGenerator(34)), NEGATED)
        self.assertEqual(sequence_relation(quantum, math.pi / 4, 1000, SeededGenerator(35)), NEITHER)
        # a single trial may agree by chance; the relation still is not deterministic
        classical = CorrelationModel.classical()
        self.assertEqual(sequence_relation(classical, math.pi / 3, 1, SeededGenerator(36)), NEITHER)

    def test_angle_domain(self):
        with self.assertRaises(DomainError):
            sequence_relation(CorrelationModel.strong(), 3.5, 10, SeededGenerator(1))
