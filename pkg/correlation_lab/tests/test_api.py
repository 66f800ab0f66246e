import math

from django.conf import settings
from django.test import SimpleTestCase, override_settings


class ReportApiTests(SimpleTestCase):

    def test_chsh_endpoint(self):
        response = self.client.get('/api/chsh/', {'model': 'strong', 'trials': 1000, 'seed': 4})
        self.assertEqual(response.status_code, 200)
        self.assertIn('X-Elapsed-Ms', response)
        data = response.json()
        self.assertEqual(data['command'], 'chsh')
        self.assertEqual(data['summary']['abs_s_analytic'], 4.0)
        self.assertEqual(data['summary']['s_estimate'], -4.0)

    def test_curves_endpoint(self):
        data = self.client.get('/api/curves/', {'points': 5}).json()
        rows = data['tables']['curves']['rows']
        self.assertEqual(len(rows), 5)
        self.assertEqual(rows[2][0], math.pi / 2)

    def test_spin_endpoint(self):
        data = self.client.get('/api/spin/', {'j': '5/2', 'points': 7}).json()
        self.assertLess(data['summary']['max_deviation'], 1e-10)
        self.assertEqual(data['summary']['j'], '5/2')

    def test_feasibility_endpoint(self):
        data = self.client.get('/api/feasibility/', {'correlations': '0,0,0,0'}).json()
        self.assertTrue(data['summary']['feasible'])
        self.assertEqual(len(data['tables']['facets']['rows']), 8)

    def test_fourlists_endpoint(self):
        data = self.client.get('/api/fourlists/', {'model': 'strong', 'trials': 4}).json()
        self.assertEqual(data['summary']['path'], 'contradiction')

    def test_signalling_endpoint(self):
        response = self.client.get('/api/signalling/', {'model': 'quantum', 'trials': 5000, 'seed': 9})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()['tables']['marginals']['rows']), 5)

    def test_same_seed_same_report(self):
        params = {'model': 'classical', 'trials': 2000, 'seed': 10}
        first = self.client.get('/api/chsh/', params).json()
        second = self.client.get('/api/chsh/', params).json()
        self.assertEqual(first, second)


class ApiErrorTests(SimpleTestCase):

    def test_validation_error(self):
        response = self.client.get('/api/chsh/', {'trials': 0})
        self.assertEqual(response.status_code, 400)
        self.assertIn('trials', response.json()['error'])

    def test_domain_error(self):
        response = self.client.get('/api/spin/', {'j': '0.3'})
        self.assertEqual(response.status_code, 400)
        self.assertIn('0.3', response.json()['error'])

    def test_trial_cap(self):
        limit = settings.CORRELATION_LAB['API_MAX_TRIALS']
        response = self.client.get('/api/chsh/', {'trials': limit + 1})
        self.assertEqual(response.status_code, 400)

    def test_cli_only_fields(self):
        response = self.client.get('/api/curves/', {'format': 'csv'})
        self.assertEqual(response.status_code, 400)
        response = self.client.get('/api/chsh/', {'trials_out': 'trials.csv'})
        self.assertEqual(response.status_code, 400)

    def test_method_not_allowed(self):
        self.assertEqual(self.client.post('/api/curves/').status_code, 405)

    @override_settings(DEBUG=False)
    def test_unknown_endpoint(self):
        response = self.client.get('/api/unknown/')
        self.assertEqual(response.status_code, 404)
        self.assertEqual(response.json()['error'], 'No endpoint at /api/unknown/')
