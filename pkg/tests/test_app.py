# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import unittest

import numpy as np
from fastapi.testclient import TestClient
from mock import patch

from ripe_insar.app import create_app
from ripe_insar.app.dependencies import estimation_service

PRESET = {"components": [
    {"amplitude": 0.18, "decay_time": 11, "phase_rate": 0.03},
    {"amplitude": 0.25, "decay_time": 50, "phase_rate": 0.002},
    {"amplitude": 0.13, "decay_time": "Infinity", "phase_rate": 0.0}],
    "nugget": 0.44}


def _stack_payload(epochs: int = 8, looks: int = 12) -> dict:
    rng = np.random.default_rng(1)
    samples = rng.standard_normal((epochs, looks)) + \
        1j * rng.standard_normal((epochs, looks))
    return {"real": samples.real.tolist(), "imag": samples.imag.tolist(),
            "times": [6.0 * i for i in range(epochs)]}


class TestApp(unittest.TestCase):
    client = TestClient(create_app({"fastapi_title": "RIPE test"}))

    def test_openapi(self):
        schema = self.client.get("/openapi.json").json()
        self.assertEqual(schema["info"]["title"], "RIPE test")
        for path in ("/model/coherence", "/model/covariance",
                     "/estimate/ripe", "/estimate/emi",
                     "/evaluate/monte_carlo"):
            self.assertIn(path, schema["paths"])

    def test_model_coherence(self):
        response = self.client.post("/model/coherence",
                                    json={"model": PRESET,
                                          "dt": [0, 50, -50]})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(body["real"][0], 1.0)
        self.assertEqual(body["imag"][0], 0.0)
        self.assertAlmostEqual(body["real"][1], 0.2217, delta=1e-3)
        self.assertAlmostEqual(body["imag"][1], -body["imag"][2])

        invalid = dict(PRESET, nugget=0.3)
        response = self.client.post("/model/coherence",
                                    json={"model": invalid, "dt": [0]})
        self.assertEqual(response.status_code, 422)

    def test_model_covariance(self):
        response = self.client.post("/model/covariance",
                                    json={"model": PRESET,
                                          "times": [0, 11]})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(body["real"][0][0], 1.0)
        self.assertEqual(body["real"][0][1], body["real"][1][0])
        self.assertEqual(body["imag"][0][1], -body["imag"][1][0])

        response = self.client.post("/model/covariance",
                                    json={"model": PRESET,
                                          "times": [11, 0]})
        self.assertEqual(response.status_code, 422)

    def test_estimate_ripe(self):
        response = self.client.post("/estimate/ripe",
                                    json={"stack": _stack_payload(),
                                          "config": {"beta": 0.5}})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(len(body["phases"]), 8)
        self.assertEqual(body["phases"][0], 0.0)
        self.assertEqual(body["times"][1], 6.0)
        self.assertTrue(all(0 <= c <= 1 for c in body["long_coherence"]))

        response = self.client.post("/estimate/ripe",
                                    json={"stack": _stack_payload(1)})
        self.assertEqual(response.status_code, 422)

        ragged = _stack_payload()
        ragged["real"][0] = ragged["real"][0][:-1]
        response = self.client.post("/estimate/ripe", json={"stack": ragged})
        self.assertEqual(response.status_code, 422)

    def test_estimate_emi(self):
        response = self.client.post("/estimate/emi",
                                    json={"stack": _stack_payload(),
                                          "config": {"coherence_floor": 0.1}})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(len(body["phases"]), 8)
        self.assertEqual(body["phases"][0], 0.0)
        self.assertEqual(body["long_coherence"], [None] * 8)

    def test_estimate_limits(self):
        with patch.object(estimation_service, "max_looks", 4):
            response = self.client.post("/estimate/ripe",
                                        json={"stack": _stack_payload()})
        self.assertEqual(response.status_code, 413)

    def test_monte_carlo(self):
        request = {"simulation": {"model": PRESET, "epochs": 10,
                                  "looks": 20, "trials": 3,
                                  "base_seed": 4},
                   "methods": ["ripe-calibrated", "emi"]}
        response = self.client.post("/evaluate/monte_carlo", json=request)
        self.assertEqual(response.status_code, 200)
        curves = response.json()["curves"]
        self.assertEqual([c["method"] for c in curves],
                         ["ripe-calibrated", "emi"])
        self.assertEqual(len(curves[0]["bias_mm"]), 10)
        self.assertEqual(curves[0]["std_rad"][0], 0.0)
        self.assertEqual(curves[1]["trials"], 3)

        with patch.object(estimation_service, "max_trials", 2):
            response = self.client.post("/evaluate/monte_carlo",
                                        json=request)
        self.assertEqual(response.status_code, 413)

        request["simulation"]["trials"] = 1
        response = self.client.post("/evaluate/monte_carlo", json=request)
        self.assertEqual(response.status_code, 422)

        request["methods"] = ["caesar"]
        response = self.client.post("/evaluate/monte_carlo", json=request)
        self.assertEqual(response.status_code, 422)


class TestEstimationService(unittest.TestCase):
    def test_config_defaults(self):
        from ripe_insar.estimation_service import EstimationService
        service = EstimationService({})
        self.assertEqual(service.max_trials, 200)
        self.assertEqual(service.max_looks, 1000)
        service = EstimationService({"max_trials": 5, "workers": 2})
        self.assertEqual(service.max_trials, 5)
        self.assertEqual(service.workers, 2)

    def test_ripe_errors_map_to_422(self):
        from ripe_insar.estimation_service import APIError, \
            EstimationService
        from ripe_insar.schema.api_requests import RipeEstimateRequest
        service = EstimationService({})
        request = RipeEstimateRequest.model_validate(
            {"stack": {"real": [[0.0, 0.0], [1.0, 1.0]],
                       "imag": [[0.0, 0.0], [0.0, 0.0]],
                       "times": [0, 6]}})
        with self.assertRaises(APIError) as e:
            service.estimate_ripe(request)
        self.assertEqual(e.exception.status_code, 422)
        self.assertIn("all zero", e.exception.detail)


if __name__ == '__main__':
    unittest.main()
