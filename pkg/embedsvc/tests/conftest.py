"""Fixtures: an in-process client for the service and the shared protocol checks.

The wire-schema checks live with the pipeline's test suite (one protocol, one
set of checks); they are loaded here by path so both packages stay honest
against the same contract.
"""

import pathlib
import sys

import pytest
from fastapi.testclient import TestClient

from embedsvc.app import create_app
from embedsvc.config import ServiceConfig

PROTOCOL_CHECKS_DIR = pathlib.Path(__file__).resolve().parents[2] / "tests"
if str(PROTOCOL_CHECKS_DIR) not in sys.path:
    sys.path.insert(0, str(PROTOCOL_CHECKS_DIR))


@pytest.fixture(scope="session")
def hash_config():
    return ServiceConfig(sentence_model_id="hash", token_model_id="hash", max_batch=16)


@pytest.fixture(scope="session")
def client(hash_config):
    return TestClient(create_app(hash_config))


@pytest.fixture(scope="session")
def post(client):
    def _post(path, payload):
        response = client.post(path, json=payload)
        try:
            body = response.json()
        except ValueError:
            body = None
        return response.status_code, body

    return _post
