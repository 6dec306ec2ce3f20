import json
from pathlib import Path

import pytest

from hypart import load_cdfg, load_profile, load_scenarios

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ofdm_cdfg():
    return load_cdfg(DATA / "ofdm_cdfg.json")


@pytest.fixture(scope="session")
def ofdm_profile(ofdm_cdfg):
    return load_profile(DATA / "ofdm_profile.json", ofdm_cdfg)


@pytest.fixture(scope="session")
def ofdm_scenarios():
    return load_scenarios(DATA / "ofdm_scenarios.json")


@pytest.fixture(scope="session")
def jpeg_cdfg():
    return load_cdfg(DATA / "jpeg_cdfg.json")


@pytest.fixture(scope="session")
def jpeg_profile(jpeg_cdfg):
    return load_profile(DATA / "jpeg_profile.json", jpeg_cdfg)


@pytest.fixture(scope="session")
def jpeg_scenarios():
    return load_scenarios(DATA / "jpeg_scenarios.json")


@pytest.fixture()
def data_dir():
    return DATA
