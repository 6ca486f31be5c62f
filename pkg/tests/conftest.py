import pathlib

import pytest

from dynarace import infer_domains, load_model

ROOT = pathlib.Path(__file__).resolve().parents[1]
SW_MODEL_PATH = ROOT / "models" / "sw_controller.dnk"


@pytest.fixture(scope="session")
def sw_model():
    return load_model(SW_MODEL_PATH)


@pytest.fixture(scope="session")
def sw_dom(sw_model):
    return infer_domains(sw_model)
