import pytest

from genem.gateway import Gateway, default_transcript_dir
from genem.robots import load_manifest, load_scenario
from genem.templates import TemplateSet


@pytest.fixture(scope="session")
def mobile():
    return load_manifest("mobile_v1")


@pytest.fixture(scope="session")
def quadruped():
    return load_manifest("quadruped_v1")


@pytest.fixture(scope="session")
def empty_scenario():
    return load_scenario("empty")


@pytest.fixture(scope="session")
def templates():
    return TemplateSet.load_default()


@pytest.fixture(scope="session")
def replay_gateway():
    return Gateway.replay_dir(default_transcript_dir())
