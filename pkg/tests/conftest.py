import json

import pytest

from core.synth import standard_menus
from factories import THREE, family, tabulated


@pytest.fixture
def boltzmann_exact():
    return family("boltzmann", THREE)


@pytest.fixture
def squared_exact():
    return family("softmax", THREE, noise=tabulated(lambda t: t * t))


@pytest.fixture
def uniform_exact():
    return family("uniform", states=["a", "b", "c"])


@pytest.fixture
def menus_file(tmp_path):
    path = tmp_path / "menus.json"
    menus = [{"id": m.id, "members": m.sorted_members()} for m in standard_menus(["a", "b", "c"])]
    path.write_text(json.dumps(menus))
    return path


@pytest.fixture
def params_file(tmp_path):
    def write(**params):
        path = tmp_path / "params.json"
        path.write_text(json.dumps(params))
        return path
    return write
