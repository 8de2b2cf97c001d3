import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CORPUS  # noqa: E402

from wavecls.classify import ClassifyConfig, classify  # noqa: E402
from wavecls.system import WaveSystem  # noqa: E402

_REPORTS = {}


def get_system(name):
    a, b, _ = CORPUS[name]
    return WaveSystem.from_strings(a, b)


def get_report(name, seed=0):
    key = (name, seed)
    if key not in _REPORTS:
        _REPORTS[key] = classify(get_system(name), ClassifyConfig(seed=seed))
    return _REPORTS[key]


@pytest.fixture(scope="session")
def reports():
    return {name: get_report(name) for name in CORPUS}
