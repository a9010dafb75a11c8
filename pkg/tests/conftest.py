import json

import pytest

from schemalens import corpus as corpus_mod
from schemalens.evaluation import load_criteria, load_weight_cases
from schemalens.graph import build_graph
from schemalens.loader import resolve

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def manifest():
    return corpus_mod.load_manifest()


@pytest.fixture(scope="session")
def graphs(manifest):
    """Comparison graphs keyed by display title (LEI/ICAR/ISC)."""
    return manifest.graphs()


@pytest.fixture(scope="session")
def lei_corpus(manifest):
    return manifest.schema_set("lei").corpus()


@pytest.fixture(scope="session")
def lei_envelope(lei_corpus):
    return resolve(lei_corpus, "eventCore.json")


@pytest.fixture(scope="session")
def envelope_graph(lei_envelope):
    """Graph over the full validation envelope (eventCore), as opposed to the
    compact comparison fixture."""
    return build_graph({"weight": lei_envelope})


@pytest.fixture(scope="session")
def criteria(manifest):
    specs, _ = load_criteria(corpus_mod.default_criteria_path())
    return specs


@pytest.fixture(scope="session")
def weight_cases(manifest):
    return load_weight_cases(corpus_mod.default_weights_path())


@pytest.fixture(scope="session")
def scenario_documents(manifest):
    """(path, parsed instance) for every bundled scenario file, in order."""
    return [
        (path, json.loads(path.read_text(encoding="utf-8")))
        for path in manifest.all_scenario_files()
    ]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
