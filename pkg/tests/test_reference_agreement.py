"""Verdict agreement between the shipped validator and an independent
reference validator (jsonschema, draft 2019-09, file-URI resolution) across
the bundled instances, systematic mutants, and a large randomised stream."""

import copy
import random

import pytest

from schemalens.validator import validate

from harness import envelope_mutants, random_variant, reference_validator

N_RANDOM_VARIANTS = 1000


@pytest.fixture(scope="module")
def oracle(manifest):
    schema_set = manifest.schema_set("lei")
    return reference_validator(schema_set.corpus_dir, "eventCore.json")


def _agree(instance, lei_envelope, oracle):
    native = validate(instance, lei_envelope).valid
    reference = oracle.is_valid(instance)
    return native, reference


def test_oracle_accepts_every_scenario_instance(scenario_documents, oracle):
    for path, doc in scenario_documents:
        errors = list(oracle.iter_errors(doc))
        assert not errors, (path.name, [e.message for e in errors[:3]])


def test_agreement_on_scenario_instances(scenario_documents, lei_envelope, oracle):
    for path, doc in scenario_documents:
        native, reference = _agree(doc, lei_envelope, oracle)
        assert native is True and reference is True, path.name


def test_agreement_on_systematic_mutants(scenario_documents, lei_envelope, oracle):
    for path, doc in scenario_documents:
        for label, mutant in envelope_mutants(doc):
            native, reference = _agree(mutant, lei_envelope, oracle)
            assert native is False, (path.name, label)
            assert reference is False, (path.name, label)


def test_agreement_on_random_variants(scenario_documents, lei_envelope, oracle):
    rng = random.Random(18250117)
    bases = [doc for _, doc in scenario_documents]
    bodies = [copy.deepcopy(doc["message"]["event"]) for doc in bases]

    disagreements = []
    valid_seen = invalid_seen = 0
    for i in range(N_RANDOM_VARIANTS):
        base = rng.choice(bases)
        variant = random_variant(rng, base, bodies)
        native, reference = _agree(variant, lei_envelope, oracle)
        if native:
            valid_seen += 1
        else:
            invalid_seen += 1
        if native is not reference:
            disagreements.append((i, native, reference, variant))

    assert not disagreements, disagreements[:3]
    # the stream must genuinely exercise both verdicts
    assert valid_seen >= 50
    assert invalid_seen >= 200
