import json
import unittest
from fractions import Fraction

import pytest

from fundgroup.domain.errors import InvariantViolation
from fundgroup.features.algebras.families import matrix_sum
from fundgroup.features.algebras.logic import build
from fundgroup.features.bratteli.logic import trace_weights
from fundgroup.features.bratteli.models import BratteliDiagram
from fundgroup.features.envelope.processor import k_envelope
from fundgroup.features.lattices.models import MultiplicativeGroupDesc, TransporterResult
from fundgroup.features.monomial.logic import antidiagonal, symmetric_group
from fundgroup.features.scalars.parsing import parse_scalar
from fundgroup.services.export.payloads import (
    enclosure_payload,
    envelope_payload,
    fraction_text,
    group_payload,
    matrix_payload,
    multiplicative_payload,
    transporter_payload,
)
from fundgroup.services.export.templates import SCHEMA_VERSION, JsonRenderer, TextRenderer


class TestPayloads(unittest.TestCase):
    def test_fraction_text(self):
        self.assertEqual(fraction_text(Fraction(-3, 5)), "-3/5")
        self.assertEqual(fraction_text(2), "2/1")

    def test_matrix_payload(self):
        payload = matrix_payload(antidiagonal([Fraction(3, 2), Fraction(2, 3)]))
        self.assertEqual(payload, {"perm": "(1 2)", "diag": ["3/2", "2/3"], "text": "perm=(1 2) diag=3/2,2/3"})

    def test_group_payload_lists_cosets(self):
        payload = group_payload(symmetric_group(2))
        self.assertEqual(payload["n"], 2)
        self.assertEqual(len(payload["cosets"]), 2)

    def test_transporter_payload_of_empty_result(self):
        payload = transporter_payload(TransporterResult.empty("ranks differ (1 vs 2)"))
        self.assertEqual(payload["status"], "proven_empty")
        self.assertIsNone(payload["representative"])

    def test_envelope_payload_is_json_ready(self):
        model = matrix_sum([2, 3])
        built = build(model)
        payload = envelope_payload(model, built, k_envelope(built.module, realized=built.realized))
        self.assertEqual(payload["status"], "exact")
        self.assertTrue(payload["closed_form_match"])
        self.assertEqual(payload["coupling_classes"], [[1], [2]])
        json.dumps(payload)


def test_text_renderer_stabilizer():
    text = TextRenderer().render("stabilizer", {"stabilizer": multiplicative_payload(MultiplicativeGroupDesc((parse_scalar("2+sqrt(5)"),)))})
    assert text == "stabilizer     <2+sqrt(5)>\n"


def test_text_renderer_marks_incomplete_groups():
    payload = {"stabilizer": multiplicative_payload(MultiplicativeGroupDesc((), complete=False))}
    assert "(possibly incomplete)" in TextRenderer().render("stabilizer", payload)


def test_text_renderer_rejects_unknown_kind():
    with pytest.raises(InvariantViolation):
        TextRenderer().render("nope", {})


def test_text_renderer_enclosure():
    diagram = BratteliDiagram(initial=(1, 1), steps=(((2, 1), (1, 2)),), name="one step")
    payload = enclosure_payload(diagram, trace_weights(diagram, 0, 1), None)
    text = TextRenderer().render("bratteli_traces", payload)
    assert text.startswith("diagram        one step\n")
    assert "[1/3, 2/3]" in text


def test_json_renderer_document():
    out = JsonRenderer("abc").render("decompose", {"text": "perm=e diag=1"})
    document = json.loads(out)
    assert document == {"schema_version": SCHEMA_VERSION, "kind": "decompose", "config_hash": "abc", "result": {"text": "perm=e diag=1"}}
    assert out.endswith("}\n")
