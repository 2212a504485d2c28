"""Tests for structured impression parsing and validation."""

import json

import pytest

from src.errors import NotJson, SchemaViolation, VocabViolation
from src.structured import Attribute, StructuredImpression, extract_json_object, parse_structured
from src.vocab import load_vocab

from .conftest import FIXTURES_DIR


@pytest.fixture
def vocab():
    """Packaged vocabulary."""
    return load_vocab()


@pytest.fixture
def structured_output():
    """Model output with a findings list (two attributes)."""
    return (FIXTURES_DIR / "golden" / "table_structured.json").read_text(encoding="utf-8")


class TestParseStructured:
    """Test parse_structured against packaged vocabulary."""

    def test_findings_list(self, vocab, structured_output):
        """Test the two-attribute example with multi-valued positional words."""
        parsed = parse_structured(structured_output, vocab)

        assert parsed.impression.startswith("The Swan-Ganz catheter tip")
        assert parsed.attributes == (
            Attribute("atelectasis", "bilateral, base", "severe", ""),
            Attribute("pleural effusions", "bilateral", "", "small to moderate"),
        )

    def test_to_dict_uses_attributes_key(self, vocab, structured_output):
        """Test that output is normalized to the attributes key."""
        data = parse_structured(structured_output, vocab).to_dict()

        assert "findings" not in data
        assert data["attributes"][1]["size"] == "small to moderate"

    def test_reparse_serialized_impression(self, vocab, structured_output):
        """Test that parsing to_json() output gives the same impression back."""
        parsed = parse_structured(structured_output, vocab)

        assert parse_structured(parsed.to_json(), vocab) == parsed
        assert parse_structured(parsed.to_json(indent=2), vocab) == parsed

    def test_reparse_without_attributes(self, vocab):
        """Test the same for an impression with no attributes."""
        impression = StructuredImpression("Normal chest radiograph.")

        assert parse_structured(impression.to_json(), vocab) == impression

    def test_prose_around_json(self, vocab):
        """Test that prose wrapped around the object is ignored."""
        text = (
            'Here is the impression:\n{"impression": "No {acute} findings.", '
            '"attributes": [{"pathology": "no finding"}]}\nLet me know if you need more.'
        )

        parsed = parse_structured(text, vocab)

        assert parsed.impression == "No {acute} findings."
        assert parsed.attributes == (Attribute("no finding"),)

    def test_case_insensitive_terms(self, vocab):
        """Test that vocabulary checks ignore case and keep the model's text."""
        text = json.dumps({"impression": "x", "attributes": [{"pathology": "Pneumothorax"}]})

        assert parse_structured(text, vocab).attributes[0].pathology == "Pneumothorax"

    def test_missing_attribute_list(self, vocab):
        """Test that an impression without attributes is accepted."""
        parsed = parse_structured('{"impression": "Normal chest radiograph."}', vocab)

        assert parsed.attributes == ()

    def test_not_json(self, vocab):
        """Test that output without an object raises NotJson."""
        with pytest.raises(NotJson):
            parse_structured("Mild bibasilar atelectasis.", vocab)

    def test_invalid_json(self, vocab):
        """Test that a malformed object raises NotJson."""
        with pytest.raises(NotJson):
            parse_structured('{"impression": "x", attributes: []}', vocab)

    def test_unknown_pathology(self, vocab, structured_output):
        """Test that a term outside the vocabulary raises VocabViolation."""
        data = json.loads(structured_output)
        data["findings"][0]["pathology"] = "collapse"

        with pytest.raises(VocabViolation) as exc_info:
            parse_structured(json.dumps(data), vocab)

        assert exc_info.value.term == "collapse"
        assert exc_info.value.list_name == "pathology"

    def test_unknown_part_of_multi_valued_term(self, vocab, structured_output):
        """Test that each comma-separated part is checked."""
        data = json.loads(structured_output)
        data["findings"][0]["positional"] = "bilateral, sideways"

        with pytest.raises(VocabViolation) as exc_info:
            parse_structured(json.dumps(data), vocab)

        assert exc_info.value.term == "sideways"
        assert exc_info.value.list_name == "positional"

    def test_missing_pathology(self, vocab):
        """Test that every attribute needs a pathology."""
        text = json.dumps({"impression": "x", "attributes": [{"severity": "mild"}]})

        with pytest.raises(SchemaViolation) as exc_info:
            parse_structured(text, vocab)

        assert exc_info.value.field == "attributes[0].pathology"

    def test_impression_must_be_string(self, vocab):
        """Test that a non-string impression is a schema violation."""
        with pytest.raises(SchemaViolation):
            parse_structured('{"impression": ["x"], "attributes": []}', vocab)

    def test_attribute_list_must_be_list(self, vocab):
        """Test that attributes must be a list."""
        with pytest.raises(SchemaViolation):
            parse_structured('{"impression": "x", "attributes": {"pathology": "edema"}}', vocab)

    def test_attribute_values_must_be_strings(self, vocab):
        """Test that attribute values must be strings."""
        text = json.dumps({"impression": "x", "attributes": [{"pathology": "edema", "size": 3}]})

        with pytest.raises(SchemaViolation):
            parse_structured(text, vocab)


class TestExtractJsonObject:
    """Test balanced-brace extraction."""

    def test_escaped_quotes(self):
        """Test that braces inside escaped strings do not end the object."""
        text = 'prefix {"a": "say \\"}\\" now", "b": {"c": 1}} suffix'

        assert json.loads(extract_json_object(text)) == {"a": 'say "}" now', "b": {"c": 1}}

    def test_skips_unbalanced_brace(self):
        """Test that a stray opening brace before the object is skipped."""
        assert extract_json_object('{ oops {"a": 1}') == '{"a": 1}'

    def test_no_object(self):
        """Test that text without braces raises NotJson."""
        with pytest.raises(NotJson):
            extract_json_object("no braces")
