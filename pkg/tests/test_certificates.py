import copy

import pytest

from certificates import (
    JobResult,
    ReportGenerator,
    body_digest,
    build_document,
    decode_padic,
    encode_padic,
    load_document,
    require_verified,
    validate_document,
    verify_document,
    write_document,
)
from errors import CertificateFormatError, VerificationError
from padic import local_ring
from sdnb_finite import construct_selfdual
from sdnb_local import tame_generator, wild_generator


@pytest.fixture(scope="module")
def ff_document():
    return build_document(construct_selfdual(3, 1, 3))


@pytest.fixture
def tame_document(base7):
    return build_document(tame_generator(base7, 3))


def rehash(document):
    document["body_sha256"] = body_digest(document["body"])
    return document


def test_ff_document_verifies(ff_document):
    validate_document(ff_document)
    outcome = verify_document(ff_document)
    assert outcome.passed
    assert outcome.hash_ok
    assert outcome.checks == {"in_extension": True, "gram": True, "normal": True}
    assert outcome.route == "ff-p-power"


def test_body_hash_is_deterministic(ff_document):
    again = build_document(construct_selfdual(3, 1, 3))
    assert again["body_sha256"] == ff_document["body_sha256"]
    assert again["body"] == ff_document["body"]


def test_tampering_without_rehash_breaks_hash(ff_document):
    doc = copy.deepcopy(ff_document)
    doc["body"]["generator"][0] = (doc["body"]["generator"][0] + 1) % 3
    outcome = verify_document(doc)
    assert not outcome.hash_ok
    assert not outcome.passed


def test_tampering_with_rehash_breaks_gram(ff_document):
    doc = copy.deepcopy(ff_document)
    gen = doc["body"]["generator"]
    gen[0] = (gen[0] + 1) % 3
    outcome = verify_document(rehash(doc))
    assert outcome.hash_ok
    assert not outcome.checks["gram"]
    with pytest.raises(VerificationError):
        require_verified(doc)


def test_missing_route_is_a_format_error(ff_document):
    doc = copy.deepcopy(ff_document)
    del doc["body"]["route"]
    with pytest.raises(CertificateFormatError):
        verify_document(rehash(doc))


def test_wrong_schema_version(ff_document):
    doc = copy.deepcopy(ff_document)
    doc["schema_version"] = "0.9"
    with pytest.raises(CertificateFormatError):
        validate_document(doc)


def test_local_document_verifies(tame_document):
    body = tame_document["body"]
    assert body["parameters"]["kind"] == "tame"
    assert body["extension"]["eisenstein"] == [7, 0, 0, 1]
    assert body["verification"]["valuation"] == -1
    outcome = require_verified(tame_document)
    assert outcome.checks["moduli"]
    assert outcome.checks["generator.gram"]
    assert outcome.checks["generator.valuation"]


def test_local_tamper_is_detected(tame_document):
    doc = copy.deepcopy(tame_document)
    digits = doc["body"]["generator"]["digits"]
    digits[0][0][0] = (digits[0][0][0] + 1) % 7
    outcome = verify_document(rehash(doc))
    assert not outcome.passed
    assert not outcome.checks["generator.gram"]


def test_local_moduli_mismatch(tame_document):
    doc = copy.deepcopy(tame_document)
    doc["body"]["extension"]["eisenstein"] = [14, 0, 0, 1]
    outcome = verify_document(rehash(doc))
    assert outcome.checks["moduli"] is False
    assert not outcome.passed


def test_wild_document_carries_both_variants(base3):
    doc = build_document(wild_generator(base3))
    assert set(doc["body"]["alternates"]) == {"wild-traced"}
    outcome = verify_document(doc)
    assert outcome.passed
    assert outcome.checks["wild-traced.gram"]


def test_padic_encoding():
    ring = local_ring(7, 1, (7, 0, 0, 1), 12)
    x = ring.gen_t() ** 2 / 7 + 50
    data = encode_padic(x)
    assert data["shift"] == -1
    assert all(0 <= d < 7 for row in data["digits"] for ds in row for d in ds)
    assert decode_padic(data, ring) == x


def test_padic_decoding_checks_digits():
    ring = local_ring(7, 1, (0, 1), 12)
    data = encode_padic(ring.from_int(3))
    data["digits"][0][0][0] = 9
    with pytest.raises(CertificateFormatError):
        decode_padic(data, ring)
    data["digits"] = [[[1]], [[1]]]
    with pytest.raises(CertificateFormatError):
        decode_padic(data, ring)


def test_write_and_load(tmp_path, ff_document):
    path = write_document(ff_document, tmp_path / "out" / "cert.json")
    assert load_document(path) == ff_document
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(CertificateFormatError):
        load_document(tmp_path / "bad.json")


def test_html_summary(ff_document):
    html = ReportGenerator().render_html(ff_document)
    assert "ff-p-power" in html
    assert ff_document["body_sha256"] in html
    assert "identity" in html


def test_junit_report():
    results = [
        JobResult("ff-p3-n3", "ff", "passed", elapsed=0.1),
        JobResult("ff-p5-n4", "ff", "error", "no self-dual normal basis"),
        JobResult("tame-p7-d3", "tame", "failed", "Gram row differs"),
    ]
    xml = ReportGenerator().junit_xml(results)
    assert 'tests="3"' in xml
    assert 'failures="1"' in xml
    assert 'errors="1"' in xml
    assert "ff-p5-n4" in xml
