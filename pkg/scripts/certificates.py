#!/usr/bin/env python3
"""
Certificate documents for self-dual generators
Builds the hashed JSON body, validates documents against the schema,
re-runs every check from the embedded moduli, and renders HTML and JUnit
summaries
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import jsonschema
import numpy as np
from jinja2 import Template
from junit_xml import TestCase, TestSuite, to_xml_report_string
from sympy.ntheory import digits as base_digits

from errors import CertificateFormatError, SdnbError, VerificationError
from finite_field import FqElem, FqField, is_normal
from padic import LocalBase, LocalElem, LocalRing, build_extension
from sdnb_finite import FiniteExtension, SelfDualCertificateFF, verify_gram_ff
from sdnb_local import Extension, SelfDualCertificateLocal, TracedExtension, verify_gram_local

logger = logging.getLogger("certificates")

SCHEMA_VERSION = "1.0"
SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "certificate.schema.json"

Certificate = Union[SelfDualCertificateFF, SelfDualCertificateLocal]


# ---------------------------------------------------------------------------
# Element encodings
# ---------------------------------------------------------------------------

def encode_padic(x: LocalElem) -> Dict[str, Any]:
    """Base-p digits, low to high, of every y^a t^b coefficient of p^-shift x"""
    p, n = x.ring.p, x.digits
    rows = []
    for row in x.coeffs:
        encoded = []
        for c in row:
            ds = base_digits(int(c), p)[1:][::-1] if n > 0 else []
            encoded.append([int(d) for d in ds] + [0] * (n - len(ds)))
        rows.append(encoded)
    return {"shift": x.shift, "prec": x.prec, "digits": rows}


def decode_padic(data: Dict[str, Any], ring: LocalRing) -> LocalElem:
    shift, prec = int(data["shift"]), int(data["prec"])
    rows = data["digits"]
    if len(rows) != ring.F or any(len(row) != ring.e for row in rows):
        raise CertificateFormatError(f"digit matrix does not have shape {ring.F}x{ring.e}")
    p = ring.p
    arr = np.zeros((ring.F, ring.e), dtype=object)
    for a, row in enumerate(rows):
        for b, ds in enumerate(row):
            if any(not 0 <= d < p for d in ds):
                raise CertificateFormatError(f"digit outside 0..{p - 1} at ({a}, {b})")
            arr[a, b] = sum(int(d) * p ** i for i, d in enumerate(ds))
    return LocalElem(ring, arr, shift, prec)


def _ff_coeffs(x: FqElem) -> List[int]:
    return [int(c) for c in x.coeffs]


# ---------------------------------------------------------------------------
# Bodies
# ---------------------------------------------------------------------------

def ff_body(cert: SelfDualCertificateFF) -> Dict[str, Any]:
    universe = cert.universe
    return {
        "mode": "ff",
        "parameters": {"p": cert.p, "m": cert.m, "n": cert.n},
        "field": {"p": universe.p, "modulus": list(universe.modulus), "base_degree": cert.m},
        "generator": _ff_coeffs(cert.generator),
        "verification": {
            "gram": {
                "passed": cert.gram.passed,
                "failures": list(cert.gram.failures),
                "entries": [_ff_coeffs(v) for v in cert.gram.entries],
            },
            "normal": cert.normal,
        },
        "route": cert.route,
        "parts": cert.parts,
        "conventions": list(cert.conventions),
    }


def _extension_parameters(ext: Extension) -> Dict[str, Any]:
    base = ext.base
    params: Dict[str, Any] = {"p": base.p, "f": base.f, "prec": base.prec, "guard": base.guard}
    if isinstance(ext, TracedExtension):
        params["kind"] = "traced"
        params["d_un"] = ext.parent.parameters["d_un"]
        params["d_tot"] = ext.parent.parameters["d_tot"]
        params["subgroup"] = [list(ext.parent.group.element(h)) for h in ext.subgroup]
    else:
        params["kind"] = ext.kind
        for key in ("d", "d_un", "d_tot"):
            if key in ext.parameters:
                params[key] = ext.parameters[key]
    return params


def local_body(cert: SelfDualCertificateLocal) -> Dict[str, Any]:
    ext = cert.extension
    ring = ext.ring
    gram = cert.gram
    return {
        "mode": "local",
        "parameters": _extension_parameters(ext),
        "extension": {
            "degree": ext.degree,
            "e": ext.e,
            "f_rel": ext.f_rel,
            "different": ext.different,
            "unram_degree": ring.F,
            "residue_modulus": list(ring.mu),
            "eisenstein": list(ring.h),
        },
        "generator": encode_padic(cert.generator),
        "alternates": {name: encode_padic(x) for name, x in sorted(cert.alternates.items())},
        "verification": {
            "gram": {
                "passed": gram.passed,
                "failures": list(gram.failures),
                "target": gram.target,
                "margin": gram.margin,
                "deviation": gram.deviation,
            },
            "valuation": cert.valuation,
            "expected_valuation": cert.expected_valuation,
        },
        "route": cert.route,
        "notes": cert.notes,
        "conventions": list(cert.conventions),
    }


def canonical_json(body: Dict[str, Any]) -> str:
    return json.dumps(body, sort_keys=True, separators=(",", ":"))


def body_digest(body: Dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def build_document(cert: Certificate) -> Dict[str, Any]:
    """Wrap a certificate body with its version, timestamp and SHA-256"""
    body = ff_body(cert) if isinstance(cert, SelfDualCertificateFF) else local_body(cert)
    return {
        "schema_version": SCHEMA_VERSION,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "body_sha256": body_digest(body),
        "body": body,
    }


def write_document(document: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"certificate written: {path}")
    return path


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CertificateFormatError(f"cannot read certificate {path}: {e}") from e


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

_schema_cache: Dict[str, Any] = {}


def load_schema() -> Dict[str, Any]:
    if "schema" not in _schema_cache:
        with open(SCHEMA_PATH, encoding="utf-8") as f:
            _schema_cache["schema"] = json.load(f)
    return _schema_cache["schema"]


def validate_document(document: Any) -> None:
    try:
        jsonschema.validate(document, load_schema())
    except jsonschema.ValidationError as e:
        location = "/".join(str(part) for part in e.absolute_path) or "<root>"
        raise CertificateFormatError(f"schema violation at {location}: {e.message}") from e


@dataclass
class VerificationOutcome:
    mode: str
    route: str
    hash_ok: bool
    checks: Dict[str, bool] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.hash_ok and bool(self.checks) and all(self.checks.values())


def _verify_ff_body(body: Dict[str, Any], outcome: VerificationOutcome) -> None:
    field_data = body["field"]
    params = body["parameters"]
    try:
        universe = FqField.from_modulus(field_data["p"], field_data["modulus"])
        base = universe.subfield(field_data["base_degree"])
        ext = FiniteExtension(base, params["n"])
        x = universe.element(body["generator"])
    except SdnbError as e:
        raise CertificateFormatError(f"cannot rebuild the field: {e}") from e
    outcome.checks["in_extension"] = ext.top.contains(x)
    report = verify_gram_ff(x, ext)
    outcome.checks["gram"] = report.passed
    if not report.passed:
        outcome.messages.append(f"Gram row differs from the identity at {report.failures}")
    outcome.checks["normal"] = is_normal(x, base, ext.n)


def rebuild_extension(params: Dict[str, Any]) -> Extension:
    """The extension descriptor named by a local certificate's parameters"""
    base = LocalBase(params["p"], params["f"], params["prec"], params["guard"])
    kind = params["kind"]
    if kind == "unramified" or kind == "tame":
        return build_extension(base, kind, params["d"])
    if kind == "wild":
        return build_extension(base, "wild")
    parent = build_extension(base, "compositum", (params["d_un"], params["d_tot"]))
    if kind == "compositum":
        return parent
    if kind == "traced":
        subgroup = parent.group.subgroup(params["subgroup"])
        return TracedExtension(parent, subgroup, parent.group.coset_representatives(subgroup))
    raise CertificateFormatError(f"unknown extension kind {kind!r}")


def _verify_local_body(body: Dict[str, Any], outcome: VerificationOutcome) -> None:
    try:
        ext = rebuild_extension(body["parameters"])
    except (SdnbError, KeyError) as e:
        raise CertificateFormatError(f"cannot rebuild the extension: {e}") from e
    ring = ext.ring
    recorded = body["extension"]
    outcome.checks["moduli"] = (
        list(ring.mu) == recorded["residue_modulus"]
        and list(ring.h) == recorded["eisenstein"]
        and ring.F == recorded["unram_degree"]
    )
    if not outcome.checks["moduli"]:
        outcome.messages.append("rebuilt ring moduli differ from the recorded ones")
        return
    elements = {"generator": decode_padic(body["generator"], ring)}
    for name, data in body.get("alternates", {}).items():
        elements[name] = decode_padic(data, ring)
    expected = ext.inverse_different_root
    for name, x in elements.items():
        try:
            valuation = ext.valuation(x)
            report = verify_gram_local(x, ext)
        except SdnbError as e:
            outcome.checks[f"{name}.gram"] = False
            outcome.messages.append(f"{name}: {e}")
            continue
        outcome.checks[f"{name}.valuation"] = valuation == expected
        outcome.checks[f"{name}.gram"] = report.passed
        if valuation != expected:
            outcome.messages.append(f"{name}: v_L(x) = {valuation}, expected {expected}")
        if not report.passed:
            outcome.messages.append(f"{name}: Gram row differs from the identity at {report.failures}")


def verify_document(document: Any) -> VerificationOutcome:
    """Schema, hash and a from-scratch recheck of the mathematical claims"""
    validate_document(document)
    body = document["body"]
    outcome = VerificationOutcome(body["mode"], body["route"], body_digest(body) == document["body_sha256"])
    if not outcome.hash_ok:
        outcome.messages.append("body_sha256 does not match the body")
    if body["mode"] == "ff":
        _verify_ff_body(body, outcome)
    else:
        _verify_local_body(body, outcome)
    level = logging.INFO if outcome.passed else logging.WARNING
    logger.log(level, f"verify {body['mode']}/{body['route']}: {'pass' if outcome.passed else 'fail'}")
    return outcome


def require_verified(document: Any) -> VerificationOutcome:
    outcome = verify_document(document)
    if not outcome.passed:
        raise VerificationError("; ".join(outcome.messages) or "certificate checks failed")
    return outcome


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class JobResult:
    name: str
    mode: str
    status: str
    message: str = ""
    elapsed: float = 0.0
    path: Optional[str] = None
    route: Optional[str] = None


class ReportGenerator:
    """HTML certificate summaries and JUnit reports for batch runs"""

    def __init__(self):
        self.html_template = self._get_html_template()

    def render_html(self, document: Dict[str, Any]) -> str:
        body = document["body"]
        if body["mode"] == "ff":
            rows = [{"index": i, "value": v, "ok": i not in body["verification"]["gram"]["failures"]}
                    for i, v in enumerate(body["verification"]["gram"]["entries"])]
        else:
            failures = body["verification"]["gram"]["failures"]
            rows = [{"index": i, "value": "ok" if i not in failures else "differs", "ok": i not in failures}
                    for i in range(body["extension"]["degree"])]
        return self.html_template.render(
            document=document,
            body=body,
            rows=rows,
            parameters=body["parameters"],
            rendered_at=datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC"),
        )

    def write_html(self, document: Dict[str, Any], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.render_html(document))
        logger.info(f"HTML summary written: {path}")
        return path

    def junit_xml(self, results: List[JobResult], suite_name: str = "self-dual certificates") -> str:
        cases = []
        for result in results:
            case = TestCase(result.name, classname=f"sdnb.{result.mode}", elapsed_sec=result.elapsed,
                            file=result.path)
            if result.status == "failed":
                case.add_failure_info(message=result.message or "verification failed")
            elif result.status == "error":
                case.add_error_info(message=result.message or "job error")
            cases.append(case)
        return to_xml_report_string([TestSuite(suite_name, cases)])

    def write_junit(self, results: List[JobResult], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.junit_xml(results))
        logger.info(f"JUnit XML report written: {path}")
        return path

    def _get_html_template(self) -> Template:
        template_str = '''
<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Self-dual certificate: {{ body.route }}</title>
    <style>
        body { font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', sans-serif; color: #333; background: #f8f9fa; }
        .container { max-width: 1000px; margin: 0 auto; padding: 20px; }
        .header { background: linear-gradient(135deg, #667eea 0%, #764ba2 100%); color: white; padding: 1.5rem; border-radius: 10px; }
        .section { background: white; padding: 1.5rem; border-radius: 8px; margin-top: 1.5rem; box-shadow: 0 2px 10px rgba(0,0,0,0.1); }
        .pass { color: #28a745; font-weight: bold; }
        .fail { color: #dc3545; font-weight: bold; }
        table { border-collapse: collapse; width: 100%; }
        td, th { border-bottom: 1px solid #e9ecef; padding: 0.4rem; text-align: left; font-family: monospace; }
        .footer { text-align: center; color: #6c757d; margin-top: 2rem; font-size: 0.85rem; }
    </style>
</head>
<body>
    <div class="container">
        <div class="header">
            <h1>{{ body.mode|upper }} certificate</h1>
            <p>Route {{ body.route }} | schema {{ document.schema_version }} | generated {{ document.generated_at }}</p>
        </div>

        <div class="section">
            <h2>Parameters</h2>
            <table>
            {% for key, value in parameters|dictsort %}
                <tr><th>{{ key }}</th><td>{{ value }}</td></tr>
            {% endfor %}
            </table>
        </div>

        <div class="section">
            <h2>Verification</h2>
            <p>Gram check:
            {% if body.verification.gram.passed %}<span class="pass">identity</span>{% else %}<span class="fail">failed at {{ body.verification.gram.failures }}</span>{% endif %}
            </p>
            {% if body.mode == "ff" %}
            <p>Normal: <span class="{{ 'pass' if body.verification.normal else 'fail' }}">{{ body.verification.normal }}</span></p>
            {% else %}
            <p>Valuation {{ body.verification.valuation }} (expected {{ body.verification.expected_valuation }}),
               target precision p^{{ body.verification.gram.target }}, margin {{ body.verification.gram.margin }}</p>
            {% endif %}
            <table>
                <tr><th>g</th><th>Tr(x g(x))</th><th></th></tr>
            {% for row in rows %}
                <tr><td>{{ row.index }}</td><td>{{ row.value }}</td><td class="{{ 'pass' if row.ok else 'fail' }}">{{ "ok" if row.ok else "differs" }}</td></tr>
            {% endfor %}
            </table>
        </div>

        {% if body.conventions %}
        <div class="section">
            <h2>Branch conventions</h2>
            <ul>
            {% for c in body.conventions %}<li>{{ c }}</li>{% endfor %}
            </ul>
        </div>
        {% endif %}

        <div class="footer">
            body_sha256 {{ document.body_sha256 }} | rendered {{ rendered_at }}
        </div>
    </div>
</body>
</html>
        '''
        return Template(template_str)
