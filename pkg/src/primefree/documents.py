"""Certificate documents: JSON serialization with an explicit schema version.

Layout::

    {
      "schema_version": 1,
      "variant": "divisibility" | "prime-free-interval" | "pisot-floor",
      "certificate": {...},      # variant fields, integers as decimal strings
      "metadata": {...},         # budgets, flags, tool version, created_at
      "verification": [...]      # optional stamps: {"n_checks", "ok", "at"}
    }

The canonical text form is ``json.dumps(doc, sort_keys=True, indent=2)``
followed by a newline.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Optional

from .certify import (
    Certificate,
    DivisibilityCertificate,
    PisotFloorCertificate,
    PrimeFreeIntervalCertificate,
)
from .errors import CertificateFormatError, InvalidSpec

SCHEMA_VERSION = 1

VARIANTS = {
    DivisibilityCertificate.kind: DivisibilityCertificate,
    PrimeFreeIntervalCertificate.kind: PrimeFreeIntervalCertificate,
    PisotFloorCertificate.kind: PisotFloorCertificate,
}


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def to_document(cert: Certificate, metadata: Optional[dict] = None) -> dict:
    from . import __version__

    meta = {"tool": "primefree", "tool_version": __version__, "created_at": _now()}
    meta.update(metadata or {})
    return {
        "schema_version": SCHEMA_VERSION,
        "variant": cert.kind,
        "certificate": cert.to_dict(),
        "metadata": meta,
        "verification": [],
    }


def stamp(doc: dict, report) -> dict:
    """Append a verification stamp for ``report`` and return the document."""
    doc.setdefault("verification", []).append(
        {"n_checks": report.n_checks, "ok": report.ok,
         "claims": len(report.claims), "failures": len(report.failures), "at": _now()}
    )
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CertificateFormatError(
            f"unsupported schema_version {doc.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    if doc.get("variant") not in VARIANTS:
        raise CertificateFormatError(f"unknown variant {doc.get('variant')!r}")
    if not isinstance(doc.get("certificate"), dict):
        raise CertificateFormatError("missing certificate body")
    return doc


def certificate_from_document(doc: dict) -> Certificate:
    cls = VARIANTS[doc["variant"]]
    try:
        return cls.from_dict(doc["certificate"])
    except (KeyError, TypeError, ValueError, InvalidSpec) as exc:
        raise CertificateFormatError(f"malformed {doc['variant']} certificate: {exc!r}") from None


def canonical(doc: dict) -> dict:
    """Document with the certificate body re-derived from its parsed form."""
    out = dict(doc)
    out["certificate"] = certificate_from_document(doc).to_dict()
    return out
