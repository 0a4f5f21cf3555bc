"""JSON rendering of proof certificates."""

from __future__ import annotations

import json
from typing import Any

from .prover import ProofCertificate

__all__ = ["CERTIFICATE_VERSION", "CertificateFormatError", "render_certificate", "parse_certificate", "same_content"]

CERTIFICATE_VERSION = "1"

_REQUIRED = ("version", "system", "options", "input_digest", "stage1", "stage2", "verdict", "note")


class CertificateFormatError(ValueError):
    pass


def render_certificate(cert: ProofCertificate) -> str:
    """Deterministic text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(cert.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def parse_certificate(text: str) -> ProofCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not a certificate document: {exc}") from exc
    if not isinstance(data, dict):
        raise CertificateFormatError("certificate document must be a JSON object")
    version = data.get("version")
    if version != CERTIFICATE_VERSION:
        raise CertificateFormatError(f"unsupported certificate version {version!r}")
    missing = [k for k in _REQUIRED if k not in data]
    if missing:
        raise CertificateFormatError(f"certificate lacks fields: {', '.join(missing)}")
    return ProofCertificate(
        system=data["system"],
        options=data["options"],
        input_digest=data["input_digest"],
        stage1=data["stage1"],
        stage2=data["stage2"],
        verdict=data["verdict"],
        note=data["note"],
        cross_check=data.get("cross_check"),
        timings_ms=data.get("timings_ms", {}),
        version=version,
    )


def _without_timings(cert: ProofCertificate) -> dict[str, Any]:
    d = cert.to_dict()
    d.pop("timings_ms")
    return d


def same_content(a: ProofCertificate, b: ProofCertificate) -> bool:
    """Equality of everything except timings."""
    return _without_timings(a) == _without_timings(b)
