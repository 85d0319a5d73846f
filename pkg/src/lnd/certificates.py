"""Machine-checkable certificate records and their JSON form.

Every certificate carries the data needed to recompute it, so ``replay``
rebuilds the checks from scratch and compares them to the stored outcome.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InputError

SCHEMA = "lnd-cert/1"

# kind -> function(subject, data) -> Certificate; filled in by the modules that issue them
_REPLAYERS = {}


def register(kind):
    def deco(fn):
        _REPLAYERS[kind] = fn
        return fn
    return deco


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_dict(self):
        return {"name": self.name, "pass": bool(self.passed), "witness": self.witness}


@dataclass
class Certificate:
    kind: str
    subject: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "subject": self.subject,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or d.get("schema") != SCHEMA:
            raise InputError(f"not a {SCHEMA} document")
        try:
            checks = [Check(c["name"], bool(c["pass"]), c.get("witness")) for c in d["checks"]]
            return cls(d["kind"], d["subject"], checks, d.get("data", {}))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc

    @classmethod
    def from_json(cls, text: str):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"certificate is not valid JSON: {exc}") from exc


def replay(cert: Certificate) -> Certificate:
    """Recompute a certificate from its subject and data."""
    # the issuing modules register themselves on import
    from . import derivations, plane_autos, constructions, rank_lab  # noqa: F401

    fn = _REPLAYERS.get(cert.kind)
    if fn is None:
        raise InputError(f"unknown certificate kind {cert.kind!r}")
    return fn(cert.subject, cert.data)


def verify_certificate(cert: Certificate):
    """(agrees, fresh): does a recomputation reproduce every stored check?"""
    fresh = replay(cert)
    stored = {c.name: c.passed for c in cert.checks}
    again = {c.name: c.passed for c in fresh.checks}
    agrees = stored == again and cert.ok == fresh.ok
    return agrees, fresh
