"""HTTP oracle client with on-disk response caching.

Wire protocol: POST a JSON object to the endpoint, one of

    {"op": "generate_premises", "statement": ...} -> {"premises": [...]}
    {"op": "score_statement",   "statement": ...} -> {"score": 0.98}
    {"op": "score_entailment",  "premises": [...], "hypothesis": ...} -> {"score": ...}
    {"op": "negate",            "statement": ...} -> {"statement": ...}

Responses are cached on disk keyed by the canonicalized request, so
repeated runs never re-query the backend.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Sequence

import requests

from .construction import canonicalize

MAX_ATTEMPTS = 3
BACKOFF_SECONDS = 0.2


class OracleTransportError(RuntimeError):
    """The oracle endpoint could not be reached or kept failing."""


class OracleDecodeError(RuntimeError):
    """The oracle endpoint returned a malformed response document."""


class RemoteOracle:
    """BeliefOracle backed by an HTTP endpoint, with a persistent cache."""

    def __init__(
        self,
        endpoint: str,
        cache_path: str | Path | None = None,
        timeout: float = 30.0,
        session: requests.Session | None = None,
        backoff: float = BACKOFF_SECONDS,
    ):
        self.endpoint = endpoint
        self.cache_path = Path(cache_path) if cache_path else None
        self.timeout = timeout
        self.session = session or requests.Session()
        self.backoff = backoff
        self.calls = 0
        self._cache: dict[str, dict] = {}
        if self.cache_path and self.cache_path.exists():
            self._cache = json.loads(self.cache_path.read_text())

    def _persist(self) -> None:
        if self.cache_path:
            self.cache_path.write_text(json.dumps(self._cache, sort_keys=True, indent=1))

    def _request(self, payload: dict) -> dict:
        key = json.dumps(payload, sort_keys=True)
        if key in self._cache:
            return self._cache[key]
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                self.calls += 1
                response = self.session.post(
                    self.endpoint, json=payload, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = OracleTransportError(
                    f"server error {response.status_code} from {self.endpoint}"
                )
                continue
            if response.status_code != 200:
                raise OracleTransportError(
                    f"unexpected status {response.status_code} from {self.endpoint}"
                )
            try:
                document = response.json()
            except ValueError as exc:
                raise OracleDecodeError(f"non-JSON oracle response: {exc}") from exc
            if not isinstance(document, dict):
                raise OracleDecodeError("oracle response root must be an object")
            self._cache[key] = document
            self._persist()
            return document
        raise OracleTransportError(
            f"oracle at {self.endpoint} failed after {MAX_ATTEMPTS} attempts: {last_error}"
        )

    @staticmethod
    def _field(document: dict, key: str, kind: type):
        if key not in document:
            raise OracleDecodeError(f"oracle response missing {key!r}")
        value = document[key]
        try:
            return kind(value)
        except (TypeError, ValueError) as exc:
            raise OracleDecodeError(f"oracle field {key!r}: {exc}") from exc

    def generate_premises(self, statement: str) -> list[str]:
        document = self._request(
            {"op": "generate_premises", "statement": canonicalize(statement)}
        )
        premises = self._field(document, "premises", list)
        if not all(isinstance(p, str) for p in premises):
            raise OracleDecodeError("premises must be a list of strings")
        return premises

    def score_statement(self, statement: str) -> float:
        document = self._request(
            {"op": "score_statement", "statement": canonicalize(statement)}
        )
        return self._field(document, "score", float)

    def score_entailment(self, premises: Sequence[str], hypothesis: str) -> float:
        document = self._request(
            {
                "op": "score_entailment",
                "premises": [canonicalize(p) for p in premises],
                "hypothesis": canonicalize(hypothesis),
            }
        )
        return self._field(document, "score", float)

    def negate(self, statement: str) -> str:
        document = self._request({"op": "negate", "statement": canonicalize(statement)})
        return self._field(document, "statement", str)
