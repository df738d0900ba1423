"""Hosted-model adapters over an OpenAI-compatible chat-completions endpoint.

The API key comes from ``CITEGATE_LLM_API_KEY``; the endpoint defaults to
``CITEGATE_LLM_BASE_URL`` or the OpenAI URL. All three adapters ask for a
JSON object and parse it strictly; anything else raises.
"""

from __future__ import annotations

import json
import logging
import os
import re
from typing import Optional

import requests

from .models import ParsedCitation, ParseMethod, is_arxiv_id

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openai.com/v1"

_SCHEMAS = {
    "verifier": ('{"score": number 0-10, "classification": "exact_match" | '
                 '"minor_hallucination" | "major_hallucination", "confidence": "low" | '
                 '"medium" | "high", "reasoning": string, "key_differences": [string]}'),
    "reviewer": ('{"classification": "exact_match" | "minor_hallucination" | '
                 '"major_hallucination", "reasoning": string}'),
}
_FENCE = re.compile(r"^```(?:json)?\s*|\s*```$")


class ChatError(RuntimeError):
    pass


class ChatClient:
    def __init__(self, model: str, temperature: float = 0.0, base_url: Optional[str] = None,
                 api_key: Optional[str] = None, session: Optional[requests.Session] = None,
                 timeout: float = 60.0):
        self.model = model
        self.temperature = temperature
        self.base_url = (base_url or os.environ.get("CITEGATE_LLM_BASE_URL")
                         or DEFAULT_BASE_URL).rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get("CITEGATE_LLM_API_KEY")
        self.session = session or requests.Session()
        self.timeout = timeout

    def complete_json(self, system: str, user: str, temperature: Optional[float] = None) -> dict:
        body = {
            "model": self.model,
            "temperature": self.temperature if temperature is None else temperature,
            "response_format": {"type": "json_object"},
            "messages": [{"role": "system", "content": system},
                         {"role": "user", "content": user}],
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self.session.post(f"{self.base_url}/chat/completions", json=body,
                                     headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ChatError(f"transport error: {exc}") from exc
        if resp.status_code != 200:
            raise ChatError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            content = resp.json()["choices"][0]["message"]["content"]
            out = json.loads(_FENCE.sub("", content.strip()))
        except (ValueError, KeyError, IndexError, TypeError, AttributeError) as exc:
            raise ChatError(f"unparseable completion: {exc}") from exc
        if not isinstance(out, dict):
            raise ChatError("completion is not a JSON object")
        return out


class ChatJudge:
    """Judge backend that sends the rendered prompt and returns the JSON reply."""

    def __init__(self, client: ChatClient):
        self.client = client

    def judge(self, prompt: str, schema_tag: str, fields: dict) -> dict:
        system = f"Respond with a single JSON object of the form {_SCHEMAS[schema_tag]}."
        return self.client.complete_json(system, prompt)


class ChatCorruptionBackend:
    def __init__(self, client: ChatClient):
        self.client = client

    def corrupt(self, batch, kind, topic, subtopic, temperature, prompt=""):
        system = (prompt + "\n\nRespond with a JSON object {\"items\": [{\"original\": string, "
                  "\"corrupted\": string, \"label\": string, \"change_description\": string}]} "
                  "with one item per input citation, in input order.")
        user = "\n".join(f"{i + 1}. {text}" for i, text in enumerate(batch))
        out = self.client.complete_json(system, user, temperature=temperature)
        items = out.get("items")
        if not isinstance(items, list) or len(items) != len(batch):
            raise ChatError("corruption output not aligned with input batch")
        pairs = []
        for item in items:
            corrupted, desc = item.get("corrupted"), item.get("change_description", "")
            if not isinstance(corrupted, str) or not corrupted.strip():
                raise ChatError("missing corrupted citation")
            pairs.append((corrupted, str(desc)))
        return pairs


_PARSE_SYSTEM = ("Extract bibliographic fields from the citation. Respond with a JSON object "
                 '{"authors": string|null, "year": integer|null, "title": string|null, '
                 '"url": string|null, "doi": string|null, "arxiv_id": string|null}.')


class ChatFallbackParser:
    def __init__(self, client: ChatClient):
        self.client = client

    def parse(self, text: str) -> Optional[ParsedCitation]:
        out = self.client.complete_json(_PARSE_SYSTEM, text)
        fields = {k: out.get(k) or None for k in ("authors", "title", "url", "doi", "arxiv_id")}
        if fields["arxiv_id"] and not is_arxiv_id(str(fields["arxiv_id"])):
            fields["arxiv_id"] = None
        try:
            year = int(out["year"]) if out.get("year") is not None else None
            return ParsedCitation(year=year, parse_method=ParseMethod.LLM_FALLBACK,
                                  **{k: str(v) if v is not None else None
                                     for k, v in fields.items()})
        except (TypeError, ValueError) as exc:
            log.warning("discarding fallback parse: %s", exc)
            return None
