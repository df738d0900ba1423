"""Corruption-benchmark construction.

Each collection is shuffled with a fixed seed and split into valid, minor and
major buckets (remainder to valid). Minor and major buckets go to a
corruption backend; a batch that still fails after retries is emitted
unchanged and labeled valid, so no citation is ever dropped.
"""

from __future__ import annotations

import logging
import random
import re
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Sequence

from . import prompts
from .models import Label, RawCitation

log = logging.getLogger(__name__)

TEMPERATURES = {"minor": 0.7, "major": 0.9}
DEFAULT_SEED = 42


class CorruptionFailed(Exception):
    pass


class CorruptionBackend(Protocol):
    def corrupt(self, batch: list, kind: str, topic: str, subtopic: str, temperature: float,
                prompt: str = "") -> list:
        """Return one ``(corrupted, description)`` pair per input, or raise."""


@dataclass(frozen=True)
class BenchmarkRecord:
    index: int
    collection: str
    original: str
    corrupted: str
    label: Label
    change_description: str = ""
    citation_id: str = ""

    def __post_init__(self):
        if self.label is Label.EXACT and (self.corrupted != self.original
                                          or self.change_description):
            raise ValueError("valid records must be verbatim with no description")

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "citation_id": self.citation_id,
            "collection": self.collection,
            "original": self.original,
            "corrupted": self.corrupted,
            "label": self.label.value,
            "change_description": self.change_description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkRecord":
        return cls(
            index=int(d["index"]),
            collection=d["collection"],
            original=d["original"],
            corrupted=d["corrupted"],
            label=Label.parse(d["label"]),
            change_description=d.get("change_description", ""),
            citation_id=d.get("citation_id", ""),
        )

    def to_dataset_row(self) -> dict:
        return {"id": self.citation_id, "collection": self.collection, "text": self.corrupted,
                "gold_label": self.label.value}


@dataclass
class BuildSummary:
    counts: Counter = field(default_factory=Counter)
    failed_batches: int = 0
    fallback_records: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def shares(self) -> dict:
        total = self.total or 1
        return {label.value: self.counts[label] / total for label in Label}


def bucket_sizes(n: int) -> tuple:
    third = n // 3
    return n - 2 * third, third, third


def partition_collection(ids: Sequence, seed: int = DEFAULT_SEED) -> tuple:
    if not ids:
        raise ValueError("cannot partition an empty collection")
    order = list(ids)
    random.Random(seed).shuffle(order)
    n_valid, n_minor, _ = bucket_sizes(len(order))
    return (order[:n_valid], order[n_valid:n_valid + n_minor], order[n_valid + n_minor:])


def render_corruption_prompt(kind: str, topic: str = "", subtopic: str = "") -> str:
    if kind == "minor":
        return prompts.load("corrupt_minor")
    if kind == "major":
        return (prompts.load("corrupt_major")
                .replace("{subtopic}", subtopic).replace("{topic}", topic))
    raise ValueError(f"unknown corruption kind: {kind!r}")


def corrupt_batch(citations: Sequence[RawCitation], kind: str, topic: str, subtopic: str,
                  backend: CorruptionBackend, retries: int = 3, backoff: float = 0.5,
                  sleep: Callable[[float], None] = time.sleep,
                  summary: Optional[BuildSummary] = None) -> list:
    prompt = render_corruption_prompt(kind, topic, subtopic)
    label = Label.MINOR if kind == "minor" else Label.MAJOR
    texts = [c.text for c in citations]
    out = None
    for attempt in range(retries + 1):
        try:
            out = backend.corrupt(texts, kind, topic, subtopic, TEMPERATURES[kind], prompt=prompt)
            if out is None or len(out) != len(texts):
                raise CorruptionFailed("backend output not aligned with its input batch")
            break
        except Exception as exc:  # noqa: BLE001 - any backend failure triggers the fallback
            log.warning("%s corruption attempt %d failed: %s", kind, attempt + 1, exc)
            out = None
            if attempt < retries:
                sleep(backoff * (2 ** attempt))
    if out is None:
        if summary is not None:
            summary.failed_batches += 1
            summary.fallback_records += len(texts)
        return [BenchmarkRecord(i, c.collection, c.text, c.text, Label.EXACT, "", c.id)
                for i, c in enumerate(citations)]
    return [BenchmarkRecord(i, c.collection, c.text, corrupted, label, description, c.id)
            for i, (c, (corrupted, description)) in enumerate(zip(citations, out))]


def group_by_collection(pool: Sequence[RawCitation]) -> dict:
    groups: dict = {}
    for c in pool:
        groups.setdefault(c.collection, []).append(c)
    return groups


def build_benchmark(pool: Sequence[RawCitation], backend: CorruptionBackend,
                    seed: int = DEFAULT_SEED, topics: Optional[dict] = None,
                    **batch_kwargs):
    """Return ``(records, summary)``; ``topics`` maps collection -> (topic, subtopic)."""
    topics = topics or {}
    records, summary = [], BuildSummary()
    for collection, members in group_by_collection(pool).items():
        by_id = {c.id: c for c in members}
        if len(by_id) != len(members):
            raise ValueError(f"duplicate citation ids in collection {collection!r}")
        valid, minor, major = partition_collection([c.id for c in members], seed)
        topic, subtopic = topics.get(collection, ("physics", collection))
        records += [BenchmarkRecord(i, collection, by_id[cid].text, by_id[cid].text,
                                    Label.EXACT, "", cid) for i, cid in enumerate(valid)]
        for kind, ids in (("minor", minor), ("major", major)):
            if ids:
                records += corrupt_batch([by_id[i] for i in ids], kind, topic, subtopic,
                                         backend, summary=summary, **batch_kwargs)
    summary.counts.update(r.label for r in records)
    return records, summary


class EchoCorruptionBackend:
    """Returns inputs unchanged with a fixed description."""

    def __init__(self, description: str = "noop"):
        self.description = description
        self.calls = []

    def corrupt(self, batch, kind, topic, subtopic, temperature, prompt=""):
        self.calls.append((kind, temperature, len(batch)))
        return [(text, self.description) for text in batch]


class FailingCorruptionBackend:
    def __init__(self):
        self.calls = 0

    def corrupt(self, batch, kind, topic, subtopic, temperature, prompt=""):
        self.calls += 1
        raise CorruptionFailed("scripted failure")


class ScriptedCorruptionBackend:
    """Looks up each original in a table of ``original -> (corrupted, description)``."""

    def __init__(self, table: dict):
        self.table = dict(table)

    def corrupt(self, batch, kind, topic, subtopic, temperature, prompt=""):
        try:
            return [tuple(self.table[text]) for text in batch]
        except KeyError as exc:
            raise CorruptionFailed(f"no scripted corruption for {exc}") from None


_LINK = re.compile(r"^\[(?P<authors>.*?),\s*(?P<year>\d{4}),\s*(?P<title>.*)\]\((?P<url>.*)\)$")
_MAJOR_WORDS = ("Holographic", "Stochastic", "Topological", "Nonlinear", "Emergent", "Chiral",
                "Entangled", "Anisotropic", "Relativistic", "Quasi-periodic")
_MAJOR_NOUNS = ("Lattices", "Condensates", "Manifolds", "Resonances", "Cascades", "Filaments")
_MAJOR_NAMES = ("Farnsworth", "Qanzar", "Tavern", "Reddington", "Okonkwo", "Lindqvist")


class HeuristicCorruptionBackend:
    """Deterministic offline corruptor for the ``[Authors, Year, Title](URL)`` form.

    Minor: shifts the year by one. Major: fabricated authors, title and arXiv
    id, year shifted by five.
    """

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed

    def corrupt(self, batch, kind, topic, subtopic, temperature, prompt=""):
        out = []
        for i, text in enumerate(batch):
            m = _LINK.match(text.strip())
            if not m:
                raise CorruptionFailed(f"unrecognized citation shape: {text!r}")
            year = int(m["year"])
            if kind == "minor":
                out.append((f"[{m['authors']}, {year + 1}, {m['title']}]({m['url']})",
                            f"year changed {year} -> {year + 1}"))
                continue
            rng = random.Random(f"{self.seed}:{text}")
            title = (f"{rng.choice(_MAJOR_WORDS)} {rng.choice(_MAJOR_NOUNS)} in the "
                     f"{rng.choice(_MAJOR_NAMES)}Scope {subtopic or topic} Survey")
            authors = f"{rng.choice(_MAJOR_NAMES)} & {rng.choice(_MAJOR_NAMES)}"
            fake_id = f"{rng.randint(1000, 2499)}.{rng.randint(10000, 99999)}"
            url = f"https://arxiv.org/pdf/{fake_id}.pdf"
            out.append((f"[{authors}, {year + 5}, {title}]({url})",
                        f"fabricated title, authors and identifier; year {year} -> {year + 5}"))
        return out
