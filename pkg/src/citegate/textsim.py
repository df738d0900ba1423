"""Text cleaning plus the title-similarity and word-overlap scores.

Both scores live on a 0-100 scale. ``title_similarity`` is the acceptance
signal for the retrieval cascade; ``word_overlap`` and ``ranking_score`` only
order candidates within a single source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

_SPACING_CMD = re.compile(r"\\(?:[,;:! ]|quad\b|qquad\b|enspace\b|thinspace\b)")
_ELLIPSIS_CMD = re.compile(r"\\(?:ldots|dots|textellipsis)\b")
_WORD_CMD = re.compile(r"\\[A-Za-z]+\*?")
_ESCAPED_CHAR = re.compile(r"\\([^A-Za-z\s])")
_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class SimilarityConfig:
    min_title_similarity: float = 70.0
    year_bonus_exact: float = 10.0
    year_bonus_near: float = 5.0
    ranking_year_window: int = 2

    def __post_init__(self):
        if not 0.0 <= self.min_title_similarity <= 100.0:
            raise ValueError("min_title_similarity must be in [0, 100]")
        if not self.year_bonus_exact >= self.year_bonus_near >= 0:
            raise ValueError("need year_bonus_exact >= year_bonus_near >= 0")
        if self.ranking_year_window < 0:
            raise ValueError("ranking_year_window must be >= 0")


def clean_text(raw: str) -> str:
    """Strip LaTeX/BibTeX markup from a title or query string.

    >>> clean_text(r"{The} \\textit{Higgs} boson \\& friends~today")
    'The Higgs boson & friends today'
    """
    s = raw.replace("\\\\", " ")
    s = _SPACING_CMD.sub(" ", s)
    s = s.replace("~", " ")
    s = _ELLIPSIS_CMD.sub("...", s)
    # command names go, their braced arguments stay (braces are dropped below)
    s = _WORD_CMD.sub("", s)
    s = _ESCAPED_CHAR.sub(r"\1", s)
    s = s.replace("\\", "")
    s = s.replace("{", "").replace("}", "")
    return _WS.sub(" ", s).strip()


def normalize_for_compare(s: str) -> str:
    lowered = s.lower()
    kept = "".join(ch for ch in lowered if ch.isalnum() or ch.isspace())
    return " ".join(kept.split())


def levenshtein(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute edit distance."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity_from_distance(distance: int, len_a: int, len_b: int) -> float:
    longest = max(len_a, len_b)
    if longest == 0:
        return 100.0
    return max(0.0, (1.0 - distance / longest) * 100.0)


def title_similarity(a: str, b: str) -> float:
    na, nb = normalize_for_compare(a), normalize_for_compare(b)
    return similarity_from_distance(levenshtein(na, nb), len(na), len(nb))


def word_set(s: str) -> frozenset:
    return frozenset(normalize_for_compare(s).split())


def word_overlap(a: str, b: str) -> float:
    wa, wb = word_set(a), word_set(b)
    longest = max(len(wa), len(wb))
    if longest == 0:
        return 100.0
    return len(wa & wb) / longest * 100.0


def year_bonus(query_year: Optional[int], cand_year: Optional[int], cfg: SimilarityConfig) -> float:
    if query_year is None or cand_year is None:
        return 0.0
    gap = abs(query_year - cand_year)
    if gap == 0:
        return cfg.year_bonus_exact
    if gap <= cfg.ranking_year_window:
        return cfg.year_bonus_near
    return 0.0


def ranking_score(query_title: str, query_year: Optional[int], cand, mode: str,
                  cfg: SimilarityConfig) -> float:
    """Intra-source ordering score; may exceed 100 and never gates acceptance."""
    if mode == "levenshtein":
        base = title_similarity(query_title, cand.title)
    elif mode == "overlap":
        base = word_overlap(query_title, cand.title)
    else:
        raise ValueError(f"unknown ranking mode: {mode!r}")
    return base + year_bonus(query_year, cand.year, cfg)
