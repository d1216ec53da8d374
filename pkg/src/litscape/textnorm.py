"""Text normalization shared by record alignment and title indexing.

Two distinct normal forms live here and they are deliberately different:

* ``normalize_title`` produces the aggressive form used inside alignment
  keys, where robustness across metadata sources matters more than
  faithfulness (accents stripped, every punctuation run collapsed).
* ``tokenize_title`` produces the display/index tokens used by the title
  unigram/bigram tables and term search. It keeps internal hyphens so
  compound terms like "multi-task" survive as one token, and it does not
  strip accents, because the tokens are shown to users.

No stemming happens anywhere in this package by design: searches must be
able to distinguish morphological variants (e.g. "emotion" vs "emotions").
"""

from __future__ import annotations

import re
import unicodedata

_WS_RUN = re.compile(r"\s+")

# A token is a run of letters/digits, optionally chained by single internal
# hyphens ("multi-task"). Underscore and every other character separate.
_TOKEN = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)


def normalize_title(title: str) -> str:
    """Return the canonical matching form of a title (or a name).

    Lowercased, compatibility-decomposed with combining marks dropped
    (so "Déjà" becomes "deja"), every non-alphanumeric character replaced
    by a space, and whitespace collapsed. Idempotent.
    """
    decomposed = unicodedata.normalize("NFKD", title)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    lowered = stripped.lower()
    spaced = "".join(c if c.isalnum() else " " for c in lowered)
    return _WS_RUN.sub(" ", spaced).strip()


def build_alignment_key(title: str, year: int, first_author_last: str) -> str:
    """Build the paper id used to match anthology and citation entries.

    The key is the normalized title, the publication year, and the
    normalized first-author last name, joined by "|". Venue is deliberately
    not part of the key: venue strings vary too much across sources.
    """
    if not normalize_title(title):
        raise ValueError("alignment key needs a non-empty title")
    if not normalize_title(first_author_last):
        raise ValueError("alignment key needs a non-empty first-author last name")
    return f"{normalize_title(title)}|{year}|{normalize_title(first_author_last)}"


def tokenize_title(title: str) -> list[str]:
    """Split a title into lowercase tokens, preserving order and duplicates.

    Any character that is not a letter, digit, or internal hyphen
    separates tokens. "Multi-task Learning: A Survey" tokenizes to
    ["multi-task", "learning", "a", "survey"].
    """
    return _TOKEN.findall(title.lower())
