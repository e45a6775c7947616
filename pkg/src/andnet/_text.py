"""Shared text helpers: ASCII transliteration and surname-aware name splitting."""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

#: Lowercase surname particles. A particle token directly left of the surname
#: attaches to the surname group and is never initialized.
SURNAME_PARTICLES = frozenset({"van", "der", "de", "von", "da", "del", "la", "bin"})

_ALPHA_RUN = re.compile(r"[A-Za-z]+")


def ascii_fold(text: str) -> str:
    """Transliterate to ASCII via Unicode decomposition; unmappable characters are dropped."""
    return unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode("ascii")


@dataclass(frozen=True)
class ParsedName:
    """A personal name split into forename tokens and a surname token group."""

    forenames: tuple[str, ...]
    surname: tuple[str, ...]


def split_name(name: str) -> ParsedName:
    """Split a printed name into forename tokens and the surname group.

    The final whitespace-delimited token is the surname; recognized particles
    (van, der, de, ...) extend the surname group leftwards.  A "Last, First"
    comma form is normalized to "First Last" before splitting.

    Raises
    ------
    ValueError
        If the name contains no parseable tokens or no surname.
    """
    text = name.strip()
    if "," in text:
        last, _, first = text.partition(",")
        fore_tokens = first.replace(",", " ").split()
        sur_tokens = last.split()
    else:
        tokens = text.split()
        if not tokens:
            raise ValueError(f"name has no parseable tokens: {name!r}")
        cut = len(tokens) - 1
        while cut > 0 and tokens[cut - 1].lower() in SURNAME_PARTICLES:
            cut -= 1
        fore_tokens = tokens[:cut]
        sur_tokens = tokens[cut:]
    if not sur_tokens or not any(c.isalnum() for t in sur_tokens for c in t):
        raise ValueError(f"name has no parseable surname: {name!r}")
    return ParsedName(tuple(fore_tokens), tuple(sur_tokens))


def is_initial(token: str) -> bool:
    """True when a forename token is an initial ("C", "C.", "J.-P."), not a full name."""
    runs = _ALPHA_RUN.findall(token)
    return max((len(r) for r in runs), default=0) <= 1
