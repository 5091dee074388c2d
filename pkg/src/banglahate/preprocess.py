"""Text cleaning, whitespace tokenization and stopword removal.

All functions are pure. Removed characters are replaced by a space so that
they act as token boundaries; whitespace runs are collapsed afterwards.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

DANDA = "।"
DOUBLE_DANDA = "॥"
ZWJ = "‍"

# Inclusive code point ranges treated as emoji.
EMOJI_RANGES = (
    (0x1F1E6, 0x1F1FF),  # regional indicators (flags)
    (0x1F300, 0x1F5FF),  # misc symbols and pictographs, incl. skin tones
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport and map
    (0x1F900, 0x1F9FF),  # supplemental symbols and pictographs
    (0x1FA70, 0x1FAFF),  # symbols and pictographs extended-A
    (0x2600, 0x26FF),  # misc symbols
    (0x2700, 0x27BF),  # dingbats
)
VARIATION_SELECTORS = (0xFE00, 0xFE0F)
KEYCAP = 0x20E3

_URL_RE = re.compile(r"(?:[A-Za-z][A-Za-z0-9+.\-]*://|www\.)\S*", re.IGNORECASE)

NORMALIZE_NONE = "none"
NORMALIZE_NFC = "nfc"


@dataclass(frozen=True)
class CleanConfig:
    strip_urls: bool = True
    strip_emoji: bool = True
    strip_punct: bool = True
    strip_special: bool = True
    lowercase_latin: bool = True
    unicode_normalize: str = NORMALIZE_NFC

    def __post_init__(self):
        if self.unicode_normalize not in (NORMALIZE_NONE, NORMALIZE_NFC):
            raise ValueError(f"unicode_normalize must be 'none' or 'nfc', got {self.unicode_normalize!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def _in_ranges(cp: int) -> bool:
    for lo, hi in EMOJI_RANGES:
        if lo <= cp <= hi:
            return True
    return False


def is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return _in_ranges(cp) or VARIATION_SELECTORS[0] <= cp <= VARIATION_SELECTORS[1] or cp == KEYCAP


def _strip_emoji(text: str) -> str:
    out = []
    n = len(text)
    for i, ch in enumerate(text):
        if is_emoji(ch):
            out.append(" ")
        elif ch == ZWJ and (
            (i > 0 and is_emoji(text[i - 1])) or (i + 1 < n and is_emoji(text[i + 1]))
        ):
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def _is_latin_letter(ch: str) -> bool:
    if ch.isascii():
        return ch.isalpha()
    return unicodedata.name(ch, "").startswith("LATIN ")


def clean(text: str, config: CleanConfig = CleanConfig()) -> str:
    """Normalize and strip a raw comment.

    Order: canonical composition (when configured), URLs, emoji, then
    punctuation (category P plus danda/double danda) and special characters
    (categories S and C), then whitespace collapse and trim. URLs go first
    because punctuation removal would otherwise break ``://``.
    """
    if config.unicode_normalize == NORMALIZE_NFC:
        text = unicodedata.normalize("NFC", text)
    if config.strip_urls:
        text = _URL_RE.sub(" ", text)
    if config.strip_emoji:
        text = _strip_emoji(text)
    out = []
    for ch in text:
        if ch.isspace():
            out.append(" ")
            continue
        cat = unicodedata.category(ch)
        if config.strip_punct and (cat[0] == "P" or ch in (DANDA, DOUBLE_DANDA)):
            out.append(" ")
        elif config.strip_special and cat[0] in "SC":
            out.append(" ")
        elif config.lowercase_latin and _is_latin_letter(ch):
            out.append(ch.lower())
        else:
            out.append(ch)
    return " ".join("".join(out).split())


def tokenize(text: str) -> list:
    """Split on Unicode whitespace; never yields empty tokens."""
    return text.split()


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset
    source_id: str = "custom"

    def __contains__(self, token):
        return token in self.words

    def __len__(self):
        return len(self.words)


EMPTY_STOPWORDS = StopwordSet(frozenset(), "empty")


def _normalize_token(token: str, config: Optional[CleanConfig]) -> str:
    if config is not None and config.unicode_normalize == NORMALIZE_NFC:
        token = unicodedata.normalize("NFC", token)
    if config is not None and config.lowercase_latin:
        token = "".join(ch.lower() if _is_latin_letter(ch) else ch for ch in token)
    return token


def stopwords_from_lines(lines: Iterable[str], source_id: str, config: Optional[CleanConfig] = CleanConfig()) -> StopwordSet:
    """Build a set from stopword-file lines; ``#`` lines and blanks are skipped.

    Entries get the same normalization ``clean`` applies to input text so
    membership is an exact string match.
    """
    words = set()
    for line in lines:
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(_normalize_token(word, config))
    return StopwordSet(frozenset(words), source_id)


def load_stopwords(path, config: Optional[CleanConfig] = CleanConfig(), source_id: Optional[str] = None) -> StopwordSet:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if source_id is None:
        source_id = path.name
        for line in lines:
            if line.startswith("# source_id:"):
                source_id = line.split(":", 1)[1].strip()
                break
    return stopwords_from_lines(lines, source_id, config)


@lru_cache(maxsize=4)
def default_stopwords(config: CleanConfig = CleanConfig()) -> StopwordSet:
    """The bundled Bangla stopword list."""
    text = resources.files("banglahate").joinpath("data/stopwords_bn.txt").read_text(encoding="utf-8")
    lines = text.splitlines()
    source_id = "stopwords_bn"
    for line in lines:
        if line.startswith("# source_id:"):
            source_id = line.split(":", 1)[1].strip()
            break
    return stopwords_from_lines(lines, source_id, config)


def remove_stopwords(tokens: Iterable[str], stops: StopwordSet) -> list:
    return [t for t in tokens if t not in stops.words]


def preprocess_text(text: str, config: CleanConfig = CleanConfig(), stops: StopwordSet = EMPTY_STOPWORDS) -> list:
    return remove_stopwords(tokenize(clean(text, config)), stops)


def preprocess_document(doc, config: CleanConfig = CleanConfig(), stops: StopwordSet = EMPTY_STOPWORDS) -> list:
    """clean -> tokenize -> remove_stopwords on ``doc.text``."""
    return preprocess_text(doc.text, config, stops)
