"""Writes a small lexical database in the classic WordNet on-disk layout.

The tables here are the ground truth that lexicon tests check the
parser against: noun and adjective synsets (offset -> word list),
antonym pointer pairs, and exception lines. ``write_lexical_database``
renders them into index.<pos>, data.<pos>, and <pos>.exc files,
complete with an indented license header like the real thing.
"""

from __future__ import annotations

from pathlib import Path

# offset -> words (data-file form, so markers like "(ip)" may appear)
NOUN_SYNSETS: dict[int, list[str]] = {
    100: ["suite", "bundle"],
    200: ["ticket"],
    300: ["noise"],
    400: ["price", "cost"],
    500: ["profit"],
    600: ["loss"],
    700: ["corpus"],
    800: ["glass"],
    850: ["glass", "tumbler"],
    900: ["box"],
    1000: ["quiz"],
    1100: ["church"],
    1200: ["wish"],
    1300: ["man"],
    1400: ["berry"],
    1500: ["child"],
    1600: ["tooth"],
    1700: ["datum"],
    1800: ["user"],
    1900: ["support"],
    2000: ["team"],
    2100: ["review"],
    2200: ["chat"],
    2300: ["email"],
    2400: ["agent"],
    2500: ["bot"],
    2600: ["feature"],
    2700: ["bug"],
    2800: ["crash"],
    2900: ["tax"],
    3000: ["buzz"],
    3100: ["ax", "axe"],
    3200: ["good"],
    3300: ["customer_service"],  # multiword: parser must skip the lemma
}

ADJ_SYNSETS: dict[int, list[str]] = {
    100: ["good"],
    200: ["bad"],
    300: ["happy"],
    400: ["fast", "quick"],
    500: ["slow"],
    600: ["late"],
    700: ["great"],
    800: ["simple"],
    900: ["nice"],
    1000: ["expensive"],
    1100: ["cheap"],
    1200: ["able"],
    1300: ["galore(ip)"],  # syntactic marker: parser must strip it
}

# unordered antonym pairs; rendered as "!" pointers in both directions
NOUN_ANTONYMS: list[tuple[int, int]] = [(500, 600)]  # profit / loss
ADJ_ANTONYMS: list[tuple[int, int]] = [(100, 200), (400, 500), (1000, 1100)]

# exception lines as (inflected, [bases...]); some bases are unknown on
# purpose, to exercise the "first known base" selection
NOUN_EXCEPTIONS: list[tuple[str, list[str]]] = [
    ("children", ["child"]),
    ("corpora", ["corpus"]),
    ("data", ["datum"]),
    ("teeth", ["tooth"]),
    ("men", ["man"]),
    ("oxen", ["ox"]),  # ox is not in the lexicon: line must be dropped
    ("axes", ["axis", "ax"]),  # axis unknown, ax known: ax wins
    ("geese", ["goose"]),  # dropped too
]
ADJ_EXCEPTIONS: list[tuple[str, list[str]]] = [
    ("better", ["good"]),
    ("best", ["good"]),
    ("happier", ["happy"]),
    ("happiest", ["happy"]),
    ("worse", ["bad"]),
    ("worst", ["bad"]),
]

# satellite-adjective synsets get ss_type "s" in the data file
ADJ_SATELLITES = {1300}

_HEADER = (
    "  1 This is a generated test lexical database.\n"
    "  2 It follows the classic index/data/exc layout.\n"
)


def _plain(word: str) -> str:
    return word.split("(", 1)[0]


def _index_entries(synsets: dict[int, list[str]]) -> dict[str, list[int]]:
    entries: dict[str, list[int]] = {}
    for offset in sorted(synsets):
        for word in synsets[offset]:
            entries.setdefault(_plain(word), []).append(offset)
    return entries


def _render_index(synsets: dict[int, list[str]], tag: str) -> str:
    lines = [_HEADER.rstrip("\n")]
    for lemma, offsets in sorted(_index_entries(synsets).items()):
        offs = " ".join(f"{o:08d}" for o in offsets)
        lines.append(f"{lemma} {tag} {len(offsets)} 1 @ {len(offsets)} 0 {offs}")
    return "\n".join(lines) + "\n"


def _render_data(
    synsets: dict[int, list[str]],
    tag: str,
    antonyms: list[tuple[int, int]],
    satellites: set[int] = frozenset(),
) -> str:
    antonym_targets: dict[int, list[int]] = {}
    for a, b in antonyms:
        antonym_targets.setdefault(a, []).append(b)
        antonym_targets.setdefault(b, []).append(a)

    offsets = sorted(synsets)
    lines = [_HEADER.rstrip("\n")]
    for offset in offsets:
        words = synsets[offset]
        word_part = " ".join(f"{word} 0" for word in words)
        pointers = [("!", target, tag) for target in antonym_targets.get(offset, [])]
        # one non-antonym pointer for realism; it must be ignored
        other = offsets[0] if offset != offsets[0] else offsets[-1]
        pointers.append(("@", other, tag))
        pointer_part = " ".join(f"{sym} {tgt:08d} {ptag} 0000" for sym, tgt, ptag in pointers)
        ss_type = "s" if offset in satellites else tag
        lines.append(
            f"{offset:08d} 06 {ss_type} {len(words):02x} {word_part} "
            f"{len(pointers):03d} {pointer_part} | generated gloss"
        )
    return "\n".join(lines) + "\n"


def _render_exceptions(exceptions: list[tuple[str, list[str]]]) -> str:
    lines = [f"{inflected} {' '.join(bases)}" for inflected, bases in exceptions]
    return "\n".join(lines) + "\n"


def write_lexical_database(root: Path) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    (root / "index.noun").write_text(_render_index(NOUN_SYNSETS, "n"), encoding="utf-8")
    (root / "index.adj").write_text(_render_index(ADJ_SYNSETS, "a"), encoding="utf-8")
    (root / "data.noun").write_text(
        _render_data(NOUN_SYNSETS, "n", NOUN_ANTONYMS), encoding="utf-8"
    )
    (root / "data.adj").write_text(
        _render_data(ADJ_SYNSETS, "a", ADJ_ANTONYMS, ADJ_SATELLITES), encoding="utf-8"
    )
    (root / "noun.exc").write_text(_render_exceptions(NOUN_EXCEPTIONS), encoding="utf-8")
    (root / "adj.exc").write_text(_render_exceptions(ADJ_EXCEPTIONS), encoding="utf-8")
    return root


def expected_noun_lemmas() -> set[str]:
    """Single-word noun lemmas the parser should accept."""
    return {
        _plain(word)
        for words in NOUN_SYNSETS.values()
        for word in words
        if "_" not in word
    }


def expected_adj_lemmas() -> set[str]:
    return {_plain(word) for words in ADJ_SYNSETS.values() for word in words}
