import hashlib
import json

import numpy as np

STREAM_TAGS: dict[str, int] = {
    'data': 1,
    'test': 2,
    'noise': 3,
    'clean': 4,
    'audit': 5,
    'probe': 6,
    'biased': 7,
}


def _tag_words(tag: str) -> list[int]:
    """Maps a stream tag (optionally 'biased@<rho>') onto integer words."""
    name, _, suffix = tag.partition('@')
    words = [STREAM_TAGS[name]]
    if suffix:
        words.append(int(round(float(suffix) * 1_000_000)))
    return words


def derive_seed(master_seed: int, level: int, seed_index: int, tag: str) -> int:
    """Independent integer seed for one (level, seed, tag) stream."""
    sequence = np.random.SeedSequence([master_seed, level, seed_index, *_tag_words(tag)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def fingerprint(document: dict) -> str:
    """SHA-256 of the canonical JSON form of a document."""
    payload = json.dumps(document, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()
