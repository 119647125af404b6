"""Rank candidate source languages for a transfer target."""

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import EmptyCandidatesError, UnknownLanguageError
from .metrics import DistanceMatrix, similarity_lookup

__all__ = ["RankedEntry", "RankedList", "rank_sources", "best_source"]


class RankedEntry(NamedTuple):
    source: str
    value: float
    rank: int


@dataclass(frozen=True)
class RankedList:
    target: str
    metric_provenance: str
    direction: str
    entries: tuple
    excluded: tuple = ()

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "metric": self.metric_provenance,
            "direction": self.direction,
            "entries": [e._asdict() for e in self.entries],
            "excluded": [{"source": c, "reason": r} for c, r in self.excluded],
        }


def rank_sources(m: DistanceMatrix, target: str, candidates: Optional[list] = None) -> RankedList:
    """Order candidate sources best-first for ``target``.

    Values are read as ``cell(row=source, column=target)``. Distances rank
    ascending, similarities descending; equal values fall back to the
    language code, so the result does not depend on candidate order.
    Candidates whose cell is missing are listed in ``excluded``. The target
    itself is silently dropped from the candidates.
    """
    m.index(target)
    if candidates is None:
        candidates = list(m.languages)
    for c in candidates:
        if c not in m.languages:
            raise UnknownLanguageError(c, m.languages)

    scored = []
    excluded = []
    for c in sorted(set(candidates)):
        if c == target:
            continue
        v = similarity_lookup(m, c, target)
        if v is None:
            excluded.append((c, "missing-cell"))
        else:
            scored.append((c, v))
    if not scored:
        raise EmptyCandidatesError(f"no rankable source for target {target!r}")

    if m.kind == "distance":
        direction = "ascending-distance"
        scored.sort(key=lambda cv: (cv[1], cv[0]))
    else:
        direction = "descending-similarity"
        scored.sort(key=lambda cv: (-cv[1], cv[0]))
    entries = tuple(RankedEntry(c, v, i) for i, (c, v) in enumerate(scored, start=1))
    return RankedList(target, m.provenance, direction, entries, tuple(excluded))


def best_source(m: DistanceMatrix, target: str, candidates: Optional[list] = None) -> tuple:
    top = rank_sources(m, target, candidates).entries[0]
    return top.source, top.value
