"""Checker results and exactness bookkeeping shared by the derived layer."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..linalg import Mat

__all__ = ["Failure", "Verdict", "NotExact", "Mismatch", "NotSES", "exactness_failures"]


class NotExact(RuntimeError):
    """A sequence that must be exact is not; names the failing spot."""


class Mismatch(RuntimeError):
    """Two sides of a compatibility isomorphism disagree; names the degree."""


class NotSES(ValueError):
    """The input maps do not form a short exact sequence."""


@dataclass(frozen=True)
class Failure:
    spot: str
    detail: str


@dataclass
class Verdict:
    ok: bool
    failures: list[Failure] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @classmethod
    def of(cls, failures: list[Failure], **data) -> "Verdict":
        return cls(not failures, list(failures), data)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "failures": [{"spot": f.spot, "detail": f.detail} for f in self.failures]}

    def raise_if_failed(self, exc=NotExact):
        if not self.ok:
            f = self.failures[0]
            raise exc(f"{f.spot}: {f.detail}")
        return self


def exactness_failures(labels: list[str], dims: list[int], maps: list[Mat],
                       start_zero: bool = True, end_zero: bool = False) -> list[Failure]:
    """Rank test of exactness for T_0 -> T_1 -> ... with maps[k]: T_k -> T_{k+1}.

    Exactness is checked at every interior term; ``start_zero`` additionally
    demands injectivity of the first map and ``end_zero`` surjectivity of the
    last one.
    """
    out: list[Failure] = []
    ranks = [m.rank() if m.rows and m.cols else 0 for m in maps]
    if start_zero and maps and ranks[0] != dims[0]:
        out.append(Failure(labels[0], f"first map has rank {ranks[0]} on a term of dim {dims[0]}"))
    for k in range(1, len(maps)):
        a, b = maps[k - 1], maps[k]
        if a.rows and a.cols and b.rows and not (b @ a).is_zero():
            out.append(Failure(labels[k], "composite of consecutive maps is nonzero"))
        elif ranks[k - 1] + ranks[k] != dims[k]:
            out.append(Failure(labels[k], f"rank in {ranks[k - 1]} + rank out {ranks[k]} != dim {dims[k]}"))
    if end_zero and maps and ranks[-1] != dims[-1]:
        out.append(Failure(labels[-1], f"last map has rank {ranks[-1]} onto a term of dim {dims[-1]}"))
    return out
