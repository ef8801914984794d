"""Upper sets of a poset, stored by their minimal antichain.

A TypeSet denotes the upward closure of its antichain.  Normalization keeps
the minimal elements only, sorted by enumeration index, so equal upper sets
compare equal structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .poset import Poset


@dataclass(frozen=True)
class TypeSet:
    """An upper set represented by its sorted minimal antichain."""

    poset: Poset
    min_antichain: tuple[str, ...]

    @classmethod
    def of(cls, poset: Poset, members: Iterable[str]) -> "TypeSet":
        """Normalize an arbitrary generating set to its minimal antichain."""
        ms = set(members)
        for p in ms:
            poset.index(p)
        mins = [p for p in ms if not any(poset.lt(q, p) for q in ms)]
        mins.sort(key=poset.index)
        return cls(poset, tuple(mins))

    @classmethod
    def empty(cls, poset: Poset) -> "TypeSet":
        return cls(poset, ())

    def __bool__(self) -> bool:
        return bool(self.min_antichain)

    def is_empty(self) -> bool:
        return not self.min_antichain

    def contains(self, p: str) -> bool:
        """Is p in the denoted upper set?"""
        self.poset.index(p)
        return any(self.poset.leq(g, p) for g in self.min_antichain)

    def union(self, other: "TypeSet") -> "TypeSet":
        if other.poset is not self.poset:
            raise ValueError("type sets over different posets")
        return TypeSet.of(self.poset, self.min_antichain + other.min_antichain)

    def trim_generator(self) -> str | None:
        """The single generator if this is a principal upper set, else None."""
        if len(self.min_antichain) == 1:
            return self.min_antichain[0]
        return None

    def members(self, horizon: int) -> frozenset:
        """The denoted upper set restricted to the enumeration prefix."""
        return self.poset.up_closure(self.min_antichain, horizon)

    def serialize(self) -> list[str]:
        return list(self.min_antichain)

    def __le__(self, other: "TypeSet") -> bool:
        """Denoted-set inclusion."""
        return all(other.contains(g) for g in self.min_antichain)

    def __repr__(self) -> str:
        return f"TypeSet({', '.join(self.min_antichain) or '∅'})"
