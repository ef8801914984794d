"""Points of the limit space as descending atom paths.

A path prefix walks parent to child through consecutive levels.  Its type
sequence weakly ascends; a stabilized tail names an ordinary element, while
a strictly climbing tail along a poset with infinite ascents approximates a
completion token rather than any element.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Optional

from .completion import token_name
from .skeleton import SkeletonTree


class PointError(ValueError):
    """A path request that the skeleton cannot satisfy."""


@dataclass(frozen=True)
class PathPrefix:
    tree: SkeletonTree
    nodes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.nodes:
            raise PointError("a path prefix needs at least one node")
        for (a_lvl, a_ix), (b_lvl, b_ix) in zip(self.nodes, self.nodes[1:]):
            if b_lvl != a_lvl + 1:
                raise PointError("path levels must be consecutive")
            s, e = self.tree.children_span(a_lvl, a_ix)
            if not s <= b_ix < e:
                raise PointError(f"{b_lvl}.{b_ix} is not a child of "
                                 f"{a_lvl}.{a_ix}")

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def start_level(self) -> int:
        return self.nodes[0][0]

    @property
    def end(self) -> tuple[int, int]:
        return self.nodes[-1]

    def type_ids(self) -> tuple[str, ...]:
        poset = self.tree.poset
        out = []
        for lvl, ix in self.nodes:
            out.append(poset.id_at(self.tree.level(lvl).types[ix]))
        return tuple(out)

    def extended(self, child_index: int) -> "PathPrefix":
        lvl, _ = self.end
        return PathPrefix(self.tree, self.nodes + ((lvl + 1, child_index),))

    def serialize(self) -> dict:
        return {"nodes": [list(n) for n in self.nodes],
                "types": list(self.type_ids())}


def ancestry(tree: SkeletonTree, level: int, index: int) -> PathPrefix:
    """The maximal parent chain ending at the given node."""
    chain = [(level, index)]
    lvl, ix = level, index
    while lvl > 1:
        p = tree.level(lvl).parent[ix]
        if p is None:
            break
        lvl, ix = lvl - 1, p
        chain.append((lvl, ix))
    return PathPrefix(tree, tuple(reversed(chain)))


def realize_chain(tree: SkeletonTree, chain: list[str]) -> PathPrefix:
    """Find a path whose consecutive types are the given ascending chain.

    The path starts at the lowest level where every chain member is already
    enumerated in time, takes the first atom typed by the first member, and
    then always the first matching child.
    """
    if not chain:
        raise PointError("empty chain")
    poset = tree.poset
    for a, b in zip(chain, chain[1:]):
        if not poset.lt(a, b):
            raise PointError(f"chain is not strictly ascending at {a!r}, {b!r}")
    idx = [poset.index(c) for c in chain]
    start = max(ix - off for off, ix in enumerate(idx))
    start = max(start, 1)
    need = start + len(chain) - 1
    if need > tree.depth:
        raise PointError(f"chain needs depth {need}, tree has {tree.depth}")
    first = tree.level(start).type_mask(idx[0])
    if not first:
        raise PointError(f"no atom of type {chain[0]!r} at level {start}")
    ix0 = (first & -first).bit_length() - 1
    nodes = [(start, ix0)]
    for step, want in enumerate(idx[1:], 1):
        lvl, cur = nodes[-1]
        s, e = tree.children_span(lvl, cur)
        nxt = tree.level(lvl + 1)
        hit = next((j for j in range(s, e) if nxt.types[j] == want), None)
        if hit is None:
            raise PointError(f"no child of type {chain[step]!r} under "
                             f"{lvl}.{cur}")
        nodes.append((lvl + 1, hit))
    return PathPrefix(tree, tuple(nodes))


@dataclass(frozen=True)
class PointLabel:
    kind: str                  # "clean" | "limit" | "undetermined"
    value: str = ""
    detail: str = ""

    def serialize(self) -> dict:
        return {"kind": self.kind, "value": self.value, "detail": self.detail}


def label_prefix(path: PathPrefix) -> PointLabel:
    """Classify what a finite path prefix is converging to.

    A stabilized tail (at least half the path, minimum two entries) names
    that element.  A strictly climbing path of length three or more along a
    poset whose ascending chains are known or suspected infinite points at a
    completion token; posets with stabilizing ascents never get that label.
    """
    types = path.type_ids()
    d = len(types)
    tail = max(2, ceil(d / 2))
    if d >= tail and len(set(types[-tail:])) == 1:
        return PointLabel("clean", types[-1],
                          f"type constant over the last {tail} levels")
    poset = path.tree.poset
    strict = all(poset.lt(a, b) for a, b in zip(types, types[1:]))
    if strict and d >= 3:
        acc = True if poset.finite else poset.analytics.acc
        if acc is not True:
            display: Optional[str] = None
            if poset.analytics.limit_display is not None:
                display = poset.analytics.limit_display(types)
            if display is None:
                display = token_name(types)
            return PointLabel("limit", display,
                              f"strictly ascending through {d} levels")
        return PointLabel("undetermined", "",
                          "ascending, but all ascents here stabilize")
    if strict:
        return PointLabel("undetermined", "", "ascending but too short")
    return PointLabel("undetermined", "", "no stabilized tail yet")
