"""Chain completion of a poset at a finite horizon.

The completed carrier holds one element per base element (its principal
down-set) plus limit tokens for open-ended ascending chains that have no
upper bound in the seen prefix.  Tokens are canonicalized by their descriptor
(the union of the down-sets of the chain members) restricted to the horizon;
two generating chains receive one token exactly when they interleave.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .poset import Poset, PosetError


class CompletionError(ValueError):
    """Bad generating sequence or unusable horizon."""


@dataclass(frozen=True)
class CompletionElement:
    """A carrier element: an embedded base element or a limit token."""

    kind: str                      # "base" | "limit"
    ref: str                       # base id, or the canonical token name
    descriptor: frozenset          # prefix elements below the element
    display: str = ""

    @property
    def is_limit(self) -> bool:
        return self.kind == "limit"

    def serialize(self) -> dict:
        out = {"kind": self.kind, "ref": self.ref,
               "descriptor": sorted(self.descriptor)}
        if self.display:
            out["display"] = self.display
        return out


def token_name(chain: Iterable[str]) -> str:
    return "lim(" + ",".join(chain) + ")"


def chain_closure(poset: Poset, seq: Iterable[str], horizon: int) -> frozenset:
    """Prefix elements below some member of an ascending sequence."""
    seq = list(seq)
    if not seq:
        raise CompletionError("empty sequence has no closure")
    for a, b in zip(seq, seq[1:]):
        if not poset.leq(a, b):
            raise CompletionError(f"sequence not ascending at {a!r}, {b!r}")
    return poset.down_closure(seq, horizon)


class CompletedPoset:
    """Carrier of the chain completion seen through a horizon prefix."""

    def __init__(self, poset: Poset, horizon: int,
                 elements: list[CompletionElement]):
        self.poset = poset
        self.horizon = horizon
        self.elements = elements
        self._by_ref = {e.ref: e for e in elements}

    def embed(self, p: str) -> CompletionElement:
        """Image of a base element."""
        self.poset.index(p)
        return self._by_ref[p]

    def tokens(self) -> list[CompletionElement]:
        return [e for e in self.elements if e.is_limit]

    def leq(self, x: CompletionElement, y: CompletionElement) -> bool:
        """Order on the carrier.

        Base-base follows the poset; a base sits below a token when the
        token's generating chain dominates it; tokens never sit below bases,
        and token-token order is descriptor inclusion.
        """
        if not x.is_limit and not y.is_limit:
            return self.poset.leq(x.ref, y.ref)
        if not x.is_limit and y.is_limit:
            return x.ref in y.descriptor
        if x.is_limit and not y.is_limit:
            return False
        return x.descriptor <= y.descriptor

    def verify(self) -> list[str]:
        """Bounded checks: order axioms on the carrier, unique suprema for
        token-generating chains, and density of tokens over their chains."""
        problems = []
        els = self.elements
        for x in els:
            if not self.leq(x, x):
                problems.append(f"not reflexive at {x.ref}")
        for x in els:
            for y in els:
                if x is not y and self.leq(x, y) and self.leq(y, x):
                    problems.append(f"antisymmetry fails on {x.ref}, {y.ref}")
                for z in els:
                    if self.leq(x, y) and self.leq(y, z) and not self.leq(x, z):
                        problems.append(f"transitivity fails on {x.ref}, {y.ref}, {z.ref}")
        for tok in self.tokens():
            # at a finite horizon the truncated chain still has a top inside
            # the descriptor, so bounds are compared outside it
            ubs = [u for u in els
                   if (u.is_limit or u.ref not in tok.descriptor)
                   and all(self.leq(self._by_ref[c], u)
                           for c in tok.descriptor if c in self._by_ref)]
            least = [u for u in ubs if all(self.leq(u, v) for v in ubs)]
            if len(least) != 1 or least[0] is not tok:
                problems.append(f"token {tok.ref} is not the unique sup of its chain")
            for r in els:
                if not r.is_limit and self.leq(r, tok) and r is not tok:
                    if r.ref not in tok.descriptor:
                        problems.append(
                            f"{r.ref} below token {tok.ref} but below no chain member")
        return problems

    def to_json(self) -> dict:
        pre = self.poset.prefix(self.horizon)
        names = [e.ref for e in self.elements]
        covers = []
        for x in self.elements:
            for y in self.elements:
                if x is y or not self.leq(x, y):
                    continue
                if any(z is not x and z is not y
                       and self.leq(x, z) and self.leq(z, y)
                       for z in self.elements):
                    continue
                covers.append([x.ref, y.ref])
        return {"name": f"{self.poset.name}-completion",
                "elements": names, "covers": covers,
                "tokens": [e.serialize() for e in self.tokens()],
                "horizon": self.horizon, "base": pre}


def complete_finite(poset: Poset) -> CompletedPoset:
    """Chain completion of a finite poset: an isomorphic copy of it.

    Every ascending sequence stabilizes, so each chain closure is the
    principal down-set of its maximum and no tokens appear.
    """
    if not poset.finite:
        raise CompletionError("complete_finite needs a finite poset")
    n = poset.size
    els = [CompletionElement("base", p, poset.down_set(p, n))
           for p in poset.prefix(n)]
    return CompletedPoset(poset, n, els)


def complete_over(poset: Poset, members: Iterable[str],
                  horizon: int) -> CompletedPoset:
    """Adjoin suprema of ascending sequences drawn from a subset.

    Tokens are created for maximal chains inside the subset whose top has no
    strict upper bound in the prefix and is not family-confirmed maximal;
    chains dominated inside the prefix keep their sups in the base.  Token
    descriptors deduplicate interleaving chains.
    """
    pre = poset.prefix(horizon)
    sub = [p for p in pre if p in set(members)]
    els = [CompletionElement("base", p, poset.down_set(p, horizon)) for p in pre]
    if poset.finite:
        return CompletedPoset(poset, horizon, els)

    confirmed_max = frozenset()
    if poset.analytics.maximal is not None:
        confirmed_max = poset.analytics.maximal(poset, horizon)

    seen: dict[frozenset, CompletionElement] = {}
    for chain in poset._maximal_chains(sub):
        top = chain[-1]
        if len(chain) < 2 or top in confirmed_max:
            continue
        if any(poset.lt(top, u) for u in pre):
            continue
        desc = chain_closure(poset, chain, horizon)
        if desc in seen:
            continue
        display = ""
        if poset.analytics.limit_display is not None:
            display = poset.analytics.limit_display(tuple(chain)) or ""
        tok = CompletionElement("limit", token_name(chain), desc, display)
        seen[desc] = tok
    els.extend(seen[d] for d in sorted(seen, key=lambda s: sorted(s)))
    return CompletedPoset(poset, horizon, els)
