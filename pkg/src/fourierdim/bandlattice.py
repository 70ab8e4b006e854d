"""Finite incidence models for the annihilator ("perp") calculus.

An IncidenceModel is an nx-by-ny matrix of nonnegative pairings between two
index families.  perp maps a subset of one side to the subset of the other
side pairing to exactly zero with every member.  The lattice identities
checked here (double-perp containment, antitonicity, triple-perp collapse,
and the two de-Morgan style family laws) hold for any Galois connection and
are verified exactly, with random counterexample search as the test harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .measures import Atomic, MeasureError

__all__ = [
    "IncidenceModel",
    "SubsetPair",
    "perp",
    "check_perp_properties",
    "quasiconvex_weights",
    "decompose_atomic",
]

_SIDES = ("left", "right")


@dataclass(frozen=True)
class IncidenceModel:
    """Nonnegative pairing matrix between a left and a right index family."""

    nx: int
    ny: int
    pairing: tuple

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise MeasureError("model needs at least one index on each side")
        rows = tuple(tuple(float(x) for x in row) for row in self.pairing)
        if len(rows) != self.nx or any(len(r) != self.ny for r in rows):
            raise MeasureError(
                f"pairing must be {self.nx} x {self.ny}")
        if any(x < 0 or not math.isfinite(x) for r in rows for x in r):
            raise MeasureError("pairings must be finite and nonnegative")
        object.__setattr__(self, "pairing", rows)

    @classmethod
    def random(cls, rng, nx: int, ny: int, zero_prob: float = 0.5):
        """Random model: each pairing is 0 with probability zero_prob."""
        rows = tuple(
            tuple(0.0 if rng.random() < zero_prob else float(rng.integers(1, 10))
                  for _ in range(ny))
            for _ in range(nx))
        return cls(nx, ny, rows)


@dataclass(frozen=True)
class SubsetPair:
    """A subset of one side of a model: side is 'left' or 'right'."""

    side: str
    members: frozenset

    def __post_init__(self):
        if self.side not in _SIDES:
            raise MeasureError(f"side must be one of {_SIDES}")
        object.__setattr__(self, "members", frozenset(int(i) for i in self.members))


def _check_range(model: IncidenceModel, d: SubsetPair) -> None:
    size = model.nx if d.side == "left" else model.ny
    if any(i < 0 or i >= size for i in d.members):
        raise MeasureError(f"subset indices out of range for side {d.side}")


def perp(model: IncidenceModel, d: SubsetPair) -> SubsetPair:
    """Elements of the opposite side pairing to exactly 0.0 with all of d.

    The empty subset maps to the full opposite side.
    """
    _check_range(model, d)
    other = "right" if d.side == "left" else "left"
    size = model.ny if d.side == "left" else model.nx
    if d.side == "left":
        def pair(i, j):
            return model.pairing[i][j]
    else:
        def pair(i, j):
            return model.pairing[j][i]
    members = frozenset(
        j for j in range(size)
        if all(pair(i, j) == 0.0 for i in d.members))
    return SubsetPair(other, members)


def check_perp_properties(model: IncidenceModel, trials: int, rng) -> dict:
    """Random exact verification of the five lattice laws of perp.

    Per trial: draw subsets D, D1 subset D2 and a family of 2 or 3 subsets,
    all on a random side, and check

      i   D is contained in perp(perp(D)),
      ii  D1 subset D2 implies perp(D2) subset perp(D1),
      iii perp(perp(perp(D))) == perp(D),
      iv  the union of the perps is contained in the perp of the
          family's intersection,
      v   the intersection of the perps equals the perp of the union.

    Returns violation counts per law and the first counterexample found.
    """
    counts = {"double_perp": 0, "antitone": 0, "triple_perp": 0,
              "family_intersection": 0, "family_union": 0}
    first = None

    def draw(side):
        size = model.nx if side == "left" else model.ny
        members = frozenset(int(i) for i in range(size) if rng.random() < 0.5)
        return SubsetPair(side, members)

    for t in range(trials):
        side = _SIDES[int(rng.integers(0, 2))]
        size = model.nx if side == "left" else model.ny

        d = draw(side)
        dpp = perp(model, perp(model, d))
        if not d.members <= dpp.members:
            counts["double_perp"] += 1
            first = first or ("double_perp", t, d)

        d2 = draw(side)
        d1 = SubsetPair(side, frozenset(
            i for i in d2.members if rng.random() < 0.5))
        if not perp(model, d2).members <= perp(model, d1).members:
            counts["antitone"] += 1
            first = first or ("antitone", t, (d1, d2))

        p = perp(model, d)
        if perp(model, perp(model, p)).members != p.members:
            counts["triple_perp"] += 1
            first = first or ("triple_perp", t, d)

        fam = [draw(side) for _ in range(2 + int(rng.integers(0, 2)))]
        perps = [perp(model, f).members for f in fam]
        inter = frozenset(range(size))
        union = frozenset()
        for f in fam:
            inter &= f.members
            union |= f.members
        got_union_of_perps = frozenset().union(*perps)
        if not got_union_of_perps <= perp(model, SubsetPair(side, inter)).members:
            counts["family_intersection"] += 1
            first = first or ("family_intersection", t, fam)
        inter_of_perps = perps[0]
        for pset in perps[1:]:
            inter_of_perps = inter_of_perps & pset
        if inter_of_perps != perp(model, SubsetPair(side, union)).members:
            counts["family_union"] += 1
            first = first or ("family_union", t, fam)

    return {"trials": trials, "violations": counts,
            "total_violations": sum(counts.values()),
            "first_counterexample": repr(first) if first else None}


def quasiconvex_weights(constants) -> tuple:
    """Weights p_k proportional to 1 / (2^k C_k), k counted from 1.

    Each C_k must be >= 1.  The weights sum to 1, and p_k C_k is
    proportional to 2^-k, so the mixed constant sum_k p_k C_k stays finite
    even when the C_k are unbounded.
    """
    cs = tuple(float(c) for c in constants)
    if not cs:
        raise MeasureError("need at least one constant")
    if any(not math.isfinite(c) or c < 1.0 for c in cs):
        raise MeasureError("constants must be finite and >= 1")
    raw = tuple(1.0 / (2.0 ** (k + 1) * c) for k, c in enumerate(cs))
    total = math.fsum(raw)
    return tuple(a / total for a in raw)


def decompose_atomic(mu: Atomic, family) -> tuple:
    """Split mu into the part supported on the family's atoms and the rest.

    family is an iterable of Atomic measures; E is the sorted tuple of
    positions of mu that some family member charges.  Returns (mu_on_E,
    mu_off_E, E); either part may be the empty (zero) measure.  The split is
    an exact partition: weights are moved, never recomputed.
    """
    if not isinstance(mu, Atomic):
        raise MeasureError("decompose_atomic needs an atomic measure")
    covered = set()
    for member in family:
        if not isinstance(member, Atomic):
            raise MeasureError("family members must be atomic measures")
        covered.update(pos for pos, _ in member.atoms)
    on = tuple((pos, w) for pos, w in mu.atoms if pos in covered)
    off = tuple((pos, w) for pos, w in mu.atoms if pos not in covered)
    e = tuple(sorted(pos for pos, _ in on))
    return Atomic(on), Atomic(off), e
