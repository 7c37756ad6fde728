"""Weighted collaboration matrix and the binarized coauthorship network."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np


class CollaborationMatrix:
    """Sparse symmetric author x author collaboration counts.

    Authors are dense integer ids starting at 0. ``totals[i]`` is the row
    sum ``k_i`` (accumulated collaborations) and is kept in step with the
    map on every update.
    """

    def __init__(self, capacity: int = 1024) -> None:
        self._rows: list[dict[int, int]] = []
        self._totals = np.zeros(max(capacity, 1), dtype=np.int64)

    def __len__(self) -> int:
        return len(self._rows)

    def add_author(self) -> int:
        aid = len(self._rows)
        self._rows.append({})
        if aid >= self._totals.size:
            grown = np.zeros(self._totals.size * 2, dtype=np.int64)
            grown[: self._totals.size] = self._totals
            self._totals = grown
        return aid

    def _check(self, aid: int) -> None:
        if not 0 <= aid < len(self._rows):
            raise KeyError(f"unknown author {aid}")

    @property
    def totals(self) -> np.ndarray:
        """Read-only view of ``k_i`` for every registered author."""
        view = self._totals[: len(self._rows)]
        view.flags.writeable = False
        return view

    def total(self, aid: int) -> int:
        self._check(aid)
        return int(self._totals[aid])

    def weight(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return self._rows[a].get(b, 0)

    def neighbors(self, aid: int) -> dict[int, int]:
        self._check(aid)
        return dict(self._rows[aid])

    def increment(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError("collaboration matrix has no diagonal")
        self._check(a)
        self._check(b)
        self._rows[a][b] = self._rows[a].get(b, 0) + 1
        self._rows[b][a] = self._rows[b].get(a, 0) + 1
        self._totals[a] += 1
        self._totals[b] += 1

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Unordered pairs ``(i, j, weight)`` with ``i < j``, sorted."""
        for i, row in enumerate(self._rows):
            for j in sorted(row):
                if i < j:
                    yield i, j, row[j]

    def is_consistent(self) -> bool:
        for i, row in enumerate(self._rows):
            if i in row or sum(row.values()) != self._totals[i]:
                return False
            if any(self._rows[j].get(i) != w for j, w in row.items()):
                return False
        return True


def record_team(matrix: CollaborationMatrix, team: Sequence[int] | "object") -> None:
    """Add one collaboration to every unordered pair of the team."""
    members = list(getattr(team, "member_ids", team))
    if len(set(members)) != len(members):
        raise ValueError(f"team members are not distinct: {members}")
    for x in range(len(members)):
        for y in range(x + 1, len(members)):
            matrix.increment(members[x], members[y])


def collaborator_count(matrix: CollaborationMatrix, author_id: int) -> int:
    """Distinct coauthors (degree in the binarized network)."""
    matrix._check(author_id)
    return len(matrix._rows[author_id])


def productivity(registry, author_id: int) -> int:
    """Number of papers listing the author."""
    return len(registry[author_id].paper_ids)


def collaborators_from_teams(teams: Iterable[Sequence[int]], n_authors: int) -> np.ndarray:
    """Distinct-coauthor counts rebuilt from team lists alone."""
    partners: list[set[int]] = [set() for _ in range(n_authors)]
    for team in teams:
        for a in team:
            partners[a].update(team)
    return np.array([len(s) - (1 if i in s else 0) for i, s in enumerate(partners)], dtype=np.int64)
