"""Charged workspace accounting.

Storage an algorithm would keep on its work tape (separator sets, mark
arrays, counters, stored line coordinates, live recursion frames) is charged
in machine words. Subroutines that are log-space in the model, such as
undirected connectivity, run as plain searches but bill a fixed token cost
for their whole lifetime. Read-only input and time-saving caches are free.
"""

from __future__ import annotations

import json
import math
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field

from .errors import MeterUnderflow


@dataclass(frozen=True)
class ChargePolicy:
    word_bits: int = 64
    n: int = 2

    @property
    def oracle_charge(self) -> int:
        bits = max(1, math.ceil(math.log2(max(self.n, 2))))
        return max(1, math.ceil(bits / self.word_bits))

    def words_for_ids(self, count: int) -> int:
        """Words needed to hold ``count`` vertex ids."""
        return count * self.oracle_charge


@dataclass
class WorkspaceMeter:
    policy: ChargePolicy = field(default_factory=ChargePolicy)
    current_words: int = 0
    peak_words: int = 0
    charge_log: list = field(default_factory=list)
    keep_log: bool = True
    _outstanding: dict = field(default_factory=dict, repr=False)
    _phase: str = "main"

    def charge(self, label: str, words: int, phase: str | None = None) -> None:
        if words < 0:
            raise ValueError("negative charge")
        self._outstanding[label] = self._outstanding.get(label, 0) + words
        self.current_words += words
        if self.current_words > self.peak_words:
            self.peak_words = self.current_words
        if self.keep_log:
            self.charge_log.append((label, words, phase or self._phase))

    def release(self, label: str, words: int, phase: str | None = None) -> None:
        if words < 0:
            raise ValueError("negative release")
        held = self._outstanding.get(label, 0)
        if words > held:
            raise MeterUnderflow(f"release of {words} words for {label!r} exceeds outstanding {held}")
        if held == words:
            del self._outstanding[label]
        else:
            self._outstanding[label] = held - words
        self.current_words -= words
        if self.keep_log:
            self.charge_log.append((label, -words, phase or self._phase))

    @contextmanager
    def scope(self, label: str, words: int):
        self.charge(label, words)
        try:
            yield
        finally:
            self.release(label, words)

    @contextmanager
    def phase(self, name: str):
        prev, self._phase = self._phase, name
        try:
            yield
        finally:
            self._phase = prev

    def resize(self, label: str, old: int, new: int) -> None:
        """Grow or shrink a live allocation."""
        if new > old:
            self.charge(label, new - old)
        elif new < old:
            self.release(label, old - new)

    @property
    def oracle_charge(self) -> int:
        return self.policy.oracle_charge

    def dump_jsonl(self) -> str:
        return "\n".join(
            json.dumps({"label": label, "words": words, "phase": phase})
            for label, words, phase in self.charge_log
        )


def null_meter(n: int = 2) -> WorkspaceMeter:
    return WorkspaceMeter(ChargePolicy(n=n), keep_log=False)


def charged_connectivity(g, u: int, v: int, meter: WorkspaceMeter,
                         removed=frozenset(), alive=None) -> bool:
    """Whether ``u`` and ``v`` are connected in ``g`` minus ``removed``.

    Bills ``oracle_charge`` words for the call, regardless of the search's
    real footprint. ``alive`` optionally restricts the vertex universe.
    """
    from .graph import as_undirected

    ug = as_undirected(g)
    with meter.scope("oracle:connectivity", meter.oracle_charge):
        if u in removed or v in removed:
            return False
        if u == v:
            return True
        seen = {u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in ug.adj[x]:
                if y in seen or y in removed or (alive is not None and y not in alive):
                    continue
                if y == v:
                    return True
                seen.add(y)
                queue.append(y)
        return False
