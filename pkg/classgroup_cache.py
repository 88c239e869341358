"""
On-disk cache of class group invariant factors.

One record per line, `D<TAB>d1,d2,...`, appended in any order. Readers take
a shared lock and the single writer an exclusive one. A record that does
not parse is logged and skipped, so the group gets recomputed.
"""
from __future__ import annotations

import fcntl
import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterator

from constants import CACHE_ENV_VAR
from data_structures.hash_table import LinearProbeTable


class CorruptRecordError(ValueError):
    pass


def parse_record(line: str) -> tuple[int, tuple[int, ...]]:
    """
    :raises CorruptRecordError: for anything but a well-formed record.
    """
    try:
        d_text, factors_text = line.rstrip("\n").split("\t")
        D = int(d_text)
        factors = tuple(int(x) for x in factors_text.split(",")) if factors_text else ()
    except ValueError as e:
        raise CorruptRecordError(f"unreadable record {line!r}") from e
    if D == 0 or D % 4 not in (0, 1):
        raise CorruptRecordError(f"{D} is not a discriminant")
    if any(d < 2 for d in factors) or any(b % a for a, b in zip(factors, factors[1:])):
        raise CorruptRecordError(f"{factors} are not invariant factors")
    return D, factors


def format_record(D: int, factors) -> str:
    return f"{D}\t{','.join(str(d) for d in factors)}\n"


class ClassGroupCache:

    def __init__(self, path: str | os.PathLike) -> None:
        self.path = Path(path)
        self._table: LinearProbeTable[int, tuple[int, ...]] = LinearProbeTable()
        self.load()

    @contextmanager
    def _locked(self, mode: str, lock: int) -> Iterator:
        with open(self.path, mode) as f:
            fcntl.flock(f, lock)
            try:
                yield f
            finally:
                fcntl.flock(f, fcntl.LOCK_UN)

    def load(self) -> None:
        self._table = LinearProbeTable()
        if not self.path.exists():
            return
        with self._locked("r", fcntl.LOCK_SH) as f:
            for line in f:
                if not line.strip():
                    continue
                try:
                    D, factors = parse_record(line)
                except CorruptRecordError as e:
                    logging.warning(f"Ignoring cache record: {e}")
                    continue
                self._table[D] = factors
        logging.info(f"Loaded {len(self._table)} class groups from {self.path}")

    def get(self, D: int) -> tuple[int, ...] | None:
        factors = self._table.get(D)
        logging.debug(f"Cache {'hit' if factors is not None else 'miss'} for D = {D}")
        return factors

    def put(self, D: int, factors) -> None:
        factors = tuple(factors)
        if self._table.get(D) == factors:
            return
        self._table[D] = factors
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self._locked("a", fcntl.LOCK_EX) as f:
            f.write(format_record(D, factors))

    def entries(self) -> list[tuple[int, tuple[int, ...]]]:
        return sorted(self._table.items())

    def __len__(self) -> int:
        return len(self._table)

    def verify(self, compute: Callable[[int], list[int]]) -> list[tuple[int, tuple[int, ...], tuple[int, ...]]]:
        """
        Recompute every cached group; returns (D, stored, computed) for each
        disagreement.
        """
        mismatches = []
        for D, stored in self.entries():
            computed = tuple(compute(D))
            if computed != stored:
                logging.warning(f"Cache record for D = {D} says {stored}, recomputed {computed}")
                mismatches.append((D, stored, computed))
        return mismatches

    def clear(self) -> None:
        with self._locked("w", fcntl.LOCK_EX):
            pass
        self._table = LinearProbeTable()


_active: ClassGroupCache | None = None


def configure_cache(path: str | os.PathLike | None = None) -> ClassGroupCache | None:
    """Attach a disk cache; an explicit path wins over the environment."""
    global _active
    path = path or os.environ.get(CACHE_ENV_VAR)
    _active = ClassGroupCache(path) if path else None
    return _active


def active_cache() -> ClassGroupCache | None:
    return _active
