"""Append-only persistent cache for length values.

One JSON record per line, keyed by (setup fingerprint, grid cell), each
carrying a CRC of its own payload.  Corrupt or truncated records are
skipped with a warning; misses are silent.  Appends from one process are
safe; there is no cross-process locking.
"""

from __future__ import annotations

import json
import os
import zlib


def _crc(fp: str, cell, value: int) -> int:
    blob = f"{fp}|{list(cell)}|{value}".encode()
    return zlib.crc32(blob)


class LengthCache:
    def __init__(self, path: str):
        self.path = path
        self.records: dict[tuple, int] = {}
        self.warnings: list[str] = []
        self.hits: list[tuple] = []
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    fp = rec["fp"]
                    cell = (rec["cell"][0], rec["cell"][1], tuple(rec["cell"][2]))
                    value = int(rec["v"])
                    if rec["crc"] != _crc(fp, _flat(cell), value):
                        raise ValueError("checksum mismatch")
                except (ValueError, KeyError, TypeError, IndexError) as exc:
                    self.warnings.append(f"{self.path}:{lineno}: skipped corrupt record ({exc})")
                    continue
                self.records[(fp, cell)] = value

    def get(self, fp: str, cell) -> int | None:
        value = self.records.get((fp, cell))
        if value is not None:
            self.hits.append((fp, cell, value))
        return value

    def put(self, fp: str, cell, value: int):
        key = (fp, cell)
        if key in self.records:
            return
        self.records[key] = value
        os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
        rec = {"fp": fp, "cell": _flat(cell), "v": value, "crc": _crc(fp, _flat(cell), value)}
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _flat(cell) -> list:
    return [cell[0], cell[1], list(cell[2])]
