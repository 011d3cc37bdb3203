"""HAP1 instance files.

Format (byte-exact, newline-terminated lines):

    HAP1 <m> <n>
    <m lines of exactly n characters over {+, -, x}>
    TRUTH <+/- string of length n>       (optional trailer)

'x' marks an unobserved position.  The trailer carries the true haplotype
for scoring; files round-trip losslessly, including the trailer.
"""

from __future__ import annotations

import numpy as np

from .errors import InstanceFormatError
from .objective import ReadMatrix
from .pipeline import Haplotype

__all__ = ["format_instance", "parse_instance", "write_instance", "read_instance"]

MAGIC = "HAP1"


def format_instance(reads: ReadMatrix, truth: Haplotype | None = None) -> str:
    """Render a read matrix (and optional truth) as HAP1 text."""
    lines = [f"{MAGIC} {reads.m} {reads.n}"]
    symbols = np.where(reads.mask, np.where(reads.entries > 0, "+", "-"), "x")
    lines.extend("".join(row) for row in symbols)
    if truth is not None:
        if len(truth) != reads.n:
            raise InstanceFormatError(f"truth has length {len(truth)}, matrix has {reads.n} columns")
        lines.append(f"TRUTH {truth.to_string()}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> tuple[ReadMatrix, Haplotype | None]:
    """Parse HAP1 text; errors carry the 1-based line number."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InstanceFormatError("empty file", line=1)

    header = lines[0].split(" ")
    if len(header) != 3 or header[0] != MAGIC:
        raise InstanceFormatError(f"expected header '{MAGIC} <m> <n>'", line=1)
    try:
        m, n = int(header[1]), int(header[2])
    except ValueError:
        raise InstanceFormatError("header dimensions must be integers", line=1) from None
    if m < 1 or n < 2:
        raise InstanceFormatError(f"need m >= 1 and n >= 2, got {m}x{n}", line=1)

    if len(lines) < 1 + m:
        raise InstanceFormatError(f"expected {m} matrix rows, file ends early", line=len(lines) + 1)

    entries = np.ones((m, n), dtype=np.int8)
    mask = np.zeros((m, n), dtype=bool)
    for i in range(m):
        row = lines[1 + i]
        lineno = 2 + i
        if len(row) != n:
            raise InstanceFormatError(f"row has {len(row)} characters, expected {n}", line=lineno)
        for j, ch in enumerate(row):
            if ch == "+":
                mask[i, j] = True
            elif ch == "-":
                entries[i, j] = -1
                mask[i, j] = True
            elif ch != "x":
                raise InstanceFormatError(f"invalid character {ch!r} at column {j + 1}", line=lineno)

    truth = None
    rest = lines[1 + m :]
    if rest:
        lineno = 2 + m
        trailer = rest[0]
        if not trailer.startswith("TRUTH "):
            raise InstanceFormatError("expected optional 'TRUTH <+/- string>' trailer", line=lineno)
        body = trailer[len("TRUTH ") :]
        if len(body) != n:
            raise InstanceFormatError(f"truth has {len(body)} characters, expected {n}", line=lineno)
        try:
            truth = Haplotype.from_string(body)
        except ValueError as exc:
            raise InstanceFormatError(str(exc), line=lineno) from None
        if len(rest) > 1:
            raise InstanceFormatError("unexpected content after the TRUTH trailer", line=lineno + 1)

    return ReadMatrix(entries=entries, mask=mask), truth


def write_instance(path, reads: ReadMatrix, truth: Haplotype | None = None):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_instance(reads, truth))


def read_instance(path) -> tuple[ReadMatrix, Haplotype | None]:
    with open(path, "r", encoding="ascii", newline="\n") as fh:
        return parse_instance(fh.read())
