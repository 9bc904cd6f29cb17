"""
History Vector Codec.

History vectors are bit-packed two bits per entry, most recent own turn in
the lowest bits: 00 = no turn yet, 01 = formula did not hold, 11 = it held.
Vectors of length l fit in 2*l bits, so ones and recorded turns are counted
with popcounts.
"""

from ..domain.models import ConstraintKind, Entry, HistoryVector
from ..errors import InputError

NONE_CODE = 0b00
ZERO_CODE = 0b01
ONE_CODE = 0b11

_LOW_PATTERN = int("01" * 64, 2)


def length_mask(length: int) -> int:
    """Mask keeping the first `length` entries of a packed vector."""
    return (1 << (2 * length)) - 1


def entry_code(held: bool) -> int:
    return ONE_CODE if held else ZERO_CODE


def push(code: int, held: bool, length: int) -> int:
    """Record a new own turn: shift older entries and drop the oldest."""
    return ((code << 2) | (ONE_CODE if held else ZERO_CODE)) & length_mask(length)


def truncate(code: int, length: int) -> int:
    """Keep the `length` most recent entries."""
    return code & length_mask(length)


def count_entries(code: int) -> tuple[int, int]:
    """Count (ones, zeros) in a packed vector."""
    low = _LOW_PATTERN
    if code.bit_length() > 128:
        low = int("01" * ((code.bit_length() + 1) // 2), 2)
    ones = (code & (low << 1)).bit_count()
    recorded = (code & low).bit_count()
    return ones, recorded - ones


def code_satisfies(code: int, kind: ConstraintKind, k: int, length: int) -> bool:
    """
    Window check on a packed vector.

    MIN counts missing turns optimistically (l - zeros >= k); MAX counts only
    recorded ones (ones <= k).
    """
    ones, zeros = count_entries(code)
    if kind is ConstraintKind.MIN:
        return length - zeros >= k
    return ones <= k


def encode(vector: HistoryVector) -> int:
    """Pack an entry tuple (most recent first)."""
    code = 0
    seen_none = False
    for i, entry in enumerate(vector):
        if entry is None:
            seen_none = True
            continue
        if seen_none:
            raise InputError(f"history entries after an empty slot: {vector}")
        if entry not in (0, 1):
            raise InputError(f"history entries must be 0, 1 or None, got {entry!r}")
        code |= (ONE_CODE if entry else ZERO_CODE) << (2 * i)
    return code


def decode(code: int, length: int) -> HistoryVector:
    """Unpack a vector of the given length."""
    entries: list[Entry] = []
    for i in range(length):
        bits = (code >> (2 * i)) & 0b11
        entries.append(None if bits == NONE_CODE else (1 if bits == ONE_CODE else 0))
    return tuple(entries)
