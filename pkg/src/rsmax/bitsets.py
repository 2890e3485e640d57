"""Bit-mask subset utilities.

A subset of the ground set {0, ..., n-1} is a plain int with bit i set iff
element i is in the subset. Python ints are arbitrary width, so the same
representation serves n <= 64 and larger ground sets alike.

Enumeration order matters for reproducibility: fixed-size subsets are
yielded in lexicographic order of their sorted element tuples, and
bounded-size enumerations go through sizes in increasing order. All
tie-breaking in the package refers to this order.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator


def mask_of(xs: Iterable[int]) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


def bit(x: int) -> int:
    return 1 << x


def elements(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_elements(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def size(mask: int) -> int:
    return mask.bit_count()


def full_mask(n: int) -> int:
    return (1 << n) - 1


def lowest(mask: int) -> int:
    if not mask:
        raise ValueError("empty mask has no lowest element")
    return (mask & -mask).bit_length() - 1


def subsets_of_size(mask: int, m: int) -> Iterator[int]:
    """Size-m subsets of ``mask``, lexicographic in the element tuples."""
    for combo in itertools.combinations(elements(mask), m):
        sub = 0
        for x in combo:
            sub |= 1 << x
        yield sub


def subsets_up_to(mask: int, t: int) -> Iterator[int]:
    """Subsets of ``mask`` of size <= t, smaller sizes first."""
    for m in range(min(t, mask.bit_count()) + 1):
        yield from subsets_of_size(mask, m)
