"""Seeded random streams with exact bit accounting, and exact coin enumeration.

Every party draws through the same two-method interface:

``bits(k)``
    ``k`` fresh bits as an integer (most significant bit drawn first).
``below(n)``
    a uniform integer in ``[0, n)``: draw ``w = (n-1).bit_length()`` bits and
    retry while the value is ``>= n``.  Rejected draws stay consumed.

:class:`RandomSource` realizes the interface with SHA-256 in counter mode,
keyed by ``(seed, party tag, stream index)``.  :class:`EnumeratingSource`
realizes it over an explicit choice path so that :func:`enumerate_outcomes`
can walk every coin outcome of a computation and weigh it exactly.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Hashable

from .errors import StateSpaceTooLarge

TAIL = b"\xfftail"


class RandomSource:
    """Deterministic bit stream; identical ``(seed, tag, index)`` gives identical bits."""

    def __init__(self, seed: int, tag: str = "", index: int = 0):
        self.seed = seed
        self.tag = tag
        self.index = index
        self._key = hashlib.sha256(f"dcmzk|{seed}|{tag}|{index}".encode()).digest()
        self._block = 0
        self._pool = 0
        self._pool_bits = 0
        self._log = 0
        self.consumed = 0

    def _refill(self):
        block = hashlib.sha256(self._key + self._block.to_bytes(8, "big")).digest()
        self._block += 1
        self._pool = (self._pool << 256) | int.from_bytes(block, "big")
        self._pool_bits += 256

    def bits(self, k: int) -> int:
        if k == 0:
            return 0
        while self._pool_bits < k:
            self._refill()
        self._pool_bits -= k
        v = self._pool >> self._pool_bits
        self._pool &= (1 << self._pool_bits) - 1
        self._log = (self._log << k) | v
        self.consumed += k
        return v

    def below(self, n: int) -> int:
        if n <= 1:
            return 0
        w = (n - 1).bit_length()
        while True:
            v = self.bits(w)
            if v < n:
                return v

    def bitstring(self, start: int = 0, stop: int | None = None) -> str:
        """The consumed bits as a ``'0'``/``'1'`` string, optionally sliced."""
        s = format(self._log, f"0{self.consumed}b") if self.consumed else ""
        return s[start:stop]


def split(seed: int, tag: str) -> Callable[[int], RandomSource]:
    """Per-repetition stream factory: stream ``i`` is keyed by ``(seed, tag, i)``."""
    return lambda index: RandomSource(seed, tag, index)


class Tape:
    """A fixed random string read by position, remembering how far it was read.

    Verifier strategies see their random string through a tape so that the
    used prefix (the high-water mark of reads) is well defined.
    """

    def __init__(self, bits: str):
        self.bits = bits
        self.high = 0

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < len(self.bits):
            raise IndexError(f"tape position {i} outside 0..{len(self.bits) - 1}")
        if i + 1 > self.high:
            self.high = i + 1
        return 1 if self.bits[i] == "1" else 0

    def fork(self) -> "Tape":
        """Same bits, fresh read accounting."""
        return Tape(self.bits)

    def used(self) -> str:
        return self.bits[: self.high]


# --- exact enumeration ---------------------------------------------------


class _NeedChoice(BaseException):
    # BaseException so protocol code catching Exception cannot swallow it
    def __init__(self, arity: int):
        self.arity = arity


class _Truncated(BaseException):
    pass


class ChoicePath:
    def __init__(self, prefix: tuple[int, ...]):
        self.prefix = prefix
        self.pos = 0

    def choose(self, arity: int) -> int:
        if self.pos < len(self.prefix):
            c = self.prefix[self.pos]
            self.pos += 1
            return c
        raise _NeedChoice(arity)


class EnumeratingSource:
    """Drop-in for :class:`RandomSource` whose outcomes come from a choice path.

    With ``bitwise=False``, ``below(n)`` is a single ``n``-way choice; use it
    for coins whose bit pattern is invisible to the observer.  With
    ``bitwise=True`` it goes through ``bits`` with rejection exactly like
    :class:`RandomSource`, so the consumed bit string is enumerated faithfully;
    paths that reject more than ``max_rejections`` times in one draw are cut
    off and their mass goes to :data:`TAIL`.
    """

    def __init__(self, path: ChoicePath, bitwise: bool = False, max_rejections: int = 3):
        self.path = path
        self.bitwise = bitwise
        self.max_rejections = max_rejections
        self._log = 0
        self.consumed = 0

    def bits(self, k: int) -> int:
        if k == 0:
            return 0
        v = self.path.choose(1 << k)
        self._log = (self._log << k) | v
        self.consumed += k
        return v

    def below(self, n: int) -> int:
        if n <= 1:
            return 0
        if not self.bitwise:
            return self.path.choose(n)
        w = (n - 1).bit_length()
        for _ in range(self.max_rejections + 1):
            v = self.bits(w)
            if v < n:
                return v
        raise _Truncated()

    bitstring = RandomSource.bitstring


def enumerate_outcomes(
    experiment: Callable[[ChoicePath], Hashable], max_states: int = 10**6
) -> dict[Hashable, Fraction]:
    """Exact output distribution of ``experiment`` over all its coin choices.

    ``experiment`` is re-run from scratch on every choice prefix (it must be
    deterministic given the path).  Truncated paths are collected under
    :data:`TAIL`.
    """
    dist: dict[Hashable, Fraction] = defaultdict(Fraction)
    stack: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    leaves = 0
    while stack:
        prefix, p = stack.pop()
        try:
            key = experiment(ChoicePath(prefix))
        except _NeedChoice as need:
            q = p / need.arity
            stack.extend((prefix + (c,), q) for c in reversed(range(need.arity)))
            continue
        except _Truncated:
            key = TAIL
        dist[key] += p
        leaves += 1
        if leaves > max_states:
            raise StateSpaceTooLarge(leaves, max_states)
    return dict(dist)
