"""Protocol messages and their binary and text encodings.

Frame layout::

    4 bytes  big-endian length of everything after this field
    1 byte   tag (1 Commit, 2 Challenge, 3 Response, 4 Verdict, 5 Probe, 6 Answer)
    payload

A permutation is a 2-byte big-endian degree followed by that many 2-byte
big-endian images.  Commit and Response payloads are runs of permutations
(one per slot, or an ``x, y`` pair per slot), so the same messages carry the
atomic protocol and the k-slot bundles of the parallel composition.

Frames whose payload does not parse, or exceeds :data:`MAX_PAYLOAD`, decode
to :class:`Malformed` instead of raising: what a verifier does with garbage
is protocol logic, not a transport failure.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Union

from .errors import ParseError
from .permgroup import Permutation

MAX_PAYLOAD = 1 << 20

COMMIT, CHALLENGE, RESPONSE, VERDICT, PROBE, ANSWER = 1, 2, 3, 4, 5, 6


@dataclass(frozen=True)
class Commit:
    t: tuple[Permutation, ...]


@dataclass(frozen=True)
class Challenge:
    b: bytes


@dataclass(frozen=True)
class Response:
    pairs: tuple[tuple[Permutation, Permutation], ...]


@dataclass(frozen=True)
class Verdict:
    accept: bool


@dataclass(frozen=True)
class Probe:
    t: Permutation


@dataclass(frozen=True)
class Answer:
    a: int


@dataclass(frozen=True)
class Malformed:
    tag: int
    payload: bytes


Message = Union[Commit, Challenge, Response, Verdict, Probe, Answer, Malformed]


def encode_perm(p: Permutation) -> bytes:
    m = p.degree
    return struct.pack(f">{m + 1}H", m, *p.images)


def _decode_perms(buf: bytes) -> list[Permutation] | None:
    out = []
    pos = 0
    while pos < len(buf):
        if pos + 2 > len(buf):
            return None
        (m,) = struct.unpack_from(">H", buf, pos)
        end = pos + 2 + 2 * m
        if m == 0 or end > len(buf):
            return None
        images = struct.unpack_from(f">{m}H", buf, pos + 2)
        if len(set(images)) != m or max(images) >= m:
            return None
        out.append(Permutation._trusted(images))
        pos = end
    return out


def encode_payload(msg: Message) -> tuple[int, bytes]:
    if isinstance(msg, Commit):
        return COMMIT, b"".join(map(encode_perm, msg.t))
    if isinstance(msg, Challenge):
        return CHALLENGE, bytes(msg.b)
    if isinstance(msg, Response):
        return RESPONSE, b"".join(encode_perm(x) + encode_perm(y) for x, y in msg.pairs)
    if isinstance(msg, Verdict):
        return VERDICT, b"\x01" if msg.accept else b"\x00"
    if isinstance(msg, Probe):
        return PROBE, encode_perm(msg.t)
    if isinstance(msg, Answer):
        return ANSWER, bytes([msg.a])
    if isinstance(msg, Malformed):
        return msg.tag, msg.payload
    raise TypeError(f"not a message: {msg!r}")


def encode_frame(msg: Message) -> bytes:
    tag, payload = encode_payload(msg)
    return struct.pack(">IB", len(payload) + 1, tag) + payload


def decode_body(tag: int, payload: bytes) -> Message:
    """Decode a frame body (tag and payload, length already stripped)."""
    bad = Malformed(tag, payload)
    if len(payload) > MAX_PAYLOAD:
        return Malformed(tag, b"")
    if tag in (COMMIT, RESPONSE, PROBE):
        perms = _decode_perms(payload)
        if perms is None:
            return bad
        if tag == COMMIT:
            return Commit(tuple(perms)) if perms else bad
        if tag == PROBE:
            return Probe(perms[0]) if len(perms) == 1 else bad
        if not perms or len(perms) % 2:
            return bad
        return Response(tuple(zip(perms[::2], perms[1::2])))
    if tag == CHALLENGE:
        return Challenge(payload) if payload else bad
    if tag == VERDICT:
        return Verdict(payload == b"\x01") if payload in (b"\x00", b"\x01") else bad
    if tag == ANSWER:
        return Answer(payload[0]) if len(payload) == 1 else bad
    return bad


def decode_frame(frame: bytes) -> Message:
    if len(frame) < 5:
        raise ParseError("frame shorter than its header")
    length, tag = struct.unpack_from(">IB", frame)
    if length != len(frame) - 4:
        raise ParseError(f"frame length field {length} does not match {len(frame) - 4}")
    return decode_body(tag, frame[5:])


# --- text forms ------------------------------------------------------------


def format_perm(p: Permutation) -> str:
    """Space-separated 1-indexed image list."""
    return " ".join(str(x + 1) for x in p.images)


def parse_perm(text: str, degree: int | None = None) -> Permutation:
    """Parse an image list, or cycle notation when the text starts with ``(``.

    Points are 1-indexed in both notations.  Cycle notation needs ``degree``
    unless the largest point mentioned is the degree.
    """
    text = text.strip()
    try:
        if text.startswith("("):
            cycles = []
            for chunk in text.replace(")", ")\n").splitlines():
                chunk = chunk.strip()
                if not chunk:
                    continue
                if not (chunk.startswith("(") and chunk.endswith(")")):
                    raise ParseError(f"bad cycle {chunk!r}")
                inner = chunk[1:-1].replace(",", " ").split()
                if inner:
                    cycles.append([int(x) - 1 for x in inner])
            top = max((max(c) + 1 for c in cycles), default=1)
            m = degree if degree is not None else top
            if top > m:
                raise ParseError(f"cycle point {top} exceeds degree {m}")
            return Permutation.from_cycles(m, cycles)
        p = Permutation(int(x) - 1 for x in text.split())
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad permutation {text!r}: {exc}") from exc
    if degree is not None and p.degree != degree:
        raise ParseError(f"permutation {text!r} has degree {p.degree}, expected {degree}")
    return p


def format_message(msg: Message) -> str:
    if isinstance(msg, Commit):
        return "commit " + " ; ".join(map(format_perm, msg.t))
    if isinstance(msg, Challenge):
        return "challenge " + " ".join(str(b) for b in msg.b)
    if isinstance(msg, Response):
        return "response " + " ; ".join(f"{format_perm(x)} / {format_perm(y)}" for x, y in msg.pairs)
    if isinstance(msg, Verdict):
        return "verdict " + ("ACCEPT" if msg.accept else "REJECT")
    if isinstance(msg, Probe):
        return "probe " + format_perm(msg.t)
    if isinstance(msg, Answer):
        return f"answer {msg.a}"
    return f"malformed {msg.tag} {msg.payload.hex()}"


def parse_message(line: str) -> Message:
    kind, _, rest = line.strip().partition(" ")
    rest = rest.strip()
    try:
        if kind == "commit":
            return Commit(tuple(parse_perm(x) for x in rest.split(";")))
        if kind == "challenge":
            return Challenge(bytes(int(x) for x in rest.split()))
        if kind == "response":
            pairs = []
            for slot in rest.split(";"):
                x, y = slot.split("/")
                pairs.append((parse_perm(x), parse_perm(y)))
            return Response(tuple(pairs))
        if kind == "verdict":
            if rest not in ("ACCEPT", "REJECT"):
                raise ParseError(f"bad verdict {rest!r}")
            return Verdict(rest == "ACCEPT")
        if kind == "probe":
            return Probe(parse_perm(rest))
        if kind == "answer":
            return Answer(int(rest))
        if kind == "malformed":
            tag, _, hexdata = rest.partition(" ")
            return Malformed(int(tag), bytes.fromhex(hexdata))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad message line {line!r}: {exc}") from exc
    raise ParseError(f"unknown message kind {kind!r}")
