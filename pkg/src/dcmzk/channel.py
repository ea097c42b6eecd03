"""Framed duplex channels and the drivers that connect two parties.

A party is a generator.  It yields either a message to send or :data:`RECV`;
after ``RECV`` the next incoming message is sent back into it.  Its return
value is the party's result.  The same party code therefore runs

* in lockstep in one thread (:func:`run_lockstep`, the fast path used for
  Monte Carlo and exact enumeration),
* in two threads over an in-process queue pair (:func:`run_threaded`),
* across processes over a socket (:class:`StreamChannel` with :func:`drive`).

Every realization moves the same encoded frames, so a session yields the
same decoded messages whichever channel carries it.
"""

from __future__ import annotations

import queue
import socket
import struct
import threading
from typing import Generator

from .errors import TransportError
from .wire import MAX_PAYLOAD, Malformed, Message, decode_body, decode_frame, encode_frame

DEFAULT_TIMEOUT = 30.0


class _Recv:
    def __repr__(self):
        return "RECV"


RECV = _Recv()

Party = Generator[object, object, object]


class Channel:
    def send(self, msg: Message) -> None:
        raise NotImplementedError

    def recv(self) -> Message:
        raise NotImplementedError

    def close(self) -> None:
        pass


class MemoryChannel(Channel):
    """One end of an in-process queue pair carrying encoded frames."""

    def __init__(self, inbox: queue.SimpleQueue, outbox: queue.SimpleQueue, timeout: float):
        self._inbox = inbox
        self._outbox = outbox
        self.timeout = timeout

    def send(self, msg: Message) -> None:
        self._outbox.put(encode_frame(msg))

    def pending(self) -> bool:
        return not self._inbox.empty()

    def recv(self) -> Message:
        try:
            frame = self._inbox.get(timeout=self.timeout)
        except queue.Empty:
            raise TransportError("timed out waiting for a frame") from None
        return decode_frame(frame)


def memory_pipe(timeout: float = DEFAULT_TIMEOUT) -> tuple[MemoryChannel, MemoryChannel]:
    a, b = queue.SimpleQueue(), queue.SimpleQueue()
    return MemoryChannel(a, b, timeout), MemoryChannel(b, a, timeout)


class StreamChannel(Channel):
    """Frames over a connected socket (TCP or a socketpair)."""

    def __init__(self, sock: socket.socket, timeout: float = DEFAULT_TIMEOUT):
        self.sock = sock
        sock.settimeout(timeout)

    def _read_exact(self, n: int) -> bytes:
        chunks = []
        while n:
            try:
                chunk = self.sock.recv(min(n, 1 << 16))
            except socket.timeout:
                raise TransportError("timed out waiting for a frame") from None
            except OSError as exc:
                raise TransportError(f"socket error: {exc}") from exc
            if not chunk:
                raise TransportError("peer closed the connection")
            chunks.append(chunk)
            n -= len(chunk)
        return b"".join(chunks)

    def send(self, msg: Message) -> None:
        try:
            self.sock.sendall(encode_frame(msg))
        except OSError as exc:
            raise TransportError(f"socket error: {exc}") from exc

    def recv(self) -> Message:
        length, tag = struct.unpack(">IB", self._read_exact(5))
        if length < 1:
            raise TransportError("zero-length frame")
        remaining = length - 1
        if remaining > MAX_PAYLOAD:
            while remaining:
                remaining -= len(self._read_exact(min(remaining, 1 << 16)))
            return Malformed(tag, b"")
        return decode_body(tag, self._read_exact(remaining))

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


def drive(party: Party, channel: Channel):
    """Run one party to completion against a blocking channel."""
    value = None
    try:
        while True:
            action = party.send(value)
            if action is RECV:
                value = channel.recv()
            else:
                channel.send(action)
                value = None
    except StopIteration as stop:
        return stop.value


def run_lockstep(first: Party, second: Party) -> tuple[object, object]:
    """Run two parties in one thread, switching whenever one waits on an empty inbox."""
    ends = memory_pipe(timeout=0)
    parties = [first, second]
    waiting = [False, False]
    done = [False, False]
    results = [None, None]
    cur = 0
    idle_switches = 0
    while not (done[0] and done[1]):
        gen, end = parties[cur], ends[cur]
        progressed = False
        while not done[cur]:
            if waiting[cur]:
                if not end.pending():
                    break
                value = end.recv()
                waiting[cur] = False
            else:
                value = None
            try:
                action = gen.send(value)
            except StopIteration as stop:
                done[cur] = True
                results[cur] = stop.value
                break
            progressed = True
            if action is RECV:
                waiting[cur] = True
            else:
                end.send(action)
        idle_switches = 0 if progressed else idle_switches + 1
        if idle_switches > 2:
            raise TransportError("session stalled: a party waits for a message that never comes")
        cur ^= 1
    return results[0], results[1]


def run_threaded(first: Party, second: Party, timeout: float = DEFAULT_TIMEOUT):
    """Run the two parties concurrently over an in-process queue pair."""
    a, b = memory_pipe(timeout)
    results: list = [None, None]
    errors: list = [None, None]

    def target(i, party, end):
        try:
            results[i] = drive(party, end)
        except BaseException as exc:  # surfaced in the caller's thread
            errors[i] = exc

    threads = [
        threading.Thread(target=target, args=(0, first, a), daemon=True),
        threading.Thread(target=target, args=(1, second, b), daemon=True),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for exc in errors:
        if exc is not None:
            raise exc
    return results[0], results[1]


def run_socketpair(first: Party, second: Party, timeout: float = DEFAULT_TIMEOUT):
    """Run the parties over an OS-level socket pair, ``second`` in a helper thread."""
    s1, s2 = socket.socketpair()
    c1, c2 = StreamChannel(s1, timeout), StreamChannel(s2, timeout)
    box: dict = {}

    def target():
        try:
            box["result"] = drive(second, c2)
        except BaseException as exc:
            box["error"] = exc

    t = threading.Thread(target=target, daemon=True)
    t.start()
    try:
        r1 = drive(first, c1)
    finally:
        t.join(timeout)
        c1.close()
        c2.close()
    if "error" in box:
        raise box["error"]
    return r1, box.get("result")
