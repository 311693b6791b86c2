"""Deterministic simulated distributed-memory runtime.

Virtual PEs execute generator programs in lockstep supersteps; every
``yield`` is a barrier, and messages sent during superstep t are delivered
before superstep t+1. Message payloads must be plain value records (ints,
floats, strings, numpy arrays, tuples/lists/dicts thereof) so that no
mutable state is shared across PE boundaries.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PeContext",
    "MessageStats",
    "RunResult",
    "SuperstepError",
    "run_supersteps",
    "all_to_all_exchange",
    "prefix_sum_steps",
    "prefix_sum_collective",
    "payload_nbytes",
]


class SuperstepError(RuntimeError):
    """A PE program raised; carries the PE ID and superstep index."""

    def __init__(self, pe: int, step: int, cause: BaseException):
        super().__init__(f"PE {pe} failed in superstep {step}: {cause!r}")
        self.pe = pe
        self.step = step


def payload_nbytes(payload) -> int:
    """Nominal wire size of a message payload (8 bytes per scalar)."""
    if payload is None:
        return 0
    if isinstance(payload, (bool, int, float, np.integer, np.floating)):
        return 8
    if isinstance(payload, np.ndarray):
        return int(payload.nbytes)
    if isinstance(payload, (bytes, str)):
        return len(payload)
    if isinstance(payload, (tuple, list)):
        return sum(payload_nbytes(x) for x in payload)
    if isinstance(payload, dict):
        return sum(payload_nbytes(k) + payload_nbytes(v) for k, v in payload.items())
    raise TypeError(f"unsupported message payload type {type(payload)!r}")


@dataclass
class MessageStats:
    """Per-PE accounting of sent message batches and byte volume."""

    messages_sent: list[int]
    bytes_sent: list[int]
    supersteps: int = 0

    @property
    def total_messages(self) -> int:
        return sum(self.messages_sent)

    @property
    def total_bytes(self) -> int:
        return sum(self.bytes_sent)


@dataclass
class RunResult:
    outputs: list
    stats: MessageStats


class PeContext:
    """Message endpoints of one virtual PE for the current superstep."""

    __slots__ = ("pe", "num_pes", "_outbox", "_inbox", "_stats")

    def __init__(self, pe: int, num_pes: int, stats: MessageStats):
        self.pe = pe
        self.num_pes = num_pes
        self._outbox: dict[int, list] = {}
        self._inbox: dict[int, list] = {}
        self._stats = stats

    def send(self, dest: int, payload) -> None:
        """Queue one message for delivery at the next superstep barrier."""
        if not 0 <= dest < self.num_pes:
            raise ValueError(f"message addressed to PE {dest} of {self.num_pes}")
        self._outbox.setdefault(dest, []).append(payload)
        self._stats.messages_sent[self.pe] += 1
        self._stats.bytes_sent[self.pe] += payload_nbytes(payload)

    def messages(self) -> list[tuple[int, object]]:
        """Messages delivered at the last barrier as (sender, payload),
        ordered by sender, per-sender order preserved."""
        out = []
        for src in sorted(self._inbox):
            out.extend((src, p) for p in self._inbox[src])
        return out

    def messages_from(self, src: int) -> list:
        return list(self._inbox.get(src, ()))


def all_to_all_exchange(outboxes: list[dict[int, list]],
                        num_pes: int | None = None) -> list[dict[int, list]]:
    """Route finalized outboxes into per-PE inboxes keyed by sender."""
    p = len(outboxes) if num_pes is None else num_pes
    inboxes: list[dict[int, list]] = [{} for _ in range(p)]
    for src, outbox in enumerate(outboxes):
        for dest, batch in outbox.items():
            if not 0 <= dest < p:
                raise ValueError(f"message addressed to PE {dest} of {p}")
            if batch:
                inboxes[dest][src] = list(batch)
    return inboxes


def run_supersteps(num_pes: int, program, *, workers: int = 1,
                   max_steps: int = 100_000) -> RunResult:
    """Run ``program(ctx)`` on every PE until all generators finish.

    ``program`` is called once per PE and must return a generator; each
    ``yield`` ends a superstep. Outputs are the generator return values in
    PE order. Execution is deterministic regardless of ``workers`` because
    PE state is disjoint and all exchange happens at the barrier.
    """
    if num_pes < 1:
        raise ValueError("need at least one PE")
    stats = MessageStats(messages_sent=[0] * num_pes, bytes_sent=[0] * num_pes)
    contexts = [PeContext(pe, num_pes, stats) for pe in range(num_pes)]
    gens: list = []
    outputs: list = [None] * num_pes
    alive = [True] * num_pes
    for ctx in contexts:
        gen = program(ctx)
        if not hasattr(gen, "__next__"):
            raise TypeError("program must return a generator")
        gens.append(gen)

    def advance(pe: int) -> None:
        try:
            next(gens[pe])
        except StopIteration as stop:
            outputs[pe] = stop.value
            alive[pe] = False
        except Exception as exc:
            raise SuperstepError(pe, stats.supersteps, exc) from exc

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while any(alive):
            if stats.supersteps >= max_steps:
                raise RuntimeError(f"exceeded {max_steps} supersteps")
            running = [pe for pe in range(num_pes) if alive[pe]]
            if pool is not None:
                list(pool.map(advance, running))
            else:
                for pe in running:
                    advance(pe)
            stats.supersteps += 1
            inboxes = all_to_all_exchange([ctx._outbox for ctx in contexts], num_pes)
            for ctx, inbox in zip(contexts, inboxes):
                ctx._inbox = inbox
                ctx._outbox = {}
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    return RunResult(outputs=outputs, stats=stats)


def prefix_sum_steps(ctx: PeContext, value: int):
    """Exclusive prefix sum as a composable collective (``yield from`` it).

    Doubling scheme: ceil(log2 p) superstep rounds, linear total work.
    Returns the sum of the values on PEs 0 .. pe-1.
    """
    total = value
    offset = 1
    rounds = (ctx.num_pes - 1).bit_length()
    for _ in range(rounds):
        if ctx.pe + offset < ctx.num_pes:
            ctx.send(ctx.pe + offset, total)
        yield
        if ctx.pe - offset >= 0:
            received = ctx.messages_from(ctx.pe - offset)
            total += received[0]
        offset *= 2
    return total - value


def prefix_sum_collective(values, *, workers: int = 1) -> list:
    """Exclusive prefix sum of one value per PE, over the message substrate."""
    values = list(values)

    def program(ctx: PeContext):
        result = yield from prefix_sum_steps(ctx, values[ctx.pe])
        return result

    return run_supersteps(len(values), program, workers=workers).outputs
