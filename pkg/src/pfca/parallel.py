"""Parallel power-set traversal with dynamic block assignment and zero pruning.

The enumerated side is split on its first ``d = min(8, side // 2)``
elements: each of the ``2**d`` prefix masks defines one :class:`TaskBlock` holding every subset
that agrees with the prefix on those elements, so the blocks partition the
power set. Workers pop blocks from a shared queue, keep results in
worker-local tables, and the tables are merged once all blocks are done.

Pruning state is local to a block. Scheduling therefore never changes which
subsets are visited, and the output and visit counts are identical for
every worker count.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from .context import DEFAULT_ENUMERATION_LIMIT, mask_to_set
from .engine import (
    Decryptor,
    EncryptedContext,
    PrivacyConcept,
    aggregate_subsets,
    boundary_concepts,
    canonical_privacy,
    classify,
    make_singleton_test,
)
from .enums import Direction
from .errors import InvalidParameter, TooLarge

MAX_PREFIX_DEPTH = 8


@dataclass(frozen=True)
class TaskBlock:
    index: int
    prefix_mask: int
    prefix_depth: int
    remaining_depth: int
    direction: Direction

    @property
    def fixed_prefix(self) -> frozenset[int]:
        return mask_to_set(self.prefix_mask)

    @property
    def size(self) -> int:
        return 1 << self.remaining_depth


@dataclass
class WorkerReport:
    worker_id: int
    subsets_visited: int = 0
    subsets_pruned: int = 0
    concepts_found: int = 0
    wall_time: float = 0.0


@dataclass
class AggregateTable:
    """Decrypted aggregates of one traversal, plus which block produced which subset."""

    direction: Direction
    side: int
    values: dict[int, int] = field(default_factory=dict)
    block_masks: dict[int, list[int]] = field(default_factory=dict)


def make_blocks(side: int, direction: Direction, depth: int | None = None) -> list[TaskBlock]:
    # Keep free elements in every block, otherwise block-local pruning has nothing to skip.
    d = min(MAX_PREFIX_DEPTH, side // 2) if depth is None else depth
    if not 0 <= d <= side:
        raise InvalidParameter(f"prefix depth {d} outside [0, {side}]")
    return [TaskBlock(i, i, d, side - d, direction) for i in range(1 << d)]


def _run_queue(blocks: list[TaskBlock], worker_count: int, job: Callable[[TaskBlock, WorkerReport], None]) -> list[WorkerReport]:
    reports = [WorkerReport(i) for i in range(worker_count)]
    pending: queue.Queue[TaskBlock] = queue.Queue()
    for block in blocks:
        pending.put(block)
    failures: list[BaseException] = []

    def work(report: WorkerReport) -> None:
        start = time.perf_counter()
        try:
            while not failures:
                try:
                    block = pending.get_nowait()
                except queue.Empty:
                    break
                job(block, report)
        except BaseException as exc:  # re-raised in the caller's thread
            failures.append(exc)
        finally:
            report.wall_time += time.perf_counter() - start

    if worker_count == 1:
        work(reports[0])
    else:
        threads = [threading.Thread(target=work, args=(r,), name=f"pfca-worker-{r.worker_id}") for r in reports]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
    if failures:
        raise failures[0]
    return reports


def _check_workers(worker_count: int) -> None:
    if not isinstance(worker_count, int) or worker_count < 1:
        raise InvalidParameter(f"worker_count must be a positive integer, got {worker_count!r}")


def compute_aggregates(
    ec: EncryptedContext,
    direction: Direction | str,
    decryptor: Decryptor,
    *,
    worker_count: int = 1,
    prune: bool = False,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> tuple[AggregateTable, list[WorkerReport]]:
    """Traverse the power set of one side and decrypt every reached aggregate."""
    _check_workers(worker_count)
    direction = Direction.parse(direction)
    side = ec.side(direction)
    if side > limit:
        raise TooLarge(f"enumerated side has {side} elements; limit is {limit}")
    vectors = ec.vectors(direction)
    blocks = make_blocks(side, direction)
    local_tables: list[dict[int, int]] = [{} for _ in range(worker_count)]
    block_masks: dict[int, list[int]] = {}

    def job(block: TaskBlock, report: WorkerReport) -> None:
        values, visited, pruned = aggregate_subsets(
            vectors, decryptor, prefix=block.prefix_mask, free_from=block.prefix_depth, prune=prune
        )
        local_tables[report.worker_id].update(values)
        block_masks[block.index] = list(values)
        report.subsets_visited += visited
        report.subsets_pruned += pruned

    reports = _run_queue(blocks, worker_count, job)
    table = AggregateTable(direction, side, block_masks=block_masks)
    for local in local_tables:
        if not table.values.keys().isdisjoint(local):
            raise RuntimeError("a subset was visited by more than one worker")
        table.values.update(local)
    return table, reports


def extract_concepts(
    ec: EncryptedContext,
    table: AggregateTable,
    decryptor: Decryptor,
    *,
    worker_count: int = 1,
    singleton_mode: str = "alpha",
    seed: int = 0,
    reports: list[WorkerReport] | None = None,
) -> list[PrivacyConcept]:
    """Apply the concept rules block by block, then add the boundary concepts."""
    _check_workers(worker_count)
    direction, side = table.direction, table.side
    test = make_singleton_test(singleton_mode, ec, direction, decryptor, table.values, seed)
    if reports is None:
        reports = [WorkerReport(i) for i in range(worker_count)]
    buffers: list[list[PrivacyConcept]] = [[] for _ in range(worker_count)]

    def job(block: TaskBlock, report: WorkerReport) -> None:
        found = classify(table.values, table.block_masks.get(block.index, ()), side, direction, test)
        buffers[report.worker_id].extend(found)
        report.concepts_found += len(found)

    phase = _run_queue(make_blocks(side, direction), worker_count, job)
    for total, part in zip(reports, phase):
        total.concepts_found += part.concepts_found
        total.wall_time += part.wall_time

    other = ec.side(Direction.ATTRIBUTE if direction is Direction.OBJECT else Direction.OBJECT)
    merged = [pc for buf in buffers for pc in buf]
    merged += boundary_concepts(table.values, side, other, direction)
    return canonical_privacy(merged)


def parallel_enumerate(
    ec: EncryptedContext,
    direction: Direction | str,
    worker_count: int,
    prune: bool,
    decryptor: Decryptor,
    *,
    singleton_mode: str = "alpha",
    seed: int = 0,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> tuple[list[PrivacyConcept], list[WorkerReport]]:
    table, reports = compute_aggregates(
        ec, direction, decryptor, worker_count=worker_count, prune=prune, limit=limit
    )
    concepts = extract_concepts(
        ec, table, decryptor, worker_count=worker_count, singleton_mode=singleton_mode, seed=seed, reports=reports
    )
    return concepts, reports
