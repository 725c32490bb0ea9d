"""Provide reproducible random substreams for chunked Monte Carlo loops.

Every random draw in the package comes from a ``numpy`` ``PCG64`` generator seeded by a
``SeedSequence`` whose spawn key is ``(chunk index, purpose, *extra)``. Work is cut into
chunks of a fixed size, so results depend only on the seed and never on how many workers
execute the chunks.
"""

import collections.abc
import concurrent.futures
import dataclasses
import enum
import logging

import numpy as np
import pydantic

LOGGER = logging.getLogger(__name__)

GENERATOR_NAME = "PCG64"
CHUNK_SIZE = 65_536

Seed = pydantic.NonNegativeInt


@enum.unique
class StreamPurpose(enum.IntEnum):
    """Define independent stream families within one chunk."""

    SETTINGS = 0
    OUTCOMES = 1
    PHOTON = 2
    DETECTOR_LEFT = 3
    DETECTOR_RIGHT = 4
    MIXTURE = 5
    DERIVATION = 6


def substream(
    seed: int, chunk_index: int, purpose: StreamPurpose, *extra: int
) -> np.random.Generator:
    """Create the generator dedicated to one chunk and purpose.

    Parameters
    ----------
    seed : int
        non-negative root seed of the run
    chunk_index : int
        index of the chunk within the run
    purpose : StreamPurpose
        stream family, so that e.g. photon and detector draws never share a stream
    *extra : int
        additional key components, e.g. a resample index

    Returns
    -------
    np.random.Generator
        independent ``PCG64`` generator
    """
    seed_sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(chunk_index, int(purpose), *extra)
    )

    return np.random.Generator(np.random.PCG64(seed_sequence))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child seed from a root seed and integer keys.

    Parameters
    ----------
    seed : int
        non-negative root seed
    *keys : int
        integer labels identifying the child

    Returns
    -------
    int
        non-negative 63-bit child seed
    """
    seed_sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(int(StreamPurpose.DERIVATION), *keys)
    )

    return int(seed_sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclasses.dataclass(frozen=True, slots=True)
class Chunk:
    """Define a contiguous slice of a Monte Carlo loop.

    Attributes
    ----------
    index : int
        position of the chunk, used as substream key
    start : int
        global index of the first draw in the chunk
    size : int
        number of draws in the chunk
    """

    index: int
    start: int
    size: int


def plan_chunks(n_draws: int, chunk_size: int = CHUNK_SIZE) -> list[Chunk]:
    """Cut a loop of `n_draws` into fixed-size chunks.

    Parameters
    ----------
    n_draws : int
        total number of draws
    chunk_size : int, optional
        draws per chunk, the last chunk may be shorter, by default CHUNK_SIZE

    Returns
    -------
    list[Chunk]
        chunks in index order
    """
    return [
        Chunk(index=index, start=start, size=min(chunk_size, n_draws - start))
        for index, start in enumerate(range(0, n_draws, chunk_size))
    ]


def run_chunks[T](
    function: collections.abc.Callable[[Chunk], T], chunks: list[Chunk], workers: int = 1
) -> list[T]:
    """Evaluate `function` on every chunk and return results in chunk order.

    Parameters
    ----------
    function : collections.abc.Callable[[Chunk], T]
        work to perform for one chunk
    chunks : list[Chunk]
        chunks to process
    workers : int, optional
        number of threads, by default 1 which runs inline

    Returns
    -------
    list[T]
        per-chunk results ordered by chunk index
    """
    LOGGER.debug(
        f"Processing {len(chunks)} chunks with {workers=}.",
        extra={
            "event.group": "simulation",
            "event.type": "chunks",
            "event.action": "execute",
            "event.status": "started",
        },
    )

    if workers <= 1 or len(chunks) <= 1:
        return [function(chunk) for chunk in chunks]

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, chunks))


__all__ = [
    "CHUNK_SIZE",
    "GENERATOR_NAME",
    "Chunk",
    "Seed",
    "StreamPurpose",
    "derive_seed",
    "plan_chunks",
    "run_chunks",
    "substream",
]
