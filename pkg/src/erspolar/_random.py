"""Counter-based random streams.

Every stream is a Philox generator keyed by ``(seed, index)``, so the numbers
used for a given frame (or Monte-Carlo block) never depend on how work is
split across workers or in which order it runs.
"""

import numpy as np

# third counter word separates independent uses of the same (seed, index)
STREAM_FRAME = 0
STREAM_PROFILE = 1
STREAM_MESSAGE = 2


def keyed_rng(seed: int, index: int, stream: int = STREAM_FRAME) -> np.random.Generator:
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    key = (seed & ((1 << 64) - 1)) | (index << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, stream, 0]))
