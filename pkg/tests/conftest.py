import math

import numpy as np
import pytest

from polyradii.streams import StreamKey, generator

TEST_SEED = 20260809


@pytest.fixture
def key() -> StreamKey:
    return StreamKey(TEST_SEED)


def chi_max_mc(k: int, N: int, replicas: int, key: StreamKey, chunk: int = 2_000_000):
    """Independent MC oracle for E max of N chi_k variables.

    Uses the chi-square representation |G|^2 ~ 2 Gamma(k/2), which shares no
    code path with the quadrature under test.  Returns (mean, stderr).
    """
    gen = generator(key)
    blocks = []
    done = 0
    per_block = max(chunk // max(N, 1), 1)
    while done < replicas:
        b = min(per_block, replicas - done)
        g = gen.standard_gamma(k / 2.0, size=(b, N))
        blocks.append(np.sqrt(2.0 * g.max(axis=1)))
        done += b
    vals = np.concatenate(blocks)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))
