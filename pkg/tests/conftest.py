import numpy as np
import pytest

from autoqec import codes
from autoqec.gf2 import BitMatrix

# the smallest two-logical-bit worked example: a [5,2,3] shortened Hamming code
HAMMING_G = [[1, 0, 1, 1, 0], [0, 1, 0, 1, 1]]
HAMMING_H = [[1, 0, 1, 0, 0], [1, 1, 0, 1, 0], [0, 1, 0, 0, 1]]


@pytest.fixture
def hamming523() -> codes.LinearCode:
    return codes.make_code(BitMatrix(HAMMING_G), BitMatrix(HAMMING_H))


@pytest.fixture
def cnot2() -> BitMatrix:
    return BitMatrix([[1, 0], [1, 1]])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)


def random_full_rank(rng: np.random.Generator, k: int, n: int) -> BitMatrix:
    from autoqec import gf2

    while True:
        arr = rng.integers(0, 2, size=(k, n)).astype(np.uint8)
        m = BitMatrix(arr)
        if gf2.rank(m) == k:
            return m
