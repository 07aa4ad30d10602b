from typing import Tuple

import numpy as np
from numpy.typing import NDArray

Residues = str
GappedRow = str
DirectionCode = int
Cell = Tuple[int, int]
PairIndex = Tuple[int, int]

# (m+1, n+1) int64 grid of prefix scores
ScoreMatrix = NDArray[np.int64]
# (m+1, n+1) int8 grid of direction codes, see nwalign.core
TracebackMatrix = NDArray[np.int8]
# (m+1, n+1) bool grid, one computed flag per cell
ReadyFlags = NDArray[np.bool_]
# (n, n) symmetric int64 matrix of pairwise alignment scores
PairScoreMatrix = NDArray[np.int64]
