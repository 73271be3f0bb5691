import os

import numpy as np

from src.core.logger import logger
from src.domain.models.coverage.coverage_grid import CoverageGrid
from src.domain.models.sensing.echo_tensor import EchoTensor

COVERAGE_HEADER = np.dtype([
    ("nx", "<u4"), ("ny", "<u4"), ("nz", "<u4"),
    ("spacing", "<f8"),
    ("origin", "<f8", (3,)),
])
TENSOR_HEADER = np.dtype([("q", "<u4"), ("n", "<u4"), ("m", "<u4")])


class BinaryExporter:
    """
    Little-endian binary grids.

    coverage.bin: uint32 nx, ny, nz; float64 spacing; float64 origin[3]; then
    nx*ny*nz float32 SNR (dB), x fastest, then y, then z.

    Tensor dumps: uint32 Q, N, M; then Q*N*M interleaved float32 (re, im) pairs.
    """

    def __init__(self, out_dir: str):
        self.out_dir = out_dir

    def write_coverage(self, grid: CoverageGrid, name: str = "coverage.bin") -> str:
        nx, ny, nz = grid.spec.shape
        header = np.array([(nx, ny, nz, grid.spec.spacing, grid.spec.origin)], dtype=COVERAGE_HEADER)
        # snr_db is stored (nz, ny, nx), so C order already runs x fastest
        return self._write(name, header, grid.snr_db.astype("<f4"))

    def write_tensor(self, tensor: EchoTensor, name: str) -> str:
        q, n, m = tensor.shape
        header = np.array([(q, n, m)], dtype=TENSOR_HEADER)
        interleaved = np.ascontiguousarray(tensor.data.astype(np.complex64)).view("<f4")
        return self._write(name, header, interleaved)

    @staticmethod
    def read_coverage(path: str):
        with open(path, "rb") as f:
            header = np.fromfile(f, dtype=COVERAGE_HEADER, count=1)[0]
            data = np.fromfile(f, dtype="<f4")
        nx, ny, nz = int(header["nx"]), int(header["ny"]), int(header["nz"])
        return header, data.reshape(nz, ny, nx)

    # --- HELPERS ---

    def _write(self, name: str, header: np.ndarray, body: np.ndarray) -> str:
        path = os.path.join(self.out_dir, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "wb") as f:
            f.write(header.tobytes())
            f.write(np.ascontiguousarray(body).tobytes())
        logger.debug(f"[{self.__class__.__name__}] {name}: {os.path.getsize(path)} bytes")
        return path
