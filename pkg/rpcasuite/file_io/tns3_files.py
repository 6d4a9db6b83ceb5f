"""
RPCASuite: A Zincwarecode package.

License
-------
This program and the accompanying materials are made available under the terms
of the Eclipse Public License v2.0 which accompanies this distribution, and is
available at https://www.eclipse.org/legal/epl-v20.html

SPDX-License-Identifier: EPL-2.0

Copyright Contributors to the Zincwarecode Project.

Summary
-------
Binary tensor files.

Layout (little endian): magic b"TNS3", u32 version 1, three u64 dimensions, then
n1 * n2 * n3 float64 values in row-major order (third index fastest).
"""
import logging
import pathlib
import struct
from typing import Union

import numpy as np

from rpcasuite.file_io.file_read import TensorSource
from rpcasuite.solver.losses import validate_mask
from rpcasuite.tensor import as_tensor3
from rpcasuite.utils.exceptions import (
    BadMagicError,
    DataFormatError,
    NonFiniteDataError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)

log = logging.getLogger(__name__)

MAGIC = b"TNS3"
VERSION = 1
HEADER = struct.Struct("<4sI3Q")

PathLike = Union[str, pathlib.Path]


class Tns3File(TensorSource):
    """
    Reader of a TNS3 tensor file.
    """

    def __init__(self, path: PathLike):
        """
        Constructor for the TNS3 reader.

        Parameters
        ----------
        path : str or pathlib.Path
                Location of the file.
        """
        self.path = pathlib.Path(path)

    def __str__(self):
        return str(self.path.absolute())

    def _read(self) -> np.ndarray:
        data = self.path.read_bytes()
        if len(data) >= len(MAGIC) and data[: len(MAGIC)] != MAGIC:
            raise BadMagicError(f"{self.path} is not a TNS3 file")
        if len(data) < HEADER.size:
            raise TruncatedPayloadError(f"{self.path} ends inside the header")
        _, version, n1, n2, n3 = HEADER.unpack_from(data)
        if version != VERSION:
            raise UnsupportedVersionError(
                f"{self.path} has version {version}, only {VERSION} is supported"
            )
        dims = (n1, n2, n3)
        if min(dims) < 1:
            raise DataFormatError(f"{self.path} declares empty dimensions {dims}")
        expected = n1 * n2 * n3 * 8
        payload = data[HEADER.size :]
        if len(payload) < expected:
            raise TruncatedPayloadError(
                f"{self.path} holds {len(payload)} payload bytes, expected {expected}"
            )
        if len(payload) > expected:
            raise DataFormatError(f"{self.path} has trailing bytes after the payload")
        tensor = np.frombuffer(payload, dtype="<f8").reshape(dims).astype(np.float64)
        if not np.all(np.isfinite(tensor)):
            raise NonFiniteDataError(f"{self.path} contains NaN or Inf entries")
        log.debug(f"Read tensor of shape {dims} from {self.path}")
        return tensor


def read_tensor(path: PathLike) -> np.ndarray:
    """
    Read a TNS3 file.

    Parameters
    ----------
    path : str or pathlib.Path
            File to read.

    Returns
    -------
    tensor : np.ndarray
            Float64 tensor of the stored shape.
    """
    return Tns3File(path).tensor


def read_mask(path: PathLike) -> np.ndarray:
    """Read a TNS3 file and check that every entry is 0 or 1."""
    return validate_mask(read_tensor(path))


def write_tensor(path: PathLike, tensor: np.ndarray):
    """
    Write a tensor as TNS3 file.

    Parameters
    ----------
    path : str or pathlib.Path
            Destination; parent directories must exist.
    tensor : np.ndarray
            Finite third-order tensor.
    """
    tensor = as_tensor3(tensor, "tensor")
    header = HEADER.pack(MAGIC, VERSION, *tensor.shape)
    payload = tensor.astype("<f8").tobytes(order="C")
    pathlib.Path(path).write_bytes(header + payload)
    log.debug(f"Wrote tensor of shape {tensor.shape} to {path}")
