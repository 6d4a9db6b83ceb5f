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
Directory of grayscale PGM frames read as a (height, width, frames) tensor.
"""
import logging
import pathlib
from typing import List, Union

import cv2
import numpy as np

from rpcasuite.file_io.file_read import TensorSource
from rpcasuite.utils.exceptions import FrameStackError

log = logging.getLogger(__name__)


class FrameStack(TensorSource):
    """
    Stack of frames from one directory, ordered by file name.

    Attributes
    ----------
    directory : pathlib.Path
            Directory holding the frames.
    pattern : str
            Glob selecting the frame files.
    binarize : bool
            If true, every nonzero pixel becomes 1, e.g. for ground-truth masks.
    """

    def __init__(
        self,
        directory: Union[str, pathlib.Path],
        pattern: str = "*.pgm",
        binarize: bool = False,
    ):
        self.directory = pathlib.Path(directory)
        self.pattern = pattern
        self.binarize = binarize

    def __str__(self):
        return str((self.directory / self.pattern).absolute())

    @property
    def frame_files(self) -> List[pathlib.Path]:
        paths = self.directory.glob(self.pattern)
        return sorted(path for path in paths if path.is_file())

    def _read_frame(self, path: pathlib.Path) -> np.ndarray:
        frame = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
        if frame is None:
            raise FrameStackError(f"Could not decode {path}")
        if frame.ndim != 2:
            raise FrameStackError(
                f"{path} is not a grayscale frame (shape {frame.shape})"
            )
        return frame.astype(np.float64)

    def _read(self) -> np.ndarray:
        files = self.frame_files
        if len(files) == 0:
            raise FrameStackError(f"No frames matching {self} were found")

        frames = []
        for path in files:
            frame = self._read_frame(path)
            if frames and frame.shape != frames[0].shape:
                raise FrameStackError(
                    f"{path} has shape {frame.shape}, expected {frames[0].shape}"
                )
            frames.append(frame)

        tensor = np.stack(frames, axis=-1)
        if self.binarize:
            tensor = (tensor > 0).astype(np.float64)
        log.info(f"Stacked {len(frames)} frames into a tensor of shape {tensor.shape}")
        return np.ascontiguousarray(tensor)


def read_frame_stack(
    directory: Union[str, pathlib.Path], pattern: str = "*.pgm", binarize: bool = False
) -> np.ndarray:
    """
    Read a directory of PGM frames.

    Parameters
    ----------
    directory : str or pathlib.Path
            Directory of frames; files are taken in sorted name order.
    pattern : str
            Glob selecting the frames.
    binarize : bool
            Map every nonzero pixel to 1.

    Returns
    -------
    tensor : np.ndarray
            Float64 tensor of shape (height, width, frames).
    """
    return FrameStack(directory, pattern, binarize).tensor
