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
Phase-grid heatmaps rendered as deterministic SVG.
"""
import logging
import pathlib
from typing import Sequence, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

log = logging.getLogger(__name__)

COLOR_STEPS = 256


def render_heatmap(
    values: np.ndarray,
    alphas: Sequence[float],
    ranks: Sequence[int],
    path: Union[str, pathlib.Path],
    title: str = "log10 mean relative error",
) -> pathlib.Path:
    """
    Write a heatmap of a phase grid.

    Parameters
    ----------
    values : np.ndarray
            Matrix of shape (len(alphas), len(ranks)); non-finite cells (failed
            recoveries) are drawn black.
    alphas : sequence of float
            Row labels.
    ranks : sequence of int
            Column labels.
    path : str or pathlib.Path
            Destination SVG file.
    title : str
            Colour bar label.

    Returns
    -------
    pathlib.Path
            The written file. Identical inputs give byte-identical files.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (len(alphas), len(ranks)):
        raise ValueError(
            f"Heatmap values of shape {values.shape} do not match the"
            f" {len(alphas)} x {len(ranks)} grid"
        )
    path = pathlib.Path(path)
    colormap = matplotlib.colormaps["viridis"].resampled(COLOR_STEPS)
    colormap = colormap.with_extremes(bad="black")

    with matplotlib.rc_context({"svg.hashsalt": "rpcasuite", "svg.fonttype": "none"}):
        fig = Figure(figsize=(1.0 + 0.8 * len(ranks), 1.0 + 0.6 * len(alphas)))
        ax = fig.add_subplot()
        image = ax.imshow(
            np.ma.masked_invalid(values),
            cmap=colormap,
            origin="lower",
            aspect="auto",
            interpolation="nearest",
        )
        ax.set_xticks(np.arange(len(ranks)))
        ax.set_xticklabels([str(rank) for rank in ranks])
        ax.set_yticks(np.arange(len(alphas)))
        ax.set_yticklabels([f"{alpha:g}" for alpha in alphas])
        ax.set_xlabel("rank r")
        ax.set_ylabel("sparsity alpha")
        fig.colorbar(image, ax=ax, label=title)
        fig.savefig(path, format="svg", metadata={"Date": None})
    log.debug(f"Wrote heatmap {path}")
    return path
