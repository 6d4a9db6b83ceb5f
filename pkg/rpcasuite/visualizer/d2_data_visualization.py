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
Line plots of solver traces and training logs.
"""
import pathlib
from typing import List, Union

import numpy as np
from bokeh.io import output_file, output_notebook, save
from bokeh.layouts import gridplot
from bokeh.models import HoverTool
from bokeh.plotting import figure, show

from rpcasuite.utils import config


class DataVisualizer2D:
    """
    Visualizer for two-dimensional data.
    """

    def __init__(self, title: str, path: pathlib.Path):
        """
        Constructor for the data visualizer.

        Parameters
        ----------
        title : str
                title of the plot.
        path : pathlib.Path
                path to the saving directory of the plot
        """
        self.path = pathlib.Path(path) / f"{title}.html"
        if config.jupyter:
            output_notebook()
        else:
            output_file(str(self.path), title=title)

    def construct_plot(
        self,
        x_data: Union[list, np.ndarray],
        y_data: Union[list, np.ndarray],
        x_label: str,
        y_label: str,
        title: str,
        log_scale: bool = True,
    ) -> figure:
        """
        Generate a plot.

        Parameters
        ----------
        x_data : Union[list, np.ndarray]
                data to plot along the x axis.
        y_data : Union[list, np.ndarray]
                data to plot along the y axis; non-finite points are dropped.
        x_label : str
                label for the x axis
        y_label : str
                label of the y axis.
        title : str
                name of the specific plot.
        log_scale : bool
                Use a logarithmic y axis.

        Returns
        -------
        figure : figure
                A bokeh figure object.
        """
        x_data = np.asarray(x_data, dtype=np.float64)
        y_data = np.asarray(y_data, dtype=np.float64)
        keep = np.isfinite(y_data)
        if log_scale:
            keep &= y_data > 0
        fig = figure(
            x_axis_label=x_label,
            y_axis_label=y_label,
            y_axis_type="log" if log_scale else "linear",
            sizing_mode=config.bokeh_sizing_mode,
        )
        fig.line(x_data[keep], y_data[keep], legend_label=title)
        fig.add_tools(HoverTool())

        return fig

    def grid_show(self, figures: List[figure]) -> pathlib.Path:
        """
        Display a list of figures in a grid, or save them outside notebooks.

        Returns
        -------
        pathlib.Path
                The HTML file written outside notebooks.
        """
        grid = gridplot(figures, ncols=3, sizing_mode="scale_both")
        if config.jupyter:
            show(grid)
        else:
            save(grid)
        return self.path


def plot_trace(trace, title: str, path: pathlib.Path) -> pathlib.Path:
    """
    Plot the self-supervised loss, the recovery error and the threshold per iteration.

    Parameters
    ----------
    trace : SolveTrace
            Trace returned by the solver.
    title : str
            Name of the HTML file.
    path : pathlib.Path
            Output directory.
    """
    visualizer = DataVisualizer2D(title, path)
    iterations = np.array([record.iteration for record in trace.records])
    figures = [
        visualizer.construct_plot(iterations, trace.losses, "iteration", "L_SSL", "loss"),
        visualizer.construct_plot(
            iterations, trace.thresholds, "iteration", "zeta_t", "threshold"
        ),
    ]
    if np.any(np.isfinite(trace.errors)):
        figures.append(
            visualizer.construct_plot(
                iterations, trace.errors, "iteration", "relative error", "error"
            )
        )
    return visualizer.grid_show(figures)


def plot_training(result, title: str, path: pathlib.Path) -> pathlib.Path:
    """
    Plot the training loss and the hyperparameters over the training steps.

    Parameters
    ----------
    result : TrainResult
            Result of a training run.
    title : str
            Name of the HTML file.
    path : pathlib.Path
            Output directory.
    """
    visualizer = DataVisualizer2D(title, path)
    frame = result.to_dataframe()
    figures = [
        visualizer.construct_plot(frame["step"], frame["loss"], "step", "loss", "loss")
    ]
    for name in ("zeta0", "zeta1", "rho", "eta"):
        figures.append(
            visualizer.construct_plot(
                frame["step"], frame[name], "step", name, name, log_scale=False
            )
        )
    return visualizer.grid_show(figures)
