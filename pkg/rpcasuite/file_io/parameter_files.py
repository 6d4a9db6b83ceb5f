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
JSON parameter files and CSV reports.
"""
import json
import logging
import pathlib
from dataclasses import dataclass
from typing import Union

import pandas as pd

from rpcasuite.learning.activations import (
    RAW_NAMES,
    RawParams,
    ThresholdScale,
    activate,
    invert_activation,
)
from rpcasuite.solver.hyperparameters import HyperParams
from rpcasuite.utils.exceptions import ConfigurationError, DegenerateInputError

log = logging.getLogger(__name__)

PathLike = Union[str, pathlib.Path]
CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class ParameterFile:
    """Contents of a parameter file."""

    raw: RawParams
    hyper_parameters: HyperParams
    scale: ThresholdScale


def write_json(content: dict, path: PathLike):
    """Write a JSON object with two-space indentation and a trailing newline."""
    pathlib.Path(path).write_text(json.dumps(content, indent=2) + "\n")
    log.debug(f"Wrote {path}")


def save_parameters(
    path: PathLike, raw: RawParams, scale: ThresholdScale = ThresholdScale()
) -> HyperParams:
    """
    Write raw parameters and their activation under the given scale.

    Parameters
    ----------
    path : str or pathlib.Path
            Destination JSON file.
    raw : RawParams
            Parameters to store.
    scale : ThresholdScale
            Scale the stored hyperparameters were activated with. Only the raw
            values are read back by the solver commands; they rescale the
            thresholds with the linf-norm of each observation they solve. Parameters
            trained on many instances are stored with the unit scale.

    Returns
    -------
    HyperParams
            The activated values written next to the raw ones.
    """
    hyper_parameters = activate(raw, scale)
    content = hyper_parameters.as_dict()
    content["raw"] = raw.as_dict()
    content["scale"] = scale.as_dict()
    write_json(content, path)
    log.debug(f"Wrote parameters {hyper_parameters} to {path}")
    return hyper_parameters


def _load_scale(path: pathlib.Path, values) -> ThresholdScale:
    if not isinstance(values, dict):
        raise ConfigurationError(f"The scale in {path} must be a JSON object")
    unknown = set(values) - {"s0", "s1"}
    if unknown:
        raise ConfigurationError(f"{path} has unknown scale entries {sorted(unknown)}")
    try:
        return ThresholdScale(**{key: float(value) for key, value in values.items()})
    except (TypeError, ValueError, DegenerateInputError) as err:
        raise ConfigurationError(f"{path} holds an invalid scale: {err}") from err


def load_parameters(path: PathLike) -> ParameterFile:
    """
    Read a parameter file.

    Files holding only (zeta0, zeta1, rho, eta) are accepted as well; their raw
    values are recovered by inverting the activation under the stored scale, or
    under the unit scale if none is given.
    """
    path = pathlib.Path(path)
    try:
        content = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"{path} is not valid JSON: {err}") from err
    if not isinstance(content, dict):
        raise ConfigurationError(f"{path} must hold a JSON object")

    scale = _load_scale(path, content.get("scale", {}))
    if "raw" in content:
        raw_values = content["raw"]
        missing = set(RAW_NAMES) - set(raw_values)
        if missing:
            raise ConfigurationError(f"{path} lacks raw parameters {sorted(missing)}")
        raw = RawParams(**{name: float(raw_values[name]) for name in RAW_NAMES})
        return ParameterFile(raw, activate(raw, scale), scale)

    try:
        hyper_parameters = HyperParams(
            **{name: float(content[name]) for name in ("zeta0", "zeta1", "rho", "eta")}
        )
    except KeyError as err:
        raise ConfigurationError(f"{path} lacks the hyperparameter {err}") from err
    return ParameterFile(
        invert_activation(hyper_parameters, scale), hyper_parameters, scale
    )


def write_csv(frame: pd.DataFrame, path: PathLike, index: bool = False):
    """
    Write a report with 17 significant digits so that floats survive the round trip.
    """
    frame.to_csv(path, index=index, float_format=CSV_FLOAT_FORMAT)
    log.debug(f"Wrote {len(frame)} rows to {path}")
