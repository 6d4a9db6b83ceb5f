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
How far fine tuning moves each hyperparameter away from a warm start.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.experiment.metrics import percent_change
from rpcasuite.learning.activations import RawParams, ThresholdScale, activate
from rpcasuite.learning.hyper_gradient import TrainConfig
from rpcasuite.learning.trainer import finetune
from rpcasuite.solver.hyperparameters import SolverConfig
from rpcasuite.solver.scaled_gd import solve
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import InvalidExperimentSpecError, NumericalFailure
from rpcasuite.utils.meta_functions import timeit

log = logging.getLogger(__name__)

PARAMETERS = ("zeta0", "zeta1", "rho", "eta")
QUARTILES = {"Q1": 25, "Q2": 50, "Q3": 75}
MIN_INSTANCES = 4
EMPTY_MARKER = "empty: no instance passed the reduction filter"


@dataclass
class SensitivityReport:
    """
    Result of :func:`sensitivity_report`.

    Attributes
    ----------
    instances : pd.DataFrame
            Per instance: percent change of every parameter, warm and tuned metric,
            reduction and whether the instance passed the filter.
    quartiles : pd.DataFrame
            Q1, Q2 and Q3 of the percent changes of the kept instances.
    status : str
            "ok", or the empty marker if no instance passed the filter.
    ordering_holds : bool or None
            Whether the median |change| of zeta1 exceeds that of rho.
    """

    instances: pd.DataFrame
    quartiles: pd.DataFrame
    status: str
    ordering_holds: Optional[bool]

    @property
    def empty(self) -> bool:
        return self.status != "ok"


def _reduction(warm: float, tuned: float) -> float:
    if warm == 0.0:
        return 0.0
    return 1.0 - tuned / warm


def _instance_row(
    index: int,
    instance: RpcaInstance,
    config: SolverConfig,
    warm: RawParams,
    train_config: TrainConfig,
) -> dict:
    scale = ThresholdScale.from_observation(instance.observation)
    warm_parameters = activate(warm, scale)
    warm_trace = solve(
        instance.observation, config, warm_parameters, ground_truth=instance.low_rank
    )
    result = finetune(instance, config, train_config, warm=warm)

    if instance.low_rank is not None:
        metric, warm_metric = "error", warm_trace.final_error
        tuned_metric = result.trace.final_error
    else:
        metric, warm_metric = "ssl", warm_trace.final_loss
        tuned_metric = result.trace.final_loss

    row = {"instance": index}
    for name in PARAMETERS:
        row[name] = percent_change(
            getattr(warm_parameters, name), getattr(result.hyper_parameters, name)
        )
    row.update(
        {
            "metric": metric,
            "warm": warm_metric,
            "tuned": tuned_metric,
            "reduction": _reduction(warm_metric, tuned_metric),
        }
    )
    return row


@timeit
def sensitivity_report(
    instances: Sequence[RpcaInstance],
    config: SolverConfig,
    warm: RawParams,
    train_config: Optional[TrainConfig] = None,
    min_reduction: Optional[float] = 0.9,
) -> SensitivityReport:
    """
    Fine tune every instance from a warm start and summarize the parameter changes.

    Parameters
    ----------
    instances : sequence of RpcaInstance
            At least four instances.
    config : SolverConfig
            Unrolled solver settings.
    warm : RawParams
            Warm start, typically from supervised training.
    train_config : TrainConfig, optional
            Fine tuning settings, by default :meth:`TrainConfig.finetune_defaults`.
    min_reduction : float or None
            Keep only instances whose recovery error (or self-supervised loss, if
            there is no ground truth) dropped by more than this fraction. None
            keeps every instance.

    Returns
    -------
    SensitivityReport
    """
    instances = list(instances)
    if len(instances) < MIN_INSTANCES:
        raise InvalidExperimentSpecError(
            f"The sensitivity report needs at least {MIN_INSTANCES} instances,"
            f" got {len(instances)}"
        )
    if train_config is None:
        train_config = TrainConfig.finetune_defaults()

    rows: List[dict] = []
    for index, instance in enumerate(
        tqdm(
            instances,
            ncols=70,
            desc="Sensitivity",
            disable=not runtime_config.progress_bars,
        )
    ):
        try:
            rows.append(_instance_row(index, instance, config, warm, train_config))
        except NumericalFailure as err:
            log.warning(f"Instance {index} excluded from the sensitivity report: {err}")

    frame = pd.DataFrame(
        rows,
        columns=["instance", *PARAMETERS, "metric", "warm", "tuned", "reduction"],
    )
    if min_reduction is None:
        frame["kept"] = True
    else:
        frame["kept"] = frame["reduction"] > min_reduction
    kept = frame[frame["kept"]]

    if len(kept) == 0:
        quartiles = pd.DataFrame(
            np.nan, index=list(QUARTILES), columns=list(PARAMETERS)
        )
        quartiles["status"] = EMPTY_MARKER
        log.warning(f"Sensitivity report is {EMPTY_MARKER}")
        return SensitivityReport(frame, quartiles, EMPTY_MARKER, None)

    quartiles = pd.DataFrame(
        {
            name: np.percentile(kept[name].to_numpy(), list(QUARTILES.values()))
            for name in PARAMETERS
        },
        index=list(QUARTILES),
    )
    quartiles["status"] = "ok"

    zeta1_median = float(np.median(np.abs(kept["zeta1"])))
    rho_median = float(np.median(np.abs(kept["rho"])))
    ordering_holds = zeta1_median > rho_median
    if not ordering_holds:
        log.warning(
            f"Median |change| of zeta1 ({zeta1_median:.3g} %) does not exceed that of"
            f" rho ({rho_median:.3g} %)"
        )
    log.info(f"Sensitivity report over {len(kept)} of {len(frame)} instances")
    return SensitivityReport(frame, quartiles, "ok", ordering_holds)
