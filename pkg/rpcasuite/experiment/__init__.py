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
"""
from .comparison import EfficiencyResult, ParityResult, efficiency, masked_parity
from .metrics import masked_error, percent_change, relative_error
from .phase_grid import CellResult, ExperimentSpec, GridReport, Method, phase_grid
from .sensitivity import SensitivityReport, sensitivity_report

__all__ = [
    "EfficiencyResult",
    "ParityResult",
    "efficiency",
    "masked_parity",
    "masked_error",
    "percent_change",
    "relative_error",
    "CellResult",
    "ExperimentSpec",
    "GridReport",
    "Method",
    "phase_grid",
    "SensitivityReport",
    "sensitivity_report",
]
