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
from .file_read import TensorSource
from .frame_stack import FrameStack, read_frame_stack
from .parameter_files import (
    ParameterFile,
    load_parameters,
    save_parameters,
    write_csv,
    write_json,
)
from .tns3_files import Tns3File, read_mask, read_tensor, write_tensor

__all__ = [
    "TensorSource",
    "FrameStack",
    "read_frame_stack",
    "ParameterFile",
    "load_parameters",
    "save_parameters",
    "write_csv",
    "write_json",
    "Tns3File",
    "read_mask",
    "read_tensor",
    "write_tensor",
]
