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
from .tensor_operations import (
    RankTriple,
    as_tensor3,
    fold,
    fro_norm,
    inner,
    kronecker,
    l1_norm,
    linf_norm,
    matricize,
    mode_product,
    multilinear_product,
)

__all__ = [
    "RankTriple",
    "as_tensor3",
    "fold",
    "fro_norm",
    "inner",
    "kronecker",
    "l1_norm",
    "linf_norm",
    "matricize",
    "mode_product",
    "multilinear_product",
]
