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
from .instance import (
    InstanceMeta,
    RpcaInstance,
    SparsityKind,
    SparsityModel,
    mask_from_support,
)
from .synthetic import (
    gen_instance,
    gen_low_rank,
    gen_sparse,
    make_generator,
    random_orthonormal,
    superdiagonal_core,
)

__all__ = [
    "InstanceMeta",
    "RpcaInstance",
    "SparsityKind",
    "SparsityModel",
    "mask_from_support",
    "gen_instance",
    "gen_low_rank",
    "gen_sparse",
    "make_generator",
    "random_orthonormal",
    "superdiagonal_core",
]
