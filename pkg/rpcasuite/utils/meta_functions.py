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
import json
import logging
from functools import wraps
from time import time
from typing import Callable

import psutil

log = logging.getLogger(__name__)


def is_jsonable(x) -> bool:
    """
    Parameters
    ----------
    x: object
        Object to check, if it is json serializable.
    Returns
    -------
    bool: Whether the object was serializable or not.
    """
    try:
        json.dumps(x)
        return True
    except (TypeError, OverflowError, ValueError):
        return False


def get_machine_properties() -> dict:
    """
    Get the properties of the machine being used

    Returns
    -------
    machine_properties : dict
            Logical and physical CPU cores and the available memory in bytes.
    """
    return {
        "cpu": psutil.cpu_count(logical=True),
        "physical_cpu": psutil.cpu_count(logical=False),
        "memory": psutil.virtual_memory().available,
    }


def timeit(f: Callable) -> Callable:
    """
    Decorator to time the execution of a method.

    Parameters
    ----------
    f : Callable
            Function to be wrapped.

    Returns
    -------
    wrap : Callable
            Method wrapper for timing the method.
    """

    @wraps(f)
    def wrap(*args, **kw):
        ts = time()
        result = f(*args, **kw)
        te = time()
        log.info(f"function '{f.__name__}' took {(te - ts):.3f} s")

        return result

    return wrap
