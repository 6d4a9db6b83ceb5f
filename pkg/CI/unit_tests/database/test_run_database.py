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
Test the run database.
"""
import numpy as np
import pytest

from rpcasuite.database import RunDatabase
from rpcasuite.database.run_database import conv_to_db


@pytest.fixture()
def database(tmp_path):
    database = RunDatabase(tmp_path)
    database.build_database()
    return database


def test_conv_to_db():
    converted = conv_to_db({"a": (1, 2), "b": {"c": np.float32}, 3: "x"})
    assert converted["a"] == [1, 2]
    assert isinstance(converted["b"]["c"], str)
    assert converted["3"] == "x"


def test_run_lifecycle(database):
    run_id = database.start_run("solve", {"solver": {"rank": (3, 3, 3)}})
    assert database.runs[0].status == "running"

    database.finish_run(run_id, outputs={"trace": "trace.csv"})
    run = database.runs[0]
    assert run.status == "finished"
    assert run.command == "solve"
    assert run.arguments == {"solver": {"rank": [3, 3, 3]}}
    assert run.outputs == {"trace": "trace.csv"}
    assert run.finished >= run.started


def test_finish_unknown_run(database):
    database.finish_run(42)
    assert database.runs == []


def test_cell_cache(database):
    """Cells are found only for identical arguments and replaced on save."""
    arguments = {"alpha": 0.2, "rank": 2, "n": 10, "trials": 2}
    assert database.get_cell("ssl-only", arguments) is None

    database.save_cell("ssl-only", arguments, 0.2, 2, [1e-3, np.inf], np.inf)
    cell = database.get_cell("ssl-only", dict(reversed(list(arguments.items()))))
    assert cell is not None
    assert cell.errors == {"errors": [1e-3, np.inf]}
    assert cell.mean_error == np.inf

    assert database.get_cell("baseline", arguments) is None
    assert database.get_cell("ssl-only", {**arguments, "trials": 3}) is None

    database.save_cell("ssl-only", arguments, 0.2, 2, [1e-4, 1e-4], 1e-4)
    cell = database.get_cell("ssl-only", arguments)
    assert cell.errors == {"errors": [1e-4, 1e-4]}
