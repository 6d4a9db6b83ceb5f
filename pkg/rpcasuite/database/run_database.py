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
Run bookkeeping and the phase-grid cell cache.
"""
from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence, Union

from rpcasuite.utils.meta_functions import is_jsonable

from . import scheme as db
from .database_base import DatabaseBase

log = logging.getLogger(__name__)


def conv_to_db(arguments: dict) -> dict:
    """Convert the given arguments to something that can be stored in the database"""
    converted = {}
    for key, val in arguments.items():
        if isinstance(val, dict):
            val = conv_to_db(val)
        elif isinstance(val, tuple):
            val = list(val)
        if not is_jsonable(val):
            val = str(val)
        converted[str(key)] = val
    return converted


class RunDatabase(DatabaseBase):
    """
    Database of one output directory.
    """

    def __init__(self, storage_path: Union[str, Path]):
        super().__init__(storage_path, database_name="rpcasuite.db")

    @property
    def runs(self) -> List[db.Run]:
        with self.session as ses:
            return ses.query(db.Run).order_by(db.Run.id).all()

    def start_run(self, command: str, arguments: dict) -> int:
        """
        Record the start of a command.

        Returns
        -------
        run_id : int
                Identifier to pass to :meth:`finish_run`.
        """
        with self.session as ses:
            run = db.Run(command=command, arguments=conv_to_db(arguments))
            ses.add(run)
            ses.commit()
            run_id = run.id
        log.debug(f"Started run {run_id} ({command})")
        return run_id

    def finish_run(self, run_id: int, status: str = "finished", outputs: dict = None):
        """Mark a run as done and store its outputs."""
        with self.session as ses:
            run = ses.get(db.Run, run_id)
            if run is None:
                log.warning(f"Run {run_id} does not exist, nothing to finish")
                return
            run.status = status
            run.finished = datetime.now()
            run.outputs = conv_to_db(outputs or {})
            ses.commit()

    def get_cell(self, method: str, arguments: dict) -> Optional[db.GridCell]:
        """
        Look up a stored grid cell.

        Parameters
        ----------
        method : str
                Experiment method of the cell.
        arguments : dict
                Everything the cell result depends on.

        Returns
        -------
        GridCell or None
                The stored cell if one with identical arguments exists.
        """
        with self.session as ses:
            cells = (
                ses.query(db.GridCell)
                .filter(
                    db.GridCell.method == method,
                    db.GridCell.arguments == conv_to_db(arguments),
                )
                .all()
            )
        if len(cells) > 1:
            log.warning(
                "Something went wrong! Found more than one grid cell with the"
                " given arguments!"
            )
        if cells:
            log.debug(f"Cell {method} {arguments} already computed, loading it")
            return cells[0]
        return None

    def save_cell(
        self,
        method: str,
        arguments: dict,
        alpha: float,
        rank: int,
        errors: Sequence[float],
        mean_error: float,
    ):
        """Store the trial errors of a computed grid cell, replacing older copies."""
        with self.session as ses:
            stale = ses.query(db.GridCell).filter(
                db.GridCell.method == method,
                db.GridCell.arguments == conv_to_db(arguments),
            )
            for cell in stale.all():
                ses.delete(cell)
            ses.add(
                db.GridCell(
                    method=method,
                    arguments=conv_to_db(arguments),
                    alpha=float(alpha),
                    rank=int(rank),
                    mean_error=float(mean_error),
                    errors={"errors": [float(item) for item in errors]},
                )
            )
            ses.commit()
