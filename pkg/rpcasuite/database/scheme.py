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
Tables of the run database: one row per CLI invocation and one per computed
phase-grid cell.
"""
import logging
from datetime import datetime

from sqlalchemy import Column, DateTime, Float, Integer, String
from sqlalchemy.orm import declarative_base

from .types import JSONEncodedDict, MutableDict

log = logging.getLogger(__name__)

Base = declarative_base()


class Run(Base):
    """
    One invocation of a command.

    Attributes
    ----------
    id : int
            Unique identifier of the row.
    command : str
            Subcommand name, e.g. "phase-grid".
    arguments : dict
            Resolved configuration of the run.
    status : str
            "running", "finished" or "failed".
    outputs : dict
            Files written by the run and a short summary.
    """

    __tablename__ = "runs"

    id = Column(Integer, primary_key=True)
    command = Column(String)
    arguments = Column(MutableDict.as_mutable(JSONEncodedDict))
    status = Column(String, default="running")
    started = Column(DateTime, default=datetime.now)
    finished = Column(DateTime, nullable=True)
    outputs = Column(MutableDict.as_mutable(JSONEncodedDict), nullable=True)

    def __repr__(self):
        return f"Run{self.id}_{self.command}_{self.status}"


class GridCell(Base):
    """
    Result of one (alpha, rank) cell of a phase grid.

    The arguments column holds everything the cell result depends on; a cell is
    reused only if its arguments match exactly.
    """

    __tablename__ = "grid_cells"

    id = Column(Integer, primary_key=True)
    method = Column(String)
    arguments = Column(MutableDict.as_mutable(JSONEncodedDict))
    alpha = Column(Float)
    rank = Column(Integer)
    mean_error = Column(Float)
    errors = Column(MutableDict.as_mutable(JSONEncodedDict))

    def __repr__(self):
        return f"{self.method}: alpha={self.alpha}, r={self.rank} -> {self.mean_error}"
