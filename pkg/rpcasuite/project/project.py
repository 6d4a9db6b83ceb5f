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
import contextlib
import json
import logging
from pathlib import Path
from typing import Union

from rpcasuite.database.run_database import RunDatabase
from rpcasuite.utils.report_computer_characteristics import Report

log = logging.getLogger(__name__)


class Project(RunDatabase):
    """Output directory of one or more runs.

    A project owns everything a command writes: reports, parameter files, plots,
    the run database with the cached grid cells and a debug log.

    .. code-block:: python

        project = rpcasuite.Project("results/grid")
        with project.record("phase-grid", arguments):
            ...

    Attributes
    ----------
    output_dir : Path
            Directory receiving all outputs.
    """

    def __init__(self, output_dir: Union[str, Path] = "./RPCASuite_Project"):
        """Project class constructor

        Parameters
        ----------
        output_dir : str or Path
                Directory for the outputs; created if it does not exist.
        """
        super().__init__(output_dir)
        self.output_dir = Path(output_dir)
        self._file_handler = None

        if self.output_dir.exists():
            self.attach_file_logger()
            log.info(f"Loading project in {self.output_dir}")
        else:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            self.attach_file_logger()
            log.info(f"Creating new project in {self.output_dir}")

        self.build_database()

    def attach_file_logger(self):
        """Attach a file logger for this project"""
        if self._file_handler is not None:
            return
        logger = logging.getLogger("rpcasuite")
        formatter = logging.Formatter(
            "%(asctime)s %(levelname)s (%(module)s): %(message)s"
        )
        channel = logging.FileHandler(self.output_dir / "rpcasuite.log")
        channel.setLevel(logging.DEBUG)
        channel.setFormatter(formatter)

        logger.addHandler(channel)
        # the package logger filters at INFO otherwise
        logger.setLevel(logging.DEBUG)
        self._file_handler = channel

    def detach_file_logger(self):
        """Remove and close the file logger of this project."""
        if self._file_handler is None:
            return
        logger = logging.getLogger("rpcasuite")
        logger.removeHandler(self._file_handler)
        self._file_handler.close()
        self._file_handler = None

    def path(self, name: str) -> Path:
        """Location of an output file inside the project."""
        return self.output_dir / name

    def echo_config(self, resolved: dict) -> Path:
        """Write the resolved run configuration for provenance."""
        target = self.path("resolved_config.json")
        target.write_text(json.dumps(resolved, indent=2, sort_keys=True) + "\n")
        return target

    def write_environment_report(self) -> Path:
        """Write the package versions and machine characteristics."""
        target = self.path("environment.txt")
        target.write_text(f"{Report()}\n")
        return target

    @contextlib.contextmanager
    def record(self, command: str, arguments: dict):
        """
        Record a run in the project database.

        The yielded dictionary collects the outputs of the run; the run is stored
        as failed if the block raises.
        """
        run_id = self.start_run(command, arguments)
        outputs = {}
        try:
            yield outputs
        except BaseException:
            self.finish_run(run_id, "failed", outputs)
            raise
        self.finish_run(run_id, "finished", outputs)
