import logging
import sys
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .driver import IterationRecord, RunResult


class Reporter:
    """
    A class to report solver progress and log messages during a run.

    Parameters
    ----------
    name : str, optional
        Name of the underlying logger.
    level : int, optional
        Logging level for the logger and its console handler.

    Methods
    -------
    info(message: str) -> None:
        Log an info message.
    warning(message: str) -> None:
        Log a warning message.
    debug(message: str) -> None:
        Log a debug message.
    error(message: str) -> None:
        Log an error message.
    log_iteration(record: IterationRecord) -> None:
        Log the outcome of one solver iteration.
    report_run(result: RunResult) -> None:
        Report the summary of a finished run.
    """

    def __init__(self, name: str = "subdfo", level: int = logging.INFO):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)

        if not self.logger.handlers:
            console_handler = logging.StreamHandler(sys.stdout)
            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            )
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

        for handler in self.logger.handlers:
            handler.setLevel(level)

    def info(self, message: str) -> None:
        self.logger.info(message)

    def warning(self, message: str) -> None:
        self.logger.warning(message)

    def debug(self, message: str) -> None:
        self.logger.debug(message)

    def error(self, message: str) -> None:
        self.logger.error(message)

    def log_iteration(self, record: "IterationRecord") -> None:
        """
        Log the outcome of one solver iteration at DEBUG level.
        """
        if record.skipped:
            self.debug(
                f"k={record.k} skipped: delta {record.delta:.3e} -> {record.delta_next:.3e}"
            )
            return
        self.debug(
            f"k={record.k} f={record.f:.6e} -> {record.f_next:.6e} "
            f"via={record.accepted_via.value} delta={record.delta:.3e} "
            f"|gg|={record.gg_norm:.3e} p={record.subspace_dim} "
            f"evals={record.stencil_evals}+{record.inner_evals}+{record.safeguard_evals}"
        )

    def report_run(self, result: "RunResult") -> None:
        """
        Report the summary of a finished run.
        """
        self.info(f"Run finished with status {result.status.value}")
        self.info(f"f(x0): {result.f0:.6e}")
        self.info(f"f(x_fin): {result.f:.6e}")
        self.info(f"Function evaluations: {result.nf}")
        self.info(f"Iterations: {len(result.iterations)}")
        if result.failures:
            self.warning(f"Failed evaluations: {len(result.failures)}")
