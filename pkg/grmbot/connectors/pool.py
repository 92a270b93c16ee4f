"""
Process Pool Connector Module

This module provides the multiprocessing back-end. Shard tasks are plain
picklable tuples; workers rebuild their read-only tables from the task
parameters, so nothing mutable is shared between processes.
"""
import multiprocessing

from grmbot.utils.engine import ConnectorInterface


class Pool(ConnectorInterface):
    """Parallel execution of shard tasks on a multiprocessing pool."""

    def open_session(self, workers=None):
        """
        Starts a worker pool.

        Args:
            workers (int): Number of processes, defaults to the CPU count.

        Returns:
            multiprocessing.pool.Pool: The running pool.

        Raises:
            RuntimeError: If the pool cannot be started.
        """
        processes = workers or multiprocessing.cpu_count()
        try:
            return multiprocessing.Pool(processes=processes)
        except Exception as e:
            raise RuntimeError(f"Failed to start process pool: {e}") from e

    def execute_command(self, session, function, tasks):
        """
        Maps function over tasks on the pool, preserving task order.

        Args:
            session: The pool returned by open_session.
            function (callable): Module-level function applied to each task.
            tasks (iterable): Picklable task arguments.

        Returns:
            list: Results in task order.
        """
        try:
            return session.map(function, list(tasks), chunksize=1)
        except Exception as e:
            raise RuntimeError(f"Pool execution failed: {e}") from e

    def close_session(self, session):
        session.close()
        session.join()
