"""
Local Execution Connector Module

This module provides the in-process back-end: shard tasks run one after the
other in the calling process. It is the default for a single worker and the
reference against which the pool back-end is checked.
"""
from grmbot.utils.engine import ConnectorInterface


class Local(ConnectorInterface):
    """Sequential in-process execution of shard tasks."""

    def open_session(self, workers=1):
        """
        Opens a local session (no worker is started).

        Args:
            workers (int): Ignored, kept for interface compatibility.

        Returns:
            dict: A session dictionary describing the back-end.
        """
        return {"type": "local", "workers": 1}

    def execute_command(self, session, function, tasks):
        """
        Runs every task in order.

        Args:
            session (dict): The local session object.
            function (callable): Function applied to each task.
            tasks (iterable): Task arguments, one per call.

        Returns:
            list: Results in task order.

        Raises:
            RuntimeError: If a task fails.
        """
        results = []
        for index, task in enumerate(tasks):
            try:
                results.append(function(task))
            except Exception as e:
                raise RuntimeError(f"Task {index} failed: {e}") from e
        return results

    def close_session(self, session):
        # Nothing to release.
        pass
