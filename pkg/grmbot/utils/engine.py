"""
MIT License

Copyright (c) 2024 Thibault SCIRE

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

import copy
import importlib
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Union


class ConnectorInterface(ABC):
    """Execution back-end running independent shard tasks."""

    @abstractmethod
    def open_session(self, workers: int = 1):
        pass

    @abstractmethod
    def execute_command(self, session, function: Callable, tasks: Iterable) -> List[Any]:
        pass

    @abstractmethod
    def close_session(self, session):
        pass


class ComponentMeta(type):
    def __new__(cls, name, bases, dct):
        return super().__new__(cls, name, bases, dct)


class ComponentGroup:
    def __init__(self, name):
        self.name = name


class ComponentBase:
    def __init__(self):
        self._grmbot = None

    def set_grmbot_instance(self, grmbot_instance):
        self._grmbot = grmbot_instance

    def field(self, alias: Optional[str] = None):
        """Return the field registered under alias, or the current one."""
        if self._grmbot is None:
            raise RuntimeError("No Grmbot instance available")
        return self._grmbot._cache.fields.get(alias)


class ComponentLoader:
    @staticmethod
    def discover_all_components(grmbot_file_path, component_type):
        components_dir = Path(grmbot_file_path).parent / component_type
        available_components = []

        def scan_directory(directory, prefix=""):
            if not directory.exists():
                return

            for item in sorted(directory.iterdir()):
                if (
                    item.is_file()
                    and item.suffix == ".py"
                    and item.name != "__init__.py"
                ):
                    component_path = f"{prefix}.{item.stem}" if prefix else item.stem
                    available_components.append(component_path)
                elif (
                    item.is_dir()
                    and not item.name.startswith((".", "__"))
                ):
                    new_prefix = f"{prefix}.{item.name}" if prefix else item.name
                    scan_directory(item, new_prefix)

        scan_directory(components_dir)
        return available_components

    @staticmethod
    def load_components(grmbot_instance, component_list):
        for component_full_path in component_list:
            try:
                parts = component_full_path.split(".", 1)
                if len(parts) != 2:
                    raise ValueError(
                        f"Invalid component path format: {component_full_path}"
                    )

                component_type, component_path = parts

                full_import_path = f"grmbot.{component_type}.{component_path}"
                component_module = importlib.import_module(full_import_path)

                component_name = component_path.split(".")[-1]
                class_name = component_name.capitalize()

                if hasattr(component_module, class_name):
                    component_class = getattr(component_module, class_name)
                    component_instance = component_class()
                    ComponentLoader.create_hierarchy(
                        grmbot_instance, component_full_path, component_instance
                    )
                else:
                    raise AttributeError(
                        f"Class '{class_name}' not found in {full_import_path}"
                    )

            except ImportError as e:
                raise RuntimeError(
                    f"Unable to load component {component_full_path}: {e}"
                ) from e

    @staticmethod
    def create_hierarchy(grmbot_instance, component_full_path, component_instance):
        if hasattr(component_instance, "set_grmbot_instance"):
            component_instance.set_grmbot_instance(grmbot_instance)

        parts = component_full_path.split(".")
        current_obj = grmbot_instance

        for part in parts[:-1]:
            if not hasattr(current_obj, part):
                setattr(current_obj, part, ComponentGroup(part))
            current_obj = getattr(current_obj, part)

        setattr(current_obj, parts[-1], component_instance)


def get_connector(connector_name: str) -> ConnectorInterface:
    """
    Instantiate an execution back-end by name.

    Args:
        connector_name: Module name under grmbot.connectors ('local' or 'pool').

    Returns:
        An instance of the class named after the module.

    Raises:
        ImportError: If the connector module does not exist.
        AttributeError: If the module has no matching class.
    """
    module_name = f"grmbot.connectors.{connector_name.lower()}"
    class_name = connector_name.capitalize()
    try:
        connector = importlib.import_module(module_name)
    except ImportError as e:
        raise ImportError(f"Failed to import module '{module_name}': {e}") from e
    if not hasattr(connector, class_name):
        raise AttributeError(
            f"Module '{module_name}' does not have the class '{class_name}'"
        )
    return getattr(connector, class_name)()


def run_tasks(function: Callable, tasks: List[Any], workers: int = 1) -> List[Any]:
    """
    Run picklable tasks through the local or pool connector.

    Results come back in task order regardless of the back-end.
    """
    connector = get_connector("pool" if workers > 1 and len(tasks) > 1 else "local")
    session = connector.open_session(workers)
    try:
        return connector.execute_command(session, function, tasks)
    finally:
        connector.close_session(session)


class Cache:
    def __init__(self, no_current_error: str = "No current field."):
        self.results = ResultsManager()
        self.fields = FieldsManager(no_current_error)

    def empty_cache(self) -> None:
        self.fields.clear_all()
        self.results.clear_all()

    def __len__(self) -> int:
        return len(self.fields) + len(self.results)


class FieldsManager:
    """Alias-indexed registry of opened fields with a current selection."""

    def __init__(self, no_current_error: str = "No current field."):
        self._fields: Dict[int, Any] = {}
        self._aliases: Dict[str, int] = {}
        self._current_index: Optional[int] = None
        self._no_current_error = no_current_error

    def register(self, field: Any, alias: Optional[str] = None) -> int:
        index = self._get_next_index()
        self._fields[index] = field
        self._current_index = index

        if alias:
            self._aliases[alias] = index

        return index

    def switch(self, index_or_alias: Union[int, str]) -> Any:
        index = self._resolve_index(index_or_alias)
        if index not in self._fields:
            raise RuntimeError(f"Field with index '{index}' does not exist.")

        self._current_index = index
        return self._fields[index]

    def get(self, index_or_alias: Union[int, str, None] = None) -> Any:
        if index_or_alias is None:
            if self._current_index is None:
                raise RuntimeError(self._no_current_error)
            return self._fields[self._current_index]

        index = self._resolve_index(index_or_alias)
        if index not in self._fields:
            raise RuntimeError(f"Field with index '{index}' does not exist.")

        return self._fields[index]

    def clear(self, index_or_alias: Union[int, str]) -> None:
        index = self._resolve_index(index_or_alias)
        if index not in self._fields:
            raise RuntimeError(f"Field with index '{index}' does not exist.")

        del self._fields[index]
        self._aliases = {
            alias: idx for alias, idx in self._aliases.items() if idx != index
        }

        if self._current_index == index:
            self._current_index = None

    def clear_all(self) -> None:
        self._fields.clear()
        self._aliases.clear()
        self._current_index = None

    def _get_next_index(self) -> int:
        if not self._fields:
            return 1
        return max(self._fields.keys()) + 1

    def _resolve_index(self, index_or_alias: Union[int, str]) -> int:
        if isinstance(index_or_alias, int):
            return index_or_alias

        if isinstance(index_or_alias, str):
            if index_or_alias in self._aliases:
                return self._aliases[index_or_alias]
            try:
                return int(index_or_alias)
            except ValueError:
                raise ValueError(f"Alias '{index_or_alias}' does not exist.")

        raise ValueError(f"Invalid index or alias type: {type(index_or_alias)}")

    def __len__(self) -> int:
        return len(self._fields)


class ResultsManager:
    """Named store for intermediate results, addressable by dotted paths."""

    def __init__(self):
        self._results: Dict[str, Any] = {}

    def register(self, name: str, value: Any) -> None:
        self._results[name] = copy.deepcopy(value)

    def get(self, reference: str) -> Any:
        if "." not in reference:
            return copy.deepcopy(self._get_result(reference))

        name, field_path = reference.split(".", 1)
        current_value = self._get_result(name)
        for field in field_path.split("."):
            if isinstance(current_value, dict) and field in current_value:
                current_value = current_value[field]
            elif isinstance(current_value, list):
                try:
                    current_value = current_value[int(field)]
                except (ValueError, IndexError):
                    raise KeyError(f"Field '{field}' not found in result '{name}'")
            else:
                raise KeyError(f"Field '{field}' not found in result '{name}'")
        return copy.deepcopy(current_value)

    def clear(self, name: str) -> None:
        if name not in self._results:
            raise KeyError(f"Result '{name}' not found")
        del self._results[name]

    def clear_all(self) -> None:
        self._results.clear()

    def _get_result(self, name: str) -> Any:
        if name not in self._results:
            raise KeyError(f"Result '{name}' not found")
        return self._results[name]

    def __len__(self) -> int:
        return len(self._results)

    def __contains__(self, name: str) -> bool:
        return name in self._results
