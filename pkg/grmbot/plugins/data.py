"""
Data Plugin Module

This module loads polynomial files and parameter grids from CSV, JSON and YAML
files. Loaded data can be returned directly or registered in the Grmbot result
cache under a key.
"""
import csv
import json
from typing import Any, Dict, List, Optional

import yaml

from grmbot.modules.polyring import ReducedPoly, from_json
from grmbot.utils.engine import ComponentBase

GRID_KEYS = ("q", "m", "r")


def load_csv(path: str) -> List[Dict[str, str]]:
    """
    Read a CSV file into a list of row dictionaries.

    Raises:
        FileNotFoundError: If the file does not exist.
        RuntimeError: If the file cannot be parsed.
    """
    try:
        with open(path, mode="r", newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))
    except FileNotFoundError:
        raise FileNotFoundError(f"CSV file not found: {path}")
    except csv.Error as e:
        raise RuntimeError(f"Error reading CSV file: {path} - {e}") from e


def load_json(path: str) -> Any:
    try:
        with open(path, mode="r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise FileNotFoundError(f"JSON file not found: {path}")
    except json.JSONDecodeError as e:
        raise RuntimeError(f"Error decoding JSON file: {path} - {e}") from e


def load_yaml(path: str) -> Any:
    try:
        with open(path, mode="r", encoding="utf-8") as handle:
            return yaml.safe_load(handle)
    except FileNotFoundError:
        raise FileNotFoundError(f"YAML file not found: {path}")
    except yaml.YAMLError as e:
        raise RuntimeError(f"Error parsing YAML file: {path} - {e}") from e


def load_any(path: str) -> Any:
    """Dispatch on the file extension; anything else is read as YAML."""
    lowered = path.lower()
    if lowered.endswith(".csv"):
        return load_csv(path)
    if lowered.endswith(".json"):
        return load_json(path)
    return load_yaml(path)


def load_grid(path: str) -> List[Dict[str, int]]:
    """
    Read a list of (q, m, r) parameter rows.

    The file holds either a list of rows or a mapping with a "grid" list.
    Each row needs integer q, m and r columns; other columns are dropped.

    Raises:
        ValueError: If a row misses a column or holds a non-integer.
    """
    data = load_any(path)
    if isinstance(data, dict):
        data = data.get("grid", [])
    if not isinstance(data, list):
        raise ValueError(f"Grid file {path} must hold a list of rows")
    grid = []
    for index, row in enumerate(data):
        missing = [key for key in GRID_KEYS if key not in row]
        if missing:
            raise ValueError(f"Grid row {index} in {path} misses {', '.join(missing)}")
        try:
            grid.append({key: int(row[key]) for key in GRID_KEYS})
        except (TypeError, ValueError):
            raise ValueError(f"Grid row {index} in {path} holds a non-integer value")
    return grid


def load_polynomial(path: str) -> ReducedPoly:
    """Read a polynomial in the JSON layout written by the construct command."""
    data = load_any(path)
    if isinstance(data, dict) and "polynomial" in data:
        data = data["polynomial"]
    return from_json(data)


class Data(ComponentBase):
    """
    Data loader keywords.

    Each keyword returns the loaded data, or registers it in the result cache
    and returns "Imported" when a key is given.
    """

    def _register(self, data: Any, key: Optional[str]):
        if key is None:
            return data
        self._grmbot._cache.results.register(key, data)
        return "Imported"

    def csv(self, file: str, key: str = None):
        return self._register(load_csv(file), key)

    def json(self, file: str, key: str = None):
        return self._register(load_json(file), key)

    def yaml(self, file: str, key: str = None):
        return self._register(load_yaml(file), key)

    def grid(self, file: str, key: str = None):
        """Load a (q, m, r) parameter grid."""
        return self._register(load_grid(file), key)

    def polynomial(self, file: str, key: str = None):
        """Load a polynomial file; the cache keeps the ReducedPoly itself."""
        return self._register(load_polynomial(file), key)
