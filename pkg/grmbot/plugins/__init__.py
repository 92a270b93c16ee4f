"""
Plugins Package

This package provides data loading from CSV, JSON and YAML files and the
SQLite store for verification reports.
"""
