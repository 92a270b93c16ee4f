"""
Utilities Package

This package provides the component loader, execution back-end lookup and
caches, the grmbot exception hierarchy, and budget helpers.
"""
