"""Chromatic Delaunay triangulations, filtrations and collapse checks."""

__version__ = "0.1.0"
