"""Workbench for the pi-calculus with mixed and separate choice."""
