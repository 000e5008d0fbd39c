"""Collects one line per acceptance criterion for the terminal summary."""
LINES = {}
