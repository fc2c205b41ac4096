"""Truncated matrix moment problems on a compact interval."""
