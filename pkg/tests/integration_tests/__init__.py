"""CLI golden files and randomized end-to-end checks."""
