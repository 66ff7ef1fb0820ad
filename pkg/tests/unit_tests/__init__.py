"""Per-module tests for jordan_subdiff."""
