"""Tests for hyperelliptic class number statistics."""
