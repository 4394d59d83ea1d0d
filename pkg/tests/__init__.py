"""Test package for nonnormal."""
