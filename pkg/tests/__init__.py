"""Test package."""

