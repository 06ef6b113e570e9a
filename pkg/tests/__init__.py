"""Tests package for ADAR."""
