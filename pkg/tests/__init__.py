"""Tests for SDLC Agent System."""
