"""Test suite for The-Magician."""
