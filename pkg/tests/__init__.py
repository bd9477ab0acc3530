"""Unit test package for micromode-lab."""
