"""Steiner ring augmentation solvers."""
