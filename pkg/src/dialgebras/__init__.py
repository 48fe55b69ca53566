"""Polynomial identities for operations in free dialgebras and free nonassociative algebras."""

from __future__ import annotations

__version__ = "0.1.0"
