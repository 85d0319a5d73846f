"""Locally nilpotent derivations in three variables: exact construction and certification."""
