"""Finite categories, model structures and their homotopy categories."""
