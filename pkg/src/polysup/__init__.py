"""Exact subdifferential calculus for pointwise suprema of polyhedral convex functions."""
