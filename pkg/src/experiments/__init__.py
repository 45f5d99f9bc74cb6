"""Configured experiments, their statistics and the closed-form constants they compare against."""
