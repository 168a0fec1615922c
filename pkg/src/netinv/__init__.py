"""Semantic network inventory for model-driven telemetry."""

__version__ = "0.1.0"
