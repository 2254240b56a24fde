"""
Observability package - Telemetry, tracing, and metrics.

Exports:
- setup_telemetry: Call once at startup to initialize OpenTelemetry
- telemetry_service: Singleton for accessing tracer, meter and counters
"""
from .telemetry_service import setup_telemetry, telemetry_service

__all__ = ["setup_telemetry", "telemetry_service"]
