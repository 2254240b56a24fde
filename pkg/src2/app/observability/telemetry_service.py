"""
TelemetryService - Traces and metrics for simulation runs.

================================================================================
OPENTELEMETRY (OTel) IN THIS SIMULATOR
================================================================================

1. TRACES (Spans)
   - experiment.run     one per `main.py run` / sweep point
   - replication.run    one per (horizon, replication), child of experiment.run
   - verify.lemma       one per lemma id checked by `main.py verify`

2. METRICS (Counters)
   - spm.rounds            rounds simulated
   - spm.replications      replications completed
   - spm.lemma_violations  violations found by verify

3. LOGS
   - ERROR logs are correlated with the active span through LoggingHandler

EXPORTERS:
   SPM_TELEMETRY=console  ConsoleSpanExporter / ConsoleMetricExporter (stdout)
   SPM_TELEMETRY=none     nothing is configured; the API hands out no-op
                          tracers and meters, so instrumented code runs unchanged

Replications running in worker processes see the no-op implementations;
their counters are added by the parent when results come back.
================================================================================
"""
import logging

from opentelemetry import metrics, trace
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import ConsoleMetricExporter, PeriodicExportingMetricReader
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

from ..config.settings import settings


logger = logging.getLogger(__name__)


def _console_providers(resource: Resource) -> tuple[TracerProvider, MeterProvider]:
    spans = TracerProvider(resource=resource)
    spans.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
    readings = MeterProvider(
        resource=resource,
        metric_readers=[PeriodicExportingMetricReader(ConsoleMetricExporter())],
    )
    return spans, readings


class TelemetryService:
    """Process-wide tracer, meter and spm.* counters. main.py calls setup() once."""

    def __init__(self) -> None:
        # until setup() runs, tracer and meter fall through to the API no-ops
        self._configured_tracer: trace.Tracer | None = None
        self._configured_meter: metrics.Meter | None = None
        self._counters: dict[str, metrics.Counter] = {}
        self.enabled = False

    def setup(self) -> None:
        """Wire console exporters when SPM_TELEMETRY=console; idempotent."""
        if self.enabled:
            return
        if settings.telemetry_exporter != "console":
            logger.debug("[telemetry] exporter is %r, spans and counters are no-ops", settings.telemetry_exporter)
            return

        logger.info("[telemetry] console exporters for %s (%s)", settings.app_name, settings.environment)
        spans, readings = _console_providers(
            Resource.create({"service.name": settings.app_name, "deployment.environment": settings.environment})
        )
        trace.set_tracer_provider(spans)
        metrics.set_meter_provider(readings)
        self._configured_tracer = trace.get_tracer("spm.simulator")
        self._configured_meter = metrics.get_meter("spm.simulator")
        self._counters.clear()
        self.enabled = True

        # ERROR records carry the active span context
        try:
            from opentelemetry.sdk._logs import LoggingHandler
        except ImportError as exc:
            logger.warning("[telemetry] log correlation unavailable: %s", exc)
        else:
            logging.getLogger().addHandler(LoggingHandler(level=logging.ERROR))

    @property
    def tracer(self) -> trace.Tracer:
        """
        with telemetry_service.tracer.start_as_current_span("replication.run") as span:
            span.set_attribute("spm.horizon", T)
        """
        return self._configured_tracer or trace.get_tracer("spm.simulator")

    @property
    def meter(self) -> metrics.Meter:
        return self._configured_meter or metrics.get_meter("spm.simulator")

    def count(self, name: str, amount: int, **attributes) -> None:
        """Add to one of the spm.* counters, creating it on first use."""
        counter = self._counters.get(name)
        if counter is None:
            counter = self.meter.create_counter(name)
            self._counters[name] = counter
        counter.add(amount, attributes)


telemetry_service = TelemetryService()


def setup_telemetry() -> None:
    telemetry_service.setup()
