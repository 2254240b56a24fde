"""
SPM Bandit Simulator - Entry Point

This is the sole executable. Logging, telemetry, the optional debugger and
the learner registry are wired here before the CLI dispatches.

    python src2/main.py run --config experiments/stochastic.json
    python src2/main.py verify
    python src2/main.py --help

TO DEBUG:
1. Set SPM_DEBUG_PORT=5678 in .env; the process waits for a debugger to attach
   (VS Code: "Python: Remote Attach" to localhost:5678)
2. Run with `--threads 1` so replications stay in-process
3. Break in ReplicationRunner.advance (app/harness/runner.py) and step into
   learner.begin_round / learner.observe to trace one round

WHAT TO LOOK AT:
1. Learner Discovery - default_registry() in app/learners/learner_registry.py
2. FTRL on the simplex - See app/solvers/simplex_solver.py
3. Learning-rate rule - See app/learners/spm_rules.py
4. Oblivious environments - See app/environments/
5. Structured I/O - See the pydantic models in app/models/
"""
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv
# Load .env from project root (parent of src2/)
PROJECT_ROOT = Path(__file__).parent.parent
load_dotenv(PROJECT_ROOT / ".env")

from app.config.settings import settings
from app.harness.cli import configure_logging, main as cli_main
from app.learners import default_registry
from app.observability import setup_telemetry


logger = logging.getLogger(__name__)


def attach_debugger(port: int | None) -> bool:
    """Listen for a debugpy client on localhost:port and block until it attaches."""
    if port is None:
        return False
    import debugpy

    debugpy.listen(("127.0.0.1", port))
    logger.info("[main] waiting for a debugger on 127.0.0.1:%d", port)
    debugpy.wait_for_client()
    return True


def main() -> int:
    configure_logging()
    setup_telemetry()
    attach_debugger(settings.debug_port)
    return cli_main(sys.argv[1:], default_registry())


if __name__ == "__main__":
    sys.exit(main())
