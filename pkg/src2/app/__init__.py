"""
SPM Bandit Simulator - Main Application Package.

This package contains all application logic:
- config/        - Process settings (SPM_THREADS, output dir, logging, telemetry)
- solvers/       - Coordinate potentials and the simplex FTRL solver
- learners/      - SPM learners, the EXP3 baseline and the learner registry
- memory/        - Per-arm loss reservoirs (pluggable store)
- environments/  - Oblivious loss generators, metrics and lower-bound instances
- oracles/       - Reference solvers and numerical lemma checks
- harness/       - Experiment runner, regret accounting, artifacts and CLI
- models/        - Pydantic schemas and value types
- observability/ - OpenTelemetry setup
"""
