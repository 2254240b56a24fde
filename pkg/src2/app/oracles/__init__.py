"""
Oracles package - independent references and numerical lemma checks.

Exports:
- brute_force_simplex_min / golden_section_two_arms: grid oracles for K <= 3
- reference_ftrl_solution: nested root-finding reference for any K
- check_lemma1 / check_lemma1_random: learning-rate lemma
- check_technical_inequalities: closed-form inequalities over sampled domains
- check_trajectory_lemmas: per-round assertions on captured learner runs
"""
from .brute_force import (
    brute_force_simplex_min,
    golden_section_two_arms,
    reference_ftrl_solution,
    reference_objective,
)
from .lemma_checks import (
    CLOSED_FORM_TOLERANCE,
    FILTERING_TOLERANCE,
    TRAJECTORY_TOLERANCE,
    check_lemma1,
    check_lemma1_random,
    check_technical_inequalities,
    check_trajectory_lemmas,
)

__all__ = [
    "CLOSED_FORM_TOLERANCE",
    "FILTERING_TOLERANCE",
    "TRAJECTORY_TOLERANCE",
    "brute_force_simplex_min",
    "check_lemma1",
    "check_lemma1_random",
    "check_technical_inequalities",
    "check_trajectory_lemmas",
    "golden_section_two_arms",
    "reference_ftrl_solution",
    "reference_objective",
]
