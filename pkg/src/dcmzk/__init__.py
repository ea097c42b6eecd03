"""Perfect zero-knowledge proofs for double coset membership in permutation groups."""

from .dcm import DcmInstance, Factorization, dcm_decide, dcm_factorize, normalize
from .formats import format_instance, instance_digest, parse_instance
from .permgroup import BSGS, GeneratorSet, Permutation, compose, contains, inverse, schreier_sims, uniform_sample
from .protocol import (
    ProverWitness,
    Transcript,
    VerifierStrategy,
    View,
    adversary_zoo,
    optimal_cheating_prover,
    run_atomic,
    run_parallel,
    run_sequential,
)
from .randomness import RandomSource
from .simulator import exact_view_distribution, simulate_atomic_honest, simulate_sequential

__all__ = [
    "BSGS",
    "DcmInstance",
    "Factorization",
    "GeneratorSet",
    "Permutation",
    "ProverWitness",
    "RandomSource",
    "Transcript",
    "VerifierStrategy",
    "View",
    "adversary_zoo",
    "compose",
    "contains",
    "dcm_decide",
    "dcm_factorize",
    "exact_view_distribution",
    "format_instance",
    "instance_digest",
    "inverse",
    "normalize",
    "optimal_cheating_prover",
    "parse_instance",
    "run_atomic",
    "run_parallel",
    "run_sequential",
    "schreier_sims",
    "simulate_atomic_honest",
    "simulate_sequential",
    "uniform_sample",
]
