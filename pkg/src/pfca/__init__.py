"""Privacy-preserving formal concept analysis over homomorphically encrypted contexts."""

from .context import (
    Concept,
    ContextStats,
    FormalContext,
    derive_extent,
    derive_intent,
    enumerate_tem,
    enumerate_tia,
    generate_context,
    granular_concepts,
    is_concept,
    stats,
    validate_context,
)
from .engine import (
    DecryptionTranscript,
    Decryptor,
    EncryptedContext,
    PrivacyConcept,
    algorithm1_f_induced,
    algorithm2_g_induced,
    alpha_compare,
    encrypt_context,
    f_tilde,
    g_tilde,
    recover_concepts,
)
from .enums import Direction, Provenance, Purpose
from .formats import read_context, write_context
from .parallel import WorkerReport, parallel_enumerate
from .pipeline import run_pipeline, verify_theorem1
from .report import RunReport, StageTimings, read_report, write_report

__version__ = "0.1.0"

__all__ = [
    "Concept",
    "ContextStats",
    "DecryptionTranscript",
    "Decryptor",
    "Direction",
    "EncryptedContext",
    "FormalContext",
    "PrivacyConcept",
    "Provenance",
    "Purpose",
    "RunReport",
    "StageTimings",
    "WorkerReport",
    "algorithm1_f_induced",
    "algorithm2_g_induced",
    "alpha_compare",
    "derive_extent",
    "derive_intent",
    "encrypt_context",
    "enumerate_tem",
    "enumerate_tia",
    "f_tilde",
    "g_tilde",
    "generate_context",
    "granular_concepts",
    "is_concept",
    "parallel_enumerate",
    "read_context",
    "read_report",
    "recover_concepts",
    "run_pipeline",
    "stats",
    "validate_context",
    "verify_theorem1",
    "write_context",
    "write_report",
]
