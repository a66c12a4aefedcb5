from .auditor import ClaimAuditor, certified_pair_check, compare_to_sota, derive_claim_bound, summarize_defenses
from .loader import CertifiedPair, SurveyManifest, load_claims, load_manifest, load_sota

__all__ = [
    "CertifiedPair",
    "ClaimAuditor",
    "SurveyManifest",
    "certified_pair_check",
    "compare_to_sota",
    "derive_claim_bound",
    "load_claims",
    "load_manifest",
    "load_sota",
    "summarize_defenses",
]
