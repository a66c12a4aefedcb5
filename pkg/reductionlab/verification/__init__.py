from .loader import DEFAULT_PROFILES, PROPERTIES, SuiteProfile, load_profile, load_profiles

__all__ = ["DEFAULT_PROFILES", "PROPERTIES", "SuiteProfile", "load_profile", "load_profiles"]
