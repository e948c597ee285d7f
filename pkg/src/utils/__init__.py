"""
Shared helpers: logging setup, run manifests, fingerprints and number formatting.
"""
