"""Exact fusion-ring, Temperley-Lieb and Brauer-Picard workbench."""
