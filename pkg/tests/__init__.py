"""
Test package for haarbmo.
"""
