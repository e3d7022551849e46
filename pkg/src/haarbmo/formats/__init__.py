"""
File formats: JSON documents and human-readable tables.
"""
