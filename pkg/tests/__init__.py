"""
Test package for the extrinsic triples toolkit.
"""
