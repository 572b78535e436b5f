"""
Extrinsic Triples Toolkit
Quadratic extensions, weak extensions and embedded extrinsic symmetric spaces
"""

__version__ = "0.1.0"
__author__ = "Extrinsic Triples Team"
