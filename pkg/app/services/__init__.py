"""
Algebraic and geometric services: Lie cores, extensions, geometry and reports.
"""
