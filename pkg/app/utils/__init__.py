"""
Exact rational linear algebra shared by the services.
"""
