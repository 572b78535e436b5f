"""
Command-line subcommands. Each module registers its parsers and handlers.
"""
