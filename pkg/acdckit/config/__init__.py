"""
Overview:
    Some global configuration.
"""
