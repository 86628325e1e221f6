"""
grassmoment: torus actions and moment maps on G(n,2) and CP^N
"""

__version__ = "0.3.0"
