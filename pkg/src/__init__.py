"""
ERW Lab
Excited random walk simulation and exact-computation laboratory
"""

__version__ = "1.0.0"
