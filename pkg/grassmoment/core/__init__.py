"""
Core application modules
"""
