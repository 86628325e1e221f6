"""
Mathematical services
"""
