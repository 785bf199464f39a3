"""
Logging, exceptions, document schemas and file helpers
"""
