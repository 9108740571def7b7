"""
Utility modules shared by the crosscheck apps.

This package contains the exception hierarchy and the binary container framing.
"""
