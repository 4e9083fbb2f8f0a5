"""Orders generated by character values of finite groups."""
__version__ = "0.1.0"
