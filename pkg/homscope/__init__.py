# homscope/__init__.py
"""Time-frequency Hong-Ou-Mandel simulation toolkit"""

__version__ = "0.1.0"
