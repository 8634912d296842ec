"""Entanglement-assisted quantum convolutional encoders and serial turbo codes."""

__version__ = "0.1.0"
