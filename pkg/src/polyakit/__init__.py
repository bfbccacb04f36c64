"""Exact enumeration, asymptotics, and sampling for Polya trees and their
Cayley-skeleton / repeated-forest decomposition."""

__version__ = "0.1.0"
