"""
Micromode Lab

Generate heavy-tailed data, locate and certify posterior micromodes near
extreme observations, and simulate canonical and subsampling Zig-Zag
processes exactly to study their exit times.
"""

__version__ = "0.1.0"
__author__ = "Marco A. Escobar"
__email__ = "marcoaescobar@gmail.com"
