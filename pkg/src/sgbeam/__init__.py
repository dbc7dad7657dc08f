"""Differential quadrature element for second strain gradient Euler-Bernoulli beams."""

__version__ = "0.1.0"
