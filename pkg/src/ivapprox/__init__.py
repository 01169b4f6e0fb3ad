"""Interval-valued function approximation with certified error bounds."""
