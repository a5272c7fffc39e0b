"""Rank-one decompositions of integral quadratic forms, theta constants of
level ``q`` and the Weierstrass function checks that go with them."""

__version__ = "0.1.0"

from .intmat import lambda_value, minkowski_reduce  # noqa: E402

__all__ = ["__version__", "lambda_value", "minkowski_reduce"]
