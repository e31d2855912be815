"""Graded linear/dependency calculus: checkers, evaluators and heap semantics."""
