"""Adversarial robustness of persistence bars via homological cuts."""
